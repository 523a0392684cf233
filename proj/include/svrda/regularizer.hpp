#ifndef SVRDA_REGULARIZER_HPP
#define SVRDA_REGULARIZER_HPP

#include "svrda/types.hpp"

namespace svrda {

enum class RegKind { None, L1, SquaredL2, ElasticNet };

/// sign(y) * max(|y| - thresh, 0); coordinates inside the dead zone come out
/// as exact 0.0, never as a tiny residue.
inline double soft_threshold(double y, double thresh) {
  if (y > thresh) return y - thresh;
  if (y < -thresh) return y + thresh;
  return 0.0;
}

/// R(x) = lambda1 ||x||_1 + (lambda2 / 2) ||x||_2^2.
/// Strong convexity modulus mu = lambda2 (0 for None/L1).
class Regularizer {
 public:
  Regularizer() : kind_(RegKind::None), lambda1_(0.0), lambda2_(0.0) {}

  static Regularizer none() { return Regularizer(); }
  static Regularizer l1(double lambda1) {
    return Regularizer(RegKind::L1, lambda1, 0.0);
  }
  static Regularizer squared_l2(double lambda2) {
    return Regularizer(RegKind::SquaredL2, 0.0, lambda2);
  }
  static Regularizer elastic_net(double lambda1, double lambda2) {
    return Regularizer(RegKind::ElasticNet, lambda1, lambda2);
  }

  RegKind kind() const { return kind_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double mu() const { return lambda2_; }

  double value(const DenseVector& x) const {
    double v = 0.0;
    if (lambda1_ > 0.0) v += lambda1_ * x.lpNorm<1>();
    if (lambda2_ > 0.0) v += 0.5 * lambda2_ * x.squaredNorm();
    return v;
  }

  /// argmin_x { (1/2)||x - y||^2 + c R(x) } for scale c > 0, coordinatewise.
  DenseVector prox(const DenseVector& y, double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("prox: scale must be positive");
    const double t1 = c * lambda1_;
    const double shrink = 1.0 / (1.0 + c * lambda2_);
    DenseVector out(y.size());
    for (Index j = 0; j < y.size(); ++j) {
      out[j] = soft_threshold(y[j], t1) * shrink;
    }
    return out;
  }

 private:
  Regularizer(RegKind kind, double lambda1, double lambda2)
      : kind_(kind), lambda1_(lambda1), lambda2_(lambda2) {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
      throw std::invalid_argument("regularizer weights must be nonnegative");
    }
  }

  RegKind kind_;
  double lambda1_;
  double lambda2_;
};

}  // namespace svrda

#endif
