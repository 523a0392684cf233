#ifndef SVRDA_PROBLEM_HPP
#define SVRDA_PROBLEM_HPP

#include <optional>
#include <vector>

#include "svrda/regularizer.hpp"
#include "svrda/types.hpp"

namespace svrda {

enum class SmoothLoss { SquaredError, Logistic };

// Samples with an all-zero feature row get their Lipschitz constant clamped
// to this floor so that the sampling distribution q_i = L_i / (n Lbar) stays
// a valid probability distribution.
inline constexpr double kLipschitzFloor = 1e-12;

/// log(1 + exp(z)) without overflow for large |z|.
inline double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

/// 1 / (1 + exp(z)) evaluated on the stable branch.
inline double inv_one_plus_exp(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double loss_value(SmoothLoss loss, const Sample& s, const DenseVector& x);
DenseVector loss_grad(SmoothLoss loss, const Sample& s, const DenseVector& x);
/// Smoothness constant before floor clamping: ||a||^2 (squared error),
/// ||a||^2 / 4 (logistic).
double lipschitz_constant(SmoothLoss loss, const Sample& s);

/// Per-feature affine reparametrization: effective feature j of a raw value r
/// is (r - mean_j) * inv_std_j. Lets normalized data keep its sparse storage;
/// gradient and margin routines fold the dense correction in analytically.
struct FeatureScaling {
  DenseVector mean;     // size d
  DenseVector inv_std;  // 0 for constant (flagged) columns
  DenseVector offset;   // c_j = mean_j * inv_std_j, precomputed
  double offset_sq = 0.0;

  static FeatureScaling from_mean_std(const DenseVector& mean,
                                      const DenseVector& std);
};

/// The composite objective P(x) = (1/n) sum_i f_i(x) + R(x).
class CompositeProblem {
 public:
  static CompositeProblem create(std::vector<Sample> samples, Index dim,
                                 SmoothLoss loss, Regularizer reg,
                                 std::optional<FeatureScaling> scaling = {});

  Index n() const { return static_cast<Index>(samples_.size()); }
  Index dim() const { return dim_; }
  SmoothLoss loss() const { return loss_; }
  const Regularizer& reg() const { return reg_; }
  double mu() const { return reg_.mu(); }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<double>& lipschitz() const { return lipschitz_; }
  double lbar() const { return lbar_; }
  double lmax() const { return lmax_; }
  bool scaled() const { return scaling_.has_value(); }

  /// Effective margin a_i^T x (with the feature scaling applied when present).
  double margin(Index i, const DenseVector& x) const;
  double sample_loss(Index i, const DenseVector& x) const;
  /// GLM gradient multiplier: grad f_i(x) = grad_scalar(i, x) * a_i.
  double grad_scalar(Index i, const DenseVector& x) const;
  double grad_scalar_at_margin(Index i, double margin) const;
  /// out += coef * a_i (effective features).
  void add_scaled_feature(Index i, double coef, DenseVector& out) const;
  DenseVector sample_grad(Index i, const DenseVector& x) const;

  /// F(x) = (1/n) sum_i f_i(x).
  double smooth_value(const DenseVector& x) const;
  /// grad F(x); costs n gradient evaluations.
  DenseVector full_gradient(const DenseVector& x) const;
  /// P(x) = F(x) + R(x).
  double objective(const DenseVector& x) const;
  double reg_value(const DenseVector& x) const { return reg_.value(x); }
  DenseVector prox(const DenseVector& y, double c) const {
    return reg_.prox(y, c);
  }

 private:
  CompositeProblem() = default;
  void check_dim(const DenseVector& x) const;

  std::vector<Sample> samples_;
  Index dim_ = 0;
  SmoothLoss loss_ = SmoothLoss::SquaredError;
  Regularizer reg_;
  std::optional<FeatureScaling> scaling_;
  std::vector<double> lipschitz_;
  double lbar_ = 0.0;
  double lmax_ = 0.0;
};

}  // namespace svrda

#endif
