#ifndef SVRDA_ESTIMATORS_HPP
#define SVRDA_ESTIMATORS_HPP

#include "svrda/problem.hpp"

namespace svrda {

/// gbar_t = (1 - 1/t) gbar_{t-1} + (1/t) g_t, starting from gbar_0 = 0.
class RunningAverage {
 public:
  explicit RunningAverage(Index dim)
      : value_(DenseVector::Zero(dim)), count_(0) {}

  void push(const DenseVector& g) {
    count_ += 1;
    const double inv_t = 1.0 / static_cast<double>(count_);
    value_ = (1.0 - inv_t) * value_ + inv_t * g;
  }

  const DenseVector& value() const { return value_; }
  Index count() const { return count_; }

 private:
  DenseVector value_;
  Index count_;
};

/// Snapshot point with its cached full gradient.
struct SvrgAnchor {
  DenseVector point;
  DenseVector full_grad;

  /// Costs n gradient evaluations.
  static SvrgAnchor compute(const CompositeProblem& p, const DenseVector& x0) {
    return SvrgAnchor{x0, p.full_gradient(x0)};
  }
};

/// g = (grad f_i(u) - grad f_i(anchor)) / (n q_i) + grad F(anchor).
/// Costs 2 gradient evaluations per call.
DenseVector svrg_estimate(const SvrgAnchor& anchor, Index i,
                          const DenseVector& u, double q_i,
                          const CompositeProblem& p);

enum class SagaTableLayout {
  GlmScalar,  // one (margin, gradient scalar) pair per sample: O(n) memory
  Dense       // full gradient rows: O(n d) memory, loss-agnostic
};

/// SAGA gradient table: last-seen gradients phi_i and their running mean.
class SagaTable {
 public:
  /// Fills the table at x0; costs n gradient evaluations.
  SagaTable(const CompositeProblem& p, const DenseVector& x0,
            SagaTableLayout layout = SagaTableLayout::GlmScalar);

  /// Returns g = grad f_i(u) - grad f_i(phi_i) + mean, then replaces phi_i
  /// by u and folds the delta into the mean. Costs 1 fresh gradient
  /// evaluation (the old table gradient is stored).
  DenseVector estimate_and_update(Index i, const DenseVector& u);

  const DenseVector& running_mean_grad() const { return mean_grad_; }
  /// Recomputes the mean from the stored table entries (audit path).
  DenseVector recompute_mean() const;
  double stored_margin(Index i) const { return margins_[static_cast<std::size_t>(i)]; }
  SagaTableLayout layout() const { return layout_; }

 private:
  const CompositeProblem* prob_;
  SagaTableLayout layout_;
  std::vector<double> margins_;  // a_i^T phi_i
  std::vector<double> scalars_;  // GLM multiplier at phi_i
  Eigen::MatrixXd rows_;         // Dense layout only: row i = grad f_i(phi_i)
  DenseVector mean_grad_;
  Index updates_since_refresh_ = 0;
};

}  // namespace svrda

#endif
