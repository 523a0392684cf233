#include "svrda/estimators.hpp"

namespace svrda {

DenseVector svrg_estimate(const SvrgAnchor& anchor, Index i,
                          const DenseVector& u, double q_i,
                          const CompositeProblem& p) {
  if (!(q_i > 0.0)) throw std::invalid_argument("svrg_estimate: q_i must be positive");
  const double s_u = p.grad_scalar(i, u);
  const double s_a = p.grad_scalar(i, anchor.point);
  const double w = 1.0 / (static_cast<double>(p.n()) * q_i);
  DenseVector g = anchor.full_grad;
  p.add_scaled_feature(i, (s_u - s_a) * w, g);
  return g;
}

SagaTable::SagaTable(const CompositeProblem& p, const DenseVector& x0,
                     SagaTableLayout layout)
    : prob_(&p), layout_(layout) {
  const Index n = p.n();
  margins_.resize(static_cast<std::size_t>(n));
  scalars_.resize(static_cast<std::size_t>(n));
  if (layout_ == SagaTableLayout::Dense) {
    rows_.resize(n, p.dim());
  }
  mean_grad_ = DenseVector::Zero(p.dim());
  for (Index i = 0; i < n; ++i) {
    const double m = p.margin(i, x0);
    const double s = p.grad_scalar_at_margin(i, m);
    margins_[static_cast<std::size_t>(i)] = m;
    scalars_[static_cast<std::size_t>(i)] = s;
    if (layout_ == SagaTableLayout::Dense) {
      DenseVector row = DenseVector::Zero(p.dim());
      p.add_scaled_feature(i, s, row);
      rows_.row(i) = row;
      mean_grad_ += row;
    } else {
      p.add_scaled_feature(i, s, mean_grad_);
    }
  }
  mean_grad_ *= 1.0 / static_cast<double>(n);
}

DenseVector SagaTable::estimate_and_update(Index i, const DenseVector& u) {
  const CompositeProblem& p = *prob_;
  const Index n = p.n();
  const double m_new = p.margin(i, u);
  const double s_new = p.grad_scalar_at_margin(i, m_new);
  const double s_old = scalars_[static_cast<std::size_t>(i)];
  const double delta = s_new - s_old;

  DenseVector g = mean_grad_;
  if (layout_ == SagaTableLayout::Dense) {
    DenseVector fresh = DenseVector::Zero(p.dim());
    p.add_scaled_feature(i, s_new, fresh);
    g += fresh - rows_.row(i).transpose();
    mean_grad_ += (fresh - rows_.row(i).transpose()) / static_cast<double>(n);
    rows_.row(i) = fresh;
  } else {
    p.add_scaled_feature(i, delta, g);
    p.add_scaled_feature(i, delta / static_cast<double>(n), mean_grad_);
  }
  margins_[static_cast<std::size_t>(i)] = m_new;
  scalars_[static_cast<std::size_t>(i)] = s_new;

  // Incremental updates drift; rebuild the mean from the table every n steps.
  if (++updates_since_refresh_ >= n) {
    mean_grad_ = recompute_mean();
    updates_since_refresh_ = 0;
  }
  return g;
}

DenseVector SagaTable::recompute_mean() const {
  const CompositeProblem& p = *prob_;
  DenseVector mean = DenseVector::Zero(p.dim());
  if (layout_ == SagaTableLayout::Dense) {
    for (Index i = 0; i < p.n(); ++i) mean += rows_.row(i).transpose();
  } else {
    for (Index i = 0; i < p.n(); ++i) {
      p.add_scaled_feature(i, scalars_[static_cast<std::size_t>(i)], mean);
    }
  }
  mean *= 1.0 / static_cast<double>(p.n());
  return mean;
}

}  // namespace svrda
