#include "svrda/problem.hpp"

#include <cmath>

namespace svrda {

namespace {

void check_sample_dim(const Sample& s, const DenseVector& x) {
  if (!s.features.idx.empty() && s.features.idx.back() >= x.size()) {
    throw std::invalid_argument("sample feature index out of range for x");
  }
}

double glm_scalar(SmoothLoss loss, double margin, double label) {
  switch (loss) {
    case SmoothLoss::SquaredError:
      return margin - label;
    case SmoothLoss::Logistic:
      return -label * inv_one_plus_exp(label * margin);
  }
  return 0.0;
}

double glm_loss(SmoothLoss loss, double margin, double label) {
  switch (loss) {
    case SmoothLoss::SquaredError: {
      const double r = margin - label;
      return 0.5 * r * r;
    }
    case SmoothLoss::Logistic:
      return log1p_exp(-label * margin);
  }
  return 0.0;
}

}  // namespace

double loss_value(SmoothLoss loss, const Sample& s, const DenseVector& x) {
  check_sample_dim(s, x);
  return glm_loss(loss, s.features.dot(x), s.label);
}

DenseVector loss_grad(SmoothLoss loss, const Sample& s, const DenseVector& x) {
  check_sample_dim(s, x);
  const double g = glm_scalar(loss, s.features.dot(x), s.label);
  DenseVector out = DenseVector::Zero(x.size());
  s.features.add_scaled(g, out);
  return out;
}

double lipschitz_constant(SmoothLoss loss, const Sample& s) {
  const double sq = s.features.squared_norm();
  return loss == SmoothLoss::Logistic ? 0.25 * sq : sq;
}

FeatureScaling FeatureScaling::from_mean_std(const DenseVector& mean,
                                             const DenseVector& std) {
  FeatureScaling sc;
  sc.mean = mean;
  sc.inv_std = DenseVector::Zero(std.size());
  for (Index j = 0; j < std.size(); ++j) {
    sc.inv_std[j] = std[j] > 0.0 ? 1.0 / std[j] : 0.0;
  }
  sc.offset = mean.cwiseProduct(sc.inv_std);
  sc.offset_sq = sc.offset.squaredNorm();
  return sc;
}

CompositeProblem CompositeProblem::create(std::vector<Sample> samples,
                                          Index dim, SmoothLoss loss,
                                          Regularizer reg,
                                          std::optional<FeatureScaling> scaling) {
  if (samples.empty()) throw std::invalid_argument("problem needs n >= 1 samples");
  if (dim < 1) throw std::invalid_argument("problem needs dim >= 1");
  for (const Sample& s : samples) {
    Index prev = -1;
    for (std::size_t k = 0; k < s.features.idx.size(); ++k) {
      const Index j = s.features.idx[k];
      if (j <= prev || j >= dim) {
        throw std::invalid_argument("sample indices must be strictly increasing in [0, dim)");
      }
      if (!std::isfinite(s.features.val[k])) {
        throw std::invalid_argument("sample features must be finite");
      }
      prev = j;
    }
    if (!std::isfinite(s.label)) throw std::invalid_argument("sample labels must be finite");
    if (loss == SmoothLoss::Logistic && s.label != 1.0 && s.label != -1.0) {
      throw std::invalid_argument("logistic loss needs labels in {+1, -1}");
    }
  }
  if (scaling &&
      (scaling->mean.size() != dim || scaling->inv_std.size() != dim)) {
    throw std::invalid_argument("feature scaling has wrong dimension");
  }

  CompositeProblem p;
  p.samples_ = std::move(samples);
  p.dim_ = dim;
  p.loss_ = loss;
  p.reg_ = reg;
  p.scaling_ = std::move(scaling);

  const Index n = p.n();
  p.lipschitz_.resize(n);
  double sum = 0.0, mx = 0.0;
  for (Index i = 0; i < n; ++i) {
    double sq;
    if (p.scaling_) {
      // ||a_eff||^2 = sum_supp((r*inv)^2 - 2*(r*inv)*c) + ||c||^2
      const FeatureScaling& sc = *p.scaling_;
      double acc = sc.offset_sq;
      const SparseRow& row = p.samples_[i].features;
      for (std::size_t k = 0; k < row.idx.size(); ++k) {
        const Index j = row.idx[k];
        const double rv = row.val[k] * sc.inv_std[j];
        acc += rv * rv - 2.0 * rv * sc.offset[j];
      }
      sq = acc > 0.0 ? acc : 0.0;
    } else {
      sq = p.samples_[i].features.squared_norm();
    }
    double li = p.loss_ == SmoothLoss::Logistic ? 0.25 * sq : sq;
    if (li < kLipschitzFloor) li = kLipschitzFloor;
    p.lipschitz_[i] = li;
    sum += li;
    if (li > mx) mx = li;
  }
  p.lbar_ = sum / static_cast<double>(n);
  p.lmax_ = mx;
  return p;
}

void CompositeProblem::check_dim(const DenseVector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("vector has wrong dimension");
}

double CompositeProblem::margin(Index i, const DenseVector& x) const {
  const SparseRow& row = samples_[static_cast<std::size_t>(i)].features;
  if (!scaling_) return row.dot(x);
  const FeatureScaling& sc = *scaling_;
  double s = 0.0;
  for (std::size_t k = 0; k < row.idx.size(); ++k) {
    const Index j = row.idx[k];
    s += row.val[k] * sc.inv_std[j] * x[j];
  }
  return s - sc.offset.dot(x);
}

double CompositeProblem::sample_loss(Index i, const DenseVector& x) const {
  check_dim(x);
  return glm_loss(loss_, margin(i, x), samples_[static_cast<std::size_t>(i)].label);
}

double CompositeProblem::grad_scalar(Index i, const DenseVector& x) const {
  check_dim(x);
  return glm_scalar(loss_, margin(i, x), samples_[static_cast<std::size_t>(i)].label);
}

double CompositeProblem::grad_scalar_at_margin(Index i, double m) const {
  return glm_scalar(loss_, m, samples_[static_cast<std::size_t>(i)].label);
}

void CompositeProblem::add_scaled_feature(Index i, double coef,
                                          DenseVector& out) const {
  const SparseRow& row = samples_[static_cast<std::size_t>(i)].features;
  if (!scaling_) {
    row.add_scaled(coef, out);
    return;
  }
  const FeatureScaling& sc = *scaling_;
  for (std::size_t k = 0; k < row.idx.size(); ++k) {
    const Index j = row.idx[k];
    out[j] += coef * row.val[k] * sc.inv_std[j];
  }
  out -= coef * sc.offset;
}

DenseVector CompositeProblem::sample_grad(Index i, const DenseVector& x) const {
  DenseVector out = DenseVector::Zero(dim_);
  add_scaled_feature(i, grad_scalar(i, x), out);
  return out;
}

double CompositeProblem::smooth_value(const DenseVector& x) const {
  check_dim(x);
  double s = 0.0;
  for (Index i = 0; i < n(); ++i) s += sample_loss(i, x);
  return s / static_cast<double>(n());
}

DenseVector CompositeProblem::full_gradient(const DenseVector& x) const {
  check_dim(x);
  DenseVector out = DenseVector::Zero(dim_);
  for (Index i = 0; i < n(); ++i) add_scaled_feature(i, grad_scalar(i, x), out);
  out *= 1.0 / static_cast<double>(n());
  return out;
}

double CompositeProblem::objective(const DenseVector& x) const {
  return smooth_value(x) + reg_.value(x);
}

}  // namespace svrda
