#include "svrda/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace svrda {

namespace {

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

double parse_real(const std::string& tok, std::size_t lineno,
                  const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'", lineno);
  }
  if (pos != tok.size()) {
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'", lineno);
  }
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, Index dim_override) {
  Dataset ds;
  Index max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_or_comment(line)) continue;

    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    Sample s;
    s.label = parse_real(tok, lineno, "label");

    Index prev = 0;  // indices in the file are 1-based
    while (ss >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError("malformed feature token '" + tok + "'", lineno);
      }
      const std::string idx_str = tok.substr(0, colon);
      Index idx = 0;
      try {
        std::size_t pos = 0;
        idx = std::stoll(idx_str, &pos);
        if (pos != idx_str.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("malformed feature index '" + idx_str + "'", lineno);
      }
      if (idx < 1) throw ParseError("feature index must be >= 1", lineno);
      if (idx <= prev) {
        throw ParseError("feature indices must be strictly ascending", lineno);
      }
      const double val = parse_real(tok.substr(colon + 1), lineno, "feature value");
      s.features.idx.push_back(idx - 1);
      s.features.val.push_back(val);
      prev = idx;
    }
    if (prev > max_index) max_index = prev;
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw ParseError("no samples", lineno);
  if (dim_override > 0) {
    if (max_index > dim_override) {
      throw ParseError("feature index exceeds the requested dimension", lineno);
    }
    ds.d = dim_override;
  } else {
    ds.d = max_index;
  }
  return ds;
}

Dataset load_libsvm(const std::string& path, Index dim_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_libsvm(in, dim_override);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  char buf[64];
  for (const Sample& s : ds.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.label);
    out << buf;
    for (std::size_t k = 0; k < s.features.idx.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %lld:%.17g",
                    static_cast<long long>(s.features.idx[k] + 1),
                    s.features.val[k]);
      out << buf;
    }
    out << '\n';
  }
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  write_libsvm(ds, out);
}

Dataset normalize_features(const Dataset& ds, NormalizePolicy policy) {
  const Index n = ds.n();
  const Index d = ds.d;
  if (n < 2) throw std::invalid_argument("normalize_features needs n >= 2");

  DenseVector sum = DenseVector::Zero(d);
  std::vector<Index> nnz_col(static_cast<std::size_t>(d), 0);
  DenseVector col_min = DenseVector::Zero(d);  // zeros are present implicitly
  DenseVector col_max = DenseVector::Zero(d);
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (const Sample& s : ds.samples) {
    for (std::size_t k = 0; k < s.features.idx.size(); ++k) {
      const Index j = s.features.idx[k];
      const double v = s.features.val[k];
      sum[j] += v;
      ++nnz_col[static_cast<std::size_t>(j)];
      if (!seen[static_cast<std::size_t>(j)]) {
        col_min[j] = v;
        col_max[j] = v;
        seen[static_cast<std::size_t>(j)] = true;
      } else {
        col_min[j] = std::min(col_min[j], v);
        col_max[j] = std::max(col_max[j], v);
      }
    }
  }
  for (Index j = 0; j < d; ++j) {
    if (nnz_col[static_cast<std::size_t>(j)] < n) {
      col_min[j] = std::min(col_min[j], 0.0);
      col_max[j] = std::max(col_max[j], 0.0);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  DenseVector mean = sum * inv_n;
  DenseVector var = DenseVector::Zero(d);
  for (const Sample& s : ds.samples) {
    for (std::size_t k = 0; k < s.features.idx.size(); ++k) {
      const Index j = s.features.idx[k];
      const double c = s.features.val[k] - mean[j];
      var[j] += c * c;
    }
  }
  for (Index j = 0; j < d; ++j) {
    var[j] += static_cast<double>(n - nnz_col[static_cast<std::size_t>(j)]) *
              mean[j] * mean[j];
    var[j] *= inv_n;
  }

  NormalizationMeta meta;
  meta.mean = mean;
  meta.std = DenseVector::Zero(d);
  meta.constant.assign(static_cast<std::size_t>(d), 0);
  for (Index j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j]);
    // exact min == max catches constant columns the float variance misses
    if (col_min[j] == col_max[j] || !(sd > 0.0)) {
      meta.constant[static_cast<std::size_t>(j)] = 1;
      meta.std[j] = 0.0;
    } else {
      meta.std[j] = sd;
    }
  }

  if (policy == NormalizePolicy::Auto) {
    // entries that stay/become nonzero after centering
    std::vector<Index> eq_mean(static_cast<std::size_t>(d), 0);
    for (const Sample& s : ds.samples) {
      for (std::size_t k = 0; k < s.features.idx.size(); ++k) {
        const Index j = s.features.idx[k];
        if (s.features.val[k] == mean[j]) ++eq_mean[static_cast<std::size_t>(j)];
      }
    }
    std::int64_t nz_after = 0;
    for (Index j = 0; j < d; ++j) {
      if (meta.constant[static_cast<std::size_t>(j)]) continue;
      nz_after += nnz_col[static_cast<std::size_t>(j)] -
                  eq_mean[static_cast<std::size_t>(j)];
      if (mean[j] != 0.0) nz_after += n - nnz_col[static_cast<std::size_t>(j)];
    }
    const double density = static_cast<double>(nz_after) /
                           (static_cast<double>(n) * static_cast<double>(d));
    policy = density > 0.5 ? NormalizePolicy::Materialize : NormalizePolicy::Lazy;
  }

  Dataset out;
  out.d = d;
  if (policy == NormalizePolicy::Lazy) {
    out.samples = ds.samples;
    meta.materialized = false;
  } else {
    out.samples.reserve(static_cast<std::size_t>(n));
    for (const Sample& s : ds.samples) {
      Sample t;
      t.label = s.label;
      std::size_t k = 0;
      for (Index j = 0; j < d; ++j) {
        double raw = 0.0;
        if (k < s.features.idx.size() && s.features.idx[k] == j) {
          raw = s.features.val[k];
          ++k;
        }
        if (meta.constant[static_cast<std::size_t>(j)]) continue;
        const double z = (raw - mean[j]) / meta.std[j];
        if (z != 0.0) {
          t.features.idx.push_back(j);
          t.features.val.push_back(z);
        }
      }
      out.samples.push_back(std::move(t));
    }
    meta.materialized = true;
  }
  out.normalization = std::move(meta);
  return out;
}

void ensure_binary_labels(Dataset& ds) {
  bool zero_one = true;
  bool pm_one = true;
  for (const Sample& s : ds.samples) {
    if (s.label != 0.0 && s.label != 1.0) zero_one = false;
    if (s.label != -1.0 && s.label != 1.0) pm_one = false;
  }
  if (pm_one) return;
  if (zero_one) {
    for (Sample& s : ds.samples) {
      if (s.label == 0.0) s.label = -1.0;
    }
    return;
  }
  throw std::invalid_argument("binary task needs labels in {+1,-1} or {0,1}");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1) {
    throw std::invalid_argument("synthetic spec needs n >= 1 and d >= 1");
  }
  if (spec.k < 0 || spec.k > spec.d) {
    throw std::invalid_argument("synthetic spec needs 0 <= k <= d");
  }
  if (spec.noise_std < 0.0) {
    throw std::invalid_argument("synthetic noise_std must be nonnegative");
  }

  SeededRng rng(spec.seed);
  DenseVector truth = DenseVector::Zero(spec.d);
  {
    std::vector<Index> perm(static_cast<std::size_t>(spec.d));
    for (Index j = 0; j < spec.d; ++j) perm[static_cast<std::size_t>(j)] = j;
    for (Index t = 0; t < spec.k; ++t) {
      const Index j = t + sample_uniform(spec.d - t, rng);
      std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(j)]);
      truth[perm[static_cast<std::size_t>(t)]] =
          rng.next_double() < 0.5 ? -1.0 : 1.0;
    }
  }

  SyntheticData out;
  out.ground_truth = truth;
  out.dataset.d = spec.d;
  out.dataset.samples.reserve(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    Sample s;
    s.features.idx.reserve(static_cast<std::size_t>(spec.d));
    s.features.val.reserve(static_cast<std::size_t>(spec.d));
    double dot = 0.0;
    for (Index j = 0; j < spec.d; ++j) {
      const double v = rng.next_gaussian();
      if (v != 0.0) {
        s.features.idx.push_back(j);
        s.features.val.push_back(v);
        dot += v * truth[j];
      }
    }
    double b = dot;
    if (spec.noise_std > 0.0) b += spec.noise_std * rng.next_gaussian();
    if (spec.label_kind == SyntheticSpec::LabelKind::Binary) {
      b = b < 0.0 ? -1.0 : 1.0;
    }
    s.label = b;
    out.dataset.samples.push_back(std::move(s));
  }
  return out;
}

CompositeProblem make_problem(const Dataset& ds, SmoothLoss loss,
                              Regularizer reg) {
  std::optional<FeatureScaling> scaling;
  if (ds.normalization && !ds.normalization->materialized) {
    scaling = FeatureScaling::from_mean_std(ds.normalization->mean,
                                            ds.normalization->std);
  }
  return CompositeProblem::create(ds.samples, ds.d, loss, reg,
                                  std::move(scaling));
}

}  // namespace svrda
