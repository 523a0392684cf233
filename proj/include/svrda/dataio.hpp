#ifndef SVRDA_DATAIO_HPP
#define SVRDA_DATAIO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "svrda/problem.hpp"
#include "svrda/sampling.hpp"

namespace svrda {

struct NormalizationMeta {
  DenseVector mean;
  DenseVector std;                     // 0 for flagged constant columns
  std::vector<std::uint8_t> constant;  // flagged columns map to all-zero
  /// True when the transform was baked into the stored samples; false when it
  /// is applied lazily through the problem's feature scaling.
  bool materialized = false;
};

struct Dataset {
  std::vector<Sample> samples;
  Index d = 0;
  std::optional<NormalizationMeta> normalization;

  Index n() const { return static_cast<Index>(samples.size()); }
};

/// libsvm text format: `<label> <idx>:<val> ...`, 1-based strictly ascending
/// indices. Blank lines and `#` comment lines are skipped. LF or CRLF.
/// The dimension is the largest index seen unless dim_override > 0.
Dataset parse_libsvm(std::istream& in, Index dim_override = 0);
Dataset load_libsvm(const std::string& path, Index dim_override = 0);
void write_libsvm(const Dataset& ds, std::ostream& out);
void save_libsvm(const Dataset& ds, const std::string& path);

enum class NormalizePolicy {
  Auto,         // materialize when post-centering density exceeds 50%
  Materialize,  // always bake the transform into the stored rows
  Lazy          // always keep raw rows plus the (mean, std) view
};

/// Zero mean, unit variance per feature (population 1/n convention).
/// Constant columns are flagged and mapped to all-zero.
Dataset normalize_features(const Dataset& ds,
                           NormalizePolicy policy = NormalizePolicy::Auto);

/// Maps {0, 1} labels to {-1, +1}; labels already in {-1, +1} pass through.
/// Anything else is rejected.
void ensure_binary_labels(Dataset& ds);

struct SyntheticSpec {
  Index n = 0;
  Index d = 0;
  Index k = 0;  // true support size
  double noise_std = 0.0;
  enum class LabelKind { Regression, Binary } label_kind = LabelKind::Regression;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset dataset;
  DenseVector ground_truth;  // k entries of +-1 at seeded positions
};

/// Standard normal features; b = a^T x0 + noise (regression) or its sign.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Assembles the composite objective from a dataset; honors a lazy
/// normalization view when the dataset carries one.
CompositeProblem make_problem(const Dataset& ds, SmoothLoss loss,
                              Regularizer reg);

}  // namespace svrda

#endif
