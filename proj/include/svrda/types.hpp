#ifndef SVRDA_TYPES_HPP
#define SVRDA_TYPES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svrda {

using DenseVector = Eigen::VectorXd;
using Index = std::int64_t;

/// One row of a design matrix as index/value pairs, indices strictly increasing.
struct SparseRow {
  std::vector<Index> idx;
  std::vector<double> val;

  Index nnz() const { return static_cast<Index>(idx.size()); }

  double squared_norm() const {
    double s = 0.0;
    for (double v : val) s += v * v;
    return s;
  }

  double dot(const DenseVector& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) s += val[k] * x[idx[k]];
    return s;
  }

  // out += coef * row
  void add_scaled(double coef, DenseVector& out) const {
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] += coef * val[k];
  }

  DenseVector to_dense(Index dim) const {
    DenseVector out = DenseVector::Zero(dim);
    add_scaled(1.0, out);
    return out;
  }
};

struct Sample {
  SparseRow features;
  double label = 0.0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace svrda

#endif
