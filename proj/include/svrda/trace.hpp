#ifndef SVRDA_TRACE_HPP
#define SVRDA_TRACE_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "svrda/problem.hpp"

namespace svrda {

/// Which iterate a run reports metrics for.
enum class TraceOutput { GdStep, DualAvg, Average, LastIterate };

std::string to_string(TraceOutput k);

struct TraceRow {
  std::int64_t grad_evals = 0;
  int stage = 0;
  double objective_gap = 0.0;
  Index nnz = 0;
  double wallclock_s = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::string solver_id;
  std::uint64_t seed = 0;
  TraceOutput output = TraceOutput::GdStep;
  bool output_guaranteed = true;
};

/// |{j : x_j != 0}|. Exact comparison by default; a positive threshold
/// switches to |x_j| > threshold (useful for averaged outputs).
Index nnz(const DenseVector& x, double threshold = 0.0);

struct MetricConfig {
  double p_star = 0.0;
  double reference_tol = 1e-12;
  double nnz_threshold = 0.0;
  /// Off makes traces byte-identical across reruns (column written as 0).
  bool record_wallclock = true;
};

/// P(x) - p_star, clamped at -10 * reference_tol (with a warning) when the
/// reference is too loose to explain the negativity.
double objective_gap(const CompositeProblem& p, const DenseVector& x,
                     double p_star, double reference_tol = 1e-12);

/// Turns checkpoint requests into trace rows. Objective evaluations made here
/// never touch the caller's gradient counter.
class TraceRecorder {
 public:
  TraceRecorder(const CompositeProblem& p, MetricConfig cfg,
                std::int64_t checkpoint_every);

  /// Unconditional row (stage boundaries); replaces the previous row when the
  /// evaluation count has not advanced.
  void snapshot(std::int64_t grad_evals, int stage, const DenseVector& out);
  /// Row only if `checkpoint_every` evaluations have passed since the last one.
  void poll(std::int64_t grad_evals, int stage, const DenseVector& out);

  RunTrace take(std::string solver_id, std::uint64_t seed, TraceOutput output,
                bool guaranteed);

 private:
  const CompositeProblem* prob_;
  MetricConfig cfg_;
  std::int64_t every_;
  std::chrono::steady_clock::time_point start_;
  std::vector<TraceRow> rows_;
};

}  // namespace svrda

#endif
