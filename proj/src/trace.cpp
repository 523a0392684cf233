#include "svrda/trace.hpp"

#include <cmath>
#include <iostream>

namespace svrda {

std::string to_string(TraceOutput k) {
  switch (k) {
    case TraceOutput::GdStep: return "x_tilde";
    case TraceOutput::DualAvg: return "v_tilde";
    case TraceOutput::Average: return "average";
    case TraceOutput::LastIterate: return "last_iterate";
  }
  return "?";
}

Index nnz(const DenseVector& x, double threshold) {
  Index c = 0;
  if (threshold > 0.0) {
    for (Index j = 0; j < x.size(); ++j) {
      if (std::abs(x[j]) > threshold) ++c;
    }
  } else {
    for (Index j = 0; j < x.size(); ++j) {
      if (x[j] != 0.0) ++c;
    }
  }
  return c;
}

double objective_gap(const CompositeProblem& p, const DenseVector& x,
                     double p_star, double reference_tol) {
  double gap = p.objective(x) - p_star;
  const double floor = -10.0 * reference_tol;
  if (gap < floor) {
    std::cerr << "warning: objective gap " << gap
              << " below reference slack; reference tolerance is too loose\n";
    gap = floor;
  }
  return gap;
}

TraceRecorder::TraceRecorder(const CompositeProblem& p, MetricConfig cfg,
                             std::int64_t checkpoint_every)
    : prob_(&p),
      cfg_(cfg),
      every_(checkpoint_every),
      start_(std::chrono::steady_clock::now()) {}

void TraceRecorder::snapshot(std::int64_t grad_evals, int stage,
                             const DenseVector& out) {
  TraceRow row;
  row.grad_evals = grad_evals;
  row.stage = stage;
  row.objective_gap =
      objective_gap(*prob_, out, cfg_.p_star, cfg_.reference_tol);
  row.nnz = nnz(out, cfg_.nnz_threshold);
  row.wallclock_s =
      cfg_.record_wallclock
          ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count()
          : 0.0;
  if (!rows_.empty() && rows_.back().grad_evals == grad_evals) {
    rows_.back() = row;  // keep grad_evals strictly increasing
    return;
  }
  rows_.push_back(row);
}

void TraceRecorder::poll(std::int64_t grad_evals, int stage,
                         const DenseVector& out) {
  if (every_ <= 0) return;
  if (rows_.empty() || grad_evals - rows_.back().grad_evals >= every_) {
    snapshot(grad_evals, stage, out);
  }
}

RunTrace TraceRecorder::take(std::string solver_id, std::uint64_t seed,
                             TraceOutput output, bool guaranteed) {
  RunTrace t;
  t.rows = std::move(rows_);
  t.solver_id = std::move(solver_id);
  t.seed = seed;
  t.output = output;
  t.output_guaranteed = guaranteed;
  return t;
}

}  // namespace svrda
