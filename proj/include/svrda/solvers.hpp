#ifndef SVRDA_SOLVERS_HPP
#define SVRDA_SOLVERS_HPP

#include <optional>

#include "svrda/estimators.hpp"
#include "svrda/sampling.hpp"
#include "svrda/trace.hpp"

namespace svrda {

/// Step schedule of the single-pass stochastic baselines. Auto picks the
/// documented decreasing schedule (sgd: 1/(eta + mu t) when mu > 0, else
/// (1/eta)/sqrt(t); rda: eta_t = eta sqrt(t)); Constant keeps eta_t = eta.
/// rda with a constant schedule and n = 1 is the deterministic dual-averaging
/// recursion.
enum class StepSchedule { Auto, Constant };

struct SolverConfig {
  /// Inverse step size. 0 picks the per-solver default: 4 Lbar (svrda, svrg),
  /// 5 Lmax (sada), Lbar (gd), 3 Lmax (saga), Lmax (sgd/rda base).
  double eta = 0.0;
  /// First-stage inner iteration count; 0 picks ceil(eta / (2 mu)) when
  /// mu > 0 and n when mu = 0 (svrg: 2n).
  std::int64_t m1 = 0;
  /// Outer stage count for multistage solvers; iteration count for the
  /// single-loop baselines when no budget is set. 0 means budget-driven.
  int stages = 0;
  /// Stage coupling weight; defaults to 1/4 (mu > 0) or 0 (mu = 0).
  std::optional<double> alpha_override;
  std::uint64_t seed = 0;
  /// Trace cadence in gradient evaluations; 0 records stage boundaries only.
  std::int64_t checkpoint_every = 0;
  /// Gradient-evaluation budget; multistage solvers only start a stage they
  /// can finish within it. 0 means stages-driven.
  std::int64_t budget = 0;
  /// Which iterate the trace tracks (svrda/sada: GdStep or DualAvg).
  TraceOutput trace_output = TraceOutput::GdStep;
  std::optional<DenseVector> x0;
  MetricConfig metrics;
  SagaTableLayout saga_layout = SagaTableLayout::GlmScalar;
  StepSchedule schedule = StepSchedule::Auto;
};

struct StagePair {
  DenseVector x_tilde;
  DenseVector v_tilde;
};

struct RunResult {
  DenseVector x_tilde;
  DenseVector v_tilde;
  RunTrace trace;
  std::int64_t total_grad_evals = 0;
  /// True when mu > 0: the dual-averaging output carries its own guarantee.
  bool v_guaranteed = false;
  /// Per-stage outputs, entry 0 being the start point.
  std::vector<StagePair> stage_history;
};

/// m_s = m1 (mu > 0) or 2^{s-1} m1 (mu = 0), s starting at 1.
std::int64_t stage_length(std::int64_t m1, int s, double mu);
double default_alpha(double mu);

/// Inner-loop state of one stage.
struct StageState {
  DenseVector x;   // gradient-descent iterate x_t
  DenseVector v;   // dual-averaging iterate v_t
  DenseVector u;   // coupled query point u_t
  DenseVector v0;  // dual-averaging anchor of the stage
  RunningAverage gbar;
  std::int64_t t = 0;
};

/// x_0 = x_tilde, v_0 = (1 - alpha) v_tilde + alpha x_tilde, u_0 = v_0.
StageState make_stage_state(const DenseVector& x_tilde,
                            const DenseVector& v_tilde, double alpha);

/// One iteration of the coupled update given the gradient estimate g:
///   v_t = prox_{(t/eta) R}(v_0 - (t/eta) gbar_t)
///   x_t = prox_{(1/(eta t)) R}(u_{t-1} - (1/(eta t)) g_t)
///   u_t = (1 - 1/(t+1)) x_t + (1/(t+1)) v_t
void dual_averaged_update(StageState& st, const DenseVector& g, double eta,
                          const Regularizer& reg);

void svrda_inner_step(StageState& st, const SvrgAnchor& anchor, Index i,
                      double q_i, double eta, const CompositeProblem& p);
void sada_inner_step(StageState& st, SagaTable& table, Index i, double eta,
                     const CompositeProblem& p);

RunResult svrda_run(const CompositeProblem& p, const SolverConfig& cfg);
RunResult sada_run(const CompositeProblem& p, const SolverConfig& cfg);

RunResult prox_gd_run(const CompositeProblem& p, const SolverConfig& cfg);
RunResult prox_sgd_run(const CompositeProblem& p, const SolverConfig& cfg);
RunResult rda_run(const CompositeProblem& p, const SolverConfig& cfg);
RunResult svrg_run(const CompositeProblem& p, const SolverConfig& cfg);
RunResult saga_run(const CompositeProblem& p, const SolverConfig& cfg);

}  // namespace svrda

#endif
