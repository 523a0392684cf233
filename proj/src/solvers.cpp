#include "svrda/solvers.hpp"

#include <cmath>
#include <limits>

namespace svrda {

namespace {

double resolve_alpha(const SolverConfig& cfg, double mu) {
  if (cfg.alpha_override) {
    const double a = *cfg.alpha_override;
    if (a < 0.0 || a > 1.0) {
      throw std::invalid_argument("alpha override must lie in [0, 1]");
    }
    return a;
  }
  return default_alpha(mu);
}

std::int64_t default_m1(double eta, double mu, Index n) {
  if (mu > 0.0) return static_cast<std::int64_t>(std::ceil(eta / (2.0 * mu)));
  return n;
}

DenseVector start_point(const CompositeProblem& p, const SolverConfig& cfg) {
  if (cfg.x0) {
    if (cfg.x0->size() != p.dim()) {
      throw std::invalid_argument("x0 has wrong dimension");
    }
    return *cfg.x0;
  }
  return DenseVector::Zero(p.dim());
}

const DenseVector& stage_target(const StageState& st, TraceOutput out) {
  return out == TraceOutput::DualAvg ? st.v : st.x;
}

std::int64_t baseline_steps(const SolverConfig& cfg, std::int64_t per_step,
                            std::int64_t upfront = 0) {
  if (cfg.budget > 0) {
    const std::int64_t avail = cfg.budget - upfront;
    return avail > 0 ? avail / per_step : 0;
  }
  if (cfg.stages > 0) return cfg.stages;
  throw std::invalid_argument("solver needs a budget or an iteration count");
}

/// Shared stage loop of the two multistage dual-averaging solvers.
template <typename StageInit, typename InnerStep>
RunResult multistage_run(const CompositeProblem& p, const SolverConfig& cfg,
                         double eta, std::int64_t inner_evals,
                         StageInit&& stage_init, InnerStep&& inner_step) {
  if (cfg.stages <= 0 && cfg.budget <= 0) {
    throw std::invalid_argument("solver needs stages or a budget");
  }
  const double mu = p.mu();
  const std::int64_t n = p.n();
  const std::int64_t m1 = cfg.m1 > 0 ? cfg.m1 : default_m1(eta, mu, n);
  const double alpha = resolve_alpha(cfg, mu);

  SeededRng rng(cfg.seed);
  DenseVector x_tilde = start_point(p, cfg);
  DenseVector v_tilde = x_tilde;  // v~_0 = x~_0

  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  RunResult res;
  res.stage_history.push_back({x_tilde, v_tilde});
  std::int64_t evals = 0;
  rec.snapshot(0, 0, x_tilde);

  for (int s = 1;; ++s) {
    if (cfg.stages > 0 && s > cfg.stages) break;
    const std::int64_t ms = stage_length(m1, s, mu);
    if (cfg.budget > 0 && evals + n + inner_evals * ms > cfg.budget) break;

    auto ctx = stage_init(x_tilde, rng);  // anchor / gradient table, n evals
    evals += n;
    StageState st = make_stage_state(x_tilde, v_tilde, alpha);
    for (std::int64_t t = 0; t < ms; ++t) {
      inner_step(st, ctx, rng);
      evals += inner_evals;
      rec.poll(evals, s, stage_target(st, cfg.trace_output));
    }
    x_tilde = st.x;
    v_tilde = st.v;
    res.stage_history.push_back({x_tilde, v_tilde});
    rec.snapshot(evals, s,
                 cfg.trace_output == TraceOutput::DualAvg ? v_tilde : x_tilde);
  }

  res.x_tilde = x_tilde;
  res.v_tilde = v_tilde;
  res.total_grad_evals = evals;
  res.v_guaranteed = mu > 0.0;
  const bool guaranteed =
      cfg.trace_output != TraceOutput::DualAvg || res.v_guaranteed;
  res.trace = rec.take("", cfg.seed, cfg.trace_output, guaranteed);
  return res;
}

}  // namespace

std::int64_t stage_length(std::int64_t m1, int s, double mu) {
  if (s < 1) throw std::invalid_argument("stage index starts at 1");
  if (m1 < 1) throw std::invalid_argument("m1 must be at least 1");
  if (mu > 0.0) return m1;
  if (s - 1 >= 62) {
    throw std::invalid_argument("doubling stage schedule overflows 64-bit range");
  }
  const std::int64_t factor = std::int64_t{1} << (s - 1);
  if (m1 > std::numeric_limits<std::int64_t>::max() / factor) {
    throw std::invalid_argument("doubling stage schedule overflows 64-bit range");
  }
  return factor * m1;
}

double default_alpha(double mu) {
  if (mu < 0.0) throw std::invalid_argument("mu must be nonnegative");
  return mu > 0.0 ? 0.25 : 0.0;
}

StageState make_stage_state(const DenseVector& x_tilde,
                            const DenseVector& v_tilde, double alpha) {
  StageState st{x_tilde, DenseVector(), DenseVector(), DenseVector(),
                RunningAverage(x_tilde.size()), 0};
  st.v0 = (1.0 - alpha) * v_tilde + alpha * x_tilde;
  st.v = st.v0;
  st.u = st.v0;  // u_0 = v_0
  return st;
}

void dual_averaged_update(StageState& st, const DenseVector& g, double eta,
                          const Regularizer& reg) {
  st.t += 1;
  const double t = static_cast<double>(st.t);
  st.gbar.push(g);
  const double cv = t / eta;
  st.v = reg.prox(st.v0 - cv * st.gbar.value(), cv);
  const double cx = 1.0 / (eta * t);
  st.x = reg.prox(st.u - cx * g, cx);
  const double w = 1.0 / (t + 1.0);
  st.u = (1.0 - w) * st.x + w * st.v;
}

void svrda_inner_step(StageState& st, const SvrgAnchor& anchor, Index i,
                      double q_i, double eta, const CompositeProblem& p) {
  const DenseVector g = svrg_estimate(anchor, i, st.u, q_i, p);
  dual_averaged_update(st, g, eta, p.reg());
}

void sada_inner_step(StageState& st, SagaTable& table, Index i, double eta,
                     const CompositeProblem& p) {
  const DenseVector g = table.estimate_and_update(i, st.u);
  dual_averaged_update(st, g, eta, p.reg());
}

RunResult svrda_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double eta = cfg.eta > 0.0 ? cfg.eta : 4.0 * p.lbar();
  if (!(eta > p.lbar())) {
    throw std::invalid_argument("svrda: eta must exceed Lbar");
  }
  const SamplingDistribution q = build_q(p.lipschitz());
  auto init = [&](const DenseVector& x_tilde, SeededRng&) {
    return SvrgAnchor::compute(p, x_tilde);
  };
  auto step = [&](StageState& st, const SvrgAnchor& anchor, SeededRng& rng) {
    const Index i = sample_nonuniform(q, rng);
    svrda_inner_step(st, anchor, i, q.weights[static_cast<std::size_t>(i)],
                     eta, p);
  };
  RunResult res = multistage_run(p, cfg, eta, 2, init, step);
  res.trace.solver_id =
      cfg.trace_output == TraceOutput::DualAvg ? "svrda-v" : "svrda-x";
  return res;
}

RunResult sada_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double eta = cfg.eta > 0.0 ? cfg.eta : 5.0 * p.lmax();
  if (!(eta > p.lmax())) {
    throw std::invalid_argument("sada: eta must exceed Lmax");
  }
  auto init = [&](const DenseVector& x_tilde, SeededRng&) {
    return SagaTable(p, x_tilde, cfg.saga_layout);
  };
  auto step = [&](StageState& st, SagaTable& table, SeededRng& rng) {
    const Index i = sample_uniform(p.n(), rng);
    sada_inner_step(st, table, i, eta, p);
  };
  RunResult res = multistage_run(p, cfg, eta, 1, init, step);
  res.trace.solver_id =
      cfg.trace_output == TraceOutput::DualAvg ? "sada-v" : "sada-x";
  return res;
}

RunResult prox_gd_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double eta = cfg.eta > 0.0 ? cfg.eta : p.lbar();
  const double step = 1.0 / eta;
  const std::int64_t n = p.n();
  const std::int64_t steps = baseline_steps(cfg, n);

  DenseVector x = start_point(p, cfg);
  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  rec.snapshot(0, 0, x);
  std::int64_t evals = 0;
  for (std::int64_t t = 0; t < steps; ++t) {
    x = p.prox(x - step * p.full_gradient(x), step);
    evals += n;
    rec.poll(evals, 1, x);
  }
  rec.snapshot(evals, 1, x);

  RunResult res;
  res.x_tilde = x;
  res.v_tilde = x;
  res.total_grad_evals = evals;
  res.trace = rec.take("gd", cfg.seed, TraceOutput::LastIterate, true);
  return res;
}

RunResult prox_sgd_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double mu = p.mu();
  const double base = cfg.eta > 0.0 ? cfg.eta : p.lmax();
  const std::int64_t steps = baseline_steps(cfg, 1);

  SeededRng rng(cfg.seed);
  DenseVector x = start_point(p, cfg);
  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  rec.snapshot(0, 0, x);
  std::int64_t evals = 0;
  DenseVector g = DenseVector::Zero(p.dim());
  for (std::int64_t t = 1; t <= steps; ++t) {
    const Index i = sample_uniform(p.n(), rng);
    double step;
    if (cfg.schedule == StepSchedule::Constant) {
      step = 1.0 / base;
    } else if (mu > 0.0) {
      step = 1.0 / (base + mu * static_cast<double>(t));
    } else {
      step = 1.0 / (base * std::sqrt(static_cast<double>(t)));
    }
    g.setZero();
    p.add_scaled_feature(i, p.grad_scalar(i, x), g);
    x = p.prox(x - step * g, step);
    evals += 1;
    rec.poll(evals, 1, x);
  }
  rec.snapshot(evals, 1, x);

  RunResult res;
  res.x_tilde = x;
  res.v_tilde = x;
  res.total_grad_evals = evals;
  res.trace = rec.take("sgd", cfg.seed, TraceOutput::LastIterate, true);
  return res;
}

RunResult rda_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double gamma = cfg.eta > 0.0 ? cfg.eta : p.lmax();
  const std::int64_t steps = baseline_steps(cfg, 1);

  SeededRng rng(cfg.seed);
  const DenseVector x0 = start_point(p, cfg);
  DenseVector x = x0;
  RunningAverage gbar(p.dim());
  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  rec.snapshot(0, 0, x);
  std::int64_t evals = 0;
  DenseVector g = DenseVector::Zero(p.dim());
  for (std::int64_t t = 1; t <= steps; ++t) {
    const Index i = sample_uniform(p.n(), rng);
    g.setZero();
    p.add_scaled_feature(i, p.grad_scalar(i, x), g);
    gbar.push(g);
    const double eta_t = cfg.schedule == StepSchedule::Auto
                             ? gamma * std::sqrt(static_cast<double>(t))
                             : gamma;
    const double c = static_cast<double>(t) / eta_t;
    x = p.prox(x0 - c * gbar.value(), c);
    evals += 1;
    rec.poll(evals, 1, x);
  }
  rec.snapshot(evals, 1, x);

  RunResult res;
  res.x_tilde = x;
  res.v_tilde = x;
  res.total_grad_evals = evals;
  res.trace = rec.take("rda", cfg.seed, TraceOutput::LastIterate, true);
  return res;
}

RunResult svrg_run(const CompositeProblem& p, const SolverConfig& cfg) {
  if (cfg.stages <= 0 && cfg.budget <= 0) {
    throw std::invalid_argument("solver needs stages or a budget");
  }
  const double eta = cfg.eta > 0.0 ? cfg.eta : 4.0 * p.lbar();
  const double step = 1.0 / eta;
  const std::int64_t n = p.n();
  const std::int64_t m = cfg.m1 > 0 ? cfg.m1 : 2 * n;
  const SamplingDistribution q = build_q(p.lipschitz());

  SeededRng rng(cfg.seed);
  DenseVector x_tilde = start_point(p, cfg);
  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  RunResult res;
  res.stage_history.push_back({x_tilde, x_tilde});
  std::int64_t evals = 0;
  rec.snapshot(0, 0, x_tilde);

  for (int s = 1;; ++s) {
    if (cfg.stages > 0 && s > cfg.stages) break;
    if (cfg.budget > 0 && evals + n + 2 * m > cfg.budget) break;
    const SvrgAnchor anchor = SvrgAnchor::compute(p, x_tilde);
    evals += n;
    DenseVector x = x_tilde;
    RunningAverage stage_avg(p.dim());
    for (std::int64_t t = 0; t < m; ++t) {
      const Index i = sample_nonuniform(q, rng);
      const DenseVector g =
          svrg_estimate(anchor, i, x, q.weights[static_cast<std::size_t>(i)], p);
      evals += 2;
      x = p.prox(x - step * g, step);
      stage_avg.push(x);
      rec.poll(evals, s, stage_avg.value());
    }
    x_tilde = stage_avg.value();  // the averaged stage output
    res.stage_history.push_back({x_tilde, x_tilde});
    rec.snapshot(evals, s, x_tilde);
  }

  res.x_tilde = x_tilde;
  res.v_tilde = x_tilde;
  res.total_grad_evals = evals;
  res.trace = rec.take("svrg", cfg.seed, TraceOutput::Average, true);
  return res;
}

RunResult saga_run(const CompositeProblem& p, const SolverConfig& cfg) {
  const double eta = cfg.eta > 0.0 ? cfg.eta : 3.0 * p.lmax();
  const double step = 1.0 / eta;
  const std::int64_t n = p.n();
  const std::int64_t steps = baseline_steps(cfg, 1, n);
  const bool average_output = p.mu() == 0.0;

  SeededRng rng(cfg.seed);
  DenseVector x = start_point(p, cfg);
  SagaTable table(p, x, cfg.saga_layout);
  RunningAverage history_avg(p.dim());
  TraceRecorder rec(p, cfg.metrics, cfg.checkpoint_every);
  rec.snapshot(0, 0, x);
  std::int64_t evals = n;  // table fill
  for (std::int64_t t = 0; t < steps; ++t) {
    const Index i = sample_uniform(n, rng);
    const DenseVector g = table.estimate_and_update(i, x);
    evals += 1;
    x = p.prox(x - step * g, step);
    if (average_output) history_avg.push(x);
    rec.poll(evals, 1, average_output ? history_avg.value() : x);
  }
  const DenseVector& out = average_output && history_avg.count() > 0
                               ? history_avg.value()
                               : x;
  rec.snapshot(evals, 1, out);

  RunResult res;
  res.x_tilde = out;
  res.v_tilde = out;
  res.total_grad_evals = evals;
  res.trace = rec.take(
      "saga", cfg.seed,
      average_output ? TraceOutput::Average : TraceOutput::LastIterate, true);
  return res;
}

}  // namespace svrda
