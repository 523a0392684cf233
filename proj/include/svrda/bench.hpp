#ifndef SVRDA_BENCH_HPP
#define SVRDA_BENCH_HPP

#include <map>
#include <string>

#include "svrda/dataio.hpp"
#include "svrda/solvers.hpp"

namespace svrda {

struct ReferenceSolution {
  DenseVector x_star;
  double p_star = 0.0;
  std::int64_t iterations = 0;
};

/// High-precision baseline solution: proximal gradient descent with eta = Lbar
/// until the prox-gradient mapping norm drops below tol * max(1, ||x||), then
/// five extra sweeps. Deterministic and solver-independent.
ReferenceSolution compute_reference(const CompositeProblem& p, double tol);

/// Per-solver settings of one grid entry; zeros fall back to solver defaults.
struct SolverEntry {
  std::string name;  // svrda-x, svrda-v, sada-x, sada-v, gd, sgd, rda, svrg, saga
  double eta = 0.0;
  std::int64_t m1 = 0;
  int stages = 0;
  std::optional<double> alpha;
};

struct ExperimentConfig {
  std::string data_path;                      // libsvm file, or
  std::optional<SyntheticSpec> synthetic;     // generated problem
  bool normalize = false;
  SmoothLoss loss = SmoothLoss::Logistic;
  double l1 = 0.0;
  double l2 = 0.0;
  std::vector<SolverEntry> solvers;
  std::vector<std::uint64_t> seeds;
  std::int64_t budget = 0;
  std::int64_t checkpoint_every = 0;
  double reference_tol = 1e-10;
  double nnz_threshold = 0.0;
  bool record_wallclock = true;
  std::string out_dir = ".";
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

Regularizer make_regularizer(double l1, double l2);
Dataset load_experiment_dataset(const ExperimentConfig& cfg);

/// Runs the (solver, seed) grid: one CSV per run plus a JSON manifest in
/// cfg.out_dir. Per-run failures are recorded in the manifest and the rest of
/// the grid continues. Thread count comes from the SVRDA_THREADS environment
/// variable (default: one worker per hardware thread, capped at the grid size).
struct ExperimentOutcome {
  bool all_ok = false;
  std::string manifest_path;
};
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Dispatches one solver run by grid name.
RunResult run_solver(const std::string& name, const CompositeProblem& p,
                     SolverConfig cfg);

void write_trace_csv(const RunTrace& trace, const std::string& path);

}  // namespace svrda

#endif
