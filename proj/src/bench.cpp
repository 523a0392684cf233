#include "svrda/bench.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace svrda {

using nlohmann::json;

ReferenceSolution compute_reference(const CompositeProblem& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("reference tolerance must be positive");
  const double step = 1.0 / p.lbar();
  constexpr std::int64_t kIterationCap = 10'000'000;

  DenseVector x = DenseVector::Zero(p.dim());
  std::int64_t it = 0;
  while (true) {
    DenseVector next = p.prox(x - step * p.full_gradient(x), step);
    const double move = (next - x).norm();
    const bool done = move <= tol * std::max(1.0, x.norm());
    x = std::move(next);
    ++it;
    if (done) break;
    if (it >= kIterationCap) {
      throw std::runtime_error("compute_reference: iteration cap exceeded");
    }
  }
  for (int k = 0; k < 5; ++k) {
    x = p.prox(x - step * p.full_gradient(x), step);
    ++it;
  }
  return ReferenceSolution{x, p.objective(x), it};
}

Regularizer make_regularizer(double l1, double l2) {
  if (l1 > 0.0 && l2 > 0.0) return Regularizer::elastic_net(l1, l2);
  if (l1 > 0.0) return Regularizer::l1(l1);
  if (l2 > 0.0) return Regularizer::squared_l2(l2);
  return Regularizer::none();
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
  Dataset ds;
  if (cfg.synthetic) {
    ds = generate_synthetic(*cfg.synthetic).dataset;
  } else if (!cfg.data_path.empty()) {
    ds = load_libsvm(cfg.data_path);
  } else {
    throw std::invalid_argument("experiment needs a dataset path or a synthetic spec");
  }
  if (cfg.normalize) ds = normalize_features(ds);
  if (cfg.loss == SmoothLoss::Logistic) ensure_binary_labels(ds);
  return ds;
}

namespace {

SmoothLoss loss_from_string(const std::string& s) {
  if (s == "squared") return SmoothLoss::SquaredError;
  if (s == "logistic") return SmoothLoss::Logistic;
  throw std::invalid_argument("unknown loss '" + s + "'");
}

std::string loss_to_string(SmoothLoss loss) {
  return loss == SmoothLoss::SquaredError ? "squared" : "logistic";
}

SyntheticSpec synthetic_from_json(const json& j) {
  SyntheticSpec s;
  s.n = j.at("n").get<Index>();
  s.d = j.at("d").get<Index>();
  s.k = j.value("k", Index{0});
  s.noise_std = j.value("noise_std", 0.0);
  const std::string kind = j.value("label_kind", "regression");
  if (kind == "regression") {
    s.label_kind = SyntheticSpec::LabelKind::Regression;
  } else if (kind == "binary") {
    s.label_kind = SyntheticSpec::LabelKind::Binary;
  } else {
    throw std::invalid_argument("unknown label_kind '" + kind + "'");
  }
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

json synthetic_to_json(const SyntheticSpec& s) {
  return json{{"n", s.n},
              {"d", s.d},
              {"k", s.k},
              {"noise_std", s.noise_std},
              {"label_kind",
               s.label_kind == SyntheticSpec::LabelKind::Regression
                   ? "regression"
                   : "binary"},
              {"seed", s.seed}};
}

struct SolverPlan {
  RunResult (*runner)(const CompositeProblem&, const SolverConfig&);
  TraceOutput output;
};

SolverPlan plan_for(const std::string& name) {
  if (name == "svrda-x") return {&svrda_run, TraceOutput::GdStep};
  if (name == "svrda-v") return {&svrda_run, TraceOutput::DualAvg};
  if (name == "sada-x") return {&sada_run, TraceOutput::GdStep};
  if (name == "sada-v") return {&sada_run, TraceOutput::DualAvg};
  if (name == "gd") return {&prox_gd_run, TraceOutput::LastIterate};
  if (name == "sgd") return {&prox_sgd_run, TraceOutput::LastIterate};
  if (name == "rda") return {&rda_run, TraceOutput::LastIterate};
  if (name == "svrg") return {&svrg_run, TraceOutput::Average};
  if (name == "saga") return {&saga_run, TraceOutput::LastIterate};
  throw std::invalid_argument("unknown solver '" + name + "'");
}

unsigned grid_threads(std::size_t runs) {
  if (const char* env = std::getenv("SVRDA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<unsigned>(std::min<std::size_t>(hw, runs));
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig cfg;
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    if (d.contains("path")) cfg.data_path = d.at("path").get<std::string>();
    if (d.contains("synthetic")) cfg.synthetic = synthetic_from_json(d.at("synthetic"));
    cfg.normalize = d.value("normalize", false);
  }
  cfg.loss = loss_from_string(j.value("loss", "logistic"));
  cfg.l1 = j.value("l1", 0.0);
  cfg.l2 = j.value("l2", 0.0);
  if (cfg.l1 < 0.0 || cfg.l2 < 0.0) {
    throw std::invalid_argument("l1 and l2 must be nonnegative");
  }
  for (const json& s : j.at("solvers")) {
    SolverEntry e;
    e.name = s.at("name").get<std::string>();
    plan_for(e.name);  // validate early
    e.eta = s.value("eta", 0.0);
    e.m1 = s.value("m1", std::int64_t{0});
    e.stages = s.value("stages", 0);
    if (s.contains("alpha")) e.alpha = s.at("alpha").get<double>();
    cfg.solvers.push_back(std::move(e));
  }
  cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{0});
  cfg.budget = j.at("budget").get<std::int64_t>();
  if (cfg.budget <= 0) throw std::invalid_argument("budget must be positive");
  cfg.checkpoint_every = j.value("checkpoint_every", std::int64_t{0});
  cfg.reference_tol = j.value("reference_tol", 1e-10);
  cfg.nnz_threshold = j.value("nnz_threshold", 0.0);
  cfg.record_wallclock = j.value("record_wallclock", true);
  cfg.out_dir = j.value("out_dir", ".");
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json dataset;
  if (!cfg.data_path.empty()) dataset["path"] = cfg.data_path;
  if (cfg.synthetic) dataset["synthetic"] = synthetic_to_json(*cfg.synthetic);
  dataset["normalize"] = cfg.normalize;

  json solvers = json::array();
  for (const SolverEntry& e : cfg.solvers) {
    json s{{"name", e.name}};
    if (e.eta > 0.0) s["eta"] = e.eta;
    if (e.m1 > 0) s["m1"] = e.m1;
    if (e.stages > 0) s["stages"] = e.stages;
    if (e.alpha) s["alpha"] = *e.alpha;
    solvers.push_back(std::move(s));
  }
  const json j{{"dataset", dataset},
               {"loss", loss_to_string(cfg.loss)},
               {"l1", cfg.l1},
               {"l2", cfg.l2},
               {"solvers", solvers},
               {"seeds", cfg.seeds},
               {"budget", cfg.budget},
               {"checkpoint_every", cfg.checkpoint_every},
               {"reference_tol", cfg.reference_tol},
               {"nnz_threshold", cfg.nnz_threshold},
               {"record_wallclock", cfg.record_wallclock},
               {"out_dir", cfg.out_dir}};
  return j.dump(2);
}

RunResult run_solver(const std::string& name, const CompositeProblem& p,
                     SolverConfig cfg) {
  const SolverPlan plan = plan_for(name);
  if (plan.output == TraceOutput::GdStep || plan.output == TraceOutput::DualAvg) {
    cfg.trace_output = plan.output;
  }
  return plan.runner(p, cfg);
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "grad_evals,stage,objective_gap,nnz,wallclock_s\n";
  char buf[128];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%.17g,%lld,%.6f\n",
                  static_cast<long long>(r.grad_evals), r.stage,
                  r.objective_gap, static_cast<long long>(r.nnz),
                  r.wallclock_s);
    out << buf;
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.solvers.empty()) throw std::invalid_argument("experiment needs at least one solver");
  if (cfg.seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
  fs::create_directories(cfg.out_dir);

  const Dataset ds = load_experiment_dataset(cfg);
  const CompositeProblem problem =
      make_problem(ds, cfg.loss, make_regularizer(cfg.l1, cfg.l2));
  const ReferenceSolution ref = compute_reference(problem, cfg.reference_tol);

  struct RunJob {
    const SolverEntry* entry;
    std::uint64_t seed;
  };
  std::vector<RunJob> jobs;
  for (const SolverEntry& e : cfg.solvers) {
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({&e, seed});
  }

  std::vector<json> entries(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> all_ok{true};
  std::mutex io_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const RunJob& job = jobs[idx];
      const std::string csv_name =
          job.entry->name + "_seed" + std::to_string(job.seed) + ".csv";
      json entry{{"solver", job.entry->name},
                 {"seed", job.seed},
                 {"csv", csv_name}};
      try {
        SolverConfig sc;
        sc.eta = job.entry->eta;
        sc.m1 = job.entry->m1;
        sc.stages = job.entry->stages;
        sc.alpha_override = job.entry->alpha;
        sc.seed = job.seed;
        sc.budget = cfg.budget;
        sc.checkpoint_every = cfg.checkpoint_every;
        sc.metrics.p_star = ref.p_star;
        sc.metrics.reference_tol = cfg.reference_tol;
        sc.metrics.nnz_threshold = cfg.nnz_threshold;
        sc.metrics.record_wallclock = cfg.record_wallclock;

        const RunResult res = run_solver(job.entry->name, problem, sc);
        write_trace_csv(res.trace, (fs::path(cfg.out_dir) / csv_name).string());

        entry["status"] = "ok";
        entry["total_grad_evals"] = res.total_grad_evals;
        entry["output"] = to_string(res.trace.output);
        entry["output_guaranteed"] = res.trace.output_guaranteed;
        if (!res.trace.rows.empty()) {
          entry["final_objective_gap"] = res.trace.rows.back().objective_gap;
          entry["final_nnz"] = res.trace.rows.back().nnz;
        }
        std::lock_guard<std::mutex> lk(io_mutex);
        std::cout << job.entry->name << " seed " << job.seed << ": done ("
                  << res.total_grad_evals << " gradient evals)\n";
      } catch (const std::exception& ex) {
        entry["status"] = "failed";
        entry["error"] = ex.what();
        all_ok.store(false);
        std::lock_guard<std::mutex> lk(io_mutex);
        std::cerr << job.entry->name << " seed " << job.seed
                  << ": failed: " << ex.what() << "\n";
      }
      entries[idx] = std::move(entry);
    }
  };

  const unsigned nthreads = grid_threads(jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  json manifest{{"config", json::parse(experiment_config_to_json(cfg))},
                {"problem",
                 {{"n", problem.n()},
                  {"d", problem.dim()},
                  {"lbar", problem.lbar()},
                  {"lmax", problem.lmax()},
                  {"mu", problem.mu()}}},
                {"reference",
                 {{"p_star", ref.p_star},
                  {"iterations", ref.iterations},
                  {"tol", cfg.reference_tol},
                  {"nnz", nnz(ref.x_star)}}},
                {"runs", entries},
                {"all_ok", all_ok.load()}};

  const std::string manifest_path =
      (fs::path(cfg.out_dir) / "manifest.json").string();
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << "\n";
  return ExperimentOutcome{all_ok.load(), manifest_path};
}

}  // namespace svrda
