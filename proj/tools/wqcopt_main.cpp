#include <atomic>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "wqcopt/conditions.hpp"
#include "wqcopt/harness.hpp"
#include "wqcopt/text.hpp"
#include "wqcopt/trace_io.hpp"

namespace {

using namespace wqcopt;

std::string short_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string vec_str(const Vector& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

struct RunOpts {
  std::string config;
  std::string batch;
  int jobs = 1;
  std::optional<std::string> objective, solver, x0, out, report, plot;
  std::optional<int> iters, cycles, inner_max, record_every, dim;
  std::optional<double> L, alpha, mu, eps, inner_tol, kappa, shift;
  std::optional<std::uint64_t> seed, obj_seed;

  bool any_run_flag() const {
    return objective || solver || x0 || out || report || plot || iters || cycles || inner_max ||
           record_every || dim || L || alpha || mu || eps || inner_tol || kappa || shift || seed ||
           obj_seed || !config.empty();
  }
};

void apply_cli(RunSpec& spec, const RunOpts& o) {
  if (o.objective) spec.objective.name = *o.objective;
  if (o.solver) {
    auto m = parse_method(*o.solver);
    if (!m) throw UsageError("unknown solver '" + *o.solver + "'; valid: gd, sesop, cg, cg-restart");
    spec.solver.method = *m;
  }
  if (o.iters) spec.solver.T = *o.iters;
  if (o.L) spec.solver.L = *o.L;
  if (o.alpha) spec.solver.alpha = *o.alpha;
  if (o.mu) spec.solver.mu = *o.mu;
  if (o.eps) spec.eps = *o.eps;
  if (o.cycles) spec.solver.cycles = *o.cycles;
  if (o.x0) spec.x0 = *o.x0;
  if (o.seed) spec.seed = *o.seed;
  if (o.inner_tol) spec.solver.inner_tol = *o.inner_tol;
  if (o.inner_max) spec.solver.inner_max = *o.inner_max;
  if (o.record_every) spec.solver.record_every = *o.record_every;
  if (o.out) spec.trace_path = *o.out;
  if (o.report) spec.report_path = *o.report;
  if (o.plot) spec.plot_path = *o.plot;
  if (o.dim) spec.objective.dim = *o.dim;
  if (o.kappa) spec.objective.kappa = *o.kappa;
  if (o.obj_seed) spec.objective.obj_seed = *o.obj_seed;
  if (o.shift) spec.objective.shift = *o.shift;
}

void run_single(const RunOpts& o) {
  RunSpec spec;
  if (!o.config.empty()) spec = parse_runspec_file(o.config);
  apply_cli(spec, o);
  if (spec.objective.name.empty()) throw UsageError("missing --objective");
  if (spec.trace_path.empty()) spec.trace_path = "trace.csv";

  Trace t = execute_run(spec);
  const auto& last = t.back();
  std::cout << t.method << " on " << t.objective_name << ": k=" << last.k
            << " f=" << short_num(last.f)
            << " gap=" << (last.gap ? short_num(*last.gap) : std::string("n/a"))
            << " grad_norm=" << short_num(last.grad_norm) << "\n";
  std::cout << "wrote " << spec.trace_path << "\n";
  if (!spec.report_path.empty()) std::cout << "report " << spec.report_path << "\n";
  if (!spec.plot_path.empty()) std::cout << "plot " << spec.plot_path << "\n";
}

int run_batch(const RunOpts& o) {
  if (o.any_run_flag()) {
    throw UsageError("--batch jobs are configured by their files; drop the other run flags");
  }
  std::ifstream in(o.batch);
  if (!in) throw UsageError("cannot open batch file: " + o.batch);
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    paths.push_back(line.substr(start));
  }
  if (paths.empty()) throw UsageError("batch file lists no jobs: " + o.batch);

  // Parse everything up front so configuration mistakes surface before any
  // job starts running.
  std::vector<RunSpec> specs;
  specs.reserve(paths.size());
  for (const auto& p : paths) {
    RunSpec spec = parse_runspec_file(p);
    if (spec.objective.name.empty()) throw UsageError(p + ": missing objective");
    specs.push_back(std::move(spec));
  }

  struct JobResult {
    int status = 0;
    std::string message = "ok";
  };
  std::vector<JobResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) {
      try {
        Trace t = execute_run(specs[i]);
        results[i].message = "ok, k=" + std::to_string(t.back().k);
      } catch (const SolverError& e) {
        results[i] = {1, std::string("solver abort: ") + e.what()};
      } catch (const std::exception& e) {
        results[i] = {2, std::string("error: ") + e.what()};
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(o.jobs), specs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int status = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::cout << "job " << paths[i] << ": " << results[i].message << "\n";
    status = std::max(status, results[i].status);
  }
  return status;
}

struct EstimateOpts {
  std::string objective, condition;
  std::string sampler = "box-uniform";
  int samples = 10000;
  double lo = -1.0, hi = 1.0, scale = 1.0;
  std::optional<std::string> center, x_star;
  std::uint64_t seed = 0;
  std::string report;
  std::optional<int> dim;
  std::optional<double> kappa, shift;
  std::optional<std::uint64_t> obj_seed;
};

void run_estimate(const EstimateOpts& o) {
  ResolvedObjective res =
      resolve_objective({o.objective, o.dim, o.kappa, o.obj_seed, o.shift});
  const Objective& obj = res.objective;

  auto cond = parse_condition(o.condition);
  if (!cond) {
    throw UsageError("unknown condition '" + o.condition + "'; valid: wqc, qg, pl, weak-pl, star");
  }
  auto kind = parse_sampler_kind(o.sampler);
  if (!kind || *kind == Sampler::Kind::trajectory) {
    throw UsageError("unknown sampler '" + o.sampler + "'; valid: box-uniform, gaussian-around");
  }

  const bool needs_x_star =
      *cond == Condition::wqc || *cond == Condition::weak_pl || *cond == Condition::star;
  std::optional<Vector> x_star;
  if (o.x_star) {
    Vector xs = parse_vector(*o.x_star);
    if (xs.size() != obj.dim) {
      throw UsageError("--x-star has " + std::to_string(xs.size()) + " components, objective expects " +
                       std::to_string(obj.dim));
    }
    x_star = xs;
  } else if (obj.has_projector()) {
    x_star = obj.projector(Vector::Zero(obj.dim));
  } else if (needs_x_star) {
    throw UsageError("objective '" + res.name + "' has no known minimizer; pass --x-star");
  }

  Sampler s = Sampler::box(o.samples, o.lo, o.hi, o.seed);
  if (*kind == Sampler::Kind::gaussian_around) {
    Vector center =
        o.center ? parse_vector(*o.center) : (x_star ? *x_star : Vector::Zero(obj.dim).eval());
    if (center.size() != obj.dim) {
      throw UsageError("--center has " + std::to_string(center.size()) +
                       " components, objective expects " + std::to_string(obj.dim));
    }
    s = Sampler::gaussian(o.samples, center, o.scale, o.seed);
  }

  std::map<std::string, std::string> meta{{"objective", res.name},
                                          {"sampler", sampler_kind_name(s.kind)}};

  if (*cond == Condition::star) {
    StarConvexityReport rep = check_star_convexity(obj, *x_star, s);
    std::cout << "condition=star worst_violation=" << format_double(rep.worst_violation)
              << " witness=" << vec_str(rep.witness)
              << " witness_lambda=" << format_double(rep.witness_lambda) << " seed=" << o.seed
              << "\n";
    if (!o.report.empty()) {
      write_star_report(o.report, rep, meta);
      std::cout << "report " << o.report << "\n";
    }
    return;
  }

  ConditionEstimate est;
  switch (*cond) {
    case Condition::wqc: est = estimate_wqc_alpha(obj, *x_star, s); break;
    case Condition::qg: est = estimate_qg_mu(obj, s); break;
    case Condition::pl: est = estimate_pl_mu(obj, s); break;
    case Condition::weak_pl: est = estimate_weak_pl_mu(obj, *x_star, s); break;
    case Condition::star: break;
  }
  std::cout << "condition=" << condition_name(est.condition)
            << " raw_inf=" << format_double(est.raw_inf)
            << " constant=" << format_double(est.constant) << " witness=" << vec_str(est.witness)
            << " samples=" << est.samples << " seed=" << est.seed << "\n";
  if (!o.report.empty()) {
    write_estimate_report(o.report, est, meta);
    std::cout << "report " << o.report << "\n";
  }
}

void run_zoo() {
  auto entries = zoo();
  std::cout << std::left << std::setw(18) << "name" << std::setw(5) << "dim" << std::setw(10) << "L"
            << std::setw(10) << "f_star" << std::setw(7) << "alpha" << std::setw(8) << "mu"
            << "notes\n";
  for (const auto& e : entries) {
    std::cout << std::left << std::setw(18) << e.name << std::setw(5) << e.objective.dim
              << std::setw(10)
              << (e.objective.lipschitz_L ? short_num(*e.objective.lipschitz_L) : std::string("-"))
              << std::setw(10)
              << (e.objective.f_star ? short_num(*e.objective.f_star) : std::string("-"))
              << std::setw(7) << (e.alpha_ref ? short_num(*e.alpha_ref) : std::string("-"))
              << std::setw(8) << (e.mu_qg_ref ? short_num(*e.mu_qg_ref) : std::string("-"))
              << e.notes << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-order solvers and condition estimators for smooth weakly quasi-convex problems"};
  app.require_subcommand(1);
  int status = 0;

  RunOpts ro;
  CLI::App* run = app.add_subcommand("run", "run a solver and write trace/report/plot files");
  run->add_option("--objective", ro.objective, "zoo objective name (see `wqcopt zoo`)");
  run->add_option("--solver", ro.solver, "gd, sesop, cg, or cg-restart (default gd)");
  run->add_option("--iters", ro.iters, "outer iterations; per-cycle length for cg-restart");
  run->add_option("--L", ro.L, "smoothness constant (default: objective's stored value)");
  run->add_option("--alpha", ro.alpha, "weak quasi-convexity constant (default: zoo reference)");
  run->add_option("--mu", ro.mu, "quadratic growth constant (default: zoo reference)");
  run->add_option("--eps", ro.eps, "target gap for cg-restart cycle budgeting");
  run->add_option("--cycles", ro.cycles, "cg-restart cycle cap");
  run->add_option("--x0", ro.x0, "comma-separated start point or radius:r (default radius:2)");
  run->add_option("--seed", ro.seed, "seed for radius:r starts (default 0)");
  run->add_option("--inner-tol", ro.inner_tol, "subspace solve tolerance (default 1e-10)");
  run->add_option("--inner-max", ro.inner_max, "subspace solve iteration cap (default 200)");
  run->add_option("--record-every", ro.record_every, "record every n-th iterate (default 1)");
  run->add_option("--out", ro.out, "trace CSV path (default trace.csv)");
  run->add_option("--report", ro.report, "bound report CSV path");
  run->add_option("--plot", ro.plot, "SVG plot path");
  run->add_option("--dim", ro.dim, "override dimension of the seeded families");
  run->add_option("--kappa", ro.kappa, "override condition number of the seeded quadratics");
  run->add_option("--obj-seed", ro.obj_seed, "override generation seed of the seeded quadratics");
  run->add_option("--shift", ro.shift, "override minimizer distance of the seeded quadratics");
  run->add_option("--config", ro.config, "flat key=value run file; flags override its entries");
  run->add_option("--batch", ro.batch, "file listing run config paths, one job per line");
  run->add_option("--jobs", ro.jobs, "concurrent jobs for --batch (default 1)")
      ->check(CLI::PositiveNumber);
  run->callback([&]() {
    if (!ro.batch.empty()) {
      status = run_batch(ro);
    } else {
      run_single(ro);
    }
  });

  EstimateOpts eo;
  CLI::App* est = app.add_subcommand("estimate", "sample a condition constant over a region");
  est->add_option("--objective", eo.objective, "zoo objective name")->required();
  est->add_option("--condition", eo.condition, "wqc, qg, pl, weak-pl, or star")->required();
  est->add_option("--sampler", eo.sampler, "box-uniform or gaussian-around (default box-uniform)");
  est->add_option("--samples", eo.samples, "sample count (default 10000)")
      ->check(CLI::PositiveNumber);
  est->add_option("--lo", eo.lo, "box lower bound per coordinate (default -1)");
  est->add_option("--hi", eo.hi, "box upper bound per coordinate (default 1)");
  est->add_option("--center", eo.center, "gaussian center, comma-separated (default: minimizer)");
  est->add_option("--scale", eo.scale, "gaussian standard deviation (default 1)");
  est->add_option("--x-star", eo.x_star, "reference minimizer, comma-separated");
  est->add_option("--seed", eo.seed, "sampler seed (default 0)");
  est->add_option("--report", eo.report, "estimate report path");
  est->add_option("--dim", eo.dim, "override dimension of the seeded families");
  est->add_option("--kappa", eo.kappa, "override condition number of the seeded quadratics");
  est->add_option("--obj-seed", eo.obj_seed, "override generation seed of the seeded quadratics");
  est->add_option("--shift", eo.shift, "override minimizer distance of the seeded quadratics");
  est->callback([&]() { run_estimate(eo); });

  std::vector<std::string> cmp_paths;
  std::string cmp_out = "compare.csv";
  std::string cmp_plot;
  CLI::App* cmp = app.add_subcommand("compare", "merge traces into aligned gap/bound columns");
  cmp->add_option("traces", cmp_paths, "trace CSV files from `wqcopt run`")
      ->required()
      ->expected(-1);
  cmp->add_option("--out", cmp_out, "combined CSV path (default compare.csv)");
  cmp->add_option("--plot", cmp_plot, "SVG plot path");
  cmp->callback([&]() {
    run_compare(cmp_paths, cmp_out, cmp_plot);
    std::cout << "wrote " << cmp_out << "\n";
    if (!cmp_plot.empty()) std::cout << "plot " << cmp_plot << "\n";
  });

  CLI::App* z = app.add_subcommand("zoo", "list objectives and their known constants");
  z->callback([]() { run_zoo(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const wqcopt::SolverError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 1;
  } catch (const wqcopt::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
