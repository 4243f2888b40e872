#include "wqcopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "wqcopt/rng.hpp"
#include "wqcopt/svg_plot.hpp"
#include "wqcopt/text.hpp"
#include "wqcopt/trace_io.hpp"

namespace wqcopt {
namespace {

std::string zoo_name_list() {
  std::string out;
  for (const auto& e : zoo()) {
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

struct QuadFamily {
  double kappa;
  std::uint64_t seed;
  double shift;
};

// Base parameters of the regenerable zoo quadratics; --kappa etc. override
// these one field at a time.
const std::map<std::string, QuadFamily>& quad_families() {
  static const std::map<std::string, QuadFamily> families = {
      {"quad", {10.0, 101, 0.0}},
      {"quad-ill", {1000.0, 102, 0.0}},
      {"quad-rot", {100.0, 103, 2.0}},
  };
  return families;
}

}  // namespace

ResolvedObjective resolve_objective(const ObjectiveSpec& spec) {
  auto entries = zoo();
  const ZooEntry* entry = find_zoo_entry(entries, spec.name);
  if (!entry) {
    throw UsageError("unknown objective '" + spec.name + "'; valid names: " + zoo_name_list());
  }
  const bool has_params =
      spec.dim.has_value() || spec.kappa.has_value() || spec.obj_seed.has_value() || spec.shift.has_value();
  if (!has_params) {
    return {entry->objective, entry->name, entry->alpha_ref, entry->mu_qg_ref};
  }

  auto fam = quad_families().find(spec.name);
  if (fam != quad_families().end()) {
    int n = spec.dim.value_or(entry->objective.dim);
    double kappa = spec.kappa.value_or(fam->second.kappa);
    std::uint64_t seed = spec.obj_seed.value_or(fam->second.seed);
    double shift = spec.shift.value_or(fam->second.shift);
    if (n < 1) throw UsageError("--dim must be >= 1");
    if (kappa < 1.0) throw UsageError("--kappa must be >= 1");
    if (shift < 0.0) throw UsageError("--shift must be >= 0");
    Objective obj = random_quadratic(n, kappa, 1.0, seed, shift);
    return {std::move(obj), spec.name, 1.0, 1.0 / kappa};
  }
  if (spec.name == "sphere_quartic") {
    if (spec.kappa || spec.obj_seed || spec.shift) {
      throw UsageError("objective 'sphere_quartic' only accepts --dim");
    }
    int n = spec.dim.value_or(entry->objective.dim);
    if (n < 1) throw UsageError("--dim must be >= 1");
    return {sphere_quartic(n), spec.name, entry->alpha_ref, entry->mu_qg_ref};
  }
  throw UsageError("objective '" + spec.name + "' takes no parameters");
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, ',')) {
    auto v = parse_double(cell);
    if (!v) throw UsageError("bad vector component '" + cell + "' in '" + text + "'");
    vals.push_back(*v);
  }
  if (vals.empty()) throw UsageError("empty vector '" + text + "'");
  Vector x(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) x[static_cast<int>(i)] = vals[i];
  return x;
}

Vector make_x0(const Objective& obj, const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("radius:", 0) == 0) {
    auto r = parse_double(spec.substr(7));
    if (!r || *r <= 0.0) throw UsageError("bad radius in x0 spec '" + spec + "'");
    Vector center = Vector::Zero(obj.dim);
    if (obj.has_projector()) center = obj.projector(center);
    Rng rng(seed);
    return center + rng.on_sphere(obj.dim, *r);
  }
  Vector x = parse_vector(spec);
  if (x.size() != obj.dim) {
    throw UsageError("x0 has " + std::to_string(x.size()) + " components, objective expects " +
                     std::to_string(obj.dim));
  }
  return x;
}

std::string run_spec_digest(const RunSpec& spec) {
  std::string s;
  s += "objective=" + spec.objective.name;
  if (spec.objective.dim) s += ";dim=" + std::to_string(*spec.objective.dim);
  if (spec.objective.kappa) s += ";kappa=" + format_double(*spec.objective.kappa);
  if (spec.objective.obj_seed) s += ";obj-seed=" + std::to_string(*spec.objective.obj_seed);
  if (spec.objective.shift) s += ";shift=" + format_double(*spec.objective.shift);
  s += ";solver=" + config_digest(spec.solver, spec.eps);
  s += ";x0=" + spec.x0;
  s += ";seed=" + std::to_string(spec.seed);
  return to_hex(fnv1a64(s));
}

namespace {

void maybe_plot_single(const RunSpec& spec, const Trace& t, bool have_bound, double L,
                       double alpha, std::optional<double> mu) {
  if (spec.plot_path.empty()) return;
  const bool use_gap = !t.records.empty() && t.records.front().gap.has_value();
  PlotSeries main_series;
  main_series.label = std::string(use_gap ? "gap " : "grad_norm ") + t.method;
  for (const auto& r : t.records) {
    double y = use_gap ? r.gap.value_or(-1.0) : r.grad_norm;
    main_series.points.emplace_back(static_cast<double>(r.k), y);
  }
  std::vector<PlotSeries> series{main_series};
  if (use_gap && have_bound && t.R) {
    PlotSeries bound_series;
    bound_series.label = "bound " + t.method;
    bound_series.dashed = true;
    for (const auto& r : t.records) {
      if (t.method == "sesop" && r.k == 0) continue;
      bound_series.points.emplace_back(
          static_cast<double>(r.k), theoretical_bound(t.method, r.k, L, *t.R, alpha, mu));
    }
    series.push_back(std::move(bound_series));
  }
  write_line_plot_svg(spec.plot_path, t.objective_name + " / " + t.method, "iteration",
                      use_gap ? "gap" : "grad_norm", series, true);
}

std::map<std::string, std::string> run_meta(const RunSpec& spec, const SolverConfig& cfg,
                                            std::optional<double> alpha, std::optional<double> mu,
                                            int dim) {
  std::map<std::string, std::string> meta;
  meta["L"] = format_double(cfg.L);
  if (alpha) meta["alpha"] = format_double(*alpha);
  if (mu) meta["mu"] = format_double(*mu);
  if (cfg.cycles) meta["cycles"] = std::to_string(*cfg.cycles);
  meta["dim"] = std::to_string(dim);
  if (spec.objective.kappa) meta["kappa"] = format_double(*spec.objective.kappa);
  if (spec.objective.obj_seed) meta["obj-seed"] = std::to_string(*spec.objective.obj_seed);
  if (spec.objective.shift) meta["shift"] = format_double(*spec.objective.shift);
  meta["eps"] = format_double(spec.eps);
  meta["iters"] = std::to_string(cfg.T);
  meta["inner-tol"] = format_double(cfg.inner_tol);
  meta["inner-max"] = std::to_string(cfg.inner_max);
  meta["record-every"] = std::to_string(cfg.record_every);
  meta["seed"] = std::to_string(spec.seed);
  meta["x0"] = spec.x0;
  meta["runspec"] = run_spec_digest(spec);
  return meta;
}

}  // namespace

Trace execute_run(const RunSpec& spec) {
  ResolvedObjective res = resolve_objective(spec.objective);
  SolverConfig cfg = spec.solver;

  if (cfg.L <= 0.0) {
    if (!res.objective.lipschitz_L) {
      throw UsageError("objective '" + res.name + "' has no stored smoothness constant; pass --L");
    }
    cfg.L = *res.objective.lipschitz_L;
  }
  if (!cfg.alpha && res.alpha_ref) cfg.alpha = res.alpha_ref;
  if (!cfg.mu && res.mu_qg_ref) cfg.mu = res.mu_qg_ref;
  if (cfg.method == Method::cg_restart && !cfg.alpha) {
    throw UsageError("cg-restart needs --alpha (no reference constant for '" + res.name + "')");
  }
  if (cfg.method == Method::cg_restart && !cfg.mu) {
    throw UsageError("cg-restart needs --mu (no reference constant for '" + res.name + "')");
  }

  Vector x0 = make_x0(res.objective, spec.x0, spec.seed);
  auto meta = run_meta(spec, cfg, cfg.alpha, cfg.mu, res.objective.dim);

  Trace t;
  try {
    t = run_solver(res.objective, x0, cfg, spec.eps);
  } catch (const SolverError& err) {
    if (!spec.trace_path.empty()) {
      Trace partial = err.partial;
      partial.objective_name = res.name;
      write_trace_csv(spec.trace_path, partial, meta);
    }
    throw;
  }
  t.objective_name = res.name;

  if (!spec.trace_path.empty()) write_trace_csv(spec.trace_path, t, meta);

  const bool gaps_known = !t.records.empty() && t.records.front().gap.has_value();
  const bool bound_ready = cfg.alpha.has_value() && t.R.has_value() && gaps_known &&
                           (t.method != "cg-restart" || cfg.mu.has_value());
  if (!spec.report_path.empty()) {
    if (bound_ready) {
      BoundReport rep = make_bound_report(t, cfg.L, *cfg.alpha, cfg.mu);
      std::map<std::string, std::string> rmeta{{"objective", res.name},
                                               {"method", t.method},
                                               {"runspec", run_spec_digest(spec)}};
      write_bound_report(spec.report_path, rep, rmeta);
    } else {
      std::string reason = !gaps_known        ? "optimal value unknown"
                           : !cfg.alpha       ? "alpha unknown"
                           : !t.R             ? "distance to solution unknown"
                                              : "mu unknown";
      std::cerr << "note: bound report skipped (" << reason << ")\n";
    }
  }
  maybe_plot_single(spec, t, bound_ready, cfg.L, cfg.alpha.value_or(0.0), cfg.mu);
  return t;
}

void run_compare(const std::vector<std::string>& trace_paths, const std::string& out_csv,
                 const std::string& plot_path) {
  if (trace_paths.empty()) throw UsageError("compare needs at least one trace file");

  std::vector<LoadedTrace> loaded;
  loaded.reserve(trace_paths.size());
  for (const auto& p : trace_paths) loaded.push_back(read_trace_csv(p));

  const std::string& objective = loaded.front().trace.objective_name;
  for (const auto& lt : loaded) {
    if (lt.trace.objective_name != objective) {
      throw UsageError("traces mix objectives '" + objective + "' and '" +
                       lt.trace.objective_name + "'");
    }
  }

  // One gap column per trace, plus a bound column when the metadata carries
  // enough constants to evaluate the worst-case curve.
  struct Column {
    std::string suffix;
    std::map<int, double> gap;
    std::map<int, double> bound;
  };
  std::vector<Column> cols;
  std::map<std::string, int> suffix_count;
  std::set<int> ks;
  for (const auto& lt : loaded) {
    Column c;
    int nth = ++suffix_count[lt.trace.method];
    c.suffix = lt.trace.method;
    std::replace(c.suffix.begin(), c.suffix.end(), '-', '_');
    if (nth > 1) c.suffix += "_" + std::to_string(nth);

    auto L = lt.meta_double("L");
    auto alpha = lt.meta_double("alpha");
    auto mu = lt.meta_double("mu");
    const bool bound_ready =
        L && alpha && lt.trace.R && (lt.trace.method != "cg-restart" || mu.has_value());
    for (const auto& r : lt.trace.records) {
      ks.insert(r.k);
      if (r.gap) c.gap[r.k] = *r.gap;
      if (bound_ready && !(lt.trace.method == "sesop" && r.k == 0)) {
        c.bound[r.k] = theoretical_bound(lt.trace.method, r.k, *L, *lt.trace.R, *alpha, mu);
      }
    }
    cols.push_back(std::move(c));
  }

  if (!out_csv.empty()) {
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open compare output: " + out_csv);
    out << "# objective=" << objective << "\n";
    out << "k";
    for (const auto& c : cols) out << ",gap_" << c.suffix << ",bound_" << c.suffix;
    out << "\n";
    for (int k : ks) {
      out << k;
      for (const auto& c : cols) {
        out << ",";
        auto g = c.gap.find(k);
        if (g != c.gap.end()) out << format_double(g->second);
        out << ",";
        auto b = c.bound.find(k);
        if (b != c.bound.end()) out << format_double(b->second);
      }
      out << "\n";
    }
  }

  if (!plot_path.empty()) {
    std::vector<PlotSeries> series;
    for (const auto& c : cols) {
      PlotSeries gap_series;
      gap_series.label = "gap " + c.suffix;
      for (const auto& [k, v] : c.gap) gap_series.points.emplace_back(k, v);
      series.push_back(std::move(gap_series));
      if (!c.bound.empty()) {
        PlotSeries bound_series;
        bound_series.label = "bound " + c.suffix;
        bound_series.dashed = true;
        for (const auto& [k, v] : c.bound) bound_series.points.emplace_back(k, v);
        series.push_back(std::move(bound_series));
      }
    }
    write_line_plot_svg(plot_path, objective, "iteration", "gap", series, true);
  }
}

void apply_runspec_kv(RunSpec& spec, const std::string& key, const std::string& value) {
  auto need_double = [&](const char* what) {
    auto v = parse_double(value);
    if (!v) throw UsageError(std::string("bad number for ") + what + ": '" + value + "'");
    return *v;
  };
  auto need_int = [&](const char* what) {
    auto v = parse_int(value);
    if (!v) throw UsageError(std::string("bad integer for ") + what + ": '" + value + "'");
    return *v;
  };

  if (key == "objective") {
    spec.objective.name = value;
  } else if (key == "solver") {
    auto m = parse_method(value);
    if (!m) throw UsageError("unknown solver '" + value + "'; valid: gd, sesop, cg, cg-restart");
    spec.solver.method = *m;
  } else if (key == "iters") {
    spec.solver.T = static_cast<int>(need_int("iters"));
  } else if (key == "L") {
    spec.solver.L = need_double("L");
  } else if (key == "alpha") {
    spec.solver.alpha = need_double("alpha");
  } else if (key == "mu") {
    spec.solver.mu = need_double("mu");
  } else if (key == "eps") {
    spec.eps = need_double("eps");
  } else if (key == "cycles") {
    spec.solver.cycles = static_cast<int>(need_int("cycles"));
  } else if (key == "x0") {
    spec.x0 = value;
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(need_int("seed"));
  } else if (key == "inner-tol") {
    spec.solver.inner_tol = need_double("inner-tol");
  } else if (key == "inner-max") {
    spec.solver.inner_max = static_cast<int>(need_int("inner-max"));
  } else if (key == "record-every") {
    spec.solver.record_every = static_cast<int>(need_int("record-every"));
  } else if (key == "out") {
    spec.trace_path = value;
  } else if (key == "report") {
    spec.report_path = value;
  } else if (key == "plot") {
    spec.plot_path = value;
  } else if (key == "dim") {
    spec.objective.dim = static_cast<int>(need_int("dim"));
  } else if (key == "kappa") {
    spec.objective.kappa = need_double("kappa");
  } else if (key == "obj-seed") {
    spec.objective.obj_seed = static_cast<std::uint64_t>(need_int("obj-seed"));
  } else if (key == "shift") {
    spec.objective.shift = need_double("shift");
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

RunSpec parse_runspec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  RunSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::size_t vs = value.find_first_not_of(" \t");
    value = vs == std::string::npos ? std::string() : value.substr(vs);
    apply_runspec_kv(spec, key, value);
  }
  return spec;
}

}  // namespace wqcopt
