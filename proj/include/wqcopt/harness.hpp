#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wqcopt/functions.hpp"
#include "wqcopt/objective.hpp"
#include "wqcopt/solvers.hpp"

namespace wqcopt {

// Bad names, bad flag combinations, malformed inputs. The CLI maps this to
// exit status 2, as opposed to a solver abort which exits 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Objective selection: a zoo name plus optional regeneration parameters for
// the seeded families (dimension, condition number, seed, minimizer shift).
struct ObjectiveSpec {
  std::string name;
  std::optional<int> dim;
  std::optional<double> kappa;
  std::optional<std::uint64_t> obj_seed;
  std::optional<double> shift;
};

struct ResolvedObjective {
  Objective objective;
  std::string name;
  std::optional<double> alpha_ref;
  std::optional<double> mu_qg_ref;
};

// Looks the name up in the zoo, regenerating the seeded families when
// parameters are given. Unknown names and parameters passed to fixed
// objectives raise UsageError.
ResolvedObjective resolve_objective(const ObjectiveSpec& spec);

// One solver run: what to minimize, how, from where, and where the artifacts
// go. Fully determined by its fields, so identical specs reproduce identical
// output bytes.
struct RunSpec {
  ObjectiveSpec objective;
  SolverConfig solver;
  std::string x0 = "radius:2";  // comma-separated vector or "radius:r"
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::string trace_path;
  std::string report_path;
  std::string plot_path;
};

// "radius:r" draws x0 uniformly from the sphere of radius r around a known
// minimizer (projector applied to the origin) or around the origin when no
// minimizer is known; anything else parses as a comma-separated vector.
Vector make_x0(const Objective& obj, const std::string& spec, std::uint64_t seed);

Vector parse_vector(const std::string& text);

std::string run_spec_digest(const RunSpec& spec);

// Resolves the objective, fills L / alpha / mu from the zoo references when
// the spec leaves them unset, runs the solver, and writes the requested
// artifacts. On a solver abort the partial trace is still written before the
// SolverError propagates.
Trace execute_run(const RunSpec& spec);

// Merges traces of different methods on one objective into a combined CSV
// (k, then gap_<method> and bound_<method> per input) and an optional
// log-scale SVG with the bound curves dashed.
void run_compare(const std::vector<std::string>& trace_paths, const std::string& out_csv,
                 const std::string& plot_path);

// Flat key=value run configuration; keys are the CLI flag names without the
// leading dashes. Unknown keys raise UsageError.
void apply_runspec_kv(RunSpec& spec, const std::string& key, const std::string& value);
RunSpec parse_runspec_file(const std::string& path);

}  // namespace wqcopt
