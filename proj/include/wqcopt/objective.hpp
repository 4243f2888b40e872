#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wqcopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ValueFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;
using ProjectorFn = std::function<Vector(const Vector&)>;

// Differentiable objective with whatever side information is actually known.
// Oracles must be pure functions of x; a single instance may be evaluated
// from several threads at once.
struct Objective {
  int dim = 0;
  ValueFn value;
  GradientFn gradient;
  std::optional<double> lipschitz_L;  // gradient Lipschitz constant, if known
  std::optional<double> f_star;       // global minimum value, if known
  ProjectorFn projector;              // nearest point of the solution set, empty if unknown

  bool has_projector() const { return static_cast<bool>(projector); }
};

// Thrown when an oracle returns a non-finite value at a point the caller
// committed to. The offending point is carried along for diagnostics.
struct EvaluationError : std::runtime_error {
  EvaluationError(const std::string& what, Vector probe_point)
      : std::runtime_error(what), probe(std::move(probe_point)) {}
  Vector probe;
};

struct IterateRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  std::optional<double> gap;  // f - f_star when f_star is known
  int inner_iters = 0;        // subspace solver iterations that produced this iterate
  double inner_residual = 0.0;
};

// Residuals of the two inner products that are zero for an exact subspace
// minimizer: <grad f(x_k), x_k - x_0> and <grad f(x_k), sum_{i<k} w_i grad f(x_i)>,
// each normalized by max(1, ||grad||) times the norm of the other factor.
struct OrthogonalityResidual {
  int k = 0;
  double displacement = 0.0;
  double weighted_grad_sum = 0.0;
};

// Running sums for the conjugate-gradient identity ||q_T||^2 = sum ||g_k||^2
// that holds when every subspace minimization is exact.
struct CgDiagnostics {
  double q_norm_sq = 0.0;
  double grad_sq_sum = 0.0;
};

struct Trace {
  std::string objective_name;
  std::string method;
  std::string config_digest;
  std::optional<double> R;  // ||x_0 - P(x_0)|| when the solution set is known
  std::vector<IterateRecord> records;
  std::vector<IterateRecord> hat_records;            // cg: subspace minimizers, by outer k
  std::vector<OrthogonalityResidual> orthogonality;  // sesop: one entry per k >= 1
  std::optional<CgDiagnostics> cg;
  std::vector<int> cycle_starts;  // cg-restart: record index where each cycle begins

  const IterateRecord& back() const { return records.back(); }
};

// Thrown when a solver detects a broken invariant (non-finite iterate,
// violated descent inequality). The trace up to the failure is preserved.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, Trace partial_trace)
      : std::runtime_error(what), partial(std::move(partial_trace)) {}
  Trace partial;
};

}  // namespace wqcopt
