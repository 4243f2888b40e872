#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wqcopt/objective.hpp"

namespace wqcopt {

enum class Method { gd, sesop, cg, cg_restart };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::gd;
  int T = 0;          // outer iterations; per-cycle length for cg_restart (0 = derive from alpha, L, mu)
  double L = 0.0;     // gradient Lipschitz constant used for 1/L steps
  std::optional<double> alpha;  // weak quasi-convexity constant
  std::optional<double> mu;     // quadratic growth constant
  std::optional<int> cycles;    // cg_restart: explicit cycle budget
  double inner_tol = 1e-10;
  int inner_max = 200;
  int record_every = 1;
};

std::string config_digest(const SolverConfig& cfg, double eps = 0.0);

// w_0 = 1, w_i = 1/2 + sqrt(1/4 + w_{i-1}^2). Satisfies the telescoping
// identity w_i^2 - w_{i-1}^2 = w_i and the growth bound w_i >= (i+1)/2.
struct OmegaSequence {
  std::vector<double> values;

  static OmegaSequence generate(int count);
  // max_i |w_i^2 - w_{i-1}^2 - w_i| / max(1, w_i^2). The identity residual is
  // scaled by the squared terms entering the subtraction, since those are the
  // quantities whose rounding the cancellation amplifies.
  double max_identity_residual() const;
  bool lower_bound_holds() const;
};

// Fixed-step gradient descent, x_{k+1} = x_k - (1/L) grad f(x_k). Every step
// is checked against f(x_{k+1}) <= f(x_k) - ||grad f(x_k)||^2 / (2L); a
// violation throws SolverError with the partial trace.
Trace gradient_descent(const Objective& obj, const Vector& x0, const SolverConfig& cfg);

// Sequential subspace method: x_{k+1} minimizes f over x_k + span{grad f(x_k),
// x_k - x_0, sum_{i<=k} w_i grad f(x_i)}, safeguarded by the plain gradient
// step so the gradient-descent progress inequality holds per iteration.
Trace sesop(const Objective& obj, const Vector& x0, const SolverConfig& cfg);

// Two-direction conjugate-gradient scheme: x_hat_k minimizes f over
// x_0 + span{x_k - x_0, q_k} with q_k the running gradient sum at the subspace
// minimizers, then x_{k+1} = x_hat_k - (1/L) grad f(x_hat_k).
Trace nemirovski_cg(const Objective& obj, const Vector& x0, const SolverConfig& cfg);

// ceil((4 / (3 alpha)) sqrt(L / mu)): cycle length after which one cg pass
// contracts the gap by 3/4 under weak quasi-convexity plus quadratic growth.
int cg_cycle_length(double alpha, double L, double mu);

// Chained cg cycles, each started from the previous output. The cycle budget
// comes from the certified contraction: smallest c with
// (f(x_0) - f_star) (3/4)^c <= eps when f_star is known, capped by
// cfg.cycles; exactly cfg.cycles when f_star is unknown. eps already met at
// x_0 means zero cycles.
Trace restarted_cg(const Objective& obj, const Vector& x0, const SolverConfig& cfg, double eps);

Trace run_solver(const Objective& obj, const Vector& x0, const SolverConfig& cfg, double eps = 0.0);

// Proven worst-case gap bounds, by method name:
//   "gd"         L R^2 / (alpha (k+1)),             k >= 0
//   "sesop"      2 L R^2 / (alpha^2 k^2),           k >= 1
//   "cg-restart" (L R^2 / 2) (3/4)^{floor(k / T_c)} with T_c = cg_cycle_length
// R is the distance from x_0 to the solution set; cg-restart needs mu.
double theoretical_bound(const std::string& method, int k, double L, double R, double alpha,
                         std::optional<double> mu = std::nullopt);

}  // namespace wqcopt
