#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wqcopt/objective.hpp"

namespace wqcopt {

// f(x) = 1/2 <x, Ax> + <b, x> for symmetric A. When A is positive definite
// the minimizer, f_star, and projector are filled in from A x = -b, and
// lipschitz_L is the largest-magnitude eigenvalue.
Objective quadratic(const Matrix& A, const Vector& b);

// f(x) = |x| (1 - e^{-|x|}) on the real line: non-convex, C^1, 1-weakly
// quasi-convex toward its unique minimizer 0, gradient Lipschitz with L = 2.
Objective abs_one_minus_exp();

// f(x) = (||x||^2 - 1)^2: the solution set is the unit sphere, so quadratic
// growth holds (mu = 2) while weak quasi-convexity fails near the origin.
// The projector maps 0 to the first coordinate axis point.
Objective sphere_quartic(int n);

// Seeded positive-definite quadratic: spectrum on the log-uniform grid
// between L/kappa and L (both attained), rotated by a seeded random
// orthogonal matrix. shift > 0 places the minimizer at a seeded point with
// ||x_star|| = shift instead of the origin.
Objective random_quadratic(int n, double kappa, double L, std::uint64_t seed, double shift = 0.0);

struct ZooEntry {
  std::string name;
  Objective objective;
  std::optional<double> alpha_ref;  // weak quasi-convexity constant in (0, 1]
  std::optional<double> mu_qg_ref;  // quadratic growth constant
  std::string notes;
};

// Named test objectives addressable from the command line.
std::vector<ZooEntry> zoo();

const ZooEntry* find_zoo_entry(const std::vector<ZooEntry>& entries, const std::string& name);

}  // namespace wqcopt
