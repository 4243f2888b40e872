#pragma once

#include <vector>

#include "wqcopt/objective.hpp"

namespace wqcopt {

// Affine set base + span(directions) with an orthonormal direction basis.
struct AffineSubspace {
  Vector base;
  std::vector<Vector> directions;

  int dim() const { return static_cast<int>(directions.size()); }
  // base + sum_j tau[j] * directions[j]
  Vector point(const Vector& tau) const;
  // Coordinates of the projection of x onto the subspace: D^T (x - base).
  Vector coordinates(const Vector& x) const;
};

// Modified Gram-Schmidt with one re-orthogonalization pass. A direction whose
// residual after orthogonalization has norm <= 1e-12 * (||d|| + 1) is dropped,
// so near-duplicate and zero directions never produce an ill-conditioned basis.
AffineSubspace reduce(const Vector& base, const std::vector<Vector>& raw_directions);

struct SubspaceResult {
  Vector x;
  Vector tau;            // x == base + sum tau[j] d[j] (up to roundoff on the safeguard path)
  double f = 0.0;
  double residual = 0.0;  // ||D^T grad f(x)|| / max(1, ||grad f(x)||)
  int iters = 0;
  bool converged = false;  // residual <= tol was reached
};

// Minimize f over the subspace by damped Newton in the reduced coordinates,
// with the reduced Hessian taken by central differences of the reduced
// gradient and a backtracking gradient step as fallback. Starting point is
// the better of the base and the safeguard's projection. Guarantees
// f(result) <= f(base), and f(result) <= f(safeguard) when one is given
// (the literal safeguard point is returned if the iteration cannot beat it).
// Non-finite values at trial points reject the step; non-finite values at
// committed points throw EvaluationError.
SubspaceResult minimize(const Objective& obj, const AffineSubspace& sub, double tol = 1e-10,
                        int max_inner = 200, const Vector* safeguard = nullptr);

}  // namespace wqcopt
