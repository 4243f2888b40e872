#pragma once

#include "wqcopt/objective.hpp"

namespace wqcopt {

struct GradientCheckResult {
  bool ok = false;
  double error = 0.0;  // ||analytic - finite difference|| / max(1, ||analytic||)
};

// Central differences, (f(x + h e_i) - f(x - h e_i)) / (2h) per coordinate.
// Throws EvaluationError if any probe evaluates non-finite.
Vector finite_difference_gradient(const Objective& obj, const Vector& x, double h = 1e-6);

// Compares the analytic gradient against central differences at x.
GradientCheckResult check_gradient(const Objective& obj, const Vector& x, double h = 1e-6,
                                   double rtol = 1e-6);

}  // namespace wqcopt
