#include "wqcopt/gradient_check.hpp"

#include <cmath>

namespace wqcopt {

Vector finite_difference_gradient(const Objective& obj, const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = obj.value(probe);
    probe[i] = x[i] - h;
    const double fm = obj.value(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      Vector bad = x;
      bad[i] = std::isfinite(fp) ? x[i] - h : x[i] + h;
      throw EvaluationError("objective evaluated non-finite at finite-difference probe", bad);
    }
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

GradientCheckResult check_gradient(const Objective& obj, const Vector& x, double h, double rtol) {
  const Vector analytic = obj.gradient(x);
  if (!analytic.allFinite()) throw EvaluationError("gradient evaluated non-finite", x);
  const Vector numeric = finite_difference_gradient(obj, x, h);
  GradientCheckResult r;
  r.error = (analytic - numeric).norm() / std::max(1.0, analytic.norm());
  r.ok = r.error <= rtol;
  return r;
}

}  // namespace wqcopt
