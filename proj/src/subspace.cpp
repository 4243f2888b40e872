#include "wqcopt/subspace.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

namespace wqcopt {

Vector AffineSubspace::point(const Vector& tau) const {
  Vector x = base;
  for (int j = 0; j < dim(); ++j) x += tau[j] * directions[j];
  return x;
}

Vector AffineSubspace::coordinates(const Vector& x) const {
  Vector tau(dim());
  const Vector r = x - base;
  for (int j = 0; j < dim(); ++j) tau[j] = directions[j].dot(r);
  return tau;
}

AffineSubspace reduce(const Vector& base, const std::vector<Vector>& raw_directions) {
  AffineSubspace sub;
  sub.base = base;
  for (const Vector& d : raw_directions) {
    if (d.size() != base.size()) throw std::invalid_argument("reduce: dimension mismatch");
    if (!d.allFinite()) throw std::invalid_argument("reduce: direction has non-finite entries");
    Vector v = d;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : sub.directions) v -= q.dot(v) * q;
    if (v.norm() <= 1e-12 * (d.norm() + 1.0)) continue;
    sub.directions.push_back(v / v.norm());
  }
  return sub;
}

namespace {

double committed_value(const Objective& obj, const Vector& x) {
  const double f = obj.value(x);
  if (!std::isfinite(f)) throw EvaluationError("objective value is non-finite", x);
  return f;
}

Vector committed_gradient(const Objective& obj, const Vector& x) {
  Vector g = obj.gradient(x);
  if (!g.allFinite()) throw EvaluationError("gradient is non-finite", x);
  return g;
}

double normalized_residual(const AffineSubspace& sub, const Vector& g_full, Vector& reduced_out) {
  reduced_out.resize(sub.dim());
  for (int j = 0; j < sub.dim(); ++j) reduced_out[j] = sub.directions[j].dot(g_full);
  return reduced_out.norm() / std::max(1.0, g_full.norm());
}

// Armijo backtracking along s. Non-finite trial values just shrink the step.
// Returns the accepted t, or 0 if no acceptable step exists down to t_min.
double backtrack(const Objective& obj, const AffineSubspace& sub, const Vector& tau, double f_cur,
                 const Vector& s, double slope, double& f_out) {
  double t = 1.0;
  for (int i = 0; i < 60; ++i, t *= 0.5) {
    const double f_t = obj.value(sub.point(tau + t * s));
    if (std::isfinite(f_t) && f_t <= f_cur + 1e-4 * t * slope) {
      f_out = f_t;
      return t;
    }
    if (t < 1e-18) break;
  }
  return 0.0;
}

}  // namespace

SubspaceResult minimize(const Objective& obj, const AffineSubspace& sub, double tol, int max_inner,
                        const Vector* safeguard) {
  const int m = sub.dim();
  SubspaceResult res;

  Vector tau = Vector::Zero(m);
  double f_cur = committed_value(obj, sub.base);

  double f_sg = std::numeric_limits<double>::infinity();
  Vector tau_sg;
  if (safeguard != nullptr) {
    f_sg = committed_value(obj, *safeguard);
    tau_sg = sub.coordinates(*safeguard);
    if (m > 0) {
      const double f_proj = obj.value(sub.point(tau_sg));
      if (std::isfinite(f_proj) && f_proj < f_cur) {
        tau = tau_sg;
        f_cur = f_proj;
      }
    }
  }

  Vector x = sub.point(tau);
  Vector g_full = committed_gradient(obj, x);
  Vector r;
  double resid = normalized_residual(sub, g_full, r);

  int it = 0;
  bool converged = resid <= tol;
  while (!converged && it < max_inner && m > 0) {
    ++it;

    // Reduced Hessian by central differences of the reduced gradient.
    const double delta = 1e-6 * (1.0 + tau.norm());
    Matrix H(m, m);
    bool h_ok = true;
    for (int j = 0; j < m && h_ok; ++j) {
      const Vector gp = obj.gradient(sub.point(tau + delta * Vector::Unit(m, j)));
      const Vector gm = obj.gradient(sub.point(tau - delta * Vector::Unit(m, j)));
      if (!gp.allFinite() || !gm.allFinite()) {
        h_ok = false;
        break;
      }
      for (int i = 0; i < m; ++i) H(i, j) = sub.directions[i].dot(gp - gm) / (2.0 * delta);
    }

    double t = 0.0;
    double f_next = f_cur;
    Vector s;
    if (h_ok) {
      H = (0.5 * (H + H.transpose())).eval();
      const double h_scale = std::max(1.0, H.cwiseAbs().maxCoeff());
      double lam = 0.0;
      for (int level = 0; level < 9 && t == 0.0; ++level) {
        Eigen::LDLT<Matrix> ldlt(H + lam * Matrix::Identity(m, m));
        if (ldlt.info() == Eigen::Success) {
          s = -ldlt.solve(r);
          const double slope = r.dot(s);
          if (s.allFinite() && slope < 0.0) t = backtrack(obj, sub, tau, f_cur, s, slope, f_next);
        }
        lam = lam == 0.0 ? 1e-8 * h_scale : lam * 100.0;
      }
    }
    if (t == 0.0) {
      // Damped Newton found no acceptable step; plain gradient direction.
      s = -r;
      const double slope = -r.squaredNorm();
      if (slope < 0.0) t = backtrack(obj, sub, tau, f_cur, s, slope, f_next);
    }
    if (t == 0.0) break;  // at the numerical floor of f along every tried direction

    tau += t * s;
    f_cur = f_next;
    x = sub.point(tau);
    g_full = committed_gradient(obj, x);
    resid = normalized_residual(sub, g_full, r);
    converged = resid <= tol;
  }

  // Safeguard dominance is exact: if the iteration could not beat the literal
  // safeguard point, return that point.
  if (safeguard != nullptr && f_cur > f_sg) {
    x = *safeguard;
    tau = tau_sg;
    f_cur = f_sg;
    g_full = committed_gradient(obj, x);
    resid = normalized_residual(sub, g_full, r);
    converged = resid <= tol;
  }

  res.x = x;
  res.tau = tau;
  res.f = f_cur;
  res.residual = resid;
  res.iters = it;
  res.converged = converged;
  return res;
}

}  // namespace wqcopt
