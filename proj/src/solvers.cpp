#include "wqcopt/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wqcopt/subspace.hpp"
#include "wqcopt/text.hpp"

namespace wqcopt {

std::string method_name(Method m) {
  switch (m) {
    case Method::gd: return "gd";
    case Method::sesop: return "sesop";
    case Method::cg: return "cg";
    case Method::cg_restart: return "cg-restart";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "gd") return Method::gd;
  if (name == "sesop") return Method::sesop;
  if (name == "cg") return Method::cg;
  if (name == "cg-restart") return Method::cg_restart;
  return std::nullopt;
}

std::string config_digest(const SolverConfig& cfg, double eps) {
  std::string s = "method=" + method_name(cfg.method);
  s += ";T=" + std::to_string(cfg.T);
  s += ";L=" + format_double(cfg.L);
  s += ";alpha=" + (cfg.alpha ? format_double(*cfg.alpha) : std::string("none"));
  s += ";mu=" + (cfg.mu ? format_double(*cfg.mu) : std::string("none"));
  s += ";cycles=" + (cfg.cycles ? std::to_string(*cfg.cycles) : std::string("none"));
  s += ";inner_tol=" + format_double(cfg.inner_tol);
  s += ";inner_max=" + std::to_string(cfg.inner_max);
  s += ";record_every=" + std::to_string(cfg.record_every);
  s += ";eps=" + format_double(eps);
  return to_hex(fnv1a64(s));
}

OmegaSequence OmegaSequence::generate(int count) {
  if (count < 1) throw std::invalid_argument("OmegaSequence: count must be positive");
  OmegaSequence w;
  w.values.resize(count);
  w.values[0] = 1.0;
  for (int i = 1; i < count; ++i)
    w.values[i] = 0.5 + std::sqrt(0.25 + w.values[i - 1] * w.values[i - 1]);
  return w;
}

double OmegaSequence::max_identity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double wi = values[i];
    const double r = std::abs(wi * wi - values[i - 1] * values[i - 1] - wi);
    worst = std::max(worst, r / std::max(1.0, wi * wi));
  }
  return worst;
}

bool OmegaSequence::lower_bound_holds() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] < 0.5 * (static_cast<double>(i) + 1.0)) return false;
  return true;
}

namespace {

void validate(const Objective& obj, const Vector& x0, const SolverConfig& cfg) {
  if (x0.size() != obj.dim) throw std::invalid_argument("solver: x0 dimension mismatch");
  if (!(cfg.L > 0.0)) throw std::invalid_argument("solver: L must be positive");
  if (cfg.record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
  if (cfg.inner_max < 1) throw std::invalid_argument("solver: inner_max must be positive");
  if (!(cfg.inner_tol > 0.0)) throw std::invalid_argument("solver: inner_tol must be positive");
  if (cfg.alpha && (!(*cfg.alpha > 0.0) || *cfg.alpha > 1.0))
    throw std::invalid_argument("solver: alpha must be in (0, 1]");
  if (cfg.mu && !(*cfg.mu > 0.0)) throw std::invalid_argument("solver: mu must be positive");
}

std::optional<double> distance_to_solution(const Objective& obj, const Vector& x0) {
  if (!obj.has_projector()) return std::nullopt;
  return (x0 - obj.projector(x0)).norm();
}

double checked_value(const Objective& obj, const Vector& x, Trace& t, int k) {
  const double f = obj.value(x);
  if (!std::isfinite(f))
    throw SolverError("objective value non-finite at iteration " + std::to_string(k),
                      std::move(t));
  return f;
}

Vector checked_gradient(const Objective& obj, const Vector& x, Trace& t, int k) {
  Vector g = obj.gradient(x);
  if (!g.allFinite())
    throw SolverError("gradient non-finite at iteration " + std::to_string(k), std::move(t));
  return g;
}

void push_record(Trace& t, const Objective& obj, int k, const Vector& x, double f, double gnorm,
                 int inner_iters, double inner_residual) {
  IterateRecord rec;
  rec.k = k;
  rec.x = x;
  rec.f = f;
  rec.grad_norm = gnorm;
  if (obj.f_star) rec.gap = f - *obj.f_star;
  rec.inner_iters = inner_iters;
  rec.inner_residual = inner_residual;
  t.records.push_back(std::move(rec));
}

bool want_record(int k, int T, int every) { return every <= 1 || k % every == 0 || k == T; }

// f(next) <= f(from) - ||grad f(from)||^2 / (2L), with an absolute-plus-relative
// slack for rounding. A violation means L underestimates the local smoothness.
void check_descent(double f_next, double f_from, double grad_sq, double L, int k,
                   const char* from, Trace& t) {
  const double rhs = f_from - grad_sq / (2.0 * L) + 1e-9 * std::max(1.0, std::abs(f_from));
  if (!(f_next <= rhs))
    throw SolverError(std::string("descent inequality f(x_{k+1}) <= f(") + from +
                          ") - ||grad f(" + from + ")||^2 / (2 L) violated at iteration " +
                          std::to_string(k) + "; L is likely below the gradient Lipschitz constant",
                      std::move(t));
}

}  // namespace

Trace gradient_descent(const Objective& obj, const Vector& x0, const SolverConfig& cfg) {
  validate(obj, x0, cfg);
  if (cfg.T < 1) throw std::invalid_argument("solver: T must be >= 1");
  Trace t;
  t.method = "gd";
  t.config_digest = config_digest(cfg);
  t.R = distance_to_solution(obj, x0);

  Vector x = x0;
  double f = checked_value(obj, x, t, 0);
  Vector g = checked_gradient(obj, x, t, 0);
  push_record(t, obj, 0, x, f, g.norm(), 0, 0.0);

  const double step = 1.0 / cfg.L;
  for (int k = 0; k < cfg.T; ++k) {
    const Vector x_next = x - step * g;
    const double f_next = checked_value(obj, x_next, t, k + 1);
    check_descent(f_next, f, g.squaredNorm(), cfg.L, k, "x_k", t);
    x = x_next;
    f = f_next;
    g = checked_gradient(obj, x, t, k + 1);
    if (want_record(k + 1, cfg.T, cfg.record_every))
      push_record(t, obj, k + 1, x, f, g.norm(), 0, 0.0);
  }
  return t;
}

Trace sesop(const Objective& obj, const Vector& x0, const SolverConfig& cfg) {
  validate(obj, x0, cfg);
  if (cfg.T < 1) throw std::invalid_argument("solver: T must be >= 1");
  const OmegaSequence omega = OmegaSequence::generate(cfg.T);

  Trace t;
  t.method = "sesop";
  t.config_digest = config_digest(cfg);
  t.R = distance_to_solution(obj, x0);

  Vector x = x0;
  double f = checked_value(obj, x, t, 0);
  Vector g = checked_gradient(obj, x, t, 0);
  push_record(t, obj, 0, x, f, g.norm(), 0, 0.0);

  Vector s = Vector::Zero(obj.dim);  // sum_{i<=k} w_i grad f(x_i)
  for (int k = 0; k < cfg.T; ++k) {
    s += omega.values[k] * g;
    const AffineSubspace sub = reduce(x, {g, x - x0, s});
    const Vector safeguard = x - (1.0 / cfg.L) * g;
    SubspaceResult inner;
    try {
      inner = minimize(obj, sub, cfg.inner_tol, cfg.inner_max, &safeguard);
    } catch (const EvaluationError& e) {
      throw SolverError("inner solve at iteration " + std::to_string(k) + ": " + e.what(),
                        std::move(t));
    }
    check_descent(inner.f, f, g.squaredNorm(), cfg.L, k, "x_k", t);
    x = inner.x;
    f = inner.f;
    g = checked_gradient(obj, x, t, k + 1);

    // First-order optimality of the step-k subspace solve, evaluated at x_{k+1}:
    // grad f(x_{k+1}) is orthogonal to x_{k+1} - x_0 and to the weighted
    // gradient sum when the inner solve is exact.
    const double gscale = std::max(1.0, g.norm());
    const Vector disp = x - x0;
    OrthogonalityResidual orc;
    orc.k = k + 1;
    orc.displacement = disp.norm() > 0.0 ? std::abs(g.dot(disp)) / (gscale * disp.norm()) : 0.0;
    orc.weighted_grad_sum = s.norm() > 0.0 ? std::abs(g.dot(s)) / (gscale * s.norm()) : 0.0;
    t.orthogonality.push_back(orc);

    if (want_record(k + 1, cfg.T, cfg.record_every))
      push_record(t, obj, k + 1, x, f, g.norm(), inner.iters, inner.residual);
  }
  return t;
}

Trace nemirovski_cg(const Objective& obj, const Vector& x0, const SolverConfig& cfg) {
  validate(obj, x0, cfg);
  if (cfg.T < 1) throw std::invalid_argument("solver: T must be >= 1");

  Trace t;
  t.method = "cg";
  t.config_digest = config_digest(cfg);
  t.R = distance_to_solution(obj, x0);

  Vector x = x0;
  double f = checked_value(obj, x, t, 0);
  Vector g = checked_gradient(obj, x, t, 0);
  push_record(t, obj, 0, x, f, g.norm(), 0, 0.0);

  Vector q = Vector::Zero(obj.dim);
  CgDiagnostics diag;
  for (int k = 0; k < cfg.T; ++k) {
    const AffineSubspace sub = reduce(x0, {x - x0, q});
    SubspaceResult inner;
    try {
      inner = minimize(obj, sub, cfg.inner_tol, cfg.inner_max, &x);
    } catch (const EvaluationError& e) {
      throw SolverError("inner solve at iteration " + std::to_string(k) + ": " + e.what(),
                        std::move(t));
    }
    const Vector xhat = inner.x;
    const double fhat = inner.f;
    const Vector ghat = checked_gradient(obj, xhat, t, k);

    IterateRecord hr;
    hr.k = k;
    hr.x = xhat;
    hr.f = fhat;
    hr.grad_norm = ghat.norm();
    if (obj.f_star) hr.gap = fhat - *obj.f_star;
    hr.inner_iters = inner.iters;
    hr.inner_residual = inner.residual;
    t.hat_records.push_back(std::move(hr));

    const Vector x_next = xhat - (1.0 / cfg.L) * ghat;
    const double f_next = checked_value(obj, x_next, t, k + 1);
    check_descent(f_next, fhat, ghat.squaredNorm(), cfg.L, k, "x_hat_k", t);

    q += ghat;
    diag.grad_sq_sum += ghat.squaredNorm();
    x = x_next;
    f = f_next;
    g = checked_gradient(obj, x, t, k + 1);
    if (want_record(k + 1, cfg.T, cfg.record_every))
      push_record(t, obj, k + 1, x, f, g.norm(), inner.iters, inner.residual);
  }
  diag.q_norm_sq = q.squaredNorm();
  t.cg = diag;
  return t;
}

int cg_cycle_length(double alpha, double L, double mu) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("cg_cycle_length: alpha must be in (0, 1]");
  if (!(L > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("cg_cycle_length: L and mu must be positive");
  return static_cast<int>(std::ceil((4.0 / (3.0 * alpha)) * std::sqrt(L / mu)));
}

Trace restarted_cg(const Objective& obj, const Vector& x0, const SolverConfig& cfg, double eps) {
  validate(obj, x0, cfg);
  if (!cfg.alpha || !cfg.mu)
    throw std::invalid_argument("cg-restart: alpha and mu are required");
  if (cfg.cycles && *cfg.cycles < 1)
    throw std::invalid_argument("cg-restart: cycles must be >= 1");
  const int cycle_T = cfg.T > 0 ? cfg.T : cg_cycle_length(*cfg.alpha, cfg.L, *cfg.mu);

  Trace t;
  t.method = "cg-restart";
  t.config_digest = config_digest(cfg, eps);
  t.R = distance_to_solution(obj, x0);

  Vector x = x0;
  {
    const double f0 = checked_value(obj, x, t, 0);
    const Vector g0 = checked_gradient(obj, x, t, 0);
    push_record(t, obj, 0, x, f0, g0.norm(), 0, 0.0);
  }

  // Cycle budget from the certified per-cycle contraction of 3/4; the
  // measured gap is not consulted between cycles.
  std::optional<int> certified;
  if (eps > 0.0 && obj.f_star) {
    const double gap0 = t.records[0].f - *obj.f_star;
    int c = 0;
    if (gap0 > eps) {
      c = static_cast<int>(std::ceil(std::log(gap0 / eps) / std::log(4.0 / 3.0)));
      while (c > 0 && gap0 * std::pow(0.75, c - 1) <= eps) --c;
      while (gap0 * std::pow(0.75, c) > eps) ++c;
    }
    certified = c;
  }
  int planned = 0;
  if (certified && cfg.cycles)
    planned = std::min(*certified, *cfg.cycles);
  else if (certified)
    planned = *certified;
  else if (cfg.cycles)
    planned = *cfg.cycles;
  else
    throw std::invalid_argument(
        "cg-restart: provide eps with a known f_star, or an explicit cycle count");

  SolverConfig per_cycle = cfg;
  per_cycle.method = Method::cg;
  per_cycle.T = cycle_T;
  per_cycle.record_every = 1;
  per_cycle.cycles.reset();

  CgDiagnostics diag;
  auto merge = [&](const Trace& cyc, int offset) {
    for (const IterateRecord& r : cyc.records) {
      if (r.k == 0) continue;  // duplicate of the previous cycle's last record
      IterateRecord shifted = r;
      shifted.k += offset;
      t.records.push_back(std::move(shifted));
    }
    for (const IterateRecord& r : cyc.hat_records) {
      IterateRecord shifted = r;
      shifted.k += offset;
      t.hat_records.push_back(std::move(shifted));
    }
    if (cyc.cg) {
      diag.q_norm_sq += cyc.cg->q_norm_sq;
      diag.grad_sq_sum += cyc.cg->grad_sq_sum;
    }
  };

  for (int c = 0; c < planned; ++c) {
    const int offset = c * cycle_T;
    t.cycle_starts.push_back(offset);
    Trace cyc;
    try {
      cyc = nemirovski_cg(obj, x, per_cycle);
    } catch (SolverError& e) {
      merge(e.partial, offset);
      throw SolverError(e.what(), std::move(t));
    }
    merge(cyc, offset);
    x = cyc.records.back().x;
  }
  if (planned > 0) t.cg = diag;

  if (cfg.record_every > 1) {
    const int total_T = planned * cycle_T;
    std::vector<IterateRecord> kept;
    for (IterateRecord& r : t.records)
      if (want_record(r.k, total_T, cfg.record_every)) kept.push_back(std::move(r));
    t.records = std::move(kept);
  }
  return t;
}

Trace run_solver(const Objective& obj, const Vector& x0, const SolverConfig& cfg, double eps) {
  switch (cfg.method) {
    case Method::gd: return gradient_descent(obj, x0, cfg);
    case Method::sesop: return sesop(obj, x0, cfg);
    case Method::cg: return nemirovski_cg(obj, x0, cfg);
    case Method::cg_restart: return restarted_cg(obj, x0, cfg, eps);
  }
  throw std::invalid_argument("run_solver: unknown method");
}

double theoretical_bound(const std::string& method, int k, double L, double R, double alpha,
                         std::optional<double> mu) {
  if (!(L > 0.0)) throw std::invalid_argument("theoretical_bound: L must be positive");
  if (!(R >= 0.0)) throw std::invalid_argument("theoretical_bound: R must be >= 0");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("theoretical_bound: alpha must be in (0, 1]");
  if (method == "gd") {
    if (k < 0) throw std::invalid_argument("theoretical_bound: k must be >= 0");
    return L * R * R / (alpha * (k + 1));
  }
  if (method == "sesop") {
    if (k < 1) throw std::invalid_argument("theoretical_bound: the sesop bound starts at k = 1");
    return 2.0 * L * R * R / (alpha * alpha * static_cast<double>(k) * static_cast<double>(k));
  }
  if (method == "cg-restart") {
    if (k < 0) throw std::invalid_argument("theoretical_bound: k must be >= 0");
    if (!mu || !(*mu > 0.0))
      throw std::invalid_argument("theoretical_bound: cg-restart needs mu > 0");
    const int cycle_T = cg_cycle_length(alpha, L, *mu);
    return 0.5 * L * R * R * std::pow(0.75, static_cast<double>(k / cycle_T));
  }
  throw std::invalid_argument("theoretical_bound: no proven bound for method '" + method + "'");
}

}  // namespace wqcopt
