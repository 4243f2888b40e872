#include "wqcopt/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "wqcopt/rng.hpp"

namespace wqcopt {

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::wqc: return "wqc";
    case Condition::qg: return "qg";
    case Condition::pl: return "pl";
    case Condition::weak_pl: return "weak-pl";
    case Condition::star: return "star";
  }
  return "unknown";
}

std::optional<Condition> parse_condition(const std::string& name) {
  if (name == "wqc") return Condition::wqc;
  if (name == "qg") return Condition::qg;
  if (name == "pl") return Condition::pl;
  if (name == "weak-pl") return Condition::weak_pl;
  if (name == "star") return Condition::star;
  return std::nullopt;
}

std::string sampler_kind_name(Sampler::Kind k) {
  switch (k) {
    case Sampler::Kind::box_uniform: return "box-uniform";
    case Sampler::Kind::gaussian_around: return "gaussian-around";
    case Sampler::Kind::trajectory: return "trajectory";
  }
  return "unknown";
}

std::optional<Sampler::Kind> parse_sampler_kind(const std::string& name) {
  if (name == "box-uniform") return Sampler::Kind::box_uniform;
  if (name == "gaussian-around") return Sampler::Kind::gaussian_around;
  if (name == "trajectory") return Sampler::Kind::trajectory;
  return std::nullopt;
}

Sampler Sampler::box(int count, double lo, double hi, std::uint64_t seed) {
  Sampler s;
  s.kind = Kind::box_uniform;
  s.lo = lo;
  s.hi = hi;
  s.count = count;
  s.seed = seed;
  return s;
}

Sampler Sampler::gaussian(int count, Vector center, double scale, std::uint64_t seed) {
  Sampler s;
  s.kind = Kind::gaussian_around;
  s.center = std::move(center);
  s.scale = scale;
  s.count = count;
  s.seed = seed;
  return s;
}

Sampler Sampler::from_points(std::vector<Vector> points, int count) {
  Sampler s;
  s.kind = Kind::trajectory;
  s.trajectory = std::move(points);
  s.count = count;
  return s;
}

std::vector<Vector> Sampler::generate(int dim) const {
  if (count < 1) throw std::invalid_argument("sampler: count must be positive");
  std::vector<Vector> pts;
  switch (kind) {
    case Kind::box_uniform: {
      if (!(hi > lo)) throw std::invalid_argument("sampler: box bounds need hi > lo");
      Rng rng(seed);
      pts.reserve(count);
      for (int i = 0; i < count; ++i) pts.push_back(rng.uniform_box(dim, lo, hi));
      break;
    }
    case Kind::gaussian_around: {
      if (center.size() != dim) throw std::invalid_argument("sampler: center dimension mismatch");
      if (!(scale > 0.0)) throw std::invalid_argument("sampler: scale must be positive");
      Rng rng(seed);
      pts.reserve(count);
      for (int i = 0; i < count; ++i) pts.push_back(center + scale * rng.normal_vector(dim));
      break;
    }
    case Kind::trajectory: {
      if (trajectory.empty()) throw std::invalid_argument("sampler: trajectory is empty");
      const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(count), trajectory.size());
      pts.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (trajectory[i].size() != dim)
          throw std::invalid_argument("sampler: trajectory point dimension mismatch");
        pts.push_back(trajectory[i]);
      }
      break;
    }
  }
  return pts;
}

namespace {

constexpr double kGapSkip = 1e-12;  // 0/0 guard at the solution set

double reference_f_star(const Objective& obj, const Vector& x_star) {
  if (obj.f_star) return *obj.f_star;
  const double fs = obj.value(x_star);
  if (!std::isfinite(fs)) throw EvaluationError("objective value non-finite at x_star", x_star);
  return fs;
}

// Infimum reduction in sample order; ties keep the first witness, so the
// result is deterministic regardless of how samples might be evaluated.
ConditionEstimate reduce_inf(Condition c, const std::vector<Vector>& pts, std::uint64_t seed,
                             const std::function<std::optional<double>(const Vector&)>& ratio,
                             double lo_clamp, double hi_clamp) {
  ConditionEstimate est;
  est.condition = c;
  est.seed = seed;
  bool any = false;
  for (const Vector& x : pts) {
    const std::optional<double> r = ratio(x);
    if (!r) continue;
    if (!std::isfinite(*r)) throw EvaluationError("condition ratio non-finite at sample", x);
    if (!any || *r < est.raw_inf) {
      est.raw_inf = *r;
      est.witness = x;
    }
    any = true;
    ++est.samples;
  }
  if (!any)
    throw std::runtime_error("estimate_" + condition_name(c) +
                             ": no admissible samples (every point is at the minimum)");
  est.constant = std::min(std::max(est.raw_inf, lo_clamp), hi_clamp);
  return est;
}

ConditionEstimate wqc_from_points(const Objective& obj, const Vector& x_star,
                                  const std::vector<Vector>& pts, std::uint64_t seed) {
  if (x_star.size() != obj.dim) throw std::invalid_argument("estimate_wqc_alpha: x_star dimension");
  const double fs = reference_f_star(obj, x_star);
  auto ratio = [&](const Vector& x) -> std::optional<double> {
    const double gap = obj.value(x) - fs;
    if (!(gap > kGapSkip)) return std::nullopt;
    return obj.gradient(x).dot(x - x_star) / gap;
  };
  return reduce_inf(Condition::wqc, pts, seed, ratio, 0.0, 1.0);
}

StarConvexityReport star_from_points(const Objective& obj, const Vector& x_star,
                                     const std::vector<Vector>& pts,
                                     const std::vector<double>& lambdas) {
  if (x_star.size() != obj.dim)
    throw std::invalid_argument("check_star_convexity: x_star dimension");
  const double f_star_pt = obj.value(x_star);
  StarConvexityReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (const Vector& x : pts) {
    const double fx = obj.value(x);
    if (!std::isfinite(fx)) throw EvaluationError("objective value non-finite at sample", x);
    for (const double l : lambdas) {
      const Vector mid = l * x_star + (1.0 - l) * x;
      const double fm = obj.value(mid);
      if (!std::isfinite(fm)) throw EvaluationError("objective value non-finite on segment", mid);
      const double v = fm - l * f_star_pt - (1.0 - l) * fx;
      if (v > rep.worst_violation) {
        rep.worst_violation = v;
        rep.witness = x;
        rep.witness_lambda = l;
      }
    }
  }
  return rep;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = static_cast<double>(i) / 100.0;
  return grid;
}

}  // namespace

ConditionEstimate estimate_wqc_alpha(const Objective& obj, const Vector& x_star, const Sampler& s) {
  return wqc_from_points(obj, x_star, s.generate(obj.dim), s.seed);
}

ConditionEstimate estimate_qg_mu(const Objective& obj, const Sampler& s) {
  if (!obj.has_projector()) throw std::invalid_argument("estimate_qg_mu: objective has no projector");
  if (!obj.f_star) throw std::invalid_argument("estimate_qg_mu: objective has no f_star");
  const double fs = *obj.f_star;
  auto ratio = [&](const Vector& x) -> std::optional<double> {
    const double gap = obj.value(x) - fs;
    if (!(gap > kGapSkip)) return std::nullopt;
    const double d2 = (x - obj.projector(x)).squaredNorm();
    if (!(d2 > 0.0)) return std::nullopt;
    return 2.0 * gap / d2;
  };
  return reduce_inf(Condition::qg, s.generate(obj.dim), s.seed, ratio, 0.0,
                    std::numeric_limits<double>::infinity());
}

ConditionEstimate estimate_pl_mu(const Objective& obj, const Sampler& s) {
  if (!obj.f_star) throw std::invalid_argument("estimate_pl_mu: objective has no f_star");
  const double fs = *obj.f_star;
  auto ratio = [&](const Vector& x) -> std::optional<double> {
    const double gap = obj.value(x) - fs;
    if (!(gap > kGapSkip)) return std::nullopt;
    return obj.gradient(x).squaredNorm() / (2.0 * gap);
  };
  return reduce_inf(Condition::pl, s.generate(obj.dim), s.seed, ratio, 0.0,
                    std::numeric_limits<double>::infinity());
}

ConditionEstimate estimate_weak_pl_mu(const Objective& obj, const Vector& x_star,
                                      const Sampler& s) {
  if (x_star.size() != obj.dim)
    throw std::invalid_argument("estimate_weak_pl_mu: x_star dimension");
  const double fs = reference_f_star(obj, x_star);
  auto ratio = [&](const Vector& x) -> std::optional<double> {
    const double gap = obj.value(x) - fs;
    if (!(gap > kGapSkip)) return std::nullopt;
    const double r = obj.gradient(x).norm() * (x - x_star).norm() / gap;
    return r * r;
  };
  return reduce_inf(Condition::weak_pl, s.generate(obj.dim), s.seed, ratio, 0.0,
                    std::numeric_limits<double>::infinity());
}

StarConvexityReport check_star_convexity(const Objective& obj, const Vector& x_star,
                                         const Sampler& s, std::vector<double> lambdas) {
  if (lambdas.empty()) lambdas = default_lambda_grid();
  return star_from_points(obj, x_star, s.generate(obj.dim), lambdas);
}

Lemma1Report lemma1_crosscheck(const Objective& obj, const Vector& x_star, const Sampler& s) {
  const std::vector<Vector> pts = s.generate(obj.dim);
  Lemma1Report rep;
  rep.wqc = wqc_from_points(obj, x_star, pts, s.seed);
  rep.star = star_from_points(obj, x_star, pts, default_lambda_grid());
  rep.wqc_holds = rep.wqc.raw_inf >= 1.0 - 1e-6;
  rep.star_holds = rep.star.worst_violation <= 1e-9;
  return rep;
}

SmoothnessEstimate estimate_smoothness_L(const Objective& obj, const Sampler& s, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("estimate_smoothness_L: delta must be positive");
  const std::vector<Vector> pts = s.generate(obj.dim);
  Rng dir_rng(s.seed ^ 0x9e3779b97f4a7c15ull);  // direction stream independent of the samples
  SmoothnessEstimate est;
  est.seed = s.seed;
  bool any = false;
  for (const Vector& x : pts) {
    const Vector u = dir_rng.on_sphere(obj.dim, 1.0);
    const double step = delta * (1.0 + x.norm());
    const Vector g0 = obj.gradient(x);
    const Vector g1 = obj.gradient(x + step * u);
    if (!g0.allFinite() || !g1.allFinite())
      throw EvaluationError("gradient non-finite at smoothness probe", x);
    const double ratio = (g1 - g0).norm() / step;
    if (!any || ratio > est.raw_sup) {
      est.raw_sup = ratio;
      est.witness = x;
    }
    any = true;
    ++est.samples;
  }
  return est;
}

}  // namespace wqcopt
