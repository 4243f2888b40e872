#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wqcopt/objective.hpp"

namespace wqcopt {

enum class Condition { wqc, qg, pl, weak_pl, star };

std::string condition_name(Condition c);
std::optional<Condition> parse_condition(const std::string& name);

// Deterministic point generator: identical (kind, params, count, seed) yields
// identical samples. Counts are prefix-stable: the first m samples of a
// count-n sampler (m < n) equal the count-m sampler's output.
struct Sampler {
  enum class Kind { box_uniform, gaussian_around, trajectory };

  Kind kind = Kind::box_uniform;
  double lo = -1.0;           // box_uniform bounds
  double hi = 1.0;
  Vector center;              // gaussian_around
  double scale = 1.0;
  std::vector<Vector> trajectory;  // recorded iterates
  int count = 10000;
  std::uint64_t seed = 0;

  static Sampler box(int count, double lo, double hi, std::uint64_t seed);
  static Sampler gaussian(int count, Vector center, double scale, std::uint64_t seed);
  static Sampler from_points(std::vector<Vector> points, int count);

  std::vector<Vector> generate(int dim) const;
};

std::string sampler_kind_name(Sampler::Kind k);
std::optional<Sampler::Kind> parse_sampler_kind(const std::string& name);

// A sampled infimum of a condition's defining ratio. constant is raw_inf
// clamped to the condition's admissible range; samples counts the admissible
// points (those with f(x) - f_star > 1e-12, and off the solution set for qg).
struct ConditionEstimate {
  Condition condition = Condition::wqc;
  double raw_inf = 0.0;
  double constant = 0.0;
  Vector witness;
  int samples = 0;
  std::uint64_t seed = 0;
};

// inf of <grad f(x), x - x_star> / (f(x) - f_star); constant clamped to [0, 1].
// f_star falls back to value(x_star) when the objective does not carry it.
ConditionEstimate estimate_wqc_alpha(const Objective& obj, const Vector& x_star, const Sampler& s);

// inf of 2 (f(x) - f_star) / ||x - P(x)||^2 over samples off the solution set.
ConditionEstimate estimate_qg_mu(const Objective& obj, const Sampler& s);

// inf of ||grad f(x)||^2 / (2 (f(x) - f_star)).
ConditionEstimate estimate_pl_mu(const Objective& obj, const Sampler& s);

// inf of (||grad f(x)|| ||x - x_star|| / (f(x) - f_star))^2.
ConditionEstimate estimate_weak_pl_mu(const Objective& obj, const Vector& x_star, const Sampler& s);

struct StarConvexityReport {
  double worst_violation = 0.0;  // max of f(l x_star + (1-l) x) - l f(x_star) - (1-l) f(x)
  Vector witness;
  double witness_lambda = 0.0;
};

// Violation of the segment inequality toward x_star over samples and a lambda
// grid; an empty grid means 101 uniform points in [0, 1].
StarConvexityReport check_star_convexity(const Objective& obj, const Vector& x_star,
                                         const Sampler& s, std::vector<double> lambdas = {});

// Both sides of the equivalence "1-weakly-quasi-convex iff star-convex",
// evaluated on one shared sample set. Ratio tolerance 1e-6, violation
// tolerance 1e-9. Estimates are sampled evidence, not certificates.
struct Lemma1Report {
  ConditionEstimate wqc;
  StarConvexityReport star;
  bool wqc_holds = false;   // wqc.raw_inf >= 1 - 1e-6
  bool star_holds = false;  // star.worst_violation <= 1e-9
  bool agree() const { return wqc_holds == star_holds; }
};

Lemma1Report lemma1_crosscheck(const Objective& obj, const Vector& x_star, const Sampler& s);

// Sampled lower bound on the gradient Lipschitz constant:
// sup ||grad f(x + delta u) - grad f(x)|| / delta over samples x with seeded
// unit directions u. Certifies stored lipschitz_L references; not one of the
// five named conditions.
struct SmoothnessEstimate {
  double raw_sup = 0.0;
  Vector witness;
  int samples = 0;
  std::uint64_t seed = 0;
};

SmoothnessEstimate estimate_smoothness_L(const Objective& obj, const Sampler& s,
                                         double delta = 1e-4);

}  // namespace wqcopt
