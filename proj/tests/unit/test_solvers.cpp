#include <cmath>
#include <optional>
#include <stdexcept>

#include "doctest.h"
#include "wqcopt/functions.hpp"
#include "wqcopt/rng.hpp"
#include "wqcopt/solvers.hpp"

using namespace wqcopt;

namespace {

// f(x) = x^2 on the line, minimum 0 at the origin.
Objective square_1d() {
  Matrix A(1, 1);
  A << 2.0;
  Vector b = Vector::Zero(1);
  return quadratic(A, b);
}

Vector scalar(double v) {
  Vector x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("omega sequence frozen prefix") {
  const auto w = OmegaSequence::generate(4);
  REQUIRE(w.values.size() == 4);
  CHECK(w.values[0] == 1.0);
  CHECK(w.values[1] == doctest::Approx(1.6180339887498949).epsilon(1e-15));
  CHECK(w.values[2] == doctest::Approx(2.1935270853310538).epsilon(1e-15));
  CHECK(w.values[3] == doctest::Approx(2.7497913401204448).epsilon(1e-15));
  // w_1 is the golden ratio: w^2 - w - 1 = 0 with w > 0
  CHECK(std::abs(w.values[1] - (1.0 + std::sqrt(5.0)) / 2.0) <= 1e-15);
}

TEST_CASE("omega sequence identity and growth over a long run") {
  const auto w = OmegaSequence::generate(1000);
  CHECK(w.max_identity_residual() <= 1e-12);
  CHECK(w.lower_bound_holds());
  CHECK(w.values.back() >= 500.0);
  CHECK(OmegaSequence::generate(1).values == std::vector<double>{1.0});
}

TEST_CASE("gradient descent solves the 1-d square in one exact step") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 1;
  cfg.L = 2.0;
  const Trace t = gradient_descent(obj, scalar(1.0), cfg);
  REQUIRE(t.records.size() == 2);
  CHECK(t.method == "gd");
  CHECK(t.records[0].f == 1.0);
  CHECK(t.records[1].x[0] == 0.0);
  CHECK(t.records[1].f == 0.0);
  CHECK(t.records[1].grad_norm == 0.0);
  REQUIRE(t.records[1].gap.has_value());
  CHECK(*t.records[1].gap == 0.0);
  REQUIRE(t.R.has_value());
  CHECK(*t.R == 1.0);
}

TEST_CASE("gradient descent with an over-estimated L halves the iterate") {
  // Step 1/4 on f = x^2 gives x_{k+1} = x_k / 2, so every iterate and value
  // is an exact power of two and the trace can be compared bitwise.
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 20;
  cfg.L = 4.0;
  const Trace t = gradient_descent(obj, scalar(1.0), cfg);
  REQUIRE(t.records.size() == 21);
  for (int k = 0; k <= 20; ++k) {
    CHECK(t.records[k].k == k);
    CHECK(t.records[k].x[0] == std::ldexp(1.0, -k));
    CHECK(t.records[k].f == std::ldexp(1.0, -2 * k));
  }
}

TEST_CASE("gradient descent aborts when L is below the true constant") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 10;
  cfg.L = 1.0;  // true constant is 2
  bool thrown = false;
  try {
    gradient_descent(obj, scalar(1.0), cfg);
  } catch (const SolverError& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("descent inequality") != std::string::npos);
    REQUIRE(!e.partial.records.empty());
    CHECK(e.partial.records[0].k == 0);
  }
  CHECK(thrown);
}

TEST_CASE("a lying gradient oracle is caught by the descent check") {
  Objective obj;
  obj.dim = 1;
  obj.value = [](const Vector& x) { return x[0] * x[0]; };
  obj.gradient = [](const Vector& x) -> Vector {
    Vector g(1);
    g[0] = -2.0 * x[0];  // wrong sign: pushes uphill
    return g;
  };
  obj.lipschitz_L = 2.0;
  SolverConfig cfg;
  cfg.T = 5;
  cfg.L = 2.0;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), cfg), SolverError);
  try {
    gradient_descent(obj, scalar(1.0), cfg);
  } catch (const SolverError& e) {
    CHECK(e.partial.records.size() >= 1);
  }
}

TEST_CASE("record_every keeps multiples plus the final iterate") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 10;
  cfg.L = 4.0;
  cfg.record_every = 3;
  const Trace t = gradient_descent(obj, scalar(1.0), cfg);
  REQUIRE(t.records.size() == 5);
  CHECK(t.records[0].k == 0);
  CHECK(t.records[1].k == 3);
  CHECK(t.records[2].k == 6);
  CHECK(t.records[3].k == 9);
  CHECK(t.records[4].k == 10);

  cfg.record_every = 4;
  const Trace t2 = gradient_descent(obj, scalar(1.0), cfg);
  REQUIRE(t2.records.size() == 4);
  CHECK(t2.records[3].k == 10);
}

TEST_CASE("solver input validation") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 1;
  cfg.L = 2.0;
  CHECK_THROWS_AS(gradient_descent(obj, Vector::Zero(2), cfg), std::invalid_argument);
  SolverConfig bad = cfg;
  bad.L = 0.0;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), bad), std::invalid_argument);
  bad = cfg;
  bad.T = 0;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), bad), std::invalid_argument);
  bad = cfg;
  bad.record_every = 0;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), bad), std::invalid_argument);
  bad = cfg;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), bad), std::invalid_argument);
  bad = cfg;
  bad.mu = -1.0;
  CHECK_THROWS_AS(gradient_descent(obj, scalar(1.0), bad), std::invalid_argument);
}

TEST_CASE("sesop reaches the 1-d minimum at the first iteration") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 1;
  cfg.L = 2.0;
  const Trace t = sesop(obj, scalar(1.0), cfg);
  REQUIRE(t.records.size() == 2);
  CHECK(t.method == "sesop");
  CHECK(t.records[1].f == 0.0);
  REQUIRE(t.records[1].gap.has_value());
  CHECK(*t.records[1].gap == 0.0);
  REQUIRE(t.orthogonality.size() == 1);
  CHECK(t.orthogonality[0].k == 1);
}

TEST_CASE("sesop descends monotonically on a random quadratic") {
  const Objective obj = random_quadratic(8, 30.0, 1.0, 12);
  const Vector x0 = obj.projector(Vector::Zero(8)) + Rng(5).on_sphere(8, 2.0);
  SolverConfig cfg;
  cfg.T = 25;
  cfg.L = 1.0;
  const Trace t = sesop(obj, x0, cfg);
  REQUIRE(t.records.size() == 26);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    const double prev = t.records[i - 1].f;
    CHECK(t.records[i].f <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
  }
  CHECK(*t.records.back().gap < *t.records.front().gap);
  CHECK(t.orthogonality.size() == 25);
}

TEST_CASE("sesop orthogonality residuals are tiny when inner solves are tight") {
  const Objective obj = random_quadratic(8, 30.0, 1.0, 12);
  const Vector x0 = obj.projector(Vector::Zero(8)) + Rng(5).on_sphere(8, 2.0);
  SolverConfig cfg;
  cfg.T = 15;
  cfg.L = 1.0;
  cfg.inner_tol = 1e-12;
  const Trace t = sesop(obj, x0, cfg);
  for (const auto& o : t.orthogonality) {
    CHECK(o.displacement <= 1e-8);
    CHECK(o.weighted_grad_sum <= 1e-8);
  }
}

TEST_CASE("cg on the 1-d square: hat point, exact finish, gradient-sum identity") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 1;
  cfg.L = 2.0;
  const Trace t = nemirovski_cg(obj, scalar(1.0), cfg);
  CHECK(t.method == "cg");
  REQUIRE(t.records.size() == 2);
  REQUIRE(t.hat_records.size() == 1);
  // the k=0 subspace is the single point x_0
  CHECK(t.hat_records[0].x[0] == 1.0);
  CHECK(t.hat_records[0].f == 1.0);
  CHECK(t.records[1].x[0] == 0.0);
  CHECK(*t.records[1].gap == 0.0);
  REQUIRE(t.cg.has_value());
  CHECK(t.cg->q_norm_sq == 4.0);
  CHECK(t.cg->grad_sq_sum == 4.0);
}

TEST_CASE("cg gradient-sum identity holds to roundoff on a quadratic") {
  const Objective obj = random_quadratic(12, 40.0, 1.0, 23);
  const Vector x0 = obj.projector(Vector::Zero(12)) + Rng(6).on_sphere(12, 2.0);
  SolverConfig cfg;
  cfg.T = 20;
  cfg.L = 1.0;
  cfg.inner_tol = 1e-12;
  const Trace t = nemirovski_cg(obj, x0, cfg);
  REQUIRE(t.cg.has_value());
  const double scale = std::max({1.0, t.cg->q_norm_sq, t.cg->grad_sq_sum});
  CHECK(std::abs(t.cg->q_norm_sq - t.cg->grad_sq_sum) <= 1e-8 * scale);
}

TEST_CASE("cg cycle length matches the closed form") {
  CHECK(cg_cycle_length(1.0, 1.0, 1.0 / 10.0) == 5);
  CHECK(cg_cycle_length(1.0, 1.0, 1.0 / 100.0) == 14);
  CHECK(cg_cycle_length(1.0, 1.0, 1.0 / 1000.0) == 43);
  CHECK(cg_cycle_length(0.5, 1.0, 1.0) == 3);  // ceil(8/3)
  CHECK_THROWS_AS(cg_cycle_length(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cg_cycle_length(1.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cg_cycle_length(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cg_cycle_length(1.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("restarted cg runs the certified cycle budget, not the measured gap") {
  const Objective obj = random_quadratic(6, 25.0, 1.0, 9);
  const Vector x0 = Vector::Ones(6);
  SolverConfig cfg;
  cfg.L = 1.0;
  cfg.alpha = 1.0;
  cfg.mu = 1.0 / 25.0;
  const int tc = cg_cycle_length(1.0, 1.0, 1.0 / 25.0);
  REQUIRE(tc == 7);

  const double gap0 = obj.value(x0) - *obj.f_star;
  REQUIRE(gap0 > 0.0);
  // eps sits exactly on the 5-cycle certificate boundary
  const double eps = gap0 * std::pow(0.75, 5);
  const Trace t = restarted_cg(obj, x0, cfg, eps);
  CHECK(t.method == "cg-restart");
  REQUIRE(t.cycle_starts.size() == 5);
  CHECK(t.cycle_starts[0] == 0);
  CHECK(t.cycle_starts[1] == 7);
  CHECK(t.cycle_starts[4] == 28);
  CHECK(t.records.back().k == 35);
  CHECK(t.records.size() == 36);
  CHECK(t.hat_records.size() == 35);
  CHECK(t.cg.has_value());
  CHECK(*t.records.back().gap <= eps);
}

TEST_CASE("restarted cg cycle budget edge cases") {
  const Objective obj = random_quadratic(6, 25.0, 1.0, 9);
  const Vector x0 = Vector::Ones(6);
  SolverConfig cfg;
  cfg.L = 1.0;
  cfg.alpha = 1.0;
  cfg.mu = 1.0 / 25.0;
  const double gap0 = obj.value(x0) - *obj.f_star;
  const double eps5 = gap0 * std::pow(0.75, 5);

  SUBCASE("explicit cycle cap wins over the certificate") {
    cfg.cycles = 3;
    const Trace t = restarted_cg(obj, x0, cfg, eps5);
    CHECK(t.cycle_starts.size() == 3);
    CHECK(t.records.back().k == 21);
  }
  SUBCASE("target already met at the start means zero cycles") {
    const Trace t = restarted_cg(obj, x0, cfg, gap0 * 1.5);
    CHECK(t.records.size() == 1);
    CHECK(t.cycle_starts.empty());
    CHECK(!t.cg.has_value());
  }
  SUBCASE("unknown minimum value falls back to the explicit cycle count") {
    Objective blind = obj;
    blind.f_star.reset();
    blind.projector = nullptr;
    cfg.cycles = 4;
    const Trace t = restarted_cg(blind, x0, cfg, 0.1);
    CHECK(t.cycle_starts.size() == 4);
    CHECK(t.records.back().k == 28);
    CHECK(!t.records.back().gap.has_value());
  }
  SUBCASE("no certificate and no cycle count is rejected") {
    Objective blind = obj;
    blind.f_star.reset();
    blind.projector = nullptr;
    CHECK_THROWS_AS(restarted_cg(blind, x0, cfg, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(restarted_cg(obj, x0, cfg, 0.0), std::invalid_argument);
  }
  SUBCASE("cycle counts below one are rejected") {
    cfg.cycles = 0;
    CHECK_THROWS_AS(restarted_cg(obj, x0, cfg, eps5), std::invalid_argument);
  }
  SUBCASE("alpha and mu are required") {
    SolverConfig bare;
    bare.L = 1.0;
    bare.cycles = 2;
    CHECK_THROWS_AS(restarted_cg(obj, x0, bare, 0.0), std::invalid_argument);
  }
}

TEST_CASE("restarted cg contracts the gap across cycles on a quadratic") {
  const Objective obj = random_quadratic(6, 25.0, 1.0, 9);
  const Vector x0 = Vector::Ones(6);
  SolverConfig cfg;
  cfg.L = 1.0;
  cfg.alpha = 1.0;
  cfg.mu = 1.0 / 25.0;
  cfg.cycles = 4;
  const Trace t = restarted_cg(obj, x0, cfg, 0.0);
  const double gap0 = *t.records.front().gap;
  const int tc = 7;
  for (int c = 1; c <= 4; ++c) {
    const auto& rec = t.records[static_cast<std::size_t>(c) * tc];
    REQUIRE(rec.k == c * tc);
    CHECK(*rec.gap <= gap0 * std::pow(0.75, c) + 1e-12 * std::max(1.0, gap0));
  }
}

TEST_CASE("run_solver dispatches on the configured method") {
  const Objective obj = square_1d();
  SolverConfig cfg;
  cfg.T = 1;
  cfg.L = 2.0;
  CHECK(run_solver(obj, scalar(1.0), cfg).method == "gd");
  cfg.method = Method::sesop;
  CHECK(run_solver(obj, scalar(1.0), cfg).method == "sesop");
  cfg.method = Method::cg;
  CHECK(run_solver(obj, scalar(1.0), cfg).method == "cg");
  cfg.method = Method::cg_restart;
  cfg.alpha = 1.0;
  cfg.mu = 2.0;
  cfg.cycles = 1;
  CHECK(run_solver(obj, scalar(1.0), cfg).method == "cg-restart");
}

TEST_CASE("method names round trip") {
  CHECK(method_name(Method::gd) == "gd");
  CHECK(method_name(Method::sesop) == "sesop");
  CHECK(method_name(Method::cg) == "cg");
  CHECK(method_name(Method::cg_restart) == "cg-restart");
  CHECK(parse_method("gd") == Method::gd);
  CHECK(parse_method("sesop") == Method::sesop);
  CHECK(parse_method("cg") == Method::cg);
  CHECK(parse_method("cg-restart") == Method::cg_restart);
  CHECK(!parse_method("newton").has_value());
  CHECK(!parse_method("").has_value());
}

TEST_CASE("config digest separates configurations") {
  SolverConfig a;
  a.T = 10;
  a.L = 2.0;
  const std::string da = config_digest(a);
  CHECK(da.size() == 16);
  for (char c : da) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  CHECK(config_digest(a) == da);

  SolverConfig b = a;
  b.T = 11;
  CHECK(config_digest(b) != da);
  b = a;
  b.method = Method::sesop;
  CHECK(config_digest(b) != da);
  b = a;
  b.record_every = 2;
  CHECK(config_digest(b) != da);
  CHECK(config_digest(a, 1e-6) != config_digest(a, 0.0));
}

TEST_CASE("worst-case bound closed forms") {
  // gd: L R^2 / (alpha (k+1)) with L=2, R=3, k=17 gives exactly 1
  CHECK(theoretical_bound("gd", 17, 2.0, 3.0, 1.0) == 1.0);
  CHECK(theoretical_bound("gd", 0, 2.0, 3.0, 1.0) == 18.0);
  // sesop: 2 L R^2 / (alpha^2 k^2) with L=2, R=3, k=6 gives exactly 1
  CHECK(theoretical_bound("sesop", 6, 2.0, 3.0, 1.0) == 1.0);
  // halving alpha doubles the gd bound and quadruples the sesop bound
  CHECK(theoretical_bound("gd", 17, 2.0, 3.0, 0.5) == 2.0);
  CHECK(theoretical_bound("sesop", 6, 2.0, 3.0, 0.5) == 4.0);
  // cg-restart: (L R^2 / 2) (3/4)^{floor(k / T_c)}, T_c = 2 here
  CHECK(theoretical_bound("cg-restart", 0, 2.0, 3.0, 1.0, 2.0) == 9.0);
  CHECK(theoretical_bound("cg-restart", 4, 2.0, 3.0, 1.0, 2.0) ==
        doctest::Approx(5.0625).epsilon(1e-14));

  CHECK_THROWS_AS(theoretical_bound("sesop", 0, 2.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound("cg-restart", 4, 2.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound("newton", 1, 2.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound("gd", -1, 2.0, 3.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound("gd", 1, 2.0, 3.0, 0.0), std::invalid_argument);
}
