#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace wqcopt {

// mt19937_64 with explicit output transforms. std::uniform_real_distribution
// and friends are implementation-defined, so their outputs are not portable;
// everything here is fixed arithmetic on the raw 64-bit stream and produces
// bit-identical values on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Marsaglia polar method. The spare value is
  // discarded so the draw count per call is state-independent apart from
  // rejections, which are themselves deterministic.
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = normal();
    return g;
  }

  Eigen::VectorXd uniform_box(int n, double lo, double hi) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = uniform(lo, hi);
    return x;
  }

  // Uniform on the sphere of the given radius.
  Eigen::VectorXd on_sphere(int n, double radius) {
    for (;;) {
      Eigen::VectorXd g = normal_vector(n);
      const double norm = g.norm();
      if (norm > 1e-12) return (radius / norm) * g;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace wqcopt
