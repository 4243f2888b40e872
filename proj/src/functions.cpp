#include "wqcopt/functions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "wqcopt/rng.hpp"

namespace wqcopt {

Objective quadratic(const Matrix& A, const Vector& b) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("quadratic: shape mismatch");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("quadratic: matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  const double spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-10 * spectral_norm)
    throw std::invalid_argument("quadratic: matrix must be positive semidefinite");

  auto Ap = std::make_shared<const Matrix>(A);
  auto bp = std::make_shared<const Vector>(b);

  Objective obj;
  obj.dim = n;
  obj.value = [Ap, bp](const Vector& x) { return 0.5 * x.dot(*Ap * x) + bp->dot(x); };
  obj.gradient = [Ap, bp](const Vector& x) -> Vector { return *Ap * x + *bp; };
  obj.lipschitz_L = spectral_norm;

  // Fill in the minimizer only for strictly PD matrices; a semidefinite A can
  // slip through LLT with a zero pivot and produce garbage.
  if (es.eigenvalues().minCoeff() > 1e-10 * std::max(spectral_norm, 1e-300)) {
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() == Eigen::Success) {
      Vector x_star = llt.solve(-b);
      obj.f_star = obj.value(x_star);
      obj.projector = [x_star](const Vector&) { return x_star; };
    }
  }
  return obj;
}

Objective abs_one_minus_exp() {
  Objective obj;
  obj.dim = 1;
  obj.value = [](const Vector& x) {
    const double a = std::abs(x[0]);
    return a * (1.0 - std::exp(-a));
  };
  obj.gradient = [](const Vector& x) -> Vector {
    const double a = std::abs(x[0]);
    const double s = x[0] < 0.0 ? -1.0 : (x[0] > 0.0 ? 1.0 : 0.0);
    Vector g(1);
    g[0] = s * (1.0 - std::exp(-a) + a * std::exp(-a));
    return g;
  };
  obj.lipschitz_L = 2.0;  // |f''| = e^{-a}(2 - a) <= 2, attained at 0
  obj.f_star = 0.0;
  obj.projector = [](const Vector&) { return Vector::Zero(1).eval(); };
  return obj;
}

Objective sphere_quartic(int n) {
  if (n < 1) throw std::invalid_argument("sphere_quartic: dimension must be positive");
  Objective obj;
  obj.dim = n;
  obj.value = [](const Vector& x) {
    const double r = x.squaredNorm() - 1.0;
    return r * r;
  };
  obj.gradient = [](const Vector& x) -> Vector {
    return 4.0 * (x.squaredNorm() - 1.0) * x;
  };
  obj.f_star = 0.0;
  obj.projector = [n](const Vector& x) -> Vector {
    const double norm = x.norm();
    if (norm < 1e-12) return Vector::Unit(n, 0).eval();
    return x / norm;
  };
  return obj;
}

Objective random_quadratic(int n, double kappa, double L, std::uint64_t seed, double shift) {
  if (n < 1) throw std::invalid_argument("random_quadratic: dimension must be positive");
  if (kappa < 1.0) throw std::invalid_argument("random_quadratic: kappa must be >= 1");
  if (L <= 0.0) throw std::invalid_argument("random_quadratic: L must be positive");

  Rng rng(seed);
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.normal();

  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);

  Vector lambdas(n);
  lambdas[0] = L / kappa;
  lambdas[n - 1] = L;
  for (int i = 1; i + 1 < n; ++i)
    lambdas[i] = L * std::pow(kappa, -static_cast<double>(n - 1 - i) / (n - 1));

  Matrix A = Q * lambdas.asDiagonal() * Q.transpose();
  A = (0.5 * (A + A.transpose())).eval();

  Vector b = Vector::Zero(n);
  if (shift != 0.0) b = -(A * rng.on_sphere(n, shift));
  return quadratic(A, b);
}

std::vector<ZooEntry> zoo() {
  std::vector<ZooEntry> entries;
  {
    Matrix A(1, 1);
    A << 2.0;
    entries.push_back({"quad1d", quadratic(A, Vector::Zero(1)), 1.0, 2.0,
                       "f(x) = x^2, the smallest convex sanity case"});
  }
  entries.push_back({"quad", random_quadratic(3, 10.0, 1.0, 101), 1.0, 0.1,
                     "seeded PD quadratic, n=3, kappa=10"});
  entries.push_back({"quad-ill", random_quadratic(3, 1000.0, 1.0, 102), 1.0, 0.001,
                     "seeded PD quadratic, n=3, kappa=1000"});
  entries.push_back({"quad-rot", random_quadratic(3, 100.0, 1.0, 103, 2.0), 1.0, 0.01,
                     "seeded PD quadratic, n=3, kappa=100, minimizer away from the origin"});
  entries.push_back({"abs_one_minus_exp", abs_one_minus_exp(), 1.0, std::nullopt,
                     "non-convex 1-d example |x|(1 - e^{-|x|}); growth is linear, so no "
                     "quadratic-growth constant"});
  entries.push_back({"sphere_quartic", sphere_quartic(2), std::nullopt, 2.0,
                     "(||x||^2 - 1)^2: quadratic growth without weak quasi-convexity"});
  return entries;
}

const ZooEntry* find_zoo_entry(const std::vector<ZooEntry>& entries, const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace wqcopt
