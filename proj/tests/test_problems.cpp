#include "mife/mife.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mife;

namespace {

/// Points of the box on one side of the interface, at least `margin` away from it.
template <int Dim>
std::vector<Point<Dim>> side_points(const Problem<Dim>& P, Side side, int count, std::uint64_t seed,
                                    double margin = 1e-3) {
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> coord;
  for (int i = 0; i < Dim; ++i) coord.emplace_back(P.box.lower[i] + margin, P.box.upper[i] - margin);
  std::vector<Point<Dim>> pts;
  while (int(pts.size()) < count) {
    Point<Dim> x;
    for (int i = 0; i < Dim; ++i) x[i] = coord[i](rng);
    const double d = P.levelset.value(x);
    if (std::abs(d) > margin && side_of_value(d) == side) pts.push_back(x);
  }
  return pts;
}

/// Relative mismatch between the stated source and -div(2 mu eps(u)) + grad p by central
/// differences of the exact gradient and pressure.
template <int Dim>
double source_mismatch(const Problem<Dim>& P) {
  const double eps = 1e-5;
  double worst = 0.0;
  for (Side s : kSides) {
    const double mu = P.mu(s);
    for (const auto& x : side_points(P, s, 1000, 17 + side_index(s))) {
      Point<Dim> f = Point<Dim>::Zero();
      for (int j = 0; j < Dim; ++j) {
        const Point<Dim> e = eps * Point<Dim>::Unit(j);
        const Tensor<Dim> Sp = 2.0 * mu * strain<Dim>(P.exact.grad_u(x + e, s));
        const Tensor<Dim> Sm = 2.0 * mu * strain<Dim>(P.exact.grad_u(x - e, s));
        f -= (Sp.col(j) - Sm.col(j)) / (2.0 * eps);
        f[j] += (P.exact.p(x + e, s) - P.exact.p(x - e, s)) / (2.0 * eps);
      }
      const Point<Dim> stated = P.exact.f(x, s);
      worst = std::max(worst, (f - stated).norm() / std::max(1.0, stated.norm()));
    }
  }
  return worst;
}

template <int Dim>
double gradient_mismatch(const Problem<Dim>& P) {
  const double eps = 1e-6;
  double worst = 0.0;
  for (Side s : kSides)
    for (const auto& x : side_points(P, s, 200, 29 + side_index(s))) {
      Tensor<Dim> G;
      for (int j = 0; j < Dim; ++j) {
        const Point<Dim> e = eps * Point<Dim>::Unit(j);
        G.col(j) = (P.exact.u(x + e, s) - P.exact.u(x - e, s)) / (2.0 * eps);
      }
      const Tensor<Dim> stated = P.exact.grad_u(x, s);
      worst = std::max(worst, (G - stated).norm() / std::max(1.0, stated.norm()));
      worst = std::max(worst, std::abs(stated.trace()) / std::max(1.0, stated.norm()));
    }
  return worst;
}

/// Velocity jump and stress-jump consistency at points of the exact interface.
template <int Dim>
void check_interface(const Problem<Dim>& P, double radius) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    Point<Dim> n;
    for (int i = 0; i < Dim; ++i) n[i] = gauss(rng);
    n.normalize();
    const Point<Dim> x = radius * n;
    ASSERT_NEAR(P.levelset.value(x), 0.0, 1e-14);
    const Point<Dim> jump = P.exact.u(x, Side::plus) - P.exact.u(x, Side::minus);
    EXPECT_LT(jump.norm(), 1e-13);
    const Tensor<Dim> dG = P.exact.grad_u(x, Side::plus) - P.exact.grad_u(x, Side::minus);
    for (int i = 0; i < Dim; ++i) {
      // Tangential derivatives of a continuous field are continuous.
      Point<Dim> t = Point<Dim>::Unit(i) - n[i] * n;
      EXPECT_LT((dG * t).norm(), 1e-12);
    }
    if (!P.surface_force) {
      const Tensor<Dim> sp = stress<Dim>(P.mu_plus, P.exact.grad_u(x, Side::plus), P.exact.p(x, Side::plus));
      const Tensor<Dim> sm = stress<Dim>(P.mu_minus, P.exact.grad_u(x, Side::minus), P.exact.p(x, Side::minus));
      EXPECT_LT(((sp - sm) * n).norm(), 1e-12);
    }
  }
}

}  // namespace

TEST(Problems, SourcesMatchFiniteDifferences) {
  EXPECT_LT(source_mismatch(problems::ex1_case_a()), 1e-5);
  EXPECT_LT(source_mismatch(problems::ex1_case_b()), 1e-5);
  EXPECT_LT(source_mismatch(problems::ex1_case_c()), 1e-5);
  EXPECT_LT(source_mismatch(problems::ex2()), 1e-5);
  EXPECT_LT(source_mismatch(problems::ex3()), 1e-5);
  EXPECT_LT(source_mismatch(problems::rotating_circle("shifted", 3.0, 0.2, Point<2>(0.1, -0.2), 0.4)), 1e-5);
}

TEST(Problems, VelocityGradientsAndDivergence) {
  EXPECT_LT(gradient_mismatch(problems::ex1_case_b()), 1e-6);
  EXPECT_LT(gradient_mismatch(problems::ex2()), 1e-6);
  EXPECT_LT(gradient_mismatch(problems::ex3()), 1e-6);
}

TEST(Problems, InterfaceConditions) {
  check_interface(problems::ex1_case_a(), problems::ex1_radius());
  check_interface(problems::ex1_case_c(), problems::ex1_radius());
  check_interface(problems::ex2(), problems::ex1_radius());
  check_interface(problems::ex3(), 2.0 / 3.0);
}

TEST(Problems, SphereSurfaceForceIsTenTimesNormal) {
  const auto P = problems::ex3();
  const Point<3> n = Point<3>(1.0, -2.0, 0.5).normalized();
  EXPECT_LT((P.g(2.0 / 3.0 * n) - 10.0 * n).norm(), 1e-12);
}

template <int Dim>
double exact_pressure_mean(const Problem<Dim>& P, int M) {
  const auto D = discretize(P, M, default_parameters(P));
  double integral = 0.0;
  for (Index e = 0; e < D.mesh.num_elements(); ++e)
    for (const auto& piece : D.pieces(e))
      integral += integrate_simplex<Dim, Dim>(piece.vertices, 6, [&](const Point<Dim>& x) {
        return P.exact.p(x, piece.side);
      });
  return integral / P.box.volume();
}

TEST(Problems, ExactPressuresHaveZeroMean) {
  EXPECT_NEAR(exact_pressure_mean(problems::ex1_case_a(), 64), 0.0, 1e-12);
  // With a pressure jump the polygonal interface perturbs the mean at second order.
  const double a = std::abs(exact_pressure_mean(problems::ex2(), 32));
  const double b = std::abs(exact_pressure_mean(problems::ex2(), 64));
  EXPECT_LT(b, 1e-3);
  EXPECT_NEAR(a / b, 4.0, 1.0);
  const double c = std::abs(exact_pressure_mean(problems::ex3(), 8));
  const double d = std::abs(exact_pressure_mean(problems::ex3(), 16));
  EXPECT_NEAR(c / d, 4.0, 1.0);
}
