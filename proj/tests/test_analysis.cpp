#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mife;

namespace {

StudyReport study_2d(const Problem<2>& P, const std::vector<int>& Ms, Method method = Method::ife) {
  return convergence_study(P, Ms, default_parameters(P, method));
}

void expect_decreasing(const StudyReport& r) {
  for (std::size_t i = 1; i < r.levels.size(); ++i) {
    const auto& c = r.levels[i - 1].errors;
    const auto& f = r.levels[i].errors;
    const std::string at = r.example + " M=" + std::to_string(r.levels[i].M);
    EXPECT_LT(f.e0_u, c.e0_u) << at;
    EXPECT_LT(f.e1_u, c.e1_u) << at;
    EXPECT_LT(f.e0_p, c.e0_p) << at;
  }
}

}  // namespace

TEST(Analysis, RatesAndSlopesOfSyntheticData) {
  std::vector<double> h{0.5, 0.25, 0.125, 0.0625}, e;
  for (double x : h) e.push_back(3.0 * x * x);
  EXPECT_NEAR(regression_slope(h, e), 2.0, 1e-12);
  EXPECT_NEAR(rate(e[0], e[1], h[0], h[1]), 2.0, 1e-12);
  EXPECT_THROW(regression_slope({0.5}, {1.0}), InvalidArgument);
  EXPECT_THROW(regression_slope({0.5, 0.25}, {1.0}), InvalidArgument);
}

TEST(Analysis, PiecewiseLinearSolutionIsInterpolatedExactly) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto P2 = oracle::planar_problem<2>(seed, 4.0, 0.3);
    const auto D2 = discretize(P2, 8, default_parameters(P2));
    const auto e2 = compute_errors(interpolant_field(D2));
    EXPECT_LT(e2.e0_u, 1e-12);
    EXPECT_LT(e2.e1_u, 1e-12);
    EXPECT_LT(e2.e0_p, 1e-12);
    const auto P3 = oracle::planar_problem<3>(seed, 0.3, 4.0);
    const auto D3 = discretize(P3, 4, default_parameters(P3));
    const auto e3 = compute_errors(interpolant_field(D3));
    EXPECT_LT(e3.e0_u, 1e-12);
    EXPECT_LT(e3.e1_u, 1e-12);
    EXPECT_LT(e3.e0_p, 1e-12);
  }
}

TEST(Analysis, TrigonometricExampleMatchesReferenceAtM32) {
  const auto P = problems::ex2();
  const auto level = solve_level(P, 32, default_parameters(P));
  const auto& e = level.result.errors;
  EXPECT_GT(e.e0_u / 5.280e-3, 0.5);
  EXPECT_LT(e.e0_u / 5.280e-3, 2.0);
  EXPECT_GT(e.e1_u / 1.903e-1, 0.5);
  EXPECT_LT(e.e1_u / 1.903e-1, 2.0);
  EXPECT_GT(e.e0_p / 2.213e-1, 0.5);
  EXPECT_LT(e.e0_p / 2.213e-1, 2.0);
}

TEST(Analysis, TrigonometricExampleVelocitySlope) {
  const auto r = study_2d(problems::ex2(), {16, 32, 64});
  const auto s = r.slopes();
  EXPECT_GE(s[0], 1.85);
  EXPECT_LE(s[0], 2.15);
  expect_decreasing(r);
}

TEST(Analysis, ErrorsDecreaseUnderRefinement2d) {
  for (const auto& P : {problems::ex1_case_a(), problems::ex1_case_b(), problems::ex1_case_c()})
    expect_decreasing(study_2d(P, {16, 32, 64, 128}));
}

TEST(Analysis, ErrorsDecreaseUnderRefinement3d) {
  const auto P = problems::ex3();
  expect_decreasing(convergence_study(P, {4, 8, 16}, default_parameters(P)));
}

TEST(Analysis, SphereExampleVelocityAtM8MatchesReference) {
  const auto P = problems::ex3();
  const auto level = solve_level(P, 8, default_parameters(P));
  const double ratio = level.result.errors.e0_u / 7.283e-2;
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST(Analysis, HighContrastOutsideEnergySlope) {
  const auto s = study_2d(problems::ex1_case_b(), {16, 32, 64}).slopes();
  EXPECT_GE(s[1], 0.85);
  EXPECT_LE(s[1], 1.15);
}

TEST(Analysis, EnergyErrorIsRobustToInterfacePosition) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& base : {problems::ex1_case_a(), problems::ex1_case_b(), problems::ex1_case_c()}) {
    const int M = 32;
    const double h = (base.box.upper[0] - base.box.lower[0]) / M;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double a = angle(rng), r = 0.4 * h * unit(rng);
      const auto P = problems::rotating_circle(base.name, base.mu_plus, base.mu_minus,
                                               Point<2>(r * std::cos(a), r * std::sin(a)),
                                               problems::ex1_radius());
      const double e1 = solve_level(P, M, default_parameters(P)).result.errors.e1_u;
      lo = std::min(lo, e1);
      hi = std::max(hi, e1);
    }
    EXPECT_LT(hi / lo, 3.0) << base.name;
  }
}
