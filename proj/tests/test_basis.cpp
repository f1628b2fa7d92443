#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mife;

namespace {

template <int Dim>
double pair_scale(const PiecewisePair<Dim>& p) {
  double s = 1.0;
  for (int k = 0; k < 2; ++k) {
    s = std::max(s, p.u[k].constant.cwiseAbs().maxCoeff());
    s = std::max(s, p.u[k].gradient.cwiseAbs().maxCoeff());
    s = std::max(s, std::abs(p.p[k].constant));
    s = std::max(s, p.p[k].gradient.cwiseAbs().maxCoeff());
  }
  return s;
}

template <int Dim>
std::array<Side, Dim + 1> vertex_sides(const CutElement<Dim>& cut) {
  std::array<Side, Dim + 1> s;
  for (int j = 0; j <= Dim; ++j) s[j] = cut.vertex_side(j);
  return s;
}

template <int Dim>
void compare_with_linear_system(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0, worst_correction = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto rc = random_cut<Dim>(rng);
    const auto aux = build_aux(rc.cut);
    const auto basis = build_basis(rc.cut, aux, rc.mu_plus, rc.mu_minus);
    const auto reference = oracle::solve_basis(rc.cut, rc.mu_plus, rc.mu_minus);
    for (int k = 0; k < LocalIFEBasis<Dim>::kPairs; ++k)
      worst = std::max(worst, pair_distance(basis.pairs[k], reference.pairs[k]) /
                                  pair_scale(reference.pairs[k]));
    Point<Dim> g;
    for (int i = 0; i < Dim; ++i) g[i] = gauss(rng);
    const auto c = build_correction(rc.cut, aux, rc.mu_plus, rc.mu_minus, g);
    const auto c_ref = oracle::solve_pair(rc.cut, rc.mu_plus, rc.mu_minus,
                                          std::array<double, LocalIFEBasis<Dim>::kPairs>{}, g);
    worst_correction = std::max(worst_correction, pair_distance(c, c_ref) / pair_scale(c_ref));
  }
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(worst_correction, 1e-10);
}

}  // namespace

TEST(Basis, ExplicitFormulasMatchLinearSystem2d) { compare_with_linear_system<2>(101, 200); }
TEST(Basis, ExplicitFormulasMatchLinearSystem3d) { compare_with_linear_system<3>(102, 200); }

TEST(Basis, NodalDualityAndJumpConditions) {
  for (const auto& suite : {"unisolvence", "jumps", "reduction"}) {
    const auto rep = verify_theory(suite, 3, VerifyOptions{200});
    for (const auto& c : rep.checks) EXPECT_TRUE(c.pass()) << suite << ": " << c.name << " = " << c.value;
  }
}

TEST(Basis, ReducesToStandardBasisForEqualViscosity) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto rc = random_cut<3>(rng);
    const auto b = build_basis(rc.cut, build_aux(rc.cut), 3.7, 3.7);
    const auto s = standard_basis<3>(rc.cut.vertices);
    for (int k = 0; k < LocalIFEBasis<3>::kPairs; ++k) EXPECT_EQ(pair_distance(b.pairs[k], s.pairs[k]), 0.0);
  }
}

TEST(Basis, StandardBasisIsNodalAndContinuous) {
  const auto mesh = Mesh<2>::build_cartesian(Box<2>::symmetric(1.0), 1);
  const auto v = mesh.vertices(0);
  const auto b = standard_basis<2>(v);
  std::array<Side, 3> sides{Side::minus, Side::plus, Side::minus};
  for (int k = 0; k < LocalIFEBasis<2>::kPairs; ++k) {
    const auto dofs = nodal_dofs(b.pairs[k], v, sides);
    for (int l = 0; l < LocalIFEBasis<2>::kPairs; ++l) EXPECT_NEAR(dofs[l], k == l ? 1.0 : 0.0, 1e-15);
    EXPECT_EQ(pair_distance(PiecewisePair<2>{{b.pairs[k].u[0], b.pairs[k].u[0]}, {b.pairs[k].p[0], b.pairs[k].p[0]}},
                            b.pairs[k]),
              0.0);
  }
}

TEST(Basis, CorrectionVanishesAtVerticesAndForZeroForce) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const auto rc = random_cut<2>(rng);
    const auto aux = build_aux(rc.cut);
    const auto c = build_correction(rc.cut, aux, rc.mu_plus, rc.mu_minus, Point<2>(0.4, -1.3));
    for (double v : nodal_dofs(c, rc.cut.vertices, vertex_sides(rc.cut))) EXPECT_NEAR(v, 0.0, 1e-12);
    const auto zero = build_correction<2>(rc.cut, aux, rc.mu_plus, rc.mu_minus, Point<2>::Zero());
    EXPECT_EQ(pair_scale(zero), 1.0);
    EXPECT_EQ(pair_distance(zero, PiecewisePair<2>{}), 0.0);
  }
}

TEST(Basis, LocalFrameConstructionAgrees) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto rc = random_cut<3>(rng);
    const auto aux = build_aux(rc.cut);
    const auto a = build_basis(rc.cut, aux, rc.mu_plus, rc.mu_minus);
    const auto b = build_basis_local_frame(rc.cut, aux, rc.mu_plus, rc.mu_minus);
    for (int k = 0; k < LocalIFEBasis<3>::kPairs; ++k)
      EXPECT_LT(pair_distance(a.pairs[k], b.pairs[k]) / pair_scale(a.pairs[k]), 1e-10);
  }
}

TEST(Basis, AuxiliaryFunctionsHaveUnitJumps) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const auto rc = random_cut<2>(rng);
    const auto aux = build_aux(rc.cut);
    const auto& x = rc.cut.reference_point;
    // [w] = 0 and [grad w . n] = 1 at x*, [z] = -1.
    EXPECT_NEAR(aux.w[1](x) - aux.w[0](x), 0.0, 1e-14);
    EXPECT_NEAR((aux.w[1].gradient - aux.w[0].gradient).dot(rc.cut.normal), 1.0, 1e-14);
    EXPECT_NEAR(aux.z[1](x) - aux.z[0](x), -1.0, 1e-14);
    // Bubbles vanish at the vertices.
    for (int j = 0; j <= 2; ++j) {
      const Side s = rc.cut.vertex_side(j);
      EXPECT_NEAR(aux.w_bubble(s)(rc.cut.vertices[j]), 0.0, 1e-14);
      EXPECT_NEAR(aux.z_bubble(s)(rc.cut.vertices[j]), 0.0, 1e-14);
    }
  }
}
