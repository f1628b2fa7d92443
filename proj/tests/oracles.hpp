#pragma once

// Reference constructions used to cross-check the library.

#include "mife/mife.hpp"

#include <Eigen/LU>

#include <random>

namespace oracle {

using namespace mife;

/// Piecewise affine pair on a cut element obtained by solving the nodal conditions together
/// with the discrete interface conditions as one dense linear system:
///   nodal values      u^{s_j}(v_j) and p^{s_j}(v_j) = target
///   stress jump       [2 mu eps(u) n - p n](x*) = stress
///   continuity        [u](x*) = 0, [grad u] t_i = 0
///   divergence        [div u] = 0
///   pressure gradient [grad p] = 0
/// Unknowns per side: u constant, grad u (row major), p constant, grad p.
template <int Dim>
PiecewisePair<Dim> solve_pair(const CutElement<Dim>& cut, double mu_plus, double mu_minus,
                              const std::array<double, LocalIFEBasis<Dim>::kPairs>& target,
                              const Point<Dim>& stress) {
  constexpr int per_side = Dim + Dim * Dim + 1 + Dim;
  constexpr int n = 2 * per_side;
  auto uc = [](int s, int i) { return s * per_side + i; };
  auto ug = [](int s, int i, int j) { return s * per_side + Dim + i * Dim + j; };
  auto pc = [](int s) { return s * per_side + Dim + Dim * Dim; };
  auto pg = [](int s, int j) { return s * per_side + Dim + Dim * Dim + 1 + j; };

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  int row = 0;
  for (int j = 0; j <= Dim; ++j) {
    const int s = side_index(cut.vertex_side(j));
    const Point<Dim>& x = cut.vertices[j];
    for (int i = 0; i < Dim; ++i) {
      A(row, uc(s, i)) = 1.0;
      for (int k = 0; k < Dim; ++k) A(row, ug(s, i, k)) = x[k];
      b[row++] = target[LocalIFEBasis<Dim>::velocity_dof(i, j)];
    }
    A(row, pc(s)) = 1.0;
    for (int k = 0; k < Dim; ++k) A(row, pg(s, k)) = x[k];
    b[row++] = target[LocalIFEBasis<Dim>::pressure_dof(j)];
  }
  const Point<Dim>& n_h = cut.normal;
  const Point<Dim>& xs = cut.reference_point;
  for (int i = 0; i < Dim; ++i) {
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 1 ? 1.0 : -1.0;
      const double mu = s == 1 ? mu_plus : mu_minus;
      // (2 mu eps(u) n)_i = mu sum_k (G_ik + G_ki) n_k
      for (int k = 0; k < Dim; ++k) {
        A(row, ug(s, i, k)) += sign * mu * n_h[k];
        A(row, ug(s, k, i)) += sign * mu * n_h[k];
      }
      A(row, pc(s)) -= sign * n_h[i];
      for (int k = 0; k < Dim; ++k) A(row, pg(s, k)) -= sign * n_h[i] * xs[k];
    }
    b[row++] = stress[i];
  }
  for (int i = 0; i < Dim; ++i) {
    for (int s = 0; s < 2; ++s) {
      const double sign = s == 1 ? 1.0 : -1.0;
      A(row, uc(s, i)) = sign;
      for (int k = 0; k < Dim; ++k) A(row, ug(s, i, k)) = sign * xs[k];
    }
    ++row;
  }
  for (const auto& t : cut.tangents) {
    for (int i = 0; i < Dim; ++i) {
      for (int s = 0; s < 2; ++s) {
        const double sign = s == 1 ? 1.0 : -1.0;
        for (int k = 0; k < Dim; ++k) A(row, ug(s, i, k)) = sign * t[k];
      }
      ++row;
    }
  }
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < Dim; ++i) A(row, ug(s, i, i)) = s == 1 ? 1.0 : -1.0;
  ++row;
  for (int k = 0; k < Dim; ++k) {
    A(row, pg(1, k)) = 1.0;
    A(row, pg(0, k)) = -1.0;
    ++row;
  }
  if (row != n) throw std::logic_error("oracle system is not square");

  const Eigen::VectorXd x = Eigen::FullPivLU<Eigen::MatrixXd>(A).solve(b);
  PiecewisePair<Dim> pair;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < Dim; ++i) {
      pair.u[s].constant[i] = x[uc(s, i)];
      for (int k = 0; k < Dim; ++k) pair.u[s].gradient(i, k) = x[ug(s, i, k)];
    }
    pair.p[s].constant = x[pc(s)];
    for (int k = 0; k < Dim; ++k) pair.p[s].gradient[k] = x[pg(s, k)];
  }
  return pair;
}

template <int Dim>
LocalIFEBasis<Dim> solve_basis(const CutElement<Dim>& cut, double mu_plus, double mu_minus) {
  LocalIFEBasis<Dim> basis;
  for (int k = 0; k < LocalIFEBasis<Dim>::kPairs; ++k) {
    std::array<double, LocalIFEBasis<Dim>::kPairs> target{};
    target[k] = 1.0;
    basis.pairs[k] = solve_pair<Dim>(cut, mu_plus, mu_minus, target, Point<Dim>::Zero());
  }
  return basis;
}

/// Piecewise-linear exact solution across a planar interface n.x = offset: it satisfies every
/// interface condition exactly and has a constant stress jump, so it lies in the immersed space
/// plus the correction.
template <int Dim>
Problem<Dim> planar_problem(std::uint64_t seed, double mu_plus, double mu_minus) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_point = [&] {
    Point<Dim> v;
    for (int i = 0; i < Dim; ++i) v[i] = gauss(rng);
    return v;
  };
  const Point<Dim> n = random_point().normalized();
  const double offset = 0.0123;
  Tensor<Dim> A;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) A(i, j) = gauss(rng);
  A -= (A.trace() / Dim) * Tensor<Dim>::Identity();
  const Point<Dim> b = random_point();
  Point<Dim> w = random_point();
  w -= w.dot(n) * n;
  const Point<Dim> q = random_point();
  const double jump = gauss(rng);

  Problem<Dim> P;
  P.name = "planar";
  P.box = Box<Dim>::symmetric(1.0);
  P.levelset = LevelSet<Dim>::plane(n, offset);
  P.mu_plus = mu_plus;
  P.mu_minus = mu_minus;
  P.surface_force = true;
  P.exact.u = [=](const Point<Dim>& x, Side s) {
    Point<Dim> u = A * x + b;
    if (s == Side::plus) u += w * (n.dot(x) - offset);
    return u;
  };
  P.exact.grad_u = [=](const Point<Dim>&, Side s) {
    Tensor<Dim> G = A;
    if (s == Side::plus) G += w * n.transpose();
    return G;
  };
  P.exact.p = [=](const Point<Dim>& x, Side s) {
    return q.dot(x) + (s == Side::plus ? jump : 0.0);
  };
  P.exact.f = [=](const Point<Dim>&, Side) { return q; };
  return P;
}

}  // namespace oracle
