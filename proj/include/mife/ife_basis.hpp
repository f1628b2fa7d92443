#pragma once

// Local IFE basis on interface elements, the correction pair for a nonzero stress jump, and the
// standard P1/P1 pairs used on all other elements.

#include "mife/cut.hpp"

namespace mife {

/// Velocity/pressure pair that is affine on each side of the discrete interface.
template <int Dim>
struct PiecewisePair {
  std::array<AffineVector<Dim>, 2> u;
  std::array<AffineScalar<Dim>, 2> p;

  const AffineVector<Dim>& velocity(Side s) const { return u[side_index(s)]; }
  const AffineScalar<Dim>& pressure(Side s) const { return p[side_index(s)]; }

  static PiecewisePair same_on_both(const AffineVector<Dim>& v, const AffineScalar<Dim>& q) {
    return {{v, v}, {q, q}};
  }
};

/// Jump (plus minus minus) of the normal stress of a pair at x.
template <int Dim>
Point<Dim> stress_jump(const PiecewisePair<Dim>& pair, double mu_plus, double mu_minus,
                       const Point<Dim>& n, const Point<Dim>& x) {
  const Tensor<Dim> sp = stress<Dim>(mu_plus, pair.u[1].gradient, pair.p[1](x));
  const Tensor<Dim> sm = stress<Dim>(mu_minus, pair.u[0].gradient, pair.p[0](x));
  return (sp - sm) * n;
}

/// The functions w_T, z_T and their element interpolants.
template <int Dim>
struct AuxiliaryJumpFunctions {
  std::array<AffineScalar<Dim>, 2> w;  // distance to the interface plane on the plus side, 0 else
  std::array<AffineScalar<Dim>, 2> z;  // -1 on the plus side, 0 else
  AffineScalar<Dim> Iw;
  AffineScalar<Dim> Iz;
  double theta = 0.0;  // grad(I w) . n_h

  AffineScalar<Dim> w_bubble(Side s) const { return w[side_index(s)] - Iw; }
  AffineScalar<Dim> z_bubble(Side s) const { return z[side_index(s)] - Iz; }
};

template <int Dim>
AuxiliaryJumpFunctions<Dim> build_aux(const CutElement<Dim>& cut) {
  AuxiliaryJumpFunctions<Dim> a;
  const int P = side_index(Side::plus), M = side_index(Side::minus);
  a.w[P].gradient = cut.normal;
  a.w[P].constant = -cut.normal.dot(cut.reference_point);
  a.w[M] = AffineScalar<Dim>{};
  a.z[P] = AffineScalar<Dim>::constant_field(-1.0);
  a.z[M] = AffineScalar<Dim>{};
  std::array<double, Dim + 1> wv, zv;
  for (int j = 0; j <= Dim; ++j) {
    const int s = side_index(cut.vertex_side(j));
    wv[j] = a.w[s](cut.vertices[j]);
    zv[j] = a.z[s](cut.vertices[j]);
  }
  a.Iw = affine_interpolant<Dim>(cut.vertices, wv);
  a.Iz = affine_interpolant<Dim>(cut.vertices, zv);
  a.theta = a.Iw.gradient.dot(cut.normal);
  return a;
}

/// (N+1)^2 pairs dual to the nodal DoFs: velocity DoF k = j + i (N+1) is component i at vertex
/// j, pressure DoF N(N+1) + j is the pressure at vertex j.
template <int Dim>
struct LocalIFEBasis {
  static constexpr int kVelocity = Dim * (Dim + 1);
  static constexpr int kPairs = (Dim + 1) * (Dim + 1);

  std::array<PiecewisePair<Dim>, kPairs> pairs;
  std::array<AffineScalar<Dim>, Dim + 1> lambda;

  static constexpr int velocity_dof(int component, int vertex) {
    return vertex + component * (Dim + 1);
  }
  static constexpr int pressure_dof(int vertex) { return kVelocity + vertex; }
};

/// Nodal DoFs of a pair; each vertex reads the piece of its own side.
template <int Dim>
std::array<double, LocalIFEBasis<Dim>::kPairs> nodal_dofs(const PiecewisePair<Dim>& pair,
                                                          const SimplexVertices<Dim, Dim>& v,
                                                          const std::array<Side, Dim + 1>& sides) {
  std::array<double, LocalIFEBasis<Dim>::kPairs> out{};
  for (int j = 0; j <= Dim; ++j) {
    const Point<Dim> u = pair.velocity(sides[j])(v[j]);
    for (int i = 0; i < Dim; ++i) out[LocalIFEBasis<Dim>::velocity_dof(i, j)] = u[i];
    out[LocalIFEBasis<Dim>::pressure_dof(j)] = pair.pressure(sides[j])(v[j]);
  }
  return out;
}

/// Conventional P1/P1 pairs on a simplex.
template <int Dim>
LocalIFEBasis<Dim> standard_basis(const SimplexVertices<Dim, Dim>& v) {
  LocalIFEBasis<Dim> b;
  b.lambda = barycentric_functions<Dim>(v);
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j <= Dim; ++j)
      b.pairs[LocalIFEBasis<Dim>::velocity_dof(i, j)] = PiecewisePair<Dim>::same_on_both(
          AffineVector<Dim>::along(b.lambda[j], Point<Dim>::Unit(i)), AffineScalar<Dim>{});
  for (int j = 0; j <= Dim; ++j)
    b.pairs[LocalIFEBasis<Dim>::pressure_dof(j)] =
        PiecewisePair<Dim>::same_on_both(AffineVector<Dim>{}, b.lambda[j]);
  return b;
}

/// IFE basis from the closed-form coefficients in the global frame.
template <int Dim>
LocalIFEBasis<Dim> build_basis(const CutElement<Dim>& cut, const AuxiliaryJumpFunctions<Dim>& aux,
                               double mu_plus, double mu_minus) {
  if (!(mu_plus > 0.0) || !(mu_minus > 0.0))
    throw InvalidArgument("viscosities must be positive");
  LocalIFEBasis<Dim> b = standard_basis<Dim>(cut.vertices);
  const double alpha = mu_minus / mu_plus - 1.0;
  const double denom = 1.0 + alpha * aux.theta;
  const Point<Dim>& n = cut.normal;

  for (int k = 0; k < LocalIFEBasis<Dim>::kVelocity; ++k) {
    PiecewisePair<Dim>& pair = b.pairs[k];
    const Tensor<Dim> eps = strain<Dim>(pair.u[0].gradient);
    const double cN = n.dot(2.0 * (mu_minus - mu_plus) * eps * n);
    for (Side s : kSides) {
      const int si = side_index(s);
      for (int i = 0; i < Dim - 1; ++i) {
        const Point<Dim>& t = cut.tangents[i];
        const double ci = t.dot(2.0 * alpha * eps * n) / denom;
        pair.u[si] += AffineVector<Dim>::along(ci * aux.w_bubble(s), t);
      }
      pair.p[si] = cN * aux.z_bubble(s);
    }
  }
  return b;
}

/// Same basis evaluated in the tangent/normal frame (ordinates y = Q^T x) and rotated back.
template <int Dim>
LocalIFEBasis<Dim> build_basis_local_frame(const CutElement<Dim>& cut,
                                           const AuxiliaryJumpFunctions<Dim>& aux,
                                           double mu_plus, double mu_minus) {
  if (!(mu_plus > 0.0) || !(mu_minus > 0.0))
    throw InvalidArgument("viscosities must be positive");
  LocalIFEBasis<Dim> b;
  b.lambda = barycentric_functions<Dim>(cut.vertices);
  const Tensor<Dim> Q = cut.frame();
  const double alpha = mu_minus / mu_plus - 1.0;
  const double dIw_dn = (Q.transpose() * aux.Iw.gradient)[Dim - 1];

  for (int j = 0; j <= Dim; ++j) {
    // derivatives of lambda_j along the local axes
    const Point<Dim> dl = Q.transpose() * b.lambda[j].gradient;
    std::array<PiecewisePair<Dim>, Dim> local;
    for (Side s : kSides) {
      const int si = side_index(s);
      const AffineScalar<Dim> kT = (alpha / (1.0 + alpha * dIw_dn)) * aux.w_bubble(s);
      for (int m = 0; m < Dim - 1; ++m) {
        // tangential component: lambda + k_T d_n lambda along t_m
        local[m].u[si] = AffineVector<Dim>::along(b.lambda[j] + dl[Dim - 1] * kT, Q.col(m));
        local[m].p[si] = AffineScalar<Dim>{};
      }
      // normal component: k_T d_{t_i} lambda along t_i, lambda along n
      AffineVector<Dim> un = AffineVector<Dim>::along(b.lambda[j], Q.col(Dim - 1));
      for (int i = 0; i < Dim - 1; ++i) un += AffineVector<Dim>::along(dl[i] * kT, Q.col(i));
      local[Dim - 1].u[si] = un;
      local[Dim - 1].p[si] = 2.0 * (mu_minus - mu_plus) * dl[Dim - 1] * aux.z_bubble(s);
    }
    for (int i = 0; i < Dim; ++i) {
      PiecewisePair<Dim> g;
      for (Side s : kSides) {
        const int si = side_index(s);
        for (int m = 0; m < Dim; ++m) {
          const double q = Q(i, m);
          g.u[si].constant += q * local[m].u[si].constant;
          g.u[si].gradient += q * local[m].u[si].gradient;
          g.p[si] += q * local[m].p[si];
        }
      }
      b.pairs[LocalIFEBasis<Dim>::velocity_dof(i, j)] = g;
    }
    b.pairs[LocalIFEBasis<Dim>::pressure_dof(j)] =
        PiecewisePair<Dim>::same_on_both(AffineVector<Dim>{}, b.lambda[j]);
  }
  return b;
}

/// Correction pair on an interface element: vanishes at the vertices and carries the stress jump
/// avg_g across the discrete interface.
template <int Dim>
PiecewisePair<Dim> build_correction(const CutElement<Dim>& cut,
                                    const AuxiliaryJumpFunctions<Dim>& aux, double mu_plus,
                                    double mu_minus, const Point<Dim>& avg_g) {
  const double alpha = mu_minus / mu_plus - 1.0;
  const double denom = mu_plus * (1.0 + alpha * aux.theta);
  const double gn = cut.normal.dot(avg_g);
  PiecewisePair<Dim> c;
  for (Side s : kSides) {
    const int si = side_index(s);
    for (int i = 0; i < Dim - 1; ++i) {
      const Point<Dim>& t = cut.tangents[i];
      c.u[si] += AffineVector<Dim>::along((t.dot(avg_g) / denom) * aux.w_bubble(s), t);
    }
    c.p[si] = gn * aux.z_bubble(s);
  }
  return c;
}

/// Residuals of the discrete interface conditions of a pair on a cut element.
struct JumpResiduals {
  double stress = 0.0;      // |[sigma n](x*) - target|
  double velocity = 0.0;    // max |[v]| over the interface polygon vertices
  double divergence = 0.0;  // |[div v]|
  double pressure_gradient = 0.0;  // |[grad q]|

  double max() const { return std::max({stress, velocity, divergence, pressure_gradient}); }
};

template <int Dim>
JumpResiduals jump_residuals(const CutElement<Dim>& cut, const PiecewisePair<Dim>& pair,
                             double mu_plus, double mu_minus,
                             const Point<Dim>& target = Point<Dim>::Zero()) {
  JumpResiduals r;
  r.stress = (stress_jump(pair, mu_plus, mu_minus, cut.normal, cut.reference_point) - target).norm();
  for (const auto& x : cut.polygon)
    r.velocity = std::max(r.velocity, (pair.u[1](x) - pair.u[0](x)).norm());
  r.divergence = std::abs(pair.u[1].gradient.trace() - pair.u[0].gradient.trace());
  r.pressure_gradient = (pair.p[1].gradient - pair.p[0].gradient).norm();
  return r;
}

/// Scaled cubic/quartic bubble (N+1)^{N+1} prod lambda_i; equals 1 at the centroid.
template <int Dim>
struct Bubble {
  std::array<AffineScalar<Dim>, Dim + 1> lambda;
  static constexpr double scale() {
    double s = 1.0;
    for (int i = 0; i <= Dim; ++i) s *= (Dim + 1);
    return s;
  }

  double value(const Point<Dim>& x) const {
    double v = scale();
    for (const auto& l : lambda) v *= l(x);
    return v;
  }
  Point<Dim> gradient(const Point<Dim>& x) const {
    std::array<double, Dim + 1> l;
    for (int i = 0; i <= Dim; ++i) l[i] = lambda[i](x);
    Point<Dim> g = Point<Dim>::Zero();
    for (int i = 0; i <= Dim; ++i) {
      double prod = scale();
      for (int j = 0; j <= Dim; ++j)
        if (j != i) prod *= l[j];
      g += prod * lambda[i].gradient;
    }
    return g;
  }
};

}  // namespace mife
