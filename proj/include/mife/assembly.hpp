#pragma once

// Assembly of the saddle-point system: volume and interface-face terms of A_h, the load with
// body force, surface force and correction lift, Dirichlet elimination and the bordered
// pressure-mean constraint.

#include "mife/dofmap.hpp"

#include <Eigen/Sparse>

#include <fstream>
#include <iomanip>

namespace mife {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SparseSystem {
  SparseMatrix A;     // bordered, Dirichlet rows replaced by identity
  Eigen::VectorXd b;  // matching right-hand side
  SparseMatrix raw;   // A_h(trial; test) on all DoFs, rows = test, no boundary conditions
  Eigen::VectorXd load;       // l_h(v) - A_h(correction; v, q) on all DoFs
  Eigen::VectorXd mean_row;   // integral of the pressure part of each global basis function
  std::vector<bool> dirichlet;
  std::vector<bool> pressure;  // nodal pressure DoFs
  std::vector<Index> local_blocks;  // first DoF of each bubble block coupled only inside its element
  int local_block_size = 0;
  Eigen::VectorXd dirichlet_values;
  Index n_dofs = 0;  // without the multiplier

  Index multiplier() const { return n_dofs; }
};

namespace detail {

inline constexpr int kAssemblyChunks = 64;

template <int Dim>
double double_dot(const Tensor<Dim>& a, const Tensor<Dim>& b) {
  return (a.array() * b.array()).sum();
}

inline void check_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw NonFiniteEntry(where);
}

template <int Dim>
struct ElementContribution {
  static constexpr int n = LocalSpace<Dim>::kLocal;
  Eigen::Matrix<double, n, n> K;  // K(test, trial)
  Eigen::Matrix<double, n, 1> load;
  Eigen::Matrix<double, n, 1> mean;
};

template <int Dim>
ElementContribution<Dim> element_kernel(const Discretization<Dim>& D, Index e) {
  constexpr int n = LocalSpace<Dim>::kLocal;
  ElementContribution<Dim> out;
  out.K.setZero();
  out.load.setZero();
  out.mean.setZero();
  const Problem<Dim>& problem = *D.problem;
  const LocalSpace<Dim> space = D.space(e);
  const bool lift = D.has_correction() || D.c_J != 0.0;
  const PiecewisePair<Dim> corr = D.shifted_correction(e);
  const auto& rule = simplex_rule<Dim>(DefaultDegrees<Dim>::volume);

  ShapeValues<Dim> sv;
  std::array<Tensor<Dim>, n> eps;
  std::array<double, n> div;
  for (const auto& piece : D.pieces(e)) {
    const Side s = piece.side;
    const double mu2 = 2.0 * D.mu(s);
    const auto& uc = corr.velocity(s);
    const auto& pc = corr.pressure(s);
    const Tensor<Dim> eps_c = strain<Dim>(uc.gradient);
    const double div_c = uc.gradient.trace();
    for_each_point<Dim, Dim>(piece.vertices, rule, [&](const Point<Dim>& x, double w) {
      space.evaluate(x, s, sv);
      for (int k = 0; k < n; ++k) {
        eps[k] = strain<Dim>(sv.grad[k]);
        div[k] = sv.grad[k].trace();
      }
      const Point<Dim> f = problem.exact.f(x, s);
      const double p_c = pc(x);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l)
          out.K(k, l) += w * (mu2 * double_dot<Dim>(eps[l], eps[k]) - sv.p[l] * div[k] +
                              sv.p[k] * div[l]);
        out.load[k] += w * f.dot(sv.u[k]);
        if (lift)
          out.load[k] -=
              w * (mu2 * double_dot<Dim>(eps_c, eps[k]) - p_c * div[k] + sv.p[k] * div_c);
        out.mean[k] += w * sv.p[k];
      }
    });
  }

  if (problem.surface_force && D.is_cut(e)) {
    const CutElement<Dim>& cut = D.cut(e);
    const auto& irule = simplex_rule<Dim - 1>(DefaultDegrees<Dim>::interface);
    for (const auto& tri : triangulate_polygon<Dim>(cut.polygon)) {
      for_each_point<Dim, Dim - 1>(tri, irule, [&](const Point<Dim>& x, double w) {
        const Point<Dim> g = problem.g(closest_point_ph(problem.levelset, cut, x));
        space.evaluate(x, Side::minus, sv);
        for (int k = 0; k < n; ++k) out.load[k] -= w * g.dot(sv.u[k]);
      });
    }
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) check_finite(out.K(k, l), "element " + std::to_string(e));
  for (int k = 0; k < n; ++k) check_finite(out.load[k], "element " + std::to_string(e));
  return out;
}

/// Interior faces whose nodal level-set values change sign; none for the conventional method.
template <int Dim>
std::vector<Index> interface_faces(const Discretization<Dim>& D) {
  std::vector<Index> faces;
  if (!D.ife()) return faces;
  for (Index f = 0; f < D.mesh.num_faces(); ++f)
    if (D.labels.interface_faces[f] && !D.mesh.is_boundary_face(f)) faces.push_back(f);
  return faces;
}

template <int Dim>
struct FaceContribution {
  static constexpr int n = 2 * LocalSpace<Dim>::kLocal;
  Eigen::Matrix<double, n, n> K;
  Eigen::Matrix<double, n, 1> load;
};

template <int Dim>
FaceContribution<Dim> face_kernel(const Discretization<Dim>& D, Index f) {
  constexpr int nl = LocalSpace<Dim>::kLocal;
  constexpr int n = 2 * nl;
  FaceContribution<Dim> out;
  out.K.setZero();
  out.load.setZero();
  const auto [e1, e2] = D.mesh.face_elements(f);
  const FaceFrame<Dim> frame = D.mesh.face_frame(f);
  const Point<Dim>& nF = frame.normal;
  const double penalty = (1.0 + D.params.eta) / frame.diameter;
  const double gamma = D.params.gamma;
  const std::array<LocalSpace<Dim>, 2> spaces{D.space(e1), D.space(e2)};
  const bool lift = D.has_correction() || D.c_J != 0.0;
  const std::array<PiecewisePair<Dim>, 2> corr{D.shifted_correction(e1),
                                               D.shifted_correction(e2)};
  const auto& rule = simplex_rule<Dim - 1>(DefaultDegrees<Dim>::face);

  std::array<ShapeValues<Dim>, 2> sv;
  // index n holds the correction as an extra trial function
  std::array<Point<Dim>, n + 1> jump, avg_stress;
  std::array<double, n + 1> avg_p, jump_n;
  for (const auto& sub : cut_simplex<Dim, Dim - 1>(D.mesh.face_vertices(f),
                                                   D.dls.face_values(D.mesh, f))) {
    const Side s = sub.side;
    const double mu2 = 2.0 * D.mu(s);
    for_each_point<Dim, Dim - 1>(sub.vertices, rule, [&](const Point<Dim>& x, double w) {
      for (int t = 0; t < 2; ++t) {
        spaces[t].evaluate(x, s, sv[t]);
        const double sign = t == 0 ? 1.0 : -1.0;
        for (int k = 0; k < nl; ++k) {
          const int a = t * nl + k;
          jump[a] = sign * sv[t].u[k];
          avg_stress[a] = 0.5 * mu2 * strain<Dim>(sv[t].grad[k]) * nF;
          avg_p[a] = 0.5 * sv[t].p[k];
        }
      }
      if (lift) {
        const auto& c1 = corr[0].velocity(s);
        const auto& c2 = corr[1].velocity(s);
        jump[n] = c1(x) - c2(x);
        avg_stress[n] = 0.5 * mu2 * (strain<Dim>(c1.gradient) + strain<Dim>(c2.gradient)) * nF;
        avg_p[n] = 0.5 * (corr[0].pressure(s)(x) + corr[1].pressure(s)(x));
      }
      const int m = lift ? n + 1 : n;
      for (int a = 0; a < m; ++a) jump_n[a] = jump[a].dot(nF);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < m; ++b) {
          const double v = penalty * jump[b].dot(jump[a]) - avg_stress[b].dot(jump[a]) -
                           gamma * avg_stress[a].dot(jump[b]) + avg_p[b] * jump_n[a] -
                           avg_p[a] * jump_n[b];
          if (b < n)
            out.K(a, b) += w * v;
          else
            out.load[a] -= w * v;
        }
      }
    });
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) check_finite(out.K(a, b), "face " + std::to_string(f));
  return out;
}

}  // namespace detail

/// Nodal values of the exact velocity on boundary nodes, by the side of each node.
template <int Dim>
Eigen::VectorXd dirichlet_values(const Discretization<Dim>& D, const DofMap<Dim>& dofs) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dofs.size());
  for (Index node = 0; node < D.mesh.num_nodes(); ++node) {
    if (!D.mesh.is_boundary_node(node)) continue;
    const Side s = side_of_value(D.dls.nodal_value(node));
    const Point<Dim> u = D.problem->exact.u(D.mesh.node(node), s);
    for (int i = 0; i < Dim; ++i) g[dofs.velocity(i, node)] = u[i];
  }
  return g;
}

/// Raw operator, load and mean row, without boundary conditions.
template <int Dim>
void assemble_operator(const Discretization<Dim>& D, const DofMap<Dim>& dofs, SparseSystem& sys) {
  const Index N = dofs.size();
  const Index n_el = D.mesh.num_elements();
  const auto faces = detail::interface_faces(D);
  const Index n_faces = Index(faces.size());
  constexpr int nl = LocalSpace<Dim>::kLocal;
  const int chunks = detail::kAssemblyChunks;

  std::vector<std::vector<Triplet>> triplets(chunks);
  std::vector<std::vector<std::pair<Index, double>>> loads(chunks), means(chunks);
  parallel_for(chunks, [&](Index c) {
    auto& T = triplets[c];
    for (Index e = c * n_el / chunks; e < (c + 1) * n_el / chunks; ++e) {
      const auto g = dofs.local_to_global(D.mesh, e);
      const auto contrib = detail::element_kernel(D, e);
      for (int k = 0; k < nl; ++k) {
        for (int l = 0; l < nl; ++l)
          if (contrib.K(k, l) != 0.0) T.emplace_back(g[k], g[l], contrib.K(k, l));
        loads[c].emplace_back(g[k], contrib.load[k]);
        if (contrib.mean[k] != 0.0) means[c].emplace_back(g[k], contrib.mean[k]);
      }
    }
    for (Index i = c * n_faces / chunks; i < (c + 1) * n_faces / chunks; ++i) {
      const Index f = faces[i];
      const auto [e1, e2] = D.mesh.face_elements(f);
      const auto g1 = dofs.local_to_global(D.mesh, e1);
      const auto g2 = dofs.local_to_global(D.mesh, e2);
      auto global = [&](int a) { return a < nl ? g1[a] : g2[a - nl]; };
      const auto contrib = detail::face_kernel(D, f);
      for (int a = 0; a < 2 * nl; ++a) {
        for (int b = 0; b < 2 * nl; ++b)
          if (contrib.K(a, b) != 0.0) T.emplace_back(global(a), global(b), contrib.K(a, b));
        loads[c].emplace_back(global(a), contrib.load[a]);
      }
    }
  });

  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& T : triplets) total += T.size();
  all.reserve(total);
  for (auto& T : triplets) all.insert(all.end(), T.begin(), T.end());
  sys.raw.resize(N, N);
  sys.raw.setFromTriplets(all.begin(), all.end());
  sys.raw.makeCompressed();
  sys.load = Eigen::VectorXd::Zero(N);
  sys.mean_row = Eigen::VectorXd::Zero(N);
  for (int c = 0; c < chunks; ++c) {
    for (const auto& [i, v] : loads[c]) sys.load[i] += v;
    for (const auto& [i, v] : means[c]) sys.mean_row[i] += v;
  }
}

/// Eliminates Dirichlet DoFs and appends the pressure-mean constraint with its multiplier.
inline void apply_constraints(SparseSystem& sys) {
  const Index N = sys.n_dofs;
  const auto& dir = sys.dirichlet;
  const Eigen::VectorXd& gd = sys.dirichlet_values;
  sys.b = Eigen::VectorXd::Zero(N + 1);
  std::vector<Triplet> T;
  T.reserve(sys.raw.nonZeros() + 3 * N);
  for (Index i = 0; i < N; ++i) sys.b[i] = dir[i] ? gd[i] : sys.load[i];
  for (Index col = 0; col < sys.raw.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.raw, col); it; ++it) {
      const Index r = it.row();
      if (dir[r]) continue;
      if (dir[col])
        sys.b[r] -= it.value() * gd[col];
      else
        T.emplace_back(r, col, it.value());
    }
  }
  for (Index i = 0; i < N; ++i)
    if (dir[i]) T.emplace_back(i, i, 1.0);
  for (Index i = 0; i < N; ++i) {
    const double m = sys.mean_row[i];
    if (m == 0.0) continue;
    if (dir[i]) {
      sys.b[N] -= m * gd[i];
    } else {
      T.emplace_back(N, i, m);
      T.emplace_back(i, N, m);
    }
  }
  sys.A.resize(N + 1, N + 1);
  sys.A.setFromTriplets(T.begin(), T.end());
  sys.A.makeCompressed();
}

template <int Dim>
SparseSystem assemble(const Discretization<Dim>& D) {
  const DofMap<Dim> dofs(D.mesh);
  SparseSystem sys;
  sys.n_dofs = dofs.size();
  assemble_operator(D, dofs, sys);
  sys.dirichlet = dofs.dirichlet_mask(D.mesh);
  sys.dirichlet_values = dirichlet_values(D, dofs);
  sys.pressure.assign(sys.n_dofs, false);
  for (Index node = 0; node < D.mesh.num_nodes(); ++node) sys.pressure[dofs.pressure(node)] = true;
  sys.local_block_size = Dim;
  for (Index e = 0; e < D.mesh.num_elements(); ++e)
    if (!(D.ife() && D.is_cut(e))) sys.local_blocks.push_back(dofs.bubble(e, 0));
  apply_constraints(sys);
  return sys;
}

/// Gram matrices used by the stability and consistency diagnostics.
struct GramMatrices {
  SparseMatrix velocity_h1;   // broken H1 (L2 + seminorm) on velocity DoFs
  SparseMatrix velocity_semi; // broken H1 seminorm on velocity DoFs
  SparseMatrix velocity_dg;   // broken seminorm + h_F^{-1} jumps on interface faces
  SparseMatrix pressure_l2;   // L2 of the full pressure field on all DoFs
  SparseMatrix pressure_p1;   // L2 of the nodal pressure subspace
};

template <int Dim>
GramMatrices assemble_gram(const Discretization<Dim>& D) {
  const DofMap<Dim> dofs(D.mesh);
  const Index N = dofs.size();
  constexpr int nl = LocalSpace<Dim>::kLocal;
  std::vector<Triplet> h1, semi, dg, pl2, pp1;
  ShapeValues<Dim> sv;
  const auto& rule = simplex_rule<Dim>(DefaultDegrees<Dim>::volume);
  for (Index e = 0; e < D.mesh.num_elements(); ++e) {
    const auto g = dofs.local_to_global(D.mesh, e);
    const LocalSpace<Dim> space = D.space(e);
    Eigen::Matrix<double, nl, nl> Kh1 = Eigen::Matrix<double, nl, nl>::Zero();
    Eigen::Matrix<double, nl, nl> Ksemi = Kh1, Kp = Kh1;
    for (const auto& piece : D.pieces(e)) {
      for_each_point<Dim, Dim>(piece.vertices, rule, [&](const Point<Dim>& x, double w) {
        space.evaluate(x, piece.side, sv);
        for (int k = 0; k < nl; ++k)
          for (int l = 0; l < nl; ++l) {
            const double semi = detail::double_dot<Dim>(sv.grad[k], sv.grad[l]);
            Ksemi(k, l) += w * semi;
            Kh1(k, l) += w * (semi + sv.u[k].dot(sv.u[l]));
            Kp(k, l) += w * sv.p[k] * sv.p[l];
          }
      });
    }
    for (int k = 0; k < nl; ++k)
      for (int l = 0; l < nl; ++l) {
        if (Kh1(k, l) != 0.0) h1.emplace_back(g[k], g[l], Kh1(k, l));
        if (Ksemi(k, l) != 0.0) {
          semi.emplace_back(g[k], g[l], Ksemi(k, l));
          dg.emplace_back(g[k], g[l], Ksemi(k, l));
        }
        if (Kp(k, l) != 0.0) pl2.emplace_back(g[k], g[l], Kp(k, l));
      }
    // nodal pressure subspace: standard P1 mass matrix
    const double vol = simplex_measure<Dim, Dim>(D.mesh.vertices(e));
    for (int i = 0; i <= Dim; ++i)
      for (int j = 0; j <= Dim; ++j)
        pp1.emplace_back(dofs.pressure(D.mesh.element(e)[i]), dofs.pressure(D.mesh.element(e)[j]),
                         vol * (i == j ? 2.0 : 1.0) / ((Dim + 1) * (Dim + 2)));
  }
  // penalty-weighted jumps on interface faces
  const auto& frule = simplex_rule<Dim - 1>(DefaultDegrees<Dim>::face);
  std::array<ShapeValues<Dim>, 2> fsv;
  for (Index f : detail::interface_faces(D)) {
    const auto [e1, e2] = D.mesh.face_elements(f);
    const std::array<LocalSpace<Dim>, 2> spaces{D.space(e1), D.space(e2)};
    const auto g1 = dofs.local_to_global(D.mesh, e1);
    const auto g2 = dofs.local_to_global(D.mesh, e2);
    const double hF = D.mesh.face_frame(f).diameter;
    Eigen::Matrix<double, 2 * nl, 2 * nl> K = Eigen::Matrix<double, 2 * nl, 2 * nl>::Zero();
    for (const auto& sub : cut_simplex<Dim, Dim - 1>(D.mesh.face_vertices(f),
                                                     D.dls.face_values(D.mesh, f))) {
      for_each_point<Dim, Dim - 1>(sub.vertices, frule, [&](const Point<Dim>& x, double w) {
        std::array<Point<Dim>, 2 * nl> jump;
        for (int t = 0; t < 2; ++t) {
          spaces[t].evaluate(x, sub.side, fsv[t]);
          for (int k = 0; k < nl; ++k) jump[t * nl + k] = (t == 0 ? 1.0 : -1.0) * fsv[t].u[k];
        }
        for (int a = 0; a < 2 * nl; ++a)
          for (int b = 0; b < 2 * nl; ++b) K(a, b) += w / hF * jump[a].dot(jump[b]);
      });
    }
    auto global = [&](int a) { return a < nl ? g1[a] : g2[a - nl]; };
    for (int a = 0; a < 2 * nl; ++a)
      for (int b = 0; b < 2 * nl; ++b)
        if (K(a, b) != 0.0) dg.emplace_back(global(a), global(b), K(a, b));
  }

  auto build = [N](const std::vector<Triplet>& T, bool velocity_only, const DofMap<Dim>& d) {
    SparseMatrix m(N, N);
    if (velocity_only) {
      std::vector<Triplet> kept;
      for (const auto& t : T)
        if (!d.is_pressure(t.row()) && !d.is_pressure(t.col())) kept.push_back(t);
      m.setFromTriplets(kept.begin(), kept.end());
    } else {
      m.setFromTriplets(T.begin(), T.end());
    }
    m.makeCompressed();
    return m;
  };
  GramMatrices G;
  G.velocity_h1 = build(h1, true, dofs);
  G.velocity_semi = build(semi, true, dofs);
  G.velocity_dg = build(dg, true, dofs);
  G.pressure_l2 = build(pl2, false, dofs);
  G.pressure_p1 = build(pp1, false, dofs);
  return G;
}

/// Writes "row col value" lines, one per stored entry.
inline void export_matrix(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  out << std::setprecision(17);
  for (Index col = 0; col < A.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(A, col); it; ++it)
      out << it.row() << ' ' << col << ' ' << it.value() << '\n';
}

}  // namespace mife
