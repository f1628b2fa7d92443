#pragma once

// Randomized and multi-level checks of the element spaces, the discrete operator and the cut
// geometry. Each suite returns named quantities with the interval they must fall in.

#include "mife/study.hpp"

#include <Eigen/Cholesky>

#include <random>

namespace mife {

struct Check {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool pass() const { return std::isfinite(value) && value >= lower && value <= upper; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"unisolvence", "jumps",  "reduction",
                                              "interpolation_rates", "infsup", "condition_number",
                                              "geometry"};
  return names;
}

struct VerifyOptions {
  int random_cuts = 1000;  // per dimension
};

/// A single cut element of the unit-cube mesh with M = 1 and a random plane through it.
template <int Dim>
struct RandomCut {
  Mesh<Dim> mesh;
  DiscreteLevelSet<Dim> dls;
  CutElement<Dim> cut;
  double mu_plus = 1.0;
  double mu_minus = 1.0;
};

/// Draws a plane through a random interior point of a random element, viscosities log-uniform in
/// [1e-2, 1e2]. Cuts rejected as degenerate are redrawn.
template <int Dim>
RandomCut<Dim> random_cut(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  RandomCut<Dim> rc;
  rc.mesh = Mesh<Dim>::build_cartesian(Box<Dim>{Point<Dim>::Zero(), Point<Dim>::Ones()}, 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Index e = std::min<Index>(Index(unit(rng) * rc.mesh.num_elements()),
                                    rc.mesh.num_elements() - 1);
    const auto v = rc.mesh.vertices(e);
    std::array<double, Dim + 1> w;
    double sum = 0.0;
    for (auto& x : w) sum += (x = expo(rng));
    Point<Dim> c = Point<Dim>::Zero();
    for (int i = 0; i <= Dim; ++i) c += (w[i] / sum) * v[i];
    Point<Dim> n;
    for (int i = 0; i < Dim; ++i) n[i] = gauss(rng);
    if (n.norm() < 1e-3) continue;
    n.normalize();
    rc.mu_plus = std::pow(10.0, 4.0 * unit(rng) - 2.0);
    rc.mu_minus = std::pow(10.0, 4.0 * unit(rng) - 2.0);
    rc.dls = DiscreteLevelSet<Dim>::discretize(LevelSet<Dim>::plane(n, n.dot(c)), rc.mesh);
    if (label_from_values(rc.dls.element_values(rc.mesh, e)) != ElementLabel::cut) continue;
    try {
      rc.cut = cut_element(rc.mesh, rc.dls, e);
    } catch (const DegenerateCut&) {
      continue;
    }
    return rc;
  }
  throw Error("no_convergence", "could not draw a non-degenerate random cut");
}

/// Largest coefficient difference between two piecewise pairs.
template <int Dim>
double pair_distance(const PiecewisePair<Dim>& a, const PiecewisePair<Dim>& b) {
  double d = 0.0;
  for (int s = 0; s < 2; ++s) {
    d = std::max(d, (a.u[s].constant - b.u[s].constant).cwiseAbs().maxCoeff());
    d = std::max(d, (a.u[s].gradient - b.u[s].gradient).cwiseAbs().maxCoeff());
    d = std::max(d, std::abs(a.p[s].constant - b.p[s].constant));
    d = std::max(d, (a.p[s].gradient - b.p[s].gradient).cwiseAbs().maxCoeff());
  }
  return d;
}

/// Jump residuals of a pair divided by the size of the quantities entering them.
template <int Dim>
double relative_jump_residual(const CutElement<Dim>& cut, const PiecewisePair<Dim>& pair,
                              double mu_plus, double mu_minus, const Point<Dim>& target) {
  const JumpResiduals r = jump_residuals(cut, pair, mu_plus, mu_minus, target);
  double grad = 0.0, value = 0.0, pressure = 0.0, pgrad = 0.0;
  for (int s = 0; s < 2; ++s) {
    grad = std::max(grad, pair.u[s].gradient.norm());
    pressure = std::max(pressure, std::abs(pair.p[s](cut.reference_point)));
    pgrad = std::max(pgrad, pair.p[s].gradient.norm());
    for (const auto& x : cut.polygon) value = std::max(value, pair.u[s](x).norm());
  }
  const double mu = std::max(mu_plus, mu_minus);
  const double stress_scale = mu * grad + pressure + target.norm();
  const double h = cut.diameter;
  auto ratio = [](double r, double scale) { return scale > 0.0 ? r / scale : r; };
  return std::max({ratio(r.stress, stress_scale), ratio(r.velocity, value + h * grad),
                   ratio(r.divergence, grad), ratio(r.pressure_gradient, pgrad + pressure / h)});
}

namespace detail {

template <int Dim>
void basis_checks(SuiteReport& rep, const std::string& suite, std::mt19937_64& rng, int count) {
  const std::string tag = std::to_string(Dim) + "d";
  double duality = 0.0, frames = 0.0, jumps = 0.0, correction = 0.0, reduction = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < count; ++trial) {
    const RandomCut<Dim> rc = random_cut<Dim>(rng);
    const auto& cut = rc.cut;
    const auto aux = build_aux(cut);
    std::array<Side, Dim + 1> sides;
    for (int j = 0; j <= Dim; ++j) sides[j] = cut.vertex_side(j);
    if (suite == "reduction") {
      const auto same = build_basis(cut, aux, rc.mu_plus, rc.mu_plus);
      const auto standard = standard_basis<Dim>(cut.vertices);
      for (int k = 0; k < LocalIFEBasis<Dim>::kPairs; ++k)
        reduction = std::max(reduction, pair_distance(same.pairs[k], standard.pairs[k]));
      continue;
    }
    const auto basis = build_basis(cut, aux, rc.mu_plus, rc.mu_minus);
    if (suite == "unisolvence") {
      const auto local = build_basis_local_frame(cut, aux, rc.mu_plus, rc.mu_minus);
      for (int k = 0; k < LocalIFEBasis<Dim>::kPairs; ++k) {
        const auto dofs = nodal_dofs(basis.pairs[k], cut.vertices, sides);
        for (int l = 0; l < LocalIFEBasis<Dim>::kPairs; ++l)
          duality = std::max(duality, std::abs(dofs[l] - (k == l ? 1.0 : 0.0)));
        double scale = 1.0;
        for (int s = 0; s < 2; ++s) scale = std::max(scale, basis.pairs[k].u[s].gradient.norm());
        frames = std::max(frames, pair_distance(basis.pairs[k], local.pairs[k]) / scale);
      }
    } else {
      for (const auto& pair : basis.pairs)
        jumps = std::max(jumps, relative_jump_residual<Dim>(cut, pair, rc.mu_plus, rc.mu_minus,
                                                       Point<Dim>::Zero()));
      Point<Dim> g;
      for (int i = 0; i < Dim; ++i) g[i] = gauss(rng);
      const auto c = build_correction(cut, aux, rc.mu_plus, rc.mu_minus, g);
      correction = std::max(correction, relative_jump_residual(cut, c, rc.mu_plus, rc.mu_minus, g));
      for (double v : nodal_dofs(c, cut.vertices, sides))
        correction = std::max(correction, std::abs(v));
    }
  }
  if (suite == "reduction") {
    rep.checks.push_back({"max deviation from the standard basis, equal viscosities, " + tag,
                          reduction, 0.0, 0.0});
  } else if (suite == "unisolvence") {
    rep.checks.push_back({"nodal duality of the basis, " + tag, duality, 0.0, 1e-10});
    rep.checks.push_back({"global vs local-frame basis, " + tag, frames, 0.0, 1e-10});
  } else {
    rep.checks.push_back({"relative jump residual of the basis, " + tag, jumps, 0.0, 1e-10});
    rep.checks.push_back({"relative jump residual of the correction, " + tag, correction, 0.0,
                          1e-10});
  }
}

}  // namespace detail

/// Smallest nonzero singular value of A_h on the non-Dirichlet DoFs, measured with the broken H1
/// seminorm of the velocity plus the L2 norm of the pressure on both sides. The constant pressure
/// is the only kernel, so the second-smallest singular value is returned.
template <int Dim>
double infsup_constant(const Discretization<Dim>& D) {
  const SparseSystem sys = assemble(D);
  const GramMatrices G = assemble_gram(D);
  const std::vector<Index> free = free_dofs(sys);
  const Eigen::MatrixXd A(restrict_matrix(sys.raw, free));
  const SparseMatrix gram = G.velocity_semi + G.pressure_l2;
  const Eigen::MatrixXd Gd(restrict_matrix(gram, free));
  const Eigen::LLT<Eigen::MatrixXd> llt(Gd);
  if (llt.info() != Eigen::Success) throw SingularSystem(0.0, "norm matrix is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd S = L.triangularView<Eigen::Lower>().solve(A);
  S = L.triangularView<Eigen::Lower>().solve(S.transpose()).transpose();
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(S).singularValues();
  if (s.size() < 2) throw InvalidArgument("system too small for an inf-sup estimate");
  return s[s.size() - 2];
}

struct ConsistencyReport {
  double residual = 0.0;  // dual norm of l_h - A_h(interpolant)
  double load = 0.0;      // dual norm of l_h
};

/// Applies A_h to the IFE interpolant of the exact solution and measures the mismatch with the
/// right-hand side in the dual norm of the broken H1 (velocity) plus L2 (pressure) norm.
template <int Dim>
ConsistencyReport consistency_probe(const Discretization<Dim>& D, const SparseSystem& sys) {
  const Eigen::VectorXd X = ife_interpolate(D);
  const Eigen::VectorXd r = sys.load - sys.raw * X;
  const GramMatrices G = assemble_gram(D);
  const std::vector<Index> free = free_dofs(sys);
  const SparseMatrix gram = restrict_matrix(SparseMatrix(G.velocity_h1 + G.pressure_l2), free);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw SingularSystem(0.0, "norm matrix factorization failed");
  auto dual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd vf(Index(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) vf[Index(k)] = v[free[k]];
    return std::sqrt(std::max(0.0, vf.dot(ldlt.solve(vf))));
  };
  return {dual(r), dual(sys.load)};
}

/// Problem with the circle or sphere center moved by `shift`.
template <int Dim>
Problem<Dim> shifted_problem(const Problem<Dim>& P, const Point<Dim>& shift) {
  Problem<Dim> Q = P;
  Q.levelset = LevelSet<Dim>{[f = P.levelset.value, shift](const Point<Dim>& x) { return f(x - shift); },
                             [g = P.levelset.gradient, shift](const Point<Dim>& x) { return g(x - shift); }};
  return Q;
}

template <int Dim>
double condition_at(const Problem<Dim>& P, int M) {
  const auto D = discretize(P, M, default_parameters(P));
  const SparseSystem sys = assemble(D);
  return system_condition_number(sys).kappa;
}

/// Sample points of the discrete interface: polygon vertices and centroids of its simplices.
template <int Dim>
std::vector<Point<Dim>> interface_samples(const CutElement<Dim>& cut) {
  std::vector<Point<Dim>> pts(cut.polygon.begin(), cut.polygon.end());
  for (const auto& s : triangulate_polygon<Dim>(cut.polygon)) pts.push_back(centroid<Dim, Dim - 1>(s));
  return pts;
}

struct GeometryLevel {
  int M = 0;
  double h = 0.0;
  double volume_error = 0.0;  // max relative |sum of pieces - element|
  double max_distance = 0.0;  // max |d| at interface sample points
  double max_ph = 0.0;        // max |x - p_h(x)|
};

template <int Dim>
GeometryLevel geometry_level(const LevelSet<Dim>& ls, const Box<Dim>& box, int M) {
  GeometryLevel g;
  g.M = M;
  const auto mesh = Mesh<Dim>::build_cartesian(box, M);
  g.h = mesh.h();
  const auto dls = DiscreteLevelSet<Dim>::discretize(ls, mesh);
  const auto labels = classify(mesh, dls);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (labels.elements[e] != ElementLabel::cut) continue;
    const auto cut = cut_element(mesh, dls, e);
    double sum = 0.0;
    for (const auto& p : cut.pieces) sum += simplex_measure<Dim, Dim>(p.vertices);
    g.volume_error = std::max(g.volume_error, std::abs(sum - cut.volume) / cut.volume);
    for (const auto& x : interface_samples(cut)) {
      g.max_distance = std::max(g.max_distance, std::abs(ls.value(x)));
      g.max_ph = std::max(g.max_ph, (x - closest_point_ph(ls, cut, x)).norm());
    }
  }
  return g;
}

namespace detail {

inline void slope_check(SuiteReport& rep, const std::string& name, const std::vector<double>& h,
                        const std::vector<double>& e, double lo, double hi) {
  rep.checks.push_back({name, regression_slope(h, e), lo, hi});
}

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace detail

inline SuiteReport verify_theory(const std::string& suite, std::uint64_t seed,
                                 const VerifyOptions& options = {}) {
  SuiteReport rep;
  rep.suite = suite;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  if (suite == "unisolvence" || suite == "jumps" || suite == "reduction") {
    if (options.random_cuts < 1) throw InvalidArgument("random_cuts must be >= 1");
    detail::basis_checks<2>(rep, suite, rng, options.random_cuts);
    detail::basis_checks<3>(rep, suite, rng, options.random_cuts);
    rep.notes.push_back(std::to_string(options.random_cuts) + " random cuts per dimension");
  } else if (suite == "interpolation_rates") {
    const auto P = problems::ex2();
    std::vector<double> h, e0, e1, ep;
    for (int M : {16, 32, 64}) {
      const auto D = discretize(P, M, default_parameters(P));
      const ErrorNorms err = compute_errors(interpolant_field(D));
      h.push_back(D.mesh.h());
      e0.push_back(err.e0_u);
      e1.push_back(err.e1_u);
      ep.push_back(err.e0_p);
      rep.notes.push_back("M=" + std::to_string(M) + " e0_u=" + detail::format_value(err.e0_u) +
                          " e1_u=" + detail::format_value(err.e1_u) +
                          " e0_p=" + detail::format_value(err.e0_p));
    }
    detail::slope_check(rep, "interpolant L2 velocity slope", h, e0, 1.8, 2.2);
    detail::slope_check(rep, "interpolant broken H1 velocity slope", h, e1, 0.8, 1.2);
    detail::slope_check(rep, "interpolant L2 pressure slope", h, ep, 0.9,
                        std::numeric_limits<double>::infinity());
  } else if (suite == "infsup") {
    const auto P = problems::ex2();
    std::vector<double> beta;
    for (int M : {4, 8, 16}) {
      const auto D = discretize(P, M, default_parameters(P));
      beta.push_back(infsup_constant(D));
      rep.notes.push_back("M=" + std::to_string(M) + " beta=" + detail::format_value(beta.back()));
    }
    const double floor = 0.5 * beta[0];
    rep.checks.push_back({"inf-sup constant at M=4", beta[0], 1e-12,
                          std::numeric_limits<double>::infinity()});
    for (std::size_t i = 1; i < beta.size(); ++i) {
      const std::string m = std::to_string(4 << i);
      rep.checks.push_back({"inf-sup ratio M=" + m + " to previous level", beta[i] / beta[i - 1],
                            0.9, std::numeric_limits<double>::infinity()});
      rep.checks.push_back({"inf-sup constant at M=" + m + " above half of M=4", beta[i], floor,
                            std::numeric_limits<double>::infinity()});
    }
  } else if (suite == "condition_number") {
    const auto P = problems::ex1_case_a();
    std::vector<double> h, kappa;
    for (int M : {4, 8, 16}) {
      h.push_back((P.box.upper[0] - P.box.lower[0]) / M);
      kappa.push_back(condition_at(P, M));
      rep.notes.push_back("M=" + std::to_string(M) + " kappa=" + detail::format_value(kappa.back()));
    }
    detail::slope_check(rep, "log kappa vs log h slope", h, kappa, -2.5, -1.5);
    const int M = 8;
    const double k0 = kappa[1];
    const double hh = h[1];
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double spread = 0.0;
    for (int t = 0; t < 10; ++t) {
      Point<2> s(unit(rng), unit(rng));
      if (s.norm() > 1.0) s.normalize();
      const double k = condition_at(shifted_problem(P, Point<2>(0.3 * hh * s)), M);
      spread = std::max(spread, std::abs(k - k0) / k0);
    }
    rep.checks.push_back({"relative kappa change under center shifts <= 0.3h, M=8", spread, 0.0,
                          0.15});
  } else if (suite == "geometry") {
    std::vector<double> h2, d2, p2;
    double volume = 0.0;
    const auto circle = problems::ex2().levelset;
    for (int M : {16, 32, 64, 128}) {
      const auto g = geometry_level(circle, Box<2>::symmetric(1.0), M);
      h2.push_back(g.h);
      d2.push_back(g.max_distance);
      p2.push_back(g.max_ph);
      volume = std::max(volume, g.volume_error);
    }
    std::vector<double> h3, d3, p3;
    const auto sphere = problems::ex3().levelset;
    for (int M : {8, 16, 32}) {
      const auto g = geometry_level(sphere, Box<3>::symmetric(1.0), M);
      h3.push_back(g.h);
      d3.push_back(g.max_distance);
      p3.push_back(g.max_ph);
      volume = std::max(volume, g.volume_error);
    }
    for (int t = 0; t < options.random_cuts; ++t) {
      const auto a = random_cut<2>(rng);
      double s2 = 0.0;
      for (const auto& p : a.cut.pieces) s2 += simplex_measure<2, 2>(p.vertices);
      volume = std::max(volume, std::abs(s2 - a.cut.volume) / a.cut.volume);
      const auto b = random_cut<3>(rng);
      double s3 = 0.0;
      for (const auto& p : b.cut.pieces) s3 += simplex_measure<3, 3>(p.vertices);
      volume = std::max(volume, std::abs(s3 - b.cut.volume) / b.cut.volume);
    }
    rep.checks.push_back({"sub-tessellation volume defect (relative)", volume, 0.0, 1e-12});
    detail::slope_check(rep, "max |d| on the discrete interface slope, 2d", h2, d2, 1.7, 2.3);
    detail::slope_check(rep, "max |x - p_h(x)| slope, 2d", h2, p2, 1.7, 2.3);
    detail::slope_check(rep, "max |d| on the discrete interface slope, 3d", h3, d3, 1.7, 2.3);
    detail::slope_check(rep, "max |x - p_h(x)| slope, 3d", h3, p3, 1.7, 2.3);
  } else {
    throw InvalidArgument("unknown suite '" + suite + "'");
  }
  return rep;
}

}  // namespace mife
