#pragma once

// Everything the assembly needs on one mesh level: geometry, element spaces and corrections.

#include "mife/local_space.hpp"
#include "mife/parallel.hpp"
#include "mife/problems.hpp"
#include "mife/surface.hpp"

namespace mife {

enum class Method { ife, conventional_mini };

inline const char* to_string(Method m) { return m == Method::ife ? "ife" : "conventional_mini"; }

struct Parameters {
  double mu_plus = 1.0;
  double mu_minus = 1.0;
  int gamma = -1;
  double eta = 0.0;
  Method method = Method::ife;
  int patch_grid = 16;

  void validate() const {
    if (!(mu_plus > 0.0) || !(mu_minus > 0.0) || !std::isfinite(mu_plus) ||
        !std::isfinite(mu_minus))
      throw InvalidArgument("viscosities must be positive and finite");
    if (gamma != 1 && gamma != -1) throw InvalidArgument("gamma must be +1 or -1");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be >= 0");
    if (patch_grid < 1) throw InvalidArgument("patch grid must be >= 1");
  }
};

/// A piece of an element with a single side of the discrete interface.
template <int Dim>
using Piece = SubSimplex<Dim, Dim>;

template <int Dim>
struct Discretization {
  Mesh<Dim> mesh;
  const Problem<Dim>* problem = nullptr;
  Parameters params;
  DiscreteLevelSet<Dim> dls;
  Classification labels;

  std::vector<Index> cut_id;  // element -> position in cuts, or -1
  std::vector<CutElement<Dim>> cuts;
  std::vector<AuxiliaryJumpFunctions<Dim>> aux;
  std::vector<LocalIFEBasis<Dim>> bases;        // IFE bases of the cut elements
  std::vector<Point<Dim>> avg_g;                // patch averages of the stress jump
  std::vector<PiecewisePair<Dim>> corrections;  // (u_J, p_J) on cut elements
  double c_J = 0.0;                             // mean of p_J over the domain

  double mu(Side s) const { return s == Side::plus ? params.mu_plus : params.mu_minus; }
  bool is_cut(Index e) const { return cut_id[e] >= 0; }
  bool ife() const { return params.method == Method::ife; }
  bool has_correction() const { return !corrections.empty(); }

  const CutElement<Dim>& cut(Index e) const { return cuts[cut_id[e]]; }

  /// Side of an uncut element.
  Side element_side(Index e) const {
    return labels.elements[e] == ElementLabel::plus ? Side::plus : Side::minus;
  }

  /// Sub-simplices with constant side; the whole element when it is not cut.
  std::vector<Piece<Dim>> pieces(Index e) const {
    if (is_cut(e)) return cut(e).pieces;
    return {Piece<Dim>{mesh.vertices(e), element_side(e)}};
  }

  LocalSpace<Dim> space(Index e) const {
    if (is_cut(e) && ife()) return LocalSpace<Dim>(bases[cut_id[e]]);
    return LocalSpace<Dim>(standard_basis<Dim>(mesh.vertices(e)));
  }

  /// Correction pair on element e including the constant shift -c_J of the pressure.
  PiecewisePair<Dim> shifted_correction(Index e) const {
    PiecewisePair<Dim> c;
    if (is_cut(e) && has_correction()) c = corrections[cut_id[e]];
    for (auto& p : c.p) p.constant -= c_J;
    return c;
  }

  /// Side of the sub-simplex of element e that contains x.
  Side side_at(Index e, const Point<Dim>& x) const {
    return is_cut(e) ? cut(e).side_at(x) : element_side(e);
  }
};

/// Builds geometry and spaces for one mesh level. The correction is built only for the IFE
/// method and only when the problem has a nonzero surface force.
template <int Dim>
Discretization<Dim> discretize(const Problem<Dim>& problem, int M, const Parameters& params) {
  params.validate();
  Discretization<Dim> D;
  D.problem = &problem;
  D.params = params;
  D.mesh = Mesh<Dim>::build_cartesian(problem.box, M);
  D.dls = DiscreteLevelSet<Dim>::discretize(problem.levelset, D.mesh);
  D.labels = classify(D.mesh, D.dls);

  D.cut_id.assign(D.mesh.num_elements(), -1);
  std::vector<Index> cut_elements;
  for (Index e = 0; e < D.mesh.num_elements(); ++e)
    if (D.labels.elements[e] == ElementLabel::cut) {
      D.cut_id[e] = Index(cut_elements.size());
      cut_elements.push_back(e);
    }
  const Index n_cut = Index(cut_elements.size());
  D.cuts.resize(n_cut);
  D.aux.resize(n_cut);
  const bool ife = params.method == Method::ife;
  const bool correct = ife && problem.surface_force;
  if (ife) D.bases.resize(n_cut);
  if (correct) {
    D.avg_g.resize(n_cut);
    D.corrections.resize(n_cut);
  }

  parallel_for(n_cut, [&](Index k) {
    const Index e = cut_elements[k];
    D.cuts[k] = cut_element(D.mesh, D.dls, e);
    D.aux[k] = build_aux(D.cuts[k]);
    if (ife) D.bases[k] = build_basis(D.cuts[k], D.aux[k], params.mu_plus, params.mu_minus);
    if (correct) {
      const auto patch = build_patch(problem.levelset, D.cuts[k], params.patch_grid);
      D.avg_g[k] = avg_over_patch(patch, [&](const Point<Dim>& x) { return problem.g(x); });
      D.corrections[k] =
          build_correction(D.cuts[k], D.aux[k], params.mu_plus, params.mu_minus, D.avg_g[k]);
    }
  });

  if (correct) {
    double integral = 0.0;
    const int degree = DefaultDegrees<Dim>::volume;
    for (Index k = 0; k < n_cut; ++k)
      for (const auto& piece : D.cuts[k].pieces) {
        const auto& p = D.corrections[k].pressure(piece.side);
        integral += integrate_simplex<Dim, Dim>(piece.vertices, degree,
                                                [&](const Point<Dim>& x) { return p(x); });
      }
    D.c_J = integral / problem.box.volume();
  }
  return D;
}

}  // namespace mife
