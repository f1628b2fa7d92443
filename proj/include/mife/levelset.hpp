#pragma once

// Level sets, their nodal interpolants and element/face classification.

#include "mife/mesh.hpp"

#include <functional>

namespace mife {

/// Signed function d, positive in the exterior phase and negative in the inclusion.
template <int Dim>
struct LevelSet {
  std::function<double(const Point<Dim>&)> value;
  std::function<Point<Dim>(const Point<Dim>&)> gradient;

  double operator()(const Point<Dim>& x) const { return value(x); }

  /// Signed distance to a circle (2D) or sphere (3D).
  static LevelSet sphere(const Point<Dim>& center, double radius) {
    return {[=](const Point<Dim>& x) { return (x - center).norm() - radius; },
            [=](const Point<Dim>& x) -> Point<Dim> {
              const Point<Dim> r = x - center;
              const double n = r.norm();
              return n > 0.0 ? Point<Dim>(r / n) : Point<Dim>::Unit(0);
            }};
  }

  /// d(x) = n.x - offset with n normalized.
  static LevelSet plane(const Point<Dim>& normal, double offset) {
    const Point<Dim> n = normal.normalized();
    return {[=](const Point<Dim>& x) { return n.dot(x) - offset; },
            [=](const Point<Dim>&) -> Point<Dim> { return n; }};
  }
};

enum class ElementLabel : int { minus = 0, plus = 1, cut = 2 };

template <int Dim>
class DiscreteLevelSet {
 public:
  /// Samples d at the nodes; exact zeros are moved to +1e-12 h so every sign is strict.
  static DiscreteLevelSet discretize(const LevelSet<Dim>& ls, const Mesh<Dim>& mesh) {
    DiscreteLevelSet out;
    out.nodal_.resize(mesh.num_nodes());
    const double bump = 1e-12 * mesh.h();
    for (Index i = 0; i < mesh.num_nodes(); ++i) {
      double d = ls.value(mesh.node(i));
      if (d == 0.0) d = bump;
      out.nodal_[i] = d;
    }
    out.affine_.resize(mesh.num_elements());
    for (Index e = 0; e < mesh.num_elements(); ++e) out.affine_[e] = affine_interpolant<Dim>(
        mesh.vertices(e), out.element_values(mesh, e));
    return out;
  }

  double nodal_value(Index node) const { return nodal_[node]; }
  std::span<const double> nodal_values() const { return nodal_; }
  /// I_h d restricted to element e, with coefficients about the origin.
  const AffineScalar<Dim>& element_affine(Index e) const { return affine_[e]; }

  std::array<double, Dim + 1> element_values(const Mesh<Dim>& mesh, Index e) const {
    std::array<double, Dim + 1> v;
    for (int i = 0; i <= Dim; ++i) v[i] = nodal_[mesh.element(e)[i]];
    return v;
  }
  std::array<double, Dim> face_values(const Mesh<Dim>& mesh, Index f) const {
    std::array<double, Dim> v;
    for (int i = 0; i < Dim; ++i) v[i] = nodal_[mesh.face(f)[i]];
    return v;
  }

 private:
  std::vector<double> nodal_;
  std::vector<AffineScalar<Dim>> affine_;
};

template <std::size_t N>
ElementLabel label_from_values(const std::array<double, N>& values) {
  bool plus = false, minus = false;
  for (double v : values) (v > 0.0 ? plus : minus) = true;
  if (plus && minus) return ElementLabel::cut;
  return plus ? ElementLabel::plus : ElementLabel::minus;
}

struct Classification {
  std::vector<ElementLabel> elements;
  std::vector<bool> interface_faces;

  Index count(ElementLabel l) const {
    return std::count(elements.begin(), elements.end(), l);
  }
  Index num_interface_faces() const {
    return std::count(interface_faces.begin(), interface_faces.end(), true);
  }
};

/// An element is cut iff its nodal values change sign; likewise for faces.
template <int Dim>
Classification classify(const Mesh<Dim>& mesh, const DiscreteLevelSet<Dim>& dls) {
  Classification c;
  c.elements.resize(mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e)
    c.elements[e] = label_from_values(dls.element_values(mesh, e));
  c.interface_faces.resize(mesh.num_faces());
  for (Index f = 0; f < mesh.num_faces(); ++f)
    c.interface_faces[f] = label_from_values(dls.face_values(mesh, f)) == ElementLabel::cut;
  return c;
}

}  // namespace mife
