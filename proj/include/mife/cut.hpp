#pragma once

// Cutting simplices by the zero set of an affine function.

#include "mife/levelset.hpp"
#include "mife/quadrature.hpp"

namespace mife {

/// Zero of the linear interpolant between (a, da) and (b, db).
template <int Dim>
Point<Dim> edge_root(const Point<Dim>& a, const Point<Dim>& b, double da, double db) {
  if (!(da * db < 0.0)) throw InvalidArgument("edge_root: endpoint values must differ in sign");
  return a + (da / (da - db)) * (b - a);
}

template <int Dim, int K>
struct SubSimplex {
  SimplexVertices<Dim, K> vertices;
  Side side;
};

namespace detail {

template <int Dim, int K>
void push_prism(std::vector<SubSimplex<Dim, K>>& out, const std::array<Point<Dim>, 3>& top,
                const std::array<Point<Dim>, 3>& bottom, Side side) {
  static_assert(K == 3);
  out.push_back({{top[0], top[1], top[2], bottom[0]}, side});
  out.push_back({{top[1], top[2], bottom[0], bottom[1]}, side});
  out.push_back({{top[2], bottom[0], bottom[1], bottom[2]}, side});
}

}  // namespace detail

/// Splits a k-simplex (k = 1, 2, 3) into sub-simplices on either side of the zero
/// set of the affine interpolant of the nodal values. Values must be nonzero.
template <int Dim, int K>
std::vector<SubSimplex<Dim, K>> cut_simplex(const SimplexVertices<Dim, K>& v,
                                            const std::array<double, K + 1>& d) {
  std::vector<SubSimplex<Dim, K>> out;
  int n_plus = 0;
  for (double x : d) n_plus += x > 0.0;
  if (n_plus == 0 || n_plus == K + 1) {
    out.push_back({v, side_of_value(d[0])});
    return out;
  }
  const Side plus = Side::plus, minus = Side::minus;
  auto root = [&](int i, int j) { return edge_root<Dim>(v[i], v[j], d[i], d[j]); };

  // a vertex alone on its side
  const int lone_count = std::min(n_plus, K + 1 - n_plus);
  if (lone_count == 1) {
    const bool lone_is_plus = (n_plus == 1);
    int a = 0;
    for (int i = 0; i <= K; ++i)
      if ((d[i] > 0.0) == lone_is_plus) a = i;
    std::array<int, K> others{};
    for (int i = 0, k = 0; i <= K; ++i)
      if (i != a) others[k++] = i;
    const Side sa = lone_is_plus ? plus : minus;
    const Side sb = lone_is_plus ? minus : plus;
    std::array<Point<Dim>, K> c;
    for (int k = 0; k < K; ++k) c[k] = root(a, others[k]);

    if constexpr (K == 1) {
      out.push_back({{v[0], c[0]}, side_of_value(d[0])});
      out.push_back({{c[0], v[1]}, side_of_value(d[1])});
    } else if constexpr (K == 2) {
      const Point<Dim>&b1 = v[others[0]], &b2 = v[others[1]];
      out.push_back({{v[a], c[0], c[1]}, sa});
      out.push_back({{c[0], b1, b2}, sb});
      out.push_back({{c[0], b2, c[1]}, sb});
    } else {
      out.push_back({{v[a], c[0], c[1], c[2]}, sa});
      detail::push_prism<Dim, K>(out, {c[0], c[1], c[2]},
                                 {v[others[0]], v[others[1]], v[others[2]]}, sb);
    }
    return out;
  }

  if constexpr (K == 3) {
    // two vertices on each side: two prisms
    std::array<int, 2> a{}, b{};
    for (int i = 0, ia = 0, ib = 0; i <= K; ++i) (d[i] > 0.0 ? a[ia++] : b[ib++]) = i;
    const Point<Dim> c11 = root(a[0], b[0]), c12 = root(a[0], b[1]);
    const Point<Dim> c21 = root(a[1], b[0]), c22 = root(a[1], b[1]);
    detail::push_prism<Dim, K>(out, {v[a[0]], c11, c12}, {v[a[1]], c21, c22}, plus);
    detail::push_prism<Dim, K>(out, {v[b[0]], c11, c21}, {v[b[1]], c12, c22}, minus);
  }
  return out;
}

/// Vertices of the zero-set polygon of a cut full-dimensional simplex, in cyclic order.
template <int Dim>
std::vector<Point<Dim>> interface_polygon(const SimplexVertices<Dim, Dim>& v,
                                          const std::array<double, Dim + 1>& d) {
  std::vector<int> plus, minus;
  for (int i = 0; i <= Dim; ++i) (d[i] > 0.0 ? plus : minus).push_back(i);
  auto root = [&](int i, int j) { return edge_root<Dim>(v[i], v[j], d[i], d[j]); };
  std::vector<Point<Dim>> poly;
  if (plus.size() == 2 && minus.size() == 2) {
    poly = {root(plus[0], minus[0]), root(plus[0], minus[1]), root(plus[1], minus[1]),
            root(plus[1], minus[0])};
  } else {
    const auto& lone = plus.size() == 1 ? plus : minus;
    const auto& rest = plus.size() == 1 ? minus : plus;
    for (int j : rest) poly.push_back(root(lone[0], j));
  }
  return poly;
}

/// Splits a planar polygon (or a segment in 2D) into (Dim-1)-simplices.
/// Polygons with more than three vertices are fanned from their vertex mean.
template <int Dim>
std::vector<SimplexVertices<Dim, Dim - 1>> triangulate_polygon(
    const std::vector<Point<Dim>>& poly) {
  std::vector<SimplexVertices<Dim, Dim - 1>> out;
  if constexpr (Dim == 2) {
    out.push_back({poly[0], poly[1]});
  } else {
    if (poly.size() == 3) {
      out.push_back({poly[0], poly[1], poly[2]});
    } else {
      Point<Dim> c = Point<Dim>::Zero();
      for (const auto& p : poly) c += p;
      c /= double(poly.size());
      for (std::size_t i = 0; i < poly.size(); ++i)
        out.push_back({c, poly[i], poly[(i + 1) % poly.size()]});
    }
  }
  return out;
}

template <int Dim>
double polygon_measure(const std::vector<Point<Dim>>& poly) {
  double m = 0.0;
  for (const auto& s : triangulate_polygon<Dim>(poly)) m += simplex_measure<Dim, Dim - 1>(s);
  return m;
}

/// Orthonormal tangents completing n to a right-handed frame.
template <int Dim>
std::array<Point<Dim>, Dim - 1> tangent_frame(const Point<Dim>& n) {
  std::array<Point<Dim>, Dim - 1> t;
  if constexpr (Dim == 2) {
    t[0] = Point<Dim>(n[1], -n[0]);
  } else {
    int axis = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(n[k]) < std::abs(n[axis])) axis = k;
    Point<Dim> e = Point<Dim>::Unit(axis);
    t[0] = (e - e.dot(n) * n).normalized();
    t[1] = n.cross(t[0]);
  }
  return t;
}

/// Geometry of an interface element.
template <int Dim>
struct CutElement {
  Index element = -1;
  SimplexVertices<Dim, Dim> vertices;
  std::array<double, Dim + 1> levels{};  // nodal I_h d
  AffineScalar<Dim> level;                // I_h d on the element
  Point<Dim> normal;                      // from the minus towards the plus side
  std::array<Point<Dim>, Dim - 1> tangents;
  Point<Dim> reference_point;  // x_T*, centroid of the interface polygon
  std::vector<Point<Dim>> polygon;
  std::vector<SubSimplex<Dim, Dim>> pieces;
  double diameter = 0.0;
  double volume = 0.0;

  Side vertex_side(int i) const { return side_of_value(levels[i]); }
  /// Side of a point of the element; points on the discrete interface count as minus.
  Side side_at(const Point<Dim>& x) const { return side_of_value(level(x)); }
  /// Frame matrix with columns t_1..t_{N-1}, n.
  Tensor<Dim> frame() const {
    Tensor<Dim> q;
    for (int i = 0; i < Dim - 1; ++i) q.col(i) = tangents[i];
    q.col(Dim - 1) = normal;
    return q;
  }
  /// Fictitious box R_T: centered at x_T*, frame aligned, half-width h_T.
  Point<Dim> box_center() const { return reference_point; }
  double box_half_width() const { return diameter; }
};

template <int Dim>
CutElement<Dim> cut_element(const Mesh<Dim>& mesh, const DiscreteLevelSet<Dim>& dls, Index e) {
  CutElement<Dim> c;
  c.element = e;
  c.vertices = mesh.vertices(e);
  c.levels = dls.element_values(mesh, e);
  if (label_from_values(c.levels) != ElementLabel::cut)
    throw InvalidArgument("element " + std::to_string(e) + " is not cut by the interface");
  c.level = dls.element_affine(e);
  c.diameter = simplex_diameter<Dim, Dim>(c.vertices);
  c.volume = simplex_measure<Dim, Dim>(c.vertices);
  c.normal = c.level.gradient.normalized();
  c.tangents = tangent_frame<Dim>(c.normal);
  c.polygon = interface_polygon<Dim>(c.vertices, c.levels);

  const double measure = polygon_measure<Dim>(c.polygon);
  if (!(measure >= 1e-14 * std::pow(c.diameter, Dim - 1))) throw DegenerateCut(e, measure);

  Point<Dim> centroid_sum = Point<Dim>::Zero();
  for (const auto& s : triangulate_polygon<Dim>(c.polygon))
    centroid_sum += simplex_measure<Dim, Dim - 1>(s) * centroid<Dim, Dim - 1>(s);
  c.reference_point = centroid_sum / measure;
  c.pieces = cut_simplex<Dim, Dim>(c.vertices, c.levels);
  return c;
}

}  // namespace mife
