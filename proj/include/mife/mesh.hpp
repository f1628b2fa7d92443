#pragma once

// Uniform Cartesian simplicial meshes of an axis-aligned box.

#include "mife/simplex.hpp"

#include <map>
#include <span>
#include <vector>

namespace mife {

template <int Dim>
struct Box {
  Point<Dim> lower;
  Point<Dim> upper;

  double volume() const { return (upper - lower).prod(); }
  bool degenerate() const { return !((upper - lower).array() > 0.0).all(); }

  static Box symmetric(double half_width) {
    return {Point<Dim>::Constant(-half_width), Point<Dim>::Constant(half_width)};
  }
};

template <int Dim>
struct FaceFrame {
  Point<Dim> normal;  // from the first adjacent element towards the second
  double diameter = 0.0;
};

template <int Dim>
class Mesh {
 public:
  static_assert(Dim == 2 || Dim == 3);
  static constexpr int kVertices = Dim + 1;
  using Element = std::array<Index, Dim + 1>;
  using Face = std::array<Index, Dim>;
  static constexpr Index kNoElement = -1;

  /// 2 M^2 triangles in 2D (diagonal lower-left to upper-right), 6 M^3 Kuhn tetrahedra in 3D.
  static Mesh build_cartesian(const Box<Dim>& box, int M);

  int subdivisions() const { return M_; }
  const Box<Dim>& box() const { return box_; }
  /// Max element diameter.
  double h() const { return h_; }

  Index num_nodes() const { return Index(nodes_.size()); }
  Index num_elements() const { return Index(elements_.size()); }
  Index num_faces() const { return Index(faces_.size()); }

  const Point<Dim>& node(Index i) const { return nodes_[i]; }
  std::span<const Point<Dim>> nodes() const { return nodes_; }
  const Element& element(Index e) const { return elements_[e]; }
  std::span<const Element> elements() const { return elements_; }
  const Face& face(Index f) const { return faces_[f]; }
  /// (first, second) element of a face; second is kNoElement on the boundary.
  const std::array<Index, 2>& face_elements(Index f) const { return face_elements_[f]; }
  /// Face opposite local vertex i of element e.
  const std::array<Index, Dim + 1>& element_faces(Index e) const { return element_faces_[e]; }
  bool is_boundary_node(Index i) const { return boundary_node_[i]; }
  bool is_boundary_face(Index f) const { return face_elements_[f][1] == kNoElement; }

  SimplexVertices<Dim, Dim> vertices(Index e) const {
    SimplexVertices<Dim, Dim> v;
    for (int i = 0; i <= Dim; ++i) v[i] = nodes_[elements_[e][i]];
    return v;
  }
  SimplexVertices<Dim, Dim - 1> face_vertices(Index f) const {
    SimplexVertices<Dim, Dim - 1> v;
    for (int i = 0; i < Dim; ++i) v[i] = nodes_[faces_[f][i]];
    return v;
  }
  double volume(Index e) const { return signed_volume<Dim>(vertices(e)); }
  double diameter(Index e) const { return simplex_diameter<Dim, Dim>(vertices(e)); }

  FaceFrame<Dim> face_frame(Index f) const;

 private:
  Box<Dim> box_{};
  int M_ = 0;
  double h_ = 0.0;
  std::vector<Point<Dim>> nodes_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<Index, 2>> face_elements_;
  std::vector<std::array<Index, Dim + 1>> element_faces_;
  std::vector<bool> boundary_node_;
};

namespace detail {

// Local cell-corner patterns; corner bit k set means +1 along axis k.
inline const std::vector<std::array<int, 3>>& triangle_pattern() {
  static const std::vector<std::array<int, 3>> p{{0b00, 0b01, 0b11}, {0b00, 0b11, 0b10}};
  return p;
}

inline const std::vector<std::array<int, 4>>& kuhn_pattern() {
  // One tetrahedron per axis permutation, all sharing the main diagonal 000-111.
  static const std::vector<std::array<int, 4>> p = [] {
    std::vector<std::array<int, 4>> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
      const int a = 1 << perm[0];
      const int b = a | (1 << perm[1]);
      out.push_back({0, a, b, 0b111});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return p;
}

}  // namespace detail

template <int Dim>
Mesh<Dim> Mesh<Dim>::build_cartesian(const Box<Dim>& box, int M) {
  if (M < 1) throw InvalidArgument("mesh subdivisions must be >= 1, got " + std::to_string(M));
  if (box.degenerate()) throw InvalidArgument("degenerate mesh box");

  Mesh mesh;
  mesh.box_ = box;
  mesh.M_ = M;
  const Index n1 = M + 1;
  const Point<Dim> step = (box.upper - box.lower) / double(M);

  auto node_id = [&](const std::array<Index, Dim>& ijk) {
    Index id = 0;
    for (int k = Dim - 1; k >= 0; --k) id = id * n1 + ijk[k];
    return id;
  };

  Index total_nodes = 1;
  for (int k = 0; k < Dim; ++k) total_nodes *= n1;
  mesh.nodes_.resize(total_nodes);
  mesh.boundary_node_.assign(total_nodes, false);
  for (Index id = 0; id < total_nodes; ++id) {
    Index rest = id;
    bool boundary = false;
    Point<Dim> x;
    for (int k = 0; k < Dim; ++k) {
      const Index i = rest % n1;
      rest /= n1;
      // endpoints taken from the box exactly
      x[k] = (i == M) ? box.upper[k] : box.lower[k] + double(i) * step[k];
      boundary = boundary || i == 0 || i == M;
    }
    mesh.nodes_[id] = x;
    mesh.boundary_node_[id] = boundary;
  }

  Index cells = 1;
  for (int k = 0; k < Dim; ++k) cells *= M;
  for (Index c = 0; c < cells; ++c) {
    std::array<Index, Dim> base;
    Index rest = c;
    for (int k = 0; k < Dim; ++k) {
      base[k] = rest % M;
      rest /= M;
    }
    auto corner = [&](int bits) {
      std::array<Index, Dim> ijk = base;
      for (int k = 0; k < Dim; ++k) ijk[k] += (bits >> k) & 1;
      return node_id(ijk);
    };
    auto add = [&](const auto& pattern) {
      for (const auto& local : pattern) {
        Element el;
        for (int i = 0; i <= Dim; ++i) el[i] = corner(local[i]);
        SimplexVertices<Dim, Dim> v;
        for (int i = 0; i <= Dim; ++i) v[i] = mesh.nodes_[el[i]];
        if (signed_volume<Dim>(v) < 0.0) std::swap(el[Dim - 1], el[Dim]);
        mesh.elements_.push_back(el);
      }
    };
    if constexpr (Dim == 2) {
      add(detail::triangle_pattern());
    } else {
      add(detail::kuhn_pattern());
    }
  }

  std::map<Face, Index> lookup;
  mesh.element_faces_.resize(mesh.elements_.size());
  for (Index e = 0; e < Index(mesh.elements_.size()); ++e) {
    const auto& el = mesh.elements_[e];
    for (int skip = 0; skip <= Dim; ++skip) {
      Face key;
      int k = 0;
      for (int i = 0; i <= Dim; ++i)
        if (i != skip) key[k++] = el[i];
      std::sort(key.begin(), key.end());
      auto [it, inserted] = lookup.try_emplace(key, Index(mesh.faces_.size()));
      if (inserted) {
        mesh.faces_.push_back(key);
        mesh.face_elements_.push_back({e, kNoElement});
      } else {
        mesh.face_elements_[it->second][1] = e;
      }
      mesh.element_faces_[e][skip] = it->second;
    }
  }

  for (Index e = 0; e < mesh.num_elements(); ++e) mesh.h_ = std::max(mesh.h_, mesh.diameter(e));
  return mesh;
}

template <int Dim>
FaceFrame<Dim> Mesh<Dim>::face_frame(Index f) const {
  if (f < 0 || f >= num_faces())
    throw InvalidArgument("face id " + std::to_string(f) + " out of range");
  const auto v = face_vertices(f);
  Point<Dim> n;
  if constexpr (Dim == 2) {
    const Point<Dim> t = v[1] - v[0];
    n = Point<Dim>(t[1], -t[0]);
  } else {
    n = (v[1] - v[0]).cross(v[2] - v[0]);
  }
  n.normalize();

  // orient away from the vertex of the first element not on the face
  const Index first = face_elements_[f][0];
  Point<Dim> opposite = Point<Dim>::Zero();
  for (Index node : elements_[first]) {
    if (std::find(faces_[f].begin(), faces_[f].end(), node) == faces_[f].end())
      opposite = nodes_[node];
  }
  if (n.dot(v[0] - opposite) < 0.0) n = -n;
  return {n, simplex_diameter<Dim, Dim - 1>(v)};
}

}  // namespace mife
