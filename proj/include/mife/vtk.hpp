#pragma once

// Legacy ASCII VTK unstructured-grid output for meshes, cut geometry and discrete solutions.

#include "mife/interpolation.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace mife {

namespace vtk {

inline constexpr int kLine = 3;
inline constexpr int kTriangle = 5;
inline constexpr int kTetra = 10;

template <int Dim>
constexpr int simplex_cell_type(int k) {
  return k == 1 ? kLine : (k == 2 ? kTriangle : kTetra);
}

/// Points and simplicial cells collected before writing.
template <int Dim>
struct Grid {
  std::vector<Point<Dim>> points;
  std::vector<std::vector<Index>> cells;
  std::vector<int> types;

  template <int K>
  void add_simplex(const SimplexVertices<Dim, K>& v) {
    std::vector<Index> ids;
    for (const auto& x : v) {
      ids.push_back(Index(points.size()));
      points.push_back(x);
    }
    cells.push_back(std::move(ids));
    types.push_back(simplex_cell_type<Dim>(K));
  }
};

template <int Dim>
void write_header(std::ostream& os, const std::string& title, const Grid<Dim>& g) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(12);
  os << "POINTS " << g.points.size() << " double\n";
  for (const auto& p : g.points) {
    for (int i = 0; i < 3; ++i) os << (i ? " " : "") << (i < Dim ? p[i] : 0.0);
    os << '\n';
  }
  std::size_t size = 0;
  for (const auto& c : g.cells) size += c.size() + 1;
  os << "CELLS " << g.cells.size() << ' ' << size << '\n';
  for (const auto& c : g.cells) {
    os << c.size();
    for (Index i : c) os << ' ' << i;
    os << '\n';
  }
  os << "CELL_TYPES " << g.types.size() << '\n';
  for (int t : g.types) os << t << '\n';
}

template <class T>
void write_scalars(std::ostream& os, const std::string& name, const char* type,
                   const std::vector<T>& values) {
  os << "SCALARS " << name << ' ' << type << " 1\nLOOKUP_TABLE default\n";
  for (const auto& v : values) os << v << '\n';
}

inline std::ofstream open(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("io", "cannot open '" + path + "' for writing");
  return os;
}

}  // namespace vtk

/// Mesh elements with their classification (0 minus, 1 plus, 2 cut).
template <int Dim>
void write_mesh_vtk(std::ostream& os, const Mesh<Dim>& mesh, const Classification* labels = nullptr) {
  os << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(12);
  os << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes()) {
    for (int i = 0; i < 3; ++i) os << (i ? " " : "") << (i < Dim ? p[i] : 0.0);
    os << '\n';
  }
  os << "CELLS " << mesh.num_elements() << ' ' << mesh.num_elements() * (Dim + 2) << '\n';
  for (const auto& el : mesh.elements()) {
    os << Dim + 1;
    for (Index v : el) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (Index e = 0; e < mesh.num_elements(); ++e) os << vtk::simplex_cell_type<Dim>(Dim) << '\n';
  if (labels) {
    os << "CELL_DATA " << mesh.num_elements() << '\n';
    std::vector<int> l;
    for (auto x : labels->elements) l.push_back(int(x));
    vtk::write_scalars(os, "label", "int", l);
  }
}

/// Sub-simplices of all cut elements plus the discrete interface, with cell data
/// "kind" (0 piece, 1 interface), "side" (0 minus, 1 plus, -1 interface) and "element".
template <int Dim>
void write_cut_vtk(std::ostream& os, const Discretization<Dim>& D) {
  vtk::Grid<Dim> g;
  std::vector<int> kind, side;
  std::vector<Index> element;
  for (const auto& cut : D.cuts) {
    for (const auto& p : cut.pieces) {
      g.template add_simplex<Dim>(p.vertices);
      kind.push_back(0);
      side.push_back(side_index(p.side));
      element.push_back(cut.element);
    }
    for (const auto& s : triangulate_polygon<Dim>(cut.polygon)) {
      g.template add_simplex<Dim - 1>(s);
      kind.push_back(1);
      side.push_back(-1);
      element.push_back(cut.element);
    }
  }
  vtk::write_header(os, "cut geometry", g);
  os << "CELL_DATA " << g.cells.size() << '\n';
  vtk::write_scalars(os, "kind", "int", kind);
  vtk::write_scalars(os, "side", "int", side);
  vtk::write_scalars(os, "element", "int", element);
}

/// One cell per element piece with its own copies of the vertices, so that the velocity (point
/// data) and the pressure (cell data at the piece centroid) show the jumps across the interface.
template <int Dim>
void write_solution_vtk(std::ostream& os, const DiscreteField<Dim>& field) {
  const Discretization<Dim>& D = field.discretization();
  vtk::Grid<Dim> g;
  std::vector<Point<Dim>> velocity;
  std::vector<double> pressure;
  std::vector<int> side;
  std::vector<Index> element;
  for (Index e = 0; e < D.mesh.num_elements(); ++e) {
    const auto eval = field.on(e);
    for (const auto& p : D.pieces(e)) {
      g.template add_simplex<Dim>(p.vertices);
      for (const auto& x : p.vertices) velocity.push_back(eval(x, p.side).u);
      pressure.push_back(eval(centroid<Dim, Dim>(p.vertices), p.side).p);
      side.push_back(side_index(p.side));
      element.push_back(e);
    }
  }
  vtk::write_header(os, "solution", g);
  os << "POINT_DATA " << g.points.size() << "\nVECTORS velocity double\n";
  for (const auto& u : velocity) {
    for (int i = 0; i < 3; ++i) os << (i ? " " : "") << (i < Dim ? u[i] : 0.0);
    os << '\n';
  }
  os << "CELL_DATA " << g.cells.size() << '\n';
  vtk::write_scalars(os, "pressure", "double", pressure);
  vtk::write_scalars(os, "side", "int", side);
  vtk::write_scalars(os, "element", "int", element);
}

template <int Dim>
void write_solution_vtk(const std::string& path, const DiscreteField<Dim>& field) {
  auto os = vtk::open(path);
  write_solution_vtk(os, field);
}

template <int Dim>
void write_cut_vtk(const std::string& path, const Discretization<Dim>& D) {
  auto os = vtk::open(path);
  write_cut_vtk(os, D);
}

}  // namespace mife
