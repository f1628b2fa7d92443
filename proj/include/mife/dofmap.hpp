#pragma once

#include "mife/discretization.hpp"

namespace mife {

/// Global numbering: velocity components node-major per component, then element bubbles,
/// then nodal pressures.
template <int Dim>
class DofMap {
 public:
  static constexpr int kLocal = LocalSpace<Dim>::kLocal;
  using LocalDofs = std::array<Index, kLocal>;

  DofMap() = default;
  explicit DofMap(const Mesh<Dim>& mesh)
      : nodes_(mesh.num_nodes()), elements_(mesh.num_elements()) {}

  Index velocity(int component, Index node) const { return component * nodes_ + node; }
  Index bubble(Index element, int component) const {
    return Dim * nodes_ + element * Dim + component;
  }
  Index pressure(Index node) const { return Dim * nodes_ + Dim * elements_ + node; }

  Index num_velocity() const { return Dim * (nodes_ + elements_); }
  Index num_pressure() const { return nodes_; }
  Index size() const { return num_velocity() + num_pressure(); }
  bool is_pressure(Index dof) const { return dof >= num_velocity(); }
  bool is_bubble(Index dof) const { return dof >= Dim * nodes_ && dof < num_velocity(); }

  LocalDofs local_to_global(const Mesh<Dim>& mesh, Index e) const {
    LocalDofs g;
    const auto& el = mesh.element(e);
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j <= Dim; ++j) g[LocalIFEBasis<Dim>::velocity_dof(i, j)] = velocity(i, el[j]);
    for (int j = 0; j <= Dim; ++j) g[LocalIFEBasis<Dim>::pressure_dof(j)] = pressure(el[j]);
    for (int i = 0; i < Dim; ++i) g[LocalSpace<Dim>::bubble_dof(i)] = bubble(e, i);
    return g;
  }

  /// Velocity DoFs of boundary nodes.
  std::vector<bool> dirichlet_mask(const Mesh<Dim>& mesh) const {
    std::vector<bool> mask(size(), false);
    for (Index n = 0; n < nodes_; ++n)
      if (mesh.is_boundary_node(n))
        for (int i = 0; i < Dim; ++i) mask[velocity(i, n)] = true;
    return mask;
  }

 private:
  Index nodes_ = 0;
  Index elements_ = 0;
};

}  // namespace mife
