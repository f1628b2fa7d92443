#pragma once

// Shape-function evaluation of the element space: the (N+1)^2 pairs plus N bubbles.

#include "mife/ife_basis.hpp"

namespace mife {

template <int Dim>
struct ShapeValues {
  static constexpr int kPairs = LocalIFEBasis<Dim>::kPairs;
  static constexpr int kLocal = kPairs + Dim;

  std::array<Point<Dim>, kLocal> u;
  std::array<Tensor<Dim>, kLocal> grad;
  std::array<double, kLocal> p;
};

template <int Dim>
class LocalSpace {
 public:
  static constexpr int kPairs = LocalIFEBasis<Dim>::kPairs;
  static constexpr int kLocal = kPairs + Dim;

  LocalSpace() = default;
  explicit LocalSpace(LocalIFEBasis<Dim> basis) : basis_(std::move(basis)) {
    bubble_.lambda = basis_.lambda;
  }

  static constexpr int bubble_dof(int component) { return kPairs + component; }

  const LocalIFEBasis<Dim>& basis() const { return basis_; }
  const Bubble<Dim>& bubble() const { return bubble_; }

  /// Values of all local shape functions at x, using the pieces of side s.
  void evaluate(const Point<Dim>& x, Side s, ShapeValues<Dim>& out) const {
    for (int k = 0; k < kPairs; ++k) {
      const auto& v = basis_.pairs[k].velocity(s);
      out.u[k] = v(x);
      out.grad[k] = v.gradient;
      out.p[k] = basis_.pairs[k].pressure(s)(x);
    }
    const double b = bubble_.value(x);
    const Point<Dim> gb = bubble_.gradient(x);
    for (int i = 0; i < Dim; ++i) {
      const int k = bubble_dof(i);
      out.u[k] = b * Point<Dim>::Unit(i);
      out.grad[k].setZero();
      out.grad[k].row(i) = gb.transpose();
      out.p[k] = 0.0;
    }
  }

 private:
  LocalIFEBasis<Dim> basis_;
  Bubble<Dim> bubble_;
};

}  // namespace mife
