#pragma once

// Geometry of k-simplices embedded in R^Dim.

#include "mife/core.hpp"

#include <algorithm>
#include <vector>

namespace mife {

template <int Dim, int K>
using SimplexVertices = std::array<Point<Dim>, K + 1>;

/// k-dimensional measure of a k-simplex embedded in R^Dim.
template <int Dim, int K>
double simplex_measure(const SimplexVertices<Dim, K>& v) {
  if constexpr (K == 0) {
    return 1.0;
  } else {
    Eigen::Matrix<double, Dim, K> e;
    for (int i = 0; i < K; ++i) e.col(i) = v[i + 1] - v[0];
    if constexpr (K == Dim) {
      return std::abs(e.determinant()) / factorial(K);
    } else {
      const Eigen::Matrix<double, K, K> gram = e.transpose() * e;
      return std::sqrt(std::max(gram.determinant(), 0.0)) / factorial(K);
    }
  }
}

/// Signed volume of a full-dimensional simplex.
template <int Dim>
double signed_volume(const SimplexVertices<Dim, Dim>& v) {
  Tensor<Dim> e;
  for (int i = 0; i < Dim; ++i) e.col(i) = v[i + 1] - v[0];
  return e.determinant() / factorial(Dim);
}

template <int Dim, int K>
Point<Dim> centroid(const SimplexVertices<Dim, K>& v) {
  Point<Dim> c = Point<Dim>::Zero();
  for (const auto& p : v) c += p;
  return c / double(K + 1);
}

template <int Dim, int K>
double simplex_diameter(const SimplexVertices<Dim, K>& v) {
  double d = 0.0;
  for (int i = 0; i <= K; ++i)
    for (int j = i + 1; j <= K; ++j) d = std::max(d, (v[i] - v[j]).norm());
  return d;
}

/// Gradients of the barycentric coordinates of a full-dimensional simplex.
template <int Dim>
std::array<Point<Dim>, Dim + 1> barycentric_gradients(const SimplexVertices<Dim, Dim>& v) {
  Tensor<Dim> e;
  for (int i = 0; i < Dim; ++i) e.col(i) = v[i + 1] - v[0];
  const Tensor<Dim> inv = e.inverse();
  std::array<Point<Dim>, Dim + 1> g;
  g[0] = Point<Dim>::Zero();
  for (int i = 0; i < Dim; ++i) {
    g[i + 1] = inv.row(i).transpose();
    g[0] -= g[i + 1];
  }
  return g;
}

/// Barycentric coordinates of x; the linear functions lambda_i as affine fields.
template <int Dim>
std::array<AffineScalar<Dim>, Dim + 1> barycentric_functions(const SimplexVertices<Dim, Dim>& v) {
  const auto g = barycentric_gradients<Dim>(v);
  std::array<AffineScalar<Dim>, Dim + 1> lam;
  for (int i = 0; i <= Dim; ++i) {
    // lambda_i(v_i) = 1
    lam[i].gradient = g[i];
    lam[i].constant = 1.0 - g[i].dot(v[i]);
  }
  return lam;
}

/// Unique affine function taking the given values at the simplex vertices.
template <int Dim>
AffineScalar<Dim> affine_interpolant(const SimplexVertices<Dim, Dim>& v,
                                     const std::array<double, Dim + 1>& values) {
  const auto lam = barycentric_functions<Dim>(v);
  AffineScalar<Dim> f;
  for (int i = 0; i <= Dim; ++i) f += values[i] * lam[i];
  return f;
}

/// Inscribed-ball diameter of a full-dimensional simplex.
template <int Dim>
double inscribed_diameter(const SimplexVertices<Dim, Dim>& v) {
  double surface = 0.0;
  for (int skip = 0; skip <= Dim; ++skip) {
    SimplexVertices<Dim, Dim - 1> f;
    int k = 0;
    for (int i = 0; i <= Dim; ++i)
      if (i != skip) f[k++] = v[i];
    surface += simplex_measure<Dim, Dim - 1>(f);
  }
  return 2.0 * Dim * simplex_measure<Dim, Dim>(v) / surface;
}

}  // namespace mife
