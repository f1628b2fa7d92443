#pragma once

// Simplex quadrature: Stroud conical products of Gauss-Jacobi rules.

#include "mife/simplex.hpp"

#include <Eigen/Eigenvalues>

#include <mutex>
#include <vector>

namespace mife {

/// Rule on the reference K-simplex; points in barycentric coordinates.
template <int K>
struct QuadRule {
  std::vector<std::array<double, K + 1>> points;
  std::vector<double> weights;  // sum to 1/K!
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

struct GaussRule1D {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for the weight (1-x)^alpha on [-1, 1] (Golub-Welsch).
inline GaussRule1D gauss_jacobi(int n, double alpha) {
  const double beta = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    J(k, k) = (k == 0) ? (beta - alpha) / (alpha + beta + 2.0)
                       : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + alpha + beta;
      const double b = std::sqrt(4.0 * m * (m + alpha) * (m + beta) * (m + alpha + beta) /
                                 (t * t * (t + 1.0) * (t - 1.0)));
      J(k, k + 1) = J(k + 1, k) = b;
    }
  }
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  GaussRule1D r;
  for (int k = 0; k < n; ++k) {
    r.nodes.push_back(eig.eigenvalues()[k]);
    const double v0 = eig.eigenvectors()(0, k);
    r.weights.push_back(mu0 * v0 * v0);
  }
  return r;
}

namespace detail {

template <int K>
QuadRule<K> build_conical_rule(int degree) {
  QuadRule<K> rule;
  rule.exact_degree = degree;
  const int n = std::max(1, (degree + 2) / 2);
  if constexpr (K == 0) {
    rule.points.push_back({1.0});
    rule.weights.push_back(1.0);
    return rule;
  } else {
    // collapsed coordinate i carries the Jacobian factor (1 - s_i)^(K - 1 - i)
    std::array<GaussRule1D, K> lines;
    for (int i = 0; i < K; ++i) lines[i] = gauss_jacobi(n, double(K - 1 - i));
    std::array<int, K> idx{};
    while (true) {
      std::array<double, K> y{};
      double remaining = 1.0;
      double w = 1.0;
      for (int i = 0; i < K; ++i) {
        const double s = 0.5 * (1.0 + lines[i].nodes[idx[i]]);
        // map (1-x)^a dx on [-1,1] to (1-s)^a ds on [0,1]
        w *= lines[i].weights[idx[i]] / std::pow(2.0, K - i);
        y[i] = remaining * s;
        remaining *= (1.0 - s);
      }
      std::array<double, K + 1> bary{};
      double sum = 0.0;
      for (int i = 0; i < K; ++i) {
        bary[i + 1] = y[i];
        sum += y[i];
      }
      bary[0] = 1.0 - sum;
      rule.points.push_back(bary);
      rule.weights.push_back(w);

      int d = 0;
      while (d < K && ++idx[d] == n) idx[d++] = 0;
      if (d == K) break;
    }
    return rule;
  }
}

}  // namespace detail

inline constexpr int kMaxQuadratureDegree = 20;

/// Cached rule on the reference K-simplex exact for total degree <= degree.
template <int K>
const QuadRule<K>& simplex_rule(int degree) {
  static_assert(K >= 0 && K <= 3);
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw InvalidArgument("unsupported quadrature degree " + std::to_string(degree));
  static std::array<QuadRule<K>, kMaxQuadratureDegree + 1> cache;
  static std::array<std::once_flag, kMaxQuadratureDegree + 1> flags;
  std::call_once(flags[degree], [&] { cache[degree] = detail::build_conical_rule<K>(degree); });
  return cache[degree];
}

/// Calls fn(x, w) for every quadrature point of a rule mapped onto a k-simplex in R^Dim.
template <int Dim, int K, class Fn>
void for_each_point(const SimplexVertices<Dim, K>& v, const QuadRule<K>& rule, Fn&& fn) {
  const double scale = simplex_measure<Dim, K>(v) * factorial(K);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Point<Dim> x = Point<Dim>::Zero();
    for (int i = 0; i <= K; ++i) x += rule.points[q][i] * v[i];
    fn(x, rule.weights[q] * scale);
  }
}

template <int Dim, int K, class F>
double integrate_simplex(const SimplexVertices<Dim, K>& v, int degree, F&& f) {
  double sum = 0.0;
  for_each_point<Dim, K>(v, simplex_rule<K>(degree),
                         [&](const Point<Dim>& x, double w) { sum += w * f(x); });
  return sum;
}

/// Default degrees: volume 2(dim+1), faces dim+2, interface polygons 4.
template <int Dim>
struct DefaultDegrees {
  static constexpr int volume = 2 * (Dim + 1);
  static constexpr int face = Dim + 2;
  static constexpr int interface = 4;
};

}  // namespace mife
