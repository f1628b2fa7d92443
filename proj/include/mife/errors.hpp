#pragma once

#include "mife/interpolation.hpp"

namespace mife {

struct ErrorNorms {
  double e0_u = 0.0;  // L2 velocity
  double e1_u = 0.0;  // broken H1 seminorm of the velocity
  double e0_p = 0.0;  // L2 pressure
};

/// Errors against the exact piece of the side of each integration piece.
template <int Dim>
ErrorNorms compute_errors(const DiscreteField<Dim>& field, int degree = DefaultDegrees<Dim>::volume) {
  const Discretization<Dim>& D = field.discretization();
  const auto& exact = D.problem->exact;
  const auto& rule = simplex_rule<Dim>(degree);
  const Index n_el = D.mesh.num_elements();
  constexpr int chunks = 64;
  std::array<std::array<double, 3>, chunks> partial{};
  parallel_for(chunks, [&](Index c) {
    auto& acc = partial[c];
    for (Index e = c * n_el / chunks; e < (c + 1) * n_el / chunks; ++e) {
      const auto ev = field.on(e);
      for (const auto& piece : D.pieces(e)) {
        const Side s = piece.side;
        for_each_point<Dim, Dim>(piece.vertices, rule, [&](const Point<Dim>& x, double w) {
          const FieldValue<Dim> v = ev(x, s);
          acc[0] += w * (exact.u(x, s) - v.u).squaredNorm();
          acc[1] += w * (exact.grad_u(x, s) - v.grad).squaredNorm();
          const double dp = exact.p(x, s) - v.p;
          acc[2] += w * dp * dp;
        });
      }
    }
  });
  std::array<double, 3> sum{};
  for (const auto& acc : partial)
    for (int i = 0; i < 3; ++i) sum[i] += acc[i];
  return {std::sqrt(sum[0]), std::sqrt(sum[1]), std::sqrt(sum[2])};
}

/// log(e_coarse / e_fine) / log(h_coarse / h_fine).
inline double rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

/// Least-squares slope of log(e) against log(h).
inline double regression_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2)
    throw InvalidArgument("regression needs at least two matching points");
  const double n = double(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace mife
