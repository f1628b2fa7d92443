#pragma once

// Surface patches of the exact interface inside the fictitious box R_T, patch averages and
// the closest-point map p_h from the discrete to the exact interface.

#include "mife/cut.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <optional>

namespace mife {

namespace detail {

/// Root of f on [-reach, reach] closest to 0, found by a geometric bracket expansion on both
/// sides followed by TOMS 748. Returns nothing if no sign change is seen.
template <class F>
std::optional<double> nearest_root(F&& f, double reach, double tol) {
  const double f0 = f(0.0);
  if (f0 == 0.0) return 0.0;
  constexpr int kLevels = 40;
  double prev = 0.0;
  double f_prev_pos = f0, f_prev_neg = f0;
  auto refine = [&](double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (a > b) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
    boost::uintmax_t iters = 200;
    auto stop = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
    return 0.5 * (r.first + r.second);
  };
  for (int k = kLevels; k >= 0; --k) {
    const double s = reach * std::ldexp(1.0, -k);
    const double fp = f(s), fn = f(-s);
    const bool pos = (fp > 0.0) != (f_prev_pos > 0.0) || fp == 0.0;
    const bool neg = (fn > 0.0) != (f_prev_neg > 0.0) || fn == 0.0;
    if (pos || neg) {
      std::optional<double> rp, rn;
      if (pos) rp = refine(prev, s, f_prev_pos, fp);
      if (neg) rn = refine(-s, -prev, fn, f_prev_neg);
      if (rp && rn) return std::abs(*rp) <= std::abs(*rn) ? *rp : *rn;
      return rp ? rp : rn;
    }
    prev = s;
    f_prev_pos = fp;
    f_prev_neg = fn;
  }
  return std::nullopt;
}

}  // namespace detail

/// Quadrature on the graph part of Gamma inside R_T.
template <int Dim>
struct SurfacePatch {
  Index element = -1;
  int grid_n = 0;
  std::vector<Point<Dim>> nodes;
  std::vector<double> heights;  // xi_N of each node
  std::vector<double> weights;  // include the area element
  double area = 0.0;
  Index dropped = 0;  // parameter points whose height leaves R_T
};

/// Builds the patch from a tensor grid over [-h_T, h_T]^{N-1} in the tangent frame, two Gauss
/// points per cell and axis. Heights solve d(x* + sum xi_i t_i + xi_N n_h) = 0 with
/// |xi_N| <= h_T; points without such a root lie outside R_T and are skipped.
template <int Dim>
SurfacePatch<Dim> build_patch(const LevelSet<Dim>& ls, const CutElement<Dim>& cut,
                              int grid_n = 16) {
  if (grid_n < 1) throw InvalidArgument("surface patch grid size must be >= 1");
  SurfacePatch<Dim> patch;
  patch.element = cut.element;
  patch.grid_n = grid_n;
  const double H = cut.box_half_width();
  const double cell = 2.0 * H / grid_n;
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> offsets{0.5 - g, 0.5 + g};
  const double tol = 1e-13 * H;

  constexpr int P = Dim - 1;
  std::array<int, P> idx{};
  const int per_axis = 2 * grid_n;
  while (true) {
    Point<Dim> base = cut.reference_point;
    for (int i = 0; i < P; ++i) {
      const double xi = -H + cell * (idx[i] / 2 + offsets[idx[i] % 2]);
      base += xi * cut.tangents[i];
    }
    auto f = [&](double s) { return ls.value(base + s * cut.normal); };
    if (const auto s = detail::nearest_root(f, H, tol)) {
      const Point<Dim> x = base + *s * cut.normal;
      const Point<Dim> grad = ls.gradient(x);
      const double gn = std::abs(grad.dot(cut.normal));
      if (gn > 1e-8 * grad.norm()) {
        const double w = std::pow(0.5 * cell, P) * grad.norm() / gn;
        patch.nodes.push_back(x);
        patch.heights.push_back(*s);
        patch.weights.push_back(w);
        patch.area += w;
      } else {
        ++patch.dropped;
      }
    } else {
      ++patch.dropped;
    }
    int d = 0;
    while (d < P && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == P) break;
  }
  if (patch.nodes.empty())
    throw InterfaceNotResolved(cut.element, "no point of the interface inside the fictitious box");
  return patch;
}

/// |Gamma_RT|^{-1} times the integral of g over the patch.
template <int Dim, class G>
Point<Dim> avg_over_patch(const SurfacePatch<Dim>& patch, G&& g) {
  Point<Dim> sum = Point<Dim>::Zero();
  for (std::size_t q = 0; q < patch.nodes.size(); ++q) sum += patch.weights[q] * g(patch.nodes[q]);
  return sum / patch.area;
}

/// x + rho n_h on Gamma with the smallest |rho| <= h_T.
template <int Dim>
Point<Dim> closest_point_ph(const LevelSet<Dim>& ls, const CutElement<Dim>& cut,
                            const Point<Dim>& x) {
  const double H = cut.diameter;
  auto f = [&](double s) { return ls.value(x + s * cut.normal); };
  const auto s = detail::nearest_root(f, H, 1e-13 * H);
  if (!s) throw InterfaceNotResolved(cut.element, "no interface point along n_h within h_T");
  return x + *s * cut.normal;
}

}  // namespace mife
