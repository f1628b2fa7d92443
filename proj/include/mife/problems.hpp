#pragma once

// Built-in two-phase Stokes test problems with piecewise exact solutions.

#include "mife/levelset.hpp"

#include <numbers>

namespace mife {

template <int Dim>
struct ExactSolution {
  std::function<Point<Dim>(const Point<Dim>&, Side)> u;
  std::function<Tensor<Dim>(const Point<Dim>&, Side)> grad_u;
  std::function<double(const Point<Dim>&, Side)> p;
  std::function<Point<Dim>(const Point<Dim>&, Side)> f;  // -div(2 mu eps(u)) + grad p
};

template <int Dim>
struct Problem {
  std::string name;
  Box<Dim> box;
  LevelSet<Dim> levelset;
  double mu_plus = 1.0;
  double mu_minus = 1.0;
  ExactSolution<Dim> exact;
  bool surface_force = true;  // false when the stress jump vanishes identically

  double mu(Side s) const { return s == Side::plus ? mu_plus : mu_minus; }

  /// Stress jump (plus minus minus) along the unit normal of the level set at x.
  Point<Dim> g(const Point<Dim>& x) const {
    if (!surface_force) return Point<Dim>::Zero();
    const Point<Dim> n = levelset.gradient(x).normalized();
    const Tensor<Dim> sp = stress<Dim>(mu_plus, exact.grad_u(x, Side::plus), exact.p(x, Side::plus));
    const Tensor<Dim> sm =
        stress<Dim>(mu_minus, exact.grad_u(x, Side::minus), exact.p(x, Side::minus));
    return (sp - sm) * n;
  }
};

namespace problems {

/// Rotational flow (R^2 - |x-c|^2)/mu^pm (-(y-c_y), x-c_x) around a circle of radius R centered
/// at c, with p = y^2 - x^2. The normal stress is continuous.
inline Problem<2> rotating_circle(const std::string& name, double mu_plus, double mu_minus,
                                  const Point<2>& center, double radius) {
  Problem<2> P;
  P.name = name;
  P.box = Box<2>::symmetric(1.0);
  P.levelset = LevelSet<2>::sphere(center, radius);
  P.mu_plus = mu_plus;
  P.mu_minus = mu_minus;
  P.surface_force = false;
  const double R2 = radius * radius;
  auto mu = [=](Side s) { return s == Side::plus ? mu_plus : mu_minus; };
  P.exact.u = [=](const Point<2>& x, Side s) {
    const Point<2> r = x - center;
    return Point<2>((R2 - r.squaredNorm()) / mu(s) * Point<2>(-r[1], r[0]));
  };
  P.exact.grad_u = [=](const Point<2>& x, Side s) {
    const Point<2> r = x - center;
    const double a = R2 - r.squaredNorm();
    Tensor<2> G;
    G << 2.0 * r[0] * r[1], -a + 2.0 * r[1] * r[1], a - 2.0 * r[0] * r[0], -2.0 * r[0] * r[1];
    return Tensor<2>(G / mu(s));
  };
  P.exact.p = [](const Point<2>& x, Side) { return x[1] * x[1] - x[0] * x[0]; };
  P.exact.f = [=](const Point<2>& x, Side) {
    const Point<2> r = x - center;
    return Point<2>(-8.0 * r[1] - 2.0 * x[0], 8.0 * r[0] + 2.0 * x[1]);
  };
  return P;
}

inline double ex1_radius() { return 1.0 / std::sqrt(std::numbers::pi); }

inline Problem<2> ex1(const std::string& name, double mu_plus, double mu_minus) {
  return rotating_circle(name, mu_plus, mu_minus, Point<2>::Zero(), ex1_radius());
}
inline Problem<2> ex1_case_a() { return ex1("ex1_case_a", 5.0, 1.0); }
inline Problem<2> ex1_case_b() { return ex1("ex1_case_b", 1000.0, 1.0); }
inline Problem<2> ex1_case_c() { return ex1("ex1_case_c", 1.0, 1000.0); }

/// Divergence-free trigonometric velocity, p^+ = -1/(6 pi), p^- = |x|^2.
inline Problem<2> ex2(double mu_plus = 2.0, double mu_minus = 0.5) {
  using std::numbers::pi;
  Problem<2> P;
  P.name = "ex2";
  P.box = Box<2>::symmetric(1.0);
  P.levelset = LevelSet<2>::sphere(Point<2>::Zero(), ex1_radius());
  P.mu_plus = mu_plus;
  P.mu_minus = mu_minus;
  P.exact.u = [](const Point<2>& x, Side) {
    return Point<2>(std::sin(pi * x[0]) * std::sin(pi * x[1]) / pi,
                    std::cos(pi * x[0]) * std::cos(pi * x[1]) / pi);
  };
  P.exact.grad_u = [](const Point<2>& x, Side) {
    const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]);
    const double sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]);
    Tensor<2> G;
    G << cx * sy, sx * cy, -sx * cy, -cx * sy;
    return G;
  };
  P.exact.p = [](const Point<2>& x, Side s) {
    return s == Side::plus ? -1.0 / (6.0 * pi) : x.squaredNorm();
  };
  P.exact.f = [=](const Point<2>& x, Side s) {
    const double mu = s == Side::plus ? mu_plus : mu_minus;
    Point<2> f(std::sin(pi * x[0]) * std::sin(pi * x[1]), std::cos(pi * x[0]) * std::cos(pi * x[1]));
    f *= 2.0 * pi * mu;
    if (s == Side::minus) f += 2.0 * x;
    return f;
  };
  return P;
}

/// Swirl around the x3 axis inside (-1,1)^3 with a spherical interface of radius 2/3 and a
/// pressure jump of 10.
inline Problem<3> ex3(double mu_plus = 2.0, double mu_minus = 0.5) {
  using std::numbers::pi;
  const double R = 2.0 / 3.0;
  const double c = 5.0 * pi * R * R * R / 3.0;
  Problem<3> P;
  P.name = "ex3";
  P.box = Box<3>::symmetric(1.0);
  P.levelset = LevelSet<3>::sphere(Point<3>::Zero(), R);
  P.mu_plus = mu_plus;
  P.mu_minus = mu_minus;
  // alpha(r) e^{-r^2} = e^{-r^2}/mu^- inside and e^{-r^2}/mu^+ + (1/mu^- - 1/mu^+) e^{-R^2} outside
  const double outer_linear = (1.0 / mu_minus - 1.0 / mu_plus) * std::exp(-R * R);
  auto amplitude = [=](double r2, Side s) {
    return s == Side::plus ? std::exp(-r2) / mu_plus + outer_linear : std::exp(-r2) / mu_minus;
  };
  auto amplitude_gradient = [=](const Point<3>& x, Side s) {
    const double mu = s == Side::plus ? mu_plus : mu_minus;
    return Point<3>(-2.0 * std::exp(-x.squaredNorm()) / mu * x);
  };
  P.exact.u = [=](const Point<3>& x, Side s) {
    return Point<3>(amplitude(x.squaredNorm(), s) * Point<3>(-x[1], x[0], 0.0));
  };
  P.exact.grad_u = [=](const Point<3>& x, Side s) {
    const double a = amplitude(x.squaredNorm(), s);
    const Point<3> ga = amplitude_gradient(x, s);
    const Point<3> w(-x[1], x[0], 0.0);
    Tensor<3> G = w * ga.transpose();
    G(0, 1) -= a;
    G(1, 0) += a;
    return G;
  };
  P.exact.p = [=](const Point<3>& x, Side s) {
    return x[0] * x[0] * x[0] + (s == Side::minus ? 10.0 : 0.0) - c;
  };
  P.exact.f = [](const Point<3>& x, Side) {
    const double r2 = x.squaredNorm();
    const double a = (10.0 - 4.0 * r2) * std::exp(-r2);
    return Point<3>(-a * x[1] + 3.0 * x[0] * x[0], a * x[0], 0.0);
  };
  return P;
}

}  // namespace problems
}  // namespace mife
