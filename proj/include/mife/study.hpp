#pragma once

// Single-level solves and convergence studies.

#include "mife/errors.hpp"
#include "mife/linsolve.hpp"

#include <chrono>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>

namespace mife {

struct LevelResult {
  int M = 0;
  double h = 0.0;
  ErrorNorms errors;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  Index n_dofs = 0;
  Index n_cut = 0;
  double residual = 0.0;
  double pressure_mean = 0.0;  // after the final shift
  double seconds = 0.0;
};

/// Everything produced on one level; the discretization is heap-allocated because the field
/// keeps a pointer to it.
template <int Dim>
struct LevelSolution {
  std::unique_ptr<Discretization<Dim>> D;
  SparseSystem system;
  LinearSolution linear;
  std::optional<DiscreteField<Dim>> field;
  LevelResult result;
};

struct LevelOptions {
  bool kappa = false;
};

template <int Dim>
LevelSolution<Dim> solve_level(const Problem<Dim>& problem, int M, const Parameters& params,
                               const LevelOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  LevelSolution<Dim> out;
  out.D = std::make_unique<Discretization<Dim>>(discretize(problem, M, params));
  const Discretization<Dim>& D = *out.D;
  out.system = assemble(D);
  out.linear = solve(out.system);
  if (!(out.linear.residual <= 1e-9))
    throw SingularSystem(out.linear.pivot_ratio,
                         "relative residual " + std::to_string(out.linear.residual) +
                             " exceeds 1e-9");
  out.field.emplace(D, out.linear.x.head(out.system.n_dofs), true, D.c_J);
  const double volume = problem.box.volume();
  out.field->shift_pressure(out.field->pressure_integral() / volume);

  LevelResult& r = out.result;
  r.M = M;
  r.h = D.mesh.h();
  r.errors = compute_errors(*out.field);
  r.n_dofs = out.system.n_dofs;
  r.n_cut = Index(D.cuts.size());
  r.residual = out.linear.residual;
  r.pressure_mean = out.field->pressure_integral() / volume;
  if (options.kappa) r.kappa = system_condition_number(out.system).kappa;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct StudyReport {
  std::string example;
  Parameters params;
  std::vector<LevelResult> levels;

  /// Pairwise rates for level i (NaN for the first level): {e0_u, e1_u, e0_p}.
  std::array<double, 3> rates(std::size_t i) const {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (i == 0) return {nan, nan, nan};
    const auto& c = levels[i - 1];
    const auto& f = levels[i];
    return {rate(c.errors.e0_u, f.errors.e0_u, c.h, f.h),
            rate(c.errors.e1_u, f.errors.e1_u, c.h, f.h),
            rate(c.errors.e0_p, f.errors.e0_p, c.h, f.h)};
  }

  /// Regression slopes of log(error) against log(h): {e0_u, e1_u, e0_p}.
  std::array<double, 3> slopes() const {
    std::vector<double> h, a, b, c;
    for (const auto& l : levels) {
      h.push_back(l.h);
      a.push_back(l.errors.e0_u);
      b.push_back(l.errors.e1_u);
      c.push_back(l.errors.e0_p);
    }
    return {regression_slope(h, a), regression_slope(h, b), regression_slope(h, c)};
  }
};

namespace detail {

inline std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

inline std::string csv_rate(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace detail

/// One row per level: example,M,h,e0_u,rate0_u,e1_u,rate1_u,e0_p,rate0_p,kappa. Rates of the
/// first level and kappa when not computed are empty fields.
inline void write_csv(std::ostream& os, const StudyReport& report) {
  using detail::csv_number;
  using detail::csv_rate;
  os << "example,M,h,e0_u,rate0_u,e1_u,rate1_u,e0_p,rate0_p,kappa\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    const auto r = report.rates(i);
    os << report.example << ',' << l.M << ',' << csv_number(l.h) << ',' << csv_number(l.errors.e0_u)
       << ',' << csv_rate(r[0]) << ',' << csv_number(l.errors.e1_u) << ',' << csv_rate(r[1]) << ','
       << csv_number(l.errors.e0_p) << ',' << csv_rate(r[2]) << ',' << csv_number(l.kappa) << '\n';
  }
}

template <int Dim>
StudyReport convergence_study(const Problem<Dim>& problem, const std::vector<int>& Ms,
                              const Parameters& params, const LevelOptions& options = {}) {
  if (Ms.size() < 2) throw InvalidArgument("a convergence study needs at least two levels");
  StudyReport report;
  report.example = problem.name;
  report.params = params;
  for (int M : Ms) {
    try {
      report.levels.push_back(solve_level(problem, M, params, options).result);
    } catch (const Error& e) {
      throw Error(e.kind(), "level M=" + std::to_string(M) + ": " + e.what());
    }
  }
  return report;
}

/// Parameters matching a problem's viscosities with the default gamma = -1, eta = 0.
template <int Dim>
Parameters default_parameters(const Problem<Dim>& problem, Method method = Method::ife) {
  Parameters p;
  p.mu_plus = problem.mu_plus;
  p.mu_minus = problem.mu_minus;
  p.method = method;
  return p;
}

}  // namespace mife
