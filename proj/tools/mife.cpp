#include "mife/mife.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json study_json(const mife::StudyReport& report, const mife::RunConfig& cfg) {
  json levels = json::array();
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& l = report.levels[i];
    const auto r = report.rates(i);
    levels.push_back({{"M", l.M},
                      {"h", l.h},
                      {"e0_u", l.errors.e0_u},
                      {"e1_u", l.errors.e1_u},
                      {"e0_p", l.errors.e0_p},
                      {"rate0_u", number(r[0])},
                      {"rate1_u", number(r[1])},
                      {"rate0_p", number(r[2])},
                      {"kappa", number(l.kappa)},
                      {"n_dofs", l.n_dofs},
                      {"n_cut", l.n_cut},
                      {"residual", l.residual},
                      {"pressure_mean", l.pressure_mean},
                      {"seconds", l.seconds}});
  }
  json out{{"example", report.example},
           {"method", mife::to_string(report.params.method)},
           {"mu_plus", report.params.mu_plus},
           {"mu_minus", report.params.mu_minus},
           {"gamma", report.params.gamma},
           {"eta", report.params.eta},
           {"levels", levels},
           {"config", cfg.serialize()}};
  if (report.levels.size() >= 2) {
    const auto s = report.slopes();
    out["slopes"] = {{"e0_u", s[0]}, {"e1_u", s[1]}, {"e0_p", s[2]}};
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw mife::Error("io", "cannot open '" + path + "' for writing");
  os << text;
}

template <int Dim>
int run_study(const mife::RunConfig& cfg, const std::string& matrix_path) {
  const mife::Problem<Dim> problem = mife::make_problem<Dim>(cfg);
  const mife::Parameters params = mife::make_parameters(cfg, problem);
  mife::StudyReport report;
  report.example = problem.name;
  report.params = params;
  mife::LevelOptions options;
  options.kappa = cfg.kappa;
  for (std::size_t i = 0; i < cfg.M.size(); ++i) {
    const int M = cfg.M[i];
    try {
      auto level = mife::solve_level(problem, M, params, options);
      report.levels.push_back(level.result);
      if (i + 1 == cfg.M.size()) {
        if (!cfg.vtk.empty()) mife::write_solution_vtk(cfg.vtk, *level.field);
        if (!matrix_path.empty()) mife::export_matrix(level.system.A, matrix_path);
      }
    } catch (const mife::Error& e) {
      throw mife::Error(e.kind(), "level M=" + std::to_string(M) + ": " + e.what());
    }
  }
  if (cfg.csv.empty()) {
    mife::write_csv(std::cout, report);
  } else {
    std::ofstream os(cfg.csv);
    if (!os) throw mife::Error("io", "cannot open '" + cfg.csv + "' for writing");
    mife::write_csv(os, report);
  }
  if (!cfg.report.empty()) write_text(cfg.report, study_json(report, cfg).dump(2) + "\n");
  return 0;
}

std::string format_check(const mife::Check& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "  %s  %s = %.6e  [%.6e, %.6e]", c.pass() ? "PASS" : "FAIL",
                c.name.c_str(), c.value, c.lower, c.upper);
  return buf;
}

int run_verify(const mife::RunConfig& cfg) {
  std::vector<std::string> suites;
  if (cfg.suite.empty())
    suites = mife::suite_names();
  else
    suites = {cfg.suite};
  mife::VerifyOptions options;
  options.random_cuts = cfg.random_cuts;
  json reports = json::array();
  bool ok = true;
  for (const auto& name : suites) {
    const auto rep = mife::verify_theory(name, cfg.seed, options);
    ok = ok && rep.passed();
    std::cout << "suite " << rep.suite << " seed " << rep.seed << ": "
              << (rep.passed() ? "PASS" : "FAIL") << '\n';
    json checks = json::array();
    for (const auto& c : rep.checks) {
      std::cout << format_check(c) << '\n';
      checks.push_back({{"name", c.name},
                        {"value", number(c.value)},
                        {"lower", number(c.lower)},
                        {"upper", number(c.upper)},
                        {"pass", c.pass()}});
    }
    for (const auto& n : rep.notes) std::cout << "  note: " << n << '\n';
    reports.push_back({{"suite", rep.suite},
                       {"seed", rep.seed},
                       {"passed", rep.passed()},
                       {"checks", checks},
                       {"notes", rep.notes}});
  }
  if (!cfg.report.empty()) write_text(cfg.report, reports.dump(2) + "\n");
  return ok ? 0 : 1;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << std::endl;
  return 2;
}

struct Override {
  CLI::Option* option;
  std::string key;
  std::string value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mini immersed finite element solver for two-phase Stokes interface problems"};
  app.require_subcommand(1);
  std::string config_path, matrix_path;
  bool kappa = false;

  auto* run = app.add_subcommand("run", "solve one or more mesh levels of an example");
  auto* verify = app.add_subcommand("verify", "run randomized and multi-level verification suites");

  std::vector<std::unique_ptr<Override>> overrides;
  auto add = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                 const std::string& help) {
    auto o = std::make_unique<Override>();
    o->key = key;
    o->option = cmd->add_option(flag, o->value, help);
    overrides.push_back(std::move(o));
  };
  for (auto* cmd : {run, verify}) {
    cmd->add_option("--config", config_path, "configuration file (key = value)");
    add(cmd, "--report", "report", "JSON report path");
  }
  add(run, "--example", "example", "ex1_case_a|ex1_case_b|ex1_case_c|ex2|ex3|custom");
  add(run, "--dim", "dim", "spatial dimension (checked against the example)");
  add(run, "--M", "M", "comma-separated subdivision counts, e.g. 16,32,64");
  add(run, "--mu-plus", "mu_plus", "viscosity outside the interface");
  add(run, "--mu-minus", "mu_minus", "viscosity inside the interface");
  add(run, "--gamma", "gamma", "symmetry parameter of the face terms (-1 or 1)");
  add(run, "--eta", "eta", "additional face penalty (>= 0)");
  add(run, "--method", "method", "ife|conventional_mini");
  add(run, "--center", "center", "custom example: circle center x,y");
  add(run, "--radius", "radius", "custom example: circle radius");
  add(run, "--csv", "csv", "CSV output path (default: stdout)");
  add(run, "--vtk", "vtk", "VTK solution output for the finest level");
  run->add_flag("--kappa", kappa, "compute the condition number on every level");
  run->add_option("--matrix", matrix_path, "write the system matrix of the finest level");
  add(verify, "--suite", "suite", "suite name (default: all suites)");
  add(verify, "--seed", "seed", "random seed");
  add(verify, "--random-cuts", "random_cuts", "random cuts per dimension for basis suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("invalid_argument", e.what());
  }

  try {
    mife::RunConfig cfg = config_path.empty() ? mife::RunConfig{} : mife::load_config(config_path);
    for (const auto& o : overrides)
      if (o->option->count() > 0) cfg.set(o->key, o->value);
    if (kappa) cfg.kappa = true;
    cfg.validate();
    if (*verify) return run_verify(cfg);
    return cfg.dimension() == 3 ? run_study<3>(cfg, matrix_path) : run_study<2>(cfg, matrix_path);
  } catch (const mife::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
