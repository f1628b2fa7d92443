#pragma once

// Run configuration: flat "key = value" text with optional [section] headers, validation, and
// the mapping from an example id to a problem and discretization parameters.

#include "mife/verify.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

namespace mife {

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"ex1_case_a", "ex1_case_b", "ex1_case_c",
                                              "ex2",        "ex3",        "custom"};
  return names;
}

inline int example_dimension(const std::string& example) { return example == "ex3" ? 3 : 2; }

struct RunConfig {
  std::string example = "ex2";
  int dim = 0;  // 0: implied by the example
  std::vector<double> box_lower, box_upper;
  std::vector<int> M{16};
  std::optional<double> mu_plus, mu_minus;
  int gamma = -1;
  double eta = 0.0;
  Method method = Method::ife;
  std::vector<double> center;  // custom example
  double radius = 0.5;         // custom example
  int patch_grid = 16;
  std::string csv, vtk, report;
  std::string suite;
  std::uint64_t seed = 0;
  int random_cuts = 1000;
  bool kappa = false;

  int dimension() const { return dim ? dim : example_dimension(example); }

  void validate() const;
  void set(const std::string& key, const std::string& value);
  std::string serialize() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline InvalidArgument config_error(const std::string& field, const std::string& what) {
  return InvalidArgument("config." + field + ": " + what);
}

inline double parse_double(const std::string& field, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw config_error(field, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw config_error(field, "expected a number, got '" + v + "'");
  return x;
}

inline long long parse_integer(const std::string& field, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw config_error(field, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw config_error(field, "expected an integer, got '" + v + "'");
  return x;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline bool parse_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error(field, "expected true or false, got '" + v + "'");
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

}  // namespace detail

inline Method parse_method(const std::string& s) {
  if (s == "ife") return Method::ife;
  if (s == "conventional_mini") return Method::conventional_mini;
  throw detail::config_error("method", "expected ife or conventional_mini, got '" + s + "'");
}

inline void RunConfig::set(const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string v = trim(raw);
  if (key == "example") {
    example = v;
  } else if (key == "dim") {
    dim = int(parse_integer(key, v));
  } else if (key == "box_lower" || key == "box_upper") {
    std::vector<double> b;
    for (const auto& s : split_list(v)) b.push_back(parse_double(key, s));
    (key == "box_lower" ? box_lower : box_upper) = b;
  } else if (key == "M") {
    M.clear();
    for (const auto& s : split_list(v)) M.push_back(int(parse_integer(key, s)));
  } else if (key == "mu_plus") {
    mu_plus = parse_double(key, v);
  } else if (key == "mu_minus") {
    mu_minus = parse_double(key, v);
  } else if (key == "gamma") {
    gamma = int(parse_integer(key, v));
  } else if (key == "eta") {
    eta = parse_double(key, v);
  } else if (key == "method") {
    method = parse_method(v);
  } else if (key == "center") {
    center.clear();
    for (const auto& s : split_list(v)) center.push_back(parse_double(key, s));
  } else if (key == "radius") {
    radius = parse_double(key, v);
  } else if (key == "patch_grid") {
    patch_grid = int(parse_integer(key, v));
  } else if (key == "csv") {
    csv = v;
  } else if (key == "vtk") {
    vtk = v;
  } else if (key == "report") {
    report = v;
  } else if (key == "suite") {
    suite = v;
  } else if (key == "seed") {
    const long long s = parse_integer(key, v);
    if (s < 0) throw config_error(key, "must be >= 0");
    seed = std::uint64_t(s);
  } else if (key == "random_cuts") {
    random_cuts = int(parse_integer(key, v));
  } else if (key == "kappa") {
    kappa = parse_bool(key, v);
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

inline void RunConfig::validate() const {
  using detail::config_error;
  const auto& names = example_names();
  if (std::find(names.begin(), names.end(), example) == names.end())
    throw config_error("example", "unknown example '" + example + "'");
  if (dim != 0 && dim != 2 && dim != 3) throw config_error("dim", "must be 2 or 3");
  if (dim != 0 && dim != example_dimension(example))
    throw config_error("dim", example + " requires dim " +
                                  std::to_string(example_dimension(example)));
  const std::size_t d = std::size_t(dimension());
  if (box_lower.size() != box_upper.size())
    throw config_error("box_lower", "box_lower and box_upper must be given together");
  if (!box_lower.empty()) {
    if (box_lower.size() != d) throw config_error("box_lower", "needs " + std::to_string(d) + " entries");
    for (std::size_t i = 0; i < d; ++i)
      if (!(box_upper[i] > box_lower[i])) throw config_error("box_upper", "must exceed box_lower");
  }
  if (M.empty()) throw config_error("M", "at least one level is required");
  for (int m : M)
    if (m < 1) throw config_error("M", "levels must be >= 1");
  for (std::size_t i = 1; i < M.size(); ++i)
    if (M[i] <= M[i - 1]) throw config_error("M", "levels must be increasing");
  if (mu_plus && !(*mu_plus > 0.0 && std::isfinite(*mu_plus)))
    throw config_error("mu_plus", "must be positive and finite");
  if (mu_minus && !(*mu_minus > 0.0 && std::isfinite(*mu_minus)))
    throw config_error("mu_minus", "must be positive and finite");
  if (gamma != 1 && gamma != -1) throw config_error("gamma", "must be +1 or -1");
  if (!(eta >= 0.0 && std::isfinite(eta))) throw config_error("eta", "must be >= 0");
  if (patch_grid < 1) throw config_error("patch_grid", "must be >= 1");
  if (random_cuts < 1) throw config_error("random_cuts", "must be >= 1");
  if (!center.empty() && center.size() != 2) throw config_error("center", "needs 2 entries");
  if (!(radius > 0.0 && std::isfinite(radius))) throw config_error("radius", "must be positive");
  if (!suite.empty()) {
    const auto& s = suite_names();
    if (std::find(s.begin(), s.end(), suite) == s.end())
      throw config_error("suite", "unknown suite '" + suite + "'");
  }
}

inline std::string RunConfig::serialize() const {
  using namespace detail;
  auto num = [](double x) { return format_double(x); };
  auto integer = [](int x) { return std::to_string(x); };
  std::ostringstream os;
  os << "[problem]\n";
  os << "example = " << example << '\n';
  if (dim) os << "dim = " << dim << '\n';
  if (!box_lower.empty()) {
    os << "box_lower = " << join(box_lower, num) << '\n';
    os << "box_upper = " << join(box_upper, num) << '\n';
  }
  if (mu_plus) os << "mu_plus = " << num(*mu_plus) << '\n';
  if (mu_minus) os << "mu_minus = " << num(*mu_minus) << '\n';
  if (!center.empty()) os << "center = " << join(center, num) << '\n';
  os << "radius = " << num(radius) << '\n';
  os << "\n[discretization]\n";
  os << "M = " << join(M, integer) << '\n';
  os << "method = " << to_string(method) << '\n';
  os << "gamma = " << gamma << '\n';
  os << "eta = " << num(eta) << '\n';
  os << "patch_grid = " << patch_grid << '\n';
  os << "\n[output]\n";
  if (!csv.empty()) os << "csv = " << csv << '\n';
  if (!vtk.empty()) os << "vtk = " << vtk << '\n';
  if (!report.empty()) os << "report = " << report << '\n';
  os << "kappa = " << (kappa ? "true" : "false") << '\n';
  os << "\n[verify]\n";
  if (!suite.empty()) os << "suite = " << suite << '\n';
  os << "seed = " << seed << '\n';
  os << "random_cuts = " << random_cuts << '\n';
  return os.str();
}

/// Reads "key = value" lines. Blank lines, [section] headers and text after '#' are ignored.
inline RunConfig parse_config(std::istream& is, RunConfig cfg = {}) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty() || (line.front() == '[' && line.back() == ']')) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(number) + ": empty key");
    cfg.set(key, line.substr(eq + 1));
  }
  return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("io", "cannot read config '" + path + "'");
  return parse_config(is);
}

template <int Dim>
Problem<Dim> make_problem(const RunConfig& cfg) {
  Problem<Dim> P;
  if constexpr (Dim == 2) {
    const double mp = cfg.mu_plus.value_or(cfg.example == "ex1_case_b" ? 1000.0
                                            : cfg.example == "ex1_case_a" ? 5.0
                                            : cfg.example == "ex2"        ? 2.0
                                                                          : 1.0);
    const double mm = cfg.mu_minus.value_or(cfg.example == "ex1_case_c" ? 1000.0
                                            : cfg.example == "ex2"      ? 0.5
                                                                        : 1.0);
    if (cfg.example.rfind("ex1_", 0) == 0) {
      P = problems::ex1(cfg.example, mp, mm);
    } else if (cfg.example == "ex2") {
      P = problems::ex2(mp, mm);
    } else if (cfg.example == "custom") {
      const Point<2> c = cfg.center.empty() ? Point<2>::Zero() : Point<2>(cfg.center[0], cfg.center[1]);
      P = problems::rotating_circle("custom", mp, mm, c, cfg.radius);
    } else {
      throw detail::config_error("dim", cfg.example + " requires dim " +
                                            std::to_string(example_dimension(cfg.example)));
    }
  } else {
    if (cfg.example != "ex3")
      throw detail::config_error("dim", cfg.example + " requires dim 2");
    P = problems::ex3(cfg.mu_plus.value_or(2.0), cfg.mu_minus.value_or(0.5));
  }
  if (!cfg.box_lower.empty()) {
    for (int i = 0; i < Dim; ++i) {
      P.box.lower[i] = cfg.box_lower[i];
      P.box.upper[i] = cfg.box_upper[i];
    }
  }
  return P;
}

template <int Dim>
Parameters make_parameters(const RunConfig& cfg, const Problem<Dim>& P) {
  Parameters p = default_parameters(P, cfg.method);
  p.gamma = cfg.gamma;
  p.eta = cfg.eta;
  p.patch_grid = cfg.patch_grid;
  return p;
}

}  // namespace mife
