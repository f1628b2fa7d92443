#include "mife/mife.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace mife;

namespace {

std::string csv_for(const RunConfig& cfg) {
  const auto P = make_problem<2>(cfg);
  const auto params = make_parameters(cfg, P);
  const auto report = convergence_study(P, cfg.M, params);
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

std::string error_message(const std::string& text) {
  try {
    parse_config_string(text).validate();
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, SerializeParseRoundTripIsIdempotent) {
  RunConfig cfg;
  cfg.example = "custom";
  cfg.M = {8, 16, 32};
  cfg.mu_plus = 0.1;
  cfg.mu_minus = 1.0 / 3.0;
  cfg.gamma = 1;
  cfg.eta = 2.5;
  cfg.method = Method::conventional_mini;
  cfg.center = {0.125, -0.2};
  cfg.radius = 0.45;
  cfg.box_lower = {-1.0, -2.0};
  cfg.box_upper = {1.0, 2.0};
  cfg.csv = "out.csv";
  cfg.seed = 99;
  cfg.kappa = true;
  const std::string once = cfg.serialize();
  const RunConfig back = parse_config_string(once);
  EXPECT_EQ(back.serialize(), once);
  EXPECT_EQ(*back.mu_minus, 1.0 / 3.0);
  EXPECT_EQ(back.M, cfg.M);
  EXPECT_EQ(back.method, Method::conventional_mini);
  EXPECT_NO_THROW(back.validate());
  EXPECT_EQ(parse_config_string(RunConfig{}.serialize()).serialize(), RunConfig{}.serialize());
}

TEST(Config, CommentsSectionsAndWhitespace) {
  const auto cfg = parse_config_string(
      "# comment line\n"
      "[problem]\n"
      "  example = ex1_case_c   # trailing comment\n"
      "\n"
      "[discretization]\n"
      "M=16,32\n"
      "eta = 1e-1\n");
  EXPECT_EQ(cfg.example, "ex1_case_c");
  EXPECT_EQ(cfg.M, (std::vector<int>{16, 32}));
  EXPECT_DOUBLE_EQ(cfg.eta, 0.1);
  const auto P = make_problem<2>(cfg);
  EXPECT_EQ(P.mu_plus, 1.0);
  EXPECT_EQ(P.mu_minus, 1000.0);
}

TEST(Config, ValidationNamesTheOffendingField) {
  EXPECT_NE(error_message("example = ex3\ndim = 2\n").find("config.dim"), std::string::npos);
  EXPECT_NE(error_message("gamma = 0\n").find("config.gamma"), std::string::npos);
  EXPECT_NE(error_message("eta = -1\n").find("config.eta"), std::string::npos);
  EXPECT_NE(error_message("mu_plus = 0\n").find("config.mu_plus"), std::string::npos);
  EXPECT_NE(error_message("M = 16,8\n").find("config.M"), std::string::npos);
  EXPECT_NE(error_message("M = 16,x\n").find("config.M"), std::string::npos);
  EXPECT_NE(error_message("example = ex4\n").find("config.example"), std::string::npos);
  EXPECT_NE(error_message("suite = everything\n").find("config.suite"), std::string::npos);
  EXPECT_NE(error_message("method = p2\n").find("config.method"), std::string::npos);
  EXPECT_NE(error_message("colour = blue\n").find("unknown key"), std::string::npos);
  EXPECT_NE(error_message("just text\n").find("line 1"), std::string::npos);
  EXPECT_EQ(error_message("example = ex3\ndim = 3\n"), "");
}

TEST(Config, ParametersAreInvalidWithoutConfig) {
  Parameters p;
  p.gamma = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.gamma = 1;
  p.mu_minus = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Config, SameConfigGivesIdenticalCsv) {
  RunConfig cfg;
  cfg.example = "ex1_case_a";
  cfg.M = {8, 16};
  const std::string a = csv_for(cfg);
  const std::string b = csv_for(cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "example,M,h,e0_u,rate0_u,e1_u,rate1_u,e0_p,rate0_p,kappa");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
}

TEST(Config, VtkOutputsAreConsistent) {
  const auto P = problems::ex2();
  const auto level = solve_level(P, 4, default_parameters(P));
  std::ostringstream os;
  write_solution_vtk(os, *level.field);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0", 0), 0u);
  std::size_t pieces = 0;
  for (Index e = 0; e < level.D->mesh.num_elements(); ++e) pieces += level.D->pieces(e).size();
  EXPECT_NE(s.find("POINTS " + std::to_string(3 * pieces) + " double"), std::string::npos);
  EXPECT_NE(s.find("CELLS " + std::to_string(pieces) + " " + std::to_string(4 * pieces)),
            std::string::npos);
  EXPECT_NE(s.find("VECTORS velocity double"), std::string::npos);
  EXPECT_NE(s.find("SCALARS pressure double 1"), std::string::npos);
  EXPECT_EQ(s.find("nan"), std::string::npos);

  std::ostringstream cut;
  write_cut_vtk(cut, *level.D);
  EXPECT_NE(cut.str().find("SCALARS kind int 1"), std::string::npos);
  std::ostringstream mesh;
  write_mesh_vtk(mesh, level.D->mesh, &level.D->labels);
  EXPECT_NE(mesh.str().find("CELLS " + std::to_string(level.D->mesh.num_elements())), std::string::npos);
}

TEST(Config, MatrixExportWritesCoordinateTriplets) {
  const auto P = problems::ex2();
  const auto D = discretize(P, 2, default_parameters(P));
  const auto sys = assemble(D);
  const std::string path = ::testing::TempDir() + "mife_matrix.txt";
  export_matrix(sys.A, path);
  std::ifstream is(path);
  Index row = 0, col = 0, lines = 0;
  double value = 0.0, sum = 0.0;
  while (is >> row >> col >> value) {
    ++lines;
    sum += value;
    EXPECT_EQ(value, sys.A.coeff(row, col));
  }
  EXPECT_EQ(lines, sys.A.nonZeros());
  EXPECT_DOUBLE_EQ(sum, Eigen::VectorXd::Ones(sys.A.rows()).dot(sys.A * Eigen::VectorXd::Ones(sys.A.cols())));
}
