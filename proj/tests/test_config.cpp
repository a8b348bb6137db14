#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dphase/config.hpp"
#include "dphase/error.hpp"
#include "dphase/export.hpp"
#include "dphase/mesh.hpp"

using namespace dphase;

namespace {

const char* kMinimal = R"cfg(# reference problem
p = 1.5
q = 1.8
kappa = 0.5
q1 = 4
lambda = 0.1
mu = "x"   # weight of the q-phase
)cfg";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("minimal config equals the preset") {
  const Config c = parse_config(kMinimal);
  const Config ref = preset_config(0.1);
  CHECK(c.problem.p == ref.problem.p);
  CHECK(c.problem.q == ref.problem.q);
  CHECK(c.problem.kappa == ref.problem.kappa);
  CHECK(c.problem.q1 == ref.problem.q1);
  CHECK(c.problem.lambda == ref.problem.lambda);
  CHECK(c.problem.N == 2);
  CHECK(c.problem.mu.source() == "x");
  CHECK(c.problem.alpha.source() == "1");
  CHECK(c.nx == 16);
  CHECK(c.ny == 16);
  CHECK(c.rect.x1 == 1.0);
  CHECK(c.solver.residual_tol == 1e-8);
  CHECK(c.solver.stall == 25);
  CHECK(c.solver.max_iter == 20000);
  CHECK(c.sweep.samples == 200);
  CHECK(c.sweep.lambda_grid == std::vector<double>{0.02, 0.05, 0.1});
}

TEST_CASE("defaults for mu is zero") {
  const Config c = parse_config("p=1.5\nq=1.8\nkappa=0.5\nq1=4\nlambda=0.1\n");
  CHECK(c.problem.mu.source() == "0");
}

TEST_CASE("all keys") {
  const Config c = parse_config(std::string(kMinimal) + R"cfg(
N = 3
alpha = "1 + y"
beta = 2
zeta = "exp(x)"
rect = "0, 0, 2, 1"
mesh.nx = 8
mesh.ny = 4
solver.energy_tol = 1e-9
solver.stall = 10
solver.max_iter = 100
solver.residual_tol = 1e-7
solver.floor = 1e-12
solver.nehari_tol = 1e-8
solver.seed = 42
sweep.samples = 17
sweep.lambda_grid = 0.01, 0.02
)cfg");
  CHECK(c.problem.N == 3);
  CHECK(c.problem.beta.source() == "2");
  CHECK(c.rect.x1 == 2.0);
  CHECK(c.nx == 8);
  CHECK(c.ny == 4);
  CHECK(c.solver.seed == 42);
  CHECK(c.sweep.seed == 42);
  CHECK(c.solver.floor == 1e-12);
  CHECK(c.sweep.samples == 17);
  CHECK(c.sweep.lambda_grid == std::vector<double>{0.01, 0.02});
}

TEST_CASE("config errors") {
  const std::string unknown = error_of(std::string(kMinimal) + "qq1 = 4\n");
  CHECK(unknown.find("qq1") != std::string::npos);
  CHECK(code_of(std::string(kMinimal) + "qq1 = 4\n") == ErrorCode::Config);
  CHECK(code_of("p=1.5\nq=1.8\nkappa=0.5\nq1=4\n") == ErrorCode::Config);
  CHECK(error_of("p=1.5\nq=1.8\nkappa=0.5\nq1=4\n").find("lambda") != std::string::npos);
  CHECK(code_of(std::string(kMinimal) + "mesh.nx = 2.5\n") == ErrorCode::Config);
  CHECK(code_of(std::string(kMinimal) + "mesh.nx = 0\n") == ErrorCode::Config);
  CHECK(code_of("p=abc\nq=1.8\nkappa=0.5\nq1=4\nlambda=1\n") == ErrorCode::Config);
  CHECK(code_of(std::string(kMinimal) + "rect = 0,0,1\n") == ErrorCode::Config);
  CHECK(code_of(std::string(kMinimal) + "just text\n") == ErrorCode::Config);
  CHECK(code_of(std::string(kMinimal) + "p = 2\n") == ErrorCode::Config);  // duplicate
  const std::string parse = error_of("p=1.5\nq=1.8\nkappa=0.5\nq1=4\nlambda=0.1\nmu = \"x +\"\n");
  CHECK(code_of("p=1.5\nq=1.8\nkappa=0.5\nq1=4\nlambda=0.1\nmu = \"x +\"\n") == ErrorCode::Parse);
  CHECK(parse.find("offset 3") != std::string::npos);
  CHECK(parse.find("mu") != std::string::npos);
}

TEST_CASE("load_config from disk") {
  const std::string path = "dphase_test_config.cfg";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  CHECK(load_config(path).problem.q1 == 4.0);
  std::remove(path.c_str());
  try {
    load_config("/nonexistent/dir/x.cfg");
    FAIL("expected Io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("CSV formats") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(-2.0) == "-2");
  const FiberTerms ft{1, 0, 4, 1, 1, {1.5, 1.8, 3.0, 4.0, 0.5}};
  const std::string csv = fiber_csv(ft, 4.0, 0.5, 2.0, 3);
  std::istringstream in(csv);
  std::string header, row0, row1, row2;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "t,psi,dpsi,ddpsi,eta,eta_tilde");
  CHECK(row0.rfind("0.5,", 0) == 0);
  CHECK(row1.rfind("1,", 0) == 0);
  CHECK(row1.find(",-3,4,") != std::string::npos);  // ddpsi(1) = -3, eta(1) = 4
  CHECK(row2.rfind("2,", 0) == 0);
  CHECK_THROWS_AS(fiber_csv(ft, 1.0, 0.0, 1.0, 5), Error);
  CHECK_THROWS_AS(fiber_csv(ft, 1.0, 1.0, 1.0, 5), Error);
  const FiberTerms no_alpha{0, 0, 4, 1, 1, ft.ex};
  const std::string c2 = fiber_csv(no_alpha, 1.0, 1.0, 2.0, 2);
  CHECK(c2.find(",\n") != std::string::npos);  // eta_tilde left empty

  const Mesh m = build_rect_mesh(1, 1);
  const std::string sol = solution_csv(m, DiscreteFunction({1, 2, 3, 4}));
  CHECK(sol == "node,x,y,value\n0,0,0,1\n1,1,0,2\n2,0,1,3\n3,1,1,4\n");
}
