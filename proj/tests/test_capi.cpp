#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dphase/dphase.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = "p=1.5\nq=1.8\nkappa=0.5\nq1=4\nlambda=0.1\nmu=\"x\"\nmesh.nx=4\nmesh.ny=4\n"
                     "sweep.samples=10\nsweep.lambda_grid=0.02,0.05\n";

}  // namespace

TEST_CASE("status codes and last error") {
  double ps = 0, pl = 0;
  CHECK(dphase_critical_exponents(1.5, 2, &ps, &pl) == DPHASE_OK);
  CHECK(ps == 6.0);
  CHECK(pl == 3.0);
  CHECK(std::strlen(dphase_last_error()) == 0);
  CHECK(dphase_critical_exponents(2.0, 2, &ps, &pl) == DPHASE_ERR_DOMAIN);
  CHECK(std::strlen(dphase_last_error()) > 0);
  CHECK(dphase_critical_exponents(1.5, 2, nullptr, &pl) == DPHASE_ERR_INVALID_ARGUMENT);
  CHECK(std::string(dphase_status_name(DPHASE_ERR_NO_ROOT)) == "no root");

  dphase_session* s = nullptr;
  CHECK(dphase_session_open_text("p=1.5\n", &s) == DPHASE_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(dphase_session_open_text("p=1.5\nq=1.8\nkappa=0.5\nq1=4\nlambda=1\nmu=\"x+\"\n", &s) == DPHASE_ERR_PARSE);
  CHECK(dphase_session_open("/nonexistent.cfg", &s) == DPHASE_ERR_IO);
}

TEST_CASE("session queries") {
  dphase_session* s = nullptr;
  REQUIRE(dphase_session_open_preset(4.0, &s) == DPHASE_OK);
  size_t n = 0;
  CHECK(dphase_node_count(s, &n) == DPHASE_OK);
  CHECK(n == 289);
  std::vector<double> xy(2 * n), one(n);
  CHECK(dphase_node_coords(s, xy.data(), n) == DPHASE_OK);
  CHECK(xy[2 * 16] == 1.0);
  CHECK(dphase_eval_function(s, "1", one.data(), n) == DPHASE_OK);
  CHECK(dphase_eval_function(s, "1/", one.data(), n) == DPHASE_ERR_PARSE);
  CHECK(dphase_eval_function(s, "1", one.data(), n - 1) == DPHASE_ERR_INVALID_ARGUMENT);

  dphase_norms norms{};
  CHECK(dphase_norms_of(s, one.data(), n, &norms) == DPHASE_OK);
  CHECK(norms.custom == doctest::Approx(1.8721280180071873).epsilon(1e-12));
  CHECK(norms.one_p == doctest::Approx(1.0));
  double e = 0;
  CHECK(dphase_energy(s, one.data(), n, &e) == DPHASE_OK);
  CHECK(e == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(dphase_set_lambda(s, 1.0) == DPHASE_OK);
  CHECK(dphase_energy(s, one.data(), n, &e) == DPHASE_OK);
  CHECK(e == doctest::Approx(-0.25).epsilon(1e-13));
  double r = 0;
  CHECK(dphase_weak_residual(s, one.data(), n, &r) == DPHASE_OK);
  std::vector<double> zero(n, 0.0);
  CHECK(dphase_weak_residual(s, zero.data(), n, &r) == DPHASE_ERR_DOMAIN);

  char* csv = nullptr;
  CHECK(dphase_fiber_csv(s, one.data(), n, 0.1, 10, 5, &csv) == DPHASE_OK);
  CHECK(std::string(csv).rfind("t,psi,dpsi,ddpsi,eta,eta_tilde\n", 0) == 0);
  dphase_string_free(csv);

  int ok = 0;
  char* report = nullptr;
  CHECK(dphase_validate(s, &ok, &report) == DPHASE_OK);
  CHECK(ok == 1);
  dphase_string_free(report);

  int passed = 0, failed = 0;
  CHECK(dphase_props(s, 10, &passed, &failed, &report) == DPHASE_OK);
  CHECK(failed == 0);
  CHECK(passed == 6);
  dphase_string_free(report);
  dphase_session_close(s);
}

TEST_CASE("validation failure through the C API") {
  dphase_session* s = nullptr;
  REQUIRE(dphase_session_open_text("p=1.5\nq=1.8\nkappa=0.5\nq1=2.5\nlambda=0.1\n", &s) == DPHASE_OK);
  int ok = 1;
  char* report = nullptr;
  CHECK(dphase_validate(s, &ok, &report) == DPHASE_OK);
  CHECK(ok == 0);
  CHECK(std::string(report).find("H(ii)") != std::string::npos);
  dphase_string_free(report);
  dphase_session_close(s);
}

TEST_CASE("solve and sweep write deterministic files") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "dphase_capi_test";
  fs::remove_all(base);
  dphase_session* s = nullptr;
  REQUIRE(dphase_session_open_text(kSmall, &s) == DPHASE_OK);
  int sign_ok = 0, order_ok = 0;
  for (const char* sub : {"a", "b"}) {
    const std::string dir = (base / sub).string();
    REQUIRE(dphase_solve(s, dir.c_str(), &sign_ok) == DPHASE_OK);
    CHECK(sign_ok == 1);
    REQUIRE(dphase_sweep(s, dir.c_str(), &order_ok) == DPHASE_OK);
  }
  for (const char* f : {"solve.json", "u_lambda.csv", "v_lambda.csv", "sweep.json", "sweep_samples.csv"}) {
    const std::string a = slurp(base / "a" / f), b = slurp(base / "b" / f);
    CHECK(!a.empty());
    CHECK(a == b);
  }
  CHECK(slurp(base / "a" / "solve.json").find("\"floor_activations\"") != std::string::npos);
  CHECK(slurp(base / "a" / "sweep.json").find("\"lambda_star_est\"") != std::string::npos);
  dphase_session_close(s);
  fs::remove_all(base);
}
