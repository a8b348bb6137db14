// Command-line front end; talks to the library only through the C API.
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dphase/dphase.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct SessionCloser {
  void operator()(dphase_session* s) const { dphase_session_close(s); }
};
using Session = std::unique_ptr<dphase_session, SessionCloser>;

struct StringFree {
  void operator()(char* s) const { dphase_string_free(s); }
};
using CString = std::unique_ptr<char, StringFree>;

struct Options {
  std::string config;
  std::string out = ".";
  std::string function = "1";
  std::optional<double> lambda;
  double t_min = 1e-3;
  double t_max = 1e3;
  int points = 200;
  int samples = 100;
};

// Status of a failed library call, printed to stderr. Config and parse
// problems are usage errors; everything else is a run failure.
int report(dphase_status st) {
  std::fprintf(stderr, "error (%s): %s\n", dphase_status_name(st), dphase_last_error());
  return st == DPHASE_ERR_CONFIG || st == DPHASE_ERR_PARSE || st == DPHASE_ERR_IO ? kExitUsage : kExitFailure;
}

std::optional<int> open_session(const Options& o, Session& out) {
  dphase_session* raw = nullptr;
  const dphase_status st =
      o.config.empty() ? dphase_session_open_preset(0.1, &raw) : dphase_session_open(o.config.c_str(), &raw);
  if (st != DPHASE_OK) return report(st);
  out.reset(raw);
  if (o.lambda) {
    if (const dphase_status ls = dphase_set_lambda(raw, *o.lambda); ls != DPHASE_OK) return report(ls);
  }
  return std::nullopt;
}

std::optional<int> nodal_function(const Options& o, const Session& s, std::vector<double>& u) {
  size_t n = 0;
  dphase_node_count(s.get(), &n);
  u.assign(n, 0.0);
  const dphase_status st = dphase_eval_function(s.get(), o.function.c_str(), u.data(), n);
  if (st != DPHASE_OK) return st == DPHASE_ERR_PARSE ? report(st) : report(st);
  return std::nullopt;
}

// Prints the validation report; returns true when the data are admissible.
bool validated(const Session& s, bool quiet_on_success) {
  int ok = 0;
  char* raw = nullptr;
  if (const dphase_status st = dphase_validate(s.get(), &ok, &raw); st != DPHASE_OK) {
    report(st);
    return false;
  }
  CString text(raw);
  if (!ok || !quiet_on_success) std::fputs(text.get(), ok ? stdout : stderr);
  return ok != 0;
}

int cmd_validate(const Session& s) { return validated(s, false) ? kExitOk : kExitFailure; }

int cmd_norms(const Options& o, const Session& s) {
  std::vector<double> u;
  if (auto rc = nodal_function(o, s, u)) return *rc;
  dphase_norms n{};
  if (const dphase_status st = dphase_norms_of(s.get(), u.data(), u.size(), &n); st != DPHASE_OK) return report(st);
  std::printf("norm_custom %.17g\nnorm_star %.17g\nnorm_circ %.17g\nnorm_1p %.17g\n", n.custom, n.star, n.circ,
              n.one_p);
  return kExitOk;
}

int cmd_fiber(const Options& o, const Session& s, bool to_file) {
  std::vector<double> u;
  if (auto rc = nodal_function(o, s, u)) return *rc;
  char* raw = nullptr;
  const dphase_status st = dphase_fiber_csv(s.get(), u.data(), u.size(), o.t_min, o.t_max, o.points, &raw);
  if (st != DPHASE_OK) return report(st);
  CString csv(raw);
  if (!to_file) {
    std::fputs(csv.get(), stdout);
    return kExitOk;
  }
  const std::string path = o.out + "/fiber.csv";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
    return kExitFailure;
  }
  std::fputs(csv.get(), f);
  std::fclose(f);
  return kExitOk;
}

int cmd_solve(const Options& o, const Session& s) {
  if (!validated(s, true)) return kExitFailure;
  int sign_ok = 0;
  if (const dphase_status st = dphase_solve(s.get(), o.out.c_str(), &sign_ok); st != DPHASE_OK) return report(st);
  std::printf("wrote %s/solve.json\n", o.out.c_str());
  if (!sign_ok) {
    std::fprintf(stderr, "solve: the two branches did not both converge with energy signs (-, +)\n");
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, const Session& s) {
  if (!validated(s, true)) return kExitFailure;
  int ordering_ok = 0;
  if (const dphase_status st = dphase_sweep(s.get(), o.out.c_str(), &ordering_ok); st != DPHASE_OK) {
    return report(st);
  }
  std::printf("wrote %s/sweep.json\n", o.out.c_str());
  if (!ordering_ok) std::fprintf(stderr, "sweep: threshold ordering check failed, see sweep.json\n");
  return kExitOk;
}

int cmd_props(const Options& o, const Session& s) {
  int passed = 0, failed = 0;
  char* raw = nullptr;
  if (const dphase_status st = dphase_props(s.get(), o.samples, &passed, &failed, &raw); st != DPHASE_OK) {
    return report(st);
  }
  CString text(raw);
  std::fputs(text.get(), stdout);
  std::printf("%d passed, %d failed\n", passed, failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular double phase Neumann problem: validation, norms, fibering maps, two-solution solver"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file (reference problem if omitted)");
    sub->add_option("--lambda", o.lambda, "override lambda");
  };
  auto* validate = app.add_subcommand("validate", "check the problem hypotheses");
  common(validate);
  auto* norms = app.add_subcommand("norms", "print the four norms of a function");
  common(norms);
  norms->add_option("--function", o.function, "expression in x, y (default 1)");
  auto* fiber = app.add_subcommand("fiber", "fibering-map profile as CSV");
  common(fiber);
  fiber->add_option("--function", o.function, "direction as an expression in x, y (default 1)");
  fiber->add_option("--t-min", o.t_min, "smallest t (default 1e-3)")->check(CLI::PositiveNumber);
  fiber->add_option("--t-max", o.t_max, "largest t (default 1e3)")->check(CLI::PositiveNumber);
  fiber->add_option("--points", o.points, "grid points (default 200)")->check(CLI::Range(2, 10000000));
  auto* fiber_out = fiber->add_option("--out", o.out, "directory for fiber.csv (stdout if omitted)");
  auto* solve = app.add_subcommand("solve", "compute both solutions");
  common(solve);
  solve->add_option("--out", o.out, "output directory (default .)");
  auto* sweep = app.add_subcommand("sweep", "sampled threshold estimates");
  common(sweep);
  sweep->add_option("--out", o.out, "output directory (default .)");
  auto* props = app.add_subcommand("props", "run the built-in property suites");
  common(props);
  props->add_option("--samples", o.samples, "random functions per suite (default 100)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Session session;
  if (auto rc = open_session(o, session)) return *rc;
  if (validate->parsed()) return cmd_validate(session);
  if (norms->parsed()) return cmd_norms(o, session);
  if (fiber->parsed()) return cmd_fiber(o, session, fiber_out->count() > 0);
  if (solve->parsed()) return cmd_solve(o, session);
  if (sweep->parsed()) return cmd_sweep(o, session);
  if (props->parsed()) return cmd_props(o, session);
  return kExitUsage;
}
