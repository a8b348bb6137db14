#include "dphase/dphase.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "dphase/config.hpp"
#include "dphase/energy.hpp"
#include "dphase/error.hpp"
#include "dphase/export.hpp"
#include "dphase/fibering.hpp"
#include "dphase/mesh.hpp"
#include "dphase/props.hpp"
#include "dphase/solver.hpp"
#include "dphase/space.hpp"
#include "dphase/sweep.hpp"

using namespace dphase;

struct dphase_session {
  Config config;
  std::shared_ptr<const Mesh> mesh;
  std::unique_ptr<Discretization> disc;

  explicit dphase_session(Config c) : config(std::move(c)) {
    mesh = std::make_shared<const Mesh>(build_rect_mesh(config.nx, config.ny, config.rect));
    disc = std::make_unique<Discretization>(mesh, config.problem);
  }
  double lambda() const { return config.problem.lambda; }
};

namespace {

thread_local std::string g_last_error;

dphase_status record(dphase_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class F>
dphase_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return DPHASE_OK;
  } catch (const Error& e) {
    return record(static_cast<dphase_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(DPHASE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DPHASE_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(DPHASE_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool cond, const char* msg) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, msg);
}

DiscreteFunction function_from(const dphase_session* s, const double* u, size_t n) {
  require(s != nullptr, "null session");
  require(u != nullptr, "null function values");
  require(n == s->disc->node_count(), "function length does not match the node count");
  return DiscreteFunction(std::vector<double>(u, u + n));
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

std::string join(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const char* dir) {
  require(dir != nullptr, "null output directory");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, std::string("cannot create directory '") + dir + "': " + ec.message());
}

}  // namespace

extern "C" {

const char* dphase_last_error(void) { return g_last_error.c_str(); }

const char* dphase_status_name(dphase_status status) {
  switch (status) {
    case DPHASE_OK: return "ok";
    case DPHASE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DPHASE_ERR_PARSE: return "parse error";
    case DPHASE_ERR_EVAL: return "evaluation error";
    case DPHASE_ERR_CONFIG: return "config error";
    case DPHASE_ERR_DOMAIN: return "domain error";
    case DPHASE_ERR_NO_ROOT: return "no root";
    case DPHASE_ERR_BRACKET: return "bracket failure";
    case DPHASE_ERR_NOT_CONVERGED: return "not converged";
    case DPHASE_ERR_IO: return "i/o error";
    case DPHASE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dphase_string_free(char* s) { std::free(s); }

dphase_status dphase_critical_exponents(double p, int n, double* p_star, double* p_lower_star) {
  return guarded([&] {
    require(p_star != nullptr && p_lower_star != nullptr, "null output pointer");
    const CriticalExponents ce = critical_exponents(p, n);
    *p_star = ce.p_star;
    *p_lower_star = ce.p_lower_star;
  });
}

dphase_status dphase_session_open(const char* config_path, dphase_session** out) {
  return guarded([&] {
    require(config_path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new dphase_session(load_config(config_path));
  });
}

dphase_status dphase_session_open_text(const char* config_text, dphase_session** out) {
  return guarded([&] {
    require(config_text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new dphase_session(parse_config(config_text));
  });
}

dphase_status dphase_session_open_preset(double lambda, dphase_session** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = nullptr;
    *out = new dphase_session(preset_config(lambda));
  });
}

void dphase_session_close(dphase_session* s) { delete s; }

dphase_status dphase_set_lambda(dphase_session* s, double lambda) {
  return guarded([&] {
    require(s != nullptr, "null session");
    require(std::isfinite(lambda), "lambda must be finite");
    s->config.problem.lambda = lambda;
  });
}

dphase_status dphase_get_lambda(const dphase_session* s, double* lambda) {
  return guarded([&] {
    require(s != nullptr && lambda != nullptr, "null argument");
    *lambda = s->lambda();
  });
}

dphase_status dphase_node_count(const dphase_session* s, size_t* n) {
  return guarded([&] {
    require(s != nullptr && n != nullptr, "null argument");
    *n = s->disc->node_count();
  });
}

dphase_status dphase_node_coords(const dphase_session* s, double* xy, size_t n) {
  return guarded([&] {
    require(s != nullptr && xy != nullptr, "null argument");
    require(n == s->disc->node_count(), "length does not match the node count");
    const auto nodes = s->mesh->nodes();
    for (size_t i = 0; i < n; ++i) {
      xy[2 * i] = nodes[i].x;
      xy[2 * i + 1] = nodes[i].y;
    }
  });
}

dphase_status dphase_eval_function(const dphase_session* s, const char* expr, double* values, size_t n) {
  return guarded([&] {
    require(s != nullptr && expr != nullptr && values != nullptr, "null argument");
    require(n == s->disc->node_count(), "length does not match the node count");
    const CoefficientField f(expr);
    const auto nodes = s->mesh->nodes();
    for (size_t i = 0; i < n; ++i) values[i] = f(nodes[i]);
  });
}

dphase_status dphase_validate(const dphase_session* s, int* ok, char** report) {
  return guarded([&] {
    require(s != nullptr && ok != nullptr && report != nullptr, "null argument");
    ProblemData data = s->config.problem;
    const ValidationReport rep = validate_hypotheses(data, s->mesh.get());
    std::string text = rep.ok ? "ok\n" : "violations:\n";
    for (const auto& v : rep.violations) text += "  " + v.hypothesis + ": " + v.message + "\n";
    for (const auto& w : rep.warnings) text += "warning: " + w + "\n";
    *ok = rep.ok ? 1 : 0;
    *report = duplicate(text);
  });
}

dphase_status dphase_norms_of(const dphase_session* s, const double* u, size_t n, dphase_norms* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    const DiscreteFunction f = function_from(s, u, n);
    out->custom = norm_custom(*s->disc, f);
    out->star = norm_star(*s->disc, f);
    out->circ = norm_circ(*s->disc, f);
    out->one_p = norm_1p(*s->disc, f);
  });
}

dphase_status dphase_energy(const dphase_session* s, const double* u, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = energy(*s->disc, function_from(s, u, n), s->lambda()).total;
  });
}

dphase_status dphase_weak_residual(const dphase_session* s, const double* u, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = weak_residual(*s->disc, function_from(s, u, n), s->lambda()).residual_norm;
  });
}

dphase_status dphase_fiber_csv(const dphase_session* s, const double* u, size_t n, double t_min, double t_max,
                               int points, char** csv) {
  return guarded([&] {
    require(csv != nullptr, "null output pointer");
    const DiscreteFunction f = function_from(s, u, n);
    require(f.max() != 0.0 || f.min() != 0.0, "fiber of the zero function");
    *csv = duplicate(fiber_csv(fiber_terms(*s->disc, f), s->lambda(), t_min, t_max, points));
  });
}

dphase_status dphase_solve(const dphase_session* s, const char* out_dir, int* sign_ok) {
  return guarded([&] {
    require(s != nullptr && sign_ok != nullptr, "null argument");
    ensure_dir(out_dir);
    const TwoSolutions two = solve_two(*s->disc, s->lambda(), s->config.solver);
    if (two.u_lambda) write_text_file(join(out_dir, "u_lambda.csv"), solution_csv(*s->mesh, two.u_lambda->u));
    if (two.v_lambda) write_text_file(join(out_dir, "v_lambda.csv"), solution_csv(*s->mesh, two.v_lambda->u));
    write_text_file(join(out_dir, "solve.json"), solve_json(*s->disc, two, "u_lambda.csv", "v_lambda.csv"));
    *sign_ok = two.sign_pattern_ok ? 1 : 0;
  });
}

dphase_status dphase_sweep(const dphase_session* s, const char* out_dir, int* ordering_ok) {
  return guarded([&] {
    require(s != nullptr && ordering_ok != nullptr, "null argument");
    ensure_dir(out_dir);
    const SweepReport rep = run_sweep(*s->disc, s->config.sweep, s->config.solver);
    write_text_file(join(out_dir, "sweep.json"), sweep_json(rep));
    write_text_file(join(out_dir, "sweep_samples.csv"), sweep_samples_csv(rep));
    *ordering_ok = rep.ordering_ok ? 1 : 0;
  });
}

dphase_status dphase_props(const dphase_session* s, int samples, int* passed, int* failed, char** report) {
  return guarded([&] {
    require(s != nullptr && passed != nullptr && failed != nullptr && report != nullptr, "null argument");
    const auto outcomes = run_property_suites(*s->disc, s->lambda(), s->config.solver.seed, samples);
    std::string text;
    *passed = 0;
    *failed = 0;
    for (const auto& o : outcomes) {
      o.passed() ? ++*passed : ++*failed;
      text += (o.passed() ? "PASS " : "FAIL ") + o.suite + " " + std::to_string(o.checks - o.failures) + "/" +
              std::to_string(o.checks);
      if (!o.first_failure.empty()) text += "  first failure: " + o.first_failure;
      text += "\n";
    }
    *report = duplicate(text);
  });
}

}  // extern "C"
