#include "dphase/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include "dphase/error.hpp"

namespace dphase {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::Config, "line " + std::to_string(line) + ": " + msg);
}

struct Entry {
  std::string value;
  int line;
};

std::map<std::string, Entry> tokenize(const std::string& text) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // Strip a comment that is not inside quotes.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string body = trim(raw.substr(0, cut));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.find('"') != std::string::npos) {
      fail(line, "unbalanced quotes in value of '" + key + "'");
    }
    if (out.count(key) != 0) fail(line, "duplicate key '" + key + "'");
    out.emplace(key, Entry{value, line});
  }
  return out;
}

double to_decimal(const std::string& key, const Entry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE || !std::isfinite(v)) {
    fail(e.line, "'" + key + "' expects a decimal, got '" + e.value + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const Entry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE) {
    fail(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
  }
  return v;
}

CoefficientField to_field(const std::string& key, const Entry& e) {
  try {
    return CoefficientField(e.value);
  } catch (const ParseError& pe) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(e.line) + ": '" + key + "': " + pe.what());
  }
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "p", "q", "kappa", "q1", "lambda", "N", "mu", "alpha", "beta", "zeta", "rect", "mesh.nx", "mesh.ny",
      "solver.energy_tol", "solver.stall", "solver.max_iter", "solver.residual_tol", "solver.floor",
      "solver.nehari_tol", "solver.seed", "sweep.samples", "sweep.lambda_grid"};
  return keys;
}

}  // namespace

std::vector<double> parse_decimal_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (t.empty() || end != begin + t.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::Config, "'" + key + "' expects comma-separated decimals, got '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

Config preset_config(double lambda) {
  Config c;
  c.problem = preset_problem(lambda);
  return c;
}

Config parse_config(const std::string& text) {
  const auto entries = tokenize(text);
  for (const auto& [key, e] : entries) {
    if (known_keys().count(key) == 0) fail(e.line, "unknown key '" + key + "'");
  }
  for (const char* req : {"p", "q", "kappa", "q1", "lambda"}) {
    if (entries.count(req) == 0) throw Error(ErrorCode::Config, std::string("missing required key '") + req + "'");
  }

  Config c;
  const auto dec = [&](const char* k, double& dst) {
    if (auto it = entries.find(k); it != entries.end()) dst = to_decimal(k, it->second);
  };
  const auto integer = [&](const char* k, auto& dst, long long lo) {
    if (auto it = entries.find(k); it != entries.end()) {
      const long long v = to_integer(k, it->second);
      if (v < lo) fail(it->second.line, std::string("'") + k + "' must be at least " + std::to_string(lo));
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
    }
  };
  const auto field = [&](const char* k, CoefficientField& dst) {
    if (auto it = entries.find(k); it != entries.end()) dst = to_field(k, it->second);
  };

  ProblemData& d = c.problem;
  d = ProblemData{};
  d.mu = CoefficientField("0");
  dec("p", d.p);
  dec("q", d.q);
  dec("kappa", d.kappa);
  dec("q1", d.q1);
  dec("lambda", d.lambda);
  integer("N", d.N, 1);
  field("mu", d.mu);
  field("alpha", d.alpha);
  field("beta", d.beta);
  field("zeta", d.zeta);

  if (auto it = entries.find("rect"); it != entries.end()) {
    const auto v = parse_decimal_list("rect", it->second.value);
    if (v.size() != 4) fail(it->second.line, "'rect' expects four decimals x0,y0,x1,y1");
    if (!(v[2] > v[0] && v[3] > v[1])) fail(it->second.line, "'rect' needs x1 > x0 and y1 > y0");
    c.rect = Rect{v[0], v[1], v[2], v[3]};
  }
  integer("mesh.nx", c.nx, 1);
  integer("mesh.ny", c.ny, 1);

  dec("solver.energy_tol", c.solver.energy_tol);
  integer("solver.stall", c.solver.stall, 1);
  integer("solver.max_iter", c.solver.max_iter, 0);
  dec("solver.residual_tol", c.solver.residual_tol);
  dec("solver.floor", c.solver.floor);
  dec("solver.nehari_tol", c.solver.nehari_tol);
  integer("solver.seed", c.solver.seed, 0);
  c.sweep.seed = c.solver.seed;

  integer("sweep.samples", c.sweep.samples, 1);
  if (auto it = entries.find("sweep.lambda_grid"); it != entries.end()) {
    c.sweep.lambda_grid = parse_decimal_list("sweep.lambda_grid", it->second.value);
    if (c.sweep.lambda_grid.empty()) fail(it->second.line, "'sweep.lambda_grid' is empty");
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace dphase
