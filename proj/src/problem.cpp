#include "dphase/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dphase/error.hpp"
#include "dphase/mesh.hpp"

namespace dphase {

CriticalExponents critical_exponents(double p, int N) {
  if (N < 2) throw Error(ErrorCode::Domain, "dimension N must be at least 2");
  if (!(p > 1.0) || !(p < static_cast<double>(N))) {
    throw Error(ErrorCode::Domain, "critical exponents need 1 < p < N");
  }
  const double n = N;
  return {n * p / (n - p), (n - 1.0) * p / (n - p)};
}

ProblemData preset_problem(double lambda) {
  ProblemData d;
  d.p = 1.5;
  d.q = 1.8;
  d.N = 2;
  d.kappa = 0.5;
  d.q1 = 4.0;
  d.lambda = lambda;
  d.mu = CoefficientField("x");
  d.alpha = CoefficientField("1");
  d.beta = CoefficientField("1");
  d.zeta = CoefficientField("1");
  return d;
}

void ValidationReport::add(std::string hypothesis, std::string message) {
  ok = false;
  violations.push_back({std::move(hypothesis), std::move(message)});
}

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

struct FieldCheck {
  const char* tag;
  const char* name;
  const CoefficientField* field;
  bool strict;  // > 0 instead of >= 0
};

// Records the first failing sample per field so reports stay readable.
void check_field(ValidationReport& report, const FieldCheck& chk, const std::vector<Point>& pts,
                 bool* any_nonzero = nullptr) {
  for (const auto& pt : pts) {
    double v = 0.0;
    try {
      v = (*chk.field)(pt);
    } catch (const Error& e) {
      report.add(chk.tag, std::string(chk.name) + " = \"" + chk.field->source() +
                              "\" cannot be evaluated: " + e.what());
      return;
    }
    if (any_nonzero != nullptr && v != 0.0) *any_nonzero = true;
    const bool bad = chk.strict ? !(v > 0.0) : !(v >= 0.0);
    if (bad) {
      report.add(chk.tag, std::string(chk.name) + " = \"" + chk.field->source() + "\" is " +
                              fmt("%.6g at (%.6g, %.6g)", v, pt.x, pt.y) +
                              (chk.strict ? ", must be > 0" : ", must be >= 0"));
      return;
    }
  }
}

}  // namespace

ValidationReport validate_hypotheses(const ProblemData& d, const Mesh* mesh, SampleBudget budget) {
  ValidationReport report;

  // (H)(i)
  const bool p_ok = d.N >= 2 && d.p > 1.0 && d.p < d.N;
  if (d.N < 2) report.add("H(i)", "dimension N = " + std::to_string(d.N) + " must be at least 2");
  if (!p_ok && d.N >= 2) report.add("H(i)", fmt("1 < p < N violated: p = %.17g, N = %.0f", d.p, d.N));

  if (p_ok) {
    const auto ex = critical_exponents(d.p, d.N);
    if (!(d.p < d.q)) report.add("H(i)", fmt("p < q violated: p = %.17g, q = %.17g", d.p, d.q));
    if (!(d.q < ex.p_star)) report.add("H(i)", fmt("q < p* violated: q = %.17g, p* = %.17g", d.q, ex.p_star));
    const double lower = std::max(d.q, ex.p_lower_star);
    if (!(d.q1 > lower) || !(d.q1 < ex.p_star)) {
      report.add("H(ii)", fmt("q1 must lie in (max{q, p_*}, p*) = (%.17g, %.17g), got %.17g", lower,
                              ex.p_star, d.q1));
    }
  } else {
    if (!(d.p < d.q)) report.add("H(i)", fmt("p < q violated: p = %.17g, q = %.17g", d.p, d.q));
  }
  if (!(d.kappa > 0.0 && d.kappa < 1.0)) report.add("H(ii)", fmt("0 < kappa < 1 violated: kappa = %.17g", d.kappa));
  if (!(d.lambda > 0.0) || !std::isfinite(d.lambda)) report.add("lambda", fmt("lambda must be positive, got %.17g", d.lambda));

  // (H)(iii)-(v) on samples
  std::vector<Point> interior;
  std::vector<Point> boundary;
  if (mesh != nullptr) {
    interior.assign(mesh->nodes().begin(), mesh->nodes().end());
    for (const auto& t : mesh->triangles()) interior.push_back(t.centroid);
    for (auto i : mesh->boundary_nodes()) boundary.push_back(mesh->nodes()[i]);
    for (const auto& e : mesh->boundary_edges()) {
      const Point a = mesh->nodes()[e.a];
      const Point b = mesh->nodes()[e.b];
      boundary.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }
  } else {
    const int g = std::max(budget.grid, 1);
    const Rect& r = budget.rect;
    for (int j = 0; j <= g; ++j) {
      for (int i = 0; i <= g; ++i) {
        const Point pt{r.x0 + (r.x1 - r.x0) * i / g, r.y0 + (r.y1 - r.y0) * j / g};
        interior.push_back(pt);
        if (i == 0 || j == 0 || i == g || j == g) boundary.push_back(pt);
      }
    }
  }

  check_field(report, {"H(i)", "mu", &d.mu, false}, interior);
  bool alpha_nonzero = false;
  const std::size_t before = report.violations.size();
  check_field(report, {"H(iii)", "alpha", &d.alpha, false}, interior, &alpha_nonzero);
  if (!alpha_nonzero && report.violations.size() == before) {
    report.add("H(iii)", "alpha = \"" + d.alpha.source() + "\" vanishes at every sample point");
  }
  check_field(report, {"H(iv)", "beta", &d.beta, false}, boundary);
  check_field(report, {"H(v)", "zeta", &d.zeta, true}, interior);

  if (mesh != nullptr && d.N != 2) {
    report.warnings.push_back("the mesh is two-dimensional but N = " + std::to_string(d.N));
  }
  if (mesh != nullptr && alpha_nonzero) {
    std::size_t zero_nodes = 0;
    for (const auto& pt : mesh->nodes()) {
      try {
        if (d.alpha(pt) == 0.0) ++zero_nodes;
      } catch (const Error&) {
      }
    }
    if (zero_nodes > 0) {
      report.warnings.push_back(std::to_string(zero_nodes) +
                                " mesh node(s) have alpha = 0; directions supported there have "
                                "a = ||u||_{1,p}^p driven by the gradient only");
    }
  }
  return report;
}

}  // namespace dphase
