#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dphase/expr.hpp"

namespace dphase {

class Mesh;

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

struct CriticalExponents {
  double p_star;        // N p / (N - p)
  double p_lower_star;  // (N - 1) p / (N - p)
};

/// Sobolev and trace critical exponents. Throws Error{Domain} unless 1 < p < N.
CriticalExponents critical_exponents(double p, int N);

/// Parameters and weight fields of the singular double phase Neumann problem.
/// Construction never throws on bad parameters; validate_hypotheses reports them.
struct ProblemData {
  double p = 1.5;
  double q = 1.8;
  int N = 2;
  double kappa = 0.5;
  double q1 = 4.0;
  double lambda = 0.1;
  CoefficientField mu;
  CoefficientField alpha{"1"};
  CoefficientField beta{"1"};
  CoefficientField zeta{"1"};

  /// Throws Error{Domain} when the exponents are undefined (p outside (1, N)).
  CriticalExponents exponents() const { return critical_exponents(p, N); }
  double p_star() const { return exponents().p_star; }
  double p_lower_star() const { return exponents().p_lower_star; }
};

/// The reference problem: (p, q, kappa, q1) = (1.5, 1.8, 0.5, 4), mu = x, alpha = beta = zeta = 1.
ProblemData preset_problem(double lambda = 0.1);

struct Violation {
  std::string hypothesis;  // "H(i)" ... "H(v)", "lambda"
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;  // do not affect ok

  void add(std::string hypothesis, std::string message);
};

/// Sample points used when no mesh is supplied: a uniform (grid+1)^2 lattice of
/// the rectangle for interior fields and grid points per side for the boundary.
struct SampleBudget {
  int grid = 16;
  Rect rect{};
};

/// Checks every inequality of (H)(i)-(ii) exactly and the sign conditions of
/// (H)(iii)-(v) on sample points: mesh nodes plus centroids (interior) and
/// boundary nodes plus boundary edge midpoints when a mesh is given.
ValidationReport validate_hypotheses(const ProblemData& data, const Mesh* mesh = nullptr,
                                     SampleBudget budget = {});

}  // namespace dphase
