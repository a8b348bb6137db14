#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dphase/discretization.hpp"
#include "dphase/energy.hpp"
#include "dphase/fibering.hpp"

namespace dphase {

/// Plus projects a direction with the smaller fiber root t1 (local minimum of
/// psi, N+), Minus with the larger root t2 (local maximum, N-).
enum class Branch { Plus, Minus };
std::string_view to_string(Branch b);

struct SolverOptions {
  double energy_tol = 1e-10;  // relative energy decrease over `stall` iterations
  int stall = 25;
  int max_iter = 20000;
  double residual_tol = 1e-8;
  double nehari_tol = kNehariTol;
  double floor = kDefaultSingularFloor;
  int lbfgs_memory = 10;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_halvings = 60;
  std::uint64_t seed = 1;
};

struct SolveResult {
  Branch branch = Branch::Plus;
  std::string start;  // multi-start label
  DiscreteFunction u;
  double energy = 0.0;
  NehariClass nehari;
  ResidualReport residual;
  int iterations = 0;
  int floor_activations = 0;  // accepted iterates with at least one floored node
  bool converged = false;
  std::string message;
};

/// t_i(u) u for the branch root. Throws Error{NoRoot} if eta(t_circ) <= lambda e
/// along this direction, Error{InvalidArgument} for u = 0 or negative entries.
DiscreteFunction project_to_nehari(const Discretization& disc, const DiscreteFunction& u, double lambda,
                                   Branch branch);

/// Minimizes Theta_lambda over one Nehari branch by descent on the direction
/// w -> Theta_lambda(t(w) w). Throws Error{NoRoot} if the initial direction
/// cannot be projected; hitting max_iter returns converged = false.
SolveResult minimize_on_branch(const Discretization& disc, double lambda, Branch branch,
                               const DiscreteFunction& init, const SolverOptions& opts = {});

struct StartPoint {
  std::string name;
  DiscreteFunction u;
};

/// all-ones, first-coordinate ramp, radial bump, then each of them perturbed
/// nodewise by a factor in [0.9, 1.1] drawn from `seed`.
std::vector<StartPoint> default_starts(const Mesh& mesh, std::uint64_t seed);

struct TwoSolutions {
  double lambda = 0.0;
  std::optional<SolveResult> u_lambda;  // best Plus run
  std::optional<SolveResult> v_lambda;  // best Minus run
  std::vector<SolveResult> plus_runs;
  std::vector<SolveResult> minus_runs;
  std::vector<std::string> failures;
  /// Both converged, Theta(u_lambda) < 0 < Theta(v_lambda), both strictly positive.
  bool sign_pattern_ok = false;
};

TwoSolutions solve_two(const Discretization& disc, double lambda, const SolverOptions& opts = {});

/// max ||u||_{q1} / ||u||_{1,p} over the given functions.
double embedding_constant_estimate(const Discretization& disc, const std::vector<DiscreteFunction>& samples);

/// [(p+kappa-1) / (lambda C^p (q1+kappa-1))]^{1/(q1-p)}: lower bound for
/// ||v||_{q1} on N- given the embedding constant C.
double minus_branch_norm_floor(const Discretization& disc, double lambda, double embedding_constant);

}  // namespace dphase
