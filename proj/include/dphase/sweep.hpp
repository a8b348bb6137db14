#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dphase/discretization.hpp"
#include "dphase/fibering.hpp"
#include "dphase/solver.hpp"

namespace dphase {

/// Sample directions 0, 1, 2 are the ones, ramp and bump starts; later
/// indices draw nodal values uniform on [0, 1) from stream `index` of `seed`.
/// Every direction is normalized to ||u|| = 1.
inline constexpr std::uint64_t kDeterministicDirections = 3;
DiscreteFunction sample_direction(const Discretization& disc, std::uint64_t seed, std::uint64_t index);

/// Per-direction fiber data collected by the sweeps.
struct DirectionSample {
  std::uint64_t index = 0;
  FiberTerms terms;
  bool admitted = false;          // a > 0 and d > 0
  double t_tilde_circ = 0.0;
  double eta_tilde_max = 0.0;
  double lambda_tilde = 0.0;      // eta_tilde_max / e
  double t_circ = 0.0;
  double eta_circ = 0.0;
  double lambda_two_root = 0.0;   // eta(t_circ) / e: two fiber roots below this lambda
};

DirectionSample inspect_direction(const Discretization& disc, const DiscreteFunction& u, std::uint64_t index);

struct LambdaTildeEstimate {
  /// min over admitted samples of eta_tilde(t_tilde_circ) / e; an upper bound
  /// for the uniform threshold over the sample set only. 0 if nothing admitted.
  double value = 0.0;
  int admitted = 0;
  int skipped = 0;  // samples with a = 0 or d = 0
  /// Running minimum after each sample.
  std::vector<double> running_min;
  std::vector<DirectionSample> samples;
};

/// Throws Error{InvalidArgument} if n_samples < 1.
LambdaTildeEstimate estimate_lambda_tilde(const Discretization& disc, int n_samples, std::uint64_t seed);

enum class NzeroStatus {
  NoTangency,      // two-root directions exist, none tangent
  TangencyFound,   // at least one direction has |eta(t_circ) - lambda e| within tolerance
  NoTwoRoot,       // lambda above eta(t_circ)/e for every sampled direction
};
std::string_view to_string(NzeroStatus s);

struct NzeroEvidence {
  double lambda = 0.0;
  NzeroStatus status = NzeroStatus::NoTangency;
  /// Sample indices whose fiber is tangent at lambda; empty = no N0 point found.
  std::vector<std::uint64_t> tangent;
  int two_root = 0;
  int no_root = 0;
  int skipped = 0;
};

/// Tangency test over the seeded sample directions. Throws Error{InvalidArgument}
/// for lambda <= 0 or n_samples < 1.
NzeroEvidence check_nzero_empty(const Discretization& disc, double lambda, int n_samples, std::uint64_t seed);
/// Same test over explicit directions (indices are positions in `directions`).
NzeroEvidence check_nzero_empty(const Discretization& disc, double lambda,
                                const std::vector<DiscreteFunction>& directions);

struct LambdaStarProbe {
  double lambda = 0.0;
  bool determined = false;  // at least one Minus run converged
  bool positive = false;    // determined and every converged Minus energy > 0
  double min_energy = 0.0;  // smallest converged Minus energy
  std::string note;
};

struct LambdaStarEstimate {
  double value = 0.0;  // 0 when no grid point is positive
  bool determined = false;
  std::optional<double> undetermined_at;
  std::vector<LambdaStarProbe> probes;  // grid points then bisection midpoints
};

/// Largest grid lambda whose Minus runs all converge with positive energy,
/// refined by three bisection steps toward the first non-positive grid point.
/// Stops at the first lambda where no Minus run converges. Throws
/// Error{InvalidArgument} for an empty, non-positive or non-ascending grid.
LambdaStarEstimate estimate_lambda_star(const Discretization& disc, const std::vector<double>& grid,
                                        const SolverOptions& opts = {});

/// ||u||_{1,p}^p / ||u||_{p^*}^p; throws Error{InvalidArgument} for u = 0.
double sobolev_quotient(const Discretization& disc, const DiscreteFunction& u);

struct SobolevEstimate {
  double value = 0.0;        // upper bound for the discrete constant
  double sample_min = 0.0;   // before polishing
  int polish_steps = 0;      // accepted descent steps
  std::vector<double> running_min;
};

inline constexpr int kPolishStarts = 4;

/// Minimum of the quotient over the default starts and n_samples sample
/// directions, then projected gradient descent from the kPolishStarts best.
SobolevEstimate estimate_sobolev_constant(const Discretization& disc, int n_samples, std::uint64_t seed,
                                          int polish_iterations = 200);

struct SweepOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  std::vector<double> lambda_grid{0.02, 0.05, 0.1};
};

struct SweepReport {
  double lambda_tilde_est = 0.0;
  int lambda_tilde_skipped = 0;
  std::vector<NzeroEvidence> lambda_hat_evidence;
  LambdaStarEstimate lambda_star;
  double lambda_star_est = 0.0;
  SobolevEstimate sobolev;
  double sobolev_S_est = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  /// lambda_star_est <= lambda_tilde_est; false with a diagnostic otherwise.
  bool ordering_ok = true;
  std::string ordering_note;
  std::vector<DirectionSample> per_sample;
};

/// Full sweep. Tangency evidence is collected at 0.1, 0.5 and 1 times the
/// lambda_tilde estimate and at every grid point.
SweepReport run_sweep(const Discretization& disc, const SweepOptions& sweep, const SolverOptions& solver = {});

}  // namespace dphase
