#pragma once

#include <string>

#include "dphase/discretization.hpp"
#include "dphase/solver.hpp"
#include "dphase/sweep.hpp"

namespace dphase {

/// "%.17g", round-trip exact and locale independent for finite values.
std::string format_real(double v);

/// Columns t,psi,dpsi,ddpsi,eta,eta_tilde on `points` log-spaced t in
/// [t_min, t_max]. eta_tilde is empty when a = 0 or d = 0. Throws
/// Error{InvalidArgument} unless 0 < t_min < t_max and points >= 2.
std::string fiber_csv(const FiberTerms& ft, double lambda, double t_min, double t_max, int points);

/// Columns node,x,y,value.
std::string solution_csv(const Mesh& mesh, const DiscreteFunction& u);

/// JSON report for solve_two; `u_file`/`v_file` name the solution CSVs.
std::string solve_json(const Discretization& disc, const TwoSolutions& two, const std::string& u_file,
                       const std::string& v_file);

std::string sweep_json(const SweepReport& rep);
/// One row per sample direction.
std::string sweep_samples_csv(const SweepReport& rep);

/// Throws Error{Io} on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dphase
