#pragma once

#include <string>
#include <vector>

#include "dphase/problem.hpp"
#include "dphase/solver.hpp"
#include "dphase/sweep.hpp"

namespace dphase {

/// Everything a run needs: problem, mesh, solver and sweep settings.
///
/// File format: one `key = value` per line, `#` starts a comment outside
/// quotes, values are bare or double-quoted. Keys and defaults:
///
///   p, q, kappa, q1, lambda   required decimals
///   N                         2
///   mu                        "0"
///   alpha, beta, zeta         "1"
///   rect                      "0,0,1,1"   (x0,y0,x1,y1)
///   mesh.nx, mesh.ny          16
///   solver.energy_tol         1e-10
///   solver.stall              25
///   solver.max_iter           20000
///   solver.residual_tol       1e-8
///   solver.floor              1e-10
///   solver.nehari_tol         1e-9
///   solver.seed               1
///   sweep.samples             200
///   sweep.lambda_grid         "0.02,0.05,0.1"
///
/// The sweep shares solver.seed.
struct Config {
  ProblemData problem;
  int nx = 16;
  int ny = 16;
  Rect rect{};
  SolverOptions solver;
  SweepOptions sweep;
};

/// The reference problem on the default 16x16 unit-square mesh.
Config preset_config(double lambda = 0.1);

/// Throws Error{Config} for syntax, type, missing or unknown keys and
/// Error{Parse} for coefficient expressions that do not parse.
Config parse_config(const std::string& text);
/// Throws Error{Io} if the file cannot be read, otherwise as parse_config.
Config load_config(const std::string& path);

/// "a,b,c" into decimals; throws Error{Config} naming `key`.
std::vector<double> parse_decimal_list(const std::string& key, const std::string& text);

}  // namespace dphase
