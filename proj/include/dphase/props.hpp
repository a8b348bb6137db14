#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dphase/discretization.hpp"

namespace dphase {

struct PropertyOutcome {
  std::string suite;
  int checks = 0;
  int failures = 0;
  std::string first_failure;  // empty when everything passed
  bool passed() const { return failures == 0 && checks > 0; }
};

/// Built-in property suites on random functions of `disc`:
///   modular_norm   modular-norm relations with exponents min{p, p_*}, max{q, p_*}
///   norm_sandwich  norm_custom = norm_star, circ/3 <= star <= 3 circ
///   monotonicity   <A(u) - A(v), u - v> >= 0
///   gradient       energy_gradient against central differences
///   fiber          psi' identity, t1 < t_circ < t2, sign of psi'' at the roots
///   projection     Nehari projection lands on the requested branch
/// `samples` random functions per suite (the gradient suite uses samples / 20 + 1).
std::vector<PropertyOutcome> run_property_suites(const Discretization& disc, double lambda, std::uint64_t seed,
                                                 int samples = 100);

}  // namespace dphase
