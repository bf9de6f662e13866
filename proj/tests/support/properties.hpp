#pragma once

// Property checks shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

namespace levyext::testing {

struct PropertyOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// tail_mass(tail_quantile(p)) <= p and tail_mass(y) > p just below the
/// quantile, for every built-in family on a grid of p.
PropertyOutcome quantile_inversion(double tol = 1e-9);

/// Pareto alpha = 1, beta = 2 certificate on the standard grids, and the
/// beta < alpha misuse rejected.
PropertyOutcome karamata_standard_grids();

/// Pointwise kernel monotonicity in the truncation radius.
PropertyOutcome truncation_monotonicity(int samples = 100000);

/// Random points in inner cubes lie in C; random points of C lie in
/// intersecting cubes.
PropertyOutcome sandwich_containment(int samples = 100000);

/// Reruns with equal seeds give bit-identical fields and experiment results,
/// for any worker count.
PropertyOutcome determinism();

/// Atoms dropped by the window margin change the field on the target by
/// more than the neglect budget in at most a handful of replicates.
PropertyOutcome window_margin_sufficiency(int replicates = 200);

std::vector<PropertyOutcome> all_properties();

}  // namespace levyext::testing

namespace levyext::testing {

struct AtomLawOutcome {
  std::vector<double> levels;
  std::vector<double> means;
  std::vector<double> p_values;
  double mean_count = 0.0;
  double mean_count_se = 0.0;
};

/// Counts of atoms above each level over `replicates` heavy-part draws on a
/// window of the given volume (d = 1), tested against Poisson(volume *
/// tail(level)) by chi-square.
AtomLawOutcome atom_count_law(double volume, const std::vector<double>& levels,
                              std::uint64_t replicates, std::uint64_t seed, bool series = false);

}  // namespace levyext::testing
