#pragma once

// Monte Carlo checks of the supremum tail asymptotics and of the Frechet limit,
// their perturbed variants, and the anti-clustering and ergodic diagnostics.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levyext/geometry.hpp"
#include "levyext/kernels.hpp"
#include "levyext/regvar.hpp"
#include "levyext/simulator.hpp"
#include "levyext/stats.hpp"

namespace levyext {

enum class SupremumMode {
  Field,
  /// Kernel replaced by the point mass: the supremum over C_n is the largest
  /// atom magnitude located in C_n.
  PoissonMaxOracle,
};

struct Tolerances {
  double confidence = 0.95;
  double significance = 0.05;
  double ks = 0.05;
  double oracle_z = 3.0;
  double frechet_abs = 0.01;
};

struct SimulationOptions {
  /// Window margin: expected number of outside atoms contributing more than
  /// neglect_budget anywhere on the target is at most miss_probability.
  double neglect_budget = 1e-6;
  double miss_probability = 1e-4;
  std::optional<double> margin;
  /// Defaults to kernel.length_scale() / 20.
  std::optional<double> grid_step;
  bool light = false;
  std::optional<double> light_delta;
  /// Automatic delta keeps the light bias below this fraction of the
  /// smallest level.
  double light_bias_fraction = 0.01;
  double prune_level = 1e-12;
};

struct AnticlusterOptions {
  std::int64_t L = 2;
  std::int64_t block = 6;  // cubes per side
  double level = 10.0;
  /// Chebyshev index gap for "distant" pairs; default floor(2 t / L) + 2, or
  /// 2 in the Poisson-max oracle.
  std::optional<std::int64_t> distant_gap;
};

struct ErgodicOptions {
  std::vector<std::int64_t> blocks = {2, 4, 8};  // unit cubes per side
  double indicator_level = 0.5;
};

struct ExperimentConfig {
  TailModel model = TailModel::pareto(1.0, 1.0);
  Kernel kernel = Kernel::gaussian(1.0, 1);
  PConvexSet index_set = PConvexSet(ConvexBody::point(std::vector<double>{0.0}));
  std::vector<double> scalings;
  std::vector<double> x_grid;
  std::vector<double> exceedance_targets = {1e-1, 1e-2, 1e-3};
  std::int64_t k = 4;
  std::int64_t L = 1;
  std::uint64_t replicates = 1000;
  std::uint64_t seed = 1;
  SideFieldSpec side_fields;
  SupremumMode mode = SupremumMode::Field;
  Tolerances tolerances;
  SimulationOptions simulation;
  AnticlusterOptions anticluster;
  ErgodicOptions ergodic;

  void validate() const;
};

struct LevelRecord {
  double x = 0.0;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  Interval probability;
  /// Reported estimate and interval on the scale of `target` (tail ratio or
  /// CDF value).
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double target = 0.0;
  bool usable = true;
  bool covered = false;
  /// Finite-n exact law where available (Poisson-max oracle).
  std::optional<double> exact;
  std::optional<bool> exact_covered;
};

struct LadderRecord {
  double scaling = 1.0;
  double volume = 0.0;
  double norming = 0.0;
  std::vector<LevelRecord> levels;
  double ks = 0.0;
  std::optional<double> ks_exact;
  /// Paired perturbed run, when present.
  std::vector<LevelRecord> perturbed_levels;
  std::optional<double> ks_perturbed;
  std::vector<double> paired_difference;
  std::vector<double> paired_half_width;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string tolerance;
  std::string detail;
};

struct TableRow {
  std::string label;
  std::map<std::string, double> values;
};

struct ExperimentResult {
  std::string kind;
  std::uint64_t replicates = 0;
  std::uint64_t seed = 0;
  double target = 0.0;
  double target_error = 0.0;
  std::vector<LevelRecord> levels;
  std::vector<LevelRecord> perturbed_levels;
  std::vector<LadderRecord> ladder;
  std::vector<TableRow> table;
  std::map<std::string, double> metrics;
  std::vector<Verdict> verdicts;
  /// Wall time; kept out of serialized payloads so reruns compare equal.
  double runtime_seconds = 0.0;

  bool passed() const;
  const Verdict* verdict(const std::string& name) const;
};

struct ReplicateSupremum {
  double value = 0.0;
  std::optional<double> perturbed;
  /// Share of the value carried by the largest atom at the argmax.
  double largest_share = 0.0;
};

/// Supremum of one replicate over `target`; with perturb set, also the
/// supremum of X + Y1 + Y2 built on the same X.
ReplicateSupremum replicate_supremum(const ExperimentConfig& cfg, const PConvexSet& target,
                                     std::uint64_t replicate, bool perturb);

/// Window used for `target` under cfg (margin and grid step resolved).
SimulationWindow experiment_window(const ExperimentConfig& cfg, const PConvexSet& target,
                                   std::uint64_t replicate);

/// Levels x with tail_mass(x) * target = p for each exceedance target p.
std::vector<double> tail_levels(const TailModel& model, double target,
                                const std::vector<double>& exceedance_targets);

ExperimentResult tail_ratio_experiment(const ExperimentConfig& cfg, bool perturbed = false);
ExperimentResult frechet_experiment(const ExperimentConfig& cfg);
ExperimentResult perturbed_frechet_experiment(const ExperimentConfig& cfg);
ExperimentResult anticluster_diagnostic(const ExperimentConfig& cfg);
ExperimentResult ergodic_average_check(const ExperimentConfig& cfg);

/// Frechet CDF exp(-x^-alpha rho_one).
double frechet_cdf(const TailModel& model, double x);
/// Exact law of a_n^-1 max atom in a set of volume v: exp(-v tail(a_n x)).
double poisson_max_cdf(const TailModel& model, double volume, double norming, double x);

}  // namespace levyext
