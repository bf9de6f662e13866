#pragma once

// Finite-window realizations of the moving-average field X = Z + Y and of the
// side fields, their evaluation on grids, and grid suprema.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "levyext/geometry.hpp"
#include "levyext/kernels.hpp"
#include "levyext/regvar.hpp"
#include "levyext/rng.hpp"

namespace levyext {

/// Target set C together with the simulation window bounds(C) (+) [-R, R]^d.
struct SimulationWindow {
  PConvexSet target;
  double margin = 0.0;
  double grid_step = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t replicate_id = 0;

  int dim() const { return target.dim(); }
  Aabb box() const;
  double volume() const;
  void validate() const;
  Rng rng(Stream stream) const { return Rng(seed, replicate_id, stream); }
};

/// Smallest margin R such that the expected number of atoms beyond R whose
/// contribution to the field anywhere on the target exceeds `budget` is at
/// most `miss_probability`. Uses rho((y, inf)) <= c y^-alpha and the
/// far-field Steiner bound for the kernel.
double required_margin(const Kernel& kernel, const PConvexSet& target, const TailModel& model,
                       double budget, double miss_probability);

struct Atom {
  Vec location{};
  double magnitude = 0.0;
};

struct JumpField {
  int dim = 1;
  Kernel kernel = Kernel::gaussian(1.0, 1);
  std::vector<Atom> atoms;
  /// Expected contribution of discarded jumps at any point (light part only).
  double truncation_bias_bound = 0.0;
  /// When set, the field value v is replaced by clamp(v, -clip, clip).
  std::optional<double> clip;

  double total_variation() const;
};

/// Jumps above 1 as a compound Poisson on the window, with the optional
/// negative part appended after the positive atoms.
JumpField simulate_heavy(const SimulationWindow& window, const TailModel& model,
                         const Kernel& kernel);
JumpField simulate_heavy(const SimulationWindow& window, const TailModel& model,
                         const Kernel& kernel, Rng& rng);

/// Same law via the Poisson-arrival series G(Gamma_n) = quantile(Gamma_n/|W|)
/// with uniform locations; magnitudes come out nonincreasing.
JumpField simulate_heavy_series(const SimulationWindow& window, const TailModel& model,
                                const Kernel& kernel, Rng& rng);

/// Jumps in (delta, 1] via the same series started where the heavy part ends.
/// Requires finite variation.
JumpField simulate_series_light(const SimulationWindow& window, const TailModel& model,
                                const Kernel& kernel, double delta, Rng& rng);

/// Largest delta in (0, 1] with |W| small_jump_mean(delta) <= bias_budget.
double light_cutoff(const TailModel& model, double window_volume, double bias_budget);

struct SideFieldSpec {
  enum class Kind { Zero, SmoothedNoise };
  Kind one = Kind::Zero;
  double one_bound = 1.0;  // magnitudes uniform on [-b, b]
  double one_sigma = 1.0;
  Kind two = Kind::Zero;
  double two_spacing = 1.0;
  double two_sd = 0.5;
  double two_sigma = 1.0;
};

struct SideFields {
  JumpField one;
  JumpField two;
};

/// Y1: unit-rate Poisson atoms with uniform magnitudes, Gaussian kernel,
/// clipped to [-1, 1]. Y2: randomly shifted lattice with N(0, sd^2)
/// magnitudes and a Gaussian kernel.
SideFields simulate_side_fields(const SimulationWindow& window, const SideFieldSpec& spec);

/// Sum of fields evaluated with spatial pruning: atoms farther than the radius
/// where the kernel drops below prune_level are skipped.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(std::vector<const JumpField*> fields, double prune_level = 1e-12);

  int dim() const { return dim_; }
  double value(const Vec& v) const;
  /// Upper bound on value() over every point of the box.
  double upper_bound(const Aabb& box) const;
  /// Additive bound on |value - exact finite-atom sum| from pruning.
  double error_bound() const { return error_bound_; }
  /// Sum over fields of (total variation) x (kernel Lipschitz constant); empty
  /// if any kernel is truncated.
  std::optional<double> lipschitz_bound() const;
  /// Largest single-atom contribution of field `index` at v.
  double largest_contribution(const Vec& v, std::size_t index = 0) const;

 private:
  struct Indexed {
    const JumpField* field;
    double radius;
    Aabb bounds;
    double cell;
    std::array<std::int64_t, kMaxDim> cells{};
    std::vector<std::uint32_t> offsets;  // CSR over cells
    std::vector<std::uint32_t> order;
  };
  template <class Fn>
  void for_atoms_near(const Indexed& idx, const Aabb& box, Fn&& fn) const;
  double field_value(const Indexed& idx, const Vec& v) const;

  int dim_ = 1;
  std::vector<Indexed> fields_;
  double error_bound_ = 0.0;
};

std::vector<double> evaluate_field(const FieldEvaluator& evaluator, std::span<const Vec> points);
std::vector<double> evaluate_field(const JumpField& field, std::span<const Vec> points,
                                   double prune_level = 1e-12);

struct GridSpec {
  double step = 0.05;
  /// Nodes within this distance of the target are kept; defaults to step.
  std::optional<double> inclusion_radius;

  double radius() const { return inclusion_radius.value_or(step); }
};

/// Nodes step Z^d within distance radius() of the target. For targets made of
/// points only, the points themselves.
std::vector<Vec> grid_nodes(const PConvexSet& target, const GridSpec& spec);

struct SupremumResult {
  double sup_estimate = 0.0;
  /// Hoelder bound sup + L h sqrt(d)/2 + evaluation error; empty when the
  /// kernel is discontinuous.
  std::optional<double> upper_bound;
  Vec argmax{};
  std::size_t nodes_evaluated = 0;
  double evaluation_error = 0.0;
  bool exact = false;  // target made of points: no discretization
};

/// Maximum over grid_nodes by best-first branch and bound; returns the same
/// maximum and argmax as the exhaustive scan.
SupremumResult grid_supremum(const FieldEvaluator& evaluator, const PConvexSet& target,
                             const GridSpec& spec);
SupremumResult grid_supremum_exhaustive(const FieldEvaluator& evaluator,
                                        const PConvexSet& target, const GridSpec& spec);
/// Single bodies need not contain the origin (used for L-cubes).
SupremumResult grid_supremum(const FieldEvaluator& evaluator, const ConvexBody& target,
                             const GridSpec& spec);

void write_atoms_csv(std::ostream& out, const JumpField& field);
void write_field_csv(std::ostream& out, int dim, std::span<const Vec> points,
                     std::span<const double> values);

}  // namespace levyext
