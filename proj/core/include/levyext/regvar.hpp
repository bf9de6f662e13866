#pragma once

// Regularly varying Levy measures restricted to analytic families, plus the
// regular-variation toolkit used by the simulator and the experiments.

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace levyext {

enum class TailFamily {
  ParetoJump,         // rho((x,inf)) = scale * x^-alpha on [1,inf), no mass below 1
  StableJump,         // density scale * y^-(1+alpha) on (0,inf)
  ShiftedParetoJump,  // rho((x,inf)) = scale * (1+x)^-alpha
};

std::string_view to_string(TailFamily family);
TailFamily tail_family_from_string(std::string_view name);

/// Finite measure on (-inf,-1). Jump sizes |y| are Pareto on (1,inf) with the
/// index chosen so that the gamma-moment per unit mass equals
/// gamma_moment_bound / mass.
struct NegativePart {
  double mass = 0.0;
  double gamma_moment_bound = 0.0;
};

struct TailModel {
  TailFamily family = TailFamily::ParetoJump;
  double alpha = 1.0;
  double scale = 1.0;
  /// Exponent tying the negative part to kernel integrability; must lie in
  /// (0, alpha) and (0, 1].
  double gamma = 0.5;
  std::optional<NegativePart> negative_part;

  static TailModel pareto(double alpha, double scale = 1.0);
  static TailModel stable(double alpha, double p_plus = 1.0);
  static TailModel shifted_pareto(double alpha, double scale = 1.0);

  /// Throws DomainError when alpha/scale/gamma/negative part are inconsistent.
  void validate() const;

  /// rho((1,inf)).
  double rho_one() const;

  /// True when int_{(0,1]} y rho(dy) < inf.
  bool finite_variation() const;
};

/// rho((x, inf)) for x > 0.
double tail_mass(const TailModel& model, double x);

/// inf{ y > 0 : tail_mass(y) <= p }, zero when p >= tail_mass(0+).
double tail_quantile(const TailModel& model, double p);

/// Generalized inverse of an arbitrary nonincreasing tail function by
/// bracketing and bisection to relative tolerance `rel_tol`.
double invert_tail(const std::function<double(double)>& tail, double p,
                   double rel_tol = 1e-12);

/// a(volume) with volume * tail_mass(a) = rho((1,inf)).
double norming_constant(const TailModel& model, double volume);

class NormingSequence {
 public:
  explicit NormingSequence(TailModel model);

  double operator()(double volume) const { return norming_constant(model_, volume); }
  double rho_one() const { return rho_one_; }

  /// volume * tail_mass(a(volume) x) - x^-alpha rho_one.
  double limit_residual(double volume, double x) const;

 private:
  TailModel model_;
  double rho_one_;
};

/// int_{(0, delta]} y rho(dy). Throws UnsupportedError for infinite variation.
double small_jump_mean(const TailModel& model, double delta);

/// Distribution tail of the normalized jump law on (1,inf): one below 1,
/// rho((x,inf)) / rho((1,inf)) above.
std::function<double(double)> normalized_tail(const TailModel& model);

struct KaramataOptions {
  /// Largest multiplicative constant accepted as a certificate.
  double c_budget = 10.0;
  /// Only x0 candidates up to this value are tried.
  double x0_max = 100.0;
  std::vector<double> k_candidates = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
};

struct KaramataCertificate {
  double C = 0.0;
  double K = 0.0;
  double x0 = 0.0;
  bool holds = false;
  // Grid point with the largest tail(x-y) / (tail(x) (K + y_+^beta)).
  double worst_x = 0.0;
  double worst_y = 0.0;
  double required_C = 0.0;
};

/// Grid scan for constants with tail(x-y) <= tail(x) C (K + y_+^beta) for all
/// grid x >= x0 and grid y.
KaramataCertificate karamata_envelope_check(const std::function<double(double)>& tail,
                                            double beta, std::span<const double> x_grid,
                                            std::span<const double> y_grid,
                                            const KaramataOptions& options = {});

/// d_n = a_n^{1 - eps/(2 beta)} with eps = beta - alpha.
std::vector<double> slow_sequence(const TailModel& model, double beta,
                                  std::span<const double> volumes);

/// Geometric grid lo, lo*r, ..., hi with `per_decade` points per decade.
std::vector<double> geometric_grid(double lo, double hi, int per_decade);

}  // namespace levyext
