#pragma once

// Radial kernels f(u) = g(|u|) with optional truncation, and the integrals of
// their powers that appear in tail asymptotics and window sizing.

#include <optional>
#include <string_view>
#include <variant>

#include "levyext/geometry.hpp"

namespace levyext {

/// f(u) = exp(-sigma |u|^2).
struct GaussianKernel {
  double sigma = 1.0;
};

/// f(u) = (1 + |u|)^{-(d + epsilon) / gamma}.
struct PowerKernel {
  double epsilon = 1.0;
  double gamma = 1.0;
};

using KernelFamily = std::variant<GaussianKernel, PowerKernel>;

class Kernel {
 public:
  Kernel(KernelFamily family, int dim, std::optional<double> truncation = std::nullopt);

  static Kernel gaussian(double sigma, int dim, std::optional<double> truncation = std::nullopt);
  static Kernel power(double epsilon, double gamma, int dim,
                      std::optional<double> truncation = std::nullopt);

  const KernelFamily& family() const { return family_; }
  int dim() const { return dim_; }
  std::optional<double> truncation() const { return truncation_; }
  std::string_view family_name() const;

  /// Untruncated radial envelope g(r).
  double envelope(double r) const;
  /// Radial profile including the truncation indicator |u| < t.
  double profile(double r) const {
    if (truncation_ && !(r < *truncation_)) return 0.0;
    return envelope(r);
  }
  double operator()(const Vec& u) const;

  /// Natural length scale: 1/sqrt(sigma) for Gaussian, 1 for power kernels.
  double length_scale() const;

  /// Radius beyond which g(r) <= level.
  double envelope_radius(double level) const;

  /// Global Lipschitz constant (Hoelder index 1) of f; empty when truncation
  /// makes the kernel discontinuous.
  std::optional<double> holder_constant() const;

  /// int_{R^d} g^exponent(|u|) du is finite.
  bool integrable(double exponent) const;

 private:
  KernelFamily family_;
  int dim_;
  std::optional<double> truncation_;
  double power_exponent_ = 0.0;  // (d+eps)/gamma for power kernels
};

double eval(const Kernel& kernel, const Vec& u);

/// sup_{v in B} f(v - u) = profile(dist(u, B)).
double sup_over_set(const Kernel& kernel, const ConvexBody& body, const Vec& u);
double sup_over_set(const Kernel& kernel, const PConvexSet& set, const Vec& u);

/// int_R^inf g^exponent(s) s^{m-1} ds for integer m >= 1 (untruncated g).
double radial_moment(const Kernel& kernel, double exponent, int m, double R);

/// int_{|u| > R} f^exponent(u) du, honouring truncation.
double radial_tail_integral(const Kernel& kernel, double exponent, double R);

/// Smallest R with int_{|u|>R} f^exponent <= budget (zero when the whole
/// integral fits in the budget, capped at the truncation radius).
double tail_radius(const Kernel& kernel, double exponent, double budget);

/// Upper bound on int_{dist(u,B) > R} sup_{v in B} f^alpha(v - u) du from the
/// per-body Steiner expansion.
double far_field_bound(const Kernel& kernel, const PConvexSet& set, double alpha, double R);

struct FunctionalValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// int_{R^d} sup_{v in B} f^alpha(v - u) du. A single body goes through the
/// exact Steiner expansion; unions use alpha_functional_quadrature.
FunctionalValue alpha_functional(const Kernel& kernel, const PConvexSet& set, double alpha,
                                 double tol = 1e-8);

/// Near-field quadrature over bounds(B) (+) [-R, R]^d plus a Steiner-type
/// bound for the far field.
FunctionalValue alpha_functional_quadrature(const Kernel& kernel, const PConvexSet& set,
                                            double alpha, double tol = 1e-8);

/// Exact value for a single convex body via the Steiner expansion
/// |B| + sum_j (d-j) omega_{d-j} V_j int_0^inf g^alpha(s) s^{d-j-1} ds.
double alpha_functional_steiner(const Kernel& kernel, const ConvexBody& body, double alpha);

}  // namespace levyext
