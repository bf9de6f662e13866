#include "levyext/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levyext/errors.hpp"

namespace levyext {

std::string_view to_string(TailFamily family) {
  switch (family) {
    case TailFamily::ParetoJump:
      return "pareto";
    case TailFamily::StableJump:
      return "stable";
    case TailFamily::ShiftedParetoJump:
      return "shifted_pareto";
  }
  return "unknown";
}

TailFamily tail_family_from_string(std::string_view name) {
  if (name == "pareto") return TailFamily::ParetoJump;
  if (name == "stable") return TailFamily::StableJump;
  if (name == "shifted_pareto") return TailFamily::ShiftedParetoJump;
  throw UnsupportedError("unknown tail family '" + std::string(name) + "'");
}

TailModel TailModel::pareto(double alpha, double scale) {
  TailModel m;
  m.family = TailFamily::ParetoJump;
  m.alpha = alpha;
  m.scale = scale;
  m.gamma = std::min(alpha / 2.0, 1.0);
  return m;
}

TailModel TailModel::stable(double alpha, double p_plus) {
  TailModel m = pareto(alpha, p_plus);
  m.family = TailFamily::StableJump;
  return m;
}

TailModel TailModel::shifted_pareto(double alpha, double scale) {
  TailModel m = pareto(alpha, scale);
  m.family = TailFamily::ShiftedParetoJump;
  return m;
}

void TailModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("model.alpha must be positive");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw DomainError("model.scale must be >= 0");
  if (!(gamma > 0.0) || gamma >= alpha || gamma > 1.0) {
    throw DomainError("model.gamma must lie in (0, alpha) and (0, 1]");
  }
  if (negative_part) {
    if (!(negative_part->mass > 0.0)) throw DomainError("negative_part.mass must be positive");
    // Every jump has |y| > 1, so the gamma-moment exceeds the mass.
    if (!(negative_part->gamma_moment_bound > negative_part->mass)) {
      throw DomainError("negative_part.gamma_moment_bound must exceed negative_part.mass");
    }
  }
}

double TailModel::rho_one() const { return tail_mass(*this, 1.0); }

bool TailModel::finite_variation() const {
  return family != TailFamily::StableJump || alpha < 1.0;
}

double tail_mass(const TailModel& model, double x) {
  if (!(x > 0.0)) throw DomainError("tail_mass requires x > 0");
  switch (model.family) {
    case TailFamily::ParetoJump:
      return x >= 1.0 ? model.scale * std::pow(x, -model.alpha) : model.scale;
    case TailFamily::StableJump:
      return model.scale / model.alpha * std::pow(x, -model.alpha);
    case TailFamily::ShiftedParetoJump:
      return model.scale * std::pow(1.0 + x, -model.alpha);
  }
  return 0.0;
}

double tail_quantile(const TailModel& model, double p) {
  if (!(p > 0.0)) throw DomainError("tail_quantile requires p > 0");
  switch (model.family) {
    case TailFamily::ParetoJump:
      if (p > model.scale) return 0.0;
      return std::pow(model.scale / p, 1.0 / model.alpha);
    case TailFamily::StableJump:
      return std::pow(model.scale / model.alpha / p, 1.0 / model.alpha);
    case TailFamily::ShiftedParetoJump:
      if (p >= model.scale) return 0.0;
      return std::max(0.0, std::pow(model.scale / p, 1.0 / model.alpha) - 1.0);
  }
  return 0.0;
}

double invert_tail(const std::function<double(double)>& tail, double p, double rel_tol) {
  if (!(p > 0.0)) throw DomainError("invert_tail requires p > 0");
  // Bracket: lo satisfies tail(lo) > p (or lo is tiny), hi satisfies tail(hi) <= p.
  double hi = 1.0;
  int guard = 0;
  while (tail(hi) > p) {
    hi *= 2.0;
    if (++guard > 2100) throw DomainError("invert_tail: tail does not drop below p");
  }
  double lo = hi / 2.0;
  guard = 0;
  while (tail(lo) <= p) {
    lo /= 2.0;
    if (lo < std::numeric_limits<double>::min() || ++guard > 2100) return 0.0;
  }
  while ((hi - lo) > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (tail(mid) <= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double norming_constant(const TailModel& model, double volume) {
  if (!(volume >= 1.0)) throw DomainError("norming_constant requires volume >= 1");
  return tail_quantile(model, model.rho_one() / volume);
}

NormingSequence::NormingSequence(TailModel model)
    : model_(std::move(model)), rho_one_(model_.rho_one()) {}

double NormingSequence::limit_residual(double volume, double x) const {
  const double a = (*this)(volume);
  return volume * tail_mass(model_, a * x) - std::pow(x, -model_.alpha) * rho_one_;
}

double small_jump_mean(const TailModel& model, double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw DomainError("small_jump_mean requires delta in (0,1]");
  const double a = model.alpha;
  switch (model.family) {
    case TailFamily::ParetoJump:
      return 0.0;
    case TailFamily::StableJump:
      if (a >= 1.0) {
        throw UnsupportedError("stable jump measure with alpha >= 1 has infinite variation");
      }
      return model.scale * std::pow(delta, 1.0 - a) / (1.0 - a);
    case TailFamily::ShiftedParetoJump: {
      // Integration by parts against rho((y,inf)) = s (1+y)^-a.
      const double s = model.scale;
      const double boundary = -delta * s * std::pow(1.0 + delta, -a);
      const double body = a == 1.0 ? s * std::log1p(delta)
                                   : s * (std::pow(1.0 + delta, 1.0 - a) - 1.0) / (1.0 - a);
      return std::max(0.0, boundary + body);
    }
  }
  return 0.0;
}

std::function<double(double)> normalized_tail(const TailModel& model) {
  const double one = model.rho_one();
  return [model, one](double x) {
    if (x <= 1.0) return 1.0;
    return tail_mass(model, x) / one;
  };
}

KaramataCertificate karamata_envelope_check(const std::function<double(double)>& tail,
                                            double beta, std::span<const double> x_grid,
                                            std::span<const double> y_grid,
                                            const KaramataOptions& options) {
  std::vector<double> xs(x_grid.begin(), x_grid.end());
  std::sort(xs.begin(), xs.end());

  KaramataCertificate best;
  best.required_C = std::numeric_limits<double>::infinity();
  for (double x0 : xs) {
    if (x0 < 1.0) continue;
    if (x0 > options.x0_max) break;
    for (double K : options.k_candidates) {
      double required = 0.0;
      double wx = 0.0;
      double wy = 0.0;
      for (double x : xs) {
        if (x < x0) continue;
        const double base = tail(x);
        for (double y : y_grid) {
          const double yp = std::max(y, 0.0);
          const double ratio = tail(x - y) / (base * (K + std::pow(yp, beta)));
          if (ratio > required) {
            required = ratio;
            wx = x;
            wy = y;
          }
        }
      }
      if (required < best.required_C) {
        best.required_C = required;
        best.C = required;
        best.K = K;
        best.x0 = x0;
        best.worst_x = wx;
        best.worst_y = wy;
      }
    }
    if (best.required_C <= options.c_budget) break;
  }
  best.holds = std::isfinite(best.required_C) && best.required_C <= options.c_budget;
  return best;
}

std::vector<double> slow_sequence(const TailModel& model, double beta,
                                  std::span<const double> volumes) {
  if (!(beta > model.alpha)) throw DomainError("slow_sequence requires beta > alpha");
  const double eps = beta - model.alpha;
  const double exponent = 1.0 - eps / (2.0 * beta);
  std::vector<double> out;
  out.reserve(volumes.size());
  for (double v : volumes) out.push_back(std::pow(norming_constant(model, v), exponent));
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw DomainError("geometric_grid requires 0 < lo <= hi and per_decade >= 1");
  }
  const double step = std::pow(10.0, 1.0 / per_decade);
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = lo * std::pow(step, i);
    if (v > hi * (1.0 + 1e-12)) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace levyext
