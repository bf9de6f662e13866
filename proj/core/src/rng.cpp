#include "levyext/rng.hpp"

#include <cmath>

#include "levyext/errors.hpp"

namespace levyext {

Rng::Rng(std::uint64_t seed, std::uint64_t replicate_id, Stream stream) {
  const auto tag = static_cast<std::uint32_t>(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate_id),
                    static_cast<std::uint32_t>(replicate_id >> 32), tag, 0x6c657679u};
  engine_.seed(seq);
}

double Rng::uniform_open_closed() {
  // generate_canonical lies in [0, 1); reflect it.
  return 1.0 - std::generate_canonical<double, 53>(engine_);
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(engine_);
}

double Rng::normal(double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(engine_);
}

double Rng::exponential(double rate) {
  return -std::log(uniform_open_closed()) / rate;
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("poisson mean must be finite");
  if (mean == 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

}  // namespace levyext
