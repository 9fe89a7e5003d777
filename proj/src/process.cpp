#include "bpi/process.hpp"

#include "bpi/numeric.hpp"

#include <random>

namespace bpi {

std::uint64_t theta_apply(const Law &offspring, std::uint64_t k, Stream &stream) {
  if (k == 0) return 0;
  if (const auto *pm = offspring.as<PointMass>()) return checked_mul(k, pm->k);
  // a Bernoulli generation is one exact binomial draw at any size
  if (const auto *b = offspring.as<Bernoulli>())
    return std::binomial_distribution<std::uint64_t>(k, b->q)(stream);
  if (k > kMaxThetaDraws)
    throw DomainError("theta_apply: " + std::to_string(k) +
                      " individuals in one generation; the experiment is mis-scaled");
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < k; ++i) total = checked_add(total, sample(offspring, stream.uniform()));
  return total;
}

Trajectory simulate_path(const ModelParams &params, int n, std::uint64_t seed, std::uint64_t path) {
  if (n < 1) throw DomainError("simulate_path: n must be positive");
  Trajectory traj;
  traj.seed = seed;
  traj.params_digest = digest(params);
  traj.x_values.reserve(static_cast<std::size_t>(n));
  std::uint64_t x = 0;
  for (int m = 1; m <= n; ++m) {
    Stream stream(seed, path, static_cast<std::uint32_t>(m));
    const std::uint64_t offspring = theta_apply(params.offspring, x, stream);
    x = checked_add(offspring, sample(params.immigration, stream.uniform()));
    traj.x_values.push_back(x);
    traj.s_value = checked_add(traj.s_value, x);
  }
  return traj;
}

std::uint64_t simulate_total_progeny(const Law &offspring, int generations, std::uint64_t seed,
                                     std::uint64_t path) {
  if (generations < 1) throw DomainError("simulate_total_progeny: generations must be positive");
  std::uint64_t z = 1;
  std::uint64_t total = 1;
  for (int g = 1; g <= generations && z > 0; ++g) {
    Stream stream(seed, path, static_cast<std::uint32_t>(g));
    z = theta_apply(offspring, z, stream);
    total = checked_add(total, z);
  }
  return total;
}

}  // namespace bpi
