#pragma once

#include <cstdint>
#include <vector>

#include "bpi/law.hpp"
#include "bpi/model.hpp"
#include "bpi/rng.hpp"

namespace bpi {

/// theta_apply refuses more individual draws than this for a single generation.
inline constexpr std::uint64_t kMaxThetaDraws = std::uint64_t{1} << 20;

struct Trajectory {
  std::vector<std::uint64_t> x_values;  // X_1 .. X_n
  std::uint64_t s_value = 0;            // X_1 + ... + X_n
  std::uint64_t seed = 0;
  std::uint64_t params_digest = 0;
};

/// Sum of k offspring draws from the stream. k = 0 consumes nothing.
std::uint64_t theta_apply(const Law &offspring, std::uint64_t k, Stream &stream);

/// X_m = theta_m o X_{m-1} + eta_m from X_0 = 0. Generation m reads the stream
/// (seed, path, m): the X_{m-1} offspring draws first, then eta_m.
Trajectory simulate_path(const ModelParams &params, int n, std::uint64_t seed, std::uint64_t path = 0);

/// T_n = 1 + Z_1 + ... + Z_n for the process without immigration, Z_0 = 1.
std::uint64_t simulate_total_progeny(const Law &offspring, int generations, std::uint64_t seed,
                                     std::uint64_t path = 0);

}  // namespace bpi
