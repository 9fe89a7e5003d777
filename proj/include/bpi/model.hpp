#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bpi/law.hpp"

namespace bpi {

/// A: heavy immigration drives the tail. B: heavy offspring drives the tail.
enum class ModelTag { A, B };

std::string to_string(ModelTag tag);
ModelTag parse_model_tag(const std::string &text);

/// Offspring law xi, immigration law eta and the scalars derived from them.
struct ModelParams {
  Law offspring;
  Law immigration;
  ModelTag tag;
  double alpha;  // E xi
  double beta;   // E eta
  double kappa;  // tail index of the driver; +inf when the driver is light
  double p;      // lim P(eta > x) / P(xi > x) in model B, 0 in model A
  std::optional<double> delta_moment;  // moment margin kappa + delta, when it applies

  const Law &driver() const { return tag == ModelTag::A ? immigration : offspring; }
  bool driver_heavy() const { return is_heavy(driver()); }
};

/// Validates the pair of laws and derives alpha, beta, kappa, p. The tag is inferred when
/// absent. p may be overridden for model B; it is otherwise read off the tail shapes.
ModelParams make_model(Law offspring, Law immigration, std::optional<ModelTag> tag = std::nullopt,
                       std::optional<double> p = std::nullopt);

/// FNV-1a over the canonical law strings and tag.
std::uint64_t digest(const ModelParams &params);

}  // namespace bpi
