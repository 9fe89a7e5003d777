#include "bpi/model.hpp"

#include <cmath>
#include <limits>

#include "bpi/numeric.hpp"

namespace bpi {

std::string to_string(ModelTag tag) { return tag == ModelTag::A ? "A" : "B"; }

ModelTag parse_model_tag(const std::string &text) {
  if (text == "A") return ModelTag::A;
  if (text == "B") return ModelTag::B;
  throw std::invalid_argument("model tag must be A or B, got '" + text + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lim P(a > x) / P(b > x) for two regularly varying laws of the same index.
double tail_ratio_limit(const TailShape &a, const TailShape &b) {
  if (a.kappa != b.kappa) return a.kappa > b.kappa ? 0.0 : kInf;
  if (a.log_power != b.log_power) return a.log_power < b.log_power ? 0.0 : kInf;
  return a.scale / b.scale;
}

}  // namespace

ModelParams make_model(Law offspring, Law immigration, std::optional<ModelTag> tag,
                       std::optional<double> p) {
  const double alpha = mean(offspring);
  const double beta = mean(immigration);
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw DomainError("offspring mean must lie in [0, 1), got " + format_double(alpha));
  if (!(tail(immigration, 0.0) > 0.0)) throw DomainError("immigration must satisfy P(eta = 0) < 1");

  const auto xi_shape = tail_shape(offspring);
  const auto eta_shape = tail_shape(immigration);

  if (!tag) {
    if (eta_shape && (!xi_shape || xi_shape->kappa > eta_shape->kappa))
      tag = ModelTag::A;
    else if (xi_shape)
      tag = ModelTag::B;
    else
      tag = ModelTag::A;
  }

  ModelParams m{std::move(offspring), std::move(immigration), *tag, alpha, beta, kInf, 0.0, std::nullopt};

  if (*tag == ModelTag::A) {
    if (p && *p != 0.0) throw DomainError("model A has no tail-comparability constant");
    if (eta_shape) {
      m.kappa = eta_shape->kappa;
      if (xi_shape) {
        if (!(xi_shape->kappa > m.kappa) && m.kappa >= 1.0)
          throw DomainError("model A needs E xi^(kappa+delta) finite: offspring tail too heavy");
        m.delta_moment = 0.5 * (xi_shape->kappa - m.kappa);
      } else {
        m.delta_moment = 1.0;
      }
    }
    return m;
  }

  if (!xi_shape) throw DomainError("model B requires a regularly varying offspring law");
  m.kappa = xi_shape->kappa;
  if (!(m.kappa > 1.0)) throw DomainError("model B requires offspring tail index above 1");
  if (!std::isfinite(beta)) throw DomainError("model B requires finite immigration mean");
  if (!eta_shape) {
    m.p = 0.0;
    m.delta_moment = 1.0;
  } else {
    const double ratio = tail_ratio_limit(*eta_shape, *xi_shape);
    if (std::isinf(ratio)) throw DomainError("model B: immigration tail heavier than offspring tail");
    m.p = ratio;
    if (ratio == 0.0 && eta_shape->kappa > m.kappa) m.delta_moment = 0.5 * (eta_shape->kappa - m.kappa);
  }
  if (p) {
    if (!(*p >= 0.0)) throw DomainError("p must be nonnegative");
    m.p = *p;
  }
  return m;
}

std::uint64_t digest(const ModelParams &params) {
  const std::string canon =
      to_string(params.offspring) + "|" + to_string(params.immigration) + "|" + to_string(params.tag) +
      "|" + format_double(params.p);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace bpi
