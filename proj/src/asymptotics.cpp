#include "bpi/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "bpi/numeric.hpp"

namespace bpi {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void require_finite_kappa(const ModelParams &params) {
  if (!std::isfinite(params.kappa))
    throw DomainError("the tail driver is light; no regular-variation constant applies");
}

// ((1 - alpha^i) / (1 - alpha))^kappa, the tail weight of T_i relative to its root.
double geometric_power(double alpha, double kappa, long i) {
  const double partial = -std::expm1(static_cast<double>(i) * std::log(alpha)) / (1.0 - alpha);
  return std::pow(partial, kappa);
}

double progeny_constant(double alpha, double kappa, long n) {
  CompensatedSum<> acc;
  double a_i = 1.0;
  for (long i = 0; i < n; ++i) {
    acc += a_i * geometric_power(alpha, kappa, n - i);
    a_i *= alpha;
  }
  return acc.value();
}

}  // namespace

std::string to_string(ConstantTag tag) {
  switch (tag) {
    case ConstantTag::GenerationTail: return "generation_tail";
    case ConstantTag::ProgenyTail: return "progeny_tail";
    case ConstantTag::TotalProgenyTail: return "total_progeny_tail";
    case ConstantTag::StationaryA: return "stationary_a";
    case ConstantTag::StationaryB: return "stationary_b";
    case ConstantTag::FixedHorizonA: return "fixed_horizon_a";
    case ConstantTag::FixedHorizonB: return "fixed_horizon_b";
    case ConstantTag::LargeDeviationA: return "large_deviation_a";
    case ConstantTag::LargeDeviationB: return "large_deviation_b";
    case ConstantTag::CompoundHeavyCount: return "compound_heavy_count";
    case ConstantTag::CompoundHeavySummand: return "compound_heavy_summand";
    case ConstantTag::CompoundComparable: return "compound_comparable";
    case ConstantTag::ResidualLimitA: return "residual_limit_a";
    case ConstantTag::ResidualLimitB: return "residual_limit_b";
  }
  return "unknown";
}

AsymptoticConstant const_underlying(double alpha, double kappa, UnderlyingKind kind, long n) {
  require_alpha(alpha);
  if (!(kappa > 1.0) || !std::isfinite(kappa))
    throw DomainError("offspring tail constants need a finite kappa > 1");
  if (kind != UnderlyingKind::TotalProgeny && n < 1)
    throw DomainError("generation index must be at least 1");

  switch (kind) {
    case UnderlyingKind::Generation: {
      const double nd = static_cast<double>(n);
      double value;
      if (std::abs(kappa - 1.0) < 1e-8) {
        value = nd * std::pow(alpha, nd - 1.0);
      } else {
        // alpha^n - alpha^(kappa n) over alpha - alpha^kappa, factored to avoid cancellation
        const double la = std::log(alpha);
        const double num = std::pow(alpha, nd) * -std::expm1((kappa - 1.0) * nd * la);
        const double den = alpha * -std::expm1((kappa - 1.0) * la);
        value = num / den;
      }
      return {value, ConstantTag::GenerationTail,
              "P(Z_n > x) ~ (a^n - a^(k n)) / (a - a^k) P(xi > x)"};
    }
    case UnderlyingKind::Progeny:
      return {progeny_constant(alpha, kappa, n), ConstantTag::ProgenyTail,
              "P(T_n > x) ~ sum_{i<n} a^i ((1 - a^(n-i)) / (1 - a))^k P(xi > x)"};
    case UnderlyingKind::TotalProgeny:
      return {std::pow(1.0 - alpha, -(kappa + 1.0)), ConstantTag::TotalProgenyTail,
              "P(T > x) ~ (1 - a)^-(k+1) P(xi > x)"};
  }
  throw DomainError("unknown kind");
}

AsymptoticConstant const_stationary(const ModelParams &params) {
  require_finite_kappa(params);
  const double damp = -std::expm1(params.kappa * std::log(params.alpha));
  if (params.tag == ModelTag::A)
    return {1.0 / damp, ConstantTag::StationaryA, "P(X > x) ~ P(eta > x) / (1 - a^k)"};
  return {(params.beta / (1.0 - params.alpha) + params.p) / damp, ConstantTag::StationaryB,
          "P(X > x) ~ (b / (1 - a) + p) P(xi > x) / (1 - a^k)"};
}

AsymptoticConstant const_fixed_n(const ModelParams &params, long n) {
  if (n < 1) throw DomainError("n must be at least 1");
  require_finite_kappa(params);
  const double a = params.alpha;
  const double k = params.kappa;
  CompensatedSum<> direct;
  for (long i = 1; i <= n; ++i) direct += geometric_power(a, k, i);
  if (params.tag == ModelTag::A)
    return {direct.value(), ConstantTag::FixedHorizonA,
            "P(S_n > x) ~ sum_{i=1..n} ((1 - a^i) / (1 - a))^k P(eta > x)"};

  // sum_{i=1..n} TN(i-1), with TN(i) = sum_{j<i} a^j g(i - j) updated as TN(i+1) = a TN(i) + g(i+1)
  CompensatedSum<> lines;
  double tn = 0.0;
  for (long i = 1; i <= n; ++i) {
    lines += tn;
    tn = a * tn + geometric_power(a, k, i);
  }
  return {params.beta * lines.value() + params.p * direct.value(), ConstantTag::FixedHorizonB,
          "P(S_n > x) ~ [b sum_{i=1..n} sum_{m<i-1} a^m ((1 - a^(i-1-m)) / (1 - a))^k"
          " + p sum_{i=1..n} ((1 - a^i) / (1 - a))^k] P(xi > x)"};
}

AsymptoticConstant const_ld(const ModelParams &params) {
  require_finite_kappa(params);
  const double a = params.alpha;
  const double k = params.kappa;
  if (params.tag == ModelTag::A)
    return {std::pow(1.0 - a, -k), ConstantTag::LargeDeviationA,
            "P(S_n - d_n > x) ~ n P(eta > x) / (1 - a)^k uniformly in x >= x_n"};
  return {(params.beta + params.p * (1.0 - a)) * std::pow(1.0 - a, -(k + 1.0)),
          ConstantTag::LargeDeviationB,
          "P(S_n - E S_n > x) ~ n (b + p (1 - a)) P(xi > x) / (1 - a)^(k+1) uniformly in x >= x_n"};
}

AsymptoticConstant const_residual_limit(const ModelParams &params) {
  require_finite_kappa(params);
  const double a = params.alpha;
  const double k = params.kappa;
  const double ak = std::pow(a, k);
  const double base = std::pow(1.0 - a, k) * -std::expm1(k * std::log(a));
  if (params.tag == ModelTag::A)
    return {ak / base, ConstantTag::ResidualLimitA,
            "P(S^inf > x) ~ a^k / ((1 - a)^k (1 - a^k)) P(eta > x)"};
  const double value = params.beta * a * std::pow(1.0 - a, -(k + 2.0)) +
                       (params.beta / (1.0 - a) + params.p * ak) / base;
  return {value, ConstantTag::ResidualLimitB,
          "P(S^inf > x) ~ [b a / (1 - a)^(k+2) + (b / (1 - a) + p a^k) / ((1 - a)^k (1 - a^k))]"
          " P(xi > x)"};
}

AsymptoticConstant compound_tail_constant(CompoundRegime regime, double summand_mean,
                                          double count_mean, double kappa, double c) {
  switch (regime) {
    case CompoundRegime::HeavyCount:
      if (!(summand_mean >= 0.0) || !std::isfinite(summand_mean) || !(kappa > 0.0))
        throw DomainError("heavy-count compound needs a finite summand mean and kappa > 0");
      return {std::pow(summand_mean, kappa), ConstantTag::CompoundHeavyCount,
              "P(sum_{i<=N} W_i > x) ~ (E W)^k P(N > x)"};
    case CompoundRegime::HeavySummand:
      if (!(count_mean >= 0.0) || !std::isfinite(count_mean))
        throw DomainError("heavy-summand compound needs a finite count mean");
      return {count_mean, ConstantTag::CompoundHeavySummand,
              "P(sum_{i<=N} W_i > x) ~ E N P(W > x)"};
    case CompoundRegime::Comparable:
      if (!std::isfinite(count_mean) || !std::isfinite(summand_mean) || !(c >= 0.0))
        throw DomainError("comparable compound needs finite means and c >= 0");
      return {count_mean + c * std::pow(summand_mean, kappa), ConstantTag::CompoundComparable,
              "P(sum_{i<=N} W_i > x) ~ (E N + c (E W)^k) P(W > x) when P(N > x) ~ c P(W > x)"};
  }
  throw DomainError("unknown regime");
}

double mean_population(double alpha, double beta, long n) {
  return beta * -std::expm1(static_cast<double>(n) * std::log(alpha)) / (1.0 - alpha);
}

double mean_total_population(double alpha, double beta, long n) {
  const double head = -std::expm1(static_cast<double>(n) * std::log(alpha));
  return beta / (1.0 - alpha) * (static_cast<double>(n) - alpha * head / (1.0 - alpha));
}

double mean_completed_lines(double alpha, double beta, long n) {
  return static_cast<double>(n) * beta / (1.0 - alpha);
}

double mean_residual_progeny(double alpha, double beta, long n) {
  const double head = -std::expm1(static_cast<double>(n) * std::log(alpha));
  return beta * alpha * head / ((1.0 - alpha) * (1.0 - alpha));
}

CenteringSpec CenteringSpec::for_kappa(double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  return {kappa, kappa <= 1.0 ? CenteringRule::Zero : CenteringRule::Mean};
}

double centering(const ModelParams &params, long n) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (CenteringSpec::for_kappa(params.kappa).rule == CenteringRule::Zero) return 0.0;
  return mean_total_population(params.alpha, params.beta, n);
}

ThresholdSpec ThresholdSpec::for_kappa(double kappa, double delta_or_a) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be finite and positive");
  if (kappa <= 2.0) {
    if (!(delta_or_a > 0.0)) throw DomainError("threshold exponent margin delta must be positive");
    return {kappa, delta_or_a, ThresholdRegime::Power};
  }
  if (!(delta_or_a > kappa - 2.0)) throw DomainError("threshold factor a must exceed kappa - 2");
  return {kappa, delta_or_a, ThresholdRegime::SqrtLog};
}

double threshold(const ThresholdSpec &spec, long n) {
  const ThresholdSpec checked = ThresholdSpec::for_kappa(spec.kappa, spec.delta_or_a);
  if (checked.regime != spec.regime) throw DomainError("threshold regime inconsistent with kappa");
  const double nd = static_cast<double>(n);
  if (spec.regime == ThresholdRegime::Power) {
    if (n < 1) throw DomainError("n must be at least 1");
    return std::pow(nd, spec.delta_or_a + 1.0 / spec.kappa);
  }
  if (n < 2) throw DomainError("sqrt-log threshold needs n >= 2");
  return std::sqrt(spec.delta_or_a * nd * std::log(nd));
}

IidReference iid_ld_reference(double kappa, double p_pos, double q_neg, double delta_or_a) {
  if (!(p_pos >= 0.0) || !(q_neg >= 0.0) || std::abs(p_pos + q_neg - 1.0) > 1e-12)
    throw DomainError("tail balance weights must be nonnegative and sum to 1");
  return {p_pos, q_neg, CenteringSpec::for_kappa(kappa), ThresholdSpec::for_kappa(kappa, delta_or_a)};
}

}  // namespace bpi
