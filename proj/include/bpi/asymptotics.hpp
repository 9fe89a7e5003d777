#pragma once

#include <string>

#include "bpi/model.hpp"

namespace bpi {

enum class ConstantTag {
  GenerationTail,     // Z_n against xi
  ProgenyTail,        // T_n against xi
  TotalProgenyTail,   // T against xi
  StationaryA,        // X against eta
  StationaryB,        // X against xi
  FixedHorizonA,      // S_n against eta, n fixed
  FixedHorizonB,      // S_n against xi, n fixed
  LargeDeviationA,    // uniform ratio constant, model A
  LargeDeviationB,    // uniform ratio constant, model B
  CompoundHeavyCount,
  CompoundHeavySummand,
  CompoundComparable,
  ResidualLimitA,     // S^(inf) against eta
  ResidualLimitB,     // S^(inf) against xi
};

std::string to_string(ConstantTag tag);

/// A closed-form limit constant together with a description of where it comes from.
struct AsymptoticConstant {
  double value;
  ConstantTag tag;
  std::string provenance;
};

enum class UnderlyingKind { Generation, Progeny, TotalProgeny };

/// Limit of P(. > x) / P(xi > x) for Z_n, T_n or T of the process without immigration.
/// Requires 0 < alpha < 1 and kappa > 1; n >= 1 for the finite-horizon kinds.
AsymptoticConstant const_underlying(double alpha, double kappa, UnderlyingKind kind, long n = 0);

/// Limit of P(X > x) / P(driver > x) for the stationary law.
AsymptoticConstant const_stationary(const ModelParams &params);

/// Limit of P(S_n > x) / P(driver > x) at fixed n.
AsymptoticConstant const_fixed_n(const ModelParams &params, long n);

/// Uniform large-deviation constant of P(S_n - d_n > x) / (n P(driver > x)).
AsymptoticConstant const_ld(const ModelParams &params);

/// Limit of P(S^(inf) > x) / P(driver > x) for the residual progeny of the stationary state.
AsymptoticConstant const_residual_limit(const ModelParams &params);

enum class CompoundRegime { HeavyCount, HeavySummand, Comparable };

/// Tail prefactor of a compound sum sum_{i<=N} W_i: (E W)^kappa for a heavy count,
/// E N for heavy summands, E N + c (E W)^kappa when P(N > x) ~ c P(W > x).
AsymptoticConstant compound_tail_constant(CompoundRegime regime, double summand_mean,
                                          double count_mean, double kappa, double c = 0.0);

/// E X_n = beta (1 - alpha^n) / (1 - alpha).
double mean_population(double alpha, double beta, long n);
/// E S_n = beta / (1 - alpha) * (n - alpha (1 - alpha^n) / (1 - alpha)).
double mean_total_population(double alpha, double beta, long n);
/// E S_{n,1} = n beta / (1 - alpha) and E S_{n,2} = beta alpha (1 - alpha^n) / (1 - alpha)^2.
double mean_completed_lines(double alpha, double beta, long n);
double mean_residual_progeny(double alpha, double beta, long n);

enum class CenteringRule { Zero, Mean };

struct CenteringSpec {
  double kappa;
  CenteringRule rule;

  static CenteringSpec for_kappa(double kappa);
};

/// d_n: 0 when kappa <= 1, E S_n otherwise.
double centering(const ModelParams &params, long n);

enum class ThresholdRegime { Power, SqrtLog };

/// x_n = n^(delta + 1/kappa) for kappa <= 2, sqrt(a n log n) with a > kappa - 2 beyond.
struct ThresholdSpec {
  double kappa;
  double delta_or_a;
  ThresholdRegime regime;

  static ThresholdSpec for_kappa(double kappa, double delta_or_a);
};

double threshold(const ThresholdSpec &spec, long n);

/// Limits for iid regularly varying sums with P(X > x) ~ p L(x)/x^kappa, P(X <= -x) ~ q L(x)/x^kappa.
struct IidReference {
  double p;
  double q;
  CenteringSpec centering;
  ThresholdSpec threshold;
};

IidReference iid_ld_reference(double kappa, double p_pos, double q_neg, double delta_or_a);

}  // namespace bpi
