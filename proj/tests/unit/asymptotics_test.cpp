#include <gtest/gtest.h>

#include <cmath>

#include "bpi/asymptotics.hpp"
#include "bpi/numeric.hpp"

using namespace bpi;

namespace {

ModelParams model_a(double alpha, double kappa) {
  ModelParams m = make_model(parse_law("bernoulli(q=0.5)"), parse_law("pareto(kappa=2)"));
  m.alpha = alpha;
  m.kappa = kappa;
  return m;
}

// Only the scalars enter the constants, so the laws are placeholders.
ModelParams model_b(double alpha, double kappa, double beta, double p) {
  ModelParams m = make_model(parse_law("zpareto(w=0.3,kappa=2)"), parse_law("point(1)"), ModelTag::B);
  m.alpha = alpha;
  m.kappa = kappa;
  m.beta = beta;
  m.p = p;
  return m;
}

}  // namespace

TEST(Underlying, Values) {
  EXPECT_DOUBLE_EQ(const_underlying(0.5, 2, UnderlyingKind::Generation, 1).value, 1.0);
  EXPECT_DOUBLE_EQ(const_underlying(0.5, 2, UnderlyingKind::Generation, 2).value, 0.75);
  EXPECT_DOUBLE_EQ(const_underlying(0.5, 2, UnderlyingKind::Progeny, 2).value, 2.75);
  EXPECT_NEAR(const_underlying(0.5, 2, UnderlyingKind::TotalProgeny).value, 8.0, 1e-14);
  EXPECT_THROW(const_underlying(0.5, 0.9, UnderlyingKind::Generation, 2), DomainError);
}

TEST(Underlying, ContinuousAtKappaOne) {
  for (long n : {1L, 2L, 5L, 20L}) {
    const double near = const_underlying(0.5, 1 + 1e-9, UnderlyingKind::Generation, n).value;
    const double limit = n * std::pow(0.5, n - 1);
    EXPECT_NEAR(near / limit, 1.0, 1e-6) << "n=" << n;
  }
}

TEST(Stationary, Values) {
  EXPECT_DOUBLE_EQ(const_stationary(model_a(0.5, 2)).value, 4.0 / 3.0);
  EXPECT_NEAR(const_stationary(model_b(0.5, 2, 1, 0)).value, 8.0 / 3.0, 1e-14);
  EXPECT_NEAR(const_stationary(model_b(0.5, 2, 1, 1)).value, 4.0, 1e-14);
  EXPECT_FALSE(const_stationary(model_a(0.5, 2)).provenance.empty());
}

TEST(FixedHorizon, Values) {
  EXPECT_EQ(const_fixed_n(model_a(0.5, 2), 1).value, 1.0);
  EXPECT_NEAR(const_fixed_n(model_a(0.5, 2), 3).value, 6.3125, 1e-14);
  EXPECT_NEAR(const_fixed_n(model_b(0.5, 2, 1, 0), 2).value, 1.0, 1e-15);
  EXPECT_EQ(const_fixed_n(model_b(0.5, 2, 1, 0.3), 1).value, 0.3);
  // the offspring-driven part scales with the immigration mean
  EXPECT_NEAR(const_fixed_n(model_b(0.5, 2, 0.5, 0), 2).value, 0.5, 1e-15);
}

TEST(LargeDeviation, Values) {
  EXPECT_DOUBLE_EQ(const_ld(model_a(0.5, 2)).value, 4.0);
  EXPECT_NEAR(const_ld(model_b(0.5, 2, 1, 0)).value, 8.0, 1e-14);
  EXPECT_NEAR(const_ld(model_b(0.5, 2, 1, 0.5)).value, 10.0, 1e-14);
}

TEST(LargeDeviation, LightDriverHasNoConstant) {
  const ModelParams light = make_model(parse_law("bernoulli(q=0.5)"), parse_law("point(1)"), ModelTag::A);
  EXPECT_THROW(const_ld(light), DomainError);
}

TEST(Cesaro, AveragesApproachUniformConstant) {
  for (double alpha : {0.3, 0.5, 0.7})
    for (double kappa : {1.5, 2.0, 3.0})
      for (const ModelParams &m : {model_a(alpha, kappa), model_b(alpha, kappa, 1, 0), model_b(alpha, kappa, 1, 0.5)}) {
        const double c = const_ld(m).value;
        double prev = INFINITY;
        for (long n : {10L, 100L, 1000L, 10000L}) {
          const double gap = std::abs(const_fixed_n(m, n).value / n - c);
          EXPECT_LT(gap, prev);
          prev = gap;
        }
        EXPECT_LT(prev, 0.02 * c) << "alpha " << alpha << " kappa " << kappa;
      }
}

TEST(Centering, Values) {
  ModelParams a = model_a(0.5, 2);
  a.beta = 1.0;
  EXPECT_NEAR(centering(a, 2), 2.5, 1e-14);
  for (long n : {10L, 20L, 60L})
    EXPECT_NEAR(centering(a, n) - 2.0 * n, -2.0 * (1.0 - std::pow(0.5, double(n))), 1e-9 * n);
  const ModelParams heavy = make_model(parse_law("bernoulli(q=0.5)"), parse_law("pareto(kappa=0.8)"));
  for (long n : {1L, 5L, 50L}) EXPECT_EQ(centering(heavy, n), 0.0);
  EXPECT_NEAR(mean_completed_lines(0.5, 1, 4) - mean_residual_progeny(0.5, 1, 4), mean_total_population(0.5, 1, 4), 1e-12);
}

TEST(Threshold, Values) {
  EXPECT_NEAR(threshold(ThresholdSpec::for_kappa(2, 0.1), 100), 15.848931924611133, 1e-12);
  EXPECT_NEAR(threshold(ThresholdSpec::for_kappa(3, 1.5), 100), 26.28, 0.01);
  EXPECT_THROW(ThresholdSpec::for_kappa(3, 0.5), DomainError);
  EXPECT_THROW(ThresholdSpec::for_kappa(2, 0.0), DomainError);
}

TEST(CompoundTail, ValuesAndCoherence) {
  EXPECT_EQ(compound_tail_constant(CompoundRegime::HeavyCount, 0.5, 0, 2).value, 0.25);
  EXPECT_EQ(compound_tail_constant(CompoundRegime::HeavySummand, 0, 2, 2).value, 2.0);
  EXPECT_EQ(compound_tail_constant(CompoundRegime::Comparable, 0.5, 2, 2, 1).value, 2.25);
  EXPECT_EQ(compound_tail_constant(CompoundRegime::Comparable, 0.5, 2, 2, 0).value,
            compound_tail_constant(CompoundRegime::HeavySummand, 0.5, 2, 2).value);
  EXPECT_EQ(compound_tail_constant(CompoundRegime::Comparable, 0.5, 0, 2, 1).value,
            compound_tail_constant(CompoundRegime::HeavyCount, 0.5, 0, 2).value);
}

TEST(ResidualLimit, Values) {
  EXPECT_NEAR(const_residual_limit(model_a(0.5, 2)).value, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(const_residual_limit(model_b(0.5, 2, 1, 0)).value, 8.0 + 32.0 / 3.0, 1e-12);
  EXPECT_LT(const_residual_limit(model_a(1e-6, 2)).value, 1e-11);
}

TEST(IidReference, Weights) {
  const auto pos = iid_ld_reference(2.5, 1, 0, 1.0);
  EXPECT_EQ(pos.p, 1.0);
  EXPECT_EQ(pos.q, 0.0);
  EXPECT_EQ(pos.centering.rule, CenteringRule::Mean);
  const auto sym = iid_ld_reference(2, 0.5, 0.5, 0.1);
  EXPECT_EQ(sym.p, 0.5);
  EXPECT_EQ(sym.q, 0.5);
  EXPECT_THROW(iid_ld_reference(2, 0.7, 0.7, 0.1), DomainError);
}
