#include <gtest/gtest.h>

#include <cmath>

#include "bpi/asymptotics.hpp"
#include "bpi/exact.hpp"
#include "bpi/numeric.hpp"
#include "bpi/process.hpp"

using namespace bpi;

namespace {

const Law kBern = parse_law("bernoulli(q=0.5)");

}  // namespace

TEST(ThetaApply, Examples) {
  Stream s(1, 0, 1);
  EXPECT_EQ(theta_apply(kBern, 0, s), 0u);
  EXPECT_EQ(s.draws_consumed(), 0u);
  EXPECT_EQ(theta_apply(parse_law("point(2)"), 5, s), 10u);
  Stream big(2, 0, 1);
  const double v = static_cast<double>(theta_apply(kBern, 1000000, big));
  EXPECT_LE(std::abs(v - 5e5), 4 * std::sqrt(1e6 * 0.25));
}

TEST(ThetaApply, RefusesHugeGenerations) {
  Stream s(1, 0, 1);
  EXPECT_THROW(theta_apply(parse_law("zpareto(w=0.3,kappa=2)"), kMaxThetaDraws + 1, s), DomainError);
  EXPECT_THROW(theta_apply(parse_law("finite(0:0.5,2:0.5)"), kMaxThetaDraws + 1, s), DomainError);
}

TEST(ThetaApply, BernoulliGenerationsHaveNoSizeLimit) {
  Stream s(5, 0, 1);
  const double k = 1e9;
  const double v = static_cast<double>(theta_apply(kBern, static_cast<std::uint64_t>(k), s));
  EXPECT_LE(std::abs(v - 0.5 * k), 4 * std::sqrt(0.25 * k));
}

TEST(ThetaApply, SaturatesInsteadOfWrapping) {
  Stream s(1, 0, 1);
  EXPECT_THROW(theta_apply(parse_law("point(18446744073709551615)"), 2, s), SaturationError);
}

TEST(SimulatePath, DeterministicExamples) {
  const auto pure = simulate_path(make_model(parse_law("point(0)"), parse_law("point(1)"), ModelTag::A), 3, 1);
  EXPECT_EQ(pure.x_values, (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(pure.s_value, 3u);
}

TEST(SimulatePath, CriticalRecursionRunsOnRawParameters) {
  // make_model rejects mean-one offspring, but the recursion itself only needs the two laws
  EXPECT_THROW(make_model(parse_law("point(1)"), parse_law("point(1)")), DomainError);
  const ModelParams raw{parse_law("point(1)"), parse_law("point(1)"), ModelTag::A, 1.0, 1.0, INFINITY, 0.0, {}};
  const auto t = simulate_path(raw, 3, 1);
  EXPECT_EQ(t.x_values, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(t.s_value, 6u);
}

TEST(SimulatePath, SumMatchesValuesAndReplays) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  for (std::uint64_t path = 0; path < 50; ++path) {
    const auto t = simulate_path(a, 12, 42, path);
    std::uint64_t sum = 0;
    for (auto x : t.x_values) sum += x;
    EXPECT_EQ(sum, t.s_value);
    EXPECT_EQ(t.params_digest, digest(a));
    const auto again = simulate_path(a, 12, 42, path);
    EXPECT_EQ(again.x_values, t.x_values);
  }
}

TEST(SimulatePath, MonotoneInHorizon) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  for (std::uint64_t path = 0; path < 20; ++path) {
    std::uint64_t prev = 0;
    for (int n = 1; n <= 15; ++n) {
      const auto t = simulate_path(a, n, 8, path);
      EXPECT_GE(t.s_value, prev);
      prev = t.s_value;
    }
  }
}

TEST(SimulatePath, MeanOfS10) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  const int reps = 100000;
  CompensatedSum<> sum, sq;
  for (int r = 0; r < reps; ++r) {
    const double v = static_cast<double>(simulate_path(a, 10, 2024, r).s_value);
    sum += v;
    sq += v * v;
  }
  const double m = sum.value() / reps;
  const double se = std::sqrt((sq.value() / reps - m * m) / reps);
  EXPECT_LE(std::abs(m - mean_total_population(a.alpha, a.beta, 10)), 4 * se);
}

TEST(SimulatePath, EmpiricalLawOfX3MatchesExact) {
  const ModelParams m = make_model(kBern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
  const Pmf exact = population_pmf(m, 3, 64);
  const int reps = 200000;
  std::vector<int> counts(8, 0);
  for (int r = 0; r < reps; ++r) ++counts[std::min<std::uint64_t>(7, simulate_path(m, 3, 77, r).x_values.back())];
  for (int k = 0; k < 7; ++k) {
    const double p = exact[k];
    if (p == 0.0) {
      EXPECT_EQ(counts[k], 0);
      continue;
    }
    EXPECT_NEAR(counts[k] / double(reps), p, 4 * std::sqrt(p * (1 - p) / reps)) << "k=" << k;
  }
}

TEST(SampledProgeny, Examples) {
  EXPECT_EQ(simulate_total_progeny(parse_law("point(0)"), 10, 1), 1u);

  const Law f = parse_law("finite(0:0.6,1:0.2,2:0.2)");
  const int reps = 100000;
  std::vector<double> c(4, 0.0);
  for (int r = 0; r < reps; ++r) ++c[std::min<std::uint64_t>(3, simulate_total_progeny(f, 1, 5, r))];
  EXPECT_EQ(c[0], 0.0);
  const double expected[] = {0.0, 0.6, 0.2, 0.2};
  double chi2 = 0.0;
  for (int k = 1; k <= 3; ++k) chi2 += std::pow(c[k] - reps * expected[k], 2) / (reps * expected[k]);
  EXPECT_LT(chi2, 9.21);  // 1% point of chi-square with 2 degrees of freedom

  const int many = 1000000;
  CompensatedSum<> sum, sq;
  for (int r = 0; r < many; ++r) {
    const double t = static_cast<double>(simulate_total_progeny(kBern, 60, 9, r));
    sum += t;
    sq += t * t;
  }
  const double m = sum.value() / many;
  EXPECT_LE(std::abs(m - 2.0), 4 * std::sqrt((sq.value() / many - m * m) / many));
}
