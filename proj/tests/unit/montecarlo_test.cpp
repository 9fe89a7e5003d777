#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bpi/exact.hpp"
#include "bpi/montecarlo.hpp"
#include "bpi/numeric.hpp"

using namespace bpi;

namespace {

const Law kBern = parse_law("bernoulli(q=0.5)");

McOptions opts(std::uint64_t budget, std::uint64_t seed, Method method) {
  McOptions o;
  o.budget = budget;
  o.seed = seed;
  o.method = method;
  return o;
}

double distance(const Interval &i, double v) { return v < i.lo ? i.lo - v : (v > i.hi ? v - i.hi : 0.0); }

void expect_well_formed(const Estimate &e) {
  EXPECT_GE(e.value, 0.0);
  EXPECT_LE(e.value, 1.0);
  EXPECT_GE(e.std_error, 0.0);
  EXPECT_TRUE(e.ci95.contains(e.value));
}

}  // namespace

TEST(EstimateTail, CertainEvent) {
  // eta >= 1 and kappa <= 1, so d_n = 0 and S_n > 0 always
  const ModelParams m = make_model(kBern, parse_law("pareto(kappa=0.8)"));
  for (Method method : {Method::Plain, Method::BigJump}) {
    const Estimate e = estimate_tail(m, 3, 0.0, opts(1000, 1, method));
    EXPECT_DOUBLE_EQ(e.value, 1.0) << to_string(method);
  }
}

TEST(EstimateTail, PlainMatchesExactOnSmallInstance) {
  const ModelParams m = make_model(kBern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
  const double exact = tail_of(total_population_pmf(m, 3, 64), 2.0).lo;
  const Estimate e = estimate_exceedance(m, 3, 2.0, opts(1000000, 3, Method::Plain));
  expect_well_formed(e);
  EXPECT_LE(std::abs(e.value - exact), 4 * e.std_error);
}

TEST(EstimateTail, BigJumpMatchesExactAtLongHorizon) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  const int n = 16;
  const double x = 1e4;
  const Interval exact = tail_of(total_population_pmf(a, n, Index{1} << 15), x + centering(a, n));
  const Estimate e = estimate_tail(a, n, x, opts(100000, 4, Method::BigJump));
  expect_well_formed(e);
  EXPECT_LE(distance(exact, e.value), 4 * e.std_error) << e.value << " vs [" << exact.lo << ", " << exact.hi << "]";
}

TEST(EstimateTail, BigJumpUnbiasedForHeavyOffspring) {
  const ModelParams b =
      make_model(parse_law("zpareto(w=0.3,kappa=2)"), parse_law("finite(0:0.5,1:0.5)"), ModelTag::B, 0.0);
  const double level = 60.0;
  const double exact = tail_of(total_population_pmf(b, 3, 4096), level).lo;
  const Estimate big = estimate_exceedance(b, 3, level, opts(200000, 6, Method::BigJump));
  const Estimate plain = estimate_exceedance(b, 3, level, opts(200000, 6, Method::Plain));
  EXPECT_LE(std::abs(big.value - exact), 4 * big.std_error);
  EXPECT_LE(std::abs(plain.value - exact), 4 * plain.std_error);
}

TEST(EstimateTail, ZeroHitsAreFlagged) {
  const ModelParams m = make_model(kBern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
  const Estimate e = estimate_exceedance(m, 3, 1000.0, opts(2000, 1, Method::Plain));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.hits, 0u);
  EXPECT_TRUE(e.low_confidence);
  EXPECT_EQ(e.ci95.lo, 0.0);
  EXPECT_DOUBLE_EQ(e.ci95.hi, 3.0 / 2000.0);
}

TEST(EstimateTail, DeterministicAcrossWorkers) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  for (Method method : {Method::Plain, Method::BigJump}) {
    McOptions o = opts(30000, 12, method);
    o.block_size = 1000;
    o.workers = 1;
    const Estimate one = estimate_tail(a, 6, 40.0, o);
    o.workers = 4;
    const Estimate four = estimate_tail(a, 6, 40.0, o);
    EXPECT_EQ(one.value, four.value);
    EXPECT_EQ(one.std_error, four.std_error);
    EXPECT_EQ(one.hits, four.hits);
  }
}

TEST(EstimateTail, MethodsAgree) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  const Estimate p = estimate_tail(a, 4, 50.0, opts(100000, 21, Method::Plain));
  const Estimate b = estimate_tail(a, 4, 50.0, opts(100000, 21, Method::BigJump));
  EXPECT_LE(std::abs(p.value - b.value), 4 * std::hypot(p.std_error, b.std_error));
}

TEST(ClopperPearson, KnownValues) {
  const Interval none = clopper_pearson(0, 10);
  EXPECT_EQ(none.lo, 0.0);
  EXPECT_NEAR(none.hi, 0.30850, 1e-4);
  const Interval half = clopper_pearson(5, 10);
  EXPECT_NEAR(half.lo, 0.18709, 1e-4);
  EXPECT_NEAR(half.hi, 0.81291, 1e-4);
  const Interval all = clopper_pearson(10, 10);
  EXPECT_EQ(all.hi, 1.0);
  EXPECT_NEAR(all.lo, 0.69150, 1e-4);
}

TEST(Scan, ReferenceLineAndTrend) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  McOptions o = opts(100000, 7, Method::BigJump);
  o.workers = 2;
  const auto rows = ld_ratio_scan(a, {4, 8, 16}, ThresholdSpec::for_kappa(2, 0.1), {4.0}, o);
  ASSERT_EQ(rows.size(), 3u);
  double prev = INFINITY;
  for (const auto &r : rows) {
    EXPECT_EQ(r.const_ld, 4.0);
    EXPECT_EQ(r.method, "BIGJUMP");
    const double gap = std::abs(r.ratio - 4.0);
    EXPECT_LT(gap, prev) << "n=" << r.n;
    prev = gap;
  }
  // the ratio only reaches the band around 4 at the longest horizon scanned
  EXPECT_GE(rows.back().ratio, 2.5);
  EXPECT_LE(rows.back().ratio, 5.5);

  std::ostringstream csv;
  write_scan_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), kScanCsvHeader);
}

TEST(Scan, SingleHorizonRatioIsOneForHeavyImmigration) {
  const ModelParams m = make_model(kBern, parse_law("pareto(kappa=0.8)"));
  const Pmf s1 = total_population_pmf(m, 1, 4096);
  // mass beyond the window only widens the lower end; the upper end is the exact ratio
  for (double x : {10.0, 100.0, 1000.0}) {
    const Interval r = tail_of(s1, x);
    EXPECT_NEAR(r.hi / tail(m.immigration, x), 1.0, 1e-12);
    EXPECT_LE(r.lo / tail(m.immigration, x), 1.0);
  }
}

TEST(LowerDeviation, VacuousBelowKappaOne) {
  const ModelParams m = make_model(kBern, parse_law("pareto(kappa=0.8)"));
  const auto rows = lower_deviation_scan(m, {4, 8, 16}, ThresholdSpec::for_kappa(0.8, 0.1), {1.0, 2.0}, McOptions{});
  ASSERT_EQ(rows.size(), 6u);
  for (const auto &r : rows) {
    EXPECT_EQ(r.method, "EXACT_ZERO");
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.ratio, 0.0);
  }
}

TEST(LowerDeviation, ExactRatioAtSixteen) {
  const ModelParams a = make_model(kBern, parse_law("pareto(kappa=2)"));
  const int n = 16;
  const double x = threshold(ThresholdSpec::for_kappa(2, 0.1), n);
  const Pmf s = total_population_pmf(a, n, 4096);
  const double ratio = cdf_of(s, std::floor(centering(a, n) - x)).hi / (n * tail(a.immigration, x));
  EXPECT_LT(ratio, 0.5 * const_ld(a).value);

  const auto rows = lower_deviation_scan(a, {n}, ThresholdSpec::for_kappa(2, 0.1), {1.0}, opts(100000, 2, Method::Plain));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LE(std::abs(rows[0].ratio - ratio), 4 * rows[0].std_error / rows[0].theory_denominator);
}
