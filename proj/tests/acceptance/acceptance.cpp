// One pass/fail line per acceptance criterion. `--criterion k` runs a single one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "bpi/asymptotics.hpp"
#include "bpi/exact.hpp"
#include "bpi/montecarlo.hpp"
#include "bpi/numeric.hpp"
#include "oracles.hpp"

using namespace bpi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char *title;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt(const Interval &i) { return "[" + fmt(i.lo) + ", " + fmt(i.hi) + "]"; }

bool nonincreasing(const std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

std::string list(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

// Distance from c to a certified interval: the error that the truncated computation can vouch for.
double gap(const Interval &i, double c) { return c < i.lo ? i.lo - c : (c > i.hi ? c - i.hi : 0.0); }

Interval scaled(const Interval &i, double d) { return {i.lo / d, i.hi / d}; }

bool within(const Interval &i, double target, double rel) {
  return std::abs(i.lo / target - 1.0) <= rel && std::abs(i.hi / target - 1.0) <= rel;
}

double max_abs(const Pmf &p, const oracle::Masses &m) {
  double worst = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) worst = std::max(worst, std::abs(p[static_cast<Index>(k)] - m[k]));
  return worst;
}

const Law kBern = parse_law("bernoulli(q=0.5)");

ModelParams model_a() { return make_model(kBern, parse_law("pareto(kappa=2)")); }

Outcome decomposition() {
  const char *offspring[] = {"bernoulli(q=0.5)", "finite(0:0.6,1:0.2,2:0.2)", "finite(0:0.5,1:0.25,2:0.25)",
                             "finite(0:0.7,3:0.3)"};
  const char *immigration[] = {"finite(0:0.5,1:0.5)", "finite(1:0.4,2:0.3,5:0.3)", "point(2)"};
  double worst = 0.0;
  int index = 0;
  for (const char *o : offspring)
    for (const char *im : immigration) {
      const int n = 2 + 2 * (index++ % 3);
      const ModelParams p = make_model(parse_law(o), parse_law(im), ModelTag::A);
      const auto ref = oracle::joint_dp_total_population(p.offspring, p.immigration, n, 64);
      worst = std::max(worst, max_abs(total_population_pmf(p, n, 64), ref));
    }
  return {worst <= 1e-10, std::to_string(index) + " instances, max |diff| " + fmt(worst)};
}

Outcome dwass() {
  double worst = 0.0;
  for (const char *o : {"bernoulli(q=0.5)", "finite(0:0.6,1:0.2,2:0.2)", "poisson(lambda=0.5)", "geom(q=0.6)",
                        "finite(0:0.7,3:0.3)"}) {
    const Law law = parse_law(o);
    worst = std::max(worst, max_abs(total_progeny_pmf(law, 50, {1e-15, 100000}), oracle::dwass_total_progeny(law, 50)));
  }
  return {worst <= 1e-10, "5 laws, k <= 50, max |diff| " + fmt(worst)};
}

Outcome underlying() {
  const Law xi = parse_law("zpareto(w=0.3,kappa=2)");
  const double alpha = mean(xi);
  const Index cutoff = Index{1} << 15;
  struct Case {
    const char *name;
    Pmf pmf;
    double c;
  };
  std::vector<Case> cases{
      {"Z_2", generation_size_pmf(xi, 2, cutoff), const_underlying(alpha, 2, UnderlyingKind::Generation, 2).value},
      {"T_2", progeny_sequence(xi, 2, cutoff).back(), const_underlying(alpha, 2, UnderlyingKind::Progeny, 2).value},
      {"T", total_progeny_pmf(xi, cutoff), const_underlying(alpha, 2, UnderlyingKind::TotalProgeny).value},
  };
  bool pass = true;
  std::string detail = "alpha " + fmt(alpha);
  for (const auto &c : cases) {
    std::vector<double> err;
    Interval last{};
    for (double x : {256.0, 1024.0, 4096.0}) {
      last = scaled(tail_of(c.pmf, x), tail(xi, x));
      err.push_back(gap(last, c.c));
    }
    const bool ok = within(last, c.c, 0.15) && nonincreasing(err);
    pass = pass && ok;
    detail += "; " + std::string(c.name) + " const " + fmt(c.c) + " ratio@2^12 " + fmt(last) + " err " + list(err);
  }
  return {pass, detail};
}

Outcome stationary() {
  const ModelParams a = model_a();
  const Pmf x = stationary_population_pmf(a, Index{1} << 17);
  const double c = const_stationary(a).value;
  std::vector<double> err;
  Interval last{};
  for (double v : {256.0, 1024.0, 4096.0}) {
    last = scaled(tail_of(x, v), tail(a.immigration, v));
    err.push_back(gap(last, c));
  }
  return {within(last, c, 0.10) && nonincreasing(err),
          "ratio@2^12 " + fmt(last) + " vs " + fmt(c) + ", errors " + list(err)};
}

Outcome fixed_n() {
  const ModelParams a = model_a();
  const Pmf s3 = total_population_pmf(a, 3, Index{1} << 17);
  const double ca = const_fixed_n(a, 3).value;
  std::vector<double> err;
  Interval last{};
  for (double v : {256.0, 1024.0, 4096.0}) {
    last = scaled(tail_of(s3, v), tail(a.immigration, v));
    err.push_back(gap(last, ca));
  }
  const bool pass_a = within(last, ca, 0.10) && nonincreasing(err);

  const ModelParams b =
      make_model(parse_law("zpareto(w=0.3,kappa=2)"), parse_law("finite(0:0.5,1:0.5)"), ModelTag::B, 0.0);
  const Pmf s2 = total_population_pmf(b, 2, Index{1} << 15);
  // the required target is 1; the closed-form constant for this immigration law is reported beside it
  const double target_b = 1.0;
  const double cb = const_fixed_n(b, 2).value;
  const Interval rb = scaled(tail_of(s2, 4096.0), tail(b.offspring, 4096.0));
  const bool pass_b = within(rb, target_b, 0.15);
  return {pass_a && pass_b, "A: S_3 ratio@2^12 " + fmt(last) + " vs " + fmt(ca) + ", errors " + list(err) +
                                "; B: S_2 ratio@2^12 " + fmt(rb) + " vs target " + fmt(target_b) +
                                " (closed-form constant " + fmt(cb) + ")"};
}

Outcome ld_trend() {
  const ModelParams a = model_a();
  const std::vector<int> ns{4, 8, 16};
  const auto seq = total_population_sequence(a, ns, Index{1} << 17);
  const double c = const_ld(a).value;
  const ThresholdSpec spec = ThresholdSpec::for_kappa(a.kappa, 0.1);
  std::vector<double> gaps;
  Interval last{};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = 4.0 * threshold(spec, ns[i]);
    last = scaled(tail_of(seq[i], x + centering(a, ns[i])), ns[i] * tail(a.immigration, x));
    gaps.push_back(gap(last, c));
  }
  return {nonincreasing(gaps) && last.lo >= 2.8 && last.hi <= 5.2,
          "ratios at n = 4, 8, 16 give |ratio - " + fmt(c) + "| = " + list(gaps) + ", final " + fmt(last)};
}

Outcome iid_reference() {
  const Law law = parse_law("pareto(kappa=2.5)");
  const Index cutoff = Index{1} << 14;
  const Pmf s4 = convolve_power(Pmf::from_law(law, cutoff), 4);
  const double x = 4096.0;
  const Interval r = scaled(tail_of(s4, x + 4.0 * mean(law)), 4.0 * tail(law, x));
  return {within(r, 1.0, 0.10), "ratio@2^12 " + fmt(r)};
}

Outcome coverage() {
  const ModelParams m = make_model(kBern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
  const double level = 2.0;
  const double exact = tail_of(total_population_pmf(m, 3, 64), level).lo;
  bool pass = true;
  std::string detail = "exact P(S_3 > 2) = " + fmt(exact);
  for (Method method : {Method::Plain, Method::BigJump}) {
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      McOptions o;
      o.budget = 10000;
      o.seed = seed;
      o.method = method;
      covered += estimate_exceedance(m, 3, level, o).ci95.contains(exact);
    }
    pass = pass && covered >= 90;
    detail += "; " + to_string(method) + " " + std::to_string(covered) + "/100";
  }
  return {pass, detail};
}

Outcome efficiency() {
  const ModelParams a = model_a();
  const int n = 4;
  const double x = 4096.0;
  const double exact = tail_of(total_population_pmf(a, n, Index{1} << 14), x + centering(a, n)).hi;
  int wins = 0;
  std::string detail = "exact " + fmt(exact) + ";";
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    McOptions o;
    o.budget = 100000;
    o.seed = seed;
    o.method = Method::Plain;
    const Estimate plain = estimate_tail(a, n, x, o);
    o.method = Method::BigJump;
    const Estimate big = estimate_tail(a, n, x, o);
    wins += big.std_error <= plain.std_error;
    if (seed == 1) detail += " seed 1 stderr PLAIN " + fmt(plain.std_error) + " BIGJUMP " + fmt(big.std_error) + ";";
  }
  return {exact <= 1e-6 && wins >= 9, detail + " BIGJUMP no worse in " + std::to_string(wins) + "/10"};
}

Outcome cesaro() {
  double worst = 0.0;
  std::string where;
  for (double alpha : {0.3, 0.5, 0.7})
    for (double kappa : {1.5, 2.0, 3.0}) {
      ModelParams a = model_a();
      a.alpha = alpha;
      a.kappa = kappa;
      ModelParams b = make_model(parse_law("zpareto(w=0.3,kappa=2)"), parse_law("point(1)"), ModelTag::B, 0.0);
      b.alpha = alpha;
      b.kappa = kappa;
      b.beta = 1.0;
      std::vector<ModelParams> models{a, b, b};
      models[2].p = 0.5;
      for (const auto &m : models) {
        const double c = const_ld(m).value;
        const double rel = std::abs(const_fixed_n(m, 10000).value / 10000.0 - c) / c;
        if (rel > worst) {
          worst = rel;
          where = "alpha " + fmt(alpha) + " kappa " + fmt(kappa);
        }
      }
    }
  return {worst < 0.02, "worst relative gap " + fmt(worst) + " at " + where};
}

Outcome lower_deviations() {
  const ModelParams heavy = make_model(kBern, parse_law("pareto(kappa=0.8)"));
  const auto zero_rows =
      lower_deviation_scan(heavy, {4, 8, 16}, ThresholdSpec::for_kappa(0.8, 0.1), {1.0, 2.0}, McOptions{});
  bool zeros = true;
  for (const auto &r : zero_rows) zeros = zeros && r.estimate == 0.0 && r.ratio == 0.0;

  const ModelParams a = model_a();
  const std::vector<int> ns{4, 8, 16};
  const auto seq = total_population_sequence(a, ns, Index{1} << 17);
  const double c = const_ld(a).value;
  const ThresholdSpec spec = ThresholdSpec::for_kappa(a.kappa, 0.1);
  std::vector<double> ratios;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = threshold(spec, ns[i]);
    const double level = std::floor(centering(a, ns[i]) - x);
    ratios.push_back(cdf_of(seq[i], level).hi / (ns[i] * tail(a.immigration, x)));
  }
  const bool small = ratios.back() < 0.1 * c;
  return {zeros && small && nonincreasing(ratios), std::string("kappa <= 1 rows ") + (zeros ? "all zero" : "NOT zero") +
                                                        "; kappa = 2 ratios at n = 4, 8, 16: " + list(ratios) +
                                                        " (need < " + fmt(0.1 * c) + ", nonincreasing)"};
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<Criterion> all{
      {1, "decomposition equals joint dynamic program", 10, decomposition},
      {2, "total progeny matches the hitting-time identity", 5, dwass},
      {3, "generation, progeny and total progeny tail ratios", 300, underlying},
      {4, "stationary population tail ratio", 120, stationary},
      {5, "fixed-horizon tail ratios", 600, fixed_n},
      {6, "uniform large-deviation ratio trend", 1200, ld_trend},
      {7, "iid reference ratio", 60, iid_reference},
      {8, "Monte Carlo confidence interval coverage", 600, coverage},
      {9, "big-jump sampler efficiency", 300, efficiency},
      {10, "Cesaro averages of fixed-horizon constants", 1, cesaro},
      {11, "lower deviations", 600, lower_deviations},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  int failed = 0;
  for (const auto &c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception &e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s: %s (%s; %.1fs of %.0fs)\n", c.id, c.title, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
