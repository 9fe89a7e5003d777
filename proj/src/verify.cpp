#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bpi/asymptotics.hpp"
#include "bpi/experiment.hpp"
#include "bpi/numeric.hpp"
#include "bpi/process.hpp"

namespace bpi {

namespace {

class Suite {
 public:
  Suite(std::string name, std::vector<CheckResult> &out, std::ostream *progress)
      : name_(std::move(name)), out_(out), progress_(progress) {}

  void check(const std::string &label, bool pass, const std::string &detail = "") {
    out_.push_back({name_, label, pass, detail});
    if (progress_) *progress_ << (pass ? "  pass " : "  FAIL ") << name_ << '/' << label
                              << (detail.empty() ? "" : "  (" + detail + ")") << '\n';
  }

  void close(const std::string &label, double actual, double expected, double tol, bool relative = false) {
    const double err = std::abs(actual - expected) / (relative ? std::abs(expected) : 1.0);
    this->check(label, err <= tol,
          "got " + format_double(actual) + ", want " + format_double(expected) + " +- " + format_double(tol) +
              (relative ? " rel" : ""));
  }

  template <typename F>
  void guard(const std::string &label, F body) {
    try {
      body();
    } catch (const std::exception &e) {
      this->check(label, false, std::string("threw: ") + e.what());
    }
  }

  template <typename E, typename F>
  void throws(const std::string &label, F body) {
    try {
      body();
      this->check(label, false, "no exception");
    } catch (const E &) {
      this->check(label, true);
    } catch (const std::exception &e) {
      this->check(label, false, std::string("wrong exception: ") + e.what());
    }
  }

 private:
  std::string name_;
  std::vector<CheckResult> &out_;
  std::ostream *progress_;
};

bool nonincreasing(const std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

std::string join(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

void regvar_suite(Suite &s) {
  const Law p2 = parse_law("pareto(kappa=2)");
  s.close("tail pareto(2) at 3", tail(p2, 3.0), 0.0625, 1e-15);
  s.check("tail point(5)", tail(parse_law("point(5)"), 5.0) == 0.0 && tail(parse_law("point(5)"), 4.9) == 1.0);
  s.close("tail zpareto at 0", tail(parse_law("zpareto(w=0.3,kappa=2)"), 0.0), 0.3, 1e-15);
  s.throws<DomainError>("tail rejects negative x", [&] { tail(p2, -1.0); });
  s.close("mean bernoulli", mean(parse_law("bernoulli(q=0.5)")), 0.5, 0.0);
  s.check("mean pareto(0.8) infinite", std::isinf(mean(parse_law("pareto(kappa=0.8)"))));
  s.close("mean zpareto(0.3,2)", mean(parse_law("zpareto(w=0.3,kappa=2)")), 0.3 * std::numbers::pi * std::numbers::pi / 6,
          1e-9);
  s.check("sample pareto(2)", sample(p2, 0.25) == 2 && sample(p2, 0.81) == 1 && sample(p2, 0.04) == 5);
  s.throws<DomainError>("sample rejects u outside (0,1)", [&] { sample(p2, 1.0); });
  const Law pt2 = parse_law("point(2)");
  s.check("truncated moment point(2)", truncated_moment(pt2, 3, 1) == 0.0 && truncated_moment(pt2, 3, 2) == 8.0);

  std::vector<double> karamata;
  for (double x : {256.0, 4096.0, 65536.0})
    karamata.push_back(std::abs(truncated_moment(p2, 3, x) / (x * x * x * tail(p2, x)) - 2.0));
  s.check("karamata ratio approaches 2", nonincreasing(karamata) && karamata.back() < 0.01, join(karamata));

  const auto grid = log_spaced_pairs(10, 1e5, 12);
  s.check("potter pareto(2) passes", potter_check(p2, 2.0, 0.5, 10, grid).pass);
  s.check("potter identity pair", potter_check(p2, 1.0001, 0.1, 10, {{50.0, 50.0}}).pass);
  const auto lp = potter_check(parse_law("logpareto(kappa=2,gamma=1)"), 1.01, 0.01, 10, grid);
  s.check("potter logpareto tight bound fails", !lp.pass,
          "worst ratio " + format_double(lp.worst_ratio) + " at (" + format_double(lp.worst_x) + ", " +
              format_double(lp.worst_y) + ")");

  s.close("log+ moment point(1)", log_plus_moment(parse_law("point(1)")), 0.0, 0.0);
  s.close("log+ moment point(3)", log_plus_moment(parse_law("point(3)")), std::log(3.0), 1e-15);
  // partial sum to 2^20 plus the integral bound on the remainder
  s.close("log+ moment pareto(1)", log_plus_moment(parse_law("pareto(kappa=1)")), 0.78853057, 1e-6);

  for (const char *spec : {"pareto(kappa=1.5)", "logpareto(kappa=2,gamma=1)", "zpareto(w=0.3,kappa=2)", "geom(q=0.4)",
                           "poisson(lambda=0.7)", "finite(0:0.6,1:0.2,2:0.2)"}) {
    const Law law = parse_law(spec);
    double worst = 0.0;
    for (std::uint64_t n : {10ull, 1000ull, 100000ull}) {
      CompensatedSum<> acc;
      for (std::uint64_t k = 0; k <= n; ++k) acc += pmf(law, k);
      worst = std::max(worst, std::abs(acc.value() + tail(law, static_cast<double>(n)) - 1.0));
    }
    s.check(std::string("mass conservation ") + spec, worst <= 1e-12, "worst " + format_double(worst));
  }

  for (const char *spec : {"pareto(kappa=1.5)", "pareto(kappa=3)", "zpareto(w=0.3,kappa=2)"}) {
    const Law law = parse_law(spec);
    const double x = 1e6;
    const double est = -std::log(tail(law, x)) / std::log(x);
    s.check(std::string("tail index recovery ") + spec, std::abs(est - *tail_index(law)) <= 0.1, format_double(est));
  }
  {
    // the logarithmic factor only fades slowly; require the estimate to keep improving
    const Law law = parse_law("logpareto(kappa=2,gamma=1)");
    std::vector<double> err;
    for (double x : {1e4, 1e8, 1e12, 1e16}) err.push_back(std::abs(-std::log(tail(law, x)) / std::log(x) - 2.0));
    s.check("tail index recovery logpareto trend", nonincreasing(err), join(err));
  }

  Stream stream(7, 0, 1);
  const int draws = 1000000;
  std::vector<int> counts(11, 0);
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = sample(p2, stream.uniform());
    for (int j = 0; j <= 10; ++j)
      if (static_cast<double>(v) > std::ldexp(1.0, j)) ++counts[j];
  }
  double worst_z = 0.0;
  for (int j = 0; j <= 10; ++j) {
    const double t = tail(p2, std::ldexp(1.0, j));
    worst_z = std::max(worst_z, std::abs(counts[j] / double(draws) - t) / std::sqrt(t * (1 - t) / draws));
  }
  s.check("sampler survival within 4 binomial SE", worst_z < 4.0, "max z " + format_double(worst_z));
}

void process_suite(Suite &s) {
  const Law bern = parse_law("bernoulli(q=0.5)");
  Stream st(1, 0, 1);
  s.check("theta_apply k=0 consumes nothing", theta_apply(bern, 0, st) == 0 && st.draws_consumed() == 0);
  s.check("theta_apply point(2) k=5", theta_apply(parse_law("point(2)"), 5, st) == 10);
  Stream big(3, 0, 1);
  const double v = static_cast<double>(theta_apply(bern, 1000000, big));
  s.check("theta_apply bernoulli concentration", std::abs(v - 5e5) <= 4 * std::sqrt(1e6 * 0.25), format_double(v));
  s.throws<DomainError>("theta_apply refuses mis-scaled generations",
                        [&] { theta_apply(parse_law("zpareto(w=0.3,kappa=2)"), kMaxThetaDraws + 1, big); });

  const auto pure = simulate_path(make_model(parse_law("point(0)"), parse_law("point(1)"), ModelTag::A), 3, 1);
  s.check("pure immigration path", pure.x_values == std::vector<std::uint64_t>{1, 1, 1} && pure.s_value == 3);
  s.throws<DomainError>("point(1) offspring is not subcritical",
                        [&] { make_model(parse_law("point(1)"), parse_law("point(1)")); });

  const ModelParams a = make_model(bern, parse_law("pareto(kappa=2)"));
  const auto t1 = simulate_path(a, 10, 99, 5);
  const auto t2 = simulate_path(a, 10, 99, 5);
  s.check("path determinism", t1.x_values == t2.x_values && t1.s_value == t2.s_value);
  bool monotone = true;
  std::uint64_t prev = 0;
  for (int n = 1; n <= 12; ++n) {
    const auto t = simulate_path(a, n, 11, 3);
    monotone = monotone && t.s_value >= prev;
    prev = t.s_value;
  }
  s.check("monotone coupling in n", monotone);

  {
    const int reps = 100000;
    CompensatedSum<> sum, sq;
    for (int r = 0; r < reps; ++r) {
      const double sv = static_cast<double>(simulate_path(a, 10, 2024, r).s_value);
      sum += sv;
      sq += sv * sv;
    }
    const double m = sum.value() / reps;
    const double se = std::sqrt((sq.value() / reps - m * m) / reps);
    const double es = mean_total_population(a.alpha, a.beta, 10);
    s.check("mean of S_10 near closed form", std::abs(m - es) <= 4 * se,
            "mean " + format_double(m) + " vs " + format_double(es) + ", se " + format_double(se));
  }
  s.check("total progeny with no offspring", simulate_total_progeny(parse_law("point(0)"), 5, 1) == 1);
  {
    const Law f = parse_law("finite(0:0.6,1:0.2,2:0.2)");
    const int reps = 100000;
    std::vector<double> c(4, 0.0);
    for (int r = 0; r < reps; ++r) ++c[std::min<std::uint64_t>(3, simulate_total_progeny(f, 1, 5, r))];
    const double expected[] = {0.0, 0.6, 0.2, 0.2};
    double chi2 = 0.0;
    for (int k = 1; k <= 3; ++k) chi2 += std::pow(c[k] - reps * expected[k], 2) / (reps * expected[k]);
    s.check("one-generation progeny chi-square", c[0] == 0 && chi2 < 9.21, "chi2 " + format_double(chi2));
  }
  {
    const int reps = 1000000;
    CompensatedSum<> sum, sq;
    for (int r = 0; r < reps; ++r) {
      const double t = static_cast<double>(simulate_total_progeny(bern, 60, 77, r));
      sum += t;
      sq += t * t;
    }
    const double m = sum.value() / reps;
    const double se = std::sqrt((sq.value() / reps - m * m) / reps);
    s.check("mean total progeny is 1/(1-alpha)", std::abs(m - 2.0) <= 4 * se, format_double(m));
  }
  {
    const ModelParams small = make_model(bern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
    const Pmf exact = population_pmf(small, 3, 64);
    const int reps = 200000;
    std::vector<double> c(8, 0.0);
    for (int r = 0; r < reps; ++r) {
      const auto t = simulate_path(small, 3, 31, r);
      ++c[std::min<std::uint64_t>(7, t.x_values.back())];
    }
    double worst = 0.0;
    for (int k = 0; k < 7; ++k) {
      const double p = exact[k];
      if (p <= 0.0) continue;
      worst = std::max(worst, std::abs(c[k] / reps - p) / std::sqrt(p * (1 - p) / reps));
    }
    s.check("empirical X_3 matches exact law", worst < 4.0, "max z " + format_double(worst));
  }
}

struct FixtureEntry {
  std::string kind, offspring, immigration;
  int n;
  long cutoff;
  std::string file;
};

std::vector<FixtureEntry> read_manifest(const std::filesystem::path &dir) {
  std::ifstream in(dir / "manifest.csv");
  if (!in) throw std::runtime_error("missing fixture manifest in " + dir.string());
  std::vector<FixtureEntry> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ';')) f.push_back(item);
    if (f.size() != 6) throw std::runtime_error("bad manifest line: " + line);
    out.push_back({f[0], f[1], f[2], std::stoi(f[3]), std::stol(f[4]), f[5]});
  }
  return out;
}

void exact_suite(Suite &s, const std::string &fixtures_dir) {
  {
    const Pmf a = Pmf::from_table({{0, 0.5}, {1, 0.5}}, 8);
    const Pmf c = convolve(a, a);
    s.check("convolve coin flips", c[0] == 0.25 && c[1] == 0.5 && c[2] == 0.25);
    const Pmf b = Pmf::from_table({{0, 0.6}, {2, 0.4}}, 8);
    s.check("convolve with point(0) is identity", max_abs_difference(convolve(b, Pmf::point(0, 8)), b) == 0.0);
    const Pmf bb = convolve(b, b);
    s.check("convolve hand expansion",
            std::abs(bb[0] - 0.36) < 1e-15 && std::abs(bb[2] - 0.48) < 1e-15 && std::abs(bb[4] - 0.16) < 1e-15);
    const Pmf m = compound(a, b);
    s.check("compound mixture", std::abs(m[0] - 0.8) < 1e-15 && std::abs(m[2] - 0.2) < 1e-15);
    s.check("compound identity count", max_abs_difference(compound(Pmf::point(1, 8), b), b) < 1e-15);
    const Pmf bin = compound(Pmf::point(3, 8), a);
    s.check("compound binomial", std::abs(bin[0] - 0.125) < 1e-15 && std::abs(bin[1] - 0.375) < 1e-15 &&
                                     std::abs(bin[2] - 0.375) < 1e-15 && std::abs(bin[3] - 0.125) < 1e-15);
    const Pmf s3 = Pmf::from_law(parse_law("finite(0:0.2,1:0.3,3:0.5)"), 64);
    double worst = 0.0;
    Pmf power = Pmf::point(0, 64);
    for (std::uint64_t k = 1; k <= 8; ++k) {
      power = convolve(power, s3);
      worst = std::max(worst, max_abs_difference(compound(Pmf::point(k, 64), s3), power));
    }
    s.check("compound of point(k) equals k-fold convolution", worst <= 1e-12, format_double(worst));
    const Pmf t = Pmf::point(3, 8);
    const Interval i = tail_of(t, 2);
    s.check("tail_of point(3)", i.lo == 1.0 && i.hi == 1.0);
    const Interval j = tail_of(Pmf::from_table({{0, 0.25}, {1, 0.5}, {2, 0.25}}, 8), 0.5);
    s.check("tail_of three atoms", j.lo == 0.75 && j.hi == 0.75);
  }
  {
    const Law f = parse_law("finite(0:0.6,1:0.2,2:0.2)");
    s.close("Z_2 extinction", generation_size_pmf(f, 2, 64)[0], 0.792, 1e-14);
    const Pmf z3 = generation_size_pmf(parse_law("bernoulli(q=0.5)"), 3, 64);
    s.check("Z_3 bernoulli", std::abs(z3[1] - 0.125) < 1e-15 && std::abs(z3[0] - 0.875) < 1e-15);
    const Pmf t1 = progeny_pmf(f, 1, 64);
    s.check("T_1 = 1 + xi", std::abs(t1[1] - 0.6) < 1e-15 && std::abs(t1[2] - 0.2) < 1e-15 &&
                                std::abs(t1[3] - 0.2) < 1e-15);
    const Pmf t2 = progeny_pmf(f, 2, 64);
    s.check("T_2 small atoms", std::abs(t2[1] - 0.6) < 1e-15 && std::abs(t2[2] - 0.12) < 1e-15);
    const Pmf t = total_progeny_pmf(f, 64);
    s.check("T small atoms", std::abs(t[1] - 0.6) < 1e-12 && std::abs(t[2] - 0.12) < 1e-12);
    s.check("T without offspring", max_abs_difference(total_progeny_pmf(parse_law("point(0)"), 16),
                                                      Pmf::point(1, 16)) == 0.0);
    s.close("mean of T is 1/(1-alpha)", total_progeny_pmf(parse_law("bernoulli(q=0.5)"), 256).mean_lower(), 2.0,
            1e-9);
  }
  {
    const Law bern = parse_law("bernoulli(q=0.5)");
    const ModelParams light = make_model(bern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
    s.check("S_1 is the immigration law",
            max_abs_difference(total_population_pmf(light, 1, 64), Pmf::from_law(light.immigration, 64)) < 1e-15);
    const ModelParams det = make_model(parse_law("point(0)"), parse_law("point(1)"), ModelTag::A);
    s.check("S_4 deterministic", max_abs_difference(total_population_pmf(det, 4, 16), Pmf::point(4, 16)) < 1e-15);
    double worst = 0.0;
    const auto seq = total_population_sequence(light, {1, 2, 3, 4, 5, 6, 7, 8}, 256);
    for (int n = 1; n <= 8; ++n)
      worst = std::max(worst, std::abs(seq[n - 1].mean_lower() / mean_total_population(0.5, 0.5, n) - 1.0));
    s.check("mean of S_n matches closed form", worst <= 1e-8, "worst rel " + format_double(worst));
    const ModelParams none = make_model(parse_law("point(0)"), parse_law("pareto(kappa=2)"), ModelTag::A);
    s.check("stationary law without offspring is eta",
            max_abs_difference(stationary_population_pmf(none, 512), Pmf::from_law(none.immigration, 512)) < 1e-15);
    const ModelParams one = make_model(bern, parse_law("point(1)"), ModelTag::A);
    s.close("stationary mean beta/(1-alpha)", stationary_population_pmf(one, 256).mean_lower(), 2.0, 1e-9);
    s.check("residual progeny without offspring",
            max_abs_difference(residual_progeny_limit_pmf(none, 256), Pmf::point(0, 256)) < 1e-15);
    s.close("residual progeny mean", residual_progeny_limit_pmf(one, 1024).mean_lower(), 0.5 / 0.25, 1e-8);
  }
  {
    // truncated moments of T_n increase to those of T
    const Law off = parse_law("poisson(lambda=0.5)");
    const auto seq = progeny_sequence(off, 12, 512);
    const Pmf t = total_progeny_pmf(off, 512);
    bool ok = true;
    for (double h : {1.5, 2.0, 3.0}) {
      for (std::size_t i = 1; i < seq.size(); ++i)
        ok = ok && truncated_moment(seq[i], h) >= truncated_moment(seq[i - 1], h) - 1e-12;
      ok = ok && truncated_moment(seq.back(), h) <= truncated_moment(t, h) + 1e-9;
    }
    s.check("progeny moments increase to the total", ok);
  }
  {
    const ModelParams a = make_model(parse_law("bernoulli(q=0.5)"), parse_law("pareto(kappa=2)"));
    bool ok = true;
    std::string detail;
    for (double eps : {0.1, 0.2}) {
      const auto b = sandwich_bounds(a, 4, eps, {8, 16, 32, 64, 128}, 4096);
      for (const auto &r : b) {
        ok = ok && r.lower <= r.exact.hi + 1e-12 && r.exact.lo <= r.upper + 1e-12;
        detail = format_double(r.lower) + " <= " + format_double(r.exact.lo) + " <= " + format_double(r.upper);
      }
    }
    s.check("sandwich bounds hold", ok, detail);
  }

  const std::filesystem::path dir(fixtures_dir);
  s.guard("fixtures", [&] {
    for (const auto &e : read_manifest(dir)) {
      std::ifstream in(dir / e.file);
      if (!in) throw std::runtime_error("missing fixture " + e.file);
      const Pmf ref = read_csv(in);
      Pmf got = Pmf::point(0, 1);
      if (e.kind == "total_population") {
        const ModelParams p = make_model(parse_law(e.offspring), parse_law(e.immigration), ModelTag::A);
        got = total_population_pmf(p, e.n, e.cutoff);
      } else if (e.kind == "total_progeny") {
        got = total_progeny_pmf(parse_law(e.offspring), e.cutoff, {1e-15, 10000});
      } else {
        throw std::runtime_error("unknown fixture kind " + e.kind);
      }
      // masses at k = 0 for progeny are zero on both sides; compare the whole window
      const double diff = max_abs_difference(got, ref);
      s.check("fixture " + e.file, diff <= 1e-10, "max diff " + format_double(diff));
    }
  });
}

void asymptotics_suite(Suite &s) {
  s.close("ZN n=1", const_underlying(0.5, 2, UnderlyingKind::Generation, 1).value, 1.0, 1e-15);
  s.close("ZN n=2", const_underlying(0.5, 2, UnderlyingKind::Generation, 2).value, 0.75, 1e-15);
  s.close("TN n=2", const_underlying(0.5, 2, UnderlyingKind::Progeny, 2).value, 2.75, 1e-15);
  s.close("TTOTAL", const_underlying(0.5, 2, UnderlyingKind::TotalProgeny).value, 8.0, 1e-14);
  s.throws<DomainError>("underlying constants need kappa > 1",
                        [] { const_underlying(0.5, 1.0, UnderlyingKind::TotalProgeny); });
  {
    const double a = 0.5, n = 5;
    const double near = const_underlying(a, 1 + 1e-9, UnderlyingKind::Generation, 5).value;
    const double far = const_underlying(a, 1 + 1e-7, UnderlyingKind::Generation, 5).value;
    const double limit = n * std::pow(a, n - 1);
    s.check("ZN continuity at kappa = 1", std::abs(near / limit - 1) < 1e-6 && std::abs(far / limit - 1) < 1e-6,
            format_double(near) + " vs " + format_double(limit));
  }
  const Law bern = parse_law("bernoulli(q=0.5)");
  const ModelParams a = make_model(bern, parse_law("pareto(kappa=2)"));
  const Law zp = parse_law("zpareto(w=0.3,kappa=2)");
  auto model_b = [&](double alpha, double kappa, double p) {
    // a synthetic parameter set; only the scalars enter the constants
    ModelParams m = make_model(zp, parse_law("point(1)"), ModelTag::B);
    m.alpha = alpha;
    m.kappa = kappa;
    m.beta = 1.0;
    m.p = p;
    return m;
  };
  auto model_a = [&](double alpha, double kappa) {
    ModelParams m = a;
    m.alpha = alpha;
    m.kappa = kappa;
    return m;
  };
  s.close("stationary A", const_stationary(a).value, 4.0 / 3.0, 1e-15);
  s.close("stationary B p=0", const_stationary(model_b(0.5, 2, 0)).value, 8.0 / 3.0, 1e-14);
  s.close("stationary B p=1", const_stationary(model_b(0.5, 2, 1)).value, 4.0, 1e-14);
  s.close("fixed n A n=1", const_fixed_n(a, 1).value, 1.0, 0.0);
  s.close("fixed n A n=3", const_fixed_n(a, 3).value, 6.3125, 1e-14);
  s.close("fixed n B n=2", const_fixed_n(model_b(0.5, 2, 0), 2).value, 1.0, 1e-15);
  s.close("fixed n B n=1 equals p", const_fixed_n(model_b(0.5, 2, 0.3), 1).value, 0.3, 0.0);
  s.close("ld A", const_ld(a).value, 4.0, 1e-15);
  s.close("ld B p=0", const_ld(model_b(0.5, 2, 0)).value, 8.0, 1e-14);
  s.close("ld B p=0.5", const_ld(model_b(0.5, 2, 0.5)).value, 10.0, 1e-14);
  {
    ModelParams unit = a;
    unit.beta = 1.0;
    s.close("centering alpha=0.5 beta=1 n=2", centering(unit, 2), 2.5, 1e-14);
    ModelParams heavy = make_model(bern, parse_law("pareto(kappa=0.8)"));
    s.check("centering zero for kappa <= 1", centering(heavy, 7) == 0.0);
  }
  s.close("threshold power", threshold(ThresholdSpec::for_kappa(2, 0.1), 100), std::pow(100.0, 0.6), 1e-12);
  s.close("threshold sqrt-log", threshold(ThresholdSpec::for_kappa(3, 1.5), 100), std::sqrt(150 * std::log(100.0)),
          1e-12);
  s.throws<DomainError>("threshold a <= kappa - 2", [] { ThresholdSpec::for_kappa(3, 0.5); });
  s.close("compound heavy count", compound_tail_constant(CompoundRegime::HeavyCount, 0.5, 0, 2).value, 0.25, 0);
  s.close("compound heavy summand", compound_tail_constant(CompoundRegime::HeavySummand, 0, 2, 2).value, 2.0, 0);
  s.close("compound comparable", compound_tail_constant(CompoundRegime::Comparable, 0.5, 2, 2, 1).value, 2.25, 0);
  s.check("compound coherence",
          compound_tail_constant(CompoundRegime::Comparable, 0.5, 2, 2, 0).value ==
                  compound_tail_constant(CompoundRegime::HeavySummand, 0.5, 2, 2).value &&
              compound_tail_constant(CompoundRegime::Comparable, 0.5, 0, 2, 1).value ==
                  compound_tail_constant(CompoundRegime::HeavyCount, 0.5, 0, 2).value);
  s.close("residual limit A", const_residual_limit(a).value, 4.0 / 3.0, 1e-14);
  s.close("residual limit B", const_residual_limit(model_b(0.5, 2, 0)).value, 8.0 + 32.0 / 3.0, 1e-12);
  s.check("residual limit vanishes as alpha -> 0", const_residual_limit(model_a(1e-6, 2)).value < 1e-11);
  {
    const auto r = iid_ld_reference(2, 1, 0, 0.1);
    const auto q = iid_ld_reference(2, 0.5, 0.5, 0.1);
    s.check("iid reference weights", r.p == 1 && r.q == 0 && q.p == 0.5 && q.q == 0.5);
  }
  bool cesaro = true;
  std::string worst;
  for (double alpha : {0.3, 0.5, 0.7})
    for (double kappa : {1.5, 2.0, 3.0}) {
      std::vector<ModelParams> models{model_a(alpha, kappa), model_b(alpha, kappa, 0), model_b(alpha, kappa, 0.5)};
      for (const auto &m : models) {
        const double c = const_ld(m).value;
        double prev_gap = std::numeric_limits<double>::infinity();
        for (long n : {10L, 100L, 1000L, 10000L}) {
          const double gap = std::abs(const_fixed_n(m, n).value / n - c);
          cesaro = cesaro && gap < prev_gap;
          prev_gap = gap;
        }
        cesaro = cesaro && prev_gap < 0.02 * c;
        if (prev_gap >= 0.02 * c) worst = "alpha " + format_double(alpha) + " kappa " + format_double(kappa);
      }
    }
  s.check("cesaro averages approach the uniform constant", cesaro, worst);
}

void montecarlo_suite(Suite &s) {
  const Law bern = parse_law("bernoulli(q=0.5)");
  {
    const ModelParams m = make_model(bern, parse_law("point(1)"), ModelTag::A);
    McOptions o;
    o.budget = 1000;
    const Estimate e = estimate_exceedance(m, 3, 0.0, o);
    s.check("certain event estimates 1", e.value == 1.0);
  }
  const ModelParams small = make_model(bern, parse_law("finite(0:0.5,1:0.5)"), ModelTag::A);
  const double exact = tail_of(total_population_pmf(small, 3, 64), 2.0).lo;
  for (Method method : {Method::Plain, Method::BigJump}) {
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      McOptions o;
      o.budget = 4000;
      o.seed = seed;
      o.method = method;
      const Estimate e = estimate_exceedance(small, 3, 2.0, o);
      covered += e.ci95.contains(exact);
    }
    s.check("coverage " + to_string(method), covered >= 90, std::to_string(covered) + "/100");
  }
  {
    McOptions o;
    o.budget = 200000;
    o.seed = 5;
    const Estimate e = estimate_exceedance(small, 3, 2.0, o);
    s.check("plain estimate near exact", std::abs(e.value - exact) <= 4 * e.std_error,
            format_double(e.value) + " vs " + format_double(exact));
  }
  {
    const ModelParams a = make_model(bern, parse_law("pareto(kappa=2)"));
    McOptions o;
    o.budget = 20000;
    o.seed = 9;
    o.method = Method::BigJump;
    o.workers = 1;
    const Estimate one = estimate_tail(a, 4, 50, o);
    o.workers = 3;
    o.block_size = 1000;
    const Estimate three = estimate_tail(a, 4, 50, o);
    o.workers = 1;
    const Estimate again = estimate_tail(a, 4, 50, o);
    s.check("determinism across worker counts", three.value == again.value && three.std_error == again.std_error);
    McOptions p = o;
    p.method = Method::Plain;
    const Estimate plain = estimate_tail(a, 4, 50, p);
    const double z = std::abs(one.value - plain.value) / std::hypot(one.std_error, plain.std_error);
    s.check("BIGJUMP agrees with PLAIN", z < 4.0, "z " + format_double(z));
  }
  {
    const ModelParams heavy = make_model(bern, parse_law("pareto(kappa=0.8)"));
    const auto rows = lower_deviation_scan(heavy, {4, 8}, ThresholdSpec::for_kappa(0.8, 0.1), {1, 2}, McOptions{});
    s.check("lower deviations vanish for kappa <= 1",
            std::all_of(rows.begin(), rows.end(), [](const ScanRow &r) { return r.estimate == 0.0 && r.ratio == 0.0; }));
  }
}

}  // namespace

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names{"regvar", "process", "exact", "asymptotics", "montecarlo"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string &suite, const std::string &fixtures_dir,
                                   std::ostream *progress) {
  std::vector<CheckResult> out;
  const auto &names = suite_names();
  if (suite != "ALL" && std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  for (const auto &name : names) {
    if (suite != "ALL" && suite != name) continue;
    Suite s(name, out, progress);
    s.guard("suite " + name, [&] {
      if (name == "regvar") regvar_suite(s);
      if (name == "process") process_suite(s);
      if (name == "exact") exact_suite(s, fixtures_dir);
      if (name == "asymptotics") asymptotics_suite(s);
      if (name == "montecarlo") montecarlo_suite(s);
    });
  }
  return out;
}

}  // namespace bpi
