#include "bpi/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "bpi/numeric.hpp"
#include "bpi/process.hpp"
#include "bpi/rng.hpp"

namespace bpi {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kNormalHits = 30;

enum class Event { Above, AtOrBelow };

struct BlockTally {
  std::uint64_t hits = 0;
  double sum = 0.0;     // sum of weighted indicators
  double sum_sq = 0.0;  // sum of their squares
};

struct Simulator {
  const ModelParams &params;
  int n;
  double level;
  Event event;
  Method method;
  double w;
  std::uint64_t seed;
  double pivot;       // tilting threshold u
  double pivot_tail;  // P(driver > u)

  // Weighted indicator of the event along path `path`.
  double run(std::uint64_t path) const {
    if (method == Method::Plain) {
      const Trajectory t = simulate_path(params, n, seed, path);
      return hit(t.s_value) ? 1.0 : 0.0;
    }
    return params.tag == ModelTag::A ? run_immigration_tilt(path) : run_offspring_tilt(path);
  }

  bool hit(std::uint64_t s) const {
    const double sd = static_cast<double>(s);
    return event == Event::Above ? sd > level : sd <= level;
  }

  // One of the n immigration draws is moved above the pivot with probability w.
  double run_immigration_tilt(std::uint64_t path) const {
    Stream control(seed, path, 0);
    const bool tilt = control.uniform() < w;
    const int slot = 1 + static_cast<int>(control.uniform() * n);
    std::uint64_t x = 0, s = 0, above = 0;
    for (int m = 1; m <= n; ++m) {
      Stream stream(seed, path, static_cast<std::uint32_t>(m));
      const std::uint64_t offspring = theta_apply(params.offspring, x, stream);
      const double u = stream.uniform();
      const std::uint64_t eta = (tilt && m == slot) ? sample_above(params.immigration, pivot, u)
                                                    : sample(params.immigration, u);
      if (static_cast<double>(eta) > pivot) ++above;
      x = checked_add(offspring, eta);
      s = checked_add(s, x);
    }
    if (!hit(s)) return 0.0;
    const double proposal = (1.0 - w) + w * static_cast<double>(above) / (n * pivot_tail);
    return 1.0 / proposal;
  }

  // One generation is picked; with probability w one of its offspring draws is moved above the pivot.
  double run_offspring_tilt(std::uint64_t path) const {
    Stream control(seed, path, 0);
    const bool tilt = control.uniform() < w;
    const int gen = 1 + static_cast<int>(control.uniform() * n);
    const double slot_u = control.uniform();
    std::uint64_t x = 0, s = 0;
    CompensatedSum<> ratio_sum;
    for (int m = 1; m <= n; ++m) {
      Stream stream(seed, path, static_cast<std::uint32_t>(m));
      const std::uint64_t k = x;
      if (k > kMaxThetaDraws)
        throw DomainError("offspring tilt: " + std::to_string(k) +
                          " individuals in one generation; the experiment is mis-scaled");
      const std::uint64_t slot = (tilt && m == gen && k > 0)
                                     ? std::min(k - 1, static_cast<std::uint64_t>(slot_u * k))
                                     : std::numeric_limits<std::uint64_t>::max();
      std::uint64_t offspring = 0, above = 0;
      for (std::uint64_t i = 0; i < k; ++i) {
        const double u = stream.uniform();
        const std::uint64_t xi =
            i == slot ? sample_above(params.offspring, pivot, u) : sample(params.offspring, u);
        if (static_cast<double>(xi) > pivot) ++above;
        offspring = checked_add(offspring, xi);
      }
      ratio_sum += k == 0 ? 1.0 : static_cast<double>(above) / (static_cast<double>(k) * pivot_tail);
      x = checked_add(offspring, sample(params.immigration, stream.uniform()));
      s = checked_add(s, x);
    }
    if (!hit(s)) return 0.0;
    const double proposal = (1.0 - w) + w * ratio_sum.value() / n;
    return 1.0 / proposal;
  }
};

BlockTally run_block(const Simulator &sim, std::uint64_t first, std::uint64_t count) {
  BlockTally tally;
  CompensatedSum<> sum, sum_sq;
  for (std::uint64_t p = first; p < first + count; ++p) {
    const double v = sim.run(p);
    if (v > 0.0) {
      ++tally.hits;
      sum += v;
      sum_sq += v * v;
    }
  }
  tally.sum = sum.value();
  tally.sum_sq = sum_sq.value();
  return tally;
}

Estimate run_estimate(const ModelParams &params, int n, double level, Event event, double deviation,
                      const McOptions &options) {
  if (n < 1) throw DomainError("horizon must be at least 1");
  if (options.budget < 1000) throw DomainError("budget must be at least 1000");
  if (!(options.mixture_weight > 0.0 && options.mixture_weight < 1.0))
    throw DomainError("mixture weight must lie in (0, 1)");
  if (options.block_size == 0) throw DomainError("block size must be positive");

  Simulator sim{params, n, level, event, options.method, options.mixture_weight, options.seed, 0.0, 1.0};
  if (options.method == Method::BigJump) {
    if (event != Event::Above) throw DomainError("BIGJUMP estimates upper tails only");
    const double dev = std::max(0.0, deviation);
    sim.pivot = params.tag == ModelTag::A ? dev * (1.0 - params.alpha) / 2.0 : dev / 2.0;
    const Law &driver = params.tag == ModelTag::A ? params.immigration : params.offspring;
    sim.pivot_tail = tail(driver, sim.pivot);
    if (!(sim.pivot_tail > 0.0)) throw DomainError("BIGJUMP pivot lies beyond the driver's support");
  }

  const std::uint64_t blocks = (options.budget + options.block_size - 1) / options.block_size;
  std::vector<BlockTally> tallies(blocks);
  auto work = [&](unsigned worker, unsigned stride) {
    for (std::uint64_t b = worker; b < blocks; b += stride) {
      const std::uint64_t first = b * options.block_size;
      tallies[b] = run_block(sim, first, std::min(options.block_size, options.budget - first));
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned i = 0; i < workers; ++i)
      pool.emplace_back([&, i] {
        try {
          work(i, workers);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    for (auto &t : pool) t.join();
    for (auto &e : errors)
      if (e) std::rethrow_exception(e);
  }

  // merged in block order, so the result does not depend on the worker count
  std::uint64_t hits = 0;
  CompensatedSum<> sum, sum_sq;
  for (const auto &t : tallies) {
    hits += t.hits;
    sum += t.sum;
    sum_sq += t.sum_sq;
  }
  const double b = static_cast<double>(options.budget);
  Estimate est;
  est.budget = options.budget;
  est.seed = options.seed;
  est.method = options.method;
  est.hits = hits;
  est.value = std::clamp(sum.value() / b, 0.0, 1.0);

  if (hits == 0) {
    // nothing observed: report the rule-of-three bound and the binomial spread at that level
    const double upper = 3.0 / b;
    est.value = 0.0;
    est.std_error = std::sqrt(upper * (1.0 - upper) / b);
    est.ci95 = {0.0, upper};
    est.low_confidence = true;
    return est;
  }
  const double var = std::max(0.0, (sum_sq.value() / b - est.value * est.value) * b / (b - 1.0));
  est.std_error = std::sqrt(var / b);
  if (hits >= kNormalHits) {
    est.ci95 = {std::max(0.0, est.value - kZ95 * est.std_error),
                std::min(1.0, est.value + kZ95 * est.std_error)};
  } else {
    // binomial bounds on the hit frequency, scaled by the mean weight of a hit
    const Interval cp = clopper_pearson(hits, options.budget);
    const double scale = est.value * b / static_cast<double>(hits);
    est.ci95 = {cp.lo * scale, std::min(1.0, cp.hi * scale)};
  }
  return est;
}

double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  // P(Bin(n, p) <= k), summed directly; only used for small k
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return k >= n ? 1.0 : 0.0;
  CompensatedSum<> acc;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double nd = static_cast<double>(n);
  for (std::uint64_t j = 0; j <= k && j <= n; ++j) {
    const double jd = static_cast<double>(j);
    acc += std::exp(std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) +
                    jd * lp + (nd - jd) * lq);
  }
  return acc.value();
}

double ld_constant_or_nan(const ModelParams &params) {
  return std::isfinite(params.kappa) ? const_ld(params).value : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string to_string(Method method) { return method == Method::Plain ? "PLAIN" : "BIGJUMP"; }

Method parse_method(const std::string &text) {
  if (text == "PLAIN" || text == "plain") return Method::Plain;
  if (text == "BIGJUMP" || text == "bigjump") return Method::BigJump;
  throw std::invalid_argument("unknown method: " + text);
}

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0 || hits > trials) throw DomainError("invalid binomial counts");
  auto solve = [&](auto above) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
      const double mid = 0.5 * (lo + hi);
      (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  // lower: P(X >= hits | p) = 0.025; upper: P(X <= hits | p) = 0.025
  const double lower = hits == 0 ? 0.0 : solve([&](double p) {
    return 1.0 - binomial_cdf(hits - 1, trials, p) >= 0.025;
  });
  const double upper = hits == trials ? 1.0 : solve([&](double p) {
    return binomial_cdf(hits, trials, p) <= 0.025;
  });
  return {lower, upper};
}

Estimate estimate_exceedance(const ModelParams &params, int n, double level, const McOptions &options) {
  return run_estimate(params, n, level, Event::Above, level - mean_total_population(params.alpha, params.beta, n),
                      options);
}

Estimate estimate_tail(const ModelParams &params, int n, double x, const McOptions &options) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  const double d = n >= 1 ? centering(params, n) : 0.0;
  return run_estimate(params, n, x + d, Event::Above, x, options);
}

Estimate estimate_lower(const ModelParams &params, int n, double level, const McOptions &options) {
  McOptions plain = options;
  plain.method = Method::Plain;
  return run_estimate(params, n, level, Event::AtOrBelow, 0.0, plain);
}

void write_scan_csv(std::ostream &out, const std::vector<ScanRow> &rows) {
  out << kScanCsvHeader << '\n';
  for (const auto &r : rows)
    out << to_string(r.model) << ',' << r.n << ',' << format_double(r.x) << ',' << r.method << ','
        << format_double(r.estimate) << ',' << format_double(r.std_error) << ','
        << format_double(r.ci.lo) << ',' << format_double(r.ci.hi) << ','
        << format_double(r.theory_denominator) << ',' << format_double(r.ratio) << ','
        << format_double(r.const_ld) << '\n';
}

std::vector<ScanRow> ld_ratio_scan(const ModelParams &params, const std::vector<int> &ns,
                                   const ThresholdSpec &spec, const std::vector<double> &multipliers,
                                   const McOptions &options) {
  const double c = ld_constant_or_nan(params);
  std::vector<ScanRow> rows;
  std::uint64_t row_index = 0;
  for (int n : ns) {
    const double xn = threshold(spec, n);
    for (double mult : multipliers) {
      if (mult < 1.0) throw DomainError("scan points must lie at or above the threshold x_n");
      const double x = mult * xn;
      McOptions opt = options;
      opt.seed = derive_seed(options.seed, row_index++);
      const Estimate e = estimate_tail(params, n, x, opt);
      const double denom = n * tail(params.driver(), x);
      rows.push_back({params.tag, n, x, to_string(e.method), e.value, e.std_error, e.ci95, denom,
                      e.value / denom, c});
    }
  }
  return rows;
}

std::vector<ScanRow> lower_deviation_scan(const ModelParams &params, const std::vector<int> &ns,
                                          const ThresholdSpec &spec,
                                          const std::vector<double> &multipliers,
                                          const McOptions &options) {
  const double c = ld_constant_or_nan(params);
  const bool vacuous = CenteringSpec::for_kappa(params.kappa).rule == CenteringRule::Zero;
  std::vector<ScanRow> rows;
  std::uint64_t row_index = 0;
  for (int n : ns) {
    const double xn = threshold(spec, n);
    for (double mult : multipliers) {
      const double x = mult * xn;
      const double denom = n * tail(params.driver(), x);
      if (vacuous && x > 0.0) {
        // S_n >= 0 and d_n = 0, so S_n - d_n <= -x never happens
        rows.push_back({params.tag, n, x, "EXACT_ZERO", 0.0, 0.0, {0.0, 0.0}, denom, 0.0, c});
        continue;
      }
      McOptions opt = options;
      opt.seed = derive_seed(options.seed, row_index++);
      const Estimate e = estimate_lower(params, n, centering(params, n) - x, opt);
      rows.push_back({params.tag, n, x, to_string(e.method), e.value, e.std_error, e.ci95, denom,
                      e.value / denom, c});
    }
  }
  return rows;
}

}  // namespace bpi
