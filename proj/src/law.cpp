#include "bpi/law.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "bpi/numeric.hpp"

namespace bpi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = std::numbers::e;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Pareto-family building blocks, written for real arguments so the same code
// serves exact atoms and the smooth continuations used in remainder integrals.

double logpareto_log_g(const LogPareto &d, double m) {
  return -d.kappa * std::log(m) + d.gamma * std::log(std::log(kE + m));
}

// -expm1(log g(m+1) - log g(m)): relative drop of g across one unit step.
double logpareto_step_drop(const LogPareto &d, double m) {
  const double dlog = -d.kappa * std::log1p(1.0 / m) +
                      d.gamma * std::log1p(std::log1p(1.0 / (kE + m)) / std::log(kE + m));
  return -std::expm1(dlog);
}

double pareto_pmf_real(double kappa, double t) {
  return std::pow(t, -kappa) * -std::expm1(-kappa * std::log1p(1.0 / t));
}

// Smooth continuation of the pmf for the heavy families (t >= 1).
double heavy_pmf_real(const Law &law, double t) {
  return std::visit(Overloaded{
                        [&](const DiscretePareto &d) { return pareto_pmf_real(d.kappa, t); },
                        [&](const ZeroInflatedPareto &d) { return d.w * pareto_pmf_real(d.kappa, t); },
                        [&](const LogPareto &d) {
                          return std::exp(logpareto_log_g(d, t) - logpareto_log_g(d, 1.0)) *
                                 logpareto_step_drop(d, t);
                        },
                        [](const auto &) -> double { throw DomainError("not a heavy-tailed law"); },
                    },
                    law.variant());
}

double adaptive_simpson(const std::function<double(double)> &f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)> &f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Integral of f over [a, b] (b may be +inf) on the logarithmic scale t = a e^u, so that
// power-law integrands become exponentials in u.
double log_scale_integral(const std::function<double(double)> &f, double a, double b) {
  const auto g = [&](double u) {
    const double t = a * std::exp(u);
    return f(t) * t;
  };
  const double u_end = std::isinf(b) ? 700.0 : std::log(b / a);
  CompensatedSum<double> acc;
  double lo = 0.0;
  double width = 0.5;
  while (lo < u_end) {
    const double hi = std::min(lo + width, u_end);
    const double piece = integrate(g, lo, hi, 1e-18 * std::max(1.0, hi - lo));
    acc += piece;
    if (std::isinf(b) && lo > 8.0 && std::abs(piece) < 1e-17 * std::abs(acc.value())) break;
    lo = hi;
    width *= 2.0;
  }
  return acc.value();
}

std::uint64_t floor_to_u64(double x) {
  if (x >= 0x1.0p64) throw SaturationError("sample exceeds the 64-bit range");
  return static_cast<std::uint64_t>(std::floor(x));
}

// Smallest k >= k_min with surv(k) < u, for a survival function surv that is
// nonincreasing on integers; `guess` is a nearby starting point.
template <typename Surv>
std::uint64_t invert_with_fixup(const Surv &surv, double u, std::uint64_t guess,
                                std::uint64_t k_min) {
  std::uint64_t k = std::max(guess, k_min);
  while (k > k_min && surv(k - 1) < u) --k;
  while (surv(k) >= u) {
    if (k == std::numeric_limits<std::uint64_t>::max())
      throw SaturationError("sample exceeds the 64-bit range");
    ++k;
  }
  return k;
}

double poisson_log_pmf(double lambda, double k) {
  return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
}

// log P(X > x) for Poisson, summing upward from the first excluded atom when it sits past
// the mode so that far tails never cancel.
double poisson_log_tail(double lambda, double x) {
  if (lambda == 0.0) return -kInf;
  const double k0 = std::floor(x) + 1.0;
  if (k0 > lambda) {
    double term = 1.0;
    CompensatedSum<double> s;
    s += term;
    for (double k = k0;; k += 1.0) {
      term *= lambda / (k + 1.0);
      s += term;
      if (term < 1e-18 * s.value()) break;
    }
    return poisson_log_pmf(lambda, k0) + std::log(s.value());
  }
  CompensatedSum<double> cdf;
  for (double k = 0.0; k < k0; k += 1.0) cdf += std::exp(poisson_log_pmf(lambda, k));
  return std::log1p(-std::min(1.0, cdf.value()));
}

void validate(const LawVariant &v) {
  std::visit(
      Overloaded{
          [](const DiscretePareto &d) {
            if (!(d.kappa > 0.0) || !std::isfinite(d.kappa))
              throw DomainError("pareto: kappa must be positive");
          },
          [](const LogPareto &d) {
            if (!(d.kappa > 0.0) || !std::isfinite(d.kappa))
              throw DomainError("logpareto: kappa must be positive");
            if (!(d.gamma >= -2.0 && d.gamma <= 2.0))
              throw DomainError("logpareto: gamma must lie in [-2, 2]");
            // The peak of the log factor's local growth sits at small m; beyond it the
            // power decay dominates whenever it dominates here.
            for (int m = 1; m <= 64; ++m)
              if (logpareto_log_g(d, m + 1.0) > logpareto_log_g(d, m))
                throw DomainError("logpareto: survival function not monotone for these parameters");
          },
          [](const ZeroInflatedPareto &d) {
            if (!(d.w > 0.0 && d.w < 1.0)) throw DomainError("zpareto: w must lie in (0, 1)");
            if (!(d.kappa > 1.0) || !std::isfinite(d.kappa))
              throw DomainError("zpareto: kappa must exceed 1");
          },
          [](const Bernoulli &d) {
            if (!(d.q >= 0.0 && d.q <= 1.0)) throw DomainError("bernoulli: q must lie in [0, 1]");
          },
          [](const Geometric &d) {
            if (!(d.q > 0.0 && d.q <= 1.0)) throw DomainError("geom: q must lie in (0, 1]");
          },
          [](const Poisson &d) {
            if (!(d.lambda >= 0.0) || !std::isfinite(d.lambda))
              throw DomainError("poisson: lambda must be nonnegative");
          },
          [](const PointMass &) {},
          [](const Finite &d) {
            if (d.table.empty()) throw DomainError("finite: empty table");
            CompensatedSum<double> total;
            for (std::size_t i = 0; i < d.table.size(); ++i) {
              if (!(d.table[i].second >= 0.0)) throw DomainError("finite: negative probability");
              if (i > 0 && d.table[i].first <= d.table[i - 1].first)
                throw DomainError("finite: atoms must be distinct");
              total += d.table[i].second;
            }
            if (std::abs(total.value() - 1.0) > 1e-12)
              throw DomainError("finite: probabilities must sum to 1");
          },
      },
      v);
}

LawVariant normalized(LawVariant v) {
  if (auto *f = std::get_if<Finite>(&v))
    std::sort(f->table.begin(), f->table.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
  return v;
}

}  // namespace

Law::Law(LawVariant v) : v_(normalized(std::move(v))) { validate(v_); }

double log_tail(const Law &law, double x) {
  if (!(x >= 0.0)) throw DomainError("tail: x must be nonnegative");
  const double m = std::floor(x) + 1.0;
  return std::visit(
      Overloaded{
          [&](const DiscretePareto &d) { return -d.kappa * std::log(m); },
          [&](const LogPareto &d) { return logpareto_log_g(d, m) - logpareto_log_g(d, 1.0); },
          [&](const ZeroInflatedPareto &d) { return std::log(d.w) - d.kappa * std::log(m); },
          [&](const Bernoulli &d) { return x < 1.0 ? std::log(d.q) : -kInf; },
          [&](const Geometric &d) { return d.q == 1.0 ? -kInf : m * std::log1p(-d.q); },
          [&](const Poisson &d) { return poisson_log_tail(d.lambda, x); },
          [&](const PointMass &d) { return x < static_cast<double>(d.k) ? 0.0 : -kInf; },
          [&](const Finite &d) {
            CompensatedSum<double> s;
            for (const auto &[k, p] : d.table)
              if (static_cast<double>(k) > x) s += p;
            return std::log(s.value());
          },
      },
      law.variant());
}

double tail(const Law &law, double x) {
  if (!(x >= 0.0)) throw DomainError("tail: x must be nonnegative");
  if (const auto *f = law.as<Finite>()) {
    CompensatedSum<double> s;
    for (const auto &[k, p] : f->table)
      if (static_cast<double>(k) > x) s += p;
    return std::min(1.0, s.value());
  }
  if (const auto *b = law.as<Bernoulli>()) return x < 1.0 ? b->q : 0.0;
  return std::min(1.0, std::exp(log_tail(law, x)));
}

double pmf(const Law &law, std::uint64_t k) {
  const double kd = static_cast<double>(k);
  return std::visit(
      Overloaded{
          [&](const DiscretePareto &d) { return k == 0 ? 0.0 : pareto_pmf_real(d.kappa, kd); },
          [&](const LogPareto &) { return k == 0 ? 0.0 : heavy_pmf_real(law, kd); },
          [&](const ZeroInflatedPareto &d) {
            return k == 0 ? 1.0 - d.w : d.w * pareto_pmf_real(d.kappa, kd);
          },
          [&](const Bernoulli &d) { return k == 0 ? 1.0 - d.q : (k == 1 ? d.q : 0.0); },
          [&](const Geometric &d) {
            return d.q == 1.0 ? (k == 0 ? 1.0 : 0.0) : d.q * std::exp(kd * std::log1p(-d.q));
          },
          [&](const Poisson &d) {
            if (d.lambda == 0.0) return k == 0 ? 1.0 : 0.0;
            return std::exp(poisson_log_pmf(d.lambda, kd));
          },
          [&](const PointMass &d) { return k == d.k ? 1.0 : 0.0; },
          [&](const Finite &d) {
            for (const auto &[atom, p] : d.table)
              if (atom == k) return p;
            return 0.0;
          },
      },
      law.variant());
}

double mean(const Law &law) {
  return std::visit(
      Overloaded{
          [](const DiscretePareto &d) { return d.kappa > 1.0 ? std::riemann_zeta(d.kappa) : kInf; },
          [](const ZeroInflatedPareto &d) { return d.w * std::riemann_zeta(d.kappa); },
          [&](const LogPareto &d) {
            // E X = sum_{k>=0} P(X > k) = sum_{m>=1} g(m) / g(1).
            if (d.kappa < 1.0 || (d.kappa == 1.0 && d.gamma >= -1.0)) return kInf;
            const auto surv = [&](double m) {
              return std::exp(logpareto_log_g(d, m) - logpareto_log_g(d, 1.0));
            };
            constexpr int kDirect = 1 << 16;
            CompensatedSum<double> s;
            for (int m = 1; m <= kDirect; ++m) s += surv(m);
            s += log_scale_integral(surv, kDirect + 0.5, kInf);
            return s.value();
          },
          [](const Bernoulli &d) { return d.q; },
          [](const Geometric &d) { return (1.0 - d.q) / d.q; },
          [](const Poisson &d) { return d.lambda; },
          [](const PointMass &d) { return static_cast<double>(d.k); },
          [](const Finite &d) {
            CompensatedSum<double> s;
            for (const auto &[k, p] : d.table) s += static_cast<double>(k) * p;
            return s.value();
          },
      },
      law.variant());
}

std::optional<double> tail_index(const Law &law) {
  if (const auto s = tail_shape(law)) return s->kappa;
  return std::nullopt;
}

std::optional<TailShape> tail_shape(const Law &law) {
  return std::visit(Overloaded{
                        [](const DiscretePareto &d) -> std::optional<TailShape> {
                          return TailShape{d.kappa, 1.0, 0.0};
                        },
                        [](const LogPareto &d) -> std::optional<TailShape> {
                          return TailShape{d.kappa, std::pow(std::log(kE + 1.0), -d.gamma), d.gamma};
                        },
                        [](const ZeroInflatedPareto &d) -> std::optional<TailShape> {
                          return TailShape{d.kappa, d.w, 0.0};
                        },
                        [](const auto &) -> std::optional<TailShape> { return std::nullopt; },
                    },
                    law.variant());
}

bool is_heavy(const Law &law) { return tail_shape(law).has_value(); }

std::optional<std::uint64_t> support_max(const Law &law) {
  return std::visit(Overloaded{
                        [](const Bernoulli &d) -> std::optional<std::uint64_t> {
                          return d.q > 0.0 ? 1 : 0;
                        },
                        [](const PointMass &d) -> std::optional<std::uint64_t> { return d.k; },
                        [](const Finite &d) -> std::optional<std::uint64_t> {
                          std::uint64_t top = 0;
                          for (const auto &[k, p] : d.table)
                            if (p > 0.0) top = k;
                          return top;
                        },
                        [](const Geometric &d) -> std::optional<std::uint64_t> {
                          if (d.q == 1.0) return 0;
                          return std::nullopt;
                        },
                        [](const Poisson &d) -> std::optional<std::uint64_t> {
                          if (d.lambda == 0.0) return 0;
                          return std::nullopt;
                        },
                        [](const auto &) -> std::optional<std::uint64_t> { return std::nullopt; },
                    },
                    law.variant());
}

std::uint64_t sample(const Law &law, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample: u must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [&](const DiscretePareto &d) {
            const auto surv = [&](std::uint64_t k) {
              return std::pow(static_cast<double>(k) + 1.0, -d.kappa);
            };
            return invert_with_fixup(surv, u, floor_to_u64(std::pow(u, -1.0 / d.kappa)), 1);
          },
          [&](const ZeroInflatedPareto &d) -> std::uint64_t {
            if (u > d.w) return 0;
            const auto surv = [&](std::uint64_t k) {
              return d.w * std::pow(static_cast<double>(k) + 1.0, -d.kappa);
            };
            return invert_with_fixup(surv, u, floor_to_u64(std::pow(u / d.w, -1.0 / d.kappa)), 1);
          },
          [&](const LogPareto &d) -> std::uint64_t {
            // Monotone bisection for the smallest k with log P(X > k) < log u.
            const double log_u = std::log(u);
            const double log_g1 = logpareto_log_g(d, 1.0);
            const auto below = [&](std::uint64_t k) {
              return logpareto_log_g(d, static_cast<double>(k) + 1.0) - log_g1 < log_u;
            };
            std::uint64_t lo = 0;
            std::uint64_t hi = std::uint64_t{1} << 60;
            if (!below(hi)) throw SaturationError("logpareto sample exceeds 2^60");
            for (int it = 0; it < 60 && lo < hi; ++it) {
              const std::uint64_t mid = lo + (hi - lo) / 2;
              if (below(mid))
                hi = mid;
              else
                lo = mid + 1;
            }
            return hi;
          },
          [&](const Bernoulli &d) -> std::uint64_t { return u <= d.q ? 1 : 0; },
          [&](const Geometric &d) -> std::uint64_t {
            if (d.q == 1.0) return 0;
            const double l1q = std::log1p(-d.q);
            const auto surv = [&](std::uint64_t k) {
              return std::exp((static_cast<double>(k) + 1.0) * l1q);
            };
            const double guess = std::max(0.0, std::ceil(std::log(u) / l1q) - 1.0);
            return invert_with_fixup(surv, u, floor_to_u64(guess), 0);
          },
          [&](const Poisson &d) -> std::uint64_t {
            if (d.lambda == 0.0) return 0;
            std::uint64_t k = 0;
            while (std::exp(poisson_log_tail(d.lambda, static_cast<double>(k))) >= u) ++k;
            return k;
          },
          [&](const PointMass &d) { return d.k; },
          [&](const Finite &d) -> std::uint64_t {
            // Suffix sums so that the inversion agrees exactly with tail().
            for (std::size_t i = 0; i < d.table.size(); ++i) {
              CompensatedSum<double> surv;
              for (std::size_t j = i + 1; j < d.table.size(); ++j) surv += d.table[j].second;
              if (surv.value() < u) return d.table[i].first;
            }
            return d.table.back().first;
          },
      },
      law.variant());
}

std::uint64_t sample_above(const Law &law, double threshold, double u) {
  const double mass = tail(law, threshold);
  if (!(mass > 0.0)) throw DomainError("sample_above: no mass above threshold");
  return sample(law, u * mass);
}

double truncated_moment(const Law &law, double power, double x) {
  if (!(power > 0.0)) throw DomainError("truncated_moment: power must be positive");
  if (x < 1.0) return 0.0;
  const double top = std::floor(x);
  if (const auto *f = law.as<Finite>()) {
    CompensatedSum<double> s;
    for (const auto &[k, p] : f->table)
      if (static_cast<double>(k) <= top) s += std::pow(static_cast<double>(k), power) * p;
    return s.value();
  }
  if (const auto *pm = law.as<PointMass>())
    return static_cast<double>(pm->k) <= top ? std::pow(static_cast<double>(pm->k), power) : 0.0;
  if (const auto *b = law.as<Bernoulli>()) return b->q;

  CompensatedSum<double> s;
  if (is_heavy(law)) {
    constexpr double kDirect = 1 << 22;
    const double direct_end = std::min(top, kDirect);
    for (double k = 1.0; k <= direct_end; k += 1.0) s += std::pow(k, power) * heavy_pmf_real(law, k);
    if (top > kDirect)
      s += log_scale_integral([&](double t) { return std::pow(t, power) * heavy_pmf_real(law, t); },
                              kDirect + 0.5, top + 0.5);
    return s.value();
  }
  const double mu = mean(law);
  for (std::uint64_t k = 1; static_cast<double>(k) <= top; ++k) {
    const double term = std::pow(static_cast<double>(k), power) * pmf(law, k);
    s += term;
    if (static_cast<double>(k) > 2.0 * mu + 50.0 && term < 1e-20 * s.value()) break;
  }
  return s.value();
}

double log_plus_moment(const Law &law) {
  if (const auto *f = law.as<Finite>()) {
    CompensatedSum<double> s;
    for (const auto &[k, p] : f->table)
      if (k >= 2) s += std::log(static_cast<double>(k)) * p;
    return s.value();
  }
  if (const auto *pm = law.as<PointMass>()) return pm->k >= 2 ? std::log(static_cast<double>(pm->k)) : 0.0;
  if (law.as<Bernoulli>()) return 0.0;

  CompensatedSum<double> s;
  if (is_heavy(law)) {
    constexpr int kDirect = 1 << 20;
    for (int k = 2; k <= kDirect; ++k) s += std::log(static_cast<double>(k)) * heavy_pmf_real(law, k);
    s += log_scale_integral([&](double t) { return std::log(t) * heavy_pmf_real(law, t); },
                            kDirect + 0.5, kInf);
    return s.value();
  }
  const double mu = mean(law);
  for (std::uint64_t k = 2;; ++k) {
    const double term = std::log(static_cast<double>(k)) * pmf(law, k);
    s += term;
    if (static_cast<double>(k) > 2.0 * mu + 50.0 && term < 1e-20 * s.value()) break;
  }
  return s.value();
}

PotterReport potter_check(const Law &law, double A, double delta, double x0,
                          const std::vector<std::pair<double, double>> &grid) {
  if (!(A > 1.0)) throw DomainError("potter_check: A must exceed 1");
  if (!(delta > 0.0)) throw DomainError("potter_check: delta must be positive");
  const auto kappa = tail_index(law);
  if (!kappa) throw DomainError("potter_check: law is not regularly varying");
  PotterReport report;
  for (const auto &[x, y] : grid) {
    if (x < x0 || y < x0) continue;
    const double log_ratio = log_tail(law, y) - log_tail(law, x);
    const double ly = std::log(y / x);
    const double log_bound = std::log(A) + std::max((-*kappa + delta) * ly, (-*kappa - delta) * ly);
    const double r = std::exp(log_ratio - log_bound);
    ++report.pairs_checked;
    if (r > report.worst_ratio) {
      report.worst_ratio = r;
      report.worst_x = x;
      report.worst_y = y;
    }
  }
  if (report.pairs_checked == 0) throw DomainError("potter_check: no grid pair at or above x0");
  report.pass = report.worst_ratio <= 1.0;
  return report;
}

std::vector<std::pair<double, double>> log_spaced_pairs(double lo, double hi, int points) {
  std::vector<double> xs;
  for (int i = 0; i < points; ++i)
    xs.push_back(lo * std::pow(hi / lo, points == 1 ? 0.0 : double(i) / (points - 1)));
  std::vector<std::pair<double, double>> out;
  for (double x : xs)
    for (double y : xs) out.emplace_back(x, y);
  return out;
}

// ---------------------------------------------------------------------------
// Grammar: name(args), whitespace-insensitive, keys case-sensitive.

namespace {

std::map<std::string, double> keyed_args(const std::string &name, const std::string &body,
                                         std::initializer_list<const char *> keys) {
  std::map<std::string, double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(name + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (std::find_if(keys.begin(), keys.end(), [&](const char *k) { return key == k; }) == keys.end())
      throw std::invalid_argument(name + ": unknown key '" + key + "'");
    if (out.count(key)) throw std::invalid_argument(name + ": duplicate key '" + key + "'");
    out[key] = parse_double(item.substr(eq + 1));
  }
  for (const char *k : keys)
    if (!out.count(k)) throw std::invalid_argument(name + ": missing key '" + std::string(k) + "'");
  return out;
}

std::uint64_t parse_atom(const std::string &s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
  return std::stoull(s);
}

}  // namespace

Law parse_law(const std::string &text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("law must look like name(args): '" + text + "'");
  const std::string name = s.substr(0, open);
  const std::string body = s.substr(open + 1, s.size() - open - 2);

  if (name == "pareto") return DiscretePareto{keyed_args(name, body, {"kappa"})["kappa"]};
  if (name == "logpareto") {
    auto a = keyed_args(name, body, {"kappa", "gamma"});
    return LogPareto{a["kappa"], a["gamma"]};
  }
  if (name == "zpareto") {
    auto a = keyed_args(name, body, {"w", "kappa"});
    return ZeroInflatedPareto{a["w"], a["kappa"]};
  }
  if (name == "bernoulli") return Bernoulli{keyed_args(name, body, {"q"})["q"]};
  if (name == "geom") return Geometric{keyed_args(name, body, {"q"})["q"]};
  if (name == "poisson") return Poisson{keyed_args(name, body, {"lambda"})["lambda"]};
  if (name == "point") return PointMass{parse_atom(body)};
  if (name == "finite") {
    Finite f;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("finite: expected k:p, got '" + item + "'");
      f.table.emplace_back(parse_atom(item.substr(0, colon)), parse_double(item.substr(colon + 1)));
    }
    return f;
  }
  throw std::invalid_argument("unknown law '" + name + "'");
}

std::string to_string(const Law &law) {
  return std::visit(
      Overloaded{
          [](const DiscretePareto &d) { return "pareto(kappa=" + format_double(d.kappa) + ")"; },
          [](const LogPareto &d) {
            return "logpareto(kappa=" + format_double(d.kappa) + ",gamma=" + format_double(d.gamma) + ")";
          },
          [](const ZeroInflatedPareto &d) {
            return "zpareto(w=" + format_double(d.w) + ",kappa=" + format_double(d.kappa) + ")";
          },
          [](const Bernoulli &d) { return "bernoulli(q=" + format_double(d.q) + ")"; },
          [](const Geometric &d) { return "geom(q=" + format_double(d.q) + ")"; },
          [](const Poisson &d) { return "poisson(lambda=" + format_double(d.lambda) + ")"; },
          [](const PointMass &d) { return "point(" + std::to_string(d.k) + ")"; },
          [](const Finite &d) {
            std::string out = "finite(";
            for (std::size_t i = 0; i < d.table.size(); ++i) {
              if (i) out += ",";
              out += std::to_string(d.table[i].first) + ":" + format_double(d.table[i].second);
            }
            return out + ")";
          },
      },
      law.variant());
}

}  // namespace bpi
