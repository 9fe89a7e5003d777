#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

namespace bpi {

// P(X >= k) = k^-kappa on {1, 2, ...}.
struct DiscretePareto {
  double kappa;
};

// P(X > x) = (m^-kappa (ln(e + m))^gamma) / (ln(e + 1))^gamma with m = floor(x) + 1.
struct LogPareto {
  double kappa;
  double gamma;
};

// Atom 1 - w at zero, DiscretePareto(kappa) with weight w elsewhere.
struct ZeroInflatedPareto {
  double w;
  double kappa;
};

struct Bernoulli {
  double q;
};

// Failures before the first success: P(X = k) = q (1 - q)^k.
struct Geometric {
  double q;
};

struct Poisson {
  double lambda;
};

struct PointMass {
  std::uint64_t k;
};

struct Finite {
  std::vector<std::pair<std::uint64_t, double>> table;  // sorted by k
};

using LawVariant = std::variant<DiscretePareto, LogPareto, ZeroInflatedPareto, Bernoulli,
                                Geometric, Poisson, PointMass, Finite>;

/// A validated nonnegative integer-valued law.
class Law {
 public:
  Law(LawVariant v);  // NOLINT(google-explicit-constructor)
  template <typename T>
    requires std::is_constructible_v<LawVariant, T>
  Law(T v) : Law(LawVariant(std::move(v))) {}  // NOLINT(google-explicit-constructor)

  const LawVariant &variant() const { return v_; }

  template <typename T>
  const T *as() const {
    return std::get_if<T>(&v_);
  }

 private:
  LawVariant v_;
};

/// Leading-order tail shape P(X > x) ~ scale * x^-kappa * (ln x)^log_power.
struct TailShape {
  double kappa;
  double scale;
  double log_power;
};

double tail(const Law &law, double x);
/// log P(X > x); usable where tail() underflows.
double log_tail(const Law &law, double x);
double pmf(const Law &law, std::uint64_t k);
/// E X, or +infinity.
double mean(const Law &law);

std::optional<double> tail_index(const Law &law);
std::optional<TailShape> tail_shape(const Law &law);
bool is_heavy(const Law &law);
/// Largest atom for bounded laws.
std::optional<std::uint64_t> support_max(const Law &law);

/// Inverse-CDF transform: the smallest k with P(X > k) < u.
std::uint64_t sample(const Law &law, double u);
/// Draw from the law conditioned on X > threshold using the same inversion.
std::uint64_t sample_above(const Law &law, double threshold, double u);

/// E(X^power; X <= x).
double truncated_moment(const Law &law, double power, double x);

/// E log+ X.
double log_plus_moment(const Law &law);

struct PotterReport {
  bool pass = true;
  double worst_ratio = 0.0;  // max of observed / bound; pass iff <= 1
  double worst_x = 0.0;
  double worst_y = 0.0;
  std::size_t pairs_checked = 0;
};

/// Checks P(X>y)/P(X>x) <= A max((y/x)^(-kappa+delta), (y/x)^(-kappa-delta)) over pairs with
/// both coordinates >= x0.
PotterReport potter_check(const Law &law, double A, double delta, double x0,
                          const std::vector<std::pair<double, double>> &grid);

/// All ordered pairs of a log-spaced grid on [lo, hi].
std::vector<std::pair<double, double>> log_spaced_pairs(double lo, double hi, int points);

Law parse_law(const std::string &text);
std::string to_string(const Law &law);

}  // namespace bpi
