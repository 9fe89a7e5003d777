#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "bpi/law.hpp"

namespace bpi {

/// Closed interval [lo, hi] of probabilities.
struct Interval {
  double lo;
  double hi;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Law of a nonnegative integer variable on the window {0..N}. Mass outside the window,
/// or mass whose location became uncertain through truncation, is kept in tail_mass,
/// so every window mass is a lower bound for the true probability.
class Pmf {
 public:
  using Index = Eigen::Index;

  /// Takes masses and an explicit tail; both are validated.
  Pmf(Eigen::ArrayXd masses, double tail_mass);

  /// Clips transform round-off and sets tail_mass = 1 - sum(masses).
  static Pmf from_raw(Eigen::ArrayXd masses);
  static Pmf point(std::uint64_t k, Index cutoff);
  static Pmf from_law(const Law &law, Index cutoff);
  static Pmf from_table(const std::vector<std::pair<std::uint64_t, double>> &table, Index cutoff);

  Index cutoff() const { return masses_.size() - 1; }
  const Eigen::ArrayXd &masses() const { return masses_; }
  double tail_mass() const { return tail_mass_; }
  double operator[](Index k) const { return k <= cutoff() ? masses_[k] : 0.0; }

  /// sum k m_k over the window.
  double mean_lower() const;
  /// Largest k with a positive mass, -1 when the window is empty.
  Index last_nonzero() const;

 private:
  Eigen::ArrayXd masses_;
  double tail_mass_;
};

/// Law of the independent sum. The cutoffs must agree.
Pmf convolve(const Pmf &a, const Pmf &b);
/// k-fold independent sum; k = 0 gives the point mass at 0.
Pmf convolve_power(const Pmf &a, std::uint64_t k);
/// Law of W_1 + ... + W_M with M ~ count and W_i iid ~ summand.
Pmf compound(const Pmf &count, const Pmf &summand);
/// Law of X + s.
Pmf shift(const Pmf &a, std::uint64_t s);

/// Certified bounds on P(X > x).
Interval tail_of(const Pmf &pmf, double x);
/// Certified bounds on P(X <= x).
Interval cdf_of(const Pmf &pmf, double x);
/// Distance counting tail_mass as one extra atom.
double total_variation(const Pmf &a, const Pmf &b);
double max_abs_difference(const Pmf &a, const Pmf &b);
/// sum k^h m_k over the window.
double truncated_moment(const Pmf &pmf, double h);

void write_csv(std::ostream &out, const Pmf &pmf);
Pmf read_csv(std::istream &in);

}  // namespace bpi
