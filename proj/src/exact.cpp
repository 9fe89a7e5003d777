#include "bpi/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bpi/asymptotics.hpp"
#include "bpi/numeric.hpp"

namespace bpi {

namespace {

void require_nonnegative(int n) {
  if (n < 0) throw DomainError("generation count must be nonnegative");
}

enum class TailKind {
  Beyond,     // tail_mass sits above the cutoff: iterates converge in total variation
  Uncertain,  // a truncated count feeds tail_mass every step, so window mass decays slowly
};

// With an uncertain tail the window loses a roughly fixed fraction per step forever; what must
// settle is the shape of the window, so iterates are compared after normalising it.
double distance(const Pmf &a, const Pmf &b, TailKind kind) {
  if (kind == TailKind::Beyond) return total_variation(a, b);
  const double sa = a.masses().sum();
  const double sb = b.masses().sum();
  if (!(sa > 0.0 && sb > 0.0)) return total_variation(a, b);
  return 0.5 * (a.masses() / sa - b.masses() / sb).abs().sum();
}

template <typename Step>
Pmf iterate_to_fixed_point(Pmf current, Step step, TailKind kind, const IterationControl &control,
                           const char *what) {
  double d = 1.0;
  for (int it = 1; it <= control.max_iterations; ++it) {
    Pmf next = step(current);
    d = distance(next, current, kind);
    current = std::move(next);
    if (d < control.tol) return current;
  }
  throw ConvergenceError(std::string(what) + " did not converge after " +
                         std::to_string(control.max_iterations) +
                         " iterations; last distance " + format_double(d));
}

}  // namespace

Pmf generation_size_pmf(const Law &offspring, int n, Index cutoff) {
  require_nonnegative(n);
  const Pmf xi = Pmf::from_law(offspring, cutoff);
  Pmf z = Pmf::point(1, cutoff);
  for (int j = 0; j < n; ++j) z = compound(z, xi);
  return z;
}

std::vector<Pmf> progeny_sequence(const Law &offspring, int n_max, Index cutoff) {
  require_nonnegative(n_max);
  const Pmf xi = Pmf::from_law(offspring, cutoff);
  std::vector<Pmf> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  out.push_back(Pmf::point(1, cutoff));
  for (int j = 0; j < n_max; ++j) out.push_back(shift(compound(xi, out.back()), 1));
  return out;
}

Pmf progeny_pmf(const Law &offspring, int n, Index cutoff) {
  return progeny_sequence(offspring, n, cutoff).back();
}

Pmf total_progeny_pmf(const Law &offspring, Index cutoff, IterationControl control) {
  if (!(mean(offspring) < 1.0)) throw DomainError("total progeny needs a subcritical offspring law");
  const Pmf xi = Pmf::from_law(offspring, cutoff);
  return iterate_to_fixed_point(
      Pmf::point(1, cutoff), [&](const Pmf &t) { return shift(compound(xi, t), 1); }, TailKind::Beyond, control,
      "total progeny iteration");
}

Pmf population_pmf(const ModelParams &params, int n, Index cutoff) {
  require_nonnegative(n);
  const Pmf xi = Pmf::from_law(params.offspring, cutoff);
  const Pmf eta = Pmf::from_law(params.immigration, cutoff);
  Pmf x = Pmf::point(0, cutoff);
  for (int j = 0; j < n; ++j) x = convolve(compound(x, xi), eta);
  return x;
}

Pmf stationary_population_pmf(const ModelParams &params, Index cutoff, IterationControl control) {
  const Pmf xi = Pmf::from_law(params.offspring, cutoff);
  const Pmf eta = Pmf::from_law(params.immigration, cutoff);
  return iterate_to_fixed_point(
      Pmf::point(0, cutoff), [&](const Pmf &x) { return convolve(compound(x, xi), eta); }, TailKind::Uncertain, control,
      "stationary population iteration");
}

Pmf immigrant_line_pmf(const ModelParams &params, const Pmf &progeny, Index cutoff) {
  return compound(Pmf::from_law(params.immigration, cutoff), progeny);
}

std::vector<Pmf> total_population_sequence(const ModelParams &params, const std::vector<int> &ns,
                                           Index cutoff) {
  if (ns.empty()) return {};
  if (!std::is_sorted(ns.begin(), ns.end()) || ns.front() < 1)
    throw DomainError("horizons must be ascending and at least 1");
  const Pmf eta = Pmf::from_law(params.immigration, cutoff);
  const Pmf xi = Pmf::from_law(params.offspring, cutoff);
  std::vector<Pmf> out;
  Pmf progeny = Pmf::point(1, cutoff);
  Pmf sum = Pmf::point(0, cutoff);
  int done = 0;
  for (int target : ns) {
    for (; done < target; ++done) {
      // the line of the immigrant arriving `done` steps before the horizon carries T_done
      if (done > 0) progeny = shift(compound(xi, progeny), 1);
      sum = convolve(sum, compound(eta, progeny));
    }
    out.push_back(sum);
  }
  return out;
}

Pmf total_population_pmf(const ModelParams &params, int n, Index cutoff) {
  if (n < 1) throw DomainError("horizon must be at least 1");
  return total_population_sequence(params, {n}, cutoff).front();
}

Pmf completed_lines_pmf(const ModelParams &params, int n, Index cutoff, IterationControl control) {
  if (n < 1) throw DomainError("horizon must be at least 1");
  const Pmf t = total_progeny_pmf(params.offspring, cutoff, control);
  return convolve_power(immigrant_line_pmf(params, t, cutoff), static_cast<std::uint64_t>(n));
}

Pmf residual_progeny_pmf(const ModelParams &params, int n, Index cutoff, IterationControl control) {
  const Pmf xi = Pmf::from_law(params.offspring, cutoff);
  const Pmf t = total_progeny_pmf(params.offspring, cutoff, control);
  return compound(compound(population_pmf(params, n, cutoff), xi), t);
}

Pmf residual_progeny_limit_pmf(const ModelParams &params, Index cutoff, IterationControl control) {
  const Pmf xi = Pmf::from_law(params.offspring, cutoff);
  const Pmf t = total_progeny_pmf(params.offspring, cutoff, control);
  return compound(compound(stationary_population_pmf(params, cutoff, control), xi), t);
}

std::vector<SandwichBounds> sandwich_bounds(const ModelParams &params, int n, double eps,
                                            const std::vector<double> &xs, Index cutoff,
                                            IterationControl control) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  const Pmf s1 = completed_lines_pmf(params, n, cutoff, control);
  const Pmf s2 = residual_progeny_pmf(params, n, cutoff, control);
  const Pmf sn = total_population_pmf(params, n, cutoff);
  const bool centred = CenteringSpec::for_kappa(params.kappa).rule == CenteringRule::Mean;
  const double d1 = centred ? mean_completed_lines(params.alpha, params.beta, n) : 0.0;
  const double d2 = centred ? mean_residual_progeny(params.alpha, params.beta, n) : 0.0;
  const double d = centering(params, n);

  std::vector<SandwichBounds> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const Interval i1 = tail_of(s1, (1.0 + eps) * x + d1);
    const Interval i2 = tail_of(s1, (1.0 - eps) * x + d1);
    const Interval i3 = tail_of(s2, eps * x + d2);
    // P(S_{n,2} < d2 - eps x)
    const double below = d2 - eps * x;
    const Interval i4 = below > 0.0 ? cdf_of(s2, std::ceil(below) - 1.0) : Interval{0.0, 0.0};
    out.push_back({i1.lo - i3.hi, std::min(1.0, i2.hi + i4.hi), tail_of(sn, x + d)});
  }
  return out;
}

}  // namespace bpi
