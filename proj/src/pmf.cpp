#include "bpi/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unsupported/Eigen/FFT>

#include "bpi/numeric.hpp"

namespace bpi {

namespace {

constexpr double kClipFloor = -1e-14;
constexpr double kNormSlack = 1e-10;
// Truncation budget for each count generating-function evaluation.
constexpr double kSeriesTolerance = 1e-18;
// Damped transforms use r^N = kDampingAtCutoff and M >= kPadFactor (N + 1),
// so aliasing is scaled by at most kDampingAtCutoff^kPadFactor.
constexpr double kDampingAtCutoff = 0.1;
constexpr Eigen::Index kPadFactor = 8;
constexpr Eigen::Index kMinExactTransform = Eigen::Index{1} << 16;
constexpr Eigen::Index kDirectConvolutionWork = Eigen::Index{1} << 16;

using Complex = std::complex<double>;
using Index = Eigen::Index;

Index next_pow2(Index v) {
  Index m = 1;
  while (m < v) m <<= 1;
  return m;
}

void require_same_cutoff(const Pmf &a, const Pmf &b) {
  if (a.cutoff() != b.cutoff())
    throw DomainError("cutoff mismatch: " + std::to_string(a.cutoff()) + " vs " +
                      std::to_string(b.cutoff()));
}

double clip(double v, const char *what) {
  if (v >= 0.0) return v;
  if (v >= kClipFloor) return 0.0;
  if (std::isnan(v)) throw NumericalError(std::string("NaN ") + what);
  throw NumericalError(std::string("negative ") + what + " beyond round-off: " + format_double(v));
}

double window_sum(const Eigen::ArrayXd &m) {
  CompensatedSum<> acc;
  for (Index k = m.size() - 1; k >= 0; --k) acc += m[k];
  return acc.value();
}

Pmf direct_convolve(const Pmf &a, const Pmf &b, Index ka, Index kb) {
  const Index n = a.cutoff();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n + 1);
  for (Index i = 0; i <= ka; ++i) {
    const double ai = a.masses()[i];
    if (ai == 0.0) continue;
    const Index jmax = std::min(kb, n - i);
    for (Index j = 0; j <= jmax; ++j) out[i + j] += ai * b.masses()[j];
  }
  return Pmf::from_raw(std::move(out));
}

// sum_k c_k w^k, truncated once |w|^(K+1) times the remaining count mass is negligible.
class CountSeries {
 public:
  CountSeries(const Eigen::ArrayXd &c, Index kc) : c_(c), kc_(kc), rem_(kc + 1) {
    CompensatedSum<> acc;
    for (Index k = kc; k >= 0; --k) {
      rem_[k] = acc.value();  // mass strictly above k
      acc += c[k];
    }
  }

  Complex operator()(Complex w) const {
    const double lw = std::log(std::abs(w));
    Index degree = kc_;
    if (lw < 0.0) {
      // smallest K with (K + 1) log|w| + log rem_K below the budget; the left side decreases in K
      auto negligible = [&](Index k) {
        return rem_[k] <= 0.0 ||
               static_cast<double>(k + 1) * lw + std::log(rem_[k]) < std::log(kSeriesTolerance);
      };
      Index lo = 0, hi = kc_;
      while (lo < hi) {
        const Index mid = lo + (hi - lo) / 2;
        if (negligible(mid))
          hi = mid;
        else
          lo = mid + 1;
      }
      degree = lo;
    }
    Complex acc = c_[degree];
    for (Index k = degree - 1; k >= 0; --k) acc = acc * w + c_[k];
    return acc;
  }

 private:
  const Eigen::ArrayXd &c_;
  Index kc_;
  Eigen::ArrayXd rem_;
};

}  // namespace

Pmf::Pmf(Eigen::ArrayXd masses, double tail_mass) : masses_(std::move(masses)), tail_mass_(tail_mass) {
  if (masses_.size() < 1) throw DomainError("pmf window must hold at least one atom");
  for (Index k = 0; k < masses_.size(); ++k) masses_[k] = clip(masses_[k], "mass");
  tail_mass_ = clip(tail_mass_, "tail mass");
  const double total = window_sum(masses_) + tail_mass_;
  if (std::abs(total - 1.0) > kNormSlack)
    throw NumericalError("pmf does not sum to one: " + format_double(total));
}

Pmf Pmf::from_raw(Eigen::ArrayXd masses) {
  for (Index k = 0; k < masses.size(); ++k) masses[k] = clip(masses[k], "mass");
  const double total = window_sum(masses);
  if (total > 1.0 + kNormSlack) throw NumericalError("window mass exceeds one: " + format_double(total));
  return Pmf(std::move(masses), std::max(0.0, 1.0 - total));
}

Pmf Pmf::point(std::uint64_t k, Index cutoff) {
  if (cutoff < 0) throw DomainError("cutoff must be nonnegative");
  Eigen::ArrayXd m = Eigen::ArrayXd::Zero(cutoff + 1);
  if (k <= static_cast<std::uint64_t>(cutoff)) {
    m[static_cast<Index>(k)] = 1.0;
    return Pmf(std::move(m), 0.0);
  }
  return Pmf(std::move(m), 1.0);
}

Pmf Pmf::from_law(const Law &law, Index cutoff) {
  if (cutoff < 0) throw DomainError("cutoff must be nonnegative");
  Eigen::ArrayXd m(cutoff + 1);
  for (Index k = 0; k <= cutoff; ++k) m[k] = pmf(law, static_cast<std::uint64_t>(k));
  return Pmf(std::move(m), tail(law, static_cast<double>(cutoff)));
}

Pmf Pmf::from_table(const std::vector<std::pair<std::uint64_t, double>> &table, Index cutoff) {
  if (cutoff < 0) throw DomainError("cutoff must be nonnegative");
  Eigen::ArrayXd m = Eigen::ArrayXd::Zero(cutoff + 1);
  CompensatedSum<> beyond;
  for (const auto &[k, p] : table) {
    if (k <= static_cast<std::uint64_t>(cutoff))
      m[static_cast<Index>(k)] += p;
    else
      beyond += p;
  }
  return Pmf(std::move(m), beyond.value());
}

double Pmf::mean_lower() const {
  CompensatedSum<> acc;
  for (Index k = 1; k < masses_.size(); ++k) acc += static_cast<double>(k) * masses_[k];
  return acc.value();
}

Index Pmf::last_nonzero() const {
  for (Index k = masses_.size() - 1; k >= 0; --k)
    if (masses_[k] > 0.0) return k;
  return -1;
}

Pmf convolve(const Pmf &a, const Pmf &b) {
  require_same_cutoff(a, b);
  const Index n = a.cutoff();
  const Index ka = a.last_nonzero();
  const Index kb = b.last_nonzero();
  if (ka < 0 || kb < 0) return Pmf::from_raw(Eigen::ArrayXd::Zero(n + 1));
  if ((ka + 1) * (kb + 1) <= kDirectConvolutionWork || std::min(ka, kb) < 64)
    return direct_convolve(a, b, ka, kb);

  const Index m = next_pow2(ka + kb + 1);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> xa(m, 0.0), xb(m, 0.0);
  for (Index k = 0; k <= ka; ++k) xa[k] = a.masses()[k];
  for (Index k = 0; k <= kb; ++k) xb[k] = b.masses()[k];
  std::vector<Complex> fa, fb;
  fft.fwd(fa, xa);
  fft.fwd(fb, xb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> y;
  fft.inv(y, fa, m);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n + 1);
  const Index top = std::min(n, ka + kb);
  for (Index k = 0; k <= top; ++k) out[k] = y[k];
  return Pmf::from_raw(std::move(out));
}

Pmf convolve_power(const Pmf &a, std::uint64_t k) {
  Pmf result = Pmf::point(0, a.cutoff());
  Pmf base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : convolve(result, base);
      first = false;
    }
    k >>= 1;
    if (k > 0) base = convolve(base, base);
  }
  return result;
}

Pmf compound(const Pmf &count, const Pmf &summand) {
  require_same_cutoff(count, summand);
  const Index n = count.cutoff();
  const Index kc = count.last_nonzero();
  const Index ks = summand.last_nonzero();
  const Eigen::ArrayXd &c = count.masses();
  const Eigen::ArrayXd &s = summand.masses();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n + 1);

  if (ks == 0 && summand.tail_mass() == 0.0 && s[0] == 1.0) return Pmf::point(0, n);  // any count sums to 0
  if (kc < 0) return Pmf::from_raw(std::move(out));
  if (kc == 0 || ks < 0) {
    out[0] = c[0];
    return Pmf::from_raw(std::move(out));
  }
  if (ks == 0) {
    double acc = c[kc];
    for (Index k = kc - 1; k >= 0; --k) acc = acc * s[0] + c[k];
    out[0] = acc;
    return Pmf::from_raw(std::move(out));
  }
  if (kc == 1) {
    out = c[1] * s;
    out[0] += c[0];
    return Pmf::from_raw(std::move(out));
  }

  // Exact when the whole support of the result fits the transform; damped otherwise.
  const Index span = kc * ks;
  const Index damped_size = next_pow2(kPadFactor * (n + 1));
  const Index exact_size = next_pow2(span + 1);
  const bool exact = exact_size <= std::max(kMinExactTransform, damped_size);
  const Index m = exact ? exact_size : damped_size;
  const double r = exact ? 1.0 : std::pow(kDampingAtCutoff, 1.0 / static_cast<double>(n));

  std::vector<double> xs(m, 0.0);
  double rk = 1.0;
  for (Index k = 0; k <= ks; ++k) {
    xs[k] = s[k] * rk;
    rk *= r;
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, xs);
  const CountSeries series(c, kc);
  for (auto &w : spectrum) w = series(w);
  std::vector<double> y;
  fft.inv(y, spectrum, m);

  const Index top = std::min(n, span);
  const double inv_r = 1.0 / r;
  double scale = 1.0;
  for (Index k = 0; k <= top; ++k) {
    out[k] = y[k] * scale;
    scale *= inv_r;
  }
  return Pmf::from_raw(std::move(out));
}

Pmf shift(const Pmf &a, std::uint64_t s) {
  const Index n = a.cutoff();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n + 1);
  CompensatedSum<> dropped;
  dropped += a.tail_mass();
  for (Index k = 0; k <= n; ++k) {
    const std::uint64_t to = static_cast<std::uint64_t>(k) + s;
    if (to <= static_cast<std::uint64_t>(n))
      out[static_cast<Index>(to)] = a.masses()[k];
    else
      dropped += a.masses()[k];
  }
  return Pmf(std::move(out), dropped.value());
}

Interval tail_of(const Pmf &pmf, double x) {
  const Index n = pmf.cutoff();
  Index first = 0;
  if (x >= 0.0) {
    const double f = std::floor(x) + 1.0;
    if (f > static_cast<double>(n)) return {0.0, std::min(1.0, pmf.tail_mass())};
    first = static_cast<Index>(f);
  }
  CompensatedSum<> acc;
  for (Index k = n; k >= first; --k) acc += pmf.masses()[k];
  const double lo = std::min(1.0, acc.value());
  return {lo, std::min(1.0, lo + pmf.tail_mass())};
}

Interval cdf_of(const Pmf &pmf, double x) {
  if (x < 0.0) return {0.0, std::min(1.0, pmf.tail_mass())};
  const Index last = std::min(pmf.cutoff(), static_cast<Index>(std::min(std::floor(x), 9.0e18)));
  CompensatedSum<> acc;
  for (Index k = last; k >= 0; --k) acc += pmf.masses()[k];
  const double lo = std::min(1.0, acc.value());
  return {lo, std::min(1.0, lo + pmf.tail_mass())};
}

double total_variation(const Pmf &a, const Pmf &b) {
  require_same_cutoff(a, b);
  CompensatedSum<> acc;
  for (Index k = 0; k <= a.cutoff(); ++k) acc += std::abs(a.masses()[k] - b.masses()[k]);
  acc += std::abs(a.tail_mass() - b.tail_mass());
  return 0.5 * acc.value();
}

double max_abs_difference(const Pmf &a, const Pmf &b) {
  require_same_cutoff(a, b);
  return (a.masses() - b.masses()).abs().maxCoeff();
}

double truncated_moment(const Pmf &pmf, double h) {
  CompensatedSum<> acc;
  for (Index k = 1; k <= pmf.cutoff(); ++k)
    acc += std::pow(static_cast<double>(k), h) * pmf.masses()[k];
  return acc.value();
}

void write_csv(std::ostream &out, const Pmf &pmf) {
  out << "k,mass\n";
  for (Index k = 0; k <= pmf.cutoff(); ++k) out << k << ',' << format_double(pmf.masses()[k]) << '\n';
  out << "# tail_mass=" << format_double(pmf.tail_mass()) << '\n';
}

Pmf read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != "k,mass") throw std::invalid_argument("pmf csv: missing header");
  std::vector<double> masses;
  std::optional<double> tail_mass;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string prefix = "# tail_mass=";
    if (line.rfind(prefix, 0) == 0) {
      tail_mass = parse_double(line.substr(prefix.size()));
      continue;
    }
    if (tail_mass) throw std::invalid_argument("pmf csv: rows after tail line at line " + std::to_string(lineno));
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("pmf csv: malformed row at line " + std::to_string(lineno));
    if (std::stoll(line.substr(0, comma)) != static_cast<long long>(masses.size()))
      throw std::invalid_argument("pmf csv: non-consecutive k at line " + std::to_string(lineno));
    masses.push_back(parse_double(line.substr(comma + 1)));
  }
  if (!tail_mass) throw std::invalid_argument("pmf csv: missing tail_mass line");
  if (masses.empty()) throw std::invalid_argument("pmf csv: no rows");
  return Pmf(Eigen::Map<Eigen::ArrayXd>(masses.data(), static_cast<Index>(masses.size())), *tail_mass);
}

}  // namespace bpi
