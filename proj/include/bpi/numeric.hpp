#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bpi {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when a 64-bit population accumulator would wrap.
struct SaturationError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Round-off beyond what the transform kernels can produce.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Neumaier compensated accumulator.
template <typename Scalar = double>
class CompensatedSum {
 public:
  CompensatedSum &operator+=(Scalar v) {
    const Scalar t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

template <typename Range>
auto compensated_sum(const Range &values) {
  CompensatedSum<std::decay_t<decltype(*std::begin(values))>> acc;
  for (const auto &v : values) acc += v;
  return acc.value();
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw SaturationError("64-bit population accumulator saturated");
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw SaturationError("64-bit population accumulator saturated");
  return out;
}

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string &text);

}  // namespace bpi
