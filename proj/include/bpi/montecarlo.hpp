#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bpi/asymptotics.hpp"
#include "bpi/model.hpp"
#include "bpi/pmf.hpp"

namespace bpi {

enum class Method { Plain, BigJump };

std::string to_string(Method method);
Method parse_method(const std::string &text);

struct McOptions {
  std::uint64_t budget = 100000;
  std::uint64_t seed = 1;
  Method method = Method::Plain;
  unsigned workers = 1;
  std::uint64_t block_size = 4096;
  double mixture_weight = 0.5;  // probability of the tilted component in BIGJUMP
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  Interval ci95{0.0, 0.0};
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  Method method = Method::Plain;
  std::uint64_t hits = 0;
  bool low_confidence = false;  // no hits: value 0 and only the one-sided bound 3 / budget
};

/// P(S_n - d_n > x).
Estimate estimate_tail(const ModelParams &params, int n, double x, const McOptions &options);
/// P(S_n > level), no centering.
Estimate estimate_exceedance(const ModelParams &params, int n, double level, const McOptions &options);
/// P(S_n <= level) by plain sampling.
Estimate estimate_lower(const ModelParams &params, int n, double level, const McOptions &options);

/// Exact binomial 95% interval for hits out of trials.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials);

/// One row of a ratio scan, shared by the exact and sampled scans.
struct ScanRow {
  ModelTag model;
  int n;
  double x;
  std::string method;  // PLAIN, BIGJUMP, EXACT or EXACT_ZERO
  double estimate;
  double std_error;
  Interval ci;
  double theory_denominator;
  double ratio;
  double const_ld;
};

void write_scan_csv(std::ostream &out, const std::vector<ScanRow> &rows);
inline constexpr const char *kScanCsvHeader =
    "model,n,x,method,estimate,stderr,ci_lo,ci_hi,theory_denominator,ratio,const_ld";

/// Rows at x = m * x_n for each n and multiplier m, ratio against n P(driver > x).
std::vector<ScanRow> ld_ratio_scan(const ModelParams &params, const std::vector<int> &ns,
                                   const ThresholdSpec &spec, const std::vector<double> &multipliers,
                                   const McOptions &options);

/// Ratios P(S_n - d_n <= -x) / (n P(driver > x)); exact zeros when kappa <= 1.
std::vector<ScanRow> lower_deviation_scan(const ModelParams &params, const std::vector<int> &ns,
                                          const ThresholdSpec &spec,
                                          const std::vector<double> &multipliers,
                                          const McOptions &options);

}  // namespace bpi
