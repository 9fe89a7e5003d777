#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bpi/config.hpp"
#include "bpi/exact.hpp"
#include "bpi/model.hpp"
#include "bpi/montecarlo.hpp"

namespace bpi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAssertion = 2;

/// One row of an exact ratio scan. prob and ratio are certified intervals.
struct ExactRow {
  ModelTag model;
  int n;
  double x;
  ScanKind scan;
  Interval prob;
  double theory_denominator;
  Interval ratio;
  double reference;  // const_fixed_n, const_ld or 0, by scan kind; NaN for a light driver
  bool vacuous;      // lower deviations with kappa <= 1: the event is empty
};

inline constexpr const char *kExactCsvHeader =
    "model,n,x,scan,prob_lo,prob_hi,theory_denominator,ratio_lo,ratio_hi,reference";
inline constexpr const char *kCompareCsvHeader =
    "model,n,x,scan,method,estimate,stderr,exact_lo,exact_hi,z";
inline constexpr const char *kConstantsCsvHeader = "name,tag,n,value,provenance";
inline constexpr const char *kVerifyCsvHeader = "suite,check,pass,detail";

/// The x values for horizon n: an absolute list, or multipliers of x_n.
using XGrid = std::function<std::vector<double>(int n)>;
XGrid make_grid(const ModelParams &params, const ExperimentConfig &config);

/// Exact probabilities for every (n, x), sharing the S_n computations across n.
std::vector<ExactRow> exact_ratio_scan(const ModelParams &params, const std::vector<int> &ns,
                                       const XGrid &grid, ScanKind scan, Index cutoff);
void write_exact_csv(std::ostream &out, const std::vector<ExactRow> &rows);

ModelParams model_from_config(const ExperimentConfig &config);

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass;
  std::string detail;
};

/// Property suites: regvar, process, exact, asymptotics, montecarlo, or ALL.
std::vector<CheckResult> run_suite(const std::string &suite, const std::string &fixtures_dir,
                                   std::ostream *progress = nullptr);
const std::vector<std::string> &suite_names();

/// Runs the configured experiment, writes results.csv and report.json under config.out and
/// returns the exit code. Errors are reported on `log` and mapped to kExitError.
int run(const ExperimentConfig &config, std::ostream &log);

}  // namespace bpi
