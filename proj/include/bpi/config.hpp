#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpi {

/// Malformed configuration text, with the position of the offending token (1-based).
struct ConfigError : std::runtime_error {
  ConfigError(const std::string &source, int line, int column, const std::string &message);
  int line;
  int column;
};

enum class ExperimentKind { ExactScan, McScan, Constants, Verify, Compare };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string &text);

/// Which ratio a scan reports.
///   fixed: P(S_n > x) / P(driver > x)
///   upper: P(S_n - d_n > x) / (n P(driver > x))
///   lower: P(S_n - d_n <= -x) / (n P(driver > x))
enum class ScanKind { Fixed, Upper, Lower };

std::string to_string(ScanKind kind);
ScanKind parse_scan_kind(const std::string &text);

struct ExperimentConfig {
  // [model]
  std::string offspring;
  std::string immigration;
  std::optional<std::string> tag;  // A or B; inferred when absent
  std::optional<double> p;

  // [experiment]
  ExperimentKind kind = ExperimentKind::Constants;
  ScanKind scan = ScanKind::Upper;
  std::vector<int> n;
  std::vector<double> x;              // absolute grid
  std::vector<double> x_multipliers;  // grid relative to x_n
  std::optional<double> delta_threshold;  // delta (kappa <= 2) or a (kappa > 2) of x_n
  long cutoff = 4096;
  double tol = 1e-10;
  std::uint64_t budget = 100000;
  std::uint64_t seed = 1;
  std::string method = "PLAIN";
  unsigned workers = 1;
  std::string suite = "ALL";
  std::string fixtures = "tests/fixtures";  // reference tables read by the exact verify suite
  std::string out = "out";

  bool operator==(const ExperimentConfig &) const = default;
};

/// Parses `key = value` lines under [model] and [experiment] headers. `#` starts a comment.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "<config>");
ExperimentConfig load_config(const std::string &path);

/// Sets one key given as `section.key` or a bare key; used for command-line overrides.
void apply_override(ExperimentConfig &config, const std::string &key, const std::string &value);

/// Checks the kind-specific required fields.
void validate(const ExperimentConfig &config);

std::string serialize(const ExperimentConfig &config);

}  // namespace bpi
