#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "bpi/config.hpp"
#include "bpi/experiment.hpp"

namespace {

struct Flag {
  const char *name;  // command-line spelling
  const char *key;   // config key
  const char *help;
};

const Flag kFlags[] = {
    {"--offspring", "offspring", "offspring law, e.g. bernoulli(q=0.5)"},
    {"--immigration", "immigration", "immigration law, e.g. pareto(kappa=2)"},
    {"--tag", "tag", "A (heavy immigration) or B (heavy offspring); inferred when absent"},
    {"--p", "p", "fraction of heavy tail carried by immigration in model B"},
    {"--scan", "scan", "fixed, upper or lower"},
    {"-n,--n", "n", "comma-separated horizons"},
    {"-x,--x", "x", "comma-separated absolute x grid"},
    {"--x-multipliers", "x_multipliers", "comma-separated multiples of the threshold x_n"},
    {"--delta-threshold", "delta_threshold", "threshold parameter: delta for kappa <= 2, a for kappa > 2"},
    {"--cutoff", "cutoff", "window size N of the exact engine"},
    {"--tol", "tol", "fixed-point tolerance"},
    {"--budget", "budget", "Monte Carlo sample budget"},
    {"--method", "method", "PLAIN or BIGJUMP"},
    {"--workers", "workers", "Monte Carlo worker threads"},
    {"--suite", "suite", "verify suite: ALL, regvar, process, exact, asymptotics, montecarlo"},
    {"--fixtures", "fixtures", "directory of reference tables for the exact suite"},
};

struct Sub {
  const char *name;
  const char *kind;
  std::string help;
};

std::string schema(const char *header) { return std::string("\nresults.csv columns: ") + header; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact and Monte Carlo tail computations for branching processes with immigration"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 error, 2 failed assertion. Each run writes results.csv and report.json.");

  const std::vector<Sub> subs{
      {"constants", "constants", "Evaluate the asymptotic constants" + schema(bpi::kConstantsCsvHeader)},
      {"exact-scan", "exact-scan", "Exact tail ratios on an (n, x) grid" + schema(bpi::kExactCsvHeader)},
      {"mc-scan", "mc-scan", "Monte Carlo tail ratios on an (n, x) grid" + schema(bpi::kScanCsvHeader)},
      {"compare", "compare", "Monte Carlo against exact values; asserts max |z| < 4" + schema(bpi::kCompareCsvHeader)},
      {"verify", "verify", "Run the property suites" + schema(bpi::kVerifyCsvHeader)},
  };

  std::string config_path, out_dir, seed;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
  std::string chosen;

  for (const auto &s : subs) {
    CLI::App *sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "config file with [model] and [experiment] sections");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed (u64)");
    for (const auto &f : kFlags) sub->add_option(f.name, values[f.key], f.help);
    sub->add_option("--set", sets, "override any config key, as key=value or section.key=value");
    sub->callback([&chosen, kind = s.kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? bpi::kExitOk : bpi::kExitError;
  }

  try {
    bpi::ExperimentConfig config = config_path.empty() ? bpi::ExperimentConfig{} : bpi::load_config(config_path);
    config.kind = bpi::parse_experiment_kind(chosen);
    for (const auto &[key, value] : values)
      if (!value.empty()) bpi::apply_override(config, key, value);
    for (const auto &s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
      bpi::apply_override(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) config.out = out_dir;
    if (!seed.empty()) bpi::apply_override(config, "seed", seed);
    bpi::validate(config);
    return bpi::run(config, std::cerr);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return bpi::kExitError;
  }
}
