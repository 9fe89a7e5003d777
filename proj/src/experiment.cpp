#include "bpi/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "bpi/asymptotics.hpp"
#include "bpi/numeric.hpp"
#include "bpi/rng.hpp"

namespace bpi {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxAbsZ = 4.0;

json constant_json(const AsymptoticConstant &c) {
  return {{"value", c.value}, {"tag", to_string(c.tag)}, {"provenance", c.provenance}};
}

double reference_for(const ModelParams &params, ScanKind scan, int n) {
  if (!std::isfinite(params.kappa)) return kNaN;
  switch (scan) {
    case ScanKind::Fixed: return const_fixed_n(params, n).value;
    case ScanKind::Upper: return const_ld(params).value;
    case ScanKind::Lower: return 0.0;
  }
  return kNaN;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

json model_json(const ModelParams &p) {
  return {{"offspring", to_string(p.offspring)},
          {"immigration", to_string(p.immigration)},
          {"tag", to_string(p.tag)},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"kappa", std::isfinite(p.kappa) ? json(p.kappa) : json("inf")},
          {"p", p.p},
          {"digest", hex(digest(p))}};
}

McOptions mc_options(const ExperimentConfig &config) {
  McOptions o;
  o.budget = config.budget;
  o.seed = config.seed;
  o.method = parse_method(config.method);
  o.workers = config.workers;
  return o;
}

// Monte Carlo rows for any grid and scan kind; row seeds follow the scan order.
std::vector<ScanRow> mc_rows(const ModelParams &params, const std::vector<int> &ns, const XGrid &grid,
                             ScanKind scan, const McOptions &options) {
  const double c = std::isfinite(params.kappa) ? const_ld(params).value : kNaN;
  const bool vacuous = CenteringSpec::for_kappa(params.kappa).rule == CenteringRule::Zero;
  std::vector<ScanRow> rows;
  std::uint64_t index = 0;
  for (int n : ns) {
    for (double x : grid(n)) {
      McOptions opt = options;
      opt.seed = derive_seed(options.seed, index++);
      const double driver_tail = tail(params.driver(), x);
      if (scan == ScanKind::Lower && vacuous && x > 0.0) {
        rows.push_back({params.tag, n, x, "EXACT_ZERO", 0.0, 0.0, {0.0, 0.0}, n * driver_tail, 0.0, c});
        continue;
      }
      Estimate e;
      double denom = n * driver_tail;
      switch (scan) {
        case ScanKind::Fixed:
          e = estimate_exceedance(params, n, x, opt);
          denom = driver_tail;
          break;
        case ScanKind::Upper: e = estimate_tail(params, n, x, opt); break;
        case ScanKind::Lower: e = estimate_lower(params, n, centering(params, n) - x, opt); break;
      }
      rows.push_back({params.tag, n, x, to_string(e.method), e.value, e.std_error, e.ci95, denom,
                      e.value / denom, c});
    }
  }
  return rows;
}

void write_report(const ExperimentConfig &config, json report, double seconds, const std::string &status) {
  report["kind"] = to_string(config.kind);
  report["config"] = serialize(config);
  report["status"] = status;
  report["timestamp"] = utc_timestamp();
  report["wall_clock_seconds"] = seconds;
  std::ofstream out(std::filesystem::path(config.out) / "report.json");
  out << report.dump(2) << '\n';
}

std::ofstream open_results(const ExperimentConfig &config) {
  std::filesystem::create_directories(config.out);
  std::ofstream out(std::filesystem::path(config.out) / "results.csv");
  if (!out) throw std::runtime_error("cannot write results.csv under " + config.out);
  return out;
}

int run_constants(const ExperimentConfig &config, json &report) {
  const ModelParams params = model_from_config(config);
  report["model"] = model_json(params);
  std::ofstream csv = open_results(config);
  csv << kConstantsCsvHeader << '\n';
  json constants = json::object();
  auto emit = [&](const std::string &name, const AsymptoticConstant &c, long n) {
    csv << name << ',' << to_string(c.tag) << ',' << (n > 0 ? std::to_string(n) : "") << ','
        << format_double(c.value) << ",\"" << c.provenance << "\"\n";
    if (n > 0)
      constants[name][std::to_string(n)] = constant_json(c);
    else
      constants[name] = constant_json(c);
  };
  auto attempt = [&](const std::string &name, auto make, long n = 0) {
    try {
      emit(name, make(), n);
    } catch (const DomainError &e) {
      report["skipped"][name] = e.what();
    }
  };
  attempt("const_stationary", [&] { return const_stationary(params); });
  attempt("const_ld", [&] { return const_ld(params); });
  attempt("const_residual_limit", [&] { return const_residual_limit(params); });
  const std::vector<int> ns = config.n.empty() ? std::vector<int>{1} : config.n;
  for (int n : ns) attempt("const_fixed_n", [&] { return const_fixed_n(params, n); }, n);
  if (std::isfinite(params.kappa)) {
    if (params.tag == ModelTag::A)
      attempt("compound_tail", [&] {
        return compound_tail_constant(CompoundRegime::HeavyCount, params.alpha, params.beta, params.kappa);
      });
    else
      attempt("compound_tail", [&] {
        return compound_tail_constant(CompoundRegime::Comparable, params.alpha, params.beta,
                                      params.kappa, params.p);
      });
  }
  if (const auto k = tail_index(params.offspring); k && *k > 1.0) {
    for (int n : ns) {
      attempt("const_generation", [&] {
        return const_underlying(params.alpha, *k, UnderlyingKind::Generation, n);
      }, n);
      attempt("const_progeny", [&] {
        return const_underlying(params.alpha, *k, UnderlyingKind::Progeny, n);
      }, n);
    }
    attempt("const_total_progeny", [&] {
      return const_underlying(params.alpha, *k, UnderlyingKind::TotalProgeny);
    });
  }
  report["constants"] = constants;
  report["centering"] = json::object();
  for (int n : ns) report["centering"][std::to_string(n)] = centering(params, n);
  return kExitOk;
}

int run_exact_scan(const ExperimentConfig &config, json &report) {
  const ModelParams params = model_from_config(config);
  report["model"] = model_json(params);
  const auto rows = exact_ratio_scan(params, config.n, make_grid(params, config), config.scan, config.cutoff);
  std::ofstream csv = open_results(config);
  write_exact_csv(csv, rows);
  report["rows"] = rows.size();
  report["cutoff"] = config.cutoff;
  if (std::isfinite(params.kappa)) report["constants"]["const_ld"] = constant_json(const_ld(params));
  return kExitOk;
}

int run_mc_scan(const ExperimentConfig &config, json &report) {
  const ModelParams params = model_from_config(config);
  report["model"] = model_json(params);
  const McOptions options = mc_options(config);
  std::vector<ScanRow> rows;
  if (!config.x_multipliers.empty() && config.scan != ScanKind::Fixed) {
    const ThresholdSpec spec = ThresholdSpec::for_kappa(params.kappa, *config.delta_threshold);
    rows = config.scan == ScanKind::Upper
               ? ld_ratio_scan(params, config.n, spec, config.x_multipliers, options)
               : lower_deviation_scan(params, config.n, spec, config.x_multipliers, options);
  } else {
    rows = mc_rows(params, config.n, make_grid(params, config), config.scan, options);
  }
  std::ofstream csv = open_results(config);
  write_scan_csv(csv, rows);
  report["rows"] = rows.size();
  if (std::isfinite(params.kappa)) report["constants"]["const_ld"] = constant_json(const_ld(params));
  return kExitOk;
}

int run_compare(const ExperimentConfig &config, json &report) {
  const ModelParams params = model_from_config(config);
  report["model"] = model_json(params);
  const XGrid grid = make_grid(params, config);
  const auto exact = exact_ratio_scan(params, config.n, grid, config.scan, config.cutoff);
  const auto mc = mc_rows(params, config.n, grid, config.scan, mc_options(config));
  std::ofstream csv = open_results(config);
  csv << kCompareCsvHeader << '\n';
  double max_abs_z = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const ExactRow &e = exact[i];
    const ScanRow &m = mc[i];
    const double gap = m.estimate < e.prob.lo ? e.prob.lo - m.estimate
                       : m.estimate > e.prob.hi ? m.estimate - e.prob.hi
                                                : 0.0;
    const double z = gap == 0.0 ? 0.0 : (m.std_error > 0.0 ? gap / m.std_error : std::numeric_limits<double>::infinity());
    max_abs_z = std::max(max_abs_z, z);
    csv << to_string(e.model) << ',' << e.n << ',' << format_double(e.x) << ',' << to_string(e.scan) << ','
        << m.method << ',' << format_double(m.estimate) << ',' << format_double(m.std_error) << ','
        << format_double(e.prob.lo) << ',' << format_double(e.prob.hi) << ',' << format_double(z) << '\n';
  }
  const bool pass = max_abs_z < kMaxAbsZ;
  report["max_abs_z"] = max_abs_z;
  report["assertions"] = json::array({{{"name", "max_abs_z < 4"}, {"pass", pass}}});
  return pass ? kExitOk : kExitAssertion;
}

int run_verify(const ExperimentConfig &config, json &report, std::ostream &log) {
  const auto checks = run_suite(config.suite, config.fixtures, &log);
  std::ofstream csv = open_results(config);
  csv << kVerifyCsvHeader << '\n';
  json list = json::array();
  bool all = true;
  for (const auto &c : checks) {
    all = all && c.pass;
    csv << c.suite << ',' << c.name << ',' << (c.pass ? "pass" : "FAIL") << ",\"" << c.detail << "\"\n";
    list.push_back({{"suite", c.suite}, {"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  report["assertions"] = list;
  report["passed"] = std::count_if(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
  report["total"] = checks.size();
  return all ? kExitOk : kExitAssertion;
}

}  // namespace

ModelParams model_from_config(const ExperimentConfig &config) {
  std::optional<ModelTag> tag;
  if (config.tag) tag = parse_model_tag(*config.tag);
  return make_model(parse_law(config.offspring), parse_law(config.immigration), tag, config.p);
}

XGrid make_grid(const ModelParams &params, const ExperimentConfig &config) {
  if (!config.x.empty()) {
    const auto xs = config.x;
    return [xs](int) { return xs; };
  }
  if (!config.delta_threshold) throw DomainError("x_multipliers needs delta_threshold");
  const ThresholdSpec spec = ThresholdSpec::for_kappa(params.kappa, *config.delta_threshold);
  const auto mults = config.x_multipliers;
  return [spec, mults](int n) {
    std::vector<double> xs;
    for (double m : mults) xs.push_back(m * threshold(spec, n));
    return xs;
  };
}

std::vector<ExactRow> exact_ratio_scan(const ModelParams &params, const std::vector<int> &ns,
                                       const XGrid &grid, ScanKind scan, Index cutoff) {
  std::vector<int> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::vector<Pmf> laws = total_population_sequence(params, sorted, cutoff);
  const bool vacuous = CenteringSpec::for_kappa(params.kappa).rule == CenteringRule::Zero;

  std::vector<ExactRow> rows;
  for (int n : ns) {
    const Pmf &s = laws[std::lower_bound(sorted.begin(), sorted.end(), n) - sorted.begin()];
    const double d = centering(params, n);
    const double reference = reference_for(params, scan, n);
    for (double x : grid(n)) {
      const double driver_tail = tail(params.driver(), x);
      ExactRow row{params.tag, n, x, scan, {0.0, 0.0}, n * driver_tail, {0.0, 0.0}, reference, false};
      switch (scan) {
        case ScanKind::Fixed:
          row.prob = tail_of(s, x);
          row.theory_denominator = driver_tail;
          break;
        case ScanKind::Upper: row.prob = tail_of(s, x + d); break;
        case ScanKind::Lower: {
          const double level = d - x;
          if (vacuous && x > 0.0)
            row.vacuous = true;
          else if (level >= 0.0)
            row.prob = cdf_of(s, std::floor(level));
          break;
        }
      }
      row.ratio = {row.prob.lo / row.theory_denominator, row.prob.hi / row.theory_denominator};
      rows.push_back(row);
    }
  }
  return rows;
}

void write_exact_csv(std::ostream &out, const std::vector<ExactRow> &rows) {
  out << kExactCsvHeader << '\n';
  for (const auto &r : rows)
    out << to_string(r.model) << ',' << r.n << ',' << format_double(r.x) << ',' << to_string(r.scan) << ','
        << format_double(r.prob.lo) << ',' << format_double(r.prob.hi) << ','
        << format_double(r.theory_denominator) << ',' << format_double(r.ratio.lo) << ','
        << format_double(r.ratio.hi) << ',' << format_double(r.reference) << '\n';
}

int run(const ExperimentConfig &config, std::ostream &log) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  json report = json::object();
  int code = kExitError;
  try {
    validate(config);
    std::filesystem::create_directories(config.out);
    switch (config.kind) {
      case ExperimentKind::Constants: code = run_constants(config, report); break;
      case ExperimentKind::ExactScan: code = run_exact_scan(config, report); break;
      case ExperimentKind::McScan: code = run_mc_scan(config, report); break;
      case ExperimentKind::Compare: code = run_compare(config, report); break;
      case ExperimentKind::Verify: code = run_verify(config, report, log); break;
    }
  } catch (const std::exception &e) {
    log << "error: " << e.what() << '\n';
    report["error"] = e.what();
    code = kExitError;
  }
  try {
    std::filesystem::create_directories(config.out);
    write_report(config, report, elapsed(),
                 code == kExitOk ? "ok" : code == kExitAssertion ? "assertion_failed" : "error");
  } catch (const std::exception &e) {
    log << "error: cannot write report: " << e.what() << '\n';
    return kExitError;
  }
  return code;
}

}  // namespace bpi
