#include "bpi/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bpi/numeric.hpp"

namespace bpi {

namespace {

const std::set<std::string> kModelKeys{"offspring", "immigration", "tag", "p"};
const std::set<std::string> kExperimentKeys{"kind",     "scan", "n",      "x",      "x_multipliers",
                                            "delta_threshold", "cutoff", "tol", "budget", "seed",
                                            "method",   "workers", "suite", "fixtures", "out"};

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(const std::string &text) {
  const std::string t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw std::invalid_argument("expected an integer, got '" + t + "'");
  return v;
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element");
    out.push_back(item);
  }
  return out;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string &text, F parse) {
  std::vector<T> out;
  for (const auto &item : split_list(text)) out.push_back(parse(item));
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T> &values, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

void set_field(ExperimentConfig &c, const std::string &section, const std::string &key,
               const std::string &value) {
  if (section == "model") {
    if (key == "offspring") c.offspring = value;
    else if (key == "immigration") c.immigration = value;
    else if (key == "tag") {
      if (value != "A" && value != "B") throw std::invalid_argument("tag must be A or B");
      c.tag = value;
    } else if (key == "p") c.p = parse_double(value);
    else throw std::invalid_argument("unknown key '" + key + "' in [model]");
    return;
  }
  if (section != "experiment") throw std::invalid_argument("unknown section [" + section + "]");
  if (key == "kind") c.kind = parse_experiment_kind(value);
  else if (key == "scan") c.scan = parse_scan_kind(value);
  else if (key == "n") c.n = parse_list<int>(value, parse_int<int>);
  else if (key == "x") c.x = parse_list<double>(value, parse_double);
  else if (key == "x_multipliers") c.x_multipliers = parse_list<double>(value, parse_double);
  else if (key == "delta_threshold") c.delta_threshold = parse_double(value);
  else if (key == "cutoff") c.cutoff = parse_int<long>(value);
  else if (key == "tol") c.tol = parse_double(value);
  else if (key == "budget") c.budget = parse_int<std::uint64_t>(value);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(value);
  else if (key == "method") {
    if (value != "PLAIN" && value != "BIGJUMP") throw std::invalid_argument("method must be PLAIN or BIGJUMP");
    c.method = value;
  } else if (key == "workers") c.workers = parse_int<unsigned>(value);
  else if (key == "suite") c.suite = value;
  else if (key == "fixtures") c.fixtures = value;
  else if (key == "out") c.out = value;
  else throw std::invalid_argument("unknown key '" + key + "' in [experiment]");
}

}  // namespace

ConfigError::ConfigError(const std::string &source, int line_, int column_, const std::string &message)
    : std::runtime_error(source + ":" + std::to_string(line_) + ":" + std::to_string(column_) + ": " + message),
      line(line_),
      column(column_) {}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ExactScan: return "exact-scan";
    case ExperimentKind::McScan: return "mc-scan";
    case ExperimentKind::Constants: return "constants";
    case ExperimentKind::Verify: return "verify";
    case ExperimentKind::Compare: return "compare";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string &text) {
  for (auto k : {ExperimentKind::ExactScan, ExperimentKind::McScan, ExperimentKind::Constants,
                 ExperimentKind::Verify, ExperimentKind::Compare})
    if (to_string(k) == text) return k;
  throw std::invalid_argument("unknown experiment kind '" + text + "'");
}

std::string to_string(ScanKind kind) {
  switch (kind) {
    case ScanKind::Fixed: return "fixed";
    case ScanKind::Upper: return "upper";
    case ScanKind::Lower: return "lower";
  }
  return "unknown";
}

ScanKind parse_scan_kind(const std::string &text) {
  for (auto k : {ScanKind::Fixed, ScanKind::Upper, ScanKind::Lower})
    if (to_string(k) == text) return k;
  throw std::invalid_argument("unknown scan kind '" + text + "'");
}

ExperimentConfig parse_config(const std::string &text, const std::string &source) {
  ExperimentConfig config;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = raw.substr(0, raw.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const int col = static_cast<int>(first) + 1;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string::npos) throw ConfigError(source, lineno, col, "unterminated section header");
      if (!trim(line.substr(close + 1)).empty())
        throw ConfigError(source, lineno, static_cast<int>(close) + 2, "text after section header");
      section = trim(line.substr(first + 1, close - first - 1));
      if (section != "model" && section != "experiment")
        throw ConfigError(source, lineno, col + 1, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, col, "expected key = value");
    const std::string key = trim(line.substr(first, eq - first));
    if (section.empty()) throw ConfigError(source, lineno, col, "key '" + key + "' outside any section");
    if (key.empty()) throw ConfigError(source, lineno, col, "missing key before '='");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(source, lineno, col, "duplicate key '" + key + "'");
    const std::string rest = line.substr(eq + 1);
    const auto vstart = rest.find_first_not_of(" \t");
    const int vcol = static_cast<int>(eq) + 2 + static_cast<int>(vstart == std::string::npos ? 0 : vstart);
    const std::string value = trim(rest);
    if (value.empty()) throw ConfigError(source, lineno, vcol, "missing value for '" + key + "'");
    const bool known = section == "model" ? kModelKeys.count(key) : kExperimentKeys.count(key);
    if (!known) throw ConfigError(source, lineno, col, "unknown key '" + key + "' in [" + section + "]");
    try {
      set_field(config, section, key, value);
    } catch (const std::exception &e) {
      throw ConfigError(source, lineno, vcol, e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(ExperimentConfig &config, const std::string &key, const std::string &value) {
  std::string section, name = key;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
  } else {
    section = kModelKeys.count(key) ? "model" : "experiment";
  }
  set_field(config, section, name, value);
}

void validate(const ExperimentConfig &c) {
  auto need = [](bool ok, const std::string &what) {
    if (!ok) throw std::invalid_argument("config: " + what);
  };
  if (c.kind != ExperimentKind::Verify) {
    need(!c.offspring.empty(), "[model] offspring is required");
    need(!c.immigration.empty(), "[model] immigration is required");
  }
  if (c.kind == ExperimentKind::ExactScan || c.kind == ExperimentKind::McScan ||
      c.kind == ExperimentKind::Compare) {
    need(!c.n.empty(), "n list is required");
    need(std::all_of(c.n.begin(), c.n.end(), [](int v) { return v >= 1; }), "every n must be >= 1");
    need(!c.x.empty() || !c.x_multipliers.empty(), "x or x_multipliers is required");
    need(c.x.empty() || c.x_multipliers.empty(), "give either x or x_multipliers, not both");
    need(c.x_multipliers.empty() || c.delta_threshold.has_value(),
         "x_multipliers needs delta_threshold");
  }
  if (c.kind == ExperimentKind::ExactScan || c.kind == ExperimentKind::Compare)
    need(c.cutoff >= 1, "cutoff must be positive");
  if (c.kind == ExperimentKind::McScan || c.kind == ExperimentKind::Compare)
    need(c.budget >= 1000, "budget must be at least 1000");
  need(c.tol > 0.0, "tol must be positive");
}

std::string serialize(const ExperimentConfig &c) {
  std::ostringstream out;
  auto ints = [](int v) { return std::to_string(v); };
  out << "[model]\n";
  if (!c.offspring.empty()) out << "offspring = " << c.offspring << '\n';
  if (!c.immigration.empty()) out << "immigration = " << c.immigration << '\n';
  if (c.tag) out << "tag = " << *c.tag << '\n';
  if (c.p) out << "p = " << format_double(*c.p) << '\n';
  out << "\n[experiment]\n";
  out << "kind = " << to_string(c.kind) << '\n';
  out << "scan = " << to_string(c.scan) << '\n';
  if (!c.n.empty()) out << "n = " << join(c.n, ints) << '\n';
  if (!c.x.empty()) out << "x = " << join(c.x, format_double) << '\n';
  if (!c.x_multipliers.empty()) out << "x_multipliers = " << join(c.x_multipliers, format_double) << '\n';
  if (c.delta_threshold) out << "delta_threshold = " << format_double(*c.delta_threshold) << '\n';
  out << "cutoff = " << c.cutoff << '\n';
  out << "tol = " << format_double(c.tol) << '\n';
  out << "budget = " << c.budget << '\n';
  out << "seed = " << c.seed << '\n';
  out << "method = " << c.method << '\n';
  out << "workers = " << c.workers << '\n';
  out << "suite = " << c.suite << '\n';
  out << "fixtures = " << c.fixtures << '\n';
  out << "out = " << c.out << '\n';
  return out.str();
}

}  // namespace bpi
