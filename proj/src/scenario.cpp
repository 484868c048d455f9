#include "pdm/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pdm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char ch : key) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '.';
    if (!ok) return false;
  }
  return key.find("..") == std::string::npos;
}

// from_chars keeps parsing independent of the global locale.
std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string format_override(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(source, line_no, "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(source, line_no, "missing value for '" + key + "'");
    if (const auto it = cfg.entries_.find(key); it != cfg.entries_.end()) {
      throw ConfigError(source, line_no,
                        "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    }
    cfg.entries_[key] = {value, line_no};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, message);
}

std::string Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_, 0, "missing required key '" + key + "'");
  return it->second.value;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::number(const std::string& key) const {
  const auto v = parse_double(get(key));
  if (!v) fail(key, "value of '" + key + "' is not a number");
  return *v;
}

double Config::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int Config::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const std::string t = trim(get(key));
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(key, "value of '" + key + "' is not an integer");
  return value;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(get(key), ',')) {
    const auto v = parse_double(item);
    if (!v) fail(key, "'" + item + "' in '" + key + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& item : split(get(key), ',')) {
    if (item.empty()) fail(key, "empty item in '" + key + "'");
    out.push_back(item);
  }
  return out;
}

ParamMap Config::section_numbers(const std::string& prefix, const std::vector<std::string>& skip) const {
  ParamMap out;
  const std::string head = prefix + ".";
  for (const auto& [key, entry] : entries_) {
    if (key.rfind(head, 0) != 0 || key == head + "kind") continue;
    const std::string name = key.substr(head.size());
    if (name.find('.') != std::string::npos || std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
    const auto v = parse_double(entry.value);
    if (!v) throw ConfigError(source_, entry.line, "value of '" + key + "' is not a number");
    out[name] = *v;
  }
  return out;
}

int Config::line_of(const std::string& key) const {
  // "grid" style section names map to their first key.
  for (const auto& [k, entry] : entries_) {
    if (k == key || k.rfind(key + ".", 0) == 0) return entry.line;
  }
  return 0;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    entries_[key] = {value, 0};
  } else {
    it->second = {value, 0};
  }
}

std::string Config::resolved() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    if (!out.empty()) out += "; ";
    out += key + "=" + entry.value;
  }
  return out;
}

Scenario build_scenario(Config config, const Overrides& overrides) {
  if (overrides.theta) config.set("theta", format_override(*overrides.theta));
  if (overrides.alpha) config.set("ordering.alpha", format_override(*overrides.alpha));
  if (overrides.gamma) config.set("ordering.gamma", format_override(*overrides.gamma));

  auto wrap = [&](const std::string& key, auto&& make) {
    try {
      return make();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(config.source(), config.line_of(key), "'" + key + "': " + e.what());
    }
  };

  const std::string mass_kind = config.get("mass.kind", "constant");
  ParamMap mass_params = config.section_numbers("mass");
  if (mass_kind == "constant" && !mass_params.count("m0")) mass_params["m0"] = 1.0;
  ScalarField1D mass = wrap("mass.kind", [&] { return make_mass_profile(mass_kind, mass_params); });

  const std::string pot_kind = config.get("potential.kind", "zero");
  const ParamMap pot_params = config.section_numbers("potential");
  ScalarField1D potential = wrap("potential.kind", [&] { return make_potential(pot_kind, pot_params); });

  OrderingPreset ordering =
      wrap("ordering.preset", [&] { return OrderingPreset::from_name(config.get("ordering.preset", "zhu_kroemer")); });
  if (config.has("ordering.alpha") || config.has("ordering.gamma")) {
    const double a = config.number("ordering.alpha", ordering.params.alpha());
    const double g = config.number("ordering.gamma", ordering.params.gamma());
    ordering = OrderingPreset::custom(a, g);
  }

  const double theta_value = config.number("theta", 0.5);
  Discretization theta = wrap("theta", [&] { return Discretization(theta_value); });

  const double hbar = config.number("hbar", 1.0);
  if (!(hbar > 0.0)) throw ConfigError(config.source(), 0, "hbar must be positive");

  std::optional<Grid1D> grid;
  if (config.has("grid.q_min") || config.has("grid.q_max") || config.has("grid.n_points")) {
    grid = wrap("grid", [&] {
      return Grid1D(config.number("grid.q_min"), config.number("grid.q_max"), config.integer("grid.n_points", 201));
    });
    try {
      grid->require_excludes(mass.singular_points());
    } catch (const std::exception& e) {
      throw ConfigError(config.source(), 0, std::string("grid: ") + e.what());
    }
  }

  return Scenario{std::move(config), std::move(mass), std::move(potential), ordering, theta,
                  PhysicalConstants(hbar), grid};
}

}  // namespace pdm::cli
