#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "hammersley/cli.hpp"

#ifndef HAMMERSLEY_VERSION
#define HAMMERSLEY_VERSION "0.0.0"
#endif

namespace hammersley::cli {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string normalize_key(std::string key) {
  for (auto& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

[[noreturn]] void bad_value(const Setting& s, const std::string& key, const char* want) {
  throw ConfigError(s.origin + ": " + key + " = '" + s.value + "' is not " + want);
}

double to_real(const std::string& text, bool& ok) {
  const auto t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  ok = !t.empty() && *end == '\0' && errno == 0 && std::isfinite(v);
  return v;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, std::string value, std::string origin) {
  values_[normalize_key(key)] = Setting{trim(value), std::move(origin)};
}

const Setting& ExperimentConfig::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing setting '" + key + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const {
  const auto& s = at(key);
  bool ok = false;
  const double v = to_real(s.value, ok);
  if (!ok) bad_value(s, key, "a finite number");
  return v;
}

long long ExperimentConfig::integer(const std::string& key) const {
  const auto& s = at(key);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.value.c_str(), &end, 10);
  if (s.value.empty() || *end != '\0' || errno != 0) bad_value(s, key, "an integer");
  return v;
}

bool ExperimentConfig::flag(const std::string& key) const {
  const auto& s = at(key);
  if (s.value == "true" || s.value == "1" || s.value == "yes") return true;
  if (s.value == "false" || s.value == "0" || s.value == "no") return false;
  bad_value(s, key, "true or false");
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  const auto& s = at(key);
  std::vector<double> out;
  std::stringstream in(s.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    bool ok = false;
    out.push_back(to_real(item, ok));
    if (!ok) bad_value(s, key, "a comma-separated list of numbers");
  }
  if (out.empty()) bad_value(s, key, "a non-empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& is, const std::string& name) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  bool results_file = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("# hammersley ", 0) == 0) {
      results_file = true;
      continue;
    }
    std::string body = line;
    if (results_file) {
      // The header block ends at the first data line.
      if (line.empty() || line[0] != '#') break;
      body = line.substr(1);
    } else {
      body = body.substr(0, body.find('#'));
    }
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    const std::string where = name + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (cfg.has(normalize_key(key))) throw ConfigError(where + ": duplicate key '" + key + "'");
    cfg.set(key, body.substr(eq + 1), where);
  }
  return cfg;
}

std::string version() { return HAMMERSLEY_VERSION; }

void write_header(std::ostream& os, const std::string& subcommand, const ExperimentConfig& config) {
  os << "# hammersley " << version() << '\n';
  os << "# subcommand = " << subcommand << '\n';
  // The output path is not part of the experiment.
  for (const auto& [key, s] : config.values()) {
    if (key == "out") continue;
    os << "# " << key << " =" << (s.value.empty() ? "" : " ") << s.value << '\n';
  }
}

}  // namespace hammersley::cli
