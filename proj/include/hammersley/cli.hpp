#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hammersley::cli {

// Bad configuration or malformed input; the message names the offending line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Where a value came from, for error messages: "cfg.txt:12", "--n", "default".
struct Setting {
  std::string value;
  std::string origin;
};

// Flat key = value settings for one subcommand.
class ExperimentConfig {
 public:
  void set(const std::string& key, std::string value, std::string origin);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const Setting& at(const std::string& key) const;
  const std::map<std::string, Setting>& values() const { return values_; }

  std::string text(const std::string& key) const { return at(key).value; }
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated

 private:
  std::map<std::string, Setting> values_;
};

// Reads `key = value` lines with `#` comments. A results file written by this
// tool is also accepted: its `# key = value` header block is read back.
ExperimentConfig parse_config(std::istream& is, const std::string& name);

std::string version();

// Writes the reproducibility header: version, subcommand and every setting.
void write_header(std::ostream& os, const std::string& subcommand, const ExperimentConfig& config);

struct RenderOptions {
  double width = 640.0;
  double margin = 20.0;
};

// Structured text (DOMAIN, LINE, PATH, ATTRACTOR records) to SVG.
void render_svg(std::istream& in, std::ostream& out, const RenderOptions& options = {});

// Whole program; returns the exit status (0 ok, 1 runtime failure, 2 bad input).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hammersley::cli
