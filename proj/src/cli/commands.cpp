#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hammersley/checks.hpp"
#include "hammersley/cli.hpp"
#include "hammersley/pinning.hpp"
#include "hammersley/sticks.hpp"

namespace hammersley::cli {
namespace {

struct Key {
  std::string name;
  std::string fallback;
  std::string help;
};

// Shortest text that reads back to the same double.
std::string shortest(double x) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
}

std::string joined(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ",") + shortest(x);
  return out;
}

const std::vector<Key> kDescriptorKeys{
    {"kind", "positive_cauchy", "positive_cauchy | pareto | exponential | deterministic"},
    {"c", "1", "positive Cauchy tail coefficient"},
    {"alpha", "1", "Pareto exponent"},
    {"scale", "1", "Pareto scale"},
    {"mean", "1", "exponential mean"},
    {"length", "1", "deterministic length"},
};

std::vector<Key> keys_for(const std::string& sub) {
  std::vector<Key> k{{"seed", "1", "random seed (default from HAMMERSLEY_SEED)"}};
  if (sub == "lines") {
    k.insert(k.end(), {{"n", "100", "side length"},
                       {"lambda2", "1", "bulk intensity"},
                       {"domain", "square", "square | triangle"},
                       {"boundary_births", "false", "stationary births on the boundary"},
                       {"replicas", "10", "number of replicas"},
                       {"lines_out", "", "structured text of replica 0"}});
  } else if (sub == "influence") {
    k.insert(k.end(), {{"n", "12", "triangle size"},
                       {"lambda1", "1", "axis intensity"},
                       {"lambda2", "1", "bulk intensity"},
                       {"replicas", "1", "number of replicas"},
                       {"scenery_in", "", "scenery file (t x per line) instead of sampling"},
                       {"axis_in", "", "axis file instead of sampling"},
                       {"paths_out", "", "lines, paths and attractors of replica 0"}});
  } else if (sub == "pinning") {
    k.insert(k.end(), {{"n", "100", "triangle size"},
                       {"lambda1", "1", "axis intensities, comma separated"},
                       {"lambda2", "1", "bulk intensity"},
                       {"replicas", "10", "number of replicas"},
                       {"point_to_point", "false", "chain from (0,0) to (n,0)"},
                       {"spanning", "true", "compute the spanning indicator"}});
  } else if (sub == "sticks") {
    k.insert(k.end(), kDescriptorKeys.begin(), kDescriptorKeys.end());
    k.insert(k.end(), {{"lambda", "1", "seed intensity"},
                       {"T", "1000", "window length"},
                       {"replicas", "100", "number of replicas"},
                       {"bonus_mode", "every_flight", "every_flight | first_flight_only"}});
  } else if (sub == "lambda-c") {
    k.insert(k.end(), kDescriptorKeys.begin(), kDescriptorKeys.end());
    const LambdaSearch def;
    k.insert(k.end(), {{"windows", joined(def.windows), "window lengths"},
                       {"grid", joined(def.grid), "probed intensities"},
                       {"replicas", std::to_string(def.replicas), "replicas per probe"},
                       {"min_decay", shortest(def.min_decay), "shallowest fitted decay exponent"},
                       {"max_decay", shortest(def.max_decay), "steepest fitted decay exponent"},
                       {"z", shortest(def.z), "significance and interval width"}});
  }
  k.push_back({"out", "-", "output file, - for stdout"});
  return k;
}

std::string dashed(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

// Defaults, then the environment seed, then the config file, then flags.
ExperimentConfig merge(const std::string& sub, const std::vector<Key>& keys, const std::string& config_path,
                       const std::map<std::string, std::string>& flags) {
  ExperimentConfig cfg;
  for (const auto& k : keys) cfg.set(k.name, k.fallback, "default");
  if (const char* env = std::getenv("HAMMERSLEY_SEED"); env && *env) cfg.set("seed", env, "HAMMERSLEY_SEED");
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError(config_path + ": cannot open");
    const auto file = parse_config(in, config_path);
    for (const auto& [key, s] : file.values()) {
      if (key == "subcommand") {
        if (s.value != sub) throw ConfigError(s.origin + ": written by '" + s.value + "', not '" + sub + "'");
        continue;
      }
      if (!cfg.has(key)) throw ConfigError(s.origin + ": unknown key '" + key + "' for '" + sub + "'");
      cfg.set(key, s.value, s.origin);
    }
  }
  for (const auto& [key, value] : flags) cfg.set(key, value, "--" + dashed(key));
  return cfg;
}

void require(bool ok, const ExperimentConfig& cfg, const std::string& key, const char* want) {
  if (!ok) throw ConfigError(cfg.at(key).origin + ": " + key + " = " + cfg.text(key) + " must be " + want);
}

double positive(const ExperimentConfig& cfg, const std::string& key) {
  const double v = cfg.real(key);
  require(v > 0, cfg, key, "positive");
  return v;
}

double non_negative(const ExperimentConfig& cfg, const std::string& key) {
  const double v = cfg.real(key);
  require(v >= 0, cfg, key, ">= 0");
  return v;
}

std::size_t count(const ExperimentConfig& cfg, const std::string& key) {
  const auto v = cfg.integer(key);
  require(v >= 1 && v <= 100000000, cfg, key, "between 1 and 1e8");
  return std::size_t(v);
}

std::uint64_t seed_of(const ExperimentConfig& cfg) {
  const auto v = cfg.integer("seed");
  require(v >= 0, cfg, "seed", ">= 0");
  return std::uint64_t(v);
}

DistributionDescriptor descriptor(const ExperimentConfig& cfg) {
  const auto kind = cfg.text("kind");
  if (kind == "positive_cauchy") return DistributionDescriptor::make_positive_cauchy(positive(cfg, "c"));
  if (kind == "pareto") return DistributionDescriptor::make_pareto(positive(cfg, "alpha"), positive(cfg, "scale"));
  if (kind == "exponential") return DistributionDescriptor::make_exponential(positive(cfg, "mean"));
  if (kind == "deterministic") return DistributionDescriptor::make_deterministic(positive(cfg, "length"));
  throw ConfigError(cfg.at("kind").origin + ": unknown kind '" + kind + "'");
}

std::string mean_text(const MeanError& m) { return format_double(m.mean) + " +- " + format_double(m.stderr_); }

}  // namespace

namespace {

// Validated experiment, ready to run.
using Job = std::function<void(std::ostream&)>;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

std::string read_file(const ExperimentConfig& cfg, const std::string& key) {
  std::ifstream f(cfg.text(key), std::ios::binary);
  if (!f) throw ConfigError(cfg.at(key).origin + ": cannot open " + cfg.text(key));
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Job plan_lines(const ExperimentConfig& cfg) {
  const double n = positive(cfg, "n");
  const double lambda2 = non_negative(cfg, "lambda2");
  const auto shape = cfg.text("domain");
  require(shape == "square" || shape == "triangle", cfg, "domain", "square or triangle");
  const bool births = cfg.flag("boundary_births");
  const auto replicas = count(cfg, "replicas");
  const auto seed = seed_of(cfg);
  const auto lines_out = cfg.text("lines_out");
  return [=](std::ostream& out) {
    const auto d = shape == "square" ? Domain::square(n) : Domain::triangle(n);
    // Chains per unit of the natural length: the side, or n / sqrt 2 along the triangle axis.
    const double unit = shape == "square" ? n : n / std::numbers::sqrt2;
    out << "replica,points,lines,chain,chain_per_n\n";
    std::vector<double> per_n;
    for (std::size_t r = 0; r < replicas; ++r) {
      RandomSource rng(seed, Stream::interior, r);
      const auto config = sample_poisson_in_domain(d, lambda2, rng);
      RandomSource brng(seed, Stream::boundary_left_up, r);
      const auto b = births ? sample_boundary_births(d, lambda2, brng) : std::vector<BirthEvent>{};
      const auto ls = build_broken_lines(config, b, d);
      const auto chain = lis_oracle(config);
      per_n.push_back(double(chain) / unit);
      out << r << ',' << config.size() << ',' << count_lines(ls) << ',' << chain << ',' << format_double(per_n.back())
          << '\n';
      if (r == 0 && !lines_out.empty()) {
        std::ostringstream os;
        write_lineset(os, ls);
        write_file(lines_out, os.str());
      }
    }
    out << "# mean chain_per_n = " << mean_text(summarize(per_n)) << '\n';
  };
}

Job plan_influence(const ExperimentConfig& cfg) {
  const double n = positive(cfg, "n");
  const double lambda1 = non_negative(cfg, "lambda1");
  const double lambda2 = non_negative(cfg, "lambda2");
  const auto replicas = count(cfg, "replicas");
  const auto seed = seed_of(cfg);
  const auto paths_out = cfg.text("paths_out");
  std::optional<PlanarConfig> scenery;
  std::optional<AxisPoints> axis;
  try {
    if (!cfg.text("scenery_in").empty()) {
      std::istringstream in(read_file(cfg, "scenery_in"));
      scenery = read_config(in);
    }
    if (!cfg.text("axis_in").empty()) {
      std::istringstream in(read_file(cfg, "axis_in"));
      axis = read_axis(in);
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("input file: ") + e.what());
  }
  return [=](std::ostream& out) {
    const auto d = Domain::triangle(n);
    out << "replica,index,t,essential,tau,t_hat,reaches_boundary\n";
    for (std::size_t r = 0; r < replicas; ++r) {
      RandomSource rng(seed, Stream::interior, r);
      const auto sc = scenery ? *scenery : sample_poisson_in_domain(d, lambda2, rng);
      const auto ax = axis ? *axis : coupled_axis_points(n, lambda1, seed, r);
      for (const auto& p : sc.points()) {
        if (!d.contains(p)) throw InvalidInput("scenery point outside Triangle(n)");
      }
      const auto base = build_broken_lines(sc, d);
      const auto update = augment_with_axis_points(base, sc, ax);
      const auto attractors = sequential_attractors(base, sc, ax);
      const auto essential = essential_at_insertion(sc, ax, d);
      for (std::size_t i = 0; i < ax.size(); ++i) {
        const double tau = self_annihilation_time(update.paths[i]);
        out << r << ',' << i << ',' << format_double(ax.times()[i]) << ',' << int(essential[i]) << ','
            << (tau == kNever ? "inf" : format_double(tau)) << ',' << format_double(attractors[i].t_hat) << ','
            << int(attractors[i].reaches_boundary) << '\n';
      }
      if (r == 0 && !paths_out.empty()) {
        std::ostringstream os;
        write_lineset(os, update.lines);
        for (const auto& pp : update.paths) {
          write_path(os, pp.plus);
          write_path(os, pp.minus);
        }
        for (const auto& a : attractors) write_attractor(os, a);
        write_file(paths_out, os.str());
      }
    }
  };
}

Job plan_pinning(const ExperimentConfig& cfg) {
  PinningConfig p;
  p.n = positive(cfg, "n");
  p.lambda1 = cfg.reals("lambda1");
  for (double l : p.lambda1) require(l >= 0, cfg, "lambda1", "a list of values >= 0");
  p.lambda2 = non_negative(cfg, "lambda2");
  p.replicas = count(cfg, "replicas");
  p.seed = seed_of(cfg);
  p.point_to_point = cfg.flag("point_to_point");
  p.spanning = cfg.flag("spanning");
  return [=](std::ostream& out) {
    const auto res = run_pinning_experiment(p);
    write_pinning_csv(out, res.rows);
    for (const auto& s : res.stats) {
      out << "# lambda1 = " << format_double(s.lambda1) << ": chain_per_n = " << mean_text(s.chain_per_n)
          << ", essential_fraction = " << mean_text(s.essential_fraction)
          << ", visit_density = " << mean_text(s.visit_density) << '\n';
    }
  };
}

Job plan_sticks(const ExperimentConfig& cfg) {
  const auto d = descriptor(cfg);
  const double lambda = non_negative(cfg, "lambda");
  const double T = positive(cfg, "T");
  const auto replicas = count(cfg, "replicas");
  const auto seed = seed_of(cfg);
  const auto mode_text = cfg.text("bonus_mode");
  require(mode_text == "every_flight" || mode_text == "first_flight_only", cfg, "bonus_mode",
          "every_flight or first_flight_only");
  const auto mode = mode_text == "every_flight" ? BonusMode::every_flight : BonusMode::first_flight_only;
  return [=](std::ostream& out) {
    std::vector<StickRow> rows;
    std::size_t spans = 0, survives = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto s = sample_sticks(lambda, d, T, seed, r);
      const auto m1 = model1(s, T);
      const auto tagged = tagged_particle(s, d, T, seed, r, mode);
      const bool alive = tagged && tagged->survives;
      rows.push_back({lambda, T, r, m1.spans_window, m1.max_covered, alive});
      spans += m1.spans_window;
      survives += alive;
    }
    write_stick_csv(out, rows);
    out << "# span_rate = " << format_double(double(spans) / double(replicas)) << '\n';
    out << "# survival_rate = " << format_double(double(survives) / double(replicas)) << '\n';
  };
}

Job plan_lambda_c(const ExperimentConfig& cfg) {
  const auto d = descriptor(cfg);
  LambdaSearch q;
  q.windows = cfg.reals("windows");
  for (double w : q.windows) require(w > 0, cfg, "windows", "positive");
  q.grid = cfg.reals("grid");
  for (double g : q.grid) require(g > 0, cfg, "grid", "positive");
  q.replicas = count(cfg, "replicas");
  q.min_decay = positive(cfg, "min_decay");
  q.max_decay = positive(cfg, "max_decay");
  require(q.max_decay > q.min_decay, cfg, "max_decay", "above min_decay");
  q.z = positive(cfg, "z");
  q.seed = seed_of(cfg);
  return [=](std::ostream& out) {
    const auto e = estimate_lambda_c(d, q);
    out << "lambda,slope,stderr\n";
    for (const auto& [l, slope, se] : e.probes) {
      out << format_double(l) << ',' << (std::isinf(slope) ? "-inf" : format_double(slope)) << ','
          << format_double(se) << '\n';
    }
    out << "# estimate = " << format_double(e.estimate) << '\n';
    out << "# ci_low = " << format_double(e.ci_low) << '\n';
    out << "# ci_high = " << format_double(e.ci_high) << '\n';
    out << "# fitted = " << e.fitted << '\n';
  };
}

Job plan(const std::string& sub, const ExperimentConfig& cfg) {
  if (sub == "lines") return plan_lines(cfg);
  if (sub == "influence") return plan_influence(cfg);
  if (sub == "pinning") return plan_pinning(cfg);
  if (sub == "sticks") return plan_sticks(cfg);
  return plan_lambda_c(cfg);
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Broken lines, pinning and stick percolation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  auto* run = app.add_subcommand("run", "run an experiment and write CSV");
  run->require_subcommand(1);

  const std::vector<std::string> subs{"lines", "influence", "pinning", "sticks", "lambda-c"};
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_paths;
  for (const auto& sub : subs) {
    auto* sc = run->add_subcommand(sub);
    sc->add_option("--config", config_paths[sub], "key = value file, or an earlier result to rerun");
    for (const auto& k : keys_for(sub)) {
      auto* opt = sc->add_option_function<std::string>(
          "--" + dashed(k.name), [&flags, sub, name = k.name](const std::string& v) { flags[sub][name] = v; },
          k.help);
      opt->default_str(k.fallback);
    }
  }

  std::string input;
  std::string svg_out = "-";
  RenderOptions ro;
  auto* render = app.add_subcommand("render", "draw structured text as SVG");
  render->add_option("input", input, "structured text file")->required();
  render->add_option("--out", svg_out, "SVG file, - for stdout");
  render->add_option("--width", ro.width, "width in pixels");
  render->add_option("--margin", ro.margin, "margin in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto emit = [&](const std::string& path, const std::string& text) {
    if (path == "-") {
      out << text;
    } else {
      write_file(path, text);
    }
  };

  if (render->parsed()) {
    std::ostringstream svg;
    try {
      std::ifstream in(input, std::ios::binary);
      if (!in) throw ConfigError(input + ": cannot open");
      render_svg(in, svg, ro);
    } catch (const ConfigError& e) {
      err << "error: " << input << ": " << e.what() << '\n';
      return 2;
    }
    try {
      emit(svg_out, svg.str());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
    return 0;
  }

  std::string sub;
  for (const auto& s : subs) {
    if (run->got_subcommand(s)) sub = s;
  }
  ExperimentConfig cfg;
  Job job;
  try {
    cfg = merge(sub, keys_for(sub), config_paths[sub], flags[sub]);
    job = plan(sub, cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    std::ostringstream csv;
    write_header(csv, sub, cfg);
    job(csv);
    emit(cfg.text("out"), csv.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hammersley::cli
