#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hammersley/cli.hpp"
#include "hammersley/lines.hpp"

using namespace hammersley;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "hammersley");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hammersley_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

// Value of a "# key = value" trailer line.
double trailer(const std::string& csv, const std::string& key) {
  const auto at = csv.find("# " + key + " = ");
  REQUIRE(at != std::string::npos);
  return std::stod(csv.substr(at + key.size() + 5));
}

}  // namespace

TEST_CASE("pinning runs are deterministic and one row per replica") {
  const std::vector<std::string> args{"run", "pinning", "--n", "30", "--lambda1", "1", "--lambda2", "1",
                                      "--replicas", "100", "--seed", "7", "--spanning", "false"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(data_rows(a.out).size() == 100);
  CHECK(a.out.rfind("# hammersley ", 0) == 0);
  CHECK(a.out.find("# seed = 7\n") != std::string::npos);
}

TEST_CASE("sticks above the Cauchy threshold usually span") {
  const auto r = run({"run", "sticks", "--kind", "positive_cauchy", "--c", "1", "--lambda", "2", "--T", "1e4",
                      "--replicas", "200"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() == 200);
  CHECK(trailer(r.out, "span_rate") > 0.5);
  CHECK(trailer(r.out, "survival_rate") >= trailer(r.out, "span_rate") - 0.05);
}

TEST_CASE("square chains per side land just below two") {
  const auto r = run({"run", "lines", "--n", "100", "--lambda2", "1", "--seed", "3", "--replicas", "500"});
  REQUIRE(r.code == 0);
  const double m = trailer(r.out, "mean chain_per_n");
  CHECK(m >= 1.90);
  CHECK(m <= 2.00);
}

TEST_CASE("config files: comments, flags override, unknown keys") {
  const auto cfg = scratch("pin.cfg");
  std::ofstream(cfg) << "# small run\nn = 12   # side\nlambda1 = 0.5, 2\nreplicas = 2\nspanning = false\n";
  const auto r = run({"run", "pinning", "--config", cfg.string(), "--replicas", "3"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() == 6);
  CHECK(r.out.find("# lambda1 = 0.5, 2\n") != std::string::npos);

  std::ofstream(cfg) << "n = 12\n\nmystery = 4\n";
  const auto bad = run({"run", "pinning", "--config", cfg.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find(cfg.string() + ":3: unknown key 'mystery'") != std::string::npos);
  CHECK(bad.out.empty());

  std::ofstream(cfg) << "n = twelve\n";
  const auto nan = run({"run", "pinning", "--config", cfg.string()});
  CHECK(nan.code == 2);
  CHECK(nan.err.find(":1:") != std::string::npos);

  std::ofstream(cfg) << "n 12\n";
  CHECK(run({"run", "pinning", "--config", cfg.string()}).code == 2);
  CHECK(run({"run", "pinning", "--replicas", "0"}).code == 2);
  CHECK(run({"run", "sticks", "--kind", "gamma"}).code == 2);
  CHECK(run({"run", "sticks", "--bonus-mode", "sometimes"}).code == 2);
  CHECK(run({"run", "lines", "--domain", "disc"}).code == 2);
  CHECK(run({"run", "pinning", "--unknown", "1"}).code == 2);
  CHECK(run({"run", "pinning", "--config", scratch("missing.cfg").string()}).code == 2);
}

TEST_CASE("the results header reruns the same experiment") {
  const auto first = scratch("first.csv");
  const auto second = scratch("second.csv");
  REQUIRE(run({"run", "sticks", "--kind", "pareto", "--alpha", "1", "--scale", "2", "--lambda", "0.7", "--T", "300",
               "--replicas", "20", "--seed", "11", "--out", first.string()})
              .code == 0);
  REQUIRE(run({"run", "sticks", "--config", first.string(), "--out", second.string()}).code == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(!slurp(first).empty());
  // A header from another subcommand is refused.
  CHECK(run({"run", "pinning", "--config", first.string()}).code == 2);
}

TEST_CASE("the environment supplies the default seed") {
  const std::vector<std::string> args{"run", "sticks", "--replicas", "5", "--T", "100"};
  ::setenv("HAMMERSLEY_SEED", "42", 1);
  const auto env = run(args);
  auto with_flag = args;
  with_flag.insert(with_flag.end(), {"--seed", "42"});
  const auto flag = run(with_flag);
  with_flag.back() = "9";
  const auto other = run(with_flag);
  ::unsetenv("HAMMERSLEY_SEED");
  REQUIRE(env.code == 0);
  CHECK(env.out.find("# seed = 42\n") != std::string::npos);
  CHECK(env.out == flag.out);
  CHECK(other.out.find("# seed = 9\n") != std::string::npos);
  CHECK(run(args).out.find("# seed = 1\n") != std::string::npos);
}

TEST_CASE("lambda-c reports probes and the estimate") {
  const auto r = run({"run", "lambda-c", "--kind", "positive_cauchy", "--c", "2", "--replicas", "300"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() >= 3);
  CHECK(trailer(r.out, "estimate") > 0.35);
  CHECK(trailer(r.out, "estimate") < 0.75);
  const auto none = run({"run", "lambda-c", "--kind", "exponential"});
  CHECK(none.code == 1);
  CHECK(none.err.find("no finite critical point") != std::string::npos);
}

TEST_CASE("frozen scene: influence output and SVG are byte-identical to the golden files") {
  const fs::path golden(GOLDEN_DIR);
  const auto paths = scratch("scene50_paths.txt");
  const auto r = run({"run", "influence", "--n", "8", "--scenery-in", (golden / "scene50.txt").string(), "--axis-in",
                      (golden / "axis3.txt").string(), "--paths-out", paths.string()});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out).size() == 3);
  CHECK(slurp(paths) == slurp(golden / "scene50_paths.txt"));
  const auto svg = run({"render", (golden / "scene50_paths.txt").string()});
  REQUIRE(svg.code == 0);
  CHECK(svg.out == slurp(golden / "scene50.svg"));
  CHECK(svg.out == run({"render", (golden / "scene50_paths.txt").string()}).out);
}

TEST_CASE("render: empty and single-point line sets, malformed input") {
  const auto empty = scratch("empty.txt");
  std::ofstream(empty) << "DOMAIN 0 6 -6 6 -6 6\n";
  const auto r = run({"render", empty.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("<?xml", 0) == 0);
  CHECK(r.out.find("</svg>\n") != std::string::npos);
  CHECK(r.out.find("<line ") != std::string::npos);
  CHECK(r.out.find("<polyline") == std::string::npos);

  const auto single = scratch("single.txt");
  {
    std::ofstream f(single);
    write_lineset(f, build_broken_lines(PlanarConfig({{2.0, 0.5}}), Domain::triangle(6.0)));
  }
  const auto one = run({"render", single.string()});
  REQUIRE(one.code == 0);
  const auto at = one.out.find("<polyline points=\"");
  REQUIRE(at != std::string::npos);
  const auto pts = one.out.substr(at, one.out.find('"', at + 18) - at);
  // Birth vertex plus the two exit points: two rays.
  CHECK(std::count(pts.begin(), pts.end(), ',') == 3);
  CHECK(one.out.find("<polyline", at + 1) == std::string::npos);

  const auto bad = scratch("bad.txt");
  std::ofstream(bad) << "DOMAIN 0 6 -6 6 -6 6\nLINE 0 2 1 1\n";
  const auto b = run({"render", bad.string()});
  CHECK(b.code == 2);
  CHECK(b.err.find("line 2") != std::string::npos);
  std::ofstream(bad) << "LINE 0 1 1 1\n";
  CHECK(run({"render", bad.string()}).code == 2);
  std::ofstream(bad) << "DOMAIN 0 6 -6 6 -6 6\nCIRCLE 1\n";
  CHECK(run({"render", bad.string()}).code == 2);
  CHECK(run({"render", scratch("nothing.txt").string()}).code == 2);
}

TEST_CASE("version and usage") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(cli::version()) != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"run"}).code == 2);
}
