// Acceptance run: one PASS/FAIL line per headline criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hammersley/checks.hpp"
#include "hammersley/cli.hpp"
#include "hammersley/pinning.hpp"
#include "hammersley/sticks.hpp"

using namespace hammersley;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Verdict from_check(const CheckResult& r) {
  Verdict v{r.ok(), std::to_string(r.trials) + " trials, " + std::to_string(r.checks) + " checks, " +
                        std::to_string(r.failures) + " failures"};
  if (!r.ok()) v.detail += "; first: " + r.first_failure;
  return v;
}

std::string cli_output(std::vector<std::string> args) {
  args.insert(args.begin(), "hammersley");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (cli::main(int(argv.size()), argv.data(), out, err) != 0) throw std::runtime_error(err.str());
  return out.str();
}

Verdict ulam() {
  const auto m = ulam_chain_per_n(500.0, 1.0, 200, 1);
  return {m.mean >= 1.90 && m.mean <= 2.00, "mean chain/n = " + num(m.mean, 5) + " +- " + num(m.stderr_, 2) +
                                                " at n = 500, 200 replicas; want [1.90, 2.00]"};
}

Verdict transversal() {
  const auto f = fit_transversal_exponent({100.0, 200.0, 400.0, 800.0}, 200, 1);
  std::string means;
  for (std::size_t i = 0; i < f.n.size(); ++i) means += " " + num(f.n[i]) + ":" + num(f.max_abs_x[i].mean);
  return {f.exponent >= 0.55 && f.exponent <= 0.80,
          "fitted exponent " + num(f.exponent) + "; want [0.55, 0.80]; mean max|x| by n:" + means};
}

Verdict vno_crab_topdog() {
  const auto a = check_vno(1, 500);
  const auto b = check_crab(1, 500);
  const auto c = check_topdog(1, 500);
  const auto d = check_topdog1(1, 500);
  const bool ok = a.ok() && b.ok() && c.ok() && d.ok();
  auto part = [](const char* name, const CheckResult& r) {
    return std::string(name) + " " + std::to_string(r.failures) + "/" + std::to_string(r.checks);
  };
  std::string detail = "failures/checks: " + part("vno", a) + ", " + part("crab", b) + ", " + part("topdog", c) +
                       ", " + part("topdog1", d);
  for (const auto* r : {&a, &b, &c, &d}) {
    if (!r->ok()) detail += "; " + r->first_failure;
  }
  return {ok, detail};
}

Verdict stick_criterion() {
  const auto cauchy = DistributionDescriptor::make_positive_cauchy(1.0);
  const auto half = DistributionDescriptor::make_pareto(0.5, 1.0);
  const auto expo = DistributionDescriptor::make_exponential(1.0);
  bool ok = true;
  // Threshold at 1/c: checked on both sides for several c.
  for (double c : {0.5, 1.0, 2.0}) {
    const auto d = DistributionDescriptor::make_positive_cauchy(c);
    ok &= percolation_criterion(d, 1.01 / c).decision == Percolation::percolates;
    ok &= percolation_criterion(d, 0.99 / c).decision == Percolation::does_not_percolate;
    ok &= percolation_criterion(d, 1.0 / c).decision == Percolation::undetermined;
  }
  ok &= is_cluster_stable(half) == Stability::yes;
  ok &= is_cluster_stable(cauchy) == Stability::no;
  for (double l : {1e-3, 1.0, 1e3}) {
    ok &= percolation_criterion(half, l).decision == Percolation::percolates;
    ok &= percolation_criterion(expo, l).decision == Percolation::does_not_percolate;
  }
  return {ok, std::string("cauchy(c=1) at 2 / 0.5: ") + to_string(percolation_criterion(cauchy, 2.0).decision) +
                  " / " + to_string(percolation_criterion(cauchy, 0.5).decision) +
                  "; pareto(1/2) stable: " + to_string(is_cluster_stable(half)) +
                  "; exponential: " + to_string(percolation_criterion(expo, 1e3).decision)};
}

Verdict stick_lambda_c() {
  LambdaSearch q;
  q.replicas = 200;
  q.windows = {1e2, 1e3, 1e4, 1e5};
  const auto start = std::chrono::steady_clock::now();
  const auto e = estimate_lambda_c(DistributionDescriptor::make_positive_cauchy(1.0), q);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {e.estimate >= 0.8 && e.estimate <= 1.25 && secs <= 600.0,
          "estimate " + num(e.estimate) + " (interval " + num(e.ci_low) + " to " + num(e.ci_high) + ", " +
              std::to_string(e.fitted) + " probes fitted); want [0.8, 1.25] within 600 s"};
}

Verdict coupling() {
  std::size_t failures = 0;
  std::size_t replicas = 0;
  for (const auto& d : {DistributionDescriptor::make_positive_cauchy(1.0), DistributionDescriptor::make_pareto(0.5, 1.0),
                        DistributionDescriptor::make_exponential(1.0)}) {
    for (std::uint64_t r = 0; r < 500; ++r, ++replicas) {
      const auto s = sample_sticks(0.8, d, 1000.0, 1, r);
      const auto m1 = model1(s, 1000.0);
      const auto m2 = model2(s, d, 1000.0, 1, r);
      std::vector<std::pair<double, double>> one, two;
      for (std::size_t i = 0; i < s.seeds.size(); ++i) {
        one.emplace_back(s.seeds[i], s.seeds[i] + s.lengths[i]);
        two.emplace_back(m2.particles[i].born, m2.particles[i].reached);
      }
      if (!covers(two, one) || m2.max_covered < m1.max_covered) ++failures;
    }
  }
  return {failures == 0, std::to_string(replicas) + " coupled replicas (500 per law), " + std::to_string(failures) +
                             " where Model 2 coverage misses Model 1 coverage"};
}

std::string pinning_csv;

Verdict pinning_trends() {
  PinningConfig cfg;
  cfg.n = 200.0;
  cfg.lambda1 = {0.5, 1.0, 2.0, 5.0};
  cfg.lambda2 = 1.0;
  cfg.replicas = 20;
  cfg.seed = 1;
  cfg.spanning = false;
  const auto res = run_pinning_experiment(cfg);
  std::ostringstream os;
  write_pinning_csv(os, res.rows);
  pinning_csv = os.str();
  bool ok = true;
  std::string ess = "essential fraction", visit = "visit density";
  for (std::size_t k = 0; k < res.stats.size(); ++k) {
    ess += " " + num(res.stats[k].essential_fraction.mean, 3);
    visit += " " + num(res.stats[k].visit_density.mean, 3);
    if (k > 0) {
      ok &= res.stats[k].essential_fraction.mean >= res.stats[k - 1].essential_fraction.mean;
      ok &= res.stats[k].visit_density.mean >= res.stats[k - 1].visit_density.mean;
    }
  }
  const auto& top = res.stats.back().chain_per_n;
  const double z = (top.mean - 2.0) / top.stderr_;
  ok &= z >= 5.0;
  return {ok, ess + "; " + visit + "; chain/n at lambda1 = 5: " + num(top.mean) + " +- " + num(top.stderr_, 2) +
                  " (" + num(z, 3) + " standard errors above 2)"};
}

Verdict determinism() {
  PinningConfig cfg;
  cfg.n = 200.0;
  cfg.lambda1 = {0.5, 1.0, 2.0, 5.0};
  cfg.replicas = 20;
  cfg.spanning = false;
  std::ostringstream os;
  write_pinning_csv(os, run_pinning_experiment(cfg).rows);
  bool ok = os.str() == pinning_csv;
  std::string detail = std::string("pinning rerun ") + (ok ? "identical" : "DIFFERS");
  const std::vector<std::vector<std::string>> runs{
      {"run", "lines", "--n", "60", "--replicas", "20", "--seed", "5"},
      {"run", "influence", "--n", "10", "--lambda1", "1.5", "--replicas", "3", "--seed", "5"},
      {"run", "pinning", "--n", "40", "--lambda1", "0.5,2", "--replicas", "4", "--seed", "5"},
      {"run", "sticks", "--lambda", "0.9", "--T", "1000", "--replicas", "50", "--seed", "5"},
      {"run", "lambda-c", "--replicas", "100", "--seed", "5"},
  };
  const auto dir = std::filesystem::temp_directory_path() / "hammersley_acceptance";
  std::filesystem::create_directories(dir);
  for (const auto& args : runs) {
    const auto a = cli_output(args);
    const auto b = cli_output(args);
    // Rerun from the header of the first output.
    const auto saved = dir / (args[1] + ".csv");
    std::ofstream(saved, std::ios::binary) << a;
    const auto c = cli_output({"run", args[1], "--config", saved.string()});
    const bool same = a == b && a == c;
    ok &= same;
    detail += "; " + args[1] + (same ? " identical" : " DIFFERS");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"ulam-limit", ulam},
      {"transversal-fluctuations", transversal},
      {"abelian", [] { return from_check(check_abelian(1, 100, 5)); }},
      {"monotonicity-of-H", [] { return from_check(check_monotonicity(1, 1000)); }},
      {"pin1-essential-on-geodesics", [] { return from_check(check_pin1(1, 500)); }},
      {"incremental-equals-rebuild", [] { return from_check(check_incremental(1, 1000)); }},
      {"vno-crab-topdog", vno_crab_topdog},
      {"stick-criterion-analytics", stick_criterion},
      {"stick-lambda-c-simulation", stick_lambda_c},
      {"reinforcement-coupling", coupling},
      {"pinning-monotone-trends", pinning_trends},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << num(secs, 3) << " s]"
              << std::endl;
    failed += !v.pass;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
