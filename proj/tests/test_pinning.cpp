#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hammersley/checks.hpp"
#include "hammersley/pinning.hpp"

using namespace hammersley;

TEST_CASE("summaries skip undefined entries") {
  const double nan = std::nan("");
  const auto m = summarize({1.0, 2.0, nan, 3.0, 4.0});
  CHECK(m.count == 4);
  CHECK(m.mean == doctest::Approx(2.5));
  // Sample sd sqrt(5/3), divided by sqrt(4).
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(std::isnan(summarize({nan}).mean));
  CHECK(std::isnan(summarize({7.0}).stderr_));
}

TEST_CASE("axis points are nested across intensities") {
  const double levels[] = {0.0, 0.5, 1.0, 2.0, 5.0};
  double total = 0.0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    std::vector<AxisPoints> sets;
    for (double l : levels) sets.push_back(coupled_axis_points(40.0, l, 9, r));
    CHECK(sets[0].empty());
    for (std::size_t k = 1; k < sets.size(); ++k) {
      const auto small = sets[k - 1].times();
      const auto big = sets[k].times();
      for (double t : small) CHECK(std::find(big.begin(), big.end(), t) != big.end());
      for (double t : big) CHECK((t > 0.0 && t < 40.0));
    }
    total += double(sets[3].size());
  }
  // Poisson(80) per replica: sd of the mean over 200 is about 0.63.
  CHECK(total / 200.0 == doctest::Approx(80.0).epsilon(0.04));
  CHECK(coupled_axis_points(40.0, 2.0, 9, 3) == coupled_axis_points(40.0, 2.0, 9, 3));
}

TEST_CASE("visit density counts collected axis points") {
  Geodesic g;
  g.collected = {{1, 1}, {2.5, 0.5}, {3, 3}, {4, 4}};
  CHECK(geodesic_visit_density(g, 10.0) == doctest::Approx(0.3));
  CHECK(geodesic_visit_density(Geodesic{}, 10.0) == 0.0);
}

TEST_CASE("without scenery every axis point is essential and collected") {
  PinningConfig cfg;
  cfg.n = 30.0;
  cfg.lambda1 = {0.5, 2.0};
  cfg.lambda2 = 0.0;
  cfg.replicas = 5;
  cfg.seed = 4;
  const auto res = run_pinning_experiment(cfg);
  REQUIRE(res.rows.size() == 10);
  for (const auto& row : res.rows) {
    const auto ax = coupled_axis_points(cfg.n, row.lambda1, cfg.seed, row.replica);
    CAPTURE(row.replica);
    CHECK(row.chain == ax.size());
    if (ax.empty()) continue;
    CHECK(row.essential_frac == 1.0);
    CHECK(row.visit_density == doctest::Approx(double(ax.size()) / cfg.n));
    CHECK(row.spanning == 1);
  }
  CHECK(res.stats[1].essential_fraction.mean == 1.0);
}

TEST_CASE("without axis points nothing is essential or visited") {
  PinningConfig cfg;
  cfg.n = 20.0;
  cfg.lambda1 = {0.0};
  cfg.replicas = 4;
  const auto res = run_pinning_experiment(cfg);
  for (const auto& row : res.rows) {
    CHECK(std::isnan(row.essential_frac));
    CHECK(row.visit_density == 0.0);
    CHECK(row.spanning == 0);
    CHECK(row.max_transversal > 0.0);
  }
  CHECK(res.stats[0].essential_fraction.count == 0);
  CHECK(std::isnan(res.stats[0].essential_fraction.mean));
}

TEST_CASE("essential fraction equals the share essential at insertion in either order") {
  for (std::uint64_t r = 0; r < 15; ++r) {
    PinningConfig cfg;
    cfg.n = 14.0;
    cfg.lambda1 = {1.5};
    cfg.replicas = 1;
    cfg.seed = 100 + r;
    cfg.spanning = false;
    const auto row = run_pinning_experiment(cfg).rows.front();
    const auto d = Domain::triangle(cfg.n);
    RandomSource rng(cfg.seed, Stream::interior, 0);
    const auto scenery = sample_poisson_in_domain(d, cfg.lambda2, rng);
    const auto ax = coupled_axis_points(cfg.n, 1.5, cfg.seed, 0);
    if (ax.empty()) continue;
    const auto backward = essential_at_insertion(scenery, ax, d);
    // Forward order: oldest first.
    const auto pts = ax.points();
    std::size_t forward = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::vector<Point2> older(pts.begin() + long(i) + 1, pts.end());
      forward += is_essential(scenery.with(older), pts[i], d);
    }
    const auto count = static_cast<std::size_t>(std::count(backward.begin(), backward.end(), true));
    CAPTURE(r);
    CHECK(row.essential_frac == doctest::Approx(double(count) / double(ax.size())));
    CHECK(forward == count);
  }
}

TEST_CASE("chains grow pathwise with the axis intensity") {
  PinningConfig cfg;
  cfg.n = 40.0;
  cfg.lambda1 = {0.0, 0.5, 1.0, 2.0, 5.0};
  cfg.replicas = 6;
  cfg.spanning = false;
  const auto plane = run_pinning_experiment(cfg);
  cfg.point_to_point = true;
  const auto point = run_pinning_experiment(cfg);
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    for (std::size_t k = 0; k < cfg.lambda1.size(); ++k) {
      const auto& row = plane.rows[r * cfg.lambda1.size() + k];
      if (k > 0) CHECK(row.chain >= plane.rows[r * cfg.lambda1.size() + k - 1].chain);
      CHECK(point.rows[r * cfg.lambda1.size() + k].chain <= row.chain);
    }
  }
  CHECK(plane.stats.back().chain_per_n.mean > 5.0);
}

TEST_CASE("pinning rows are reproducible byte for byte") {
  PinningConfig cfg;
  cfg.n = 25.0;
  cfg.lambda1 = {1.0, 3.0};
  cfg.replicas = 3;
  cfg.seed = 12;
  std::ostringstream a;
  std::ostringstream b;
  write_pinning_csv(a, run_pinning_experiment(cfg).rows);
  write_pinning_csv(b, run_pinning_experiment(cfg).rows);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("n,lambda1,lambda2,replica,chain,essential_frac,visit_density,spanning,max_transversal\n", 0) == 0);
  cfg.seed = 13;
  std::ostringstream c;
  write_pinning_csv(c, run_pinning_experiment(cfg).rows);
  CHECK(a.str() != c.str());
}

TEST_CASE("square chains approach twice the side from below") {
  const auto m = ulam_chain_per_n(60.0, 1.0, 60, 5);
  CHECK(m.mean > 1.7);
  CHECK(m.mean < 2.0);
  CHECK(m.stderr_ < 0.02);
}

TEST_CASE("transversal fit recovers a known slope on its own output") {
  const auto f = fit_transversal_exponent({20.0, 40.0, 80.0}, 20, 3);
  REQUIRE(f.n.size() == 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double lx = std::log(f.n[i]);
    const double ly = std::log(f.max_abs_x[i].mean);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  CHECK(f.exponent == doctest::Approx((3 * sxy - sx * sy) / (3 * sxx - sx * sx)));
  CHECK(f.max_abs_x[2].mean > f.max_abs_x[0].mean);
}
