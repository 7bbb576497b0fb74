#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hammersley/lines.hpp"
#include "naive_sweep.hpp"

using namespace hammersley;

namespace {

PlanarConfig random_config(const Domain& d, double intensity, std::uint64_t seed, std::uint64_t rep) {
  RandomSource rng(seed, Stream::interior, rep);
  return sample_poisson_in_domain(d, intensity, rng);
}

// Exactly k uniform points in d.
PlanarConfig uniform_points(const Domain& d, std::size_t k, std::uint64_t seed) {
  RandomSource rng(seed, Stream::interior);
  std::vector<Point2> pts;
  while (pts.size() < k) {
    const Point2 p{rng.uniform(d.t0(), d.t1()), rng.uniform(-d.t1(), d.t1())};
    if (d.contains(p)) pts.push_back(p);
  }
  return PlanarConfig(pts);
}

bool seg_less(const Segment& a, const Segment& b) {
  return std::tie(a.start, a.end, a.velocity) < std::tie(b.start, b.end, b.velocity);
}

}  // namespace

TEST_CASE("empty config gives no lines") {
  const auto ls = build_broken_lines(PlanarConfig{}, Domain::triangle(5));
  CHECK(count_lines(ls) == 0);
  CHECK(separating_line_count(ls, {1, 0}, {4, 0}) == 0);
  CHECK(extract_geodesic(ls, {5, 0}).collected.empty());
}

TEST_CASE("single point: one line made of two rays") {
  const auto d = Domain::triangle(10);
  const PlanarConfig c({{3, 1}});
  const auto ls = build_broken_lines(c, d);
  REQUIRE(count_lines(ls) == 1);
  const auto& v = ls.lines()[0].vertices;
  REQUIRE(v.size() == 3);
  CHECK(v[1] == LightCone::of({3, 1}));
  CHECK(v[0] == d.exit_minus(4.0));
  CHECK(v[2] == d.exit_plus(2.0));
  CHECK(ls.vertex_kind(0, 1) == VertexKind::interior_birth);
  CHECK(ls.vertex_kind(0, 0) == VertexKind::exit);
  CHECK(ls.collisions().empty());
  CHECK(separating_line_count(ls, {1, 1}, {5, 1}) == 1);
  CHECK(separating_line_count(ls, {5, 1}, {6, 1}) == 0);
  CHECK_THROWS_AS(separating_line_count(ls, {3, 1}, {5, 1}), InvalidInput);
  const auto g = extract_geodesic(ls, {10, 0});
  REQUIRE(g.collected.size() == 1);
  CHECK(g.collected[0] == LightCone::of({3, 1}));
}

TEST_CASE("two comparable points collide and form two lines") {
  const auto d = Domain::triangle(10);
  // Second point in the forward cone of the first: both lines survive.
  const PlanarConfig c({{2, 0}, {5, 1}});
  const auto ls = build_broken_lines(c, d);
  CHECK(count_lines(ls) == 2);
  CHECK(ls.collisions().empty());
  // Incomparable: the inner rays collide and the points share a line.
  const PlanarConfig c2({{2, 1}, {2.5, -1}});
  const auto ls2 = build_broken_lines(c2, d);
  CHECK(count_lines(ls2) == 1);
  REQUIRE(ls2.collisions().size() == 1);
  // + particle of (2.5,-1) has v = 3.5, - particle of (2,1) has u = 3.
  CHECK(ls2.collisions()[0] == LightCone{3.0, 3.5});
  CHECK(ls2.vertex_kind(0, 2) == VertexKind::collision);
}

TEST_CASE("points outside the domain are rejected") {
  CHECK_THROWS_AS(build_broken_lines(PlanarConfig({{1, 5}}), Domain::triangle(3)), InvalidInput);
}

TEST_CASE("50 points in Triangle(20): engine matches the quadratic re-simulation") {
  const auto d = Domain::triangle(20);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto c = uniform_points(d, 50, 100 + s);
    const auto ls = build_broken_lines(c, d);
    const auto ref = naive::simulate(c, {}, d);
    CHECK(count_lines(ls) == ref.births - ref.collisions);
    auto a = ls.segments();
    auto b = ref.segments;
    for (auto& x : a) x.line_id = 0;
    std::sort(a.begin(), a.end(), seg_less);
    std::sort(b.begin(), b.end(), seg_less);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].start == b[i].start);
      CHECK(a[i].end == b[i].end);
    }
  }
}

TEST_CASE("with boundary births the engine matches the re-simulation") {
  const auto d = Domain::general(0, 12, 3, 5, -2, 7);
  for (std::uint64_t s = 0; s < 40; ++s) {
    RandomSource rng(200 + s, Stream::interior);
    const auto c = sample_poisson_in_domain(d, 1.0, rng);
    const auto births = sample_boundary_births(d, 1.0, rng);
    const auto ls = build_broken_lines(c, births, d);
    const auto ref = naive::simulate(c, births, d);
    CHECK(count_lines(ls) == ref.births - ref.collisions);
    CHECK(ls.segments().size() == ref.segments.size());
  }
}

TEST_CASE("every input point is a birth vertex of exactly one line; lines are graphs") {
  const auto d = Domain::triangle(15);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto c = random_config(d, 1.0, 7, r);
    const auto ls = build_broken_lines(c, d);
    std::vector<LightCone> births;
    std::size_t endpoint_pairs = 0;
    for (std::size_t i = 0; i < ls.lines().size(); ++i) {
      const auto& v = ls.lines()[i].vertices;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) {
          REQUIRE(v[k - 1].x() < v[k].x());
          // Slope +-1 exactly: one light-cone coordinate is shared.
          REQUIRE((v[k - 1].u == v[k].u || v[k - 1].v == v[k].v));
        }
        if (ls.vertex_kind(i, k) == VertexKind::interior_birth) births.push_back(v[k]);
        if (ls.vertex_kind(i, k) == VertexKind::exit) ++endpoint_pairs;
      }
    }
    std::sort(births.begin(), births.end());
    std::vector<LightCone> want;
    for (const auto& p : c.points()) want.push_back(LightCone::of(p));
    std::sort(want.begin(), want.end());
    CHECK(births == want);
    // particle accounting: 2 per birth = 2 per collision + exits
    CHECK(2 * c.size() == 2 * ls.collisions().size() + endpoint_pairs);
  }
}

TEST_CASE("determinism: rebuilding yields an identical LineSet") {
  const auto d = Domain::triangle(30);
  const auto c = random_config(d, 1.0, 99, 0);
  CHECK(build_broken_lines(c, d) == build_broken_lines(c, d));
  std::ostringstream a, b;
  write_lineset(a, build_broken_lines(c, d));
  write_lineset(b, build_broken_lines(c, d));
  CHECK(a.str() == b.str());
}

TEST_CASE("chain oracles agree") {
  CHECK(lis_oracle(PlanarConfig{}) == 0);
  CHECK(brute_force_chain(PlanarConfig{}) == 0);
  CHECK(lis_oracle(PlanarConfig({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}})) == 5);
  CHECK(brute_force_chain(PlanarConfig({{1, 0}, {1.2, 1}})) == 1);
  CHECK(brute_force_chain(PlanarConfig({{1, 0}, {1.2, 1}, {3, 0}})) == 2);
  std::vector<Point2> many(21);
  for (int i = 0; i < 21; ++i) many[i] = {double(i + 1), 0};
  CHECK_THROWS_AS(brute_force_chain(PlanarConfig(many)), InvalidInput);

  const auto d = Domain::triangle(4);
  for (int r = 0; r < 1000; ++r) {
    RandomSource rng(5, Stream::interior, r);
    const auto k = 1 + static_cast<std::size_t>(rng.uniform() * 12);
    const auto c = uniform_points(d, k, 5000 + r);
    const auto lis = lis_oracle(c);
    REQUIRE(lis == brute_force_chain(c));
    REQUIRE(longest_chain(c).size() == lis);
    const auto ls = build_broken_lines(c, d);
    const auto g = extract_geodesic(ls, {d.t1(), 0});
    REQUIRE(g.collected.size() == lis);
    // Triangle without boundary births: the line count is the chain length.
    REQUIRE(count_lines(ls) == lis);
  }
}

TEST_CASE("geodesic collects a valid decreasing chain") {
  const auto d = Domain::triangle(40);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto c = random_config(d, 1.0, 17, r);
    const auto ls = build_broken_lines(c, d);
    const auto g = extract_geodesic(ls, {40, 0});
    CHECK(g.collected.size() == lis_oracle(c));
    for (std::size_t i = 1; i < g.collected.size(); ++i) {
      REQUIRE(g.collected[i].u < g.collected[i - 1].u);
      REQUIRE(g.collected[i].v < g.collected[i - 1].v);
    }
    std::vector<LightCone> keys;
    for (const auto& p : c.points()) keys.push_back(LightCone::of(p));
    std::sort(keys.begin(), keys.end());
    for (const auto& p : g.collected) REQUIRE(std::binary_search(keys.begin(), keys.end(), p));
  }
}

TEST_CASE("corner-to-corner separating count bounds the chain length on Square(n)") {
  for (int r = 0; r < 200; ++r) {
    RandomSource rng(23, Stream::interior, r);
    const double n = 2 + 8 * rng.uniform();
    const auto d = Domain::square(n);
    auto c = sample_poisson_in_domain(d, 1.0, rng);
    if (c.size() > 100) continue;
    const auto ls = build_broken_lines(c, d);
    const Point2 a{1e-7, 0};
    const Point2 b{d.t1() - 1e-7, 0};
    CHECK(separating_line_count(ls, a, b) >= lis_oracle(c));
  }
}

TEST_CASE("boundary births: intensities and disabled mode") {
  const auto d = Domain::general(0, 5, 5, 0, -5, 0);  // left edge of length 10
  RandomSource r0(1, Stream::interior);
  CHECK(sample_boundary_births(d, 0.0, r0).empty());
  CHECK(sample_boundary_births(Domain::triangle(5), 1.0, r0, BoundaryMode::none).empty());
  double left = 0;
  const int reps = 5000;
  for (int r = 0; r < reps; ++r) {
    RandomSource rng(77, Stream::interior, r);
    for (const auto& b : sample_boundary_births(d, 2.0, rng)) {
      if (b.origin == BirthOrigin::left_up || b.origin == BirthOrigin::left_down) {
        left += 1;
        REQUIRE(b.key_point.u + b.key_point.v == doctest::Approx(0.0));
      }
    }
  }
  CHECK(std::abs(left / reps - 20.0) < 3.0 * std::sqrt(20.0 / reps));
}

TEST_CASE("slanted-edge births lie exactly on their edges") {
  const auto d = Domain::general(0, 10, 1, 4, -1, 6);
  RandomSource rng(8, Stream::interior);
  for (const auto& b : sample_boundary_births(d, 3.0, rng)) {
    if (b.origin == BirthOrigin::northwest) CHECK(b.key_point.v == d.v_min());
    if (b.origin == BirthOrigin::southwest) CHECK(b.key_point.u == d.u_min());
  }
}

TEST_CASE("restricted line count on the full domain equals H") {
  const auto d = Domain::triangle(20);
  const auto c = random_config(d, 1.0, 3, 0);
  const auto ls = build_broken_lines(c, d);
  CHECK(restricted_line_count(ls, d) == count_lines(ls));
}

namespace {

// Asymptotic two-sample Kolmogorov-Smirnov p-value (conservative for ties).
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double dmax = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    dmax = std::max(dmax, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  const double ne = double(a.size()) * b.size() / (a.size() + b.size());
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * dmax;
  double p = 0;
  for (int k = 1; k < 100; ++k) p += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lam * lam);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("consistency: lines restricted to a subdomain have the law of lines built there") {
  const auto big = Domain::general(0, 12, 6, 6, -6, 6);
  const auto small = Domain::general(2, 8, 2, 5, -1, 4);
  std::vector<double> restricted, direct;
  for (int r = 0; r < 1000; ++r) {
    RandomSource rb(31, Stream::interior, r);
    const auto cb = sample_poisson_in_domain(big, 1.0, rb);
    const auto lb = build_broken_lines(cb, sample_boundary_births(big, 1.0, rb), big);
    restricted.push_back(double(restricted_line_count(lb, small)));
    RandomSource rs(32, Stream::interior, r);
    const auto cs = sample_poisson_in_domain(small, 1.0, rs);
    direct.push_back(double(count_lines(build_broken_lines(cs, sample_boundary_births(small, 1.0, rs), small))));
  }
  CHECK(ks_pvalue(restricted, direct) > 0.001);
  // A wrong boundary intensity must be detectable by the same test.
  std::vector<double> wrong;
  for (int r = 0; r < 1000; ++r) {
    RandomSource rs(33, Stream::interior, r);
    const auto cs = sample_poisson_in_domain(small, 1.0, rs);
    wrong.push_back(double(count_lines(build_broken_lines(cs, sample_boundary_births(small, 4.0, rs), small))));
  }
  CHECK(ks_pvalue(restricted, wrong) < 0.001);
}
