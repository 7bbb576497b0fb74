#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hammersley/geometry.hpp"

using namespace hammersley;

TEST_CASE("rotation fixes the origin and maps the diagonal onto the axis") {
  const auto o = rotate_to_timecone(0, 0);
  CHECK(o.t == 0.0);
  CHECK(o.x == 0.0);
  const auto d = rotate_to_timecone(1, 1);
  CHECK(d.t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.x == 0.0);
}

TEST_CASE("rotation of (1,0) matches the matrix product") {
  // [cos -pi/4 ...]: t = (a+b)/sqrt2, x = (b-a)/sqrt2
  const auto p = rotate_to_timecone(1, 0);
  CHECK(p.t == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(p.x == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(std::hypot(p.t, p.x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rotate_back inverts the rotation on a wide range") {
  RandomSource rng(11, Stream::interior);
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(-1e6, 1e6);
    const double b = rng.uniform(-1e6, 1e6);
    const auto [a2, b2] = rotate_back(rotate_to_timecone(a, b));
    REQUIRE(std::abs(a2 - a) <= 1e-12 * std::max(1.0, std::abs(a)) + 1e-9);
    REQUIRE(std::abs(b2 - b) <= 1e-12 * std::max(1.0, std::abs(b)) + 1e-9);
  }
}

TEST_CASE("domains: areas, polygons, membership") {
  const auto tri = Domain::triangle(10);
  CHECK(tri.area() == doctest::Approx(100.0));
  CHECK(tri.contains(Point2{5, 0}));
  CHECK(tri.contains(Point2{1, 0.5}));
  CHECK_FALSE(tri.contains(Point2{5, 5}));  // on the NE edge
  CHECK_FALSE(tri.contains(Point2{0, 0}));
  CHECK(tri.on_boundary(Point2{5, 5}));
  CHECK(tri.polygon().size() == 3);
  CHECK(tri.g_plus(3) == doctest::Approx(7.0));
  CHECK(tri.g_minus(3) == doctest::Approx(-7.0));

  const auto sq = Domain::square(3);
  CHECK(sq.area() == doctest::Approx(9.0));
  CHECK(sq.polygon().size() == 4);
  CHECK(sq.contains(rotate_to_timecone(1, 2)));
  CHECK_FALSE(sq.contains(rotate_to_timecone(-0.1, 2)));

  const auto g = Domain::general(0, 4, 1, 2, -1, 3);
  CHECK(g.g_plus(0) == doctest::Approx(1));
  CHECK(g.g_plus(2) == doctest::Approx(3));
  CHECK(g.g_plus(4) == doctest::Approx(1));
  CHECK(g.g_minus(3) == doctest::Approx(-4));
  CHECK(g.g_minus(4) == doctest::Approx(-3));
  CHECK(g.left_edge_length() == doctest::Approx(2));
  CHECK(g.northwest_length() == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(g.southwest_length() == doctest::Approx(3 * std::sqrt(2.0)));
  // area = integral of g+ - g-: g+ area 8, g- area -(4.5 + 3.5 + ... )
  double num = 0;
  for (int i = 0; i < 400000; ++i) {
    const double t = (i + 0.5) * 4.0 / 400000;
    num += (g.g_plus(t) - g.g_minus(t)) * 4.0 / 400000;
  }
  CHECK(g.area() == doctest::Approx(num).epsilon(1e-9));
  CHECK_THROWS_AS(Domain::general(0, 4, -1, 0, 1, 0), InvalidInput);
  CHECK_THROWS_AS(Domain::triangle(0), InvalidInput);
}

TEST_CASE("exit points lie on the boundary") {
  const auto d = Domain::triangle(10);
  const auto e = d.exit_plus(2.0);
  CHECK(e.u == 10.0);
  CHECK(e.v == 2.0);
  const auto s = Domain::square(2);
  const auto m = s.exit_minus(0.5);
  CHECK(m.v == s.v_max());
}

TEST_CASE("configs are sorted and reject duplicates") {
  PlanarConfig c({{2, 1}, {1, 0}, {1, -1}});
  CHECK(c.points()[0] == Point2{1, -1});
  CHECK(c.points()[2] == Point2{2, 1});
  CHECK_THROWS_AS(PlanarConfig({{1, 1}, {1, 1}}), InvalidInput);
  const auto c2 = c.with(Point2{0.5, 0});
  CHECK(c2.points()[0] == Point2{0.5, 0});
  CHECK(c2.contains({2, 1}));
  AxisPoints ax({1, 3, 2});
  CHECK(ax.times()[0] == 3);
  CHECK(ax.times()[2] == 1);
  CHECK_THROWS_AS(AxisPoints({1, 1}), InvalidInput);
}

TEST_CASE("poisson sampling: zero intensity, determinism, membership") {
  RandomSource r0(5, Stream::interior);
  CHECK(sample_poisson_in_domain(Domain::triangle(10), 0.0, r0).empty());
  RandomSource r1(5, Stream::interior);
  RandomSource r2(5, Stream::interior);
  const auto d = Domain::triangle(10);
  const auto a = sample_poisson_in_domain(d, 1.0, r1);
  const auto b = sample_poisson_in_domain(d, 1.0, r2);
  CHECK(a == b);
  for (const auto& p : a.points()) CHECK(d.contains(p));
  RandomSource r3(5, Stream::axis);
  CHECK_FALSE(sample_poisson_in_domain(d, 1.0, r3) == a);
  RandomSource r4(5, Stream::axis);
  CHECK(sample_poisson_on_axis(0.0, 0, 50, r4).empty());
}

TEST_CASE("poisson count in Triangle(10) has mean 100 and passes chi-square") {
  const auto d = Domain::triangle(10);
  const int reps = 10000;
  double sum = 0;
  std::vector<int> counts;
  for (int r = 0; r < reps; ++r) {
    RandomSource rng(42, Stream::interior, r);
    const auto n = static_cast<int>(sample_poisson_in_domain(d, 1.0, rng).size());
    counts.push_back(n);
    sum += n;
  }
  const double mean = sum / reps;
  CHECK(std::abs(mean - 100.0) < 3.0 * std::sqrt(100.0 / reps));
  // Chi-square over bins [.., 85], (85,90], ..., (115, ..)
  const std::vector<int> edges{85, 90, 95, 100, 105, 110, 115};
  auto cdf = [](int k) {
    double p = std::exp(-100.0), s = 0;
    for (int i = 0; i <= k; ++i) {
      if (i > 0) p *= 100.0 / i;
      s += p;
    }
    return s;
  };
  std::vector<double> expect;
  double prev = 0;
  for (int e : edges) {
    const double c = cdf(e);
    expect.push_back((c - prev) * reps);
    prev = c;
  }
  expect.push_back((1 - prev) * reps);
  std::vector<double> obs(expect.size(), 0);
  for (int n : counts) {
    std::size_t b = 0;
    while (b < edges.size() && n > edges[b]) ++b;
    obs[b] += 1;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) chi2 += (obs[i] - expect[i]) * (obs[i] - expect[i]) / expect[i];
  // 7 degrees of freedom, p = 0.001 quantile is 24.32
  CHECK(chi2 < 24.32);
}

TEST_CASE("axis sampling: mean 100 on [0,50] at rate 2, sorted decreasing") {
  double sum = 0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    RandomSource rng(9, Stream::axis, r);
    const auto ax = sample_poisson_on_axis(2.0, 0, 50, rng);
    for (std::size_t i = 1; i < ax.size(); ++i) REQUIRE(ax.times()[i - 1] > ax.times()[i]);
    sum += ax.size();
  }
  CHECK(std::abs(sum / reps - 100.0) < 3.0 * std::sqrt(100.0 / reps));
}

TEST_CASE("text round trip is exact") {
  RandomSource rng(3, Stream::interior);
  const auto c = sample_poisson_in_domain(Domain::triangle(5), 1.0, rng);
  std::stringstream ss;
  write_config(ss, c);
  CHECK(read_config(ss) == c);
  AxisPoints ax({0.1, 2.0 / 3.0, 4.5});
  std::stringstream sa;
  write_axis(sa, ax);
  CHECK(read_axis(sa) == ax);
  std::stringstream bad("1 2\n3 x\n");
  CHECK_THROWS_WITH_AS(read_config(bad), doctest::Contains("line 2"), InvalidInput);
}
