#include "hammersley/checks.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hammersley {
namespace {

Point2 uniform_point(const Domain& d, RandomSource& rng) {
  for (;;) {
    const double t = rng.uniform(d.t0(), d.t1());
    const double x = rng.uniform(d.g_minus(d.t1()), d.g_plus(d.t1()));
    const Point2 p{t, x};
    if (d.contains(p) && !d.on_boundary(p)) return p;
  }
}

Point2 fresh_point(const Domain& d, const PlanarConfig& c, RandomSource& rng) {
  for (;;) {
    const auto p = uniform_point(d, rng);
    if (!c.contains(p)) return p;
  }
}

std::string where(std::size_t trial) { return "trial " + std::to_string(trial); }

struct Scene {
  Domain d;
  PlanarConfig config;
};

Scene random_scene(RandomSource& rng, double n_lo, double n_hi) {
  const auto d = Domain::triangle(rng.uniform(n_lo, n_hi));
  return {d, sample_poisson_in_domain(d, 1.0, rng)};
}

// Axis points strictly inside the triangle, at least `min_count` of them.
AxisPoints random_axis(const Domain& d, std::size_t min_count, RandomSource& rng) {
  for (;;) {
    auto ax = sample_poisson_on_axis(1.0, d.t0(), d.t1(), rng);
    if (ax.size() >= min_count) return ax;
  }
}

}  // namespace

void CheckResult::fail(const std::string& what) {
  if (failures++ == 0) first_failure = what;
}

double effective_t_hat(const Attractor& a) { return a.reaches_boundary ? kNever : a.t_hat; }

std::vector<std::vector<std::size_t>> all_longest_chains(const PlanarConfig& config) {
  const auto pts = config.points();
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> best;
  std::size_t best_len = 0;
  std::vector<std::size_t> cur;
  // Points come sorted by t, so successors have larger index.
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    bool extended = false;
    for (std::size_t j = from; j < n; ++j) {
      if (!cur.empty()) {
        const auto& a = pts[cur.back()];
        if (!(a.u() < pts[j].u() && a.v() < pts[j].v())) continue;
      }
      extended = true;
      cur.push_back(j);
      grow(j + 1);
      cur.pop_back();
    }
    if (!extended && cur.size() >= best_len) {
      if (cur.size() > best_len) best.clear();
      best_len = cur.size();
      best.push_back(cur);
    }
  };
  grow(0);
  if (best_len == 0) best.clear();
  return best;
}

std::vector<bool> essential_at_insertion(const PlanarConfig& config, const AxisPoints& xs, const Domain& d) {
  const auto pts = xs.points();
  std::vector<bool> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::span<const Point2> younger(pts.data(), i);
    out[i] = is_essential(config.with(younger), pts[i], d);
  }
  return out;
}

CheckResult check_abelian(std::uint64_t seed, std::size_t sceneries, std::size_t max_points) {
  CheckResult r;
  for (std::size_t s = 0; s < sceneries; ++s) {
    RandomSource rng(seed, Stream::interior, s);
    auto scene = random_scene(rng, 4.0, 9.0);
    if (scene.config.size() > 100) continue;
    ++r.trials;
    const auto& d = scene.d;
    const auto k = 2 + static_cast<std::size_t>(rng.uniform() * double(max_points - 1));
    std::vector<Point2> extra;
    auto all = scene.config;
    while (extra.size() < std::min(k, max_points)) {
      extra.push_back(fresh_point(d, all, rng));
      all = all.with(extra.back());
    }
    const auto base = build_broken_lines(scene.config, d);
    const auto reference = build_broken_lines(all, d);
    std::vector<std::size_t> perm(extra.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      auto ls = base;
      auto c = scene.config;
      for (std::size_t i : perm) {
        ls = augment_with_point(ls, c, extra[i]).lines;
        c = c.with(extra[i]);
      }
      ++r.checks;
      if (!(ls == reference)) r.fail(where(s) + ": insertion order changes the line set");
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return r;
}

CheckResult check_monotonicity(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    RandomSource rng(seed, Stream::interior, s);
    const auto scene = random_scene(rng, 3.0, 12.0);
    const auto x = fresh_point(scene.d, scene.config, rng);
    const auto before = count_lines(build_broken_lines(scene.config, scene.d));
    const auto after = count_lines(build_broken_lines(scene.config.with(x), scene.d));
    ++r.trials;
    ++r.checks;
    if (after != before && after != before + 1) {
      r.fail(where(s) + ": H went from " + std::to_string(before) + " to " + std::to_string(after));
    }
  }
  return r;
}

CheckResult check_incremental(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    RandomSource rng(seed, Stream::interior, s);
    const auto scene = random_scene(rng, 3.0, 12.0);
    const auto& d = scene.d;
    const auto ls = build_broken_lines(scene.config, d);
    ++r.trials;
    ++r.checks;
    if (s % 2 == 0) {
      const auto x = fresh_point(d, scene.config, rng);
      const auto up = augment_with_point(ls, scene.config, x);
      if (!(up.lines == build_broken_lines(scene.config.with(x), d))) r.fail(where(s) + ": bulk point");
    } else {
      const auto ax = random_axis(d, 1, rng);
      const auto up = augment_with_axis_points(ls, scene.config, ax);
      const auto pts = ax.points();
      if (!(up.lines == build_broken_lines(scene.config.with(pts), d))) r.fail(where(s) + ": axis points");
    }
  }
  return r;
}

CheckResult check_pin1(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    RandomSource rng(seed, Stream::interior, s);
    const auto d = Domain::triangle(3.0);
    auto base = sample_poisson_in_domain(d, 1.0, rng);
    while (base.size() > 12) base = sample_poisson_in_domain(d, 1.0, rng);
    const auto k = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    std::vector<Point2> extra;
    auto all = base;
    while (extra.size() < k) {
      extra.push_back(fresh_point(d, all, rng));
      all = all.with(extra.back());
    }
    ++r.trials;
    const auto chains = all_longest_chains(all);
    const auto pts = all.points();
    for (std::size_t i = 0; i < extra.size(); ++i) {
      // Essential against everything else present.
      std::vector<Point2> others;
      for (std::size_t j = 0; j < extra.size(); ++j) {
        if (j != i) others.push_back(extra[j]);
      }
      if (!is_essential(base.with(others), extra[i], d)) continue;
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(pts.begin(), pts.end(), extra[i]) - pts.begin());
      for (const auto& chain : chains) {
        ++r.checks;
        if (std::find(chain.begin(), chain.end(), idx) == chain.end()) {
          r.fail(where(s) + ": a longest chain misses an essential point");
          break;
        }
      }
    }
  }
  return r;
}

CheckResult check_vno(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    RandomSource rng(seed, Stream::interior, s);
    const auto scene = random_scene(rng, 6.0, 12.0);
    const auto& d = scene.d;
    ++r.trials;
    // Pair version.
    const auto ax = random_axis(d, 2, rng);
    const auto x = ax.point(1);
    const auto y = ax.point(0);
    const auto rec = classify_pair_annihilation(scene.config, x, y, d);
    const double tau_y = family_annihilation_time(scene.config, AxisPoints({y.t}), d);
    if (rec.tau < kNever && tau_y < kNever) {
      ++r.checks;
      if (rec.pair_tau < std::max(rec.tau, tau_y)) r.fail(where(s) + ": pair dies before a single");
    }
    // Family version: split up to six axis points into two families.
    const auto times = ax.times();
    const std::size_t m = std::min<std::size_t>(times.size(), 6);
    std::vector<double> f;
    std::vector<double> g;
    for (std::size_t i = 0; i < m; ++i) {
      auto& side = (rng.uniform() < 0.5 && f.size() < 3) || g.size() >= 3 ? f : g;
      side.push_back(times[i]);
    }
    if (f.empty() || g.empty()) continue;
    const double tf = family_annihilation_time(scene.config, AxisPoints(f), d);
    const double tg = family_annihilation_time(scene.config, AxisPoints(g), d);
    if (tf < kNever && tg < kNever) {
      std::vector<double> fg = f;
      fg.insert(fg.end(), g.begin(), g.end());
      ++r.checks;
      if (family_annihilation_time(scene.config, AxisPoints(fg), d) < std::max(tf, tg)) {
        r.fail(where(s) + ": union of families dies before a part");
      }
    }
  }
  return r;
}

namespace {

struct AttractorScene {
  Scene scene;
  AxisPoints axis;
  std::vector<Attractor> attractors;
};

AttractorScene attractor_scene(std::uint64_t seed, std::size_t s) {
  RandomSource rng(seed, Stream::interior, s);
  auto scene = random_scene(rng, 8.0, 18.0);
  auto ax = random_axis(scene.d, 2, rng);
  const auto ls = build_broken_lines(scene.config, scene.d);
  auto at = sequential_attractors(ls, scene.config, ax);
  return {std::move(scene), std::move(ax), std::move(at)};
}

}  // namespace

CheckResult check_crab(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    const auto a = attractor_scene(seed, s);
    ++r.trials;
    const auto rep = attractors_connected(a.attractors, a.axis);
    for (auto [i, j] : rep.connected_pairs()) {
      ++r.checks;
      if (effective_t_hat(a.attractors[i]) < effective_t_hat(a.attractors[j])) {
        r.fail(where(s) + ": older attractor closes first (" + std::to_string(i) + ", " +
               std::to_string(j) + ")");
      }
    }
  }
  return r;
}

CheckResult check_topdog(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    const auto a = attractor_scene(seed, s);
    ++r.trials;
    const auto rep = attractors_connected(a.attractors, a.axis);
    for (auto [i, j] : rep.connected_pairs()) {
      if (!a.attractors[j].reaches_boundary) continue;
      ++r.checks;
      if (!a.attractors[i].reaches_boundary) r.fail(where(s) + ": boundary reach not inherited");
    }
  }
  return r;
}

CheckResult check_topdog1(std::uint64_t seed, std::size_t trials) {
  CheckResult r;
  for (std::size_t s = 0; s < trials; ++s) {
    const auto a = attractor_scene(seed, s);
    ++r.trials;
    const auto rep = attractors_connected(a.attractors, a.axis);
    const auto pairs = rep.connected_pairs();
    if (pairs.empty()) continue;
    const auto ess = essential_at_insertion(a.scene.config, a.axis, a.scene.d);
    for (auto [i, j] : pairs) {
      if (!ess[j]) continue;
      ++r.checks;
      for (std::size_t k : rep.witness(i, j)) {
        if (!ess[k]) {
          r.fail(where(s) + ": non-essential point on a chain from an essential one");
          break;
        }
      }
    }
  }
  return r;
}

}  // namespace hammersley
