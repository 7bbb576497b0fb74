#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hammersley/lines.hpp"

namespace hammersley {
namespace {

struct UV {
  double u;
  double v;
};

std::vector<UV> sorted_for_lis(std::span<const Point2> points) {
  std::vector<UV> uv;
  uv.reserve(points.size());
  for (const auto& p : points) uv.push_back({p.u(), p.v()});
  // Equal u cannot chain, so ties go v-descending.
  std::sort(uv.begin(), uv.end(), [](const UV& a, const UV& b) {
    return a.u != b.u ? a.u < b.u : a.v > b.v;
  });
  return uv;
}

double left_boundary_t(const Domain& d, double x) {
  return std::max({d.t0(), d.u_min() - x, d.v_min() + x});
}

}  // namespace

std::size_t lis_oracle(std::span<const Point2> points) {
  std::vector<double> tails;
  for (const auto& p : sorted_for_lis(points)) {
    auto it = std::lower_bound(tails.begin(), tails.end(), p.v);
    if (it == tails.end()) {
      tails.push_back(p.v);
    } else {
      *it = p.v;
    }
  }
  return tails.size();
}

std::size_t lis_oracle(const PlanarConfig& config) { return lis_oracle(config.points()); }

std::vector<std::size_t> longest_chain(const PlanarConfig& config) {
  const auto pts = config.points();
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ua = pts[a].u();
    const double ub = pts[b].u();
    return ua != ub ? ua < ub : pts[a].v() > pts[b].v();
  });
  std::vector<double> tails;
  std::vector<std::size_t> tail_idx;
  std::vector<std::size_t> prev(pts.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i : order) {
    const double v = pts[i].v();
    const auto pos = static_cast<std::size_t>(std::lower_bound(tails.begin(), tails.end(), v) - tails.begin());
    if (pos > 0) prev[i] = tail_idx[pos - 1];
    if (pos == tails.size()) {
      tails.push_back(v);
      tail_idx.push_back(i);
    } else {
      tails[pos] = v;
      tail_idx[pos] = i;
    }
  }
  std::vector<std::size_t> chain;
  if (tails.empty()) return chain;
  for (std::size_t i = tail_idx.back(); i != std::numeric_limits<std::size_t>::max(); i = prev[i]) {
    chain.push_back(i);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::size_t brute_force_chain(const PlanarConfig& config) {
  const auto pts = config.points();
  if (pts.size() > 20) throw InvalidInput("brute_force_chain: at most 20 points");
  // Sorted by t already; dominance implies larger t.
  std::vector<std::size_t> best(pts.size(), 1);
  std::size_t out = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (pts[i].u() < pts[j].u() && pts[i].v() < pts[j].v()) best[j] = std::max(best[j], best[i] + 1);
    }
    out = std::max(out, best[j]);
  }
  return out;
}

std::size_t separating_line_count(const LineSet& ls, const Point2& a, const Point2& b) {
  std::size_t count = 0;
  for (const auto& line : ls.lines()) {
    const double ha = line.height_at(a.x) - a.t;
    const double hb = line.height_at(b.x) - b.t;
    if (std::abs(ha) < 1e-9 || std::abs(hb) < 1e-9) {
      throw InvalidInput("separating_line_count: query point lies on a line");
    }
    if ((ha > 0) != (hb > 0)) ++count;
  }
  return count;
}

Geodesic extract_geodesic(const LineSet& ls, const Point2& start) {
  Geodesic g;
  const auto lines = ls.lines();
  LightCone cur = LightCone::of(start);
  g.path.push_back(start);
  for (;;) {
    const double x = cur.x();
    const double t = cur.t();
    std::size_t hit = lines.size();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& l = lines[i];
      if (x < l.x_min() || x > l.x_max()) continue;
      const double h = l.height_at(x);
      if (h < t && h > best) {
        best = h;
        hit = i;
      }
    }
    if (hit == lines.size()) {
      g.path.push_back({left_boundary_t(ls.domain(), x), x});
      break;
    }
    const auto& v = lines[hit].vertices;
    g.path.push_back({best, x});
    auto it = std::upper_bound(v.begin(), v.end(), x, [](double xv, const LightCone& c) { return xv < c.x(); });
    std::size_t i = static_cast<std::size_t>(it - v.begin());
    i = i == 0 ? 0 : i - 1;
    std::size_t birth;
    if (v[i].x() == x) {
      const auto k = ls.vertex_kind(hit, i);
      if (k == VertexKind::interior_birth || k == VertexKind::boundary_birth) {
        birth = i;
      } else if (k == VertexKind::collision) {
        birth = v[i - 1].t() < v[i + 1].t() ? i - 1 : i + 1;
      } else {
        // Exit end: walk down its only segment.
        birth = i == 0 ? 1 : i - 1;
      }
    } else {
      if (i + 1 >= v.size()) throw std::logic_error("geodesic: segment lookup failed");
      birth = v[i].t() < v[i + 1].t() ? i : i + 1;
    }
    const auto kind = ls.vertex_kind(hit, birth);
    g.path.push_back(v[birth].point());
    if (kind != VertexKind::interior_birth) break;
    g.collected.push_back(v[birth]);
    cur = v[birth];
  }
  return g;
}

std::size_t restricted_line_count(const LineSet& ls, const Domain& w) {
  std::size_t count = 0;
  for (const auto& line : ls.lines()) {
    const auto& v = line.vertices;
    bool open = false;  // previous segment reached its upper end inside
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[i + 1];
      const double du = b.u - a.u;
      const double dv = b.v - a.v;
      double lo = 0.0;
      double hi = 1.0;
      // Keep s with c0 + c1 s > 0.
      auto clip = [&](double c0, double c1) {
        if (c1 == 0.0) {
          if (!(c0 > 0.0)) hi = -1.0;
          return;
        }
        const double s = -c0 / c1;
        if (c1 > 0) {
          lo = std::max(lo, s);
        } else {
          hi = std::min(hi, s);
        }
      };
      clip(a.u - w.u_min(), du);
      clip(w.u_max() - a.u, -du);
      clip(a.v - w.v_min(), dv);
      clip(w.v_max() - a.v, -dv);
      clip(a.u + a.v - 2.0 * w.t0(), du + dv);
      clip(2.0 * w.t1() - a.u - a.v, -(du + dv));
      const bool nonempty = lo < hi;
      if (nonempty && !(open && lo <= 1e-12)) ++count;
      open = nonempty && hi >= 1.0 - 1e-12;
    }
  }
  return count;
}

}  // namespace hammersley
