#include "hammersley/lines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sweep.hpp"

namespace hammersley {
namespace {

struct Interval {
  double key;
  double lo;
  double hi;
};

// Merges collinear pieces sharing a key; touching intervals are joined.
std::vector<Interval> merge_collinear(std::vector<Interval> iv) {
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
    return std::tie(a.key, a.lo, a.hi) < std::tie(b.key, b.lo, b.hi);
  });
  std::vector<Interval> out;
  for (const auto& i : iv) {
    if (!out.empty() && out.back().key == i.key && i.lo <= out.back().hi) {
      if (i.lo < out.back().hi) throw std::logic_error("overlapping trajectory pieces");
      out.back().hi = std::max(out.back().hi, i.hi);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool x_less(const LightCone& a, const LightCone& b) {
  const double xa = a.u - a.v;
  const double xb = b.u - b.v;
  if (xa != xb) return xa < xb;
  return a.u < b.u;
}

}  // namespace

std::vector<BirthEvent> sample_boundary_births(const Domain& d, double lambda2, RandomSource& rng,
                                               BoundaryMode mode) {
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) throw InvalidInput("lambda2 must be finite and >= 0");
  std::vector<BirthEvent> out;
  if (mode == BoundaryMode::none || lambda2 == 0.0) return out;
  const double t0 = d.t0();
  const double lo = d.g_minus(t0);
  const double hi = d.g_plus(t0);
  const double left_rate = std::sqrt(lambda2 / 2.0);
  const double edge_rate = std::sqrt(lambda2);

  auto left = [&](Stream s, int velocity, BirthOrigin origin) {
    auto r = rng.derive(s);
    const auto n = r.poisson(left_rate * d.left_edge_length());
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = r.uniform(lo, hi);
      const LightCone k{t0 + x, t0 - x};
      out.push_back({k.point(), velocity, origin, k});
    }
  };
  left(Stream::boundary_left_up, +1, BirthOrigin::left_up);
  left(Stream::boundary_left_down, -1, BirthOrigin::left_down);

  {
    auto r = rng.derive(Stream::boundary_northwest);
    const auto n = r.poisson(edge_rate * d.northwest_length());
    for (std::uint64_t i = 0; i < n; ++i) {
      const double t = r.uniform(t0, d.t_peak_plus());
      const LightCone k{2.0 * t - d.v_min(), d.v_min()};
      out.push_back({k.point(), -1, BirthOrigin::northwest, k});
    }
  }
  {
    auto r = rng.derive(Stream::boundary_southwest);
    const auto n = r.poisson(edge_rate * d.southwest_length());
    for (std::uint64_t i = 0; i < n; ++i) {
      const double t = r.uniform(t0, d.t_trough_minus());
      const LightCone k{d.u_min(), 2.0 * t - d.u_min()};
      out.push_back({k.point(), +1, BirthOrigin::southwest, k});
    }
  }
  return out;
}

double BrokenLine::height_at(double x) const {
  if (vertices.size() < 2) throw std::logic_error("broken line needs two vertices");
  // On a +1 piece t - x = v, on a -1 piece t + x = u.
  auto eval = [&](std::size_t i) {
    const auto& a = vertices[i];
    const auto& b = vertices[i + 1];
    return a.v == b.v ? a.v + x : a.u - x;
  };
  if (x <= vertices.front().x()) {
    if (x == vertices.front().x()) return vertices.front().t();
    return eval(0);
  }
  if (x >= vertices.back().x()) {
    if (x == vertices.back().x()) return vertices.back().t();
    return eval(vertices.size() - 2);
  }
  auto it = std::upper_bound(vertices.begin(), vertices.end(), x,
                             [](double xv, const LightCone& c) { return xv < c.x(); });
  const auto i = static_cast<std::size_t>(it - vertices.begin()) - 1;
  if (vertices[i].x() == x) return vertices[i].t();
  return eval(i);
}

std::vector<Segment> BrokenLine::segments(std::size_t line_id) const {
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[i + 1];
    if (a.v == b.v) {
      // x increases with t: velocity +1, a is the lower end.
      out.push_back({a, b, +1, line_id});
    } else {
      out.push_back({b, a, -1, line_id});
    }
  }
  return out;
}

LineSet::LineSet(Domain domain, std::vector<BrokenLine> lines, std::vector<BirthEvent> births)
    : domain_(domain), lines_(std::move(lines)), births_(std::move(births)) {
  for (const auto& b : births_) birth_keys_.push_back(b.key_point);
  std::sort(birth_keys_.begin(), birth_keys_.end());
  for (const auto& line : lines_) {
    const auto& v = line.vertices;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i - 1].v == v[i].v && v[i].u == v[i + 1].u) collisions_.push_back(v[i]);
    }
  }
  std::sort(collisions_.begin(), collisions_.end());
}

std::vector<Segment> LineSet::segments() const {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    auto s = lines_[i].segments(i);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

VertexKind LineSet::vertex_kind(std::size_t line, std::size_t vertex) const {
  const auto& v = lines_.at(line).vertices;
  if (vertex >= v.size()) throw std::out_of_range("vertex index");
  const auto& c = v[vertex];
  if (vertex > 0 && vertex + 1 < v.size()) {
    return v[vertex - 1].v == c.v ? VertexKind::collision : VertexKind::interior_birth;
  }
  // Line end: a local minimum is a boundary birth, otherwise an exit.
  const auto& nb = vertex == 0 ? v[1] : v[vertex - 1];
  if (nb.t() > c.t() && std::binary_search(birth_keys_.begin(), birth_keys_.end(), c)) {
    return VertexKind::boundary_birth;
  }
  return VertexKind::exit;
}

LineSet assemble_lines(const Domain& d, std::span<const Segment> pieces,
                       std::vector<BirthEvent> boundary_births) {
  std::vector<Interval> plus;
  std::vector<Interval> minus;
  for (const auto& s : pieces) {
    if (s.start == s.end) continue;
    if (s.start.v == s.end.v) {
      plus.push_back({s.start.v, std::min(s.start.u, s.end.u), std::max(s.start.u, s.end.u)});
    } else if (s.start.u == s.end.u) {
      minus.push_back({s.start.u, std::min(s.start.v, s.end.v), std::max(s.start.v, s.end.v)});
    } else {
      throw std::logic_error("trajectory piece is not on a light-cone line");
    }
  }
  plus = merge_collinear(std::move(plus));
  minus = merge_collinear(std::move(minus));

  // Endpoints: piece i has endpoints 2i and 2i+1.
  std::vector<LightCone> ends;
  ends.reserve(2 * (plus.size() + minus.size()));
  for (const auto& p : plus) {
    ends.push_back({p.lo, p.key});
    ends.push_back({p.hi, p.key});
  }
  for (const auto& m : minus) {
    ends.push_back({m.key, m.lo});
    ends.push_back({m.key, m.hi});
  }
  const std::size_t n = ends.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; i += 2) uf.unite(i, i + 1);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ends[a] < ends[b]; });
  for (std::size_t i = 1; i < n; ++i) {
    if (ends[idx[i]] == ends[idx[i - 1]]) uf.unite(idx[i], idx[i - 1]);
  }

  std::map<std::size_t, std::vector<LightCone>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(ends[i]);
  std::vector<BrokenLine> lines;
  lines.reserve(groups.size());
  for (auto& [root, pts] : groups) {
    std::sort(pts.begin(), pts.end(), x_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    lines.push_back({std::move(pts)});
  }
  std::sort(lines.begin(), lines.end(), [](const BrokenLine& a, const BrokenLine& b) {
    return a.vertices.front() < b.vertices.front();
  });
  return LineSet(d, std::move(lines), std::move(boundary_births));
}

LineSet build_broken_lines(const PlanarConfig& config, std::span<const BirthEvent> births,
                           const Domain& d) {
  for (const auto& p : config.points()) {
    if (!d.contains(p)) {
      throw InvalidInput("point (" + format_double(p.t) + ", " + format_double(p.x) +
                         ") lies outside the domain");
    }
  }
  auto out = detail::run_sweep(d, detail::sources_from(config, births), 0);
  return assemble_lines(d, out.regular, std::vector<BirthEvent>(births.begin(), births.end()));
}

void write_lineset(std::ostream& os, const LineSet& ls) {
  const auto& d = ls.domain();
  os << "DOMAIN " << format_double(d.t0()) << ' ' << format_double(d.t1()) << ' '
     << format_double(d.u_min()) << ' ' << format_double(d.u_max()) << ' '
     << format_double(d.v_min()) << ' ' << format_double(d.v_max()) << '\n';
  for (std::size_t i = 0; i < ls.lines().size(); ++i) {
    const auto& line = ls.lines()[i];
    os << "LINE " << i << ' ' << line.vertices.size();
    for (const auto& v : line.vertices) os << ' ' << format_double(v.t()) << ' ' << format_double(v.x());
    os << '\n';
  }
}

}  // namespace hammersley
