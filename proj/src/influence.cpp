#include "hammersley/influence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "sweep.hpp"

namespace hammersley {
namespace {

using detail::SweepOutput;
using detail::SweepSource;
using detail::SuperiorTrace;
using detail::TraceEnd;

bool collinear(const LightCone& a, const LightCone& b, const LightCone& c) {
  return (a.u == b.u && b.u == c.u) || (a.v == b.v && b.v == c.v);
}

std::vector<LightCone> corners(const std::vector<LightCone>& raw) {
  std::vector<LightCone> out;
  for (const auto& p : raw) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), p)) out.pop_back();
    out.push_back(p);
  }
  return out;
}

InfluencePath to_path(const SuperiorTrace& tr) {
  InfluencePath p;
  p.sign = tr.type;
  p.index = static_cast<std::size_t>(tr.index);
  p.vertices = corners(tr.vertices);
  if (p.vertices.empty()) throw std::logic_error("superior particle without trajectory");
  p.origin = p.vertices.front().point();
  switch (tr.end) {
    case TraceEnd::exited: p.end = PathEnd::exited; break;
    case TraceEnd::annihilated: p.end = PathEnd::annihilated; break;
    case TraceEnd::truncated: p.end = PathEnd::truncated_at_return; break;
    case TraceEnd::alive: throw std::logic_error("superior particle still alive after sweep");
  }
  if (tr.partner >= 0) {
    p.partner = std::pair<std::size_t, int>(detail::index_of_label(tr.partner),
                                            detail::type_of_label(tr.partner));
  }
  return p;
}

std::vector<SweepSource> regular_sources(const LineSet& ls, const PlanarConfig& config) {
  return detail::sources_from(config, ls.boundary_births());
}

void check_new_point(const LineSet& ls, const PlanarConfig& config, const Point2& x) {
  if (!ls.domain().contains(x)) {
    throw InvalidInput("added point (" + format_double(x.t) + ", " + format_double(x.x) +
                       ") lies outside the domain");
  }
  if (config.contains(x)) throw InvalidInput("added point coincides with an existing point");
}

struct Keyed {
  std::map<double, std::vector<std::pair<double, double>>> plus;   // v -> u intervals
  std::map<double, std::vector<std::pair<double, double>>> minus;  // u -> v intervals
};

void erase_interval(std::map<double, std::vector<std::pair<double, double>>>& m, double key,
                    double lo, double hi) {
  auto it = m.find(key);
  if (it != m.end()) {
    auto& iv = it->second;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      if (iv[i].first <= lo && hi <= iv[i].second) {
        const auto old = iv[i];
        iv.erase(iv.begin() + static_cast<std::ptrdiff_t>(i));
        if (old.first < lo) iv.emplace_back(old.first, lo);
        if (hi < old.second) iv.emplace_back(hi, old.second);
        return;
      }
    }
  }
  throw std::logic_error("erase rule: superior piece is not contained in an existing line");
}

// Erase the pieces run against their type, add the pieces run with it.
LineSet erase_add(const LineSet& ls, const SweepOutput& out) {
  Keyed k;
  for (const auto& s : ls.segments()) {
    if (s.velocity > 0) {
      k.plus[s.start.v].emplace_back(s.start.u, s.end.u);
    } else {
      k.minus[s.start.u].emplace_back(s.start.v, s.end.v);
    }
  }
  std::vector<Segment> added;
  for (const auto& tr : out.superiors) {
    if (tr.type == 0) continue;
    const auto& v = tr.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const auto& a = v[i];
      const auto& b = v[i + 1];
      if (a == b) continue;
      const int vel = a.v == b.v ? +1 : -1;
      if (vel == tr.type) {
        added.push_back({a, b, vel, 0});
      } else if (vel > 0) {
        erase_interval(k.plus, a.v, std::min(a.u, b.u), std::max(a.u, b.u));
      } else {
        erase_interval(k.minus, a.u, std::min(a.v, b.v), std::max(a.v, b.v));
      }
    }
  }
  std::vector<Segment> pieces = std::move(added);
  for (const auto& [key, iv] : k.plus) {
    for (const auto& [lo, hi] : iv) pieces.push_back({{lo, key}, {hi, key}, +1, 0});
  }
  for (const auto& [key, iv] : k.minus) {
    for (const auto& [lo, hi] : iv) pieces.push_back({{key, lo}, {key, hi}, -1, 0});
  }
  return assemble_lines(ls.domain(), pieces,
                        std::vector<BirthEvent>(ls.boundary_births().begin(), ls.boundary_births().end()));
}

SweepOutput sweep_with_axis(const LineSet& ls, const PlanarConfig& config, std::span<const Point2> xs) {
  auto sources = regular_sources(ls, config);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sources.push_back({LightCone::of(xs[i]), 0, static_cast<int>(i)});
  }
  return detail::run_sweep(ls.domain(), std::move(sources), static_cast<int>(xs.size()));
}

std::vector<PathPair> pairs_of(const SweepOutput& out, std::size_t count) {
  std::vector<PathPair> paths;
  paths.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    paths.push_back({to_path(out.superiors[detail::label_of(int(i), +1)]),
                     to_path(out.superiors[detail::label_of(int(i), -1)])});
  }
  return paths;
}

double interp(const std::vector<Point2>& poly, double t) {
  auto it = std::lower_bound(poly.begin(), poly.end(), t,
                             [](const Point2& p, double tv) { return p.t < tv; });
  if (it == poly.end()) return poly.back().x;
  if (it->t == t || it == poly.begin()) return it->x;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.x + (b.x - a.x) * (t - a.t) / (b.t - a.t);
}

}  // namespace

// ---------------------------------------------------------------------------
// InfluencePath

std::vector<PathPiece> InfluencePath::pieces() const {
  std::vector<PathPiece> out;
  int j = 1;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[i + 1];
    const int vel = a.v == b.v ? +1 : -1;
    if (!out.empty() && out.back().velocity != vel && vel == sign) ++j;
    out.push_back({j, vel, a, b});
  }
  return out;
}

double InfluencePath::x_at(double t) const {
  if (vertices.size() == 1) return vertices[0].x();
  auto it = std::lower_bound(vertices.begin(), vertices.end(), t,
                             [](const LightCone& c, double tv) { return c.t() < tv; });
  if (it == vertices.end()) --it;
  if (it->t() == t) return it->x();
  if (it == vertices.begin()) ++it;
  const auto& b = *it;
  const auto& a = *(it - 1);
  return a.v == b.v ? t - a.v : a.u - t;
}

std::optional<double> InfluencePath::first_return() const {
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[i + 1];
    // On a + piece x = t - v vanishes at t = v; on a - piece at t = u.
    const double hit = a.v == b.v ? a.v : a.u;
    if (a.t() < hit && hit <= b.t()) return hit;
  }
  return std::nullopt;
}

std::vector<LightCone> InfluencePath::truncated(double t) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  std::vector<LightCone> out;
  for (const auto& v : vertices) {
    if (v.t() < t - tol) {
      out.push_back(v);
    } else {
      // Keep an existing corner at t rather than a rounded copy of it.
      if (std::abs(v.t() - t) <= tol) out.push_back(v);
      break;
    }
  }
  if (out.empty() || out.back().t() < t - tol) out.push_back(LightCone::of({t, x_at(t)}));
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation

SinglePointUpdate augment_with_point(const LineSet& ls, const PlanarConfig& config, const Point2& x) {
  check_new_point(ls, config, x);
  const auto out = sweep_with_axis(ls, config, std::span<const Point2>(&x, 1));
  SinglePointUpdate r{erase_add(ls, out), pairs_of(out, 1).front(), {}};
  r.record.tau = self_annihilation_time(r.paths);
  return r;
}

AxisUpdate augment_with_axis_points(const LineSet& ls, const PlanarConfig& config, const AxisPoints& xs) {
  const auto pts = xs.points();
  for (const auto& p : pts) check_new_point(ls, config, p);
  const auto out = sweep_with_axis(ls, config, pts);
  AxisUpdate r{erase_add(ls, out), xs, pairs_of(out, pts.size()), 0};
  for (const auto& e : out.encounters) {
    if (!e.annihilation && e.lower_label >= 0 && e.upper_label >= 0) ++r.exchanges;
  }
  return r;
}

bool is_essential(const PlanarConfig& config, const Point2& x, const Domain& d) {
  const auto before = count_lines(build_broken_lines(config, d));
  const auto after = count_lines(build_broken_lines(config.with(x), d));
  return after == before + 1;
}

double self_annihilation_time(const PathPair& paths) {
  const auto& p = paths.plus;
  if (p.end != PathEnd::annihilated || !p.partner) return kNever;
  if (p.partner->first != p.index || p.partner->second != -1) return kNever;
  return p.end_time();
}

namespace {

struct Joint {
  SweepOutput out;
  std::vector<PathPair> paths;
};

Joint joint_sweep(const PlanarConfig& config, std::span<const Point2> pts, const Domain& d) {
  auto sources = detail::sources_from(config, {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!d.contains(pts[i]) || config.contains(pts[i])) throw InvalidInput("invalid added point");
    sources.push_back({LightCone::of(pts[i]), 0, static_cast<int>(i)});
  }
  Joint j{detail::run_sweep(d, std::move(sources), static_cast<int>(pts.size())), {}};
  j.paths = pairs_of(j.out, pts.size());
  return j;
}

double last_death(const std::vector<PathPair>& paths) {
  double t = -kNever;
  for (const auto& pp : paths) {
    for (const auto* p : {&pp.plus, &pp.minus}) {
      if (p->end != PathEnd::annihilated) return kNever;
      t = std::max(t, p->end_time());
    }
  }
  return t;
}

}  // namespace

AnnihilationRecord classify_pair_annihilation(const PlanarConfig& config, const Point2& x,
                                              const Point2& y, const Domain& d) {
  if (x.x != 0.0 || y.x != 0.0 || !(x.t < y.t)) {
    throw InvalidInput("pair classification needs axis points with x older than y");
  }
  AnnihilationRecord rec;
  const Point2 single_x[] = {x};
  const Point2 single_y[] = {y};
  rec.tau = self_annihilation_time(joint_sweep(config, single_x, d).paths.front());
  const double tau_y = self_annihilation_time(joint_sweep(config, single_y, d).paths.front());
  // Index 0 is the younger point y, index 1 the older x.
  const Point2 both[] = {y, x};
  const auto j = joint_sweep(config, both, d);
  rec.pair_tau = last_death(j.paths);
  const auto& py = j.paths[0];
  const auto& px = j.paths[1];
  const double own_x = self_annihilation_time(px);
  const double own_y = self_annihilation_time(py);
  if (rec.tau < y.t) {
    if (tau_y < kNever) rec.pair_class = PairClass::flat;
    return rec;
  }
  const bool cross = px.plus.partner && px.plus.partner->first == 0;
  const bool cross2 = px.minus.partner && px.minus.partner->first == 0;
  if ((cross || cross2) && rec.pair_tau < kNever) {
    rec.pair_class = PairClass::crossed;
    return rec;
  }
  if (own_x < kNever && own_y < kNever) {
    const bool inside = px.minus.x_at(y.t) < 0.0 && 0.0 < px.plus.x_at(y.t);
    rec.pair_class = inside ? PairClass::embedded : PairClass::parallel;
  }
  return rec;
}

double family_annihilation_time(const PlanarConfig& config, const AxisPoints& xs, const Domain& d) {
  if (xs.empty()) return -kNever;
  const auto pts = xs.points();
  return last_death(joint_sweep(config, pts, d).paths);
}

// ---------------------------------------------------------------------------
// Attractors

bool Attractor::contains(const Point2& p) const {
  if (degenerate || !(p.t > origin.t && p.t < t_hat)) return false;
  return interp(lower, p.t) < p.x && p.x < interp(upper, p.t);
}

Attractor build_attractor(const PathPair& paths, const Domain& d) {
  (void)d;
  Attractor a;
  a.index = paths.plus.index;
  a.origin = paths.plus.origin;
  if (paths.plus.end != PathEnd::truncated_at_return) a.f_plus = paths.plus.end_point().point();
  if (paths.minus.end != PathEnd::truncated_at_return) a.f_minus = paths.minus.end_point().point();
  a.r_plus = paths.plus.first_return();
  a.r_minus = paths.minus.first_return();
  a.t_hat = kNever;
  if (a.f_plus) a.t_hat = std::min(a.t_hat, a.f_plus->t);
  if (a.f_minus) a.t_hat = std::min(a.t_hat, a.f_minus->t);
  if (a.r_plus) a.t_hat = std::min(a.t_hat, *a.r_plus);
  if (a.r_minus) a.t_hat = std::min(a.t_hat, *a.r_minus);
  a.reaches_boundary = (paths.plus.end == PathEnd::exited && paths.plus.end_time() == a.t_hat) ||
                       (paths.minus.end == PathEnd::exited && paths.minus.end_time() == a.t_hat);
  if (a.t_hat == kNever) throw std::logic_error("attractor without end time");
  a.degenerate = !(a.t_hat > a.origin.t);
  for (const auto& c : paths.plus.truncated(a.t_hat)) a.upper.push_back(c.point());
  for (const auto& c : paths.minus.truncated(a.t_hat)) a.lower.push_back(c.point());
  a.upper.front() = a.origin;
  a.lower.front() = a.origin;
  a.e_plus = a.upper.back();
  a.e_minus = a.lower.back();
  // Before t_hat the upper path stays above the lower one.
  for (const auto* side : {&a.upper, &a.lower}) {
    for (std::size_t i = 1; i + 1 < side->size(); ++i) {
      const double t = (*side)[i].t;
      if (!(interp(a.lower, t) < interp(a.upper, t))) {
        throw std::logic_error("attractor boundary intersects itself");
      }
    }
  }
  a.region = a.lower;
  for (auto it = a.upper.rbegin(); it != a.upper.rend(); ++it) {
    if (!(*it == a.region.back()) && !(*it == a.origin)) a.region.push_back(*it);
  }
  return a;
}

std::vector<Attractor> build_attractors(const AxisUpdate& update) {
  std::vector<Attractor> out;
  out.reserve(update.paths.size());
  for (const auto& p : update.paths) out.push_back(build_attractor(p, update.lines.domain()));
  return out;
}

struct AttractorBuilder::State {
  Domain domain;
  std::vector<Point2> pts;
  std::vector<SweepSource> regular;  // sorted by t
  std::vector<detail::Snapshot> snaps;  // by ascending axis time
  std::vector<std::optional<Attractor>> cache;
};

AttractorBuilder::AttractorBuilder(const LineSet& ls, const PlanarConfig& config, const AxisPoints& xs)
    : xs_(xs), state_(new State{ls.domain(), {}, {}, {}, {}}) {
  auto& st = *state_;
  st.pts = xs.points();
  for (const auto& p : st.pts) check_new_point(ls, config, p);
  st.regular = regular_sources(ls, config);
  std::sort(st.regular.begin(), st.regular.end(), [](const SweepSource& a, const SweepSource& b) {
    return a.at.t() < b.at.t();
  });
  std::vector<double> ascending(xs.times().rbegin(), xs.times().rend());
  st.snaps = detail::regular_snapshots(st.domain, st.regular, ascending);
  st.cache.resize(st.pts.size());
}

AttractorBuilder::~AttractorBuilder() = default;

std::size_t AttractorBuilder::built() const {
  return static_cast<std::size_t>(std::count_if(state_->cache.begin(), state_->cache.end(),
                                                [](const auto& a) { return a.has_value(); }));
}

const Attractor& AttractorBuilder::get(std::size_t i) {
  auto& st = *state_;
  if (i >= st.pts.size()) throw std::out_of_range("attractor index");
  if (st.cache[i]) return *st.cache[i];
  const double ti = st.pts[i].t;
  const auto& snap = st.snaps[st.pts.size() - 1 - i];
  auto first = std::upper_bound(st.regular.begin(), st.regular.end(), ti,
                                [](double t, const SweepSource& s) { return t < s.at.t(); });
  std::vector<SweepSource> sources(first, st.regular.end());
  for (std::size_t j = 0; j <= i; ++j) sources.push_back({LightCone::of(st.pts[j]), 0, static_cast<int>(j)});
  detail::SweepOptions opt;
  opt.initial = &snap;
  opt.watch = static_cast<int>(i);
  opt.record_regular = false;
  const auto res = detail::run_sweep(st.domain, std::move(sources), static_cast<int>(i + 1), opt);
  const PathPair pp{to_path(res.superiors[detail::label_of(int(i), +1)]),
                    to_path(res.superiors[detail::label_of(int(i), -1)])};
  st.cache[i] = build_attractor(pp, st.domain);
  return *st.cache[i];
}

std::vector<Attractor> sequential_attractors(const LineSet& ls, const PlanarConfig& config,
                                            const AxisPoints& xs) {
  AttractorBuilder b(ls, config, xs);
  std::vector<Attractor> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(b.get(i));
  return out;
}

ConnectivityReport::ConnectivityReport(const std::vector<Attractor>& attractors, const AxisPoints& xs)
    : n_(attractors.size()), words_((attractors.size() + 63) / 64), preds_(attractors.size()) {
  if (xs.size() != n_) throw InvalidInput("connectivity: attractor and axis counts differ");
  reach_.assign(n_ * words_, 0);
  for (std::size_t b = 0; b < n_; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      if (attractors[b].contains(xs.point(a))) preds_[b].push_back(a);
    }
  }
  for (std::size_t b = 0; b < n_; ++b) {
    auto* rb = &reach_[b * words_];
    for (std::size_t a : preds_[b]) {
      const auto* ra = &reach_[a * words_];
      for (std::size_t w = 0; w < words_; ++w) rb[w] |= ra[w];
      rb[a / 64] |= std::uint64_t{1} << (a % 64);
    }
  }
}

bool ConnectivityReport::direct(std::size_t a, std::size_t b) const {
  if (b >= n_ || a >= b) return false;
  return std::binary_search(preds_[b].begin(), preds_[b].end(), a);
}

bool ConnectivityReport::connected(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= i) return false;
  return (reach_[i * words_ + j / 64] >> (j % 64)) & 1U;
}

std::vector<std::size_t> ConnectivityReport::witness(std::size_t i, std::size_t j) const {
  std::vector<std::size_t> chain;
  if (!connected(i, j)) return chain;
  std::size_t b = i;
  chain.push_back(b);
  while (b != j) {
    std::size_t next = n_;
    for (std::size_t a : preds_[b]) {
      if (a == j || (a > j && connected(a, j))) {
        next = a;
        break;
      }
    }
    if (next == n_) throw std::logic_error("connectivity witness lost");
    b = next;
    chain.push_back(b);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<std::pair<std::size_t, std::size_t>> ConnectivityReport::connected_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (connected(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

ConnectivityReport attractors_connected(const std::vector<Attractor>& attractors, const AxisPoints& xs) {
  return ConnectivityReport(attractors, xs);
}

bool spanning_chain_exists(const ConnectivityReport& report, const std::vector<Attractor>& attractors) {
  const std::size_t n = report.size();
  if (n == 0) return false;
  const std::size_t oldest = n - 1;
  if (attractors[oldest].reaches_boundary) return true;
  for (std::size_t j = 0; j < oldest; ++j) {
    if (attractors[j].reaches_boundary && report.connected(oldest, j)) return true;
  }
  return false;
}

bool spanning_chain_exists(AttractorBuilder& builder) {
  const std::size_t n = builder.size();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{n - 1};
  seen[n - 1] = true;
  while (!stack.empty()) {
    const std::size_t b = stack.back();
    stack.pop_back();
    const auto& a = builder.get(b);
    if (a.reaches_boundary) return true;
    for (std::size_t j = 0; j < b; ++j) {
      if (!seen[j] && a.contains(builder.axis().point(j))) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Text records

void write_path(std::ostream& os, const InfluencePath& p) {
  const char* end = p.end == PathEnd::exited ? "exited" : p.end == PathEnd::annihilated ? "annihilated" : "truncated";
  os << "PATH " << p.index << ' ' << (p.sign > 0 ? '+' : '-') << ' ' << end << ' ' << p.vertices.size();
  for (const auto& v : p.vertices) os << ' ' << format_double(v.t()) << ' ' << format_double(v.x());
  os << '\n';
}

void write_attractor(std::ostream& os, const Attractor& a) {
  os << "ATTRACTOR " << a.index << ' ' << format_double(a.t_hat) << ' ' << (a.reaches_boundary ? 1 : 0)
     << ' ' << a.region.size();
  for (const auto& p : a.region) os << ' ' << format_double(p.t) << ' ' << format_double(p.x);
  os << '\n';
}

}  // namespace hammersley
