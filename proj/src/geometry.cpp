#include "hammersley/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace hammersley {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2 = 0.70710678118654752440;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> parse_fields(const std::string& line, int line_no) {
  std::istringstream in(line);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double value = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(value)) {
      throw InvalidInput("line " + std::to_string(line_no) + ": not a finite number: '" + tok + "'");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Point2 rotate_to_timecone(double a, double b) {
  return {(a + b) * kInvSqrt2, (b - a) * kInvSqrt2};
}

std::pair<double, double> rotate_back(const Point2& p) {
  return {(p.t - p.x) * kInvSqrt2, (p.t + p.x) * kInvSqrt2};
}

// ---------------------------------------------------------------------------
// Domain

Domain Domain::square(double n) {
  if (!(n > 0.0)) throw InvalidInput("square: side must be positive");
  Domain d;
  d.kind_ = Kind::square;
  d.size_ = n;
  const double s = n * kSqrt2;
  d.t0_ = 0.0;
  d.t1_ = s;
  d.u_min_ = 0.0;
  d.u_max_ = s;
  d.v_min_ = 0.0;
  d.v_max_ = s;
  return d;
}

Domain Domain::triangle(double n) {
  if (!(n > 0.0)) throw InvalidInput("triangle: size must be positive");
  Domain d;
  d.kind_ = Kind::triangle;
  d.size_ = n;
  d.t0_ = 0.0;
  d.t1_ = n;
  d.u_min_ = -n;
  d.u_max_ = n;
  d.v_min_ = -n;
  d.v_max_ = n;
  return d;
}

Domain Domain::general(double t0, double t1, double g_plus0, double t_peak_plus,
                       double g_minus0, double t_trough_minus) {
  if (!(t0 < t1)) throw InvalidInput("general domain: need t0 < t1");
  if (t_peak_plus < t0 || t_peak_plus > t1 || t_trough_minus < t0 || t_trough_minus > t1) {
    throw InvalidInput("general domain: boundary turning points must lie in [t0, t1]");
  }
  Domain d;
  d.kind_ = Kind::general;
  d.size_ = t1 - t0;
  d.t0_ = t0;
  d.t1_ = t1;
  d.u_max_ = g_plus0 + 2.0 * t_peak_plus - t0;
  d.v_min_ = t0 - g_plus0;
  d.u_min_ = t0 + g_minus0;
  d.v_max_ = 2.0 * t_trough_minus - t0 - g_minus0;
  d.validate();
  return d;
}

void Domain::validate() const {
  // g+ - g- is concave, so checking the two ends suffices.
  if (g_plus(t0_) < g_minus(t0_) || g_plus(t1_) < g_minus(t1_) || !(area() > 0.0)) {
    throw InvalidInput("general domain: need g-(t) < g+(t) on (t0, t1)");
  }
}

double Domain::g_plus(double t) const { return std::min(t - v_min_, u_max_ - t); }
double Domain::g_minus(double t) const { return std::max(u_min_ - t, t - v_max_); }

bool Domain::contains(const LightCone& p) const {
  const double s = p.u + p.v;
  return s > 2.0 * t0_ && s < 2.0 * t1_ && p.u > u_min_ && p.u < u_max_ && p.v > v_min_ &&
         p.v < v_max_;
}

bool Domain::on_boundary(const Point2& p, double tol) const {
  const double margin = std::min({p.t - t0_, t1_ - p.t, (p.u() - u_min_) * kInvSqrt2,
                                  (u_max_ - p.u()) * kInvSqrt2, (p.v() - v_min_) * kInvSqrt2,
                                  (v_max_ - p.v()) * kInvSqrt2});
  return std::abs(margin) <= tol;
}

double Domain::t_peak_plus() const { return std::clamp(0.5 * (u_max_ + v_min_), t0_, t1_); }
double Domain::t_trough_minus() const { return std::clamp(0.5 * (u_min_ + v_max_), t0_, t1_); }

std::vector<Point2> Domain::polygon() const {
  std::vector<double> ts{t0_, t1_, t_peak_plus(), t_trough_minus()};
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<Point2> poly;
  for (double t : ts) poly.push_back({t, g_minus(t)});
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) poly.push_back({*it, g_plus(*it)});
  std::vector<Point2> out;
  for (const auto& p : poly) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

double Domain::area() const {
  const auto poly = polygon();
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice += a.t * b.x - b.t * a.x;
  }
  return 0.5 * std::abs(twice);
}

double Domain::left_edge_length() const { return std::max(0.0, g_plus(t0_) - g_minus(t0_)); }
double Domain::northwest_length() const { return kSqrt2 * (t_peak_plus() - t0_); }
double Domain::southwest_length() const { return kSqrt2 * (t_trough_minus() - t0_); }

LightCone Domain::exit_plus(double v) const {
  if (0.5 * (u_max_ + v) < t1_) return {u_max_, v};
  return {2.0 * t1_ - v, v};
}

LightCone Domain::exit_minus(double u) const {
  if (0.5 * (u + v_max_) < t1_) return {u, v_max_};
  return {u, 2.0 * t1_ - u};
}

// ---------------------------------------------------------------------------
// Configurations

PlanarConfig::PlanarConfig(std::vector<Point2> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.t) || !std::isfinite(p.x)) throw InvalidInput("non-finite point");
  }
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw InvalidInput("duplicate point in configuration");
  }
}

bool PlanarConfig::contains(const Point2& p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

PlanarConfig PlanarConfig::with(const Point2& p) const {
  return with(std::span<const Point2>(&p, 1));
}

PlanarConfig PlanarConfig::with(std::span<const Point2> extra) const {
  std::vector<Point2> all(points_.begin(), points_.end());
  all.insert(all.end(), extra.begin(), extra.end());
  return PlanarConfig(std::move(all));
}

AxisPoints::AxisPoints(std::vector<double> times) : times_(std::move(times)) {
  for (double t : times_) {
    if (!std::isfinite(t)) throw InvalidInput("non-finite axis point");
  }
  std::sort(times_.begin(), times_.end(), std::greater<>());
  if (std::adjacent_find(times_.begin(), times_.end()) != times_.end()) {
    throw InvalidInput("duplicate axis point");
  }
}

std::vector<Point2> AxisPoints::points() const {
  std::vector<Point2> out;
  out.reserve(times_.size());
  for (double t : times_) out.push_back({t, 0.0});
  return out;
}

// ---------------------------------------------------------------------------
// Randomness

RandomSource::RandomSource(std::uint64_t seed, Stream stream, std::uint64_t replica)
    : seed_(seed), stream_(stream), replica_(replica) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state ^= static_cast<std::uint64_t>(stream) * 0xd6e8feb86659fd93ULL;
  key ^= splitmix64(state);
  state ^= replica * 0xa0761d6478bd642fULL;
  key ^= splitmix64(state);
  engine_.seed(key);
}

double RandomSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t RandomSource::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidInput("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  std::poisson_distribution<long long> dist(mean);
  return static_cast<std::uint64_t>(dist(engine_));
}

PlanarConfig sample_poisson_in_domain(const Domain& d, double intensity, RandomSource& rng) {
  if (!(intensity >= 0.0)) throw InvalidInput("intensity must be >= 0");
  const double area = d.area();
  if (!std::isfinite(area)) throw InvalidInput("domain has infinite area");
  const auto count = rng.poisson(intensity * area);
  const auto poly = d.polygon();
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  for (const auto& p : poly) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
  }
  std::vector<Point2> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    const Point2 p{rng.uniform(d.t0(), d.t1()), rng.uniform(x_lo, x_hi)};
    if (d.contains(p)) pts.push_back(p);
  }
  return PlanarConfig(std::move(pts));
}

AxisPoints sample_poisson_on_axis(double lambda1, double a, double b, RandomSource& rng) {
  if (!(a < b)) throw InvalidInput("axis interval must satisfy a < b");
  if (!(lambda1 >= 0.0)) throw InvalidInput("lambda1 must be >= 0");
  const auto count = rng.poisson(lambda1 * (b - a));
  std::vector<double> ts;
  ts.reserve(count);
  while (ts.size() < count) {
    const double t = rng.uniform(a, b);
    if (t > a) ts.push_back(t);
  }
  return AxisPoints(std::move(ts));
}

// ---------------------------------------------------------------------------
// Text serialization

void write_config(std::ostream& os, const PlanarConfig& config) {
  for (const auto& p : config.points()) os << format_double(p.t) << ' ' << format_double(p.x) << '\n';
}

PlanarConfig read_config(std::istream& is) {
  std::vector<Point2> pts;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = parse_fields(line, line_no);
    if (f.size() != 2) throw InvalidInput("line " + std::to_string(line_no) + ": expected 't x'");
    pts.push_back({f[0], f[1]});
  }
  return PlanarConfig(std::move(pts));
}

void write_axis(std::ostream& os, const AxisPoints& axis) {
  for (double t : axis.times()) os << format_double(t) << " 0\n";
}

AxisPoints read_axis(std::istream& is) {
  std::vector<double> ts;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = parse_fields(line, line_no);
    if (f.empty() || f.size() > 2 || (f.size() == 2 && f[1] != 0.0)) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 't 0'");
    }
    ts.push_back(f[0]);
  }
  return AxisPoints(std::move(ts));
}

}  // namespace hammersley
