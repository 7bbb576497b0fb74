#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hammersley {

// Thrown for malformed inputs: points outside a domain, duplicates,
// out-of-range parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point in the rotated (time-cone) frame. t is the horizontal "time" axis,
// x the vertical space axis. Light-cone coordinates are derived on demand.
struct Point2 {
  double t = 0.0;
  double x = 0.0;

  double u() const { return t + x; }
  double v() const { return t - x; }

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

// Vertex stored in light-cone coordinates u = t + x, v = t - x. Velocity +1
// particles keep v fixed and velocity -1 particles keep u fixed, so every
// vertex produced by the particle system is an exact pair of birth keys.
struct LightCone {
  double u = 0.0;
  double v = 0.0;

  double t() const { return 0.5 * (u + v); }
  double x() const { return 0.5 * (u - v); }
  Point2 point() const { return {t(), x()}; }
  static LightCone of(const Point2& p) { return {p.u(), p.v()}; }

  friend bool operator==(const LightCone&, const LightCone&) = default;
  friend auto operator<=>(const LightCone&, const LightCone&) = default;
};

// Rotation by pi/4 clockwise: the diagonal y = x of the unrotated square
// becomes the t-axis. Pure isometry, no rescaling.
Point2 rotate_to_timecone(double a, double b);
// Inverse of rotate_to_timecone; returns (a, b).
std::pair<double, double> rotate_back(const Point2& p);

// Planar domain of the form {t0 < t < t1, g-(t) < x < g+(t)} where g+ is a
// tent (slope +1 then -1) and g- an inverted tent. Every such domain is the
// intersection of the slab t0 < t < t1 with a light-cone rectangle
// u_min < u < u_max, v_min < v < v_max, which is how it is stored.
class Domain {
 public:
  enum class Kind { square, triangle, general };

  // Unrotated square [0,n]^2, rotated into the time-cone frame.
  static Domain square(double n);
  // Triangle with vertices (0,-n), (0,n), (n,0).
  static Domain triangle(double n);
  // g+(t) = g_plus0 + (t - t0) up to t_peak_plus, then decreasing with
  // slope -1; g-(t) mirrors it with its minimum at t_trough_minus.
  static Domain general(double t0, double t1, double g_plus0, double t_peak_plus,
                        double g_minus0, double t_trough_minus);

  Kind kind() const { return kind_; }
  // Side length for square/triangle, t-extent for general domains.
  double size() const { return size_; }

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }

  double g_plus(double t) const;
  double g_minus(double t) const;

  // Open-set membership, exact in light-cone arithmetic.
  bool contains(const LightCone& p) const;
  bool contains(const Point2& p) const { return contains(LightCone::of(p)); }
  // True when p lies on the closure but not in the interior (within tol).
  bool on_boundary(const Point2& p, double tol = 1e-9) const;

  double area() const;
  // Counter-clockwise polygon in (t, x).
  std::vector<Point2> polygon() const;

  // Boundary component lengths (Euclidean length element).
  double left_edge_length() const;
  double northwest_length() const;
  double southwest_length() const;
  // Time at which the increasing part of g+ ends (NW edge), and likewise
  // for the decreasing part of g- (SW edge).
  double t_peak_plus() const;
  double t_trough_minus() const;

  // Exit vertex of a velocity +1 particle with key v (or -1 with key u).
  LightCone exit_plus(double v) const;
  LightCone exit_minus(double u) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain() = default;
  void validate() const;

  Kind kind_ = Kind::general;
  double size_ = 0.0;
  double t0_ = 0.0, t1_ = 0.0;
  double u_min_ = 0.0, u_max_ = 0.0, v_min_ = 0.0, v_max_ = 0.0;
};

// Finite point configuration, kept sorted by (t, x) with no duplicates.
class PlanarConfig {
 public:
  PlanarConfig() = default;
  explicit PlanarConfig(std::vector<Point2> points);

  std::span<const Point2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool contains(const Point2& p) const;

  PlanarConfig with(const Point2& p) const;
  PlanarConfig with(std::span<const Point2> extra) const;

  friend bool operator==(const PlanarConfig&, const PlanarConfig&) = default;

 private:
  std::vector<Point2> points_;
};

// Points (t_i, 0) on the t-axis indexed backward: t_1 > t_2 > ... .
// Index 0 in the container is the rightmost (youngest) point.
class AxisPoints {
 public:
  AxisPoints() = default;
  // Accepts any order; sorts decreasing and rejects duplicates.
  explicit AxisPoints(std::vector<double> times);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  Point2 point(std::size_t i) const { return {times_.at(i), 0.0}; }
  std::vector<Point2> points() const;

  friend bool operator==(const AxisPoints&, const AxisPoints&) = default;

 private:
  std::vector<double> times_;
};

// Labels for independent random streams.
enum class Stream : std::uint64_t {
  interior = 1,
  boundary_left_up = 2,
  boundary_left_down = 3,
  boundary_northwest = 4,
  boundary_southwest = 5,
  axis = 6,
  axis_marks = 7,
  stick_seeds = 8,
  stick_lengths = 9,
  stick_bounces = 10,
};

// Deterministic generator keyed by (seed, stream, replica).
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, Stream stream, std::uint64_t replica = 0);

  RandomSource derive(Stream stream) const { return {seed_, stream, replica_}; }
  std::uint64_t seed() const { return seed_; }
  Stream stream() const { return stream_; }
  std::uint64_t replica() const { return replica_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t poisson(double mean);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  Stream stream_;
  std::uint64_t replica_;
  std::mt19937_64 engine_;
};

PlanarConfig sample_poisson_in_domain(const Domain& d, double intensity, RandomSource& rng);
// Poisson points on the t-axis over [a, b], sorted decreasing.
AxisPoints sample_poisson_on_axis(double lambda1, double a, double b, RandomSource& rng);

// Line-oriented text: one point per line, "t x" at 17 significant digits.
void write_config(std::ostream& os, const PlanarConfig& config);
PlanarConfig read_config(std::istream& is);
void write_axis(std::ostream& os, const AxisPoints& axis);
AxisPoints read_axis(std::istream& is);

std::string format_double(double value);

}  // namespace hammersley
