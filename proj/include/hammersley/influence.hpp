#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "hammersley/geometry.hpp"
#include "hammersley/lines.hpp"

namespace hammersley {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

enum class PathEnd { exited, annihilated, truncated_at_return };

// One maximal straight run of an influence path, labelled (j, velocity):
// the path of a + particle reads (1,+), (1,-), (2,+), ... and that of a -
// particle (1,-), (1,+), (2,-), ...
struct PathPiece {
  int j = 1;
  int velocity = 0;
  LightCone start;  // lower t
  LightCone end;
};

// Space-time trajectory of one superior particle.
struct InfluencePath {
  Point2 origin;
  int sign = 0;            // type, equal to the initial velocity
  std::size_t index = 0;   // axis index, 0 = youngest (rightmost)
  std::vector<LightCone> vertices;  // corners in increasing t
  PathEnd end = PathEnd::exited;
  // Label of the superior particle met in a +- annihilation: index and type.
  std::optional<std::pair<std::size_t, int>> partner;

  LightCone end_point() const { return vertices.back(); }
  double end_time() const { return vertices.back().t(); }
  std::vector<PathPiece> pieces() const;
  // Position at time t, for origin.t <= t <= end_time().
  double x_at(double t) const;
  // First time after birth at which the path reaches x = 0, if any.
  std::optional<double> first_return() const;
  // Prefix of the path up to time t (inclusive), as vertices.
  std::vector<LightCone> truncated(double t) const;
};

struct PathPair {
  InfluencePath plus;
  InfluencePath minus;
};

enum class PairClass { flat, embedded, parallel, crossed };

struct AnnihilationRecord {
  double tau = kNever;       // self-annihilation time of the first point alone
  double pair_tau = kNever;  // last death among the four superior particles
  std::optional<PairClass> pair_class;
};

struct SinglePointUpdate {
  LineSet lines;
  PathPair paths;
  AnnihilationRecord record;
};

// Adds one point to `config` (whose lines are `ls`) with the erase/add rule.
// The point may be anywhere strictly inside the domain; for pinning it sits
// on the t-axis.
SinglePointUpdate augment_with_point(const LineSet& ls, const PlanarConfig& config, const Point2& x);

struct AxisUpdate {
  LineSet lines;
  AxisPoints axis;
  std::vector<PathPair> paths;  // by axis index
  // Same-type exchanges seen by the superior particles.
  std::size_t exchanges = 0;
};

// Adds every axis point at once with the three-rule interaction table.
AxisUpdate augment_with_axis_points(const LineSet& ls, const PlanarConfig& config, const AxisPoints& xs);

// True iff adding x raises the line count by one (full rebuilds).
bool is_essential(const PlanarConfig& config, const Point2& x, const Domain& d);

// Time at which the two paths of one origin meet, kNever if they exit.
double self_annihilation_time(const PathPair& paths);

// x is the older point (smaller t). Both must be distinct axis points.
AnnihilationRecord classify_pair_annihilation(const PlanarConfig& config, const Point2& x,
                                              const Point2& y, const Domain& d);

// Annihilation time of a family of axis points: the last death among all
// their superior particles, kNever if any exits.
double family_annihilation_time(const PlanarConfig& config, const AxisPoints& xs, const Domain& d);

struct Attractor {
  std::size_t index = 0;
  Point2 origin;
  double t_hat = 0.0;
  Point2 e_plus;
  Point2 e_minus;
  std::optional<Point2> f_plus;
  std::optional<Point2> f_minus;
  std::optional<double> r_plus;
  std::optional<double> r_minus;
  // t_hat is attained by a path leaving the domain.
  bool reaches_boundary = false;
  bool degenerate = false;
  std::vector<Point2> upper;   // truncated + path, from origin to e_plus
  std::vector<Point2> lower;   // truncated - path, from origin to e_minus
  std::vector<Point2> region;  // Jordan curve: lower, vertical side, upper reversed

  // Open-region membership.
  bool contains(const Point2& p) const;
};

Attractor build_attractor(const PathPair& paths, const Domain& d);
// Attractors read off the joint system with every axis point present.
std::vector<Attractor> build_attractors(const AxisUpdate& update);

// Attractor of each point as it is added in the backward construction: A_i
// only sees the younger points x_0..x_{i-1}. Paths stop at t_hat. Built on
// demand and cached; the regular system is swept once up front.
class AttractorBuilder {
 public:
  AttractorBuilder(const LineSet& ls, const PlanarConfig& config, const AxisPoints& xs);
  ~AttractorBuilder();
  AttractorBuilder(const AttractorBuilder&) = delete;
  AttractorBuilder& operator=(const AttractorBuilder&) = delete;

  std::size_t size() const { return xs_.size(); }
  const AxisPoints& axis() const { return xs_; }
  const Attractor& get(std::size_t i);
  std::size_t built() const;

 private:
  struct State;
  AxisPoints xs_;
  std::unique_ptr<State> state_;
};

std::vector<Attractor> sequential_attractors(const LineSet& ls, const PlanarConfig& config,
                                            const AxisPoints& xs);

// Connectivity between attractors: i > j are connected if a chain
// j = i0 < i1 < ... < ik = i has x_{i_r} inside A_{i_{r+1}}.
class ConnectivityReport {
 public:
  ConnectivityReport(const std::vector<Attractor>& attractors, const AxisPoints& xs);

  std::size_t size() const { return n_; }
  // x_a lies in A_b (a < b).
  bool direct(std::size_t a, std::size_t b) const;
  bool connected(std::size_t i, std::size_t j) const;
  // Connecting subsequence j = i0 < ... < ik = i, empty if not connected.
  std::vector<std::size_t> witness(std::size_t i, std::size_t j) const;
  std::vector<std::pair<std::size_t, std::size_t>> connected_pairs() const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::vector<std::size_t>> preds_;  // preds_[b]: a < b with x_a in A_b
  std::vector<std::uint64_t> reach_;            // reach_[b * words_ + ...]: j connected to b
};

ConnectivityReport attractors_connected(const std::vector<Attractor>& attractors, const AxisPoints& xs);

// A connected chain starting at the oldest axis point whose intervals
// [t_i, t_hat_i] cover the rest of the domain, i.e. some attractor on it
// reaches the boundary. False without axis points.
bool spanning_chain_exists(const ConnectivityReport& report, const std::vector<Attractor>& attractors);
// Same answer, building only the attractors a search from the oldest point
// visits and stopping at the first one that reaches the boundary.
bool spanning_chain_exists(AttractorBuilder& builder);

void write_path(std::ostream& os, const InfluencePath& p);
void write_attractor(std::ostream& os, const Attractor& a);

}  // namespace hammersley
