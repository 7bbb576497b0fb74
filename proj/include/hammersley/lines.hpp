#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "hammersley/geometry.hpp"

namespace hammersley {

enum class BirthOrigin {
  interior,     // spawns a (+1, -1) pair
  left_up,      // left edge, velocity +1
  left_down,    // left edge, velocity -1
  northwest,    // increasing part of g+, velocity -1
  southwest,    // decreasing part of g-, velocity +1
};

struct BirthEvent {
  Point2 location;
  int velocity = 0;  // 0 for interior pairs
  BirthOrigin origin = BirthOrigin::interior;

  // Boundary births on slanted edges are stored with their light-cone key
  // exactly on the edge line.
  LightCone key_point;

  friend bool operator==(const BirthEvent&, const BirthEvent&) = default;
};

enum class BoundaryMode { none, stationary };

// The four boundary Poisson processes: sqrt(lambda2/2) per unit length for
// each of the two left-edge processes, sqrt(lambda2) on the NW and SW edges.
std::vector<BirthEvent> sample_boundary_births(const Domain& d, double lambda2,
                                               RandomSource& rng,
                                               BoundaryMode mode = BoundaryMode::stationary);

struct Segment {
  LightCone start;  // lower t
  LightCone end;
  int velocity = 0;
  std::size_t line_id = 0;
};

enum class VertexKind { interior_birth, boundary_birth, collision, exit };

// Graph t = f(x) of a continuous piecewise-linear function with slopes +-1.
// Vertices are sorted by increasing x and only corners are kept.
struct BrokenLine {
  std::vector<LightCone> vertices;

  double x_min() const { return vertices.front().x(); }
  double x_max() const { return vertices.back().x(); }
  // f(x), continued linearly beyond the ends with the end slopes.
  double height_at(double x) const;
  std::vector<Segment> segments(std::size_t line_id = 0) const;

  friend bool operator==(const BrokenLine&, const BrokenLine&) = default;
};

class LineSet {
 public:
  LineSet(Domain domain, std::vector<BrokenLine> lines, std::vector<BirthEvent> boundary_births);

  const Domain& domain() const { return domain_; }
  std::span<const BrokenLine> lines() const { return lines_; }
  std::span<const LightCone> collisions() const { return collisions_; }
  std::span<const BirthEvent> boundary_births() const { return births_; }
  std::vector<Segment> segments() const;

  VertexKind vertex_kind(std::size_t line, std::size_t vertex) const;

  friend bool operator==(const LineSet&, const LineSet&) = default;

 private:
  Domain domain_;
  std::vector<BrokenLine> lines_;
  std::vector<LightCone> collisions_;
  std::vector<BirthEvent> births_;
  std::vector<LightCone> birth_keys_;  // sorted, for vertex classification
};

// Assembles a canonical LineSet from raw trajectory pieces: collinear
// touching pieces are merged, connectivity is found by union-find over exact
// light-cone endpoint keys, and lines are sorted by their first vertex.
LineSet assemble_lines(const Domain& d, std::span<const Segment> pieces,
                       std::vector<BirthEvent> boundary_births);

LineSet build_broken_lines(const PlanarConfig& config, std::span<const BirthEvent> births,
                           const Domain& d);
inline LineSet build_broken_lines(const PlanarConfig& config, const Domain& d) {
  return build_broken_lines(config, {}, d);
}

inline std::size_t count_lines(const LineSet& ls) { return ls.lines().size(); }

// Number of lines having a and b strictly on opposite sides.
std::size_t separating_line_count(const LineSet& ls, const Point2& a, const Point2& b);

struct Geodesic {
  // Collected birth vertices, decreasing t. Light-cone form keeps them
  // bit-identical to LightCone::of(config point).
  std::vector<LightCone> collected;
  std::vector<Point2> path;       // polyline from the start to the left end
};

// Backward greedy construction: move left until a line is met, follow it
// down to its birth point, collect, repeat.
Geodesic extract_geodesic(const LineSet& ls, const Point2& start);

// Longest chain in the light-cone order (u and v both increasing), by
// patience sorting.
std::size_t lis_oracle(const PlanarConfig& config);
std::size_t lis_oracle(std::span<const Point2> points);
// Indices (into the sorted config) of one longest chain, increasing t.
std::vector<std::size_t> longest_chain(const PlanarConfig& config);
// Exhaustive O(k^2) DP over the dominance order. Rejects more than 20 points.
std::size_t brute_force_chain(const PlanarConfig& config);

// Number of connected components of the lines after clipping to `window`.
std::size_t restricted_line_count(const LineSet& ls, const Domain& window);

void write_lineset(std::ostream& os, const LineSet& ls);

}  // namespace hammersley
