#pragma once

// Event-driven annihilating particle system in light-cone coordinates.
// Regular particles annihilate on contact. Superior particles (born at added
// axis points) follow the three-rule table: +- types annihilate, equal
// types exchange velocities, and a regular particle hitting a superior one
// is absorbed while the superior takes its velocity.

#include <cstdint>
#include <vector>

#include "hammersley/geometry.hpp"
#include "hammersley/lines.hpp"

namespace hammersley::detail {

struct SweepSource {
  LightCone at;
  int velocity = 0;       // 0: pair (+1 and -1), otherwise a single particle
  int superior = -1;      // axis index for superior pairs, -1 for regular
};

enum class TraceEnd { alive, exited, annihilated, truncated };

// Trajectory of one superior particle. label = 2 * index + (type < 0).
struct SuperiorTrace {
  int index = -1;
  int type = 0;
  std::vector<LightCone> vertices;
  TraceEnd end = TraceEnd::alive;
  int partner = -1;  // label met in a +- annihilation
};

struct Encounter {
  LightCone at;
  int lower_label = -1;
  int upper_label = -1;
  bool annihilation = false;
};

struct SweepOutput {
  std::vector<Segment> regular;
  std::vector<SuperiorTrace> superiors;
  std::vector<Encounter> encounters;
};

inline int label_of(int index, int type) { return 2 * index + (type < 0 ? 1 : 0); }
inline int type_of_label(int label) { return (label % 2 == 0) ? +1 : -1; }
inline int index_of_label(int label) { return label / 2; }

// Live regular particles at a given time, in increasing position.
struct CarrierState {
  int velocity = 0;
  double key = 0.0;
  LightCone start;
};

struct Snapshot {
  double t = 0.0;
  std::vector<CarrierState> carriers;
};

struct SweepOptions {
  // Start from these particles instead of an empty system. Sources must
  // then all lie after snapshot->t.
  const Snapshot* initial = nullptr;
  // Stop at the first time one of the two particles of this axis index
  // dies or returns to x = 0; their traces then end at that time.
  int watch = -1;
  // Record regular segments (off when only superior traces are needed).
  bool record_regular = true;
};

// `superior_count` is the number of distinct axis indices used by sources.
SweepOutput run_sweep(const Domain& domain, std::vector<SweepSource> sources,
                      int superior_count, const SweepOptions& options = {});

// Regular-only sweep recording the live particles just before each of the
// increasing times `at`.
std::vector<Snapshot> regular_snapshots(const Domain& domain, std::vector<SweepSource> sources,
                                        std::span<const double> at);

std::vector<SweepSource> sources_from(const PlanarConfig& config,
                                      std::span<const BirthEvent> births);

}  // namespace hammersley::detail
