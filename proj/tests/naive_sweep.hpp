#pragma once

// Quadratic-time reference simulator for regular particles: at each step it
// re-sorts all live particles and scans every adjacent pair. Shares nothing
// with the library's event queue.

#include <algorithm>
#include <limits>
#include <vector>

#include "hammersley/lines.hpp"

namespace naive {

struct Result {
  std::vector<hammersley::Segment> segments;
  std::size_t births = 0;
  std::size_t collisions = 0;
};

inline Result simulate(const hammersley::PlanarConfig& config,
                       const std::vector<hammersley::BirthEvent>& boundary,
                       const hammersley::Domain& d) {
  using hammersley::LightCone;
  struct P {
    int vel;
    double key;
    LightCone start;
    bool alive;
  };
  struct B {
    LightCone at;
    int vel;
  };
  std::vector<B> births;
  for (const auto& p : config.points()) births.push_back({LightCone::of(p), 0});
  for (const auto& b : boundary) births.push_back({b.key_point, b.velocity});
  std::sort(births.begin(), births.end(), [](const B& a, const B& b) {
    return std::pair(a.at.t(), a.at.x()) < std::pair(b.at.t(), b.at.x());
  });
  Result r;
  r.births = births.size();
  std::vector<P> ps;
  std::size_t next = 0;
  const double inf = std::numeric_limits<double>::infinity();
  double now = -inf;
  for (;;) {
    // Earliest exit or collision among live particles.
    double best_t = inf;
    int kind = 0, ia = -1, ib = -1;
    LightCone at;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!ps[i].alive) continue;
      const auto e = ps[i].vel > 0 ? d.exit_plus(ps[i].key) : d.exit_minus(ps[i].key);
      if (e.t() < best_t) {
        best_t = e.t();
        kind = 1;
        ia = static_cast<int>(i);
        at = e;
      }
    }
    // The earliest meeting of any converging (+ below, - above) pair is
    // always between neighbours, so a full scan suffices.
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!ps[i].alive || ps[i].vel < 0) continue;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (!ps[j].alive || ps[j].vel > 0) continue;
        const LightCone c{ps[j].key, ps[i].key};
        if (c.t() <= now) continue;
        if (c.t() < best_t || (c.t() == best_t && kind == 2 && c.x() < at.x())) {
          best_t = c.t();
          kind = 2;
          ia = static_cast<int>(i);
          ib = static_cast<int>(j);
          at = c;
        }
      }
    }
    const bool birth_first = next < births.size() && births[next].at.t() <= best_t;
    if (!birth_first && kind == 0) break;
    if (birth_first) {
      const auto& b = births[next++];
      now = b.at.t();
      if (b.vel >= 0) ps.push_back({+1, b.at.v, b.at, true});
      if (b.vel <= 0) ps.push_back({-1, b.at.u, b.at, true});
      continue;
    }
    auto close = [&](int i) {
      ps[i].alive = false;
      if (!(ps[i].start == at)) r.segments.push_back({ps[i].start, at, ps[i].vel, 0});
    };
    now = best_t;
    close(ia);
    if (kind == 2) {
      close(ib);
      ++r.collisions;
    }
  }
  return r;
}

}  // namespace naive
