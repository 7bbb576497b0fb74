#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hammersley/influence.hpp"

namespace hammersley {

struct MeanError {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean
  std::size_t count = 0;
};

// Mean and standard error, skipping NaN entries.
MeanError summarize(const std::vector<double>& xs);

struct PinningConfig {
  double n = 100.0;
  // Axis intensities sharing sceneries and axis points (superposition).
  std::vector<double> lambda1{1.0};
  double lambda2 = 1.0;
  std::size_t replicas = 10;
  std::uint64_t seed = 1;
  // Chain from (0, 0) to (n, 0) instead of from the apex to the base.
  bool point_to_point = false;
  bool spanning = true;
};

struct PinningRow {
  double n = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::size_t replica = 0;
  std::size_t chain = 0;
  double essential_frac = 0.0;  // NaN without axis points
  double visit_density = 0.0;
  int spanning = 0;             // -1 when not computed
  double max_transversal = 0.0;
};

struct PinningStats {
  double n = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::size_t replicas = 0;
  MeanError chain_per_n;       // chain / (n / sqrt 2), limit 2 without the axis
  MeanError essential_fraction;  // over replicas with axis points
  MeanError visit_density;
  MeanError spanning_rate;     // count 0 when not computed
};

struct PinningResult {
  std::vector<PinningRow> rows;     // replica-major, lambda1 minor
  std::vector<PinningStats> stats;  // one per lambda1
};

// Axis points for intensity lambda1, nested across intensities: unit layers
// of Poisson points are drawn in a fixed order and kept by mark.
AxisPoints coupled_axis_points(double n, double lambda1, std::uint64_t seed, std::uint64_t replica);

// Collected axis points per unit length.
double geodesic_visit_density(const Geodesic& g, double n);

// Largest |x| over the points of a chain.
double max_transversal(const PlanarConfig& config, const std::vector<std::size_t>& chain);

PinningResult run_pinning_experiment(const PinningConfig& config);
PinningStats run_pinning_experiment(double n, double lambda1, double lambda2, std::size_t replicas,
                                    std::uint64_t seed);

void write_pinning_csv(std::ostream& os, const std::vector<PinningRow>& rows);

// Longest chain in Square(n) per unit n over replicas.
MeanError ulam_chain_per_n(double n, double lambda2, std::size_t replicas, std::uint64_t seed);

struct TransversalFit {
  std::vector<double> n;
  std::vector<MeanError> max_abs_x;
  double exponent = 0.0;  // least-squares slope of log mean vs log n
};

// Transversal size of the triangle geodesic without axis points.
TransversalFit fit_transversal_exponent(const std::vector<double>& ns, std::size_t replicas, std::uint64_t seed);

}  // namespace hammersley
