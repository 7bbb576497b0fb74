#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hammersley/geometry.hpp"

namespace hammersley {

// Asymptotic behaviour of phi(x) = int_0^x P(S > u) du.
struct TailClass {
  enum Kind { power, log_like, bounded_phi, super_log };
  Kind kind = bounded_phi;
  // power: tail exponent a with P(S > x) ~ x^-a; log_like: L with phi ~ L log x.
  double parameter = 0.0;

  friend bool operator==(const TailClass&, const TailClass&) = default;
};

class DistributionDescriptor {
 public:
  enum Kind { pareto, positive_cauchy, exponential, deterministic, custom };

  // P(S > x) = (scale / x)^alpha for x >= scale.
  static DistributionDescriptor make_pareto(double alpha, double scale);
  // |Cauchy| with P(S > x) ~ c / x.
  static DistributionDescriptor make_positive_cauchy(double c);
  static DistributionDescriptor make_exponential(double mean);
  static DistributionDescriptor make_deterministic(double length);
  // `survival` is P(S > x); the tail class may be left undeclared.
  static DistributionDescriptor make_custom(std::function<double(RandomSource&)> sampler,
                                            std::function<double(double)> survival,
                                            std::optional<TailClass> tail = std::nullopt);

  Kind kind() const { return kind_; }
  const std::optional<TailClass>& tail_class() const { return tail_; }
  double sample(RandomSource& rng) const;
  double survival(double x) const;
  std::string describe() const;

 private:
  DistributionDescriptor() = default;
  Kind kind_ = deterministic;
  double a_ = 0.0;
  double b_ = 0.0;
  std::optional<TailClass> tail_;
  std::function<double(RandomSource&)> sampler_;
  std::function<double(double)> survival_;

  friend double phi(const DistributionDescriptor& d, double x);
};

double phi(const DistributionDescriptor& d, double x);

// Adaptive Simpson integration to an absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

enum class Percolation { percolates, does_not_percolate, undetermined };
enum class Stability { yes, no, undetermined };

struct CriterionResult {
  Percolation decision = Percolation::undetermined;
  // For undeclared tails: int_0^X exp(-lambda phi) at X = 10, 100, ... .
  std::vector<std::pair<double, double>> partial_integrals;
};

CriterionResult percolation_criterion(const DistributionDescriptor& d, double lambda);
Stability is_cluster_stable(const DistributionDescriptor& d);

const char* to_string(Percolation p);
const char* to_string(Stability s);

struct StickSample {
  std::vector<double> seeds;    // increasing, in [0, T]
  std::vector<double> lengths;  // first flights
};

// Seeds and lengths share one replica so that Model 1 and Model 2 couple.
StickSample sample_sticks(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                          std::uint64_t replica);

struct Model1Result {
  double max_covered = 0.0;  // right end of the first stick's cluster
  std::size_t n_clusters = 0;
  bool spans_window = false;
};

Model1Result model1(const StickSample& s, double T);
Model1Result simulate_model1(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                             std::uint64_t replica = 0);

enum class BonusMode { every_flight, first_flight_only };

struct Flight {
  double from = 0.0;
  double to = 0.0;
  int counter_after = 0;  // N after landing
};

struct ParticleRecord {
  double born = 0.0;
  double reached = 0.0;  // death point, or T when it got there
  bool survives = false;
  std::vector<Flight> flights;
};

struct Model2Result {
  bool tagged_survives = false;
  double max_covered = 0.0;  // right end of the tagged particle's cluster
  std::vector<ParticleRecord> particles;
};

Model2Result model2(const StickSample& s, const DistributionDescriptor& d, double T, std::uint64_t seed,
                    std::uint64_t replica, BonusMode mode = BonusMode::every_flight);
// The first particle alone; it draws its bounces first, so it matches
// particles[0] of the full run.
std::optional<ParticleRecord> tagged_particle(const StickSample& s, const DistributionDescriptor& d, double T,
                                              std::uint64_t seed, std::uint64_t replica,
                                              BonusMode mode = BonusMode::every_flight);
Model2Result simulate_model2(double lambda, const DistributionDescriptor& d, double T, std::uint64_t seed,
                             std::uint64_t replica = 0, BonusMode mode = BonusMode::every_flight);

// Union of closed intervals, merged and sorted.
std::vector<std::pair<double, double>> interval_union(std::vector<std::pair<double, double>> iv);
bool covers(const std::vector<std::pair<double, double>>& outer,
            const std::vector<std::pair<double, double>>& inner);

struct LambdaEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  // Per probed lambda: fitted log-log slope of the span probability in T and
  // its error; -inf when fewer than two windows were ever reached.
  std::vector<std::tuple<double, double, double>> probes;
  std::size_t fitted = 0;  // probes used in the extrapolation
};

// Below the critical point the span probability decays like T^-theta with
// theta roughly linear in lambda. Slopes inside the decay band are fitted by a
// weighted line and extrapolated to zero; shallower slopes are dominated by
// finite-window corrections, steeper ones by saturation.
struct LambdaSearch {
  std::vector<double> windows{1e2, 1e3, 1e4, 1e5};
  std::vector<double> grid{0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.25, 1.5, 2.0, 3.0};
  std::size_t replicas = 1000;
  double min_decay = 0.1;
  double max_decay = 0.6;
  double z = 2.0;  // significance for probes and width of the interval
  std::uint64_t seed = 1;
};

// Throws InvalidInput("no finite critical point") for cluster-stable or
// never-percolating descriptors.
LambdaEstimate estimate_lambda_c(const DistributionDescriptor& d, const LambdaSearch& search);

struct StickRow {
  double lambda = 0.0;
  double T = 0.0;
  std::size_t replica = 0;
  bool spans_window = false;
  double max_covered = 0.0;
  bool tagged_survives = false;
};

void write_stick_csv(std::ostream& os, const std::vector<StickRow>& rows);

}  // namespace hammersley
