#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hammersley/influence.hpp"

namespace hammersley {

// Outcome of a randomized property check: `checks` counts individual
// assertions, which may exceed `trials` when one trial yields several.
struct CheckResult {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void fail(const std::string& what);
};

// t_hat read as +infinity when the attractor reaches the boundary.
double effective_t_hat(const Attractor& a);

// Every longest chain of `config` (point indices, increasing t), by
// exhaustive search. Intended for a dozen points or so.
std::vector<std::vector<std::size_t>> all_longest_chains(const PlanarConfig& config);

// Essential status of each axis point at its insertion in the backward
// construction: x_i against the scenery plus x_0..x_{i-1}.
std::vector<bool> essential_at_insertion(const PlanarConfig& config, const AxisPoints& xs, const Domain& d);

CheckResult check_abelian(std::uint64_t seed, std::size_t sceneries = 100, std::size_t max_points = 5);
CheckResult check_monotonicity(std::uint64_t seed, std::size_t trials = 1000);
CheckResult check_incremental(std::uint64_t seed, std::size_t trials = 1000);
CheckResult check_pin1(std::uint64_t seed, std::size_t trials = 500);
CheckResult check_vno(std::uint64_t seed, std::size_t trials = 500);
CheckResult check_crab(std::uint64_t seed, std::size_t trials = 500);
CheckResult check_topdog(std::uint64_t seed, std::size_t trials = 500);
CheckResult check_topdog1(std::uint64_t seed, std::size_t trials = 500);

}  // namespace hammersley
