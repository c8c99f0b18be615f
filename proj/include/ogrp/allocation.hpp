#pragma once

#include <cstdint>
#include <string>

#include "ogrp/estimator.hpp"

namespace ogrp {

/// Closed-form allocation M_j proportional to the group L1 norms sum |c_i|.
ShotAllocation alloc_l1(const CommutationOracle& oracle, const Grouping& g, double total);

/// Closed-form allocation M_j proportional to sqrt(S_j), S_j = sum c_i^2.
/// Minimizes sum_j S_j / M_j over the scaled simplex.
ShotAllocation alloc_l2(const CommutationOracle& oracle, const Grouping& g, double total);

struct AllocOptimizeOptions {
  double relative_tolerance = 1e-8;
  double kkt_tolerance = 1e-7;
  std::size_t max_iterations = 200000;
  std::vector<double> initial;  // starting budgets; uniform when empty
};

struct AllocOptimizeResult {
  ShotAllocation allocation;
  double variance = 0;
  double kkt_residual = 0;
  std::size_t iterations = 0;
};

/// Minimizes the shot-weighted estimator variance over continuous budgets
/// summing to `total`, by multiplicative mirror-descent updates on the scaled
/// simplex (positivity comes free). Throws NumericalError when the KKT
/// residual is still above tolerance at the iteration cap.
AllocOptimizeResult alloc_optimize(const CommutationOracle& oracle, const Grouping& g,
                                   const MomentsProvider& moments, double total,
                                   const AllocOptimizeOptions& options = {});

/// Closed-form optimum for a disjoint grouping under zero covariance:
/// (sum_j sqrt(S_j))^2 / total.
double min_variance_disjoint(const CommutationOracle& oracle, const Grouping& g, double total);

/// Integer apportionment: floor with a floor of one shot per group, then
/// distribute the remainder by largest fractional part (ties to the lower
/// group index). Requires total >= group count.
ShotAllocation round_allocation(const ShotAllocation& continuous, std::uint64_t total);

}  // namespace ogrp
