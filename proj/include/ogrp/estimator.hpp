#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ogrp/grouping.hpp"
#include "ogrp/moments.hpp"

namespace ogrp {

/// Raised when an iterative numerical routine fails to converge. Carries the
/// last iterate and residual for diagnosis; the CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<double> last_iterate, double residual)
      : std::runtime_error(what), last_iterate(std::move(last_iterate)), residual(residual) {}
  std::vector<double> last_iterate;
  double residual;
};

/// Per-group shot budgets. Continuous budgets are used by the analytic
/// variance machinery; the sampling path requires the integral form.
struct ShotAllocation {
  std::vector<double> shots;  // all > 0
  bool integral = false;

  double total() const;
  void validate() const;
  std::vector<std::uint64_t> integer_counts() const;  // throws unless integral

  static ShotAllocation uniform(std::size_t groups, double total);
};

/// Estimator weights w_{i,j}, stored parallel to membership_map: w[i][a] is
/// the weight of term i in its a-th containing group. Rows sum to one
/// (unbiasedness).
struct EstimatorWeights {
  std::vector<std::vector<double>> w;

  void validate_unbiased(double tol = 1e-9) const;
};

/// Shot-weighted averaging: w_{i,j} = M_j / sum of M_k over groups containing
/// term i. For a disjoint grouping all weights are 1.
EstimatorWeights heuristic_weights(const Grouping& g, std::size_t term_count,
                                   const ShotAllocation& alloc);

struct VarianceBreakdown {
  double total = 0;
  double diagonal = 0;    // sum_i c_i^2 sum_j w_ij^2 var_i / M_j
  double covariance = 0;  // pair terms over shared groups
};

/// Analytic variance of the weighted estimator under the given moments.
/// Pairs appearing together in no group contribute nothing: their shot
/// batches are independent.
VarianceBreakdown estimator_variance(const CommutationOracle& oracle, const Grouping& g,
                                     const EstimatorWeights& weights, const ShotAllocation& alloc,
                                     const MomentsProvider& moments);

/// Shot-weighted variance directly from the allocation (heuristic weights
/// implied). Shared helper for allocation optimization and one-step deltas.
VarianceBreakdown shot_weighted_variance(const CommutationOracle& oracle, const Grouping& g,
                                         const ShotAllocation& alloc,
                                         const MomentsProvider& moments);

/// Per-group empirical means of sign-corrected parities, as produced by the
/// simulator's sample_group.
struct GroupEstimates {
  std::size_t group_index = 0;
  std::vector<std::size_t> term_indices;
  std::vector<double> means;  // parallel to term_indices

  double mean_for(std::size_t term) const;  // throws if absent
};

/// Weighted combination of per-group empirical means into an energy estimate.
double empirical_energy(const CommutationOracle& oracle, const Grouping& g,
                        const EstimatorWeights& weights,
                        const std::vector<GroupEstimates>& samples);

struct OptimalWeightsOptions {
  double relative_tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  // Run the iterative solver even when the zero-covariance closed form
  // applies, optionally from a caller-supplied feasible starting point.
  bool force_numerical = false;
  std::vector<std::vector<double>> initial;
};

/// Minimum-variance unbiased weights. With all covariances zero the
/// shot-weighted closed form is returned as-is; otherwise a projected
/// first-order method minimizes the variance over the affine unbiasedness
/// constraints. Throws NumericalError past the iteration cap.
EstimatorWeights optimal_weights(const CommutationOracle& oracle, const Grouping& g,
                                 const ShotAllocation& alloc, const MomentsProvider& moments,
                                 const OptimalWeightsOptions& options = {});

/// Worst-case bound sum_j (sum_{i in G_j} |c_i|)^2 / M_j for disjoint groupings.
double worst_case_bound(const CommutationOracle& oracle, const Grouping& g,
                        const ShotAllocation& alloc);

/// Total measurements for accuracy epsilon: ((1/eps) sum_i sqrt(Var(O_i)))^2.
double measurement_complexity(const std::vector<double>& group_variances, double epsilon);

}  // namespace ogrp
