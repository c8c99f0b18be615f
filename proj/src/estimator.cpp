#include "ogrp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ogrp {

double ShotAllocation::total() const {
  return std::accumulate(shots.begin(), shots.end(), 0.0);
}

void ShotAllocation::validate() const {
  if (shots.empty()) throw std::invalid_argument("ShotAllocation: no groups");
  for (const double m : shots)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("ShotAllocation: budgets must be positive and finite");
  if (integral)
    for (const double m : shots)
      if (m != std::floor(m)) throw std::invalid_argument("ShotAllocation: marked integral but not integer-valued");
}

std::vector<std::uint64_t> ShotAllocation::integer_counts() const {
  if (!integral) throw std::invalid_argument("ShotAllocation: integer counts requested from continuous allocation");
  validate();
  std::vector<std::uint64_t> out;
  out.reserve(shots.size());
  for (const double m : shots) out.push_back(static_cast<std::uint64_t>(m));
  return out;
}

ShotAllocation ShotAllocation::uniform(std::size_t groups, double total) {
  if (groups == 0) throw std::invalid_argument("ShotAllocation: no groups");
  if (!(total > 0)) throw std::invalid_argument("ShotAllocation: total must be positive");
  return {std::vector<double>(groups, total / static_cast<double>(groups)), false};
}

void EstimatorWeights::validate_unbiased(double tol) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].empty()) throw std::invalid_argument("EstimatorWeights: term " + std::to_string(i) +
                                                  " has no containing group");
    const double s = std::accumulate(w[i].begin(), w[i].end(), 0.0);
    if (std::abs(s - 1.0) > tol)
      throw std::invalid_argument("EstimatorWeights: weights of term " + std::to_string(i) +
                                  " sum to " + std::to_string(s));
  }
}

EstimatorWeights heuristic_weights(const Grouping& g, std::size_t term_count,
                                   const ShotAllocation& alloc) {
  alloc.validate();
  if (alloc.shots.size() != g.group_count())
    throw std::invalid_argument("heuristic_weights: allocation has wrong group count");
  const auto gamma = membership_map(g, term_count);
  EstimatorWeights out;
  out.w.resize(term_count);
  for (std::size_t i = 0; i < term_count; ++i) {
    double denom = 0;
    for (const std::size_t j : gamma[i]) denom += alloc.shots[j];
    out.w[i].reserve(gamma[i].size());
    for (const std::size_t j : gamma[i]) out.w[i].push_back(alloc.shots[j] / denom);
  }
  return out;
}

namespace {

// Pairs of terms sharing at least one group, with the shared group lists.
// Gamma rows are sorted, so intersections are linear merges.
std::vector<std::size_t> shared_groups(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> co_measured_pairs(const Grouping& g) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& group : g.groups)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        pairs.push_back({std::min(group[a], group[b]), std::max(group[a], group[b])});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

// Index of group j within the sorted gamma row, for weight lookup.
std::size_t slot_of(const std::vector<std::size_t>& gamma_row, std::size_t j) {
  const auto it = std::lower_bound(gamma_row.begin(), gamma_row.end(), j);
  return static_cast<std::size_t>(it - gamma_row.begin());
}

}  // namespace

VarianceBreakdown estimator_variance(const CommutationOracle& oracle, const Grouping& g,
                                     const EstimatorWeights& weights, const ShotAllocation& alloc,
                                     const MomentsProvider& moments) {
  alloc.validate();
  weights.validate_unbiased();
  const std::size_t n = oracle.term_count();
  if (weights.w.size() != n) throw std::invalid_argument("estimator_variance: weights size mismatch");
  if (alloc.shots.size() != g.group_count())
    throw std::invalid_argument("estimator_variance: allocation has wrong group count");
  const auto gamma = membership_map(g, n);

  VarianceBreakdown out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = oracle.coefficient(i);
    double acc = 0;
    for (std::size_t a = 0; a < gamma[i].size(); ++a) {
      const double w = weights.w[i][a];
      acc += w * w / alloc.shots[gamma[i][a]];
    }
    out.diagonal += c * c * moments.variance(i) * acc;
  }
  for (const auto& [i, k] : co_measured_pairs(g)) {
    const auto shared = shared_groups(gamma[i], gamma[k]);
    double acc = 0;
    for (const std::size_t j : shared)
      acc += weights.w[i][slot_of(gamma[i], j)] * weights.w[k][slot_of(gamma[k], j)] /
             alloc.shots[j];
    if (acc != 0.0)
      out.covariance +=
          2.0 * oracle.coefficient(i) * oracle.coefficient(k) * moments.covariance(i, k) * acc;
  }
  out.total = out.diagonal + out.covariance;
  return out;
}

VarianceBreakdown shot_weighted_variance(const CommutationOracle& oracle, const Grouping& g,
                                         const ShotAllocation& alloc,
                                         const MomentsProvider& moments) {
  alloc.validate();
  const std::size_t n = oracle.term_count();
  const auto gamma = membership_map(g, n);

  std::vector<double> alpha(n, 0);  // effective shots per term
  for (std::size_t i = 0; i < n; ++i)
    for (const std::size_t j : gamma[i]) alpha[i] += alloc.shots[j];

  VarianceBreakdown out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = oracle.coefficient(i);
    out.diagonal += c * c * moments.variance(i) / alpha[i];
  }
  for (const auto& [i, k] : co_measured_pairs(g)) {
    double alpha_ik = 0;
    for (const std::size_t j : shared_groups(gamma[i], gamma[k])) alpha_ik += alloc.shots[j];
    out.covariance += 2.0 * oracle.coefficient(i) * oracle.coefficient(k) *
                      moments.covariance(i, k) * alpha_ik / (alpha[i] * alpha[k]);
  }
  out.total = out.diagonal + out.covariance;
  return out;
}

double GroupEstimates::mean_for(std::size_t term) const {
  for (std::size_t a = 0; a < term_indices.size(); ++a)
    if (term_indices[a] == term) return means[a];
  throw std::invalid_argument("GroupEstimates: no mean recorded for term " + std::to_string(term));
}

double empirical_energy(const CommutationOracle& oracle, const Grouping& g,
                        const EstimatorWeights& weights,
                        const std::vector<GroupEstimates>& samples) {
  weights.validate_unbiased();
  const std::size_t n = oracle.term_count();
  const auto gamma = membership_map(g, n);

  std::vector<const GroupEstimates*> by_group(g.group_count(), nullptr);
  for (const auto& s : samples) {
    if (s.group_index >= g.group_count())
      throw std::invalid_argument("empirical_energy: sample record for unknown group");
    by_group[s.group_index] = &s;
  }

  double energy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double est = 0;
    for (std::size_t a = 0; a < gamma[i].size(); ++a) {
      const double w = weights.w[i][a];
      if (w == 0.0) continue;
      const auto* rec = by_group[gamma[i][a]];
      if (rec == nullptr)
        throw std::invalid_argument("empirical_energy: group " + std::to_string(gamma[i][a]) +
                                    " carries weight but has no samples");
      est += w * rec->mean_for(i);
    }
    energy += oracle.coefficient(i) * est;
  }
  return energy;
}

namespace {

// Quadratic objective for weight optimization, with gradient and
// Hessian-vector products evaluated from the same pair structure.
struct WeightProblem {
  const CommutationOracle& oracle;
  const std::vector<std::vector<std::size_t>>& gamma;
  const ShotAllocation& alloc;
  const MomentsProvider& moments;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  double objective(const std::vector<std::vector<double>>& w) const {
    double total = 0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const double c = oracle.coefficient(i);
      double acc = 0;
      for (std::size_t a = 0; a < gamma[i].size(); ++a)
        acc += w[i][a] * w[i][a] / alloc.shots[gamma[i][a]];
      total += c * c * moments.variance(i) * acc;
    }
    for (const auto& [i, k] : pairs) {
      const auto shared = shared_groups(gamma[i], gamma[k]);
      double acc = 0;
      for (const std::size_t j : shared)
        acc += w[i][slot_of(gamma[i], j)] * w[k][slot_of(gamma[k], j)] / alloc.shots[j];
      total += 2.0 * oracle.coefficient(i) * oracle.coefficient(k) * moments.covariance(i, k) * acc;
    }
    return total;
  }

};

}  // namespace

EstimatorWeights optimal_weights(const CommutationOracle& oracle, const Grouping& g,
                                 const ShotAllocation& alloc, const MomentsProvider& moments,
                                 const OptimalWeightsOptions& options) {
  alloc.validate();
  const std::size_t n = oracle.term_count();
  const auto gamma = membership_map(g, n);
  auto pairs = co_measured_pairs(g);

  // With no covariance between co-measured terms the shot-weighted rule is
  // the exact minimizer, independent of the variances.
  bool any_cov = false;
  for (const auto& [i, k] : pairs) {
    if (moments.covariance(i, k) != 0.0) {
      any_cov = true;
      break;
    }
  }
  EstimatorWeights w = heuristic_weights(g, n, alloc);
  if (!any_cov && !options.force_numerical) return w;

  if (!options.initial.empty()) {
    if (options.initial.size() != n)
      throw std::invalid_argument("optimal_weights: initial weights have wrong term count");
    for (std::size_t i = 0; i < n; ++i)
      if (options.initial[i].size() != gamma[i].size())
        throw std::invalid_argument("optimal_weights: initial weights misaligned with memberships");
    w.w = options.initial;
    w.validate_unbiased();
  }

  WeightProblem problem{oracle, gamma, alloc, moments, std::move(pairs)};
  double f = problem.objective(w.w);

  // Block coordinate descent over terms. Each term's subproblem is a
  // diagonal quadratic with one equality constraint, so it has the closed
  // form w_ia = (lambda - b_a) / D_a; cross-covariance terms with the other
  // (momentarily frozen) weights enter through the linear part b.
  for (std::size_t sweep = 0; sweep < options.max_iterations; ++sweep) {
    double max_change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (gamma[i].size() < 2) continue;
      const double c = oracle.coefficient(i);
      const double quad = 2.0 * c * c * moments.variance(i);
      if (quad == 0.0) continue;  // weights immaterial for a variance-free term

      std::vector<double> b(gamma[i].size(), 0.0);
      for (const auto& [pi, pk] : problem.pairs) {
        if (pi != i && pk != i) continue;
        const std::size_t other = pi == i ? pk : pi;
        const double factor =
            2.0 * c * oracle.coefficient(other) * moments.covariance(i, other);
        for (const std::size_t j : shared_groups(gamma[i], gamma[other])) {
          const std::size_t ai = slot_of(gamma[i], j);
          const std::size_t ao = slot_of(gamma[other], j);
          b[ai] += factor * w.w[other][ao] / alloc.shots[j];
        }
      }

      double inv_sum = 0, weighted = 0;
      for (std::size_t a = 0; a < gamma[i].size(); ++a) {
        const double d = quad / alloc.shots[gamma[i][a]];
        inv_sum += 1.0 / d;
        weighted += b[a] / d;
      }
      const double lambda = (1.0 + weighted) / inv_sum;
      for (std::size_t a = 0; a < gamma[i].size(); ++a) {
        const double d = quad / alloc.shots[gamma[i][a]];
        const double updated = (lambda - b[a]) / d;
        max_change = std::max(max_change, std::abs(updated - w.w[i][a]));
        w.w[i][a] = updated;
      }
    }

    const double f_new = problem.objective(w.w);
    if (f_new > f + 1e-9 * std::max(1.0, std::abs(f))) {
      std::vector<double> flat;
      for (const auto& row : w.w) flat.insert(flat.end(), row.begin(), row.end());
      throw NumericalError("optimal_weights: objective increased (non-convex moments?)",
                           std::move(flat), f_new - f);
    }
    const double rel = std::abs(f - f_new) / std::max({std::abs(f), std::abs(f_new), 1e-300});
    f = f_new;
    // The weight-space change is the primary stop; the relative objective
    // tolerance only matters for slowly creeping covariance-coupled sweeps.
    if (max_change < 1e-12 || (sweep > 2 && rel < options.relative_tolerance)) return w;
  }
  std::vector<double> flat;
  for (const auto& row : w.w) flat.insert(flat.end(), row.begin(), row.end());
  throw NumericalError("optimal_weights: iteration cap reached", std::move(flat), f);
}

double worst_case_bound(const CommutationOracle& oracle, const Grouping& g,
                        const ShotAllocation& alloc) {
  if (!g.disjoint) throw std::invalid_argument("worst_case_bound: grouping must be disjoint");
  alloc.validate();
  if (alloc.shots.size() != g.group_count())
    throw std::invalid_argument("worst_case_bound: allocation has wrong group count");
  const auto norms = group_norms(oracle, g);
  double bound = 0;
  for (std::size_t j = 0; j < g.group_count(); ++j)
    bound += norms.l1[j] * norms.l1[j] / alloc.shots[j];
  return bound;
}

double measurement_complexity(const std::vector<double>& group_variances, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("measurement_complexity: epsilon must be > 0");
  double s = 0;
  for (const double v : group_variances) {
    if (v < 0) throw std::invalid_argument("measurement_complexity: negative variance");
    s += std::sqrt(v);
  }
  s /= epsilon;
  return s * s;
}

}  // namespace ogrp
