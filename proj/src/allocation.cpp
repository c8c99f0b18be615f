#include "ogrp/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ogrp {

namespace {

ShotAllocation proportional_allocation(const std::vector<double>& weights, double total,
                                       const char* who) {
  if (!(total > 0)) throw std::invalid_argument(std::string(who) + ": total must be positive");
  double sum = 0;
  for (const double w : weights) {
    if (!(w > 0)) throw std::invalid_argument(std::string(who) + ": empty group");
    sum += w;
  }
  ShotAllocation out;
  out.shots.reserve(weights.size());
  for (const double w : weights) out.shots.push_back(total * w / sum);
  return out;
}

}  // namespace

ShotAllocation alloc_l1(const CommutationOracle& oracle, const Grouping& g, double total) {
  if (!g.disjoint) throw std::invalid_argument("alloc_l1: grouping must be disjoint");
  return proportional_allocation(group_norms(oracle, g).l1, total, "alloc_l1");
}

ShotAllocation alloc_l2(const CommutationOracle& oracle, const Grouping& g, double total) {
  if (!g.disjoint) throw std::invalid_argument("alloc_l2: grouping must be disjoint");
  auto weights = group_norms(oracle, g).squared;
  for (double& w : weights) w = std::sqrt(w);
  return proportional_allocation(weights, total, "alloc_l2");
}

namespace {

// Shot-weighted variance as a function of the budgets, with its gradient:
//   Var(M) = sum_i A_i / alpha_i + 2 sum_{i<k} B_ik alpha_ik / (alpha_i alpha_k)
// where alpha_i = sum of M_j over groups containing i, A_i = c_i^2 var_i,
// and B_ik = c_i c_k cov_ik over co-measured pairs.
struct AllocProblem {
  std::size_t m;
  std::vector<std::vector<std::size_t>> gamma;               // term -> groups
  std::vector<double> diag_coeff;                            // A_i
  struct Pair {
    std::size_t i, k;
    double coeff;                                            // 2 B_ik
    std::vector<std::size_t> shared;
  };
  std::vector<Pair> pairs;

  std::vector<double> alphas(const std::vector<double>& shots) const {
    std::vector<double> alpha(gamma.size(), 0.0);
    for (std::size_t i = 0; i < gamma.size(); ++i)
      for (const std::size_t j : gamma[i]) alpha[i] += shots[j];
    return alpha;
  }

  double objective(const std::vector<double>& shots) const {
    const auto alpha = alphas(shots);
    double total = 0;
    for (std::size_t i = 0; i < gamma.size(); ++i) total += diag_coeff[i] / alpha[i];
    for (const auto& p : pairs) {
      double alpha_ik = 0;
      for (const std::size_t j : p.shared) alpha_ik += shots[j];
      total += p.coeff * alpha_ik / (alpha[p.i] * alpha[p.k]);
    }
    return total;
  }

  std::vector<double> gradient(const std::vector<double>& shots) const {
    const auto alpha = alphas(shots);
    std::vector<double> grad(m, 0.0);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const double d = -diag_coeff[i] / (alpha[i] * alpha[i]);
      for (const std::size_t j : gamma[i]) grad[j] += d;
    }
    for (const auto& p : pairs) {
      double alpha_ik = 0;
      for (const std::size_t j : p.shared) alpha_ik += shots[j];
      const double ai = alpha[p.i], ak = alpha[p.k];
      for (const std::size_t j : p.shared) grad[j] += p.coeff / (ai * ak);
      const double common = -p.coeff * alpha_ik / (ai * ak);
      for (const std::size_t j : gamma[p.i]) grad[j] += common / ai;
      for (const std::size_t j : gamma[p.k]) grad[j] += common / ak;
    }
    return grad;
  }

  static bool contains(const std::vector<std::size_t>& sorted, std::size_t j) {
    return std::binary_search(sorted.begin(), sorted.end(), j);
  }

  // Derivative of f(M + t (e_dst - e_src)) in t: the difference of the two
  // gradient components evaluated on the shifted budgets. alpha_base holds
  // the alphas at t = 0.
  double exchange_derivative(const std::vector<double>& alpha_base,
                             const std::vector<double>& shots, std::size_t dst, std::size_t src,
                             double t) const {
    auto alpha_at = [&](std::size_t i) {
      double a = alpha_base[i];
      if (contains(gamma[i], dst)) a += t;
      if (contains(gamma[i], src)) a -= t;
      return a;
    };
    double deriv = 0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const bool in_dst = contains(gamma[i], dst);
      const bool in_src = contains(gamma[i], src);
      if (in_dst == in_src) continue;  // alpha unchanged, term drops out
      const double a = alpha_at(i);
      deriv += diag_coeff[i] / (a * a) * (in_dst ? -1.0 : 1.0);
    }
    for (const auto& p : pairs) {
      const bool dst_i = contains(gamma[p.i], dst), src_i = contains(gamma[p.i], src);
      const bool dst_k = contains(gamma[p.k], dst), src_k = contains(gamma[p.k], src);
      const bool dst_s = contains(p.shared, dst), src_s = contains(p.shared, src);
      if (dst_i == src_i && dst_k == src_k && dst_s == src_s) continue;
      double u = 0;
      for (const std::size_t j : p.shared) u += shots[j];
      u += t * ((dst_s ? 1.0 : 0.0) - (src_s ? 1.0 : 0.0));
      const double a = alpha_at(p.i), b = alpha_at(p.k);
      const double du = (dst_s ? 1.0 : 0.0) - (src_s ? 1.0 : 0.0);
      const double da = (dst_i ? 1.0 : 0.0) - (src_i ? 1.0 : 0.0);
      const double db = (dst_k ? 1.0 : 0.0) - (src_k ? 1.0 : 0.0);
      deriv += p.coeff * (du / (a * b) - u * (da * b + a * db) / (a * a * b * b));
    }
    return deriv;
  }
};

AllocProblem build_alloc_problem(const CommutationOracle& oracle, const Grouping& g,
                                 const MomentsProvider& moments) {
  const std::size_t n = oracle.term_count();
  AllocProblem problem;
  problem.m = g.group_count();
  problem.gamma = membership_map(g, n);
  problem.diag_coeff.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = oracle.coefficient(i);
    problem.diag_coeff[i] = c * c * moments.variance(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& group : g.groups)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        pairs.push_back({std::min(group[a], group[b]), std::max(group[a], group[b])});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (const auto& [i, k] : pairs) {
    const double cov = moments.covariance(i, k);
    if (cov == 0.0) continue;
    AllocProblem::Pair p;
    p.i = i;
    p.k = k;
    p.coeff = 2.0 * oracle.coefficient(i) * oracle.coefficient(k) * cov;
    std::set_intersection(problem.gamma[i].begin(), problem.gamma[i].end(),
                          problem.gamma[k].begin(), problem.gamma[k].end(),
                          std::back_inserter(p.shared));
    problem.pairs.push_back(std::move(p));
  }
  return problem;
}

// KKT residual on the scaled simplex: at an interior optimum all gradient
// components agree with the multiplier lambda; weight the mismatch by the
// mass sitting on each coordinate.
double kkt_residual(const std::vector<double>& shots, const std::vector<double>& grad,
                    double total) {
  double lambda = 0;
  for (std::size_t j = 0; j < shots.size(); ++j) lambda += shots[j] * grad[j];
  lambda /= total;
  double scale = std::abs(lambda);
  for (const double gj : grad) scale = std::max(scale, std::abs(gj));
  if (scale == 0) return 0;
  double res = 0;
  for (std::size_t j = 0; j < shots.size(); ++j)
    res = std::max(res, shots[j] / total * std::abs(grad[j] - lambda));
  return res / scale;
}

}  // namespace

AllocOptimizeResult alloc_optimize(const CommutationOracle& oracle, const Grouping& g,
                                   const MomentsProvider& moments, double total,
                                   const AllocOptimizeOptions& options) {
  if (!(total > 0)) throw std::invalid_argument("alloc_optimize: total must be positive");
  if (g.group_count() == 0) throw std::invalid_argument("alloc_optimize: no groups");
  for (const auto& group : g.groups)
    if (group.empty()) throw std::invalid_argument("alloc_optimize: empty group");

  const auto problem = build_alloc_problem(oracle, g, moments);
  const std::size_t m = g.group_count();
  const double floor = 1e-12 * total;

  std::vector<double> shots(m, total / static_cast<double>(m));
  if (!options.initial.empty()) {
    if (options.initial.size() != m)
      throw std::invalid_argument("alloc_optimize: initial allocation has wrong group count");
    double sum = 0;
    for (const double v : options.initial) {
      if (!(v > 0)) throw std::invalid_argument("alloc_optimize: initial budgets must be positive");
      sum += v;
    }
    for (std::size_t j = 0; j < m; ++j) shots[j] = options.initial[j] * total / sum;
  }
  double f = problem.objective(shots);
  double eta = 1.0;
  std::size_t iter = 0;
  int stalled_steps = 0;
  double residual = std::numeric_limits<double>::infinity();

  for (; iter < options.max_iterations; ++iter) {
    const auto grad = problem.gradient(shots);
    residual = kkt_residual(shots, grad, total);
    if (residual < options.kkt_tolerance) break;

    // Centered, scale-free exponent so the step size is dimensionless.
    double lambda = 0;
    for (std::size_t j = 0; j < m; ++j) lambda += shots[j] * grad[j];
    lambda /= total;
    double scale = 0;
    for (const double gj : grad) scale = std::max(scale, std::abs(gj - lambda));
    if (scale == 0) break;

    bool accepted = false;
    for (int backtrack = 0; backtrack < 60 && !accepted; ++backtrack) {
      std::vector<double> trial(m);
      double sum = 0;
      for (std::size_t j = 0; j < m; ++j) {
        trial[j] = shots[j] * std::exp(-eta * (grad[j] - lambda) / scale);
        sum += trial[j];
      }
      for (std::size_t j = 0; j < m; ++j) trial[j] = std::max(trial[j] * total / sum, floor);
      const double f_trial = problem.objective(trial);
      if (f_trial <= f) {
        const double rel = (f - f_trial) / std::max(std::abs(f), 1e-300);
        stalled_steps = rel < options.relative_tolerance ? stalled_steps + 1 : 0;
        shots = std::move(trial);
        f = f_trial;
        eta *= 1.6;
        accepted = true;
      } else {
        eta *= 0.5;
      }
    }
    // Step size collapsed or the objective stopped moving; fall through to
    // the exchange polish below.
    if (!accepted || stalled_steps > 50) break;
  }

  // Phase 2: pairwise mass exchanges between the extreme-gradient groups
  // with a derivative bisection along the exchange direction. This digs out
  // the ill-conditioned instances where the multiplicative updates stall.
  for (std::size_t exchange = 0; exchange < 50 * m; ++exchange) {
    const auto grad = problem.gradient(shots);
    residual = kkt_residual(shots, grad, total);
    if (residual < options.kkt_tolerance) break;

    std::size_t src = m, dst = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (dst == m || grad[j] < grad[dst]) dst = j;
      if (shots[j] > 2 * floor && (src == m || grad[j] > grad[src])) src = j;
    }
    if (src == m || dst == src) break;

    const double t_hi = shots[src] - floor;
    const auto alpha_base = problem.alphas(shots);
    if (problem.exchange_derivative(alpha_base, shots, dst, src, 0.0) >= 0) break;
    double t;
    if (problem.exchange_derivative(alpha_base, shots, dst, src, t_hi) <= 0) {
      t = t_hi;  // minimum sits on the positivity boundary
    } else {
      double lo = 0, hi = t_hi;
      for (int bisect = 0; bisect < 200 && hi - lo > 1e-16 * total; ++bisect) {
        const double mid = 0.5 * (lo + hi);
        (problem.exchange_derivative(alpha_base, shots, dst, src, mid) < 0 ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }
    if (t <= 0) break;
    shots[dst] += t;
    shots[src] -= t;
  }
  f = problem.objective(shots);

  const auto grad = problem.gradient(shots);
  residual = kkt_residual(shots, grad, total);
  if (residual >= options.kkt_tolerance) {
    if (iter >= options.max_iterations)
      throw NumericalError("alloc_optimize: iteration cap reached", shots, residual);
    throw NumericalError("alloc_optimize: stalled above KKT tolerance", shots, residual);
  }

  AllocOptimizeResult out;
  out.allocation = ShotAllocation{std::move(shots), false};
  out.variance = f;
  out.kkt_residual = residual;
  out.iterations = iter;
  return out;
}

double min_variance_disjoint(const CommutationOracle& oracle, const Grouping& g, double total) {
  if (!g.disjoint) throw std::invalid_argument("min_variance_disjoint: grouping must be disjoint");
  if (!(total > 0)) throw std::invalid_argument("min_variance_disjoint: total must be positive");
  const auto norms = group_norms(oracle, g);
  double s = 0;
  for (const double sj : norms.squared) s += std::sqrt(sj);
  return s * s / total;
}

ShotAllocation round_allocation(const ShotAllocation& continuous, std::uint64_t total) {
  continuous.validate();
  const std::size_t m = continuous.shots.size();
  if (total < m)
    throw std::invalid_argument("round_allocation: total below group count");

  const double scale = static_cast<double>(total) / continuous.total();
  std::vector<double> target(m);
  for (std::size_t j = 0; j < m; ++j) target[j] = continuous.shots[j] * scale;

  std::vector<std::uint64_t> counts(m);
  std::int64_t assigned = 0;
  for (std::size_t j = 0; j < m; ++j) {
    counts[j] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(target[j])));
    assigned += static_cast<std::int64_t>(counts[j]);
  }

  std::int64_t leftover = static_cast<std::int64_t>(total) - assigned;
  if (leftover > 0) {
    // Largest fractional part first; ties go to the lower group index.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double fa = target[a] - std::floor(target[a]);
      const double fb = target[b] - std::floor(target[b]);
      return fa > fb;
    });
    for (std::size_t pos = 0; leftover > 0; pos = (pos + 1) % m, --leftover)
      ++counts[order[pos]];
  } else if (leftover < 0) {
    // Clamping tiny budgets up to one shot can overshoot; take the excess
    // back from the groups with the largest surplus over their target.
    while (leftover < 0) {
      std::size_t best = m;
      double best_surplus = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        if (counts[j] <= 1) continue;
        const double surplus = static_cast<double>(counts[j]) - target[j];
        if (surplus > best_surplus) {
          best_surplus = surplus;
          best = j;
        }
      }
      if (best == m) throw std::logic_error("round_allocation: cannot rebalance");
      --counts[best];
      ++leftover;
    }
  }

  ShotAllocation out;
  out.integral = true;
  out.shots.reserve(m);
  for (const auto c : counts) out.shots.push_back(static_cast<double>(c));
  return out;
}

}  // namespace ogrp
