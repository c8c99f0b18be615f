#include "ogrp/repacking.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ogrp {

void RepackedGrouping::validate_structure() const {
  if (base.group_count() != overlapped.group_count())
    throw std::invalid_argument("RepackedGrouping: group count changed");
  for (std::size_t j = 0; j < base.group_count(); ++j)
    for (const std::size_t t : base.groups[j])
      if (!overlapped.group_contains(j, t))
        throw std::invalid_argument("RepackedGrouping: base group " + std::to_string(j) +
                                    " is not a subset of its repacked group");
  if (!member_signs.empty()) {
    if (member_signs.size() != overlapped.group_count())
      throw std::invalid_argument("RepackedGrouping: sign table has wrong group count");
    for (std::size_t j = 0; j < member_signs.size(); ++j) {
      if (member_signs[j].size() != overlapped.groups[j].size())
        throw std::invalid_argument("RepackedGrouping: sign table misaligned in group " +
                                    std::to_string(j));
      for (const int s : member_signs[j])
        if (s != 1 && s != -1)
          throw std::invalid_argument("RepackedGrouping: signs must be +1 or -1");
    }
  }
}

RepackedGrouping posthoc_repack(const Hamiltonian& h, const Grouping& base,
                                const std::vector<Diagonalization>& diagonalizers) {
  if (!base.disjoint) throw std::invalid_argument("posthoc_repack: base grouping must be disjoint");
  if (diagonalizers.size() != base.group_count())
    throw std::invalid_argument("posthoc_repack: need one diagonalizer per group");

  RepackedGrouping out;
  out.base = base;
  out.overlapped.disjoint = false;
  out.overlapped.groups.resize(base.group_count());
  out.member_signs.resize(base.group_count());

  for (std::size_t j = 0; j < base.group_count(); ++j) {
    const auto& circuit = diagonalizers[j].circuit;
    // The base members must already be diagonal under their own circuit.
    for (const std::size_t t : base.groups[j]) {
      const auto img = conjugate(circuit, h.pauli(t));
      if (!img.pauli.is_z_diagonal())
        throw std::invalid_argument("posthoc_repack: base member " + std::to_string(t) +
                                    " of group " + std::to_string(j) +
                                    " is not diagonal under the supplied circuit");
      out.overlapped.groups[j].push_back(t);
      out.member_signs[j].push_back(img.sign);
    }
    // Adopt every other term the circuit happens to diagonalize.
    for (std::size_t t = 0; t < h.term_count(); ++t) {
      if (base.group_contains(j, t)) continue;
      const auto img = conjugate(circuit, h.pauli(t));
      if (img.pauli.is_z_diagonal()) {
        out.overlapped.groups[j].push_back(t);
        out.member_signs[j].push_back(img.sign);
      }
    }
  }
  return out;
}

namespace {

// Compatibility candidate for the ad-hoc greedy loop. Group membership only
// grows, so checking new members from `checked` onward never repeats a pair
// test; a failed check removes the candidate for good.
struct Candidate {
  std::size_t group;
  std::size_t checked;  // members of the group verified so far
};

}  // namespace

RepackedGrouping adhoc_repack(const CommutationOracle& oracle, const Grouping& base) {
  if (!base.disjoint) throw std::invalid_argument("adhoc_repack: base grouping must be disjoint");
  const std::size_t n = oracle.term_count();
  (void)membership_map(base, n);  // enforces the covering precondition

  RepackedGrouping out;
  out.base = base;
  out.overlapped = base;
  out.overlapped.disjoint = false;
  auto& groups = out.overlapped.groups;

  std::vector<std::size_t> mu(n, 0);
  for (const auto& group : groups)
    for (const std::size_t t : group) ++mu[t];

  std::vector<std::vector<Candidate>> candidates(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < groups.size(); ++j)
      if (!base.group_contains(j, i)) candidates[i].push_back({j, 0});

  // Pop the live term with the best score, verify its first compatible
  // group lazily, insert, rescore. Scores only shrink as mu grows, so a
  // stale heap entry is simply re-pushed with the current value.
  auto score = [&](std::size_t i) {
    const double c = oracle.coefficient(i);
    return c * c / static_cast<double>(mu[i]);
  };
  struct HeapEntry {
    double score;
    std::size_t term;
    bool operator<(const HeapEntry& other) const {
      if (score != other.score) return score < other.score;  // max-heap on score
      return term > other.term;                              // ties: lower index first
    }
  };
  std::vector<HeapEntry> heap;
  heap.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!candidates[i].empty()) heap.push_back({score(i), i});
  std::make_heap(heap.begin(), heap.end());

  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end());
    const auto entry = heap.back();
    heap.pop_back();
    const std::size_t i = entry.term;
    if (candidates[i].empty()) continue;
    if (entry.score != score(i)) {  // stale after an earlier insertion
      heap.push_back({score(i), i});
      std::push_heap(heap.begin(), heap.end());
      continue;
    }

    // First compatible group, verifying only members not yet checked.
    bool inserted = false;
    auto& cands = candidates[i];
    for (auto it = cands.begin(); it != cands.end() && !inserted;) {
      auto& cand = *it;
      const auto& group = groups[cand.group];
      bool compatible = true;
      while (cand.checked < group.size()) {
        if (!oracle.commutes(i, group[cand.checked])) {
          compatible = false;
          break;
        }
        ++cand.checked;
      }
      if (!compatible) {
        it = cands.erase(it);
        continue;
      }
      groups[cand.group].push_back(i);
      ++mu[i];
      it = cands.erase(it);
      inserted = true;
    }
    if (!cands.empty()) {
      heap.push_back({score(i), i});
      std::push_heap(heap.begin(), heap.end());
    }
  }
  return out;
}

bool is_refinement(const Grouping& r, const Grouping& refined) {
  if (r.group_count() != refined.group_count())
    throw std::invalid_argument("is_refinement: group counts differ");
  for (std::size_t j = 0; j < r.group_count(); ++j)
    for (const std::size_t t : r.groups[j])
      if (!refined.group_contains(j, t)) return false;
  return true;
}

bool is_proper_refinement(const Grouping& r, const Grouping& refined) {
  if (!is_refinement(r, refined)) return false;
  for (std::size_t j = 0; j < r.group_count(); ++j) {
    const std::set<std::size_t> a(r.groups[j].begin(), r.groups[j].end());
    const std::set<std::size_t> b(refined.groups[j].begin(), refined.groups[j].end());
    if (a != b) return true;
  }
  return false;
}

bool is_maximal(const CommutationOracle& oracle, const Grouping& r) {
  const std::size_t n = oracle.term_count();
  for (std::size_t j = 0; j < r.group_count(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (r.group_contains(j, i)) continue;
      bool insertable = true;
      for (const std::size_t member : r.groups[j]) {
        if (!oracle.commutes(i, member)) {
          insertable = false;
          break;
        }
      }
      if (insertable) return false;
    }
  }
  return true;
}

RepackedGrouping complete_to_maximal(const CommutationOracle& oracle, const RepackedGrouping& r) {
  r.validate_structure();
  RepackedGrouping out;
  out.base = r.base;
  out.overlapped = r.overlapped;
  const std::size_t n = oracle.term_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& group : out.overlapped.groups) {
      if (std::find(group.begin(), group.end(), i) != group.end()) continue;
      bool compatible = true;
      for (const std::size_t member : group) {
        if (!oracle.commutes(i, member)) {
          compatible = false;
          break;
        }
      }
      if (compatible) group.push_back(i);
    }
  }
  return out;
}

OneStepDelta one_step_delta(const CommutationOracle& oracle, const Grouping& r, std::size_t ell,
                            std::size_t s, const MomentsProvider& moments,
                            const ShotAllocation& alloc) {
  alloc.validate();
  const std::size_t n = oracle.term_count();
  if (ell >= r.group_count()) throw std::invalid_argument("one_step_delta: group index out of range");
  if (s >= n) throw std::invalid_argument("one_step_delta: term index out of range");
  if (r.group_contains(ell, s))
    throw std::invalid_argument("one_step_delta: term already in the target group");
  for (const std::size_t member : r.groups[ell])
    if (!oracle.commutes(s, member))
      throw std::invalid_argument("one_step_delta: term " + std::to_string(s) +
                                  " does not commute with group member " + std::to_string(member));

  // Direct difference of the shot-weighted variances (this is authoritative).
  Grouping refined = r;
  refined.disjoint = false;
  refined.groups[ell].push_back(s);
  const double var_before = shot_weighted_variance(oracle, r, alloc, moments).total;
  const double var_after = shot_weighted_variance(oracle, refined, alloc, moments).total;

  OneStepDelta out;
  out.delta = var_before - var_after;
  out.decreases = out.delta > 0;

  // Closed-form criterion, evaluated from the pre-insertion grouping.
  const auto gamma = membership_map(r, n);
  std::vector<double> alpha(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (const std::size_t j : gamma[i]) alpha[i] += alloc.shots[j];
  auto alpha_shared = [&](std::size_t i, std::size_t k) {
    double a = 0;
    std::size_t pi = 0, pk = 0;
    while (pi < gamma[i].size() && pk < gamma[k].size()) {
      if (gamma[i][pi] == gamma[k][pk]) {
        a += alloc.shots[gamma[i][pi]];
        ++pi;
        ++pk;
      } else if (gamma[i][pi] < gamma[k][pk]) {
        ++pi;
      } else {
        ++pk;
      }
    }
    return a;
  };

  const double cs = oracle.coefficient(s);
  out.criterion_lhs = 0.5 * cs * cs * moments.variance(s);
  double rhs = 0;
  std::vector<bool> in_ell(n, false);
  for (const std::size_t member : r.groups[ell]) in_ell[member] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s) continue;
    if (in_ell[i]) {
      rhs += oracle.coefficient(i) * cs * moments.covariance(i, s) *
             (alpha[s] - alpha_shared(i, s)) / alpha[i];
    } else {
      const double a_is = alpha_shared(i, s);
      if (a_is != 0.0)
        rhs -= oracle.coefficient(i) * cs * moments.covariance(i, s) * a_is / alpha[i];
    }
  }
  out.criterion_rhs = rhs;
  out.criterion_predicts_nonincrease = out.criterion_lhs >= out.criterion_rhs;
  return out;
}

}  // namespace ogrp
