#pragma once

#include <optional>
#include <vector>

#include "ogrp/clifford.hpp"
#include "ogrp/estimator.hpp"
#include "ogrp/grouping.hpp"

namespace ogrp {

/// An overlapped grouping produced by repacking a disjoint base grouping.
/// Invariants: same group count as the base, each base group is a subset of
/// its repacked group, every group is a commuting set.
///
/// member_signs, when present, records the conjugation sign of each member's
/// diagonal image under the group's fixed measurement circuit (parallel to
/// overlapped.groups). Post-hoc repacking fills it; ad-hoc repacking leaves
/// it empty because the circuits are synthesized later.
struct RepackedGrouping {
  Grouping base;
  Grouping overlapped;
  std::vector<std::vector<int>> member_signs;

  std::size_t group_count() const { return overlapped.group_count(); }
  void validate_structure() const;  // group counts and base-subset checks
};

/// Post-hoc repacking: for each group's fixed diagonalizing circuit, adopt
/// every Hamiltonian term the circuit already maps to a Z/I-only string.
/// Usable on previously collected bitstrings, since no basis changes.
/// Throws if some base member is not diagonal under its own circuit.
RepackedGrouping posthoc_repack(const Hamiltonian& h, const Grouping& base,
                                const std::vector<Diagonalization>& diagonalizers);

/// Ad-hoc repacking: greedy insertion of terms into additional compatible
/// groups before circuit synthesis, scored by C(P_i) = c_i^2 / mu_i where
/// mu_i counts the groups already holding term i. Score ties break toward
/// the lower term index; insertion targets the first compatible group. The
/// output is maximally repacked.
RepackedGrouping adhoc_repack(const CommutationOracle& oracle, const Grouping& base);

/// Group-wise subset tests between repackings on the same group indices.
bool is_refinement(const Grouping& r, const Grouping& refined);
bool is_proper_refinement(const Grouping& r, const Grouping& refined);

/// True iff no (term, group) insertion remains legal.
bool is_maximal(const CommutationOracle& oracle, const Grouping& r);

/// One sweep in term order, adding every term to every compatible group.
/// The result refines the input and is maximal.
RepackedGrouping complete_to_maximal(const CommutationOracle& oracle, const RepackedGrouping& r);

struct OneStepDelta {
  double delta = 0;        // Var(R) - Var(R'), shot-weighted estimator
  bool decreases = false;  // delta > 0
  double criterion_lhs = 0;  // (1/2) c_s^2 var_s
  double criterion_rhs = 0;  // covariance-weighted effective-shot terms
  bool criterion_predicts_nonincrease = false;  // lhs >= rhs
};

/// Variance change from inserting term s into group ell of r, evaluated both
/// directly (difference of the shot-weighted variances, authoritative) and
/// through the closed-form insertion criterion. The two must agree in sign.
OneStepDelta one_step_delta(const CommutationOracle& oracle, const Grouping& r, std::size_t ell,
                            std::size_t s, const MomentsProvider& moments,
                            const ShotAllocation& alloc);

}  // namespace ogrp
