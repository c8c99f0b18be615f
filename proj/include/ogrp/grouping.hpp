#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ogrp/hamiltonian.hpp"

namespace ogrp {

/// Answers "do terms i and k commute" for either a concrete Hamiltonian
/// (symplectic test) or an abstract one (adjacency lookup), and exposes the
/// coefficients. Non-owning; the source must outlive the oracle.
class CommutationOracle {
 public:
  explicit CommutationOracle(const Hamiltonian& h) : ham_(&h) {}
  explicit CommutationOracle(const AbstractHamiltonian& a) : abs_(&a) { a.validate(); }

  std::size_t term_count() const {
    return ham_ ? ham_->term_count() : abs_->term_count();
  }
  double coefficient(std::size_t i) const {
    return ham_ ? ham_->coefficient(i) : abs_->coefficients.at(i);
  }
  bool commutes(std::size_t i, std::size_t k) const {
    if (i == k) return true;
    return ham_ ? ogrp::commutes(ham_->pauli(i), ham_->pauli(k)) : abs_->adjacency[i][k];
  }
  const Hamiltonian* hamiltonian() const { return ham_; }

 private:
  const Hamiltonian* ham_ = nullptr;
  const AbstractHamiltonian* abs_ = nullptr;
};

/// An ordered list of groups (index sets into the Hamiltonian's term list)
/// together with a disjointness claim. Group members are stored in insertion
/// order; membership semantics are set-like.
struct Grouping {
  std::vector<std::vector<std::size_t>> groups;
  bool disjoint = false;

  std::size_t group_count() const { return groups.size(); }
  bool group_contains(std::size_t j, std::size_t term) const;
};

struct GroupingViolation {
  enum class Kind { OutOfRange, Covering, Commuting, Disjointness, Duplicate };
  Kind kind;
  std::size_t group = 0;       // offending group (when applicable)
  std::size_t other_group = 0; // second group for disjointness
  std::size_t term = 0;        // offending term index
  std::size_t other_term = 0;  // second term for commutation
  std::string describe() const;
};

/// Sorted insertion: process terms by descending |c_i| (ties by ascending
/// index) and put each into the earliest group it fully commutes with,
/// opening a new group when none is compatible. Output is disjoint, covering
/// and commuting.
Grouping sorted_insertion(const CommutationOracle& oracle);

/// Checks covering, within-group commutation, and (if claimed) disjointness.
/// Returns an empty list iff the grouping satisfies its claimed definition.
std::vector<GroupingViolation> validate_grouping(const CommutationOracle& oracle,
                                                 const Grouping& g);

struct GroupNorms {
  std::vector<double> squared;   // S_j = sum of c_i^2 over the group
  std::vector<double> l1;        // sum of |c_i| over the group
};
GroupNorms group_norms(const CommutationOracle& oracle, const Grouping& g);

/// Membership map: term index -> sorted list of groups containing it.
/// Throws if the grouping does not cover all `term_count` terms.
std::vector<std::vector<std::size_t>> membership_map(const Grouping& g, std::size_t term_count);

}  // namespace ogrp
