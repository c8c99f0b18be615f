#pragma once

#include <string>
#include <vector>

#include "ogrp/allocation.hpp"
#include "ogrp/grouping.hpp"
#include "ogrp/hamiltonian.hpp"

namespace ogrp {

/// Adversarial commutation structure on which sorted insertion pays a factor
/// proportional to its group count: L column blocks of L mutually commuting
/// terms (all such "uppercase" terms commute with each other), plus an
/// exterior term per column except the last, commuting only with its own
/// column. Specified abstractly; no concrete Pauli realization is attempted.
struct HardFamilyInstance {
  int L = 0;
  AbstractHamiltonian abstract;
  // Term labels: {column, row} for block terms, {column, -1} for exterior
  // terms. Term order is the descending-coefficient visit order.
  struct Label {
    int column;
    int row;  // -1 marks the exterior term
  };
  std::vector<Label> labels;

  std::size_t term_count() const { return abstract.term_count(); }
  std::string label_string(std::size_t i) const;
};

/// Builds the instance with N = L^2 + L - 1 terms. Coefficient magnitudes are
/// 1 + k*delta with delta = 1/(2N(N+1)) and k descending along the order:
/// exterior term then its column block, column by column, so sorted insertion
/// visits terms in exactly that order with magnitudes within 1/N of 1.
/// perturbation_scale = 0 gives exactly unit coefficients (term order still
/// fixes the sorted-insertion result through the index tie-break).
HardFamilyInstance build_hard_family(int L, double perturbation_scale = 1.0);

/// The three groupings of interest on one instance:
///  - columns: sorted insertion's output, one group per column (the exterior
///    term leads its column group; the last column has none).
///  - merged:  one big group holding every block term, plus a singleton per
///    exterior term.
///  - repacked: column groups plus the all-blocks group; a common repacking
///    of both disjoint groupings (up to group order for `merged`).
struct CanonicalGroupings {
  Grouping columns;
  Grouping merged;
  Grouping repacked;
};
CanonicalGroupings canonical_groupings(const HardFamilyInstance& instance);

struct HardFamilyVariances {
  double var_columns = 0;   // optimal state-independent variance of `columns`
  double var_merged = 0;    // same for `merged`
  double var_repacked = 0;  // optimized allocation on `repacked`
  double ratio_columns_over_repacked = 0;
  double ratio_columns_over_merged = 0;
};

/// Variances under the state-independent model (unit variances, zero
/// covariance): closed forms for the disjoint groupings, optimized
/// allocation with shot-weighted averaging for the repacking.
HardFamilyVariances hard_family_variances(const HardFamilyInstance& instance, double total_shots);

}  // namespace ogrp
