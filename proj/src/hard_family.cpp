#include "ogrp/hard_family.hpp"

#include <algorithm>
#include <stdexcept>

#include "ogrp/moments.hpp"

namespace ogrp {

namespace {

// Spreadsheet-style letters: 0 -> "a", 25 -> "z", 26 -> "aa", ...
std::string letters(int index, char base) {
  std::string out;
  int v = index;
  do {
    out.insert(out.begin(), static_cast<char>(base + v % 26));
    v = v / 26 - 1;
  } while (v >= 0);
  return out;
}

}  // namespace

std::string HardFamilyInstance::label_string(std::size_t i) const {
  const auto& lab = labels.at(i);
  const std::string lower = letters(lab.column, 'a');
  if (lab.row < 0) return lower;
  return letters(lab.row, 'A') + lower;
}

HardFamilyInstance build_hard_family(int L, double perturbation_scale) {
  if (L < 2) throw std::invalid_argument("build_hard_family: L must be >= 2");

  HardFamilyInstance inst;
  inst.L = L;
  const std::size_t n = static_cast<std::size_t>(L) * L + (L - 1);

  // Descending-coefficient visit order: exterior term first, then its column
  // block, for each column; the last column has no exterior term.
  for (int col = 0; col < L; ++col) {
    if (col < L - 1) inst.labels.push_back({col, -1});
    for (int row = 0; row < L; ++row) inst.labels.push_back({col, row});
  }

  inst.abstract.coefficients.resize(n);
  const double delta = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(n + 1));
  for (std::size_t p = 0; p < n; ++p)
    inst.abstract.coefficients[p] =
        1.0 + perturbation_scale * static_cast<double>(n - p) * delta;

  inst.abstract.adjacency.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    inst.abstract.adjacency[i][i] = true;
    for (std::size_t k = i + 1; k < n; ++k) {
      const auto& a = inst.labels[i];
      const auto& b = inst.labels[k];
      bool adjacent = false;
      if (a.row >= 0 && b.row >= 0)
        adjacent = true;  // block terms all commute with each other
      else if (a.row < 0 && b.row < 0)
        adjacent = false;  // two exterior terms never commute
      else
        adjacent = a.column == b.column;  // exterior commutes with its column
      inst.abstract.adjacency[i][k] = adjacent;
      inst.abstract.adjacency[k][i] = adjacent;
    }
  }
  inst.abstract.validate();
  return inst;
}

CanonicalGroupings canonical_groupings(const HardFamilyInstance& instance) {
  const int L = instance.L;
  CanonicalGroupings out;

  std::vector<std::vector<std::size_t>> column_members(static_cast<std::size_t>(L));
  std::vector<std::size_t> block_terms;
  std::vector<std::size_t> exterior_terms;  // by column
  for (std::size_t i = 0; i < instance.term_count(); ++i) {
    const auto& lab = instance.labels[i];
    column_members[static_cast<std::size_t>(lab.column)].push_back(i);
    if (lab.row >= 0)
      block_terms.push_back(i);
    else
      exterior_terms.push_back(i);
  }

  out.columns.disjoint = true;
  out.columns.groups = column_members;

  out.merged.disjoint = true;
  out.merged.groups.push_back(block_terms);
  for (const std::size_t e : exterior_terms) out.merged.groups.push_back({e});

  // Repacked: column groups as-is, except the last column grows to hold
  // every block term. Adding block_terms keeps each group commuting and
  // leaves the column groups as subsets, so this repacks `columns`; after
  // matching the big groups it repacks `merged` too.
  out.repacked.disjoint = false;
  out.repacked.groups = column_members;
  out.repacked.groups[static_cast<std::size_t>(L - 1)] = block_terms;
  return out;
}

HardFamilyVariances hard_family_variances(const HardFamilyInstance& instance, double total_shots) {
  if (!(total_shots > 0))
    throw std::invalid_argument("hard_family_variances: total_shots must be positive");
  const CommutationOracle oracle(instance.abstract);
  const auto groupings = canonical_groupings(instance);

  HardFamilyVariances out;
  out.var_columns = min_variance_disjoint(oracle, groupings.columns, total_shots);
  out.var_merged = min_variance_disjoint(oracle, groupings.merged, total_shots);

  const ZeroCovarianceMoments moments(instance.term_count());
  const auto opt = alloc_optimize(oracle, groupings.repacked, moments, total_shots);
  out.var_repacked =
      shot_weighted_variance(oracle, groupings.repacked, opt.allocation, moments).total;

  out.ratio_columns_over_repacked = out.var_columns / out.var_repacked;
  out.ratio_columns_over_merged = out.var_columns / out.var_merged;
  return out;
}

}  // namespace ogrp
