#include "ogrp/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ogrp {

bool Grouping::group_contains(std::size_t j, std::size_t term) const {
  const auto& g = groups.at(j);
  return std::find(g.begin(), g.end(), term) != g.end();
}

std::string GroupingViolation::describe() const {
  switch (kind) {
    case Kind::OutOfRange:
      return "group " + std::to_string(group) + ": term index " + std::to_string(term) +
             " out of range";
    case Kind::Covering:
      return "term " + std::to_string(term) + " is not covered by any group";
    case Kind::Commuting:
      return "group " + std::to_string(group) + ": terms " + std::to_string(term) + " and " +
             std::to_string(other_term) + " do not commute";
    case Kind::Disjointness:
      return "groups " + std::to_string(group) + " and " + std::to_string(other_group) +
             " share term " + std::to_string(term);
    case Kind::Duplicate:
      return "group " + std::to_string(group) + ": term " + std::to_string(term) +
             " appears more than once";
  }
  return "unknown violation";
}

Grouping sorted_insertion(const CommutationOracle& oracle) {
  const std::size_t n = oracle.term_count();
  if (n == 0) throw std::invalid_argument("sorted_insertion: empty term list");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&oracle](std::size_t a, std::size_t b) {
    return std::abs(oracle.coefficient(a)) > std::abs(oracle.coefficient(b));
  });

  Grouping g;
  g.disjoint = true;
  for (const std::size_t term : order) {
    bool placed = false;
    for (auto& group : g.groups) {
      bool ok = true;
      for (const std::size_t member : group) {
        if (!oracle.commutes(term, member)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        group.push_back(term);
        placed = true;
        break;
      }
    }
    if (!placed) g.groups.push_back({term});
  }
  return g;
}

std::vector<GroupingViolation> validate_grouping(const CommutationOracle& oracle,
                                                 const Grouping& g) {
  const std::size_t n = oracle.term_count();
  std::vector<GroupingViolation> out;
  std::vector<std::size_t> membership_count(n, 0);

  for (std::size_t j = 0; j < g.groups.size(); ++j) {
    const auto& group = g.groups[j];
    for (std::size_t a = 0; a < group.size(); ++a) {
      if (group[a] >= n) {
        out.push_back({GroupingViolation::Kind::OutOfRange, j, 0, group[a], 0});
        continue;
      }
      ++membership_count[group[a]];
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        if (group[b] >= n) continue;
        if (group[a] == group[b]) {
          out.push_back({GroupingViolation::Kind::Duplicate, j, 0, group[a], 0});
          --membership_count[group[a]];  // count set-like membership once
        } else if (!oracle.commutes(group[a], group[b])) {
          out.push_back({GroupingViolation::Kind::Commuting, j, 0, group[a], group[b]});
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    if (membership_count[i] == 0)
      out.push_back({GroupingViolation::Kind::Covering, 0, 0, i, 0});

  if (g.disjoint) {
    for (std::size_t j = 0; j < g.groups.size(); ++j)
      for (std::size_t l = j + 1; l < g.groups.size(); ++l)
        for (const std::size_t t : g.groups[j])
          if (g.group_contains(l, t))
            out.push_back({GroupingViolation::Kind::Disjointness, j, l, t, 0});
  }
  return out;
}

GroupNorms group_norms(const CommutationOracle& oracle, const Grouping& g) {
  GroupNorms norms;
  norms.squared.reserve(g.groups.size());
  norms.l1.reserve(g.groups.size());
  for (const auto& group : g.groups) {
    double s = 0, l1 = 0;
    for (const std::size_t i : group) {
      const double c = oracle.coefficient(i);
      s += c * c;
      l1 += std::abs(c);
    }
    norms.squared.push_back(s);
    norms.l1.push_back(l1);
  }
  return norms;
}

std::vector<std::vector<std::size_t>> membership_map(const Grouping& g, std::size_t term_count) {
  std::vector<std::vector<std::size_t>> gamma(term_count);
  for (std::size_t j = 0; j < g.groups.size(); ++j) {
    for (const std::size_t i : g.groups[j]) {
      if (i >= term_count)
        throw std::invalid_argument("membership_map: term index " + std::to_string(i) +
                                    " out of range");
      gamma[i].push_back(j);
    }
  }
  for (std::size_t i = 0; i < term_count; ++i) {
    if (gamma[i].empty())
      throw std::invalid_argument("membership_map: term " + std::to_string(i) +
                                  " is not covered by any group");
    std::sort(gamma[i].begin(), gamma[i].end());
    gamma[i].erase(std::unique(gamma[i].begin(), gamma[i].end()), gamma[i].end());
  }
  return gamma;
}

}  // namespace ogrp
