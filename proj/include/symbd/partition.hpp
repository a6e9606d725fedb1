#pragma once

#include <algorithm>
#include <vector>

#include "symbd/core.hpp"

namespace symbd {

// Disjoint index groups over a universe 0..n-1 on which full symmetric groups
// act. Canonical form: members sorted, groups ordered by first member.
struct GroupPartition {
  int universe = 0;
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;  // index -> group position

  static GroupPartition from_groups(int universe, std::vector<std::vector<int>> groups) {
    GroupPartition p;
    p.universe = universe;
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end());
    p.groups = std::move(groups);
    p.group_of.assign(universe, -1);
    for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
      for (int j : p.groups[gi]) {
        if (j < 0 || j >= universe)
          throw Error(ErrorKind::BadInput, "partition member outside universe");
        if (p.group_of[j] != -1)
          throw Error(ErrorKind::BadInput, "partition groups overlap");
        p.group_of[j] = static_cast<int>(gi);
      }
    }
    for (int j = 0; j < universe; ++j)
      if (p.group_of[j] == -1)
        throw Error(ErrorKind::BadInput, "partition does not cover the universe");
    return p;
  }

  static GroupPartition singletons(int n) {
    std::vector<std::vector<int>> g(n);
    for (int j = 0; j < n; ++j) g[j] = {j};
    return from_groups(n, std::move(g));
  }

  std::size_t num_groups() const { return groups.size(); }
};

// Groups 0..n-1 by a pairwise predicate expected to be an equivalence.
// Placement compares against each group's first member only, so the result is
// order-dependent for a broken predicate; the full recheck afterwards turns
// that into a loud failure instead of a silent arbitrary grouping.
template <typename Pred>
GroupPartition group_by_relation(int n, Pred&& related) {
  std::vector<std::vector<int>> groups;
  for (int j = 0; j < n; ++j) {
    bool placed = false;
    for (auto& g : groups) {
      if (related(g.front(), j)) {
        g.push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({j});
  }
  for (const auto& g : groups)
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b)
        if (!related(g[a], g[b]) || !related(g[b], g[a]))
          throw Error(ErrorKind::NonTransitiveRelation,
                      "pairwise relation is not an equivalence within a group");
  for (std::size_t x = 0; x < groups.size(); ++x)
    for (std::size_t y = x + 1; y < groups.size(); ++y)
      for (int a : groups[x])
        for (int b : groups[y])
          if (related(a, b) || related(b, a))
            throw Error(ErrorKind::NonTransitiveRelation,
                        "pairwise relation relates members of distinct groups");
  return GroupPartition::from_groups(n, std::move(groups));
}

// Per-group membership counts |C cap G| of an item set C.
struct RepresentativeVector {
  std::vector<int> counts;
  bool operator==(const RepresentativeVector&) const = default;
};

inline RepresentativeVector representative_vector(const GroupPartition& p,
                                                  const std::vector<int>& items) {
  RepresentativeVector r;
  r.counts.assign(p.num_groups(), 0);
  for (int j : items) {
    if (j < 0 || j >= p.universe)
      throw Error(ErrorKind::UnknownItem, "item outside the partition universe");
    ++r.counts[p.group_of[j]];
  }
  return r;
}

// a >= b componentwise; the dominance order of representative vectors.
inline bool dominates(const RepresentativeVector& a, const RepresentativeVector& b) {
  if (a.counts.size() != b.counts.size()) return false;
  for (std::size_t g = 0; g < a.counts.size(); ++g)
    if (a.counts[g] < b.counts[g]) return false;
  return true;
}

}  // namespace symbd
