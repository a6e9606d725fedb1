#include <catch2/catch_amalgamated.hpp>

#include "symbd/partition.hpp"
#include "symbd/rng.hpp"

using namespace symbd;

TEST_CASE("partition construction validates disjoint cover") {
  auto p = GroupPartition::from_groups(3, {{0, 2}, {1}});
  REQUIRE(p.num_groups() == 2);
  REQUIRE(p.group_of[0] == 0);
  REQUIRE(p.group_of[2] == 0);
  REQUIRE(p.group_of[1] == 1);

  REQUIRE_THROWS_AS(GroupPartition::from_groups(3, {{0, 1}, {1, 2}}), Error);
  REQUIRE_THROWS_AS(GroupPartition::from_groups(3, {{0, 1}}), Error);
  REQUIRE_THROWS_AS(GroupPartition::from_groups(3, {{0, 1}, {2, 5}}), Error);
}

TEST_CASE("representative vectors count per-group membership") {
  auto p = GroupPartition::from_groups(3, {{0, 2}, {1}});
  REQUIRE(representative_vector(p, {0, 1}).counts == std::vector<int>{1, 1});
  REQUIRE(representative_vector(p, {0, 2}).counts == std::vector<int>{2, 0});
  REQUIRE(representative_vector(p, {}).counts == std::vector<int>{0, 0});
  REQUIRE_THROWS_MATCHES(representative_vector(p, {7}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind == ErrorKind::UnknownItem; }));
}

TEST_CASE("dominance order") {
  RepresentativeVector a{{2, 1}}, b{{2, 0}}, c{{1, 3}};
  REQUIRE(dominates(a, b));
  REQUIRE_FALSE(dominates(b, a));
  REQUIRE_FALSE(dominates(c, b));
  REQUIRE(dominates(a, a));
}

TEST_CASE("supersets dominate") {
  SplitMix64 rng(0x9A17u);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    std::vector<std::vector<int>> groups;
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;
    rng.shuffle(perm);
    for (int j = 0; j < n;) {
      const int take = 1 + static_cast<int>(rng.below(3));
      std::vector<int> g;
      for (int t = 0; t < take && j < n; ++t) g.push_back(perm[j++]);
      groups.push_back(std::move(g));
    }
    const auto p = GroupPartition::from_groups(n, std::move(groups));
    std::vector<int> base;
    for (int j = 0; j < n; ++j)
      if (rng.below(2)) base.push_back(j);
    int extra = static_cast<int>(rng.below(n));
    std::vector<int> super = base;
    if (std::find(super.begin(), super.end(), extra) == super.end()) super.push_back(extra);
    const auto rb = representative_vector(p, base);
    const auto rs = representative_vector(p, super);
    REQUIRE(dominates(rs, rb));
    int total = 0;
    for (int c : rb.counts) total += c;
    REQUIRE(total == static_cast<int>(base.size()));
  }
}
