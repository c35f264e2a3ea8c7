#include "lssfind/signed_paths.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"

using namespace lssfind;

namespace {

Path make_path(std::initializer_list<std::tuple<int, int, double>> steps) {
  Path path;
  int depth = 0;
  for (const auto& [feature, sign, decrease] : steps) {
    path.steps.push_back({feature, static_cast<std::int8_t>(sign), decrease, depth++});
  }
  return path;
}

Path random_path(Rng& rng, int p, int max_len) {
  Path path;
  const int len = static_cast<int>(rng.below(max_len + 1));
  for (int d = 0; d < len; ++d) {
    path.steps.push_back({static_cast<std::int32_t>(rng.below(p)),
                          rng.uniform01() < 0.5 ? std::int8_t{-1} : std::int8_t{+1},
                          0.2 * rng.uniform01(), d});
  }
  return path;
}

}  // namespace

TEST_CASE("extract_signed_set filters by epsilon and keeps first occurrences") {
  // All decreases below threshold: empty set.
  const Path faint = make_path({{0, -1, 0.001}, {1, +1, 0.002}});
  CHECK(extract_signed_set(faint, 0.01).empty());

  // Feature repeated with opposite signs: the first occurrence wins.
  const Path repeated = make_path({{2, -1, 0.3}, {5, +1, 0.2}, {2, +1, 0.25}});
  const auto repeated_set = extract_signed_set(repeated, 0.1);
  CHECK(repeated_set == testsupport::interaction({{2, -1}, {5, +1}}));
  CHECK(repeated_set.contains({2, -1}));
  CHECK_FALSE(repeated_set.contains({2, +1}));

  // A later qualifying reuse does not rescue a first occurrence that failed.
  const Path unrescued = make_path({{2, -1, 0.05}, {2, +1, 0.25}});
  CHECK(extract_signed_set(unrescued, 0.1).empty());

  // Spec-style filter: nodes (1,-,0.3), (2,+,0.005), (4,-,0.2) at eps 0.01.
  const Path mixed = make_path({{0, -1, 0.3}, {1, +1, 0.005}, {3, -1, 0.2}});
  CHECK(extract_signed_set(mixed, 0.01) == testsupport::interaction({{0, -1}, {3, -1}}));
}

TEST_CASE("extract_signed_set is monotone in epsilon") {
  Rng rng(404);
  for (int rep = 0; rep < 100; ++rep) {
    const Path path = random_path(rng, 6, 12);
    const double eps1 = 0.2 * rng.uniform01();
    const double eps2 = eps1 + 0.2 * rng.uniform01();
    const auto strict = extract_signed_set(path, eps2);
    const auto loose = extract_signed_set(path, eps1);
    CHECK(strict.subset_of(loose));

    // No duplicate features in any extraction.
    std::set<int> seen;
    for (const auto& sf : loose.members()) CHECK(seen.insert(sf.feature).second);
  }
}

TEST_CASE("enumerate_paths yields Kraft-weighted paths") {
  SUBCASE("single leaf") {
    Tree tree;
    tree.nodes.emplace_back();
    const auto paths = enumerate_paths(tree);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].second == 1.0);
    CHECK(paths[0].first.depth() == 0);
  }

  SUBCASE("depth-one tree") {
    Rng rng(1);
    const Forest forest = testsupport::random_synthetic_forest(1, 2, 1, rng, 1.0);
    const auto paths = enumerate_paths(forest.trees[0]);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].second == 0.5);
    CHECK(paths[1].second == 0.5);
    CHECK(paths[0].first.steps[0].sign == -1);
    CHECK(paths[1].first.steps[0].sign == +1);
  }

  SUBCASE("leaf depths 1,2,2 give weights 1/2,1/4,1/4") {
    Tree tree;
    tree.nodes.resize(5);
    tree.nodes[0].feature = 0;
    tree.nodes[0].threshold = 0.5;
    tree.nodes[0].left = 1;
    tree.nodes[0].right = 2;
    tree.nodes[1].depth = tree.nodes[2].depth = 1;
    tree.nodes[2].feature = 1;
    tree.nodes[2].threshold = 0.7;
    tree.nodes[2].left = 3;
    tree.nodes[2].right = 4;
    tree.nodes[3].depth = tree.nodes[4].depth = 2;
    const auto paths = enumerate_paths(tree);
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].second == 0.5);
    CHECK(paths[1].second == 0.25);
    CHECK(paths[2].second == 0.25);
  }

  SUBCASE("weights sum to one on random trees") {
    Rng rng(88);
    for (int rep = 0; rep < 20; ++rep) {
      const Forest forest = testsupport::random_synthetic_forest(1, 4, 8, rng);
      double total = 0.0;
      for (const auto& [path, weight] : enumerate_paths(forest.trees[0])) total += weight;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("subsets_up_to enumerates the canonical lattice slice") {
  const auto single = testsupport::interaction({{0, -1}});
  const auto subs1 = subsets_up_to(single, 3);
  REQUIRE(subs1.size() == 1);
  CHECK(subs1[0] == single);

  const auto pair = testsupport::interaction({{0, -1}, {1, +1}});
  const auto subs2 = subsets_up_to(pair, 1);
  REQUIRE(subs2.size() == 2);
  CHECK(subs2[0] == testsupport::interaction({{0, -1}}));
  CHECK(subs2[1] == testsupport::interaction({{1, +1}}));

  const auto triple = testsupport::interaction({{0, -1}, {1, +1}, {2, -1}});
  CHECK(subsets_up_to(triple, 2).size() == 6);

  CHECK_THROWS_AS(subsets_up_to(pair, 0), std::invalid_argument);
}

TEST_CASE("subset counts match the binomial identity") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(6));
    std::vector<SignedFeature> members;
    for (int i = 0; i < m; ++i) {
      members.push_back({i, rng.uniform01() < 0.5 ? std::int8_t{-1} : std::int8_t{+1}});
    }
    const SignedInteraction s(members);
    const int s_max = 1 + static_cast<int>(rng.below(4));
    double expected = 0.0;
    for (int i = 1; i <= std::min(s_max, m); ++i) {
      double c = 1.0;
      for (int j = 0; j < i; ++j) c = c * (m - j) / (j + 1);
      expected += c;
    }
    const auto subs = subsets_up_to(s, s_max);
    CHECK(static_cast<double>(subs.size()) == expected);
    // canonical and duplicate-free
    std::set<std::string> texts;
    for (const auto& sub : subs) {
      CHECK(sub.subset_of(s));
      CHECK(texts.insert(sub.to_string()).second);
    }
  }
}

TEST_CASE("signed interaction text form is 1-based") {
  const auto s = testsupport::interaction({{2, -1}, {6, +1}, {11, -1}});
  CHECK(s.to_string() == "3-,7+,12-");
  CHECK(SignedInteraction::from_string("3-,7+,12-") == s);
  CHECK(SignedInteraction::from_string("{}").empty());
  CHECK(SignedInteraction::from_string("7+,3-,12-") == s);  // order normalizes
  CHECK_THROWS_AS(SignedInteraction::from_string("3"), std::invalid_argument);
  CHECK_THROWS_AS(SignedInteraction::from_string("0-"), std::invalid_argument);
  CHECK_THROWS_AS(SignedInteraction::from_string("3-,3+"), std::invalid_argument);
}

TEST_CASE("interactions with both signs of one feature are rejected") {
  CHECK_THROWS_AS(testsupport::interaction({{1, -1}, {1, +1}}), std::invalid_argument);
  // duplicates of the identical member collapse silently
  CHECK(testsupport::interaction({{1, -1}, {1, -1}}).size() == 1);
}
