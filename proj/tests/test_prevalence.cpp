#include "lssfind/prevalence.hpp"

#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace lssfind;

namespace {

// Root splits feature 0 (decrease 0.30); the right child splits feature 1
// (decrease 0.20) into two leaves. Leaf depths {1, 2, 2}.
Tree three_leaf_tree() {
  Tree tree;
  tree.nodes.resize(5);
  tree.nodes[0].feature = 0;
  tree.nodes[0].threshold = 0.5;
  tree.nodes[0].impurity_decrease = 0.30;
  tree.nodes[0].left = 1;
  tree.nodes[0].right = 2;
  tree.nodes[1].parent = tree.nodes[2].parent = 0;
  tree.nodes[1].depth = tree.nodes[2].depth = 1;
  tree.nodes[2].feature = 1;
  tree.nodes[2].threshold = 0.4;
  tree.nodes[2].impurity_decrease = 0.20;
  tree.nodes[2].left = 3;
  tree.nodes[2].right = 4;
  tree.nodes[3].parent = tree.nodes[4].parent = 2;
  tree.nodes[3].depth = tree.nodes[4].depth = 2;
  return tree;
}

Forest three_leaf_forest() {
  Forest forest;
  forest.n_features = 2;
  forest.mtry = 2;
  forest.trees.push_back(three_leaf_tree());
  forest.feature_names = {"x1", "x2"};
  return forest;
}

Forest single_leaf_forest(int n_trees) {
  Forest forest;
  forest.n_features = 2;
  forest.mtry = 2;
  for (int t = 0; t < n_trees; ++t) {
    Tree tree;
    tree.nodes.emplace_back();
    forest.trees.push_back(std::move(tree));
  }
  forest.feature_names = {"x1", "x2"};
  return forest;
}

}  // namespace

TEST_CASE("compute_dwp on the three-leaf tree") {
  const Forest forest = three_leaf_forest();

  SUBCASE("all splits qualify") {
    const PrevalenceTable table = compute_dwp(forest, 0.01, 2);
    CHECK(table.lookup(testsupport::interaction({{0, -1}})) == 0.5);
    CHECK(table.lookup(testsupport::interaction({{0, +1}})) == 0.5);
    CHECK(table.lookup(testsupport::interaction({{0, +1}, {1, -1}})) == 0.25);
    CHECK(table.lookup(testsupport::interaction({{1, -1}})) == 0.25);
    CHECK(table.lookup(testsupport::interaction({{1, +1}})) == 0.25);
    CHECK(table.lookup(testsupport::interaction({{0, -1}, {1, -1}})) == 0.0);
  }

  SUBCASE("epsilon above the second split removes its pairs") {
    const PrevalenceTable table = compute_dwp(forest, 0.25, 2);
    CHECK(table.lookup(testsupport::interaction({{0, +1}, {1, -1}})) == 0.0);
    CHECK(table.lookup(testsupport::interaction({{1, -1}})) == 0.0);
    CHECK(table.lookup(testsupport::interaction({{0, -1}})) == 0.5);
    CHECK(table.lookup(testsupport::interaction({{0, +1}})) == 0.5);
  }

  SUBCASE("single-leaf forest produces an empty table") {
    const PrevalenceTable table = compute_dwp(single_leaf_forest(3), 0.01, 2);
    CHECK(table.entries.empty());
  }
}

TEST_CASE("compute_pp counts path containment per tree") {
  SUBCASE("single tree, point descending left at the root") {
    const Forest forest = three_leaf_forest();
    const std::vector<double> x{0.2, 0.9};
    const PrevalenceTable table = compute_pp(forest, x, 0.01, 2);
    CHECK(table.lookup(testsupport::interaction({{0, -1}})) == 1.0);
    CHECK(table.lookup(testsupport::interaction({{0, +1}})) == 0.0);
  }

  SUBCASE("three of four trees qualify") {
    Forest forest;
    forest.n_features = 2;
    forest.mtry = 2;
    forest.feature_names = {"x1", "x2"};
    for (int t = 0; t < 4; ++t) {
      Tree tree;
      tree.nodes.resize(3);
      tree.nodes[0].feature = 1;
      tree.nodes[0].threshold = 0.5;
      tree.nodes[0].impurity_decrease = t == 0 ? 0.001 : 0.3;  // one below epsilon
      tree.nodes[0].left = 1;
      tree.nodes[0].right = 2;
      tree.nodes[1].parent = tree.nodes[2].parent = 0;
      tree.nodes[1].depth = tree.nodes[2].depth = 1;
      forest.trees.push_back(std::move(tree));
    }
    const std::vector<double> x{0.1, 0.7};
    const PrevalenceTable table = compute_pp(forest, x, 0.01, 2);
    CHECK(table.lookup(testsupport::interaction({{1, +1}})) == 0.75);
  }

  SUBCASE("single-leaf forest gives an empty table") {
    const std::vector<double> x{0.1, 0.7};
    CHECK(compute_pp(single_leaf_forest(2), x, 0.01, 2).entries.empty());
  }

  SUBCASE("dimension mismatch throws") {
    const Forest forest = three_leaf_forest();
    CHECK_THROWS_AS(compute_pp(forest, std::vector<double>{0.5}, 0.01, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("lookup conventions") {
  PrevalenceTable table;
  table.entries.emplace(testsupport::interaction({{0, -1}}), 0.5);
  CHECK(table.lookup(testsupport::interaction({{0, -1}})) == 0.5);
  CHECK(table.lookup(testsupport::interaction({{3, +1}})) == 0.0);
  CHECK(table.lookup(SignedInteraction{}) == 1.0);
}

TEST_CASE("compute_dwp equals definition-level brute force on synthetic forests") {
  Rng rng(2025);
  for (int rep = 0; rep < 8; ++rep) {
    const int p = 2 + static_cast<int>(rng.below(3));
    const Forest forest =
        testsupport::random_synthetic_forest(1 + static_cast<int>(rng.below(5)), p, 5, rng);
    const double epsilon = 0.02 + 0.1 * rng.uniform01();
    const int s_max = 1 + static_cast<int>(rng.below(3));
    const PrevalenceTable table = compute_dwp(forest, epsilon, s_max);
    for (const auto& candidate : testsupport::full_lattice(p, s_max)) {
      const double expected = testsupport::brute_force_dwp(forest, candidate, epsilon);
      CHECK(table.lookup(candidate) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("prevalence tables are subset-monotone") {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const Forest forest = testsupport::random_synthetic_forest(3, 4, 6, rng);
    const PrevalenceTable dwp = compute_dwp(forest, 0.05, 3);
    std::vector<double> x{rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
    const PrevalenceTable pp = compute_pp(forest, x, 0.05, 3);
    for (const PrevalenceTable* table : {&dwp, &pp}) {
      for (const auto& [key, value] : table->entries) {
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
        for (const auto& sub : subsets_up_to(key, static_cast<int>(key.size()))) {
          CHECK(table->lookup(sub) >= value);
        }
      }
    }
    // PP values are multiples of 1/n_trees.
    for (const auto& [key, value] : pp.entries) {
      const double scaled = value * 3.0;
      CHECK(std::abs(scaled - std::round(scaled)) <= 1e-12);
    }
  }
}

TEST_CASE("monte_carlo_dwp approximates the exact table") {
  const Forest forest = three_leaf_forest();
  Rng rng(606);
  const std::size_t n_walks = 100000;
  const PrevalenceTable mc = monte_carlo_dwp(forest, 0.01, 2, n_walks, rng);
  const PrevalenceTable exact = compute_dwp(forest, 0.01, 2);
  const double bound = 3.0 * std::sqrt(0.25 / static_cast<double>(n_walks));
  for (const auto& [key, value] : exact.entries) {
    CHECK(std::abs(mc.lookup(key) - value) <= bound);
  }

  Rng rng_a(7), rng_b(7);
  const PrevalenceTable a = monte_carlo_dwp(forest, 0.01, 2, 1000, rng_a);
  const PrevalenceTable b = monte_carlo_dwp(forest, 0.01, 2, 1000, rng_b);
  REQUIRE(a.entries.size() == b.entries.size());
  for (const auto& [key, value] : a.entries) CHECK(b.lookup(key) == value);
}

TEST_CASE("compute_dwp is identical for any thread count") {
  Rng rng(98);
  const Forest forest = testsupport::random_synthetic_forest(16, 4, 7, rng);
  const PrevalenceTable t1 = compute_dwp(forest, 0.03, 3, 1);
  const PrevalenceTable t4 = compute_dwp(forest, 0.03, 3, 4);
  REQUIRE(t1.entries.size() == t4.entries.size());
  for (const auto& [key, value] : t1.entries) CHECK(t4.lookup(key) == value);
}
