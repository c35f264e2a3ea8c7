#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lssfind/dataset.hpp"
#include "lssfind/tree.hpp"

namespace lssfind {

struct ForestConfig {
  std::int32_t n_trees = 100;
  std::int32_t mtry = 0;  // 0 resolves to ceil(p/2)
  std::uint64_t seed = 0;
  std::int32_t min_node_size = 1;
  ConstraintFlags flags;
  int threads = 0;
};

// Immutable after training; safe to share across threads.
struct Forest {
  std::vector<Tree> trees;
  std::int32_t n_features = 0;
  std::int32_t mtry = 0;
  std::uint64_t rng_seed = 0;
  std::int32_t min_node_size = 1;
  ConstraintFlags flags;
  std::vector<std::string> feature_names;

  std::size_t n_trees() const { return trees.size(); }
  double predict(std::span<const double> x) const;
};

// Trains n_trees CART trees on the full dataset (assumption A4: no bootstrap
// or subsampling). Tree t draws its feature subsets from an independent rng
// stream derived from (seed, t), so the result is identical for any thread
// count.
Forest fit_forest(const Dataset& data, const ForestConfig& config);

std::int32_t default_mtry(std::size_t p);

// Versioned JSON serialization (schema "lssfind.forest/1"): per tree a node
// array [parent, left, right, feature, threshold, impurity_decrease, depth,
// n_samples, mean_label].
void save_forest(const Forest& forest, const std::string& path);
Forest load_forest(const std::string& path);

}  // namespace lssfind
