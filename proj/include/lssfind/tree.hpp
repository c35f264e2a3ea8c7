#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lssfind/dataset.hpp"
#include "lssfind/rng.hpp"
#include "lssfind/signed_interaction.hpp"

namespace lssfind {

struct SplitCandidate {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

// Node of a binary CART regression tree, stored in a flat array.
// Leaves have left == right == -1.
struct TreeNode {
  std::int32_t parent = -1;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
  std::int32_t depth = 0;
  std::int32_t n_samples = 0;
  double mean_label = 0.0;

  bool is_leaf() const { return left < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::int32_t max_depth() const;
  std::size_t n_leaves() const;
  // Sum over leaves of 2^(-depth); 1 for every full binary tree.
  double kraft_sum() const;
  double predict(std::span<const double> x) const;
};

// Enforcement toggles for the tree-ensemble assumptions. Balanced-split mode
// tracks node cells geometrically from the root cell [0,1]^p and rejects
// candidate splits whose child-volume ratio falls at or below
// c_gamma/(1 - c_gamma), so it expects features pre-scaled to [0,1].
struct ConstraintFlags {
  bool balanced_split = false;
  bool no_resampling = true;
  double c_gamma = 0.1;
};

struct TreeGrowthConfig {
  std::int32_t mtry = 1;
  std::int32_t min_node_size = 1;  // nodes with n_samples <= this become leaves
  ConstraintFlags flags;
};

// One internal node crossed by a root-to-leaf path.
struct PathStep {
  std::int32_t feature = -1;
  std::int8_t sign = -1;  // -1 when the path took the "<=" branch
  double impurity_decrease = 0.0;
  std::int32_t depth = 0;
};

struct Path {
  std::vector<PathStep> steps;  // root to leaf, one entry per internal node
  std::int32_t leaf_node = -1;
  double leaf_mean = 0.0;

  std::int32_t depth() const { return static_cast<std::int32_t>(steps.size()); }
};

// Population variance (divide by count) of the labels at a node.
// Throws std::invalid_argument on an empty vector.
double node_impurity(std::span<const double> labels);

// Weighted impurity decrease of a realized split:
//   (N_t/n) I(node) - (N_l/n) I(left) - (N_r/n) I(right),
// where n is the full training size. Throws if left/right do not partition
// the node's labels.
double impurity_decrease(std::span<const double> node_labels, std::span<const double> left_labels,
                         std::span<const double> right_labels, std::size_t n_total);

// Per-dimension bounds of a node's cell; needed only in balanced-split mode.
struct NodeBox {
  std::vector<double> lo;
  std::vector<double> hi;

  static NodeBox unit(std::size_t p) {
    return NodeBox{std::vector<double>(p, 0.0), std::vector<double>(p, 1.0)};
  }
};

// Maximizes the impurity decrease over the candidate features and the
// midpoints between consecutive distinct sorted values. Ties resolve to the
// lowest feature index, then the lowest threshold. Returns nullopt when no
// candidate yields a positive decrease (or all candidates are excluded by the
// balanced-split constraint).
std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::int32_t> samples,
                                         std::span<const std::int32_t> candidate_features,
                                         std::size_t n_total, const ConstraintFlags& flags,
                                         const NodeBox* box = nullptr);

// Recursive CART on the full dataset. At each node draws `mtry` features
// without replacement from `rng`, then splits via best_split. Terminates on
// singleton nodes (or min_node_size), zero impurity, or no valid split.
Tree fit_tree(const Dataset& data, const TreeGrowthConfig& config, Rng& rng);

// Unique root-to-leaf path containing x ("<= threshold" goes left, including
// exact ties).
Path path_for_point(const Tree& tree, std::span<const double> x);

}  // namespace lssfind
