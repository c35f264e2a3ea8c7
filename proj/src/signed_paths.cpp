#include "lssfind/signed_paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lssfind {

SignedInteraction extract_signed_set(const Path& path, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  // A feature is represented by its first occurrence on the path; that node's
  // decrease alone decides whether the signed feature qualifies. A later
  // above-threshold reuse of the feature never replaces a first occurrence
  // that failed the test (this keeps the set monotone in epsilon).
  std::vector<std::int32_t> seen;
  std::vector<SignedFeature> members;
  for (const PathStep& step : path.steps) {
    if (std::find(seen.begin(), seen.end(), step.feature) != seen.end()) continue;
    seen.push_back(step.feature);
    if (step.impurity_decrease >= epsilon) members.push_back({step.feature, step.sign});
  }
  return SignedInteraction(std::move(members));
}

namespace {

void walk(const Tree& tree, std::int32_t node_index, Path& path,
          const std::function<void(const Path&, double)>& fn) {
  const TreeNode& node = tree.nodes[node_index];
  if (node.is_leaf()) {
    path.leaf_node = node_index;
    path.leaf_mean = node.mean_label;
    fn(path, std::ldexp(1.0, -node.depth));
    return;
  }
  path.steps.push_back({node.feature, std::int8_t{-1}, node.impurity_decrease, node.depth});
  walk(tree, node.left, path, fn);
  path.steps.back().sign = +1;
  walk(tree, node.right, path, fn);
  path.steps.pop_back();
}

}  // namespace

void for_each_path(const Tree& tree, const std::function<void(const Path&, double)>& fn) {
  if (tree.nodes.empty()) throw std::invalid_argument("tree has no nodes");
  Path path;
  walk(tree, 0, path, fn);
}

std::vector<std::pair<Path, double>> enumerate_paths(const Tree& tree) {
  std::vector<std::pair<Path, double>> out;
  for_each_path(tree, [&](const Path& path, double weight) { out.emplace_back(path, weight); });
  return out;
}

void for_each_subset_up_to(const SignedInteraction& interaction, int s_max,
                           const std::function<void(const SignedInteraction&)>& fn) {
  if (s_max < 1) throw std::invalid_argument("s_max must be >= 1");
  const auto& members = interaction.members();
  const int m = static_cast<int>(members.size());
  const int max_size = std::min(s_max, m);
  std::vector<int> idx;
  std::vector<SignedFeature> chosen;
  for (int size = 1; size <= max_size; ++size) {
    idx.resize(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      chosen.clear();
      for (int i : idx) chosen.push_back(members[i]);
      fn(SignedInteraction(chosen));
      // next combination in lexicographic order
      int i = size - 1;
      while (i >= 0 && idx[i] == m - size + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

std::vector<SignedInteraction> subsets_up_to(const SignedInteraction& interaction, int s_max) {
  std::vector<SignedInteraction> out;
  for_each_subset_up_to(interaction, s_max,
                        [&](const SignedInteraction& s) { out.push_back(s); });
  return out;
}

}  // namespace lssfind
