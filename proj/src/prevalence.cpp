#include "lssfind/prevalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lssfind/parallel.hpp"
#include "lssfind/signed_paths.hpp"

namespace lssfind {

double PrevalenceTable::lookup(const SignedInteraction& s) const {
  if (s.empty()) return 1.0;
  const auto it = entries.find(s);
  return it == entries.end() ? 0.0 : it->second;
}

std::vector<std::pair<SignedInteraction, double>> PrevalenceTable::sorted_entries() const {
  std::vector<std::pair<SignedInteraction, double>> out(entries.begin(), entries.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

using Accumulator = std::unordered_map<SignedInteraction, double, SignedInteractionHash>;

// Adds `weight` to every nonempty subset (size <= s_max) of the signed
// features claimed along the current path.
void add_subsets(const std::vector<SignedFeature>& claimed, int s_max, double weight,
                 Accumulator& acc) {
  if (claimed.empty()) return;
  std::vector<SignedFeature> sorted = claimed;
  std::sort(sorted.begin(), sorted.end());
  for_each_subset_up_to(SignedInteraction(sorted), s_max,
                        [&](const SignedInteraction& s) { acc[s] += weight; });
}

// has_qual[i]: subtree rooted at i contains a split with decrease >= epsilon.
std::vector<char> qualifying_below(const Tree& tree, double epsilon) {
  std::vector<char> has_qual(tree.nodes.size(), 0);
  for (std::size_t i = tree.nodes.size(); i-- > 0;) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) continue;
    has_qual[i] = (node.impurity_decrease >= epsilon) || has_qual[node.left] ||
                  has_qual[node.right];
  }
  return has_qual;
}

void dwp_walk(const Tree& tree, const std::vector<char>& has_qual, double epsilon, int s_max,
              std::int32_t node_index, std::vector<SignedFeature>& claimed,
              std::vector<char>& feature_seen, Accumulator& acc) {
  const TreeNode& node = tree.nodes[node_index];
  if (node.is_leaf() || !has_qual[node_index]) {
    // All leaves below share the claimed set; their Kraft masses total
    // 2^(-depth) of this node.
    add_subsets(claimed, s_max, std::ldexp(1.0, -node.depth), acc);
    return;
  }
  // The first occurrence of a feature owns it for the rest of the path; it
  // joins the signed set only if its own decrease qualifies.
  const bool first_use = !feature_seen[node.feature];
  const bool claims = first_use && node.impurity_decrease >= epsilon;
  if (first_use) feature_seen[node.feature] = 1;
  for (int side = 0; side < 2; ++side) {
    if (claims) {
      claimed.push_back({node.feature, side == 0 ? std::int8_t{-1} : std::int8_t{+1}});
    }
    dwp_walk(tree, has_qual, epsilon, s_max, side == 0 ? node.left : node.right, claimed,
             feature_seen, acc);
    if (claims) claimed.pop_back();
  }
  if (first_use) feature_seen[node.feature] = 0;
}

void check_inputs(const Forest& forest, double epsilon, int s_max) {
  if (forest.trees.empty()) throw std::invalid_argument("empty forest");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  if (s_max < 1) throw std::invalid_argument("s_max must be >= 1");
}

}  // namespace

PrevalenceTable compute_dwp(const Forest& forest, double epsilon, int s_max, int threads) {
  check_inputs(forest, epsilon, s_max);
  const std::size_t n_trees = forest.trees.size();
  std::vector<Accumulator> per_tree(n_trees);
  parallel_for(n_trees, threads, [&](std::size_t t) {
    const Tree& tree = forest.trees[t];
    const std::vector<char> has_qual = qualifying_below(tree, epsilon);
    std::vector<SignedFeature> claimed;
    std::vector<char> feature_seen(forest.n_features, 0);
    dwp_walk(tree, has_qual, epsilon, s_max, 0, claimed, feature_seen, per_tree[t]);
  });

  PrevalenceTable table;
  table.kind = PrevalenceKind::kDwp;
  table.epsilon = epsilon;
  table.s_max = s_max;
  table.n_trees = static_cast<int>(n_trees);
  // Merge strictly in tree order so the floating-point sums are identical for
  // every thread count.
  for (std::size_t t = 0; t < n_trees; ++t) {
    for (const auto& [key, weight] : per_tree[t]) table.entries[key] += weight;
    per_tree[t].clear();
  }
  const double inv = 1.0 / static_cast<double>(n_trees);
  for (auto& [key, value] : table.entries) value *= inv;
  return table;
}

PrevalenceTable compute_pp(const Forest& forest, std::span<const double> x_test, double epsilon,
                           int s_max) {
  check_inputs(forest, epsilon, s_max);
  if (static_cast<std::int32_t>(x_test.size()) != forest.n_features) {
    throw std::invalid_argument("test point has " + std::to_string(x_test.size()) +
                                " coordinates, forest expects " +
                                std::to_string(forest.n_features));
  }
  std::unordered_map<SignedInteraction, std::int64_t, SignedInteractionHash> counts;
  for (const Tree& tree : forest.trees) {
    const Path path = path_for_point(tree, x_test);
    const SignedInteraction sset = extract_signed_set(path, epsilon);
    for_each_subset_up_to(sset, s_max, [&](const SignedInteraction& s) { counts[s] += 1; });
  }
  PrevalenceTable table;
  table.kind = PrevalenceKind::kPp;
  table.epsilon = epsilon;
  table.s_max = s_max;
  table.n_trees = static_cast<int>(forest.trees.size());
  const double inv = 1.0 / static_cast<double>(forest.trees.size());
  for (const auto& [key, count] : counts) {
    table.entries.emplace(key, static_cast<double>(count) * inv);
  }
  return table;
}

PrevalenceTable monte_carlo_dwp(const Forest& forest, double epsilon, int s_max,
                                std::size_t n_walks, Rng& rng) {
  check_inputs(forest, epsilon, s_max);
  if (n_walks < 1) throw std::invalid_argument("n_walks must be >= 1");
  std::unordered_map<SignedInteraction, std::int64_t, SignedInteractionHash> counts;
  std::vector<SignedFeature> claimed;
  std::vector<char> feature_seen(forest.n_features, 0);
  for (std::size_t w = 0; w < n_walks; ++w) {
    const Tree& tree = forest.trees[rng.below(forest.trees.size())];
    claimed.clear();
    std::fill(feature_seen.begin(), feature_seen.end(), 0);
    std::int32_t i = 0;
    while (!tree.nodes[i].is_leaf()) {
      const TreeNode& node = tree.nodes[i];
      const bool go_left = (rng.next_u64() & 1u) == 0;
      if (!feature_seen[node.feature]) {
        feature_seen[node.feature] = 1;
        if (node.impurity_decrease >= epsilon) {
          claimed.push_back({node.feature, go_left ? std::int8_t{-1} : std::int8_t{+1}});
        }
      }
      i = go_left ? node.left : node.right;
    }
    if (claimed.empty()) continue;
    std::vector<SignedFeature> sorted = claimed;
    std::sort(sorted.begin(), sorted.end());
    for_each_subset_up_to(SignedInteraction(sorted), s_max,
                          [&](const SignedInteraction& s) { counts[s] += 1; });
  }
  PrevalenceTable table;
  table.kind = PrevalenceKind::kDwp;
  table.epsilon = epsilon;
  table.s_max = s_max;
  table.n_trees = static_cast<int>(forest.trees.size());
  const double inv = 1.0 / static_cast<double>(n_walks);
  for (const auto& [key, count] : counts) {
    table.entries.emplace(key, static_cast<double>(count) * inv);
  }
  return table;
}

void write_prevalence_csv(const PrevalenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write prevalence CSV: " + path);
  out << "interaction,size,value,scaled_value,kind\n";
  const char* kind = table.kind == PrevalenceKind::kDwp ? "DWP" : "PP";
  char buf[40];
  for (const auto& [key, value] : table.sorted_entries()) {
    const double scaled =
        table.kind == PrevalenceKind::kDwp ? std::ldexp(value, static_cast<int>(key.size())) : value;
    out << key.to_string() << ',' << key.size() << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", scaled);
    out << buf << ',' << kind << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lssfind
