#include "lssfind/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lssfind {

std::int32_t Tree::max_depth() const {
  std::int32_t d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

std::size_t Tree::n_leaves() const {
  std::size_t c = 0;
  for (const auto& node : nodes) c += node.is_leaf() ? 1 : 0;
  return c;
}

double Tree::kraft_sum() const {
  double s = 0.0;
  for (const auto& node : nodes) {
    if (node.is_leaf()) s += std::ldexp(1.0, -node.depth);
  }
  return s;
}

double Tree::predict(std::span<const double> x) const {
  std::int32_t i = 0;
  while (!nodes[i].is_leaf()) {
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  return nodes[i].mean_label;
}

namespace {

// Two-pass sum of squared deviations; exact zero for constant labels.
double sum_squared_deviations(std::span<const double> labels) {
  double sum = 0.0;
  for (double y : labels) sum += y;
  const double mean = sum / static_cast<double>(labels.size());
  double sse = 0.0;
  for (double y : labels) {
    const double d = y - mean;
    sse += d * d;
  }
  return sse;
}

}  // namespace

double node_impurity(std::span<const double> labels) {
  if (labels.empty()) throw std::invalid_argument("empty node");
  return sum_squared_deviations(labels) / static_cast<double>(labels.size());
}

double impurity_decrease(std::span<const double> node_labels, std::span<const double> left_labels,
                         std::span<const double> right_labels, std::size_t n_total) {
  if (left_labels.size() + right_labels.size() != node_labels.size() || left_labels.empty() ||
      right_labels.empty()) {
    throw std::invalid_argument("left/right do not partition the node");
  }
  if (n_total < node_labels.size()) throw std::invalid_argument("n_total smaller than node");
  double node_sum = 0.0, child_sum = 0.0;
  for (double y : node_labels) node_sum += y;
  for (double y : left_labels) child_sum += y;
  for (double y : right_labels) child_sum += y;
  const double scale = std::max(1.0, std::abs(node_sum));
  if (std::abs(node_sum - child_sum) > 1e-8 * scale) {
    throw std::invalid_argument("left/right labels do not match the node's labels");
  }
  const double n = static_cast<double>(n_total);
  return (static_cast<double>(node_labels.size()) / n) * node_impurity(node_labels) -
         (static_cast<double>(left_labels.size()) / n) * node_impurity(left_labels) -
         (static_cast<double>(right_labels.size()) / n) * node_impurity(right_labels);
}

namespace {

struct ScanBest {
  bool found = false;
  double gain = 0.0;  // (sum_l)^2/N_l + (sum_r)^2/N_r, constant terms dropped
};

// Midpoint that keeps lo on the left side under the "<=" convention even
// when rounding collapses the interval.
double interval_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid >= hi ? lo : mid;
}

bool balanced_ok(double theta, double lo, double hi, double c_gamma) {
  const double left = theta - lo;
  const double right = hi - theta;
  if (left <= 0.0 || right <= 0.0) return false;
  const double ratio = std::min(left / right, right / left);
  return ratio > c_gamma / (1.0 - c_gamma);
}

}  // namespace

std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::int32_t> samples,
                                         std::span<const std::int32_t> candidate_features,
                                         std::size_t n_total, const ConstraintFlags& flags,
                                         const NodeBox* box) {
  const std::size_t n_node = samples.size();
  if (n_node < 2) return std::nullopt;
  if (flags.balanced_split && box == nullptr) {
    throw std::invalid_argument("balanced-split mode needs the node cell");
  }

  std::vector<double> node_labels(n_node);
  for (std::size_t i = 0; i < n_node; ++i) node_labels[i] = data.labels()[samples[i]];
  if (node_impurity(node_labels) == 0.0) return std::nullopt;

  std::vector<std::pair<double, double>> value_label(n_node);
  std::vector<std::pair<std::int32_t, double>> champions;  // per-feature scan winner

  for (std::int32_t k : candidate_features) {
    for (std::size_t i = 0; i < n_node; ++i) {
      const std::int32_t row = samples[i];
      value_label[i] = {data.at(row, k), data.labels()[row]};
    }
    std::sort(value_label.begin(), value_label.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double total_sum = 0.0;
    for (const auto& vl : value_label) total_sum += vl.second;

    double left_sum = 0.0;
    ScanBest feature_best;
    double feature_threshold = 0.0;
    for (std::size_t i = 0; i + 1 < n_node; ++i) {
      left_sum += value_label[i].second;
      if (value_label[i].first == value_label[i + 1].first) continue;
      const double theta = interval_threshold(value_label[i].first, value_label[i + 1].first);
      if (flags.balanced_split && !balanced_ok(theta, box->lo[k], box->hi[k], flags.c_gamma)) {
        continue;
      }
      const double n_left = static_cast<double>(i + 1);
      const double n_right = static_cast<double>(n_node - i - 1);
      const double right_sum = total_sum - left_sum;
      const double gain = left_sum * left_sum / n_left + right_sum * right_sum / n_right;
      if (!feature_best.found || gain > feature_best.gain) {
        feature_best = {true, gain};
        feature_threshold = theta;
      }
    }
    if (feature_best.found) champions.emplace_back(k, feature_threshold);
  }

  // Champions are compared with the definition-level formula on partitions
  // built in sample order, so exact ties across features resolve the same way
  // as any re-evaluation of the partitions (lowest feature wins).
  std::optional<SplitCandidate> best;
  std::vector<double> left_labels, right_labels;
  for (const auto& [k, theta] : champions) {
    left_labels.clear();
    right_labels.clear();
    for (std::int32_t row : samples) {
      (data.at(row, k) <= theta ? left_labels : right_labels).push_back(data.labels()[row]);
    }
    if (left_labels.empty() || right_labels.empty()) continue;
    const double decrease = impurity_decrease(node_labels, left_labels, right_labels, n_total);
    if (!(decrease > 0.0)) continue;
    if (!best || decrease > best->impurity_decrease) {
      best = SplitCandidate{k, theta, decrease};
    }
  }
  return best;
}

namespace {

struct WorkItem {
  std::int32_t node_index;
  std::vector<std::int32_t> samples;
  NodeBox box;
};

}  // namespace

Tree fit_tree(const Dataset& data, const TreeGrowthConfig& config, Rng& rng) {
  data.validate();
  const std::int32_t p = static_cast<std::int32_t>(data.n_features());
  if (config.mtry < 1 || config.mtry > p) throw std::invalid_argument("mtry out of [1, p]");
  const std::size_t n_total = data.n_rows();

  Tree tree;
  tree.nodes.reserve(2 * n_total);

  std::vector<std::int32_t> feature_pool(p);
  std::iota(feature_pool.begin(), feature_pool.end(), 0);
  std::vector<std::int32_t> drawn;
  drawn.reserve(config.mtry);
  std::vector<double> scratch_labels;

  std::vector<WorkItem> stack;
  {
    std::vector<std::int32_t> all(n_total);
    std::iota(all.begin(), all.end(), 0);
    tree.nodes.emplace_back();
    tree.nodes[0].n_samples = static_cast<std::int32_t>(n_total);
    stack.push_back({0, std::move(all), NodeBox::unit(data.n_features())});
  }

  while (!stack.empty()) {
    WorkItem item = std::move(stack.back());
    stack.pop_back();
    const std::int32_t ni = item.node_index;
    const std::size_t n_node = item.samples.size();

    scratch_labels.resize(n_node);
    for (std::size_t i = 0; i < n_node; ++i) scratch_labels[i] = data.labels()[item.samples[i]];
    double sum = 0.0;
    for (double y : scratch_labels) sum += y;
    tree.nodes[ni].mean_label = sum / static_cast<double>(n_node);

    if (static_cast<std::int32_t>(n_node) <= config.min_node_size) continue;
    if (node_impurity(scratch_labels) == 0.0) continue;

    rng.draw_without_replacement(feature_pool, static_cast<std::size_t>(config.mtry), drawn);
    std::sort(drawn.begin(), drawn.end());
    const auto split =
        best_split(data, item.samples, drawn, n_total, config.flags, &item.box);
    if (!split) continue;

    std::vector<std::int32_t> left_samples, right_samples;
    left_samples.reserve(n_node);
    right_samples.reserve(n_node);
    for (std::int32_t row : item.samples) {
      (data.at(row, split->feature) <= split->threshold ? left_samples : right_samples)
          .push_back(row);
    }

    const std::int32_t li = static_cast<std::int32_t>(tree.nodes.size());
    const std::int32_t ri = li + 1;
    tree.nodes[ni].feature = split->feature;
    tree.nodes[ni].threshold = split->threshold;
    tree.nodes[ni].impurity_decrease = split->impurity_decrease;
    tree.nodes[ni].left = li;
    tree.nodes[ni].right = ri;

    TreeNode child;
    child.parent = ni;
    child.depth = tree.nodes[ni].depth + 1;
    child.n_samples = static_cast<std::int32_t>(left_samples.size());
    tree.nodes.push_back(child);
    child.n_samples = static_cast<std::int32_t>(right_samples.size());
    tree.nodes.push_back(child);

    NodeBox left_box = item.box;
    NodeBox right_box = std::move(item.box);
    left_box.hi[split->feature] = split->threshold;
    right_box.lo[split->feature] = split->threshold;

    // Right pushed first so the left child is processed next (preorder), which
    // pins the rng consumption order.
    stack.push_back({ri, std::move(right_samples), std::move(right_box)});
    stack.push_back({li, std::move(left_samples), std::move(left_box)});
  }
  return tree;
}

Path path_for_point(const Tree& tree, std::span<const double> x) {
  Path path;
  std::int32_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const TreeNode& node = tree.nodes[i];
    if (node.feature >= static_cast<std::int32_t>(x.size())) {
      throw std::invalid_argument("test point has fewer coordinates than the tree expects");
    }
    const bool go_left = x[node.feature] <= node.threshold;
    path.steps.push_back({node.feature, go_left ? std::int8_t{-1} : std::int8_t{+1},
                          node.impurity_decrease, node.depth});
    i = go_left ? node.left : node.right;
  }
  path.leaf_node = i;
  path.leaf_mean = tree.nodes[i].mean_label;
  return path;
}

}  // namespace lssfind
