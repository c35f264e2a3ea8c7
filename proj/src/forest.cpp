#include "lssfind/forest.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "lssfind/parallel.hpp"

namespace lssfind {

std::int32_t default_mtry(std::size_t p) {
  return static_cast<std::int32_t>((p + 1) / 2);
}

double Forest::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.predict(x);
  return sum / static_cast<double>(trees.size());
}

Forest fit_forest(const Dataset& data, const ForestConfig& config) {
  data.validate();
  if (config.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (!config.flags.no_resampling) {
    throw std::invalid_argument("bootstrap/subsampling modes are not supported");
  }
  const std::int32_t p = static_cast<std::int32_t>(data.n_features());
  const std::int32_t mtry = config.mtry > 0 ? config.mtry : default_mtry(data.n_features());
  if (mtry < 1 || mtry > p) throw std::invalid_argument("mtry out of [1, p]");

  Forest forest;
  forest.n_features = p;
  forest.mtry = mtry;
  forest.rng_seed = config.seed;
  forest.min_node_size = config.min_node_size;
  forest.flags = config.flags;
  forest.feature_names = data.feature_names();
  forest.trees.resize(config.n_trees);

  TreeGrowthConfig tree_config;
  tree_config.mtry = mtry;
  tree_config.min_node_size = config.min_node_size;
  tree_config.flags = config.flags;

  parallel_for(static_cast<std::size_t>(config.n_trees), config.threads, [&](std::size_t t) {
    Rng rng(config.seed, static_cast<std::uint64_t>(t));
    forest.trees[t] = fit_tree(data, tree_config, rng);
  });
  return forest;
}

namespace {

constexpr const char* kForestSchema = "lssfind.forest/1";

}  // namespace

void save_forest(const Forest& forest, const std::string& path) {
  nlohmann::json doc;
  doc["schema"] = kForestSchema;
  doc["n_features"] = forest.n_features;
  doc["mtry"] = forest.mtry;
  doc["seed"] = forest.rng_seed;
  doc["min_node_size"] = forest.min_node_size;
  doc["constraints"] = {{"balanced_split", forest.flags.balanced_split},
                        {"no_resampling", forest.flags.no_resampling},
                        {"c_gamma", forest.flags.c_gamma}};
  doc["feature_names"] = forest.feature_names;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : forest.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({n.parent, n.left, n.right, n.feature, n.threshold, n.impurity_decrease,
                       n.depth, n.n_samples, n.mean_label});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  doc["trees"] = std::move(trees);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write forest file: " + path);
  out << doc.dump();
  out << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Forest load_forest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open forest file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("forest file is not valid JSON: " + std::string(e.what()));
  }
  if (doc.value("schema", "") != kForestSchema) {
    throw std::invalid_argument("unsupported forest schema in " + path);
  }

  Forest forest;
  forest.n_features = doc.at("n_features").get<std::int32_t>();
  forest.mtry = doc.at("mtry").get<std::int32_t>();
  forest.rng_seed = doc.at("seed").get<std::uint64_t>();
  forest.min_node_size = doc.value("min_node_size", 1);
  const auto& constraints = doc.at("constraints");
  forest.flags.balanced_split = constraints.at("balanced_split").get<bool>();
  forest.flags.no_resampling = constraints.at("no_resampling").get<bool>();
  forest.flags.c_gamma = constraints.at("c_gamma").get<double>();
  forest.feature_names = doc.at("feature_names").get<std::vector<std::string>>();

  for (const auto& jt : doc.at("trees")) {
    Tree tree;
    for (const auto& jn : jt.at("nodes")) {
      if (!jn.is_array() || jn.size() != 9) {
        throw std::invalid_argument("malformed tree node record in " + path);
      }
      TreeNode n;
      n.parent = jn[0].get<std::int32_t>();
      n.left = jn[1].get<std::int32_t>();
      n.right = jn[2].get<std::int32_t>();
      n.feature = jn[3].get<std::int32_t>();
      n.threshold = jn[4].get<double>();
      n.impurity_decrease = jn[5].get<double>();
      n.depth = jn[6].get<std::int32_t>();
      n.n_samples = jn[7].get<std::int32_t>();
      n.mean_label = jn[8].get<double>();
      tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw std::invalid_argument("tree without nodes in " + path);
    const auto n_nodes = static_cast<std::int32_t>(tree.nodes.size());
    for (std::int32_t i = 0; i < n_nodes; ++i) {
      const TreeNode& n = tree.nodes[i];
      // children always follow their parent in the node array
      const bool children_consistent =
          (n.left < 0) == (n.right < 0) && n.left < n_nodes && n.right < n_nodes &&
          (n.is_leaf() || (n.left > i && n.right > i));
      const bool feature_valid = n.is_leaf() || (n.feature >= 0 && n.feature < forest.n_features);
      if (!children_consistent || !feature_valid) {
        throw std::invalid_argument("inconsistent tree structure in " + path);
      }
    }
    forest.trees.push_back(std::move(tree));
  }
  if (forest.trees.empty()) throw std::invalid_argument("forest without trees in " + path);
  return forest;
}

}  // namespace lssfind
