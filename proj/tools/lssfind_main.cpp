// Command-line front end: train, explain, simulate, evaluate.
// Exit codes: 0 success, 2 input error, 3 internal error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lssfind/dataset.hpp"
#include "lssfind/evaluation.hpp"
#include "lssfind/explain.hpp"
#include "lssfind/forest.hpp"
#include "lssfind/lss_sim.hpp"
#include "lssfind/parallel.hpp"
#include "lssfind/prevalence.hpp"
#include "lssfind/signed_paths.hpp"

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

using nlohmann::json;

std::string format6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct GlobalOptions {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out_dir = ".";
  std::string config_path;
};

// Defaults that --config may override; explicit flags still win.
struct Defaults {
  double epsilon = 0.01;
  double eta_dwp = 0.01;
  double eta_pp = 0.01;
  int s_max = 3;
  int n_trees = 500;
  int mtry = 0;
  int min_node_size = 1;
  int top_k = 10;

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
    }
    epsilon = doc.value("epsilon", epsilon);
    eta_dwp = doc.value("eta_dwp", eta_dwp);
    eta_pp = doc.value("eta_pp", eta_pp);
    s_max = doc.value("s_max", s_max);
    n_trees = doc.value("trees", n_trees);
    mtry = doc.value("mtry", mtry);
    min_node_size = doc.value("min_node_size", min_node_size);
    top_k = doc.value("top_k", top_k);
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const std::string& primary_output, const std::string& subcommand,
                    const GlobalOptions& global, const json& inputs, const json& outputs,
                    const json& config, double elapsed_seconds, const std::string& started) {
  json doc;
  doc["schema"] = "lssfind.manifest/1";
  doc["artifact_version"] = kArtifactVersion;
  doc["subcommand"] = subcommand;
  doc["seed"] = global.seed;
  doc["threads_requested"] = global.threads;
  doc["inputs"] = inputs;
  doc["outputs"] = outputs;
  doc["config"] = config;
  doc["wall_clock"] = {{"started_utc", started}, {"elapsed_seconds", elapsed_seconds}};
  const std::string path = primary_output + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << doc.dump(2) << '\n';
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(pos, end - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad coordinate '" + tok + "' in --point");
    }
    pos = end + 1;
  }
  return out;
}

// Test points from a CSV whose feature columns match the forest's, with an
// optional label column to drop.
std::vector<std::vector<double>> read_points_csv(const std::string& path,
                                                 const lssfind::Forest& forest,
                                                 const std::string& drop_column) {
  lssfind::Dataset data = [&] {
    if (!drop_column.empty()) return lssfind::read_csv(path, drop_column);
    // No label column: append a synthetic one so the dataset reader can run.
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open points CSV: " + path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string tmp = path + ".with_label.tmp";
    {
      std::ofstream out(tmp);
      std::size_t line_end = content.find('\n');
      if (line_end == std::string::npos) line_end = content.size();
      out << content.substr(0, line_end) << ",__label__\n";
      std::size_t pos = line_end + 1;
      while (pos < content.size()) {
        std::size_t next = content.find('\n', pos);
        if (next == std::string::npos) next = content.size();
        const std::string row = content.substr(pos, next - pos);
        if (!row.empty() && row != "\r") out << row << ",0\n";
        pos = next + 1;
      }
    }
    lssfind::Dataset d = lssfind::read_csv(tmp, "__label__");
    std::remove(tmp.c_str());
    return d;
  }();
  if (static_cast<std::int32_t>(data.n_features()) != forest.n_features) {
    throw std::invalid_argument("points CSV has " + std::to_string(data.n_features()) +
                                " feature columns, forest expects " +
                                std::to_string(forest.n_features));
  }
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    if (data.feature_names()[j] != forest.feature_names[j]) {
      throw std::invalid_argument("points CSV column '" + data.feature_names()[j] +
                                  "' does not match forest feature '" +
                                  forest.feature_names[j] + "' at position " + std::to_string(j));
    }
  }
  std::vector<std::vector<double>> points(data.n_rows(), std::vector<double>(data.n_features()));
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    for (std::size_t j = 0; j < data.n_features(); ++j) points[i][j] = data.at(i, j);
  }
  return points;
}

int cmd_train(const GlobalOptions& global, const Defaults& defaults, const std::string& csv_path,
              const std::string& label_column, int mtry, int n_trees, int min_node_size,
              bool balanced_split, double c_gamma, const std::string& out_path) {
  Stopwatch watch;
  const std::string started = utc_now();
  const lssfind::Dataset data = lssfind::read_csv(csv_path, label_column);

  lssfind::ForestConfig config;
  config.n_trees = n_trees > 0 ? n_trees : defaults.n_trees;
  config.mtry = mtry >= 0 ? mtry : defaults.mtry;
  config.seed = global.seed;
  config.min_node_size = min_node_size > 0 ? min_node_size : defaults.min_node_size;
  config.flags.balanced_split = balanced_split;
  config.flags.c_gamma = c_gamma;
  config.threads = global.threads;
  const lssfind::Forest forest = lssfind::fit_forest(data, config);

  const std::string forest_path =
      out_path.empty() ? join_path(global.out_dir, "forest.json") : out_path;
  lssfind::save_forest(forest, forest_path);

  std::int32_t depth_min = forest.trees[0].max_depth(), depth_max = 0;
  double depth_sum = 0.0;
  for (const auto& tree : forest.trees) {
    const std::int32_t d = tree.max_depth();
    depth_min = std::min(depth_min, d);
    depth_max = std::max(depth_max, d);
    depth_sum += d;
  }
  std::cout << "trained " << forest.n_trees() << " trees on n=" << data.n_rows()
            << " p=" << data.n_features() << " (mtry=" << forest.mtry << ")\n";
  std::cout << "tree depth min/mean/max: " << depth_min << "/"
            << format6(depth_sum / static_cast<double>(forest.n_trees())) << "/" << depth_max
            << "\n";
  std::cout << "forest written to " << forest_path << "\n";

  write_manifest(forest_path, "train", global,
                 json{{"data", csv_path}, {"label_column", label_column}},
                 json{{"forest", forest_path}},
                 json{{"trees", config.n_trees},
                      {"mtry", forest.mtry},
                      {"min_node_size", config.min_node_size},
                      {"balanced_split", config.flags.balanced_split},
                      {"c_gamma", config.flags.c_gamma},
                      {"no_resampling", config.flags.no_resampling}},
                 watch.seconds(), started);
  return 0;
}

json scored_interaction_json(const lssfind::ScoredInteraction& s) {
  return json{{"interaction", s.interaction.to_string()},
              {"size", s.interaction.size()},
              {"dwp", s.dwp},
              {"scaled_dwp", s.scaled_dwp},
              {"pp", s.pp},
              {"pii", s.pii}};
}

int cmd_explain(const GlobalOptions& global, const Defaults& defaults,
                const std::string& forest_path, const std::string& point_text,
                const std::string& points_csv, const std::string& drop_column,
                double epsilon, double eta_dwp, double eta_pp, int s_max, int top_k,
                const std::string& mode) {
  Stopwatch watch;
  const std::string started = utc_now();
  const lssfind::Forest forest = lssfind::load_forest(forest_path);

  std::vector<std::vector<double>> points;
  if (!point_text.empty()) {
    points.push_back(parse_point(point_text));
  } else if (!points_csv.empty()) {
    points = read_points_csv(points_csv, forest, drop_column);
  } else {
    throw std::invalid_argument("explain needs --point or --points-csv");
  }
  for (const auto& point : points) {
    if (static_cast<std::int32_t>(point.size()) != forest.n_features) {
      throw std::invalid_argument("test point has " + std::to_string(point.size()) +
                                  " coordinates, forest expects " +
                                  std::to_string(forest.n_features));
    }
  }

  lssfind::ExplainConfig config;
  config.epsilon = epsilon > 0 ? epsilon : defaults.epsilon;
  config.eta_dwp = eta_dwp > 0 ? eta_dwp : defaults.eta_dwp;
  config.eta_pp = eta_pp > 0 ? eta_pp : defaults.eta_pp;
  config.s_max = s_max > 0 ? s_max : defaults.s_max;
  config.validate();
  if (top_k < 1) top_k = defaults.top_k;

  // One DWP table serves every test point.
  const lssfind::PrevalenceTable dwp_table =
      lssfind::compute_dwp(forest, config.epsilon, config.s_max, global.threads);

  const std::string explanation_path = join_path(global.out_dir, "explanation.json");
  const std::string ranking_path = join_path(global.out_dir, "ranking.csv");
  const std::string feature_scores_path = join_path(global.out_dir, "feature_scores.csv");

  json point_records = json::array();
  std::ofstream ranking_csv(ranking_path);
  if (!ranking_csv) throw std::runtime_error("cannot write " + ranking_path);
  ranking_csv << "point,rank,interaction,size,dwp,scaled_dwp,pp,pii,prediction\n";
  std::ofstream feature_csv;
  const bool want_features = mode == "features" || mode == "scores-only";
  if (want_features) {
    feature_csv.open(feature_scores_path);
    if (!feature_csv) throw std::runtime_error("cannot write " + feature_scores_path);
    feature_csv << "point,signed_feature,fdwp,pp,pfi,prediction\n";
  }
  char buf[40];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  // Per-point work runs in parallel; each point owns its slot and all output
  // is serialized afterwards in point order.
  struct PointResult {
    double prediction = 0.0;
    json selection;
    bool has_selection = false;
    const char* selection_key = nullptr;
    std::vector<lssfind::ScoredInteraction> ranked;
    std::vector<lssfind::ScoredFeature> features;
  };
  std::vector<PointResult> results(points.size());
  lssfind::parallel_for(points.size(), global.threads, [&](std::size_t i) {
    const auto& point = points[i];
    PointResult& slot = results[i];
    const lssfind::PrevalenceTable pp_table =
        lssfind::compute_pp(forest, point, config.epsilon, config.s_max);
    slot.prediction = forest.predict(point);

    if (mode == "interactions") {
      const auto explanation = lssfind::local_lss_find(dwp_table, pp_table, point, config);
      slot.selection = json::array();
      for (const auto& s : explanation.selected) slot.selection.push_back(scored_interaction_json(s));
      slot.has_selection = true;
      slot.selection_key = "selected_interactions";
    } else if (mode == "features") {
      const auto explanation =
          lssfind::local_feature_lss_find(dwp_table, pp_table, point, config);
      slot.selection = json::array();
      for (const auto& s : explanation.selected) {
        slot.selection.push_back(json{{"feature", lssfind::to_string(s.feature)},
                                      {"fdwp", s.fdwp},
                                      {"pp", s.pp},
                                      {"pfi", s.pfi}});
      }
      slot.has_selection = true;
      slot.selection_key = "selected_features";
    }

    slot.ranked = lssfind::rank_interactions(dwp_table, pp_table, lssfind::RankingScore::kPii);
    if (want_features) {
      slot.features =
          lssfind::rank_features(dwp_table, pp_table, forest.n_features, config.s_max);
    }
  });

  for (std::size_t i = 0; i < points.size(); ++i) {
    PointResult& slot = results[i];
    json record;
    record["index"] = i;
    record["x"] = points[i];
    record["prediction"] = slot.prediction;
    if (slot.has_selection) record[slot.selection_key] = std::move(slot.selection);

    const std::size_t limit =
        mode == "scores-only"
            ? slot.ranked.size()
            : std::min<std::size_t>(slot.ranked.size(), static_cast<std::size_t>(top_k));
    json top = json::array();
    for (std::size_t r = 0; r < limit; ++r) {
      const auto& s = slot.ranked[r];
      if (r < static_cast<std::size_t>(top_k)) top.push_back(scored_interaction_json(s));
      ranking_csv << i << ',' << (r + 1) << ',' << s.interaction.to_string() << ','
                  << s.interaction.size() << ',' << num(s.dwp) << ',' << num(s.scaled_dwp) << ','
                  << num(s.pp) << ',' << num(s.pii) << ',' << num(slot.prediction) << '\n';
    }
    record["ranking_top"] = std::move(top);

    for (const auto& f : slot.features) {
      feature_csv << i << ',' << lssfind::to_string(f.feature) << ',' << num(f.fdwp) << ','
                  << num(f.pp) << ',' << num(f.pfi) << ',' << num(slot.prediction) << '\n';
    }
    point_records.push_back(std::move(record));
  }

  json doc;
  doc["schema"] = "lssfind.explanation/1";
  doc["mode"] = mode;
  doc["config"] = {{"epsilon", config.epsilon},
                   {"eta_dwp", config.eta_dwp},
                   {"eta_pp", config.eta_pp},
                   {"s_max", config.s_max},
                   {"top_k", top_k}};
  doc["forest"] = forest_path;
  doc["points"] = std::move(point_records);
  {
    std::ofstream out(explanation_path);
    if (!out) throw std::runtime_error("cannot write " + explanation_path);
    out << doc.dump(2) << '\n';
  }

  std::cout << "explained " << points.size() << " point(s), mode=" << mode << "\n";
  std::cout << "explanation written to " << explanation_path << "\n";
  std::cout << "ranking written to " << ranking_path << "\n";
  if (want_features) std::cout << "feature scores written to " << feature_scores_path << "\n";

  json outputs{{"explanation", explanation_path}, {"ranking", ranking_path}};
  if (want_features) outputs["feature_scores"] = feature_scores_path;
  write_manifest(explanation_path, "explain", global,
                 json{{"forest", forest_path},
                      {"point", point_text},
                      {"points_csv", points_csv}},
                 outputs,
                 json{{"epsilon", config.epsilon},
                      {"eta_dwp", config.eta_dwp},
                      {"eta_pp", config.eta_pp},
                      {"s_max", config.s_max},
                      {"top_k", top_k},
                      {"mode", mode}},
                 watch.seconds(), started);
  return 0;
}

int cmd_simulate(const GlobalOptions& global, int j_terms, int term_size, double snr, int n,
                 int p, const std::string& spec_path) {
  Stopwatch watch;
  const std::string started = utc_now();
  lssfind::LssModelSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + spec_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    spec = lssfind::LssModelSpec::from_json_string(text);
  } else {
    spec = lssfind::build_benchmark_spec(j_terms, term_size, snr, p);
  }

  lssfind::Rng rng(global.seed);
  const lssfind::Dataset data = lssfind::generate(spec, static_cast<std::size_t>(n), rng);

  const std::string data_path = join_path(global.out_dir, "dataset.csv");
  const std::string truth_path = join_path(global.out_dir, "ground_truth.json");
  lssfind::write_csv(data, data_path);
  lssfind::write_ground_truth(spec, truth_path);

  std::cout << "simulated n=" << n << " p=" << spec.p << " sigma=" << format6(spec.noise_sd)
            << " (sigma^2=" << format6(spec.noise_sd * spec.noise_sd) << ")\n";
  std::cout << "dataset written to " << data_path << "\n";
  std::cout << "ground truth written to " << truth_path << "\n";

  write_manifest(data_path, "simulate", global,
                 json{{"spec_file", spec_path}},
                 json{{"dataset", data_path}, {"ground_truth", truth_path}},
                 json{{"J", j_terms},
                      {"L", term_size},
                      {"SNR", snr},
                      {"n", n},
                      {"p", spec.p},
                      {"sigma", spec.noise_sd}},
                 watch.seconds(), started);
  return 0;
}

int cmd_evaluate(const GlobalOptions& global, const std::string& grid_path,
                 const std::string& out_path, const std::string& scale) {
  Stopwatch watch;
  const std::string started = utc_now();
  std::ifstream in(grid_path);
  if (!in) throw std::invalid_argument("cannot open grid file: " + grid_path);
  json grid;
  try {
    in >> grid;
  } catch (const json::exception& e) {
    throw std::invalid_argument("grid file is not valid JSON: " + std::string(e.what()));
  }

  lssfind::EvalConfig config;
  config.threads = global.threads;
  if (scale == "full") {
    config.n_trees = 500;
    config.n_test = 100;
  } else {
    config.n_trees = 200;
    config.n_test = 30;
  }
  int replicates = scale == "full" ? 10 : 3;
  config.p = grid.value("p", config.p);
  config.n_trees = grid.value("trees", config.n_trees);
  config.n_test = grid.value("test_points", config.n_test);
  config.mtry = grid.value("mtry", config.mtry);
  config.epsilon = grid.value("epsilon", config.epsilon);
  config.s_max = grid.value("s_max", config.s_max);
  config.top_k = grid.value("top_k", config.top_k);
  replicates = grid.value("replicates", replicates);
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");

  std::vector<lssfind::GridCell> cells;
  for (const auto& jc : grid.value("cells", json::array())) {
    lssfind::GridCell cell;
    cell.n = jc.at("n").get<std::int32_t>();
    cell.j_terms = jc.at("J").get<std::int32_t>();
    cell.term_size = jc.at("L").get<std::int32_t>();
    cell.snr = jc.at("SNR").get<double>();
    cells.push_back(cell);
  }

  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < replicates; ++r) seeds.push_back(lssfind::Rng::mix(global.seed, r));

  const auto results = lssfind::run_grid(cells, seeds, config);
  const std::string results_path =
      out_path.empty() ? join_path(global.out_dir, "results.csv") : out_path;
  lssfind::write_results_csv(results, results_path);

  for (const auto& r : results) {
    std::cout << "cell n=" << r.cell.n << " J=" << r.cell.j_terms << " L=" << r.cell.term_size
              << " SNR=" << format6(r.cell.snr) << ": dwp_incl=" << format6(r.dwp_inclusion)
              << " pii_incl=" << format6(r.pii_inclusion) << " roc_dwp=" << format6(r.roc_dwp)
              << " roc_pii=" << format6(r.roc_pii) << " (qualifying=" << r.n_qualifying << ")\n";
  }
  std::cout << "results written to " << results_path << "\n";

  write_manifest(results_path, "evaluate", global, json{{"grid", grid_path}},
                 json{{"results", results_path}},
                 json{{"scale", scale},
                      {"p", config.p},
                      {"trees", config.n_trees},
                      {"test_points", config.n_test},
                      {"mtry", config.mtry},
                      {"epsilon", config.epsilon},
                      {"s_max", config.s_max},
                      {"top_k", config.top_k},
                      {"replicates", replicates},
                      {"cells", grid.value("cells", json::array())}},
                 watch.seconds(), started);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions global;
  Defaults defaults;

  // --config is applied before option defaults are registered.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      global.config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      global.config_path = arg.substr(9);
    }
  }
  try {
    if (!global.config_path.empty()) defaults.load(global.config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Local signed feature and interaction importance for CART random forests"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--seed", global.seed, "Seed for all randomized steps")->capture_default_str();
  app.add_option("--threads", global.threads,
                 "Worker threads (0 = LSSFIND_THREADS env or hardware)")
      ->capture_default_str();
  app.add_option("--out-dir", global.out_dir, "Directory for outputs")->capture_default_str();
  app.add_option("--config", global.config_path, "JSON file overriding built-in defaults");

  // train
  auto* train = app.add_subcommand("train", "Train a CART regression forest from a CSV");
  std::string train_csv, train_label = "y", train_out;
  int train_mtry = -1, train_trees = 0, train_min_node = 0;
  bool train_balanced = false;
  double train_c_gamma = 0.1;
  train->add_option("--data", train_csv, "Training CSV (header row)")->required();
  train->add_option("--label", train_label, "Label column name or 0-based index")
      ->capture_default_str();
  train->add_option("--mtry", train_mtry, "Features drawn per node (0 = ceil(p/2))");
  train->add_option("--trees", train_trees, "Number of trees");
  train->add_option("--min-node-size", train_min_node, "Nodes at/below this size become leaves");
  train->add_flag("--balanced-split", train_balanced,
                  "Enforce the balanced-split constraint (features must be in [0,1])");
  train->add_option("--c-gamma", train_c_gamma, "Balance constant in (0,0.5)")
      ->capture_default_str();
  train->add_option("--out", train_out, "Forest output path (default <out-dir>/forest.json)");

  // explain
  auto* explain = app.add_subcommand("explain", "Local signed interactions for test points");
  std::string explain_forest, explain_point, explain_points_csv, explain_drop,
      explain_mode = "interactions";
  double explain_epsilon = 0, explain_eta_dwp = 0, explain_eta_pp = 0;
  int explain_s_max = 0, explain_top_k = 0;
  explain->add_option("--forest", explain_forest, "Forest JSON from `train`")->required();
  explain->add_option("--point", explain_point, "Inline test point: comma-separated coordinates");
  explain->add_option("--points-csv", explain_points_csv, "CSV of test points (header row)");
  explain->add_option("--drop-column", explain_drop,
                      "Column of --points-csv to ignore (e.g. a label)");
  explain->add_option("--epsilon", explain_epsilon,
                      "Impurity decrease threshold (N/n-weighted scale)");
  explain->add_option("--eta-dwp", explain_eta_dwp, "Global prevalence threshold");
  explain->add_option("--eta-pp", explain_eta_pp, "Local prevalence threshold");
  explain->add_option("--s-max", explain_s_max, "Maximum interaction size");
  explain->add_option("--top-k", explain_top_k, "Ranking entries echoed into the JSON");
  explain->add_option("--mode", explain_mode, "interactions | features | scores-only")
      ->check(CLI::IsMember({"interactions", "features", "scores-only"}))
      ->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a dataset from an LSS model");
  int sim_j = 1, sim_l = 2, sim_n = 1000, sim_p = 20;
  double sim_snr = 1.0;
  std::string sim_spec;
  simulate->add_option("--J", sim_j, "Number of interactions")->capture_default_str();
  simulate->add_option("--L", sim_l, "Interaction size")->capture_default_str();
  simulate->add_option("--snr", sim_snr, "Signal-to-noise ratio")->capture_default_str();
  simulate->add_option("--n", sim_n, "Sample size")->capture_default_str();
  simulate->add_option("--p", sim_p, "Feature count")->capture_default_str();
  simulate->add_option("--spec", sim_spec, "Custom model spec JSON (overrides --J/--L/--snr)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Run the ranking-evaluation grid");
  std::string eval_grid, eval_out, eval_scale = "desk";
  evaluate->add_option("--grid", eval_grid, "Grid JSON file")->required();
  evaluate->add_option("--out", eval_out, "Results CSV path (default <out-dir>/results.csv)");
  evaluate->add_option("--scale", eval_scale, "desk | full")
      ->check(CLI::IsMember({"desk", "full"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) {
      return cmd_train(global, defaults, train_csv, train_label, train_mtry, train_trees,
                       train_min_node, train_balanced, train_c_gamma, train_out);
    }
    if (explain->parsed()) {
      return cmd_explain(global, defaults, explain_forest, explain_point, explain_points_csv,
                         explain_drop, explain_epsilon, explain_eta_dwp, explain_eta_pp,
                         explain_s_max, explain_top_k, explain_mode);
    }
    if (simulate->parsed()) {
      return cmd_simulate(global, sim_j, sim_l, sim_snr, sim_n, sim_p, sim_spec);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(global, eval_grid, eval_out, eval_scale);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
