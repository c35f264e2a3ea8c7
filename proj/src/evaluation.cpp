#include "lssfind/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lssfind/parallel.hpp"
#include "lssfind/prevalence.hpp"

namespace lssfind {

bool top_k_inclusion(std::span<const SignedInteraction> ranking,
                     const std::vector<SignedInteraction>& truth, int k) {
  if (truth.empty()) throw std::invalid_argument("no qualifying BSIs");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::size_t limit = std::min<std::size_t>(ranking.size(), static_cast<std::size_t>(k));
  for (const auto& t : truth) {
    bool found = false;
    for (std::size_t i = 0; i < limit && !found; ++i) found = ranking[i] == t;
    if (!found) return false;
  }
  return true;
}

double adjusted_roc_auc(std::span<const SignedInteraction> ranking_top10,
                        const std::vector<SignedInteraction>& truth) {
  if (truth.empty()) throw std::invalid_argument("no qualifying BSIs");
  if (ranking_top10.size() > 10) throw std::invalid_argument("ranking exceeds 10 items");
  std::vector<bool> is_truth(ranking_top10.size(), false);
  std::size_t found = 0;
  for (std::size_t i = 0; i < ranking_top10.size(); ++i) {
    is_truth[i] =
        std::find(truth.begin(), truth.end(), ranking_top10[i]) != truth.end();
    found += is_truth[i] ? 1 : 0;
  }
  if (found < truth.size()) return 0.0;
  const std::size_t n_neg = ranking_top10.size() - found;
  if (n_neg == 0) return 1.0;
  // Positions are distinct, so every (truth, non-truth) pair has a strict
  // winner; earlier position wins.
  std::size_t wins = 0;
  for (std::size_t i = 0; i < ranking_top10.size(); ++i) {
    if (!is_truth[i]) continue;
    for (std::size_t j = i + 1; j < ranking_top10.size(); ++j) {
      if (!is_truth[j]) ++wins;
    }
  }
  return static_cast<double>(wins) / static_cast<double>(found * n_neg);
}

namespace {

std::uint64_t cell_key(const GridCell& cell, std::uint64_t seed) {
  std::uint64_t h = Rng::mix(seed, static_cast<std::uint64_t>(cell.n));
  h = Rng::mix(h, static_cast<std::uint64_t>(cell.j_terms));
  h = Rng::mix(h, static_cast<std::uint64_t>(cell.term_size));
  h = Rng::mix(h, std::bit_cast<std::uint64_t>(cell.snr));
  return h;
}

struct PointOutcome {
  bool qualifying = false;
  bool dwp_included = false;
  bool pii_included = false;
  double roc_dwp = 0.0;
  double roc_pii = 0.0;
};

std::vector<SignedInteraction> ranked_interactions_only(
    const std::vector<ScoredInteraction>& scored) {
  std::vector<SignedInteraction> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.interaction);
  return out;
}

}  // namespace

std::vector<ExperimentResult> run_grid(std::span<const GridCell> cells,
                                       std::span<const std::uint64_t> seeds,
                                       const EvalConfig& config) {
  if (seeds.empty()) throw std::invalid_argument("run_grid needs at least one seed");
  if (config.n_test < 1) throw std::invalid_argument("n_test must be >= 1");
  std::vector<ExperimentResult> results;
  for (const GridCell& cell : cells) {
    if (cell.j_terms * cell.term_size > config.p) {
      throw std::invalid_argument("cell J*L exceeds p");
    }
    const int s_max = config.s_max > 0 ? config.s_max : cell.term_size + 1;
    ExperimentResult res;
    res.cell = cell;
    res.seed = seeds[0];
    std::int64_t n_dwp_inc = 0, n_pii_inc = 0;
    double sum_roc_dwp = 0.0, sum_roc_pii = 0.0;

    for (const std::uint64_t seed : seeds) {
      const std::uint64_t key = cell_key(cell, seed);
      const LssModelSpec spec =
          build_benchmark_spec(cell.j_terms, cell.term_size, cell.snr, config.p);
      Rng data_rng(Rng::mix(key, 1));
      const Dataset data = generate(spec, static_cast<std::size_t>(cell.n), data_rng);

      ForestConfig forest_config;
      forest_config.n_trees = config.n_trees;
      forest_config.mtry = config.mtry;
      forest_config.seed = Rng::mix(key, 2);
      forest_config.threads = config.threads;
      const Forest forest = fit_forest(data, forest_config);

      const PrevalenceTable dwp_table =
          compute_dwp(forest, config.epsilon, s_max, config.threads);

      Rng test_rng(Rng::mix(key, 3));
      std::vector<std::vector<double>> test_points(config.n_test,
                                                   std::vector<double>(config.p));
      for (auto& point : test_points) {
        for (auto& v : point) v = test_rng.uniform01();
      }

      std::vector<PointOutcome> outcomes(config.n_test);
      parallel_for(test_points.size(), config.threads, [&](std::size_t i) {
        const auto& point = test_points[i];
        const std::vector<SignedInteraction> truth = bsis_for_point(spec, point);
        if (truth.empty()) return;
        PointOutcome& out = outcomes[i];
        out.qualifying = true;
        const PrevalenceTable pp_table =
            compute_pp(forest, point, config.epsilon, s_max);
        const auto by_dwp = ranked_interactions_only(
            rank_interactions(dwp_table, pp_table, RankingScore::kScaledDwp));
        const auto by_pii = ranked_interactions_only(
            rank_interactions(dwp_table, pp_table, RankingScore::kPii));
        out.dwp_included = top_k_inclusion(by_dwp, truth, config.top_k);
        out.pii_included = top_k_inclusion(by_pii, truth, config.top_k);
        const std::size_t k10 = std::min<std::size_t>(by_dwp.size(), 10);
        out.roc_dwp = adjusted_roc_auc(std::span(by_dwp.data(), k10), truth);
        out.roc_pii = adjusted_roc_auc(std::span(by_pii.data(), k10), truth);
      });

      // Aggregate in point order; worker count cannot change the result.
      for (const PointOutcome& out : outcomes) {
        if (!out.qualifying) continue;
        ++res.n_qualifying;
        n_dwp_inc += out.dwp_included ? 1 : 0;
        n_pii_inc += out.pii_included ? 1 : 0;
        sum_roc_dwp += out.roc_dwp;
        sum_roc_pii += out.roc_pii;
      }
    }

    if (res.n_qualifying > 0) {
      const double denom = static_cast<double>(res.n_qualifying);
      res.dwp_inclusion = static_cast<double>(n_dwp_inc) / denom;
      res.pii_inclusion = static_cast<double>(n_pii_inc) / denom;
      res.roc_dwp = sum_roc_dwp / denom;
      res.roc_pii = sum_roc_pii / denom;
    }
    results.push_back(res);
  }
  return results;
}

void write_results_csv(std::span<const ExperimentResult> results, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results CSV: " + path);
  out << "n,J,L,SNR,dwp_inclusion,pii_inclusion,roc_dwp,roc_pii,n_qualifying,seed\n";
  char buf[40];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : results) {
    out << r.cell.n << ',' << r.cell.j_terms << ',' << r.cell.term_size << ','
        << num(r.cell.snr) << ',' << num(r.dwp_inclusion) << ',' << num(r.pii_inclusion) << ','
        << num(r.roc_dwp) << ',' << num(r.roc_pii) << ',' << r.n_qualifying << ',' << r.seed
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lssfind
