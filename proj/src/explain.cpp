#include "lssfind/explain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lssfind {

void ExplainConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(eta_dwp > 0.0 && eta_dwp < 1.0)) throw std::invalid_argument("eta_dwp must be in (0,1)");
  if (!(eta_pp > 0.0 && eta_pp < 1.0)) throw std::invalid_argument("eta_pp must be in (0,1)");
  if (s_max < 1) throw std::invalid_argument("s_max must be >= 1");
}

std::vector<SignedInteraction> minimality_filter(
    const std::vector<SignedInteraction>& candidates) {
  std::vector<SignedInteraction> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<SignedInteraction> kept;
  for (const auto& s : sorted) {
    // sorted by size, so any proper subset of s was visited before s
    const bool has_proper_subset = std::any_of(
        kept.begin(), kept.end(),
        [&](const SignedInteraction& t) { return t.size() < s.size() && t.subset_of(s); });
    if (!has_proper_subset) kept.push_back(s);
  }
  return kept;
}

double pii(const SignedInteraction& interaction, const PrevalenceTable& dwp_table,
           const PrevalenceTable& pp_table) {
  const double dwp = dwp_table.lookup(interaction);
  const double pp = pp_table.lookup(interaction);
  return std::ldexp(dwp, static_cast<int>(interaction.size())) * pp;
}

double fdwp(const SignedFeature& feature, const PrevalenceTable& dwp_table, int s_max) {
  double best = 0.0;
  for (const auto& [key, value] : dwp_table.entries) {
    if (static_cast<int>(key.size()) > s_max) continue;
    if (!key.contains(feature)) continue;
    best = std::max(best, std::ldexp(value, static_cast<int>(key.size())));
  }
  return best;
}

double pfi(const SignedFeature& feature, const PrevalenceTable& dwp_table,
           const PrevalenceTable& pp_table, int s_max) {
  const SignedInteraction singleton(std::vector<SignedFeature>{feature});
  return pp_table.lookup(singleton) * fdwp(feature, dwp_table, s_max);
}

namespace {

ScoredInteraction score_interaction(const SignedInteraction& s, const PrevalenceTable& dwp_table,
                                    const PrevalenceTable& pp_table) {
  ScoredInteraction out;
  out.interaction = s;
  out.dwp = dwp_table.lookup(s);
  out.scaled_dwp = std::ldexp(out.dwp, static_cast<int>(s.size()));
  out.pp = pp_table.lookup(s);
  out.pii = out.scaled_dwp * out.pp;
  return out;
}

}  // namespace

InteractionExplanation local_lss_find(const PrevalenceTable& dwp_table,
                                      const PrevalenceTable& pp_table,
                                      std::span<const double> x_test, const ExplainConfig& config) {
  config.validate();
  std::vector<SignedInteraction> thresholded;
  for (const auto& [key, value] : dwp_table.entries) {
    if (static_cast<int>(key.size()) > config.s_max) continue;
    if (std::ldexp(value, static_cast<int>(key.size())) >= 1.0 - config.eta_dwp) {
      thresholded.push_back(key);
    }
  }
  InteractionExplanation result;
  result.test_point.assign(x_test.begin(), x_test.end());
  result.config = config;
  for (const auto& s : minimality_filter(thresholded)) {
    if (pp_table.lookup(s) >= 1.0 - config.eta_pp) {
      result.selected.push_back(score_interaction(s, dwp_table, pp_table));
    }
  }
  return result;
}

InteractionExplanation local_lss_find(const Forest& forest, std::span<const double> x_test,
                                      const ExplainConfig& config, int threads) {
  config.validate();
  const PrevalenceTable dwp_table = compute_dwp(forest, config.epsilon, config.s_max, threads);
  const PrevalenceTable pp_table = compute_pp(forest, x_test, config.epsilon, config.s_max);
  return local_lss_find(dwp_table, pp_table, x_test, config);
}

FeatureExplanation local_feature_lss_find(const PrevalenceTable& dwp_table,
                                          const PrevalenceTable& pp_table,
                                          std::span<const double> x_test,
                                          const ExplainConfig& config) {
  config.validate();
  FeatureExplanation result;
  result.test_point.assign(x_test.begin(), x_test.end());
  result.config = config;
  // Candidate signed features are those appearing in some stored interaction.
  std::vector<SignedFeature> candidates;
  for (const auto& [key, value] : dwp_table.entries) {
    for (const auto& sf : key.members()) candidates.push_back(sf);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& sf : candidates) {
    const double f = fdwp(sf, dwp_table, config.s_max);
    if (f < 1.0 - config.eta_dwp) continue;
    const SignedInteraction singleton(std::vector<SignedFeature>{sf});
    const double pp_value = pp_table.lookup(singleton);
    if (pp_value < 1.0 - config.eta_pp) continue;
    result.selected.push_back({sf, f, pp_value, pp_value * f});
  }
  return result;
}

FeatureExplanation local_feature_lss_find(const Forest& forest, std::span<const double> x_test,
                                          const ExplainConfig& config, int threads) {
  config.validate();
  const PrevalenceTable dwp_table = compute_dwp(forest, config.epsilon, config.s_max, threads);
  const PrevalenceTable pp_table = compute_pp(forest, x_test, config.epsilon, config.s_max);
  return local_feature_lss_find(dwp_table, pp_table, x_test, config);
}

std::vector<ScoredInteraction> rank_interactions(const PrevalenceTable& dwp_table,
                                                 const PrevalenceTable& pp_table,
                                                 RankingScore score) {
  std::vector<ScoredInteraction> ranked;
  ranked.reserve(dwp_table.entries.size());
  for (const auto& [key, value] : dwp_table.entries) {
    ranked.push_back(score_interaction(key, dwp_table, pp_table));
  }
  const auto score_of = [score](const ScoredInteraction& s) {
    return score == RankingScore::kScaledDwp ? s.scaled_dwp : s.pii;
  };
  std::sort(ranked.begin(), ranked.end(), [&](const ScoredInteraction& a,
                                              const ScoredInteraction& b) {
    const double sa = score_of(a), sb = score_of(b);
    if (sa != sb) return sa > sb;
    return a.interaction < b.interaction;  // size ascending, then lexicographic
  });
  return ranked;
}

std::vector<ScoredFeature> rank_features(const PrevalenceTable& dwp_table,
                                         const PrevalenceTable& pp_table, int n_features,
                                         int s_max) {
  std::vector<ScoredFeature> ranked;
  ranked.reserve(2 * n_features);
  for (std::int32_t k = 0; k < n_features; ++k) {
    for (const std::int8_t sign : {std::int8_t{-1}, std::int8_t{+1}}) {
      const SignedFeature sf{k, sign};
      const double f = fdwp(sf, dwp_table, s_max);
      const SignedInteraction singleton(std::vector<SignedFeature>{sf});
      const double pp_value = pp_table.lookup(singleton);
      ranked.push_back({sf, f, pp_value, pp_value * f});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredFeature& a, const ScoredFeature& b) {
    if (a.pfi != b.pfi) return a.pfi > b.pfi;
    return a.feature < b.feature;
  });
  return ranked;
}

}  // namespace lssfind
