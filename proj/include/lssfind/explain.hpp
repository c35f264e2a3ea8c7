#pragma once

#include <span>
#include <vector>

#include "lssfind/forest.hpp"
#include "lssfind/prevalence.hpp"
#include "lssfind/signed_interaction.hpp"

namespace lssfind {

struct ExplainConfig {
  double epsilon = 0.01;
  double eta_dwp = 0.01;
  double eta_pp = 0.01;
  int s_max = 3;

  void validate() const;
};

struct ScoredInteraction {
  SignedInteraction interaction;
  double dwp = 0.0;
  double scaled_dwp = 0.0;  // 2^|S| * DWP
  double pp = 0.0;
  double pii = 0.0;
};

struct ScoredFeature {
  SignedFeature feature;
  double fdwp = 0.0;
  double pp = 0.0;  // path prevalence of the singleton
  double pfi = 0.0;
};

// Output of the signed-interaction selection (global DWP thresholding,
// minimality, then local PP filtering).
struct InteractionExplanation {
  std::vector<ScoredInteraction> selected;
  std::vector<double> test_point;
  ExplainConfig config;
};

// Output of the signed-feature selection.
struct FeatureExplanation {
  std::vector<ScoredFeature> selected;
  std::vector<double> test_point;
  ExplainConfig config;
};

// Keeps only sets with no proper subset in the input. Output is sorted
// canonically (size, then lexicographic).
std::vector<SignedInteraction> minimality_filter(const std::vector<SignedInteraction>& candidates);

// 2^|S| * DWP(S) * PP(S); may exceed 1 because of the size rescaling.
double pii(const SignedInteraction& interaction, const PrevalenceTable& dwp_table,
           const PrevalenceTable& pp_table);

// Best scaled DWP over stored interactions of size <= s_max containing (k,b).
double fdwp(const SignedFeature& feature, const PrevalenceTable& dwp_table, int s_max);

// PP({(k,b)}) * fDWP(k,b).
double pfi(const SignedFeature& feature, const PrevalenceTable& dwp_table,
           const PrevalenceTable& pp_table, int s_max);

// Signed-interaction selection given precomputed tables:
// keep S with |S| <= s_max and 2^|S|*DWP >= 1 - eta_dwp, drop non-minimal
// sets, then keep S with PP >= 1 - eta_pp.
InteractionExplanation local_lss_find(const PrevalenceTable& dwp_table,
                                      const PrevalenceTable& pp_table,
                                      std::span<const double> x_test, const ExplainConfig& config);

// Convenience overload that trains nothing but computes both tables.
InteractionExplanation local_lss_find(const Forest& forest, std::span<const double> x_test,
                                      const ExplainConfig& config, int threads = 0);

// Signed-feature selection: keep (k,b) with fDWP >= 1 - eta_dwp and singleton
// PP >= 1 - eta_pp.
FeatureExplanation local_feature_lss_find(const PrevalenceTable& dwp_table,
                                          const PrevalenceTable& pp_table,
                                          std::span<const double> x_test,
                                          const ExplainConfig& config);

FeatureExplanation local_feature_lss_find(const Forest& forest, std::span<const double> x_test,
                                          const ExplainConfig& config, int threads = 0);

enum class RankingScore { kScaledDwp, kPii };

// Every interaction stored in the DWP table, scored and sorted descending;
// ties break by size ascending then lexicographic order.
std::vector<ScoredInteraction> rank_interactions(const PrevalenceTable& dwp_table,
                                                 const PrevalenceTable& pp_table,
                                                 RankingScore score);

// All 2p signed features scored by fDWP/PP/PFI, sorted descending by PFI with
// the same deterministic tie rule.
std::vector<ScoredFeature> rank_features(const PrevalenceTable& dwp_table,
                                         const PrevalenceTable& pp_table, int n_features,
                                         int s_max);

}  // namespace lssfind
