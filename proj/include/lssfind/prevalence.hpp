#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lssfind/forest.hpp"
#include "lssfind/rng.hpp"
#include "lssfind/signed_interaction.hpp"

namespace lssfind {

enum class PrevalenceKind { kDwp, kPp };

// Exact map from signed interaction to prevalence. Interactions that never
// occur are simply absent and look up as 0; the empty interaction looks up
// as 1.
struct PrevalenceTable {
  PrevalenceKind kind = PrevalenceKind::kDwp;
  double epsilon = 0.0;
  int s_max = 1;
  int n_trees = 0;
  std::unordered_map<SignedInteraction, double, SignedInteractionHash> entries;

  double lookup(const SignedInteraction& s) const;
  // Entries ordered by (size, lexicographic members); the deterministic view
  // used for export and merging.
  std::vector<std::pair<SignedInteraction, double>> sorted_entries() const;
};

// Exact depth-weighted prevalence: for every signed interaction S of size
// <= s_max, the probability that S lies in the epsilon-filtered signed set of
// a path drawn with weight 2^(-depth) from a uniformly random tree.
// Subtrees without any qualifying split are folded into a single Kraft mass,
// so cost scales with the qualifying frontier, not the leaf count.
PrevalenceTable compute_dwp(const Forest& forest, double epsilon, int s_max, int threads = 0);

// Exact path prevalence for a test point: fraction of trees whose path for
// x_test carries S in its epsilon-filtered signed set. Values are multiples
// of 1/n_trees.
PrevalenceTable compute_pp(const Forest& forest, std::span<const double> x_test, double epsilon,
                           int s_max);

// Unbiased sampling estimator of DWP (uniform tree, fair-coin descent); kept
// as an independent cross-check of compute_dwp.
PrevalenceTable monte_carlo_dwp(const Forest& forest, double epsilon, int s_max,
                                std::size_t n_walks, Rng& rng);

// CSV with columns interaction,size,value,scaled_value,kind where
// scaled_value is 2^|S| * value for DWP tables and the plain value for PP.
void write_prevalence_csv(const PrevalenceTable& table, const std::string& path);

}  // namespace lssfind
