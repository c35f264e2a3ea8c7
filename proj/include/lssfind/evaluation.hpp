#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lssfind/explain.hpp"
#include "lssfind/lss_sim.hpp"

namespace lssfind {

struct GridCell {
  std::int32_t n = 1000;
  std::int32_t j_terms = 1;   // J
  std::int32_t term_size = 2; // L
  double snr = 1.0;
};

struct EvalConfig {
  std::int32_t p = 20;
  std::int32_t n_trees = 200;
  std::int32_t n_test = 30;
  std::int32_t mtry = 0;  // 0 -> ceil(p/2)
  double epsilon = 0.01;
  int s_max = 0;  // 0 -> L+1 per cell
  int top_k = 10;
  int threads = 0;
};

// Aggregates over (replicate seeds x qualifying test points) for one cell.
// A test point qualifies when it has at least one BSI.
struct ExperimentResult {
  GridCell cell;
  double dwp_inclusion = 0.0;
  double pii_inclusion = 0.0;
  double roc_dwp = 0.0;
  double roc_pii = 0.0;
  std::int64_t n_qualifying = 0;
  std::uint64_t seed = 0;  // first replicate seed
};

// True iff every truth element appears among the first k ranked items.
// Throws on empty truth; callers filter to qualifying test points first.
bool top_k_inclusion(std::span<const SignedInteraction> ranking,
                     const std::vector<SignedInteraction>& truth, int k = 10);

// Rank-based AUC within the top 10: 0 when any truth element is missing,
// otherwise the Mann-Whitney statistic of truth vs non-truth positions
// (1 when all considered items are truth). Throws on empty truth.
double adjusted_roc_auc(std::span<const SignedInteraction> ranking_top10,
                        const std::vector<SignedInteraction>& truth);

// Full pipeline per (cell, seed): simulate, train, build tables, rank each
// qualifying test point by scaled DWP and by PII, and aggregate inclusion and
// adjusted AUC. Deterministic for a fixed seed list and any thread count.
std::vector<ExperimentResult> run_grid(std::span<const GridCell> cells,
                                       std::span<const std::uint64_t> seeds,
                                       const EvalConfig& config);

// One row per cell: n,J,L,SNR,dwp_inclusion,pii_inclusion,roc_dwp,roc_pii,
// n_qualifying,seed.
void write_results_csv(std::span<const ExperimentResult> results, const std::string& path);

}  // namespace lssfind
