#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lssfind/dataset.hpp"
#include "lssfind/rng.hpp"
#include "lssfind/signed_interaction.hpp"

namespace lssfind {

// One Boolean term of the regression function: beta * prod over (feature,
// sign, threshold) of 1(x_k <= gamma_k) for sign -1, 1(x_k > gamma_k) for
// sign +1.
struct LssTerm {
  std::vector<std::int32_t> features;
  std::vector<std::int8_t> signs;
  std::vector<double> thresholds;
  double beta = 1.0;
};

struct LssModelSpec {
  std::int32_t p = 0;
  std::vector<LssTerm> terms;
  double intercept = 0.0;
  double noise_sd = 0.0;

  // Disjoint term features, thresholds in (0,1), nonzero coefficients.
  void validate() const;
  double regression_function(std::span<const double> x) const;

  std::string to_json_string() const;
  static LssModelSpec from_json_string(const std::string& text);
};

// Simulation-study defaults: p = 20 features, 500-tree forests with
// mtry = p/2 = 10, 100 uniform test points.
struct SimGrid {
  std::int32_t p = 20;
  std::int32_t n_test = 100;
  std::int32_t n_trees = 500;
  std::int32_t mtry = 10;
};

// Benchmark model: J disjoint all-"<=" interactions of size L on features
// (j-1)L..jL-1, unit coefficients, zero intercept, shared threshold
// tau = 0.5^(1/L) so each product term is Bernoulli(1/2). Noise variance is
// Var(signal)/SNR = J/4/SNR.
LssModelSpec build_benchmark_spec(int j_terms, int term_size, double snr, int p = 20);

double benchmark_tau(int term_size);

// i.i.d. Uniform[0,1]^p features; labels are the regression function plus
// Gaussian noise. Deterministic for a given rng state.
Dataset generate(const LssModelSpec& spec, std::size_t n, Rng& rng);

// Basic signed interactions of the model: each term's signed feature set,
// plus the opposite-signed version for single-feature terms.
std::vector<SignedInteraction> model_bsis(const LssModelSpec& spec);

// Basic signed interactions for a test point: terms whose Boolean product is
// 1 at x_test; single-feature terms contribute the signed version matching
// the side of the threshold. Throws "ambiguous test point" when a signal
// coordinate equals its threshold.
std::vector<SignedInteraction> bsis_for_point(const LssModelSpec& spec,
                                              std::span<const double> x_test);

// Ground-truth sidecar written next to simulated datasets: the spec, its
// model BSIs, and the noise level.
void write_ground_truth(const LssModelSpec& spec, const std::string& path);
LssModelSpec read_ground_truth(const std::string& path);

}  // namespace lssfind
