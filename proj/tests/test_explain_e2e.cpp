// End-to-end selection behavior on simulated LSS data, in a regime where the
// global gate binds: few noise features, mtry near p, and a small epsilon so
// nearly every random path crosses the qualifying signal cascade.

#include <doctest.h>

#include <algorithm>
#include <set>

#include "lssfind/explain.hpp"
#include "lssfind/forest.hpp"
#include "lssfind/lss_sim.hpp"
#include "lssfind/prevalence.hpp"
#include "test_support.hpp"

using namespace lssfind;

namespace {

struct PairModelFixture {
  LssModelSpec spec;
  Forest forest;
  PrevalenceTable dwp;
  ExplainConfig config;

  PairModelFixture() {
    spec = build_benchmark_spec(1, 2, 5.0, /*p=*/6);
    Rng data_rng(31);
    const Dataset data = generate(spec, 4000, data_rng);
    ForestConfig fc;
    fc.n_trees = 200;
    fc.mtry = 5;
    fc.seed = 32;
    forest = fit_forest(data, fc);
    config.epsilon = 0.002;
    config.eta_dwp = 0.05;
    config.eta_pp = 0.05;
    config.s_max = 3;
    dwp = compute_dwp(forest, config.epsilon, config.s_max);
  }
};

const PairModelFixture& pair_fixture() {
  static PairModelFixture fixture;
  return fixture;
}

}  // namespace

TEST_CASE("interaction selection recovers the pair exactly where it is local truth") {
  const auto& fx = pair_fixture();
  const SignedInteraction pair = testsupport::interaction({{0, -1}, {1, -1}});
  const double tau = fx.spec.terms[0].thresholds[0];

  std::vector<double> inside(6, 0.5);  // 0.5 < tau = 0.5^(1/2)
  const PrevalenceTable pp_inside =
      compute_pp(fx.forest, inside, fx.config.epsilon, fx.config.s_max);
  const auto selected = local_lss_find(fx.dwp, pp_inside, inside, fx.config);
  REQUIRE(selected.selected.size() == 1);
  CHECK(selected.selected[0].interaction == pair);
  CHECK(selected.selected[0].pp > 0.9);
  CHECK(selected.selected[0].scaled_dwp > 0.95);

  // The pair is a model BSI everywhere, but not local truth once a
  // coordinate crosses the threshold: the local gate must drop it.
  std::vector<double> outside = inside;
  outside[0] = tau + 0.15;
  const PrevalenceTable pp_outside =
      compute_pp(fx.forest, outside, fx.config.epsilon, fx.config.s_max);
  const auto rejected = local_lss_find(fx.dwp, pp_outside, outside, fx.config);
  for (const auto& s : rejected.selected) CHECK_FALSE(s.interaction == pair);
  CHECK(pp_outside.lookup(pair) < 0.1);
}

TEST_CASE("feature selection returns the signed signal features of the point") {
  const auto& fx = pair_fixture();
  std::vector<double> inside(6, 0.5);
  const PrevalenceTable pp =
      compute_pp(fx.forest, inside, fx.config.epsilon, fx.config.s_max);
  const auto result = local_feature_lss_find(fx.dwp, pp, inside, fx.config);
  std::set<std::pair<int, int>> got;
  for (const auto& s : result.selected) got.emplace(s.feature.feature, s.feature.sign);
  CHECK(got == std::set<std::pair<int, int>>{{0, -1}, {1, -1}});
}

TEST_CASE("single-feature models select the side the point lies on") {
  LssModelSpec spec;
  spec.p = 4;
  spec.terms.push_back({{2}, {-1}, {0.5}, 1.0});
  spec.noise_sd = 0.1;
  Rng data_rng(33);
  const Dataset data = generate(spec, 3000, data_rng);
  ForestConfig fc;
  fc.n_trees = 150;
  fc.mtry = 3;
  fc.seed = 34;
  const Forest forest = fit_forest(data, fc);

  ExplainConfig config;
  config.epsilon = 0.002;
  config.eta_dwp = 0.05;
  config.eta_pp = 0.05;
  const PrevalenceTable dwp = compute_dwp(forest, config.epsilon, config.s_max);

  std::vector<double> above{0.5, 0.5, 0.9, 0.5};
  const PrevalenceTable pp = compute_pp(forest, above, config.epsilon, config.s_max);
  const auto result = local_feature_lss_find(dwp, pp, above, config);
  REQUIRE(result.selected.size() == 1);
  CHECK(result.selected[0].feature == SignedFeature{2, +1});

  // Matches the simulator's local ground truth.
  const auto truth = bsis_for_point(spec, above);
  REQUIRE(truth.size() == 1);
  CHECK(truth[0] == testsupport::interaction({{2, +1}}));
}

TEST_CASE("noise-only data selects nothing") {
  LssModelSpec spec;
  spec.p = 6;
  spec.noise_sd = 0.5;  // no terms: pure noise labels
  Rng data_rng(35);
  const Dataset data = generate(spec, 2000, data_rng);
  ForestConfig fc;
  fc.n_trees = 100;
  fc.mtry = 3;
  fc.seed = 36;
  const Forest forest = fit_forest(data, fc);

  ExplainConfig config;  // defaults: eps = eta = 0.01
  const PrevalenceTable dwp = compute_dwp(forest, config.epsilon, config.s_max);
  std::vector<double> x(6, 0.4);
  const PrevalenceTable pp = compute_pp(forest, x, config.epsilon, config.s_max);
  CHECK(local_feature_lss_find(dwp, pp, x, config).selected.empty());
  CHECK(local_lss_find(dwp, pp, x, config).selected.empty());
  CHECK(model_bsis(spec).empty());
}
