#include "lssfind/lss_sim.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include "test_support.hpp"

using namespace lssfind;

TEST_CASE("benchmark spec matches the simulation design") {
  const LssModelSpec spec = build_benchmark_spec(1, 2, 1.0);
  CHECK(spec.p == 20);
  REQUIRE(spec.terms.size() == 1);
  CHECK(spec.terms[0].features == std::vector<std::int32_t>{0, 1});
  CHECK(spec.terms[0].thresholds[0] == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(spec.noise_sd * spec.noise_sd == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(spec.intercept == 0.0);

  const LssModelSpec spec2 = build_benchmark_spec(2, 2, 0.5);
  CHECK(spec2.noise_sd * spec2.noise_sd == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec2.terms[1].features == std::vector<std::int32_t>{2, 3});

  CHECK(benchmark_tau(4) == doctest::Approx(0.84090).epsilon(1e-4));
  CHECK_THROWS_AS(build_benchmark_spec(5, 5, 1.0), std::invalid_argument);
}

TEST_CASE("generate without noise evaluates the Boolean terms") {
  LssModelSpec spec = build_benchmark_spec(2, 2, 1.0);
  spec.noise_sd = 0.0;
  spec.intercept = 0.5;
  const double tau = spec.terms[0].thresholds[0];

  std::vector<double> all_below(20, tau * 0.5);
  CHECK(spec.regression_function(all_below) == doctest::Approx(2.5));

  // One coordinate of each term above its threshold: all products vanish.
  std::vector<double> broken = all_below;
  broken[0] = tau + 0.1;
  broken[2] = tau + 0.1;
  CHECK(spec.regression_function(broken) == doctest::Approx(0.5));
}

TEST_CASE("noiseless labels take subset-sum values") {
  LssModelSpec spec = build_benchmark_spec(2, 2, 1.0);
  spec.noise_sd = 0.0;
  spec.intercept = 0.25;
  Rng rng(21);
  const Dataset data = generate(spec, 500, rng);
  const std::set<double> allowed{0.25, 1.25, 2.25};
  for (double y : data.labels()) CHECK(allowed.count(y) == 1);
}

TEST_CASE("empirical moments match the design analytics") {
  const LssModelSpec spec = build_benchmark_spec(1, 2, 1.0);
  Rng rng(22);
  const std::size_t n = 1000000;
  const Dataset data = generate(spec, n, rng);
  double mean = 0.0;
  for (double y : data.labels()) mean += y;
  mean /= static_cast<double>(n);
  // E[y] = 1/2; total sd = sqrt(0.25 + 0.25).
  const double sd_total = std::sqrt(0.5);
  CHECK(std::abs(mean - 0.5) <= 3.0 * sd_total / 1000.0);

  // Each product term is Bernoulli(1/2).
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    active += (data.at(i, 0) <= spec.terms[0].thresholds[0] &&
               data.at(i, 1) <= spec.terms[0].thresholds[1])
                  ? 1
                  : 0;
  }
  const double frac = static_cast<double>(active) / static_cast<double>(n);
  CHECK(std::abs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("model_bsis lists each term once, twice for singletons") {
  const LssModelSpec pair_model = build_benchmark_spec(1, 2, 1.0);
  const auto pair_bsis = model_bsis(pair_model);
  REQUIRE(pair_bsis.size() == 1);
  CHECK(pair_bsis[0] == testsupport::interaction({{0, -1}, {1, -1}}));

  LssModelSpec single;
  single.p = 10;
  single.terms.push_back({{5}, {-1}, {0.4}, 2.0});
  single.noise_sd = 0.1;
  const auto single_bsis = model_bsis(single);
  REQUIRE(single_bsis.size() == 2);
  CHECK(single_bsis[0] == testsupport::interaction({{5, -1}}));
  CHECK(single_bsis[1] == testsupport::interaction({{5, +1}}));

  const auto triple_bsis = model_bsis(build_benchmark_spec(2, 3, 1.0));
  REQUIRE(triple_bsis.size() == 2);
  CHECK(triple_bsis[0] == testsupport::interaction({{0, -1}, {1, -1}, {2, -1}}));
  CHECK(triple_bsis[1] == testsupport::interaction({{3, -1}, {4, -1}, {5, -1}}));
}

TEST_CASE("bsis_for_point follows the test-point side of each threshold") {
  const LssModelSpec spec = build_benchmark_spec(1, 2, 1.0);
  const double tau = spec.terms[0].thresholds[0];

  std::vector<double> x(20, 0.1);
  const auto active = bsis_for_point(spec, x);
  REQUIRE(active.size() == 1);
  CHECK(active[0] == testsupport::interaction({{0, -1}, {1, -1}}));

  x[0] = 0.9;
  CHECK(bsis_for_point(spec, x).empty());

  LssModelSpec single;
  single.p = 10;
  single.terms.push_back({{5}, {-1}, {0.4}, 2.0});
  single.noise_sd = 0.0;
  std::vector<double> above(10, 0.9);
  const auto single_active = bsis_for_point(single, above);
  REQUIRE(single_active.size() == 1);
  CHECK(single_active[0] == testsupport::interaction({{5, +1}}));

  std::vector<double> ambiguous(20, 0.1);
  ambiguous[1] = tau;
  CHECK_THROWS_WITH_AS(bsis_for_point(spec, ambiguous),
                       doctest::Contains("ambiguous test point"), std::invalid_argument);
}

TEST_CASE("every BSI for a point is a model BSI") {
  Rng rng(23);
  const LssModelSpec spec = build_benchmark_spec(2, 2, 2.0);
  const auto global = model_bsis(spec);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(20);
    for (auto& v : x) v = rng.uniform01();
    for (const auto& s : bsis_for_point(spec, x)) {
      CHECK(std::find(global.begin(), global.end(), s) != global.end());
    }
  }
}

TEST_CASE("half of uniform test points carry the benchmark pair") {
  const LssModelSpec spec = build_benchmark_spec(1, 2, 1.0);
  Rng rng(24);
  const std::size_t n = 100000;
  std::size_t with_bsi = 0;
  std::vector<double> x(20);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x) v = rng.uniform01();
    with_bsi += bsis_for_point(spec, x).empty() ? 0 : 1;
  }
  const double frac = static_cast<double>(with_bsi) / static_cast<double>(n);
  CHECK(std::abs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / static_cast<double>(n)));
}

TEST_CASE("generation is deterministic per seed") {
  const LssModelSpec spec = build_benchmark_spec(1, 3, 2.0);
  Rng a(9), b(9), c(10);
  const Dataset da = generate(spec, 50, a);
  const Dataset db = generate(spec, 50, b);
  const Dataset dc = generate(spec, 50, c);
  bool all_equal = true, any_diff = false;
  for (std::size_t i = 0; i < 50; ++i) {
    all_equal = all_equal && da.labels()[i] == db.labels()[i];
    any_diff = any_diff || da.labels()[i] != dc.labels()[i];
    for (std::size_t j = 0; j < 20; ++j) {
      all_equal = all_equal && da.at(i, j) == db.at(i, j);
    }
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("ground-truth sidecar records the model, its BSIs, tau, and sigma") {
  const LssModelSpec spec = build_benchmark_spec(2, 2, 0.5);
  const std::string path = "test_ground_truth.json";
  write_ground_truth(spec, path);

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  // sigma^2 = (2 * 0.25) / 0.5 = 1.0
  CHECK(text.find("\"sigma\": 1.0") != std::string::npos);
  CHECK(text.find("\"tau\"") != std::string::npos);
  CHECK(text.find("\"1-,2-\"") != std::string::npos);
  CHECK(text.find("\"3-,4-\"") != std::string::npos);

  const LssModelSpec loaded = read_ground_truth(path);
  std::remove(path.c_str());
  CHECK(loaded.p == spec.p);
  CHECK(loaded.noise_sd == spec.noise_sd);
  CHECK(model_bsis(loaded) == model_bsis(spec));
}

TEST_CASE("spec JSON round-trips with 1-based feature labels") {
  LssModelSpec spec;
  spec.p = 6;
  spec.intercept = -0.5;
  spec.noise_sd = 0.3;
  spec.terms.push_back({{0, 3}, {-1, +1}, {0.4, 0.7}, 1.5});
  spec.terms.push_back({{5}, {-1}, {0.25}, -2.0});

  const LssModelSpec loaded = LssModelSpec::from_json_string(spec.to_json_string());
  CHECK(loaded.p == spec.p);
  CHECK(loaded.intercept == spec.intercept);
  CHECK(loaded.noise_sd == spec.noise_sd);
  REQUIRE(loaded.terms.size() == 2);
  CHECK(loaded.terms[0].features == spec.terms[0].features);
  CHECK(loaded.terms[0].signs == spec.terms[0].signs);
  CHECK(loaded.terms[0].thresholds == spec.terms[0].thresholds);
  CHECK(loaded.terms[1].beta == -2.0);

  // 1-based in the file itself
  CHECK(spec.to_json_string().find("\"feature\": 6") != std::string::npos);

  LssModelSpec overlapping = spec;
  overlapping.terms.push_back({{3}, {-1}, {0.5}, 1.0});
  CHECK_THROWS_AS(overlapping.validate(), std::invalid_argument);
}
