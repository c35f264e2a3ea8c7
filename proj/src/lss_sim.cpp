#include "lssfind/lss_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace lssfind {

void LssModelSpec::validate() const {
  if (p < 1) throw std::invalid_argument("spec needs p >= 1");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise_sd must be >= 0");
  std::set<std::int32_t> used;
  for (const auto& term : terms) {
    if (term.features.empty()) throw std::invalid_argument("term without features");
    if (term.features.size() != term.signs.size() ||
        term.features.size() != term.thresholds.size()) {
      throw std::invalid_argument("term features/signs/thresholds sizes differ");
    }
    if (term.beta == 0.0) throw std::invalid_argument("term coefficient must be nonzero");
    for (std::size_t i = 0; i < term.features.size(); ++i) {
      const std::int32_t k = term.features[i];
      if (k < 0 || k >= p) throw std::invalid_argument("term feature out of range");
      if (!used.insert(k).second) {
        throw std::invalid_argument("interaction feature sets must be disjoint");
      }
      if (!(term.thresholds[i] > 0.0 && term.thresholds[i] < 1.0)) {
        throw std::invalid_argument("thresholds must lie in (0,1)");
      }
      if (term.signs[i] != -1 && term.signs[i] != 1) {
        throw std::invalid_argument("signs must be -1 or +1");
      }
    }
  }
}

double LssModelSpec::regression_function(std::span<const double> x) const {
  double y = intercept;
  for (const auto& term : terms) {
    bool active = true;
    for (std::size_t i = 0; i < term.features.size() && active; ++i) {
      const double v = x[term.features[i]];
      active = term.signs[i] < 0 ? (v <= term.thresholds[i]) : (v > term.thresholds[i]);
    }
    if (active) y += term.beta;
  }
  return y;
}

double benchmark_tau(int term_size) { return std::pow(0.5, 1.0 / term_size); }

LssModelSpec build_benchmark_spec(int j_terms, int term_size, double snr, int p) {
  if (j_terms < 1 || term_size < 1) throw std::invalid_argument("J and L must be >= 1");
  if (!(snr > 0.0)) throw std::invalid_argument("SNR must be > 0");
  if (j_terms * term_size > p) {
    throw std::invalid_argument("J*L exceeds the number of features");
  }
  const double tau = benchmark_tau(term_size);
  LssModelSpec spec;
  spec.p = p;
  // Each product term is Bernoulli(tau^L = 1/2) and terms are independent by
  // disjointness, so Var(signal) = J/4.
  const double signal_var = 0.25 * j_terms;
  spec.noise_sd = std::sqrt(signal_var / snr);
  for (int j = 0; j < j_terms; ++j) {
    LssTerm term;
    term.beta = 1.0;
    for (int i = 0; i < term_size; ++i) {
      term.features.push_back(j * term_size + i);
      term.signs.push_back(-1);
      term.thresholds.push_back(tau);
    }
    spec.terms.push_back(std::move(term));
  }
  spec.validate();
  return spec;
}

Dataset generate(const LssModelSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  Dataset data(n, spec.p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int32_t j = 0; j < spec.p; ++j) data.at(i, j) = rng.uniform01();
  }
  std::vector<double> x(spec.p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int32_t j = 0; j < spec.p; ++j) x[j] = data.at(i, j);
    double y = spec.regression_function(x);
    if (spec.noise_sd > 0.0) y += spec.noise_sd * rng.normal();
    data.labels()[i] = y;
  }
  return data;
}

namespace {

SignedInteraction term_interaction(const LssTerm& term, bool flip = false) {
  std::vector<SignedFeature> members;
  for (std::size_t i = 0; i < term.features.size(); ++i) {
    std::int8_t sign = term.signs[i];
    if (flip) sign = static_cast<std::int8_t>(-sign);
    members.push_back({term.features[i], sign});
  }
  return SignedInteraction(std::move(members));
}

}  // namespace

std::vector<SignedInteraction> model_bsis(const LssModelSpec& spec) {
  spec.validate();
  std::vector<SignedInteraction> out;
  for (const auto& term : spec.terms) {
    out.push_back(term_interaction(term));
    // Single-feature terms are sign-ambiguous: 1(x<=g) = 1 - 1(x>g).
    if (term.features.size() == 1) out.push_back(term_interaction(term, /*flip=*/true));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SignedInteraction> bsis_for_point(const LssModelSpec& spec,
                                              std::span<const double> x_test) {
  spec.validate();
  if (static_cast<std::int32_t>(x_test.size()) != spec.p) {
    throw std::invalid_argument("test point dimension mismatch");
  }
  std::vector<SignedInteraction> out;
  for (const auto& term : spec.terms) {
    for (std::size_t i = 0; i < term.features.size(); ++i) {
      if (x_test[term.features[i]] == term.thresholds[i]) {
        throw std::invalid_argument("ambiguous test point: coordinate " +
                                    std::to_string(term.features[i] + 1) +
                                    " equals its threshold");
      }
    }
    if (term.features.size() == 1) {
      // Exactly one signed version holds, by the side of the threshold.
      const bool below = x_test[term.features[0]] <= term.thresholds[0];
      const bool term_is_le = term.signs[0] < 0;
      out.push_back(term_interaction(term, /*flip=*/below != term_is_le));
      continue;
    }
    bool active = true;
    for (std::size_t i = 0; i < term.features.size() && active; ++i) {
      const double v = x_test[term.features[i]];
      active = term.signs[i] < 0 ? (v <= term.thresholds[i]) : (v > term.thresholds[i]);
    }
    if (active) out.push_back(term_interaction(term));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

nlohmann::json spec_to_json(const LssModelSpec& spec) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& term : spec.terms) {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < term.features.size(); ++i) {
      features.push_back({{"feature", term.features[i] + 1},  // 1-based in files
                          {"sign", term.signs[i] < 0 ? "-" : "+"},
                          {"threshold", term.thresholds[i]}});
    }
    terms.push_back({{"beta", term.beta}, {"members", std::move(features)}});
  }
  return nlohmann::json{{"p", spec.p},
                        {"intercept", spec.intercept},
                        {"noise_sd", spec.noise_sd},
                        {"terms", std::move(terms)}};
}

LssModelSpec spec_from_json(const nlohmann::json& doc) {
  LssModelSpec spec;
  spec.p = doc.at("p").get<std::int32_t>();
  spec.intercept = doc.value("intercept", 0.0);
  spec.noise_sd = doc.at("noise_sd").get<double>();
  for (const auto& jt : doc.at("terms")) {
    LssTerm term;
    term.beta = jt.at("beta").get<double>();
    for (const auto& jm : jt.at("members")) {
      term.features.push_back(jm.at("feature").get<std::int32_t>() - 1);
      const std::string sign = jm.at("sign").get<std::string>();
      if (sign != "-" && sign != "+") throw std::invalid_argument("bad sign in spec JSON");
      term.signs.push_back(sign == "-" ? std::int8_t{-1} : std::int8_t{+1});
      term.thresholds.push_back(jm.at("threshold").get<double>());
    }
    spec.terms.push_back(std::move(term));
  }
  spec.validate();
  return spec;
}

}  // namespace

std::string LssModelSpec::to_json_string() const { return spec_to_json(*this).dump(2); }

LssModelSpec LssModelSpec::from_json_string(const std::string& text) {
  return spec_from_json(nlohmann::json::parse(text));
}

void write_ground_truth(const LssModelSpec& spec, const std::string& path) {
  nlohmann::json doc;
  doc["schema"] = "lssfind.ground_truth/1";
  doc["spec"] = spec_to_json(spec);
  nlohmann::json bsis = nlohmann::json::array();
  for (const auto& s : model_bsis(spec)) bsis.push_back(s.to_string());
  doc["model_bsis"] = std::move(bsis);
  doc["sigma"] = spec.noise_sd;
  // Convenience field when every threshold is shared (the benchmark case).
  bool uniform_tau = !spec.terms.empty();
  double tau = uniform_tau ? spec.terms[0].thresholds[0] : 0.0;
  for (const auto& term : spec.terms) {
    for (double g : term.thresholds) uniform_tau = uniform_tau && g == tau;
  }
  if (uniform_tau) doc["tau"] = tau;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ground truth file: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

LssModelSpec read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open ground truth file: " + path);
  nlohmann::json doc;
  in >> doc;
  return spec_from_json(doc.at("spec"));
}

}  // namespace lssfind
