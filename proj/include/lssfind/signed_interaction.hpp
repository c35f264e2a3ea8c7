#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lssfind {

// A feature index together with a split direction: -1 for the "<=" branch,
// +1 for the ">" branch. Feature indices are 0-based internally; all
// human-facing output is 1-based.
struct SignedFeature {
  std::int32_t feature = 0;
  std::int8_t sign = -1;

  friend bool operator==(const SignedFeature& a, const SignedFeature& b) {
    return a.feature == b.feature && a.sign == b.sign;
  }
  friend bool operator<(const SignedFeature& a, const SignedFeature& b) {
    if (a.feature != b.feature) return a.feature < b.feature;
    return a.sign < b.sign;
  }
};

// Canonical set of signed features: members sorted by (feature, sign),
// duplicate-free, and no feature present with both signs. The empty
// interaction is valid (its prevalence is 1 by convention).
class SignedInteraction {
 public:
  SignedInteraction() = default;
  explicit SignedInteraction(std::vector<SignedFeature> members);

  const std::vector<SignedFeature>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const SignedFeature& sf) const;

  // True if every member of this interaction is a member of `other`.
  bool subset_of(const SignedInteraction& other) const;

  // Text form `3-,7+` with 1-based feature indices; empty set prints as `{}`.
  std::string to_string() const;
  static SignedInteraction from_string(const std::string& text);

  friend bool operator==(const SignedInteraction& a, const SignedInteraction& b) {
    return a.members_ == b.members_;
  }
  // Size first, then lexicographic on members; used for deterministic ordering.
  friend bool operator<(const SignedInteraction& a, const SignedInteraction& b);

  std::size_t hash() const;

 private:
  std::vector<SignedFeature> members_;
};

struct SignedInteractionHash {
  std::size_t operator()(const SignedInteraction& s) const { return s.hash(); }
};

std::string to_string(const SignedFeature& sf);

}  // namespace lssfind
