#include "lssfind/signed_interaction.hpp"

#include <algorithm>
#include <stdexcept>

namespace lssfind {

SignedInteraction::SignedInteraction(std::vector<SignedFeature> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i].feature == members_[i - 1].feature) {
      throw std::invalid_argument("signed interaction holds both signs of feature " +
                                  std::to_string(members_[i].feature + 1));
    }
  }
}

bool SignedInteraction::contains(const SignedFeature& sf) const {
  return std::binary_search(members_.begin(), members_.end(), sf);
}

bool SignedInteraction::subset_of(const SignedInteraction& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

std::string to_string(const SignedFeature& sf) {
  return std::to_string(sf.feature + 1) + (sf.sign < 0 ? '-' : '+');
}

std::string SignedInteraction::to_string() const {
  if (members_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i > 0) out += ',';
    out += lssfind::to_string(members_[i]);
  }
  return out;
}

SignedInteraction SignedInteraction::from_string(const std::string& text) {
  if (text.empty() || text == "{}") return SignedInteraction{};
  std::vector<SignedFeature> members;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(pos, end - pos);
    if (tok.size() < 2) throw std::invalid_argument("bad signed feature token: '" + tok + "'");
    const char sign_ch = tok.back();
    if (sign_ch != '-' && sign_ch != '+') {
      throw std::invalid_argument("signed feature must end in '-' or '+': '" + tok + "'");
    }
    int idx = 0;
    try {
      idx = std::stoi(tok.substr(0, tok.size() - 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad feature index in token: '" + tok + "'");
    }
    if (idx < 1) throw std::invalid_argument("feature indices in text form are 1-based");
    members.push_back({idx - 1, sign_ch == '-' ? std::int8_t{-1} : std::int8_t{+1}});
    pos = end + 1;
  }
  return SignedInteraction(std::move(members));
}

bool operator<(const SignedInteraction& a, const SignedInteraction& b) {
  if (a.members_.size() != b.members_.size()) return a.members_.size() < b.members_.size();
  return std::lexicographical_compare(a.members_.begin(), a.members_.end(), b.members_.begin(),
                                      b.members_.end());
}

std::size_t SignedInteraction::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& m : members_) {
    const std::uint64_t v =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(m.feature)) << 1) |
        (m.sign > 0 ? 1u : 0u);
    h ^= v;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace lssfind
