#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lssfind/signed_interaction.hpp"
#include "lssfind/tree.hpp"

namespace lssfind {

// Signed features whose first occurrence on the path achieved an impurity
// decrease >= epsilon. Each feature is judged at its first occurrence only,
// so the result is monotone (shrinking) in epsilon. Epsilon lives on the same
// N/n-weighted scale as the recorded decreases; tools reporting unweighted
// impurity decreases differ by a factor of n.
SignedInteraction extract_signed_set(const Path& path, double epsilon);

// Every root-to-leaf path with its Kraft weight 2^(-depth); weights sum to 1.
void for_each_path(const Tree& tree, const std::function<void(const Path&, double)>& fn);
std::vector<std::pair<Path, double>> enumerate_paths(const Tree& tree);

// All nonempty subsets of size <= s_max, canonical and duplicate-free.
// Generated per size, so cost is sum of binomials rather than 2^|S|.
std::vector<SignedInteraction> subsets_up_to(const SignedInteraction& interaction, int s_max);

// Calls fn once per nonempty subset of size <= s_max without materializing
// the whole list.
void for_each_subset_up_to(const SignedInteraction& interaction, int s_max,
                           const std::function<void(const SignedInteraction&)>& fn);

}  // namespace lssfind
