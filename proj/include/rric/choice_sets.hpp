#pragma once

#include "rric/choice_set.hpp"
#include "rric/gridworld.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rric {

/// The five realizable misspecification classes. Letter: where the optimal
/// element sits (A: in both sets, B: robot-only). Digit: robot set is a
/// strict subset (1), strict superset (2) or a proper intersection (3) of
/// the human set. B1 cannot occur.
enum class MisspecClass : std::uint8_t { A1, A2, A3, B2, B3 };

inline constexpr std::array<MisspecClass, 5> kMisspecClasses = {
    MisspecClass::A1, MisspecClass::A2, MisspecClass::A3, MisspecClass::B2, MisspecClass::B3};

/// Result of classifying a pair: one of the five classes, or one of the two
/// outcomes outside the taxonomy.
enum class PairClass : std::uint8_t { A1, A2, A3, B2, B3, NoMisspecification, Unclassifiable };

constexpr PairClass to_pair_class(MisspecClass c) { return static_cast<PairClass>(c); }

std::string_view to_string(MisspecClass c);
std::string_view to_string(PairClass c);
/// Accepts "A1".."B3" (case-insensitive). Throws UsageError otherwise.
MisspecClass parse_misspec_class(std::string_view text);

/// The robot's assumed choice set and the human's actual one.
struct ChoicePair {
    ChoiceSet robot;
    ChoiceSet human;

    ChoicePair swapped() const { return ChoicePair{human, robot}; }
    friend bool operator==(const ChoicePair&, const ChoicePair&) = default;
};

/// Inclusive bounds on sampled choice set sizes.
struct SizeBounds {
    int min = 2;
    int max = 6;
};

/// Best element of `set` under the true reward; first index wins ties.
Trajectory human_choice(const ChoiceSet& set, const RewardParams& theta_star,
                        const GridWorld& env);

/// Best element of robot ∪ human under the true reward. Among tied
/// maximizers, members of both sets come first, then robot-only, then
/// human-only members; robot order then human order within each group.
Trajectory optimal_element(const ChoicePair& pair, const RewardParams& theta_star,
                           const GridWorld& env);

/// Position of `pair` in the misspecification taxonomy. Total over pairs of
/// non-empty sets: disjoint sets, or an optimal element only the human
/// holds, give Unclassifiable.
PairClass classify(const ChoicePair& pair, const RewardParams& theta_star, const GridWorld& env);

/// Empty when the pair is usable for inference; otherwise the reason
/// (disjoint sets, or the human's choice missing from the robot's set).
std::optional<std::string> pair_violation(const ChoicePair& pair, const RewardParams& theta_star,
                                          const GridWorld& env);

inline constexpr int kDefaultRejectionBudget = 10'000;

/// Draws a pair of subsets of `master` that classifies as `cls` and keeps the
/// human's choice inside the robot's set. Deterministic in `seed`. Throws
/// InfeasibleClass when `master` is too small or the rejection budget runs out.
ChoicePair sample_pair(MisspecClass cls, const ChoiceSet& master, const RewardParams& theta_star,
                       const GridWorld& env, std::uint64_t seed, SizeBounds bounds = {},
                       int rejection_budget = kDefaultRejectionBudget);

/// Members of `master` that end at the goal, in order. Throws EmptyBiasSet
/// when none do.
ChoiceSet goal_biased_subset(const ChoiceSet& master, const GridWorld& env);

} // namespace rric
