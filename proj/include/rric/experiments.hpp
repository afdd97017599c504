#pragma once

#include "rric/choice_sets.hpp"
#include "rric/gridworld.hpp"
#include "rric/inference.hpp"
#include "rric/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rric {

/// Correct-vs-misspecified inference outcome for one choice set pair.
struct TrialResult {
    PairClass cls;
    std::string env_id;
    std::uint64_t seed = 0;
    double entropy_correct = 0.0;
    double entropy_misspec = 0.0;
    /// H(correct) - H(misspecified); positive means overconfidence.
    double entropy_change = 0.0;
    /// True return of planning under the correct belief minus that under the
    /// misspecified belief, one entry per evaluation environment.
    std::vector<double> per_env_regret;
    double regret = 0.0;
    Belief belief_correct;
    Belief belief_misspecified;
};

/// Shared inputs of every study.
struct InferenceSetup {
    RewardParams theta_star;
    double beta = kDefaultBeta;
    Belief prior;
};

/// Simulates the human on `pair.human`, infers with both sets and compares
/// the plans of the two belief means on every environment in `envs`.
/// Throws ImpossibleObservation when the human's choice is not in `pair.robot`.
TrialResult run_trial(const ChoicePair& pair, const InferenceSetup& setup,
                      std::span<const GridWorld> envs, const GridWorld& feedback_env);

struct RandomizedStudyOptions {
    std::vector<MisspecClass> classes{kMisspecClasses.begin(), kMisspecClasses.end()};
    int tuples_per_class_per_env = 6;
    SizeBounds size_bounds;
    std::uint64_t seed = 0;
    int jobs = 1;
    /// Build the A2 pairs as orientation swaps of the A1 pairs instead of
    /// sampling them independently. Needs both classes requested.
    bool mirror_a2 = false;
};

/// Every requested class on every environment; regret is averaged over all
/// of `envs`. Results are sorted by (class, env_id, seed).
std::vector<TrialResult> run_randomized_study(std::span<const GridWorld> envs,
                                              const InferenceSetup& setup,
                                              const RandomizedStudyOptions& options);

/// Regenerates the pair a randomized-study row was built from.
ChoicePair replay_pair(MisspecClass cls, const GridWorld& env, const InferenceSetup& setup,
                       std::uint64_t seed, SizeBounds bounds);

struct Stats {
    double mean = 0.0;
    double std = 0.0; // population
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Linear-interpolation quantile of `values` (any order), q in [0,1].
double quantile(std::vector<double> values, double q);
Stats describe(std::span<const double> values);

struct ClassSummary {
    PairClass cls;
    std::size_t count = 0;
    Stats entropy_change;
    Stats regret;
};

struct Summary {
    std::vector<ClassSummary> classes;
    /// One record per requested-but-empty class bucket.
    std::vector<std::string> warnings;
};

/// Per-class statistics in class order. Buckets of the five misspecification
/// classes that have no results are omitted and reported as warnings.
Summary summarize(std::span<const TrialResult> results);

/// A symmetric distribution over ordered choice set pairs: an unordered pair
/// is drawn uniformly from the support, then oriented by a fair coin.
class SymmetricPairSampler {
public:
    explicit SymmetricPairSampler(std::vector<std::pair<ChoiceSet, ChoiceSet>> support);

    /// Random subsets of `master` that all contain the element of `master`
    /// that is best under `theta_star`; that element is listed first in
    /// every set so it is each set's argmax even under ties.
    static SymmetricPairSampler common_argmax(const ChoiceSet& master,
                                              const RewardParams& theta_star,
                                              const GridWorld& env, std::size_t support_pairs,
                                              SizeBounds bounds, std::uint64_t seed);

    const std::vector<std::pair<ChoiceSet, ChoiceSet>>& support() const noexcept {
        return support_;
    }

    /// Ordered draw: first = human set, second = robot set.
    ChoicePair draw(Rng& rng) const;

    /// Empty when every set in the support has the same argmax under
    /// `theta_star`; otherwise a description of the first violation.
    std::optional<std::string> common_argmax_violation(const RewardParams& theta_star,
                                                       const GridWorld& env) const;

private:
    std::vector<std::pair<ChoiceSet, ChoiceSet>> support_;
};

struct SymmetryReport {
    std::size_t support_pairs = 0;
    double max_antisymmetry_residual = 0.0;
    double max_entropy_antisymmetry_residual = 0.0;
    /// Exact expectation over both orientations of every support pair.
    double expected_regret = 0.0;
    double expected_entropy_change = 0.0;
    std::size_t n_draws = 0;
    /// Monte Carlo estimate from `n_draws` sampler draws.
    double sampled_expected_regret = 0.0;
    std::vector<TrialResult> trials;
};

/// Evaluates both orientations of every support pair. Throws
/// PreconditionError if the support violates the common-argmax condition.
SymmetryReport run_symmetry_verification(const SymmetricPairSampler& sampler,
                                         const InferenceSetup& setup,
                                         std::span<const GridWorld> envs,
                                         const GridWorld& feedback_env, std::size_t n_draws,
                                         std::uint64_t seed, int jobs = 1);

/// Robot assumes the full master set, human only considers goal-reaching
/// demonstrations. Regret is measured on `env` alone.
TrialResult run_goal_bias_study(const GridWorld& env, const InferenceSetup& setup);

struct WorstCaseReport {
    ChoicePair b2_pair;
    ChoicePair b3_pair;
    TrialResult b2;
    TrialResult b3;
    RewardParams b2_peak;
    RewardParams b3_peak;
    bool theta_star_negative = false; // w_lava < 0 and w_alive < 0
    bool b3_peak_positive = false;    // w_lava > 0 and w_alive > 0
    bool b3_regret_exceeds_b2 = false;
};

/// Builds a two-element human set of poor demonstrations and two robot sets
/// around it: a superset (B2) and an intersecting set in which the human's
/// choice is the worst option (B3). Throws InfeasibleConstruction if the
/// environment's master set does not admit the construction.
WorstCaseReport run_b3_worst_case(const GridWorld& env, const InferenceSetup& setup);

} // namespace rric
