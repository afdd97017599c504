#pragma once

#include "rric/choice_set.hpp"
#include "rric/gridworld.hpp"

#include <span>
#include <vector>

namespace rric {

/// Finite-horizon values and greedy actions indexed by (cell, steps remaining).
class ValueTable {
public:
    ValueTable(std::size_t cell_count, int horizon);

    int horizon() const noexcept { return horizon_; }
    double value(std::size_t cell, int remaining) const { return values_[slot(cell, remaining)]; }
    Action greedy_action(std::size_t cell, int remaining) const {
        return actions_[slot(cell, remaining)];
    }

private:
    friend ValueTable value_iteration(const GridWorld&, const RewardParams&);

    std::size_t slot(std::size_t cell, int remaining) const {
        return static_cast<std::size_t>(remaining) * cell_count_ + cell;
    }

    std::size_t cell_count_;
    int horizon_;
    std::vector<double> values_;
    std::vector<Action> actions_;
};

/// Backward induction over the horizon. The goal is absorbing with value 0,
/// ties go to the first maximizer in kActions order.
ValueTable value_iteration(const GridWorld& env, const RewardParams& theta);

/// Greedy rollout of `table` from the start cell.
Trajectory greedy_rollout(const GridWorld& env, const ValueTable& table);

Trajectory optimal_trajectory(const GridWorld& env, const RewardParams& theta);

/// Deduplicated optimal trajectories, one per parameter vector, in
/// first-encountered order. Throws PreconditionError for an empty grid.
ChoiceSet master_choice_set(const GridWorld& env, std::span<const RewardParams> thetas);

} // namespace rric
