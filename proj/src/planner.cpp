#include "rric/planner.hpp"

#include "rric/errors.hpp"

#include <algorithm>
#include <limits>

namespace rric {

ValueTable::ValueTable(std::size_t cell_count, int horizon)
    : cell_count_(cell_count), horizon_(horizon),
      values_(cell_count * static_cast<std::size_t>(horizon + 1), 0.0),
      actions_(cell_count * static_cast<std::size_t>(horizon + 1), kActions.front()) {}

ValueTable value_iteration(const GridWorld& env, const RewardParams& theta) {
    const std::size_t n = env.cell_count();
    ValueTable table(n, env.horizon());

    // Successor index and entry reward per (cell, action) do not depend on the budget.
    std::vector<std::size_t> next(n * kActions.size());
    std::vector<double> reward(n * kActions.size());
    for (std::size_t s = 0; s < n; ++s) {
        const Cell from = env.cell_at(s);
        for (std::size_t a = 0; a < kActions.size(); ++a) {
            const Cell to = step(env, from, kActions[a]);
            next[s * kActions.size() + a] = env.index(to);
            reward[s * kActions.size() + a] = env.entry_reward(to, theta);
        }
    }

    const std::size_t goal = env.index(env.goal());
    for (int t = 1; t <= env.horizon(); ++t) {
        for (std::size_t s = 0; s < n; ++s) {
            if (s == goal) continue; // absorbing, value stays 0
            double q[kActions.size()];
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < kActions.size(); ++a) {
                const std::size_t k = s * kActions.size() + a;
                q[a] = reward[k] + table.value(next[k], t - 1);
                top = std::max(top, q[a]);
            }
            std::size_t best_a = 0;
            while (q[best_a] < top - kTieTolerance) ++best_a;
            const double best = q[best_a];
            table.values_[table.slot(s, t)] = best;
            table.actions_[table.slot(s, t)] = kActions[best_a];
        }
    }
    return table;
}

Trajectory greedy_rollout(const GridWorld& env, const ValueTable& table) {
    Trajectory traj;
    Cell cur = env.start();
    traj.states.push_back(cur);
    for (int t = env.horizon(); t > 0 && !env.is_goal(cur); --t) {
        cur = step(env, cur, table.greedy_action(env.index(cur), t));
        traj.states.push_back(cur);
    }
    return traj;
}

Trajectory optimal_trajectory(const GridWorld& env, const RewardParams& theta) {
    return greedy_rollout(env, value_iteration(env, theta));
}

ChoiceSet master_choice_set(const GridWorld& env, std::span<const RewardParams> thetas) {
    if (thetas.empty()) throw PreconditionError("master_choice_set needs at least one parameter vector");
    std::vector<Trajectory> out;
    out.reserve(thetas.size());
    for (const auto& theta : thetas) out.push_back(optimal_trajectory(env, theta));
    return ChoiceSet(std::move(out));
}

} // namespace rric
