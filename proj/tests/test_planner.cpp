#include "oracles.hpp"

#include "rric/errors.hpp"
#include "rric/inference.hpp"
#include "rric/planner.hpp"

#include <doctest.h>

using namespace rric;

TEST_CASE("value_iteration with zero reward") {
    Rng rng(2);
    const auto env = oracle::small_world(rng);
    const auto table = value_iteration(env, {0, 0, 0});
    for (std::size_t c = 0; c < env.cell_count(); ++c)
        for (int t = 0; t <= env.horizon(); ++t) {
            CHECK(table.value(c, t) == 0.0);
            if (t > 0 && !env.is_goal(env.cell_at(c))) CHECK(table.greedy_action(c, t) == Action::N);
        }
    const auto a = optimal_trajectory(env, {0, 0, 0});
    const auto b = optimal_trajectory(env, {0, 0, 0});
    CHECK(a == b);
    CHECK(validate_trajectory(env, a));
}

TEST_CASE("one-step goal capture") {
    const GridWorld env(2, 2, 5, {0, 0}, {1, 0}, std::vector<double>(4, 0.0));
    const RewardParams theta{0, 2, -0.1};
    const auto table = value_iteration(env, theta);
    CHECK(table.value(env.index(env.start()), env.horizon()) == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(optimal_trajectory(env, theta) == Trajectory{{{0, 0}, {1, 0}}});
}

TEST_CASE("value_iteration agrees with exhaustive enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const auto env = oracle::small_world(rng);
        const auto theta = oracle::random_theta(rng);
        const auto table = value_iteration(env, theta);
        const double v = table.value(env.index(env.start()), env.horizon());
        CHECK(std::abs(v - oracle::best_return(env, theta)) <= 1e-12);

        const auto traj = optimal_trajectory(env, theta);
        CHECK(validate_trajectory(env, traj));
        CHECK(std::abs(trajectory_return(env, traj, theta) - v) <= 1e-12);
        CHECK(traj == oracle::recursive_plan(env, theta));
    }
}

TEST_CASE("Bellman consistency") {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto env = oracle::small_world(rng, 4, 6);
        const auto theta = oracle::random_theta(rng);
        const auto table = value_iteration(env, theta);
        for (std::size_t c = 0; c < env.cell_count(); ++c) {
            const Cell cell = env.cell_at(c);
            for (int t = 1; t <= env.horizon(); ++t) {
                if (env.is_goal(cell)) {
                    CHECK(table.value(c, t) == 0.0);
                    continue;
                }
                const double v = table.value(c, t);
                for (auto a : kActions) {
                    const Cell n = step(env, cell, a);
                    const double q = oracle::cell_reward(env, n, theta) + table.value(env.index(n), t - 1);
                    CHECK(v >= q - 1e-12);
                    if (a == table.greedy_action(c, t)) CHECK(std::abs(v - q) <= 1e-12);
                }
            }
        }
        for (std::size_t c = 0; c < env.cell_count(); ++c) CHECK(table.value(c, 0) == 0.0);
    }
}

TEST_CASE("master_choice_set") {
    Rng rng(13);
    const auto env = oracle::small_world(rng);
    const RewardParams t{-1, 2, -0.1};
    const std::vector<RewardParams> one{t};
    CHECK(master_choice_set(env, one).size() == 1);
    const std::vector<RewardParams> dup{t, t};
    CHECK(master_choice_set(env, dup).size() == 1);
    CHECK_THROWS_AS(master_choice_set(env, std::span<const RewardParams>{}), PreconditionError);

    SUBCASE("members are optimal for some grid point") {
        const auto grid = ThetaGrid::circle(16);
        for (int trial = 0; trial < 20; ++trial) {
            const auto w = oracle::small_world(rng, 4, 5);
            const auto master = master_choice_set(w, grid.points());
            for (std::size_t i = 0; i < master.size(); ++i) {
                CHECK(validate_trajectory(w, master[i]));
                for (std::size_t j = 0; j < i; ++j) CHECK(master[i] != master[j]);
                bool optimal = false;
                for (const auto& th : grid.points())
                    optimal = optimal || std::abs(oracle::per_step_return(w, master[i], th) -
                                                  oracle::best_return(w, th)) <= 1e-12;
                CHECK(optimal);
            }
            // First-encountered order.
            CHECK(master[0] == optimal_trajectory(w, grid[0]));
        }
    }
}
