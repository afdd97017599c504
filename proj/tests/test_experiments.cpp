#include "oracles.hpp"

#include "rric/environments.hpp"
#include "rric/errors.hpp"
#include "rric/experiments.hpp"
#include "rric/planner.hpp"

#include <doctest.h>

using namespace rric;

namespace {

InferenceSetup default_setup(int angles = 64) {
    const auto grid = ThetaGrid::circle(angles);
    return {grid.snap({-0.98, 2, -0.2}), kDefaultBeta, Belief::uniform(grid)};
}

// A trial recomputed with the oracle posterior and the recursive planner.
double oracle_regret(const ChoicePair& pair, const InferenceSetup& s, const GridWorld& env) {
    const auto& grid = s.prior.grid();
    const std::vector<RewardParams> pts(grid.points().begin(), grid.points().end());
    const auto& c = pair.human[oracle::first_best(env, pair.human.items(), s.theta_star)];
    const auto bh = oracle::posterior(env, c, pair.human.items(), pts, s.prior.probs(), s.beta);
    const auto br = oracle::posterior(env, c, pair.robot.items(), pts, s.prior.probs(), s.beta);
    const auto ph = oracle::recursive_plan(env, oracle::mean(pts, bh));
    const auto pr = oracle::recursive_plan(env, oracle::mean(pts, br));
    return oracle::per_step_return(env, ph, s.theta_star) - oracle::per_step_return(env, pr, s.theta_star);
}

} // namespace

TEST_CASE("run_trial") {
    const auto setup = default_setup();
    const auto envs = builtin_environment_set("paper4");
    const auto& env = envs.front();
    const auto master = master_choice_set(env, setup.prior.grid().points());

    SUBCASE("identical sets give zero change") {
        const auto r = run_trial({master, master}, setup, envs, env);
        CHECK(r.entropy_change == 0.0);
        CHECK(r.regret == 0.0);
        CHECK(r.cls == PairClass::NoMisspecification);
        for (double v : r.per_env_regret) CHECK(v == 0.0);
    }
    SUBCASE("impossible observation fails fast") {
        const auto best = human_choice(master, setup.theta_star, env);
        std::vector<Trajectory> rest;
        for (const auto& t : master)
            if (t != best) rest.push_back(t);
        CHECK_THROWS_AS(run_trial({ChoiceSet(rest), master}, setup, envs, env), ImpossibleObservation);
    }
    SUBCASE("entropy identity and regret averaging") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto pair = sample_pair(MisspecClass::B3, master, setup.theta_star, env, seed);
            const auto r = run_trial(pair, setup, envs, env);
            CHECK(std::abs(r.entropy_change - (oracle::entropy(r.belief_correct.probs()) -
                                               oracle::entropy(r.belief_misspecified.probs()))) <= 1e-12);
            REQUIRE(r.per_env_regret.size() == envs.size());
            double sum = 0;
            for (double v : r.per_env_regret) sum += v;
            CHECK(std::abs(r.regret - sum / 4) <= 1e-12);
        }
    }
    SUBCASE("swapped A1 pairs mirror exactly") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto pair = sample_pair(MisspecClass::A1, master, setup.theta_star, env, seed);
            const auto a = run_trial(pair, setup, envs, env);
            const auto b = run_trial(pair.swapped(), setup, envs, env);
            CHECK(b.cls == PairClass::A2);
            CHECK(std::abs(a.entropy_change + b.entropy_change) <= 1e-9);
            CHECK(std::abs(a.regret + b.regret) <= 1e-9);
        }
    }
}

TEST_CASE("run_trial matches an independent pipeline on small worlds") {
    Rng rng(77);
    const auto grid = ThetaGrid::circle(8);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const auto env = oracle::small_world(rng);
        const InferenceSetup s{grid[rng.uniform_int(0, 7)], rng.uniform01() * 3 + 0.2, Belief::uniform(grid)};
        const auto pool = oracle::enumerate(env, true);
        std::vector<Trajectory> h, r;
        for (int k = 0; k < 4; ++k) h.push_back(pool[rng.uniform_int(0, pool.size() - 1)]);
        const ChoiceSet human(h);
        r.push_back(human_choice(human, s.theta_star, env));
        for (int k = 0; k < 3; ++k) r.push_back(pool[rng.uniform_int(0, pool.size() - 1)]);
        const ChoicePair pair{ChoiceSet(r), human};
        const GridWorld envs[] = {env};
        const auto got = run_trial(pair, s, envs, env);
        CHECK(std::abs(got.regret - oracle_regret(pair, s, env)) <= 1e-9);
        ++checked;
    }
    CHECK(checked == 150);
}

TEST_CASE("randomized study") {
    const auto setup = default_setup();
    const auto envs = builtin_environment_set("paper4");

    RandomizedStudyOptions one;
    one.classes = {MisspecClass::A3};
    one.tuples_per_class_per_env = 1;
    const std::span<const GridWorld> first(envs.data(), 1);
    CHECK(run_randomized_study(first, setup, one).size() == 1);

    RandomizedStudyOptions opt;
    const auto a = run_randomized_study(envs, setup, opt);
    CHECK(a.size() == 120);
    const auto summary = summarize(a);
    REQUIRE(summary.classes.size() == 5);
    for (const auto& c : summary.classes) CHECK(c.count == 24);
    CHECK(summary.warnings.empty());

    opt.jobs = 4;
    const auto b = run_randomized_study(envs, setup, opt);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].cls == b[i].cls);
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].entropy_change == b[i].entropy_change);
        CHECK(a[i].per_env_regret == b[i].per_env_regret);
    }

    SUBCASE("rows replay from their seeds") {
        for (std::size_t i = 0; i < a.size(); i += 7) {
            const auto& row = a[i];
            const auto env_it = std::find_if(envs.begin(), envs.end(),
                                             [&](const GridWorld& e) { return e.id() == row.env_id; });
            REQUIRE(env_it != envs.end());
            const auto cls = static_cast<MisspecClass>(row.cls);
            const auto pair = replay_pair(cls, *env_it, setup, row.seed, opt.size_bounds);
            const auto again = run_trial(pair, setup, envs, *env_it);
            CHECK(again.entropy_change == row.entropy_change);
            CHECK(again.regret == row.regret);
        }
    }
    SUBCASE("sampled pairs respect the class invariants") {
        for (const auto& row : a) {
            CHECK(row.cls != PairClass::NoMisspecification);
            CHECK(row.cls != PairClass::Unclassifiable);
        }
    }
    SUBCASE("mirrored A2 rows negate A1 rows") {
        RandomizedStudyOptions m;
        m.classes = {MisspecClass::A1, MisspecClass::A2};
        m.mirror_a2 = true;
        const auto rows = run_randomized_study(envs, setup, m);
        const auto s = summarize(rows);
        REQUIRE(s.classes.size() == 2);
        const auto& a1 = s.classes[0].entropy_change;
        const auto& a2 = s.classes[1].entropy_change;
        CHECK(std::abs(a1.mean + a2.mean) <= 1e-9);
        CHECK(std::abs(a1.std - a2.std) <= 1e-9);
        CHECK(std::abs(a1.q1 + a2.q3) <= 1e-9);
        CHECK(std::abs(s.classes[0].regret.mean + s.classes[1].regret.mean) <= 1e-9);
        CHECK(s.warnings.size() == 3);
    }
}

TEST_CASE("summary statistics") {
    const std::vector<double> one{3.5};
    const auto s1 = describe(one);
    CHECK(s1.mean == 3.5);
    CHECK(s1.median == 3.5);
    CHECK(s1.min == 3.5);
    CHECK(s1.max == 3.5);
    CHECK(s1.std == 0.0);
    const std::vector<double> two{0, 2};
    const auto s2 = describe(two);
    CHECK(s2.mean == 1.0);
    CHECK(s2.std == 1.0);
    CHECK(s2.q1 == 0.5);
    CHECK(s2.q3 == 1.5);
    CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
    CHECK(quantile({4, 1, 3, 2}, 0.25) == 1.75);
    CHECK(quantile({4, 1, 3, 2}, 0.0) == 1.0);
    CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
    CHECK_THROWS_AS(quantile({}, 0.5), PreconditionError);

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + rng.uniform_int(0, 30));
        for (auto& x : v) x = rng.uniform01() * 10 - 5;
        const auto s = describe(v);
        CHECK(s.min <= s.q1);
        CHECK(s.q1 <= s.median);
        CHECK(s.median <= s.q3);
        CHECK(s.q3 <= s.max);
    }
    CHECK(summarize({}).warnings.size() == 5);
}

TEST_CASE("symmetry verification") {
    const auto setup = default_setup();
    const auto envs = builtin_environment_set("paper4");
    const auto& env = envs.front();
    const auto master = master_choice_set(env, setup.prior.grid().points());
    const auto sampler = SymmetricPairSampler::common_argmax(master, setup.theta_star, env, 30, {}, 5);
    CHECK(sampler.support().size() == 30);
    CHECK_FALSE(sampler.common_argmax_violation(setup.theta_star, env).has_value());

    const auto report = run_symmetry_verification(sampler, setup, envs, env, 500, 9);
    CHECK(report.trials.size() == 60);
    CHECK(report.max_antisymmetry_residual <= 1e-9);
    CHECK(report.max_entropy_antisymmetry_residual <= 1e-9);
    CHECK(std::abs(report.expected_regret) <= 1e-9);
    CHECK(report.n_draws == 500);

    SUBCASE("draws are symmetric in orientation") {
        Rng rng(1);
        int flipped = 0;
        const auto& [x, y] = sampler.support().front();
        for (int i = 0; i < 4000; ++i) {
            const auto d = sampler.draw(rng);
            if (d.human == y && d.robot == x) ++flipped;
        }
        CHECK(flipped > 40);
    }
    SUBCASE("a support without a common argmax is rejected") {
        const auto best = human_choice(master, setup.theta_star, env);
        std::vector<Trajectory> rest;
        for (const auto& t : master)
            if (t != best) rest.push_back(t);
        const ChoiceSet with_best({best, rest[0]});
        const ChoiceSet without({rest[0], rest[1]});
        const SymmetricPairSampler bad({{with_best, without}});
        CHECK(bad.common_argmax_violation(setup.theta_star, env).has_value());
        CHECK_THROWS_AS(run_symmetry_verification(bad, setup, envs, env, 10, 0), PreconditionError);
    }
}

TEST_CASE("goal-bias study") {
    SUBCASE("an all-goal master set shows no misspecification") {
        const auto grid = ThetaGrid::circle(16, 50.0);
        const InferenceSetup s{grid[9], 1.0, Belief::uniform(grid)};
        Rng rng(6);
        const auto env = oracle::small_world(rng, 4, 8);
        const auto r = run_goal_bias_study(env, s);
        CHECK(r.entropy_change == 0.0);
        CHECK(r.regret == 0.0);
    }
    SUBCASE("no goal-reaching demonstration") {
        const auto grid = ThetaGrid::circle(8, -50.0);
        const InferenceSetup s{grid[0], 1.0, Belief::uniform(grid)};
        const GridWorld env(3, 3, 4, {0, 0}, {2, 2}, std::vector<double>(9, 0.0));
        CHECK_THROWS_AS(run_goal_bias_study(env, s), EmptyBiasSet);
    }
    SUBCASE("the shipped bias environment") {
        const auto setup = default_setup();
        const auto env = builtin_environment_set("bias1").front();
        const auto r = run_goal_bias_study(env, setup);
        const auto master = master_choice_set(env, setup.prior.grid().points());
        const auto biased = goal_biased_subset(master, env);
        CHECK(biased.size() < master.size());
        // Dropping the robot-only trajectories leaves nothing to distinguish.
        const GridWorld envs[] = {env};
        const auto same = run_trial({biased, biased}, setup, envs, env);
        CHECK(same.entropy_change == 0.0);
        CHECK(r.entropy_change < 0.0);
        CHECK(r.regret > 0.0);
    }
}

TEST_CASE("B3 worst case") {
    const auto setup = default_setup();
    const auto env = builtin_environment_set("worstcase1").front();
    const auto w = run_b3_worst_case(env, setup);
    CHECK(w.b2.cls == PairClass::B2);
    CHECK(w.b3.cls == PairClass::B3);
    CHECK(w.b2_pair.human == w.b3_pair.human);
    CHECK(w.b2_pair.human.size() == 2);
    CHECK(w.b3.regret > w.b2.regret);
    CHECK(w.theta_star_negative);
    CHECK(w.b3_peak_positive);
    CHECK(w.b3_peak.w_lava > 0);
    CHECK(w.b3_peak.w_alive > 0);
    // The human's choice is the worst option of the B3 robot set.
    const auto c = human_choice(w.b3_pair.human, setup.theta_star, env);
    for (const auto& t : w.b3_pair.robot)
        CHECK(trajectory_return(env, t, setup.theta_star) >= trajectory_return(env, c, setup.theta_star));

    SUBCASE("a flat world cannot host the construction") {
        const GridWorld flat(4, 4, 6, {0, 0}, {3, 3}, std::vector<double>(16, 0.0));
        CHECK_THROWS_AS(run_b3_worst_case(flat, default_setup(16)), InfeasibleConstruction);
    }
}
