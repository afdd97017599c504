#include "oracles.hpp"

#include "rric/errors.hpp"
#include "rric/inference.hpp"
#include "rric/planner.hpp"

#include <doctest.h>

#include <numbers>

using namespace rric;

namespace {

// Returns 1 and 0 under theta = (1, 0, 0): one step into lava 1, one into lava 0.
struct TwoOptions {
    GridWorld env{3, 3, 4, {0, 0}, {2, 2}, {0, 1, 0, 0, 0, 0, 0, 0, 0}};
    Trajectory hot{{{0, 0}, {1, 0}}};
    Trajectory cold{{{0, 0}, {0, 1}}};
    ChoiceSet set{{hot, cold}};
};

std::vector<Trajectory> random_options(Rng& rng, const GridWorld& env, std::size_t max) {
    const auto all = oracle::enumerate(env, false);
    std::vector<Trajectory> out;
    const auto n = 1 + rng.uniform_int(0, max - 1);
    while (out.size() < n) {
        const auto& t = all[rng.uniform_int(0, all.size() - 1)];
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    return out;
}

} // namespace

TEST_CASE("theta grid lies on the unit circle") {
    for (int n : {8, 16, 64, 100}) {
        const auto g = ThetaGrid::circle(n);
        REQUIRE(g.size() == static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(std::abs(g[i].w_lava * g[i].w_lava + g[i].w_alive * g[i].w_alive - 1) <= 1e-9);
            CHECK(g[i].w_goal == kDefaultGoalWeight);
            for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(g[i] == g[j]);
            CHECK(g.nearest(g[i]) == i);
        }
    }
    const auto g = ThetaGrid::circle(64);
    CHECK(g[0] == RewardParams{1, 2, 0});
    CHECK(g[16] == RewardParams{0, 2, 1});
    CHECK(g.snap({-0.98, 2, -0.2}).w_lava < -0.98);
    CHECK_THROWS(ThetaGrid::circle(0));
}

TEST_CASE("Belief validation") {
    const auto g = ThetaGrid::circle(8);
    CHECK_THROWS_AS(Belief(g, std::vector<double>(7, 1.0 / 7)), PreconditionError);
    CHECK_THROWS_AS(Belief(g, std::vector<double>(8, 0.2)), PreconditionError);
    std::vector<double> neg(8, 0.0);
    neg[0] = 1.5;
    neg[1] = -0.5;
    CHECK_THROWS_AS(Belief(g, neg), PreconditionError);
    CHECK(Belief::point_mass(g, 3).peak() == 3);
    CHECK(Belief::uniform(g).peak() == 0);
}

TEST_CASE("boltzmann_likelihood") {
    TwoOptions o;
    const RewardParams lava_lover{1, 0, 0};
    CHECK(boltzmann_likelihood(o.hot, o.set, lava_lover, std::log(3.0), o.env) ==
          doctest::Approx(0.75).epsilon(1e-14));
    CHECK(boltzmann_likelihood(o.hot, ChoiceSet({o.hot}), lava_lover, 5.0, o.env) == 1.0);

    Rng rng(3);
    const auto env = oracle::small_world(rng);
    const auto opts = random_options(rng, env, 4);
    if (opts.size() == 4) {
        const ChoiceSet four(opts);
        CHECK(boltzmann_likelihood(four[2], four, {-1, 2, -1}, 0.0, env) == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(boltzmann_likelihood(Trajectory{{{0, 0}, {1, 1}}}, o.set, lava_lover, 1, o.env),
                    PreconditionError);
    CHECK_THROWS_AS(boltzmann_likelihood(o.hot, o.set, lava_lover, -1, o.env), PreconditionError);

    SUBCASE("finite at extreme beta") {
        const double p = boltzmann_likelihood(o.hot, o.set, lava_lover, 1e6, o.env);
        CHECK(p == 1.0);
        CHECK(boltzmann_likelihood(o.cold, o.set, lava_lover, 1e6, o.env) == 0.0);
    }
    SUBCASE("likelihoods sum to one") {
        for (int trial = 0; trial < 100; ++trial) {
            const auto w = oracle::small_world(rng);
            const ChoiceSet c(random_options(rng, w, 6));
            const auto th = oracle::random_theta(rng);
            const double beta = rng.uniform01() * 20;
            double total = 0;
            for (const auto& t : c) total += boltzmann_likelihood(t, c, th, beta, w);
            CHECK(std::abs(total - 1) <= 1e-9);
        }
    }
    SUBCASE("monotone in beta for a strict maximizer") {
        double prev = 0;
        for (double beta : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
            const double p = boltzmann_likelihood(o.hot, o.set, lava_lover, beta, o.env);
            CHECK(p >= prev);
            prev = p;
        }
        CHECK(prev == doctest::Approx(1.0));
    }
}

TEST_CASE("rric_posterior") {
    const auto g = ThetaGrid::circle(8);
    const auto prior = Belief::uniform(g);
    TwoOptions o;

    SUBCASE("beta zero returns the prior") {
        std::vector<double> p{0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
        const Belief skewed(g, p);
        CHECK(rric_posterior(o.hot, o.set, skewed, 0.0, o.env).probs() == skewed.probs());
    }
    SUBCASE("identical returns leave the prior unchanged") {
        const GridWorld flat(3, 3, 4, {0, 0}, {2, 2}, std::vector<double>(9, 0.0));
        const ChoiceSet same_len({Trajectory{{{0, 0}, {1, 0}}}, Trajectory{{{0, 0}, {0, 1}}}});
        const auto post = rric_posterior(same_len[0], same_len, prior, 5.0, flat);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(post[i] == doctest::Approx(prior[i]));
    }
    SUBCASE("matches direct summation") {
        Rng rng(21);
        std::vector<RewardParams> pts(g.points().begin(), g.points().end());
        for (int trial = 0; trial < 200; ++trial) {
            const auto env = oracle::small_world(rng);
            const auto opts = random_options(rng, env, 5);
            const ChoiceSet c(opts);
            const auto& choice = c[rng.uniform_int(0, c.size() - 1)];
            std::vector<double> pr(8);
            double s = 0;
            for (auto& x : pr) s += (x = rng.uniform01() + 0.01);
            for (auto& x : pr) x /= s;
            const Belief b(g, pr);
            const double beta = rng.uniform01() * 5;
            const auto got = rric_posterior(choice, c, b, beta, env);
            const auto want = oracle::posterior(env, choice, opts, pts, pr, beta);
            for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-12);
        }
    }
    SUBCASE("constant shift of all returns leaves the posterior unchanged") {
        const GridWorld env(3, 3, 4, {0, 0}, {2, 2}, {0, 0.2, 0.9, 0.4, 0.6, 0, 0.3, 0.1, 0});
        const ChoiceSet c({Trajectory{{{0, 0}, {1, 0}, {2, 0}}}, Trajectory{{{0, 0}, {1, 1}, {0, 2}}},
                           Trajectory{{{0, 0}, {0, 1}, {1, 2}}}});
        // Equal lengths: each theta's alive term is a constant across the set.
        const auto post = rric_posterior(c[1], c, Belief::uniform(g), 2.0, env);
        std::vector<RewardParams> no_alive(g.points().begin(), g.points().end());
        for (auto& t : no_alive) t.w_alive = 0.0;
        const auto want = oracle::posterior(env, c[1], c.items(), no_alive, prior.probs(), 2.0);
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(post[i] - want[i]) <= 1e-12);
    }
    SUBCASE("a hopeless extra option barely moves the posterior") {
        const GridWorld env(3, 3, 4, {0, 0}, {2, 2}, std::vector<double>(9, 0.0));
        // Same states, so the extra option differs only through its length.
        const Trajectory a{{{0, 0}, {1, 0}}};
        const Trajectory b{{{0, 0}, {0, 1}}};
        const Trajectory long_way{{{0, 0}, {1, 0}, {0, 0}, {1, 0}, {0, 0}}};
        const auto gg = ThetaGrid::circle(8);
        std::vector<double> pr(8, 0.0);
        pr[5] = pr[6] = pr[7] = 1.0 / 3.0; // w_alive <= -0.707: the long option loses by >= 2.1
        const Belief p(gg, pr);
        const double beta = 30.0;
        const auto without = rric_posterior(a, ChoiceSet({a, b}), p, beta, env);
        const auto with = rric_posterior(a, ChoiceSet({a, b, long_way}), p, beta, env);
        CHECK(total_variation(without, with) < 1e-6);
    }
    CHECK_THROWS_AS(rric_posterior(Trajectory{{{0, 0}}}, o.set, prior, 1, o.env), PreconditionError);
}

TEST_CASE("entropy and expected_theta") {
    const auto g = ThetaGrid::circle(8);
    CHECK(entropy(Belief::uniform(g)) == doctest::Approx(std::log(8.0)));
    CHECK(entropy(Belief::point_mass(g, 2)) == 0.0);
    const auto g3 = ThetaGrid::circle(8);
    std::vector<double> p(8, 0.0);
    p[0] = 0.5;
    p[1] = 0.25;
    p[2] = 0.25;
    CHECK(entropy(Belief(g3, p)) == doctest::Approx(1.5 * std::numbers::ln2).epsilon(1e-14));

    CHECK(expected_theta(Belief::point_mass(g, 5)) == g[5]);
    std::vector<double> half(8, 0.0);
    half[0] = 0.5;
    half[4] = 0.5;
    const auto m = expected_theta(Belief(g, half));
    CHECK(std::abs(m.w_lava) <= 1e-15);
    CHECK(std::abs(m.w_alive) <= 1e-15);
    CHECK(m.w_goal == 2.0);

    Rng rng(4);
    std::vector<RewardParams> pts(g.points().begin(), g.points().end());
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> q(8);
        double s = 0;
        for (auto& x : q) s += (x = rng.uniform01());
        for (auto& x : q) x /= s;
        const Belief b(g, q);
        const auto got = expected_theta(b);
        const auto want = oracle::mean(pts, q);
        CHECK(std::abs(got.w_lava - want.w_lava) <= 1e-12);
        CHECK(std::abs(got.w_goal - want.w_goal) <= 1e-12);
        CHECK(std::abs(got.w_alive - want.w_alive) <= 1e-12);
        CHECK(std::abs(entropy(b) - oracle::entropy(q)) <= 1e-12);
    }
}
