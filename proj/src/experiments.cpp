#include "rric/experiments.hpp"

#include "parallel.hpp"
#include "rric/errors.hpp"
#include "rric/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace rric {

namespace {

TrialResult make_result(PairClass cls, std::string env_id, std::uint64_t seed, Belief correct,
                        Belief misspecified, std::vector<double> per_env_regret) {
    const double h_correct = entropy(correct);
    const double h_misspec = entropy(misspecified);
    double total = 0.0;
    for (double r : per_env_regret) total += r;
    const double regret = per_env_regret.empty() ? 0.0
                                                 : total / static_cast<double>(per_env_regret.size());
    return TrialResult{cls,
                       std::move(env_id),
                       seed,
                       h_correct,
                       h_misspec,
                       h_correct - h_misspec,
                       std::move(per_env_regret),
                       regret,
                       std::move(correct),
                       std::move(misspecified)};
}

ChoiceSet select(const ChoiceSet& master, const std::vector<std::size_t>& idx) {
    std::vector<Trajectory> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(master[i]);
    return ChoiceSet(std::move(out));
}

bool same_pair(const ChoicePair& a, const ChoicePair& b) {
    return a.robot.same_members(b.robot) && a.human.same_members(b.human);
}

} // namespace

TrialResult run_trial(const ChoicePair& pair, const InferenceSetup& setup,
                      std::span<const GridWorld> envs, const GridWorld& feedback_env) {
    const Trajectory choice = human_choice(pair.human, setup.theta_star, feedback_env);
    if (!pair.robot.contains(choice))
        throw ImpossibleObservation("the human's demonstration in '" + feedback_env.id() +
                                    "' is not in the robot's assumed choice set");

    Belief correct = rric_posterior(choice, pair.human, setup.prior, setup.beta, feedback_env);
    Belief misspecified = rric_posterior(choice, pair.robot, setup.prior, setup.beta, feedback_env);
    const RewardParams mean_correct = expected_theta(correct);
    const RewardParams mean_misspec = expected_theta(misspecified);

    std::vector<double> per_env;
    per_env.reserve(envs.size());
    for (const GridWorld& env : envs) {
        const Trajectory plan_correct = optimal_trajectory(env, mean_correct);
        const Trajectory plan_misspec =
            mean_misspec == mean_correct ? plan_correct : optimal_trajectory(env, mean_misspec);
        per_env.push_back(trajectory_return(env, plan_correct, setup.theta_star) -
                          trajectory_return(env, plan_misspec, setup.theta_star));
    }
    return make_result(classify(pair, setup.theta_star, feedback_env), feedback_env.id(), 0,
                       std::move(correct), std::move(misspecified), std::move(per_env));
}

ChoicePair replay_pair(MisspecClass cls, const GridWorld& env, const InferenceSetup& setup,
                       std::uint64_t seed, SizeBounds bounds) {
    const ChoiceSet master = master_choice_set(env, setup.prior.grid().points());
    return sample_pair(cls, master, setup.theta_star, env, seed, bounds);
}

std::vector<TrialResult> run_randomized_study(std::span<const GridWorld> envs,
                                              const InferenceSetup& setup,
                                              const RandomizedStudyOptions& options) {
    if (options.tuples_per_class_per_env < 1)
        throw PreconditionError("tuples_per_class_per_env must be >= 1");
    if (envs.empty()) throw PreconditionError("randomized study needs at least one environment");

    const auto masters = detail::parallel_map(envs.size(), options.jobs, [&](std::size_t e) {
        return master_choice_set(envs[e], setup.prior.grid().points());
    });

    const auto requested = [&](MisspecClass c) {
        return std::find(options.classes.begin(), options.classes.end(), c) !=
               options.classes.end();
    };
    const bool mirror = options.mirror_a2 && requested(MisspecClass::A1) &&
                        requested(MisspecClass::A2);
    if (options.mirror_a2 && !mirror)
        throw PreconditionError("mirror_a2 needs both A1 and A2 among the requested classes");

    struct Job {
        MisspecClass cls;
        std::size_t env;
        std::uint64_t seed;
        ChoicePair pair;
    };
    std::vector<Job> jobs;
    const auto tuples = static_cast<std::size_t>(options.tuples_per_class_per_env);
    // Each (class, env) draws its tuples sequentially so duplicates can be rejected.
    for (MisspecClass cls : kMisspecClasses) {
        if (!requested(cls) || (mirror && cls == MisspecClass::A2)) continue;
        for (std::size_t e = 0; e < envs.size(); ++e) {
            std::vector<ChoicePair> drawn;
            for (std::size_t t = 0; t < tuples; ++t) {
                const std::uint64_t base =
                    derive_seed(options.seed, static_cast<std::uint64_t>(cls), e, t);
                bool placed = false;
                for (std::uint64_t attempt = 0; attempt < 64 && !placed; ++attempt) {
                    const std::uint64_t seed = attempt == 0 ? base : derive_seed(base, attempt);
                    ChoicePair pair = [&] {
                        try {
                            return sample_pair(cls, masters[e], setup.theta_star, envs[e], seed,
                                               options.size_bounds);
                        } catch (const InfeasibleClass& err) {
                            throw InfeasibleClass(std::string(err.what()) + " [class " +
                                                  std::string(to_string(cls)) + ", env '" +
                                                  envs[e].id() + "']");
                        }
                    }();
                    const bool duplicate = std::any_of(drawn.begin(), drawn.end(), [&](const ChoicePair& p) {
                        return same_pair(p, pair);
                    });
                    if (duplicate) continue;
                    drawn.push_back(pair);
                    if (mirror && cls == MisspecClass::A1)
                        jobs.push_back({MisspecClass::A2, e, seed, pair.swapped()});
                    jobs.push_back({cls, e, seed, std::move(pair)});
                    placed = true;
                }
                if (!placed)
                    throw InfeasibleClass("could not draw " + std::to_string(tuples) +
                                          " distinct " + std::string(to_string(cls)) +
                                          " tuples [env '" + envs[e].id() + "']");
            }
        }
    }

    auto results = detail::parallel_map(jobs.size(), options.jobs, [&](std::size_t i) {
        const Job& job = jobs[i];
        TrialResult r = run_trial(job.pair, setup, envs, envs[job.env]);
        if (r.cls != to_pair_class(job.cls))
            throw InfeasibleClass("pair drawn for " + std::string(to_string(job.cls)) +
                                  " classified as " + std::string(to_string(r.cls)));
        r.seed = job.seed;
        return r;
    });
    std::stable_sort(results.begin(), results.end(), [](const TrialResult& a, const TrialResult& b) {
        return std::tie(a.cls, a.env_id, a.seed) < std::tie(b.cls, b.env_id, b.seed);
    });
    return results;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw PreconditionError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

Stats describe(std::span<const double> values) {
    if (values.empty()) throw PreconditionError("statistics of an empty sample");
    Stats s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / n);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile(sorted, 0.25);
    s.median = quantile(sorted, 0.5);
    s.q3 = quantile(sorted, 0.75);
    return s;
}

Summary summarize(std::span<const TrialResult> results) {
    Summary out;
    for (int code = 0; code <= static_cast<int>(PairClass::Unclassifiable); ++code) {
        const auto cls = static_cast<PairClass>(code);
        std::vector<double> dh;
        std::vector<double> regret;
        for (const auto& r : results) {
            if (r.cls != cls) continue;
            dh.push_back(r.entropy_change);
            regret.push_back(r.regret);
        }
        if (dh.empty()) {
            if (code < static_cast<int>(kMisspecClasses.size()))
                out.warnings.push_back("no results for class " + std::string(to_string(cls)));
            continue;
        }
        out.classes.push_back({cls, dh.size(), describe(dh), describe(regret)});
    }
    return out;
}

SymmetricPairSampler::SymmetricPairSampler(std::vector<std::pair<ChoiceSet, ChoiceSet>> support)
    : support_(std::move(support)) {
    if (support_.empty()) throw PreconditionError("symmetric sampler needs a non-empty support");
}

SymmetricPairSampler SymmetricPairSampler::common_argmax(const ChoiceSet& master,
                                                         const RewardParams& theta_star,
                                                         const GridWorld& env,
                                                         std::size_t support_pairs,
                                                         SizeBounds bounds, std::uint64_t seed) {
    if (master.size() < 3)
        throw InfeasibleConstruction("symmetric sampler needs a master set of at least 3");
    const Trajectory best = human_choice(master, theta_star, env);
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < master.size(); ++i)
        if (master[i] != best) others.push_back(i);

    const auto lo = static_cast<std::uint64_t>(std::max(bounds.min, 2));
    const auto hi = static_cast<std::uint64_t>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(bounds.max, 2)), master.size()));
    if (lo > hi) throw InfeasibleConstruction("size bounds exceed the master set");

    Rng rng(seed);
    auto draw_set = [&] {
        const auto k = static_cast<std::size_t>(rng.uniform_int(lo, hi));
        std::vector<std::size_t> pool = others;
        for (std::size_t i = 0; i + 1 < k; ++i)
            std::swap(pool[i], pool[static_cast<std::size_t>(rng.uniform_int(i, pool.size() - 1))]);
        pool.resize(k - 1);
        std::sort(pool.begin(), pool.end());
        std::vector<Trajectory> items{best};
        for (std::size_t i : pool) items.push_back(master[i]);
        return ChoiceSet(std::move(items));
    };

    std::vector<std::pair<ChoiceSet, ChoiceSet>> support;
    const std::size_t budget = 100 * support_pairs + 100;
    for (std::size_t draw = 0; draw < budget && support.size() < support_pairs; ++draw) {
        ChoiceSet a = draw_set();
        ChoiceSet b = draw_set();
        if (a.same_members(b)) continue;
        const bool seen = std::any_of(support.begin(), support.end(), [&](const auto& p) {
            return (p.first.same_members(a) && p.second.same_members(b)) ||
                   (p.first.same_members(b) && p.second.same_members(a));
        });
        if (!seen) support.emplace_back(std::move(a), std::move(b));
    }
    if (support.empty()) throw InfeasibleConstruction("no distinct set pairs could be drawn");
    return SymmetricPairSampler(std::move(support));
}

ChoicePair SymmetricPairSampler::draw(Rng& rng) const {
    const auto& [x, y] = support_[static_cast<std::size_t>(rng.uniform_int(0, support_.size() - 1))];
    return rng.coin() ? ChoicePair{y, x} : ChoicePair{x, y};
}

std::optional<std::string> SymmetricPairSampler::common_argmax_violation(
    const RewardParams& theta_star, const GridWorld& env) const {
    const Trajectory common = human_choice(support_.front().first, theta_star, env);
    for (std::size_t i = 0; i < support_.size(); ++i) {
        for (const ChoiceSet* set : {&support_[i].first, &support_[i].second}) {
            if (human_choice(*set, theta_star, env) != common)
                return "support pair " + std::to_string(i) +
                       " contains a set whose best element differs from the common choice";
        }
    }
    return std::nullopt;
}

SymmetryReport run_symmetry_verification(const SymmetricPairSampler& sampler,
                                         const InferenceSetup& setup,
                                         std::span<const GridWorld> envs,
                                         const GridWorld& feedback_env, std::size_t n_draws,
                                         std::uint64_t seed, int jobs) {
    if (auto violation = sampler.common_argmax_violation(setup.theta_star, feedback_env))
        throw PreconditionError("symmetric sampler violates the common-argmax condition: " +
                                *violation);

    const auto& support = sampler.support();
    // Trial 2i: human = first, robot = second. Trial 2i+1: the swap.
    auto trials = detail::parallel_map(2 * support.size(), jobs, [&](std::size_t k) {
        const auto& [x, y] = support[k / 2];
        const ChoicePair pair = k % 2 == 0 ? ChoicePair{y, x} : ChoicePair{x, y};
        TrialResult r = run_trial(pair, setup, envs, feedback_env);
        r.seed = k;
        return r;
    });

    SymmetryReport report;
    report.support_pairs = support.size();
    double regret_sum = 0.0;
    double dh_sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const TrialResult& fwd = trials[2 * i];
        const TrialResult& rev = trials[2 * i + 1];
        report.max_antisymmetry_residual =
            std::max(report.max_antisymmetry_residual, std::abs(fwd.regret + rev.regret));
        report.max_entropy_antisymmetry_residual =
            std::max(report.max_entropy_antisymmetry_residual,
                     std::abs(fwd.entropy_change + rev.entropy_change));
        regret_sum += fwd.regret + rev.regret;
        dh_sum += fwd.entropy_change + rev.entropy_change;
    }
    const double orientations = 2.0 * static_cast<double>(support.size());
    report.expected_regret = regret_sum / orientations;
    report.expected_entropy_change = dh_sum / orientations;

    report.n_draws = n_draws;
    if (n_draws > 0) {
        Rng rng(seed);
        double sampled = 0.0;
        for (std::size_t d = 0; d < n_draws; ++d) {
            const auto i = static_cast<std::size_t>(rng.uniform_int(0, support.size() - 1));
            sampled += trials[2 * i + (rng.coin() ? 1 : 0)].regret;
        }
        report.sampled_expected_regret = sampled / static_cast<double>(n_draws);
    }
    report.trials = std::move(trials);
    return report;
}

TrialResult run_goal_bias_study(const GridWorld& env, const InferenceSetup& setup) {
    const ChoiceSet master = master_choice_set(env, setup.prior.grid().points());
    ChoiceSet biased = goal_biased_subset(master, env);
    const GridWorld envs[] = {env};
    return run_trial(ChoicePair{master, std::move(biased)}, setup, envs, env);
}

WorstCaseReport run_b3_worst_case(const GridWorld& env, const InferenceSetup& setup) {
    const RewardParams& theta = setup.theta_star;
    const ChoiceSet master = master_choice_set(env, setup.prior.grid().points());
    const std::size_t n = master.size();

    std::vector<TrajectoryFeatures> feats;
    std::vector<double> returns;
    for (const auto& t : master) {
        feats.push_back(trajectory_features(env, t));
        returns.push_back(feats.back().dot(theta));
    }
    // Members that are strictly shorter and strictly less lava-laden than i,
    // with the same goal outcome.
    auto dominating = [&](std::size_t i) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (feats[j].steps < feats[i].steps && feats[j].lava < feats[i].lava &&
                feats[j].goal == feats[i].goal)
                out.push_back(j);
        }
        return out;
    };

    std::vector<std::size_t> by_return(n);
    std::iota(by_return.begin(), by_return.end(), std::size_t{0});
    std::stable_sort(by_return.begin(), by_return.end(),
                     [&](std::size_t a, std::size_t b) { return returns[a] < returns[b]; });

    // The worst demonstration is the human's rejected option; the human's
    // choice is the next-poorest one that shorter, cleaner demonstrations beat.
    std::optional<std::size_t> chosen;
    std::vector<std::size_t> cleaner;
    const std::size_t rejected = by_return.front();
    for (std::size_t k = 1; k < n && !chosen; ++k) {
        const std::size_t cand = by_return[k];
        if (!(returns[cand] > returns[rejected])) continue;
        cleaner = dominating(cand);
        if (!cleaner.empty()) chosen = cand;
    }
    if (!chosen)
        throw InfeasibleConstruction("master set of '" + env.id() +
                                     "' has no poor demonstration beaten by a shorter, "
                                     "lower-lava alternative");

    std::vector<std::size_t> human_idx{*chosen, rejected};
    std::sort(human_idx.begin(), human_idx.end());
    std::vector<std::size_t> b3_idx = cleaner;
    b3_idx.push_back(*chosen);
    std::sort(b3_idx.begin(), b3_idx.end());
    std::vector<std::size_t> b2_idx = b3_idx;
    b2_idx.push_back(rejected);
    std::sort(b2_idx.begin(), b2_idx.end());

    const ChoiceSet human = select(master, human_idx);
    ChoicePair b2_pair{select(master, b2_idx), human};
    ChoicePair b3_pair{select(master, b3_idx), human};
    if (classify(b2_pair, theta, env) != PairClass::B2 ||
        classify(b3_pair, theta, env) != PairClass::B3)
        throw InfeasibleConstruction("worst-case construction in '" + env.id() +
                                     "' did not produce B2/B3 pairs");

    const GridWorld envs[] = {env};
    TrialResult b2 = run_trial(b2_pair, setup, envs, env);
    TrialResult b3 = run_trial(b3_pair, setup, envs, env);
    const RewardParams b2_peak = setup.prior.grid()[b2.belief_misspecified.peak()];
    const RewardParams b3_peak = setup.prior.grid()[b3.belief_misspecified.peak()];
    WorstCaseReport report{std::move(b2_pair), std::move(b3_pair), std::move(b2), std::move(b3),
                           b2_peak, b3_peak};
    report.theta_star_negative = theta.w_lava < 0.0 && theta.w_alive < 0.0;
    report.b3_peak_positive = b3_peak.w_lava > 0.0 && b3_peak.w_alive > 0.0;
    report.b3_regret_exceeds_b2 = report.b3.regret > report.b2.regret;
    return report;
}

} // namespace rric
