#include "rric/choice_sets.hpp"

#include "rric/errors.hpp"
#include "rric/rng.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>
#include <numeric>
#include <vector>

namespace rric {

namespace {

constexpr std::array<std::string_view, 7> kPairClassNames = {
    "A1", "A2", "A3", "B2", "B3", "NoMisspecification", "Unclassifiable"};

enum class Containment { Equal, Subset, Superset, Intersecting, Disjoint };

Containment containment(const ChoiceSet& robot, const ChoiceSet& human) {
    const bool r_in_h = robot.subset_of(human);
    const bool h_in_r = human.subset_of(robot);
    if (r_in_h && h_in_r) return Containment::Equal;
    if (r_in_h) return Containment::Subset;
    if (h_in_r) return Containment::Superset;
    const bool any_common = std::any_of(robot.begin(), robot.end(),
                                        [&](const Trajectory& t) { return human.contains(t); });
    return any_common ? Containment::Intersecting : Containment::Disjoint;
}

// Uniformly random k-subset of `pool`, returned in ascending order.
std::vector<std::size_t> draw_subset(std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(i, pool.size() - 1));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

ChoiceSet subset_of_master(const ChoiceSet& master, const std::vector<std::size_t>& idx) {
    std::vector<Trajectory> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(master[i]);
    return ChoiceSet(std::move(out));
}

} // namespace

std::string_view to_string(MisspecClass c) { return kPairClassNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(PairClass c) { return kPairClassNames[static_cast<std::size_t>(c)]; }

MisspecClass parse_misspec_class(std::string_view text) {
    std::string upper(text);
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (MisspecClass c : kMisspecClasses)
        if (upper == to_string(c)) return c;
    throw UsageError("unknown misspecification class '" + std::string(text) +
                     "' (expected A1, A2, A3, B2 or B3)");
}

namespace {

// First of `items` whose return is within kTieTolerance of the best.
template <typename Range, typename Get>
std::size_t first_best(const Range& items, Get get, const RewardParams& theta, const GridWorld& env) {
    std::vector<double> r;
    r.reserve(items.size());
    for (const auto& t : items) r.push_back(trajectory_return(env, get(t), theta));
    const double top = *std::max_element(r.begin(), r.end());
    std::size_t i = 0;
    while (r[i] < top - kTieTolerance) ++i;
    return i;
}

} // namespace

Trajectory human_choice(const ChoiceSet& set, const RewardParams& theta_star,
                        const GridWorld& env) {
    return set[first_best(set.items(), [](const Trajectory& t) -> const Trajectory& { return t; },
                          theta_star, env)];
}

Trajectory optimal_element(const ChoicePair& pair, const RewardParams& theta_star,
                           const GridWorld& env) {
    // Candidates in preference order for ties: shared, robot-only, human-only.
    std::vector<const Trajectory*> order;
    order.reserve(pair.robot.size() + pair.human.size());
    for (const auto& t : pair.robot)
        if (pair.human.contains(t)) order.push_back(&t);
    for (const auto& t : pair.robot)
        if (!pair.human.contains(t)) order.push_back(&t);
    for (const auto& t : pair.human)
        if (!pair.robot.contains(t)) order.push_back(&t);
    return *order[first_best(order, [](const Trajectory* t) -> const Trajectory& { return *t; },
                             theta_star, env)];
}

PairClass classify(const ChoicePair& pair, const RewardParams& theta_star, const GridWorld& env) {
    const Containment rel = containment(pair.robot, pair.human);
    if (rel == Containment::Equal) return PairClass::NoMisspecification;
    if (rel == Containment::Disjoint) return PairClass::Unclassifiable;

    const Trajectory best = optimal_element(pair, theta_star, env);
    const bool in_robot = pair.robot.contains(best);
    const bool in_human = pair.human.contains(best);
    if (!in_robot) return PairClass::Unclassifiable;

    if (in_human) {
        switch (rel) {
        case Containment::Subset: return PairClass::A1;
        case Containment::Superset: return PairClass::A2;
        default: return PairClass::A3;
        }
    }
    switch (rel) {
    case Containment::Superset: return PairClass::B2;
    case Containment::Intersecting: return PairClass::B3;
    default: return PairClass::Unclassifiable; // B1: robot subset cannot hold a robot-only element
    }
}

std::optional<std::string> pair_violation(const ChoicePair& pair, const RewardParams& theta_star,
                                          const GridWorld& env) {
    if (containment(pair.robot, pair.human) == Containment::Disjoint)
        return "robot and human choice sets do not intersect";
    if (!pair.robot.contains(human_choice(pair.human, theta_star, env)))
        return "human's choice is not in the robot's choice set";
    return std::nullopt;
}

ChoicePair sample_pair(MisspecClass cls, const ChoiceSet& master, const RewardParams& theta_star,
                       const GridWorld& env, std::uint64_t seed, SizeBounds bounds,
                       int rejection_budget) {
    if (bounds.min < 1 || bounds.max < bounds.min)
        throw PreconditionError("size bounds must satisfy 1 <= min <= max");
    const std::size_t n = master.size();
    const bool intersecting = cls == MisspecClass::A3 || cls == MisspecClass::B3;
    const std::size_t needed = intersecting ? 4 : 3;
    if (n < needed)
        throw InfeasibleClass(std::string(to_string(cls)) + " needs a master set of at least " +
                              std::to_string(needed) + " trajectories, got " + std::to_string(n));

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto lo = static_cast<std::uint64_t>(bounds.min);
    const auto hi = static_cast<std::uint64_t>(std::min<std::size_t>(static_cast<std::size_t>(bounds.max), n));
    if (lo > hi)
        throw InfeasibleClass("size lower bound " + std::to_string(bounds.min) +
                              " exceeds master set size " + std::to_string(n));

    Rng rng(seed);
    std::map<std::string, int> rejections;
    for (int draw = 0; draw < rejection_budget; ++draw) {
        const auto k_robot = static_cast<std::size_t>(rng.uniform_int(lo, hi));
        const auto k_human = static_cast<std::size_t>(rng.uniform_int(lo, hi));

        std::vector<std::size_t> robot;
        std::vector<std::size_t> human;
        switch (cls) {
        case MisspecClass::A1:
            if (k_robot >= k_human) {
                ++rejections["robot set must be smaller than human set"];
                continue;
            }
            human = draw_subset(all, k_human, rng);
            robot = draw_subset(human, k_robot, rng);
            break;
        case MisspecClass::A2:
        case MisspecClass::B2:
            if (k_human >= k_robot) {
                ++rejections["robot set must be larger than human set"];
                continue;
            }
            robot = draw_subset(all, k_robot, rng);
            human = draw_subset(robot, k_human, rng);
            break;
        case MisspecClass::A3:
        case MisspecClass::B3: {
            if (k_robot < 2 || k_human < 2) {
                ++rejections["intersecting sets need at least 2 members each"];
                continue;
            }
            const auto shared = static_cast<std::size_t>(
                rng.uniform_int(1, std::min(k_robot, k_human) - 1));
            if (k_robot - shared > n - k_human) {
                ++rejections["master set too small for the drawn sizes"];
                continue;
            }
            human = draw_subset(all, k_human, rng);
            std::vector<std::size_t> rest;
            std::set_difference(all.begin(), all.end(), human.begin(), human.end(),
                                std::back_inserter(rest));
            robot = draw_subset(human, shared, rng);
            const auto extra = draw_subset(rest, k_robot - shared, rng);
            robot.insert(robot.end(), extra.begin(), extra.end());
            std::sort(robot.begin(), robot.end());
            break;
        }
        }

        ChoicePair pair{subset_of_master(master, robot), subset_of_master(master, human)};
        if (!pair.robot.contains(human_choice(pair.human, theta_star, env))) {
            ++rejections["human's choice not in robot set"];
            continue;
        }
        const PairClass got = classify(pair, theta_star, env);
        if (got != to_pair_class(cls)) {
            ++rejections["optimal element on the wrong side (drew " + std::string(to_string(got)) +
                         ")"];
            continue;
        }
        return pair;
    }

    std::string worst = "no draws attempted";
    int worst_count = -1;
    for (const auto& [reason, count] : rejections) {
        if (count > worst_count) {
            worst_count = count;
            worst = reason;
        }
    }
    throw InfeasibleClass("no " + std::string(to_string(cls)) + " pair found in " +
                          std::to_string(rejection_budget) +
                          " draws; most frequent rejection: " + worst + " (" +
                          std::to_string(worst_count) + "x)");
}

ChoiceSet goal_biased_subset(const ChoiceSet& master, const GridWorld& env) {
    std::vector<Trajectory> kept;
    for (const auto& t : master)
        if (env.is_goal(t.final_state())) kept.push_back(t);
    if (kept.empty())
        throw EmptyBiasSet("no demonstration in the master set of '" + env.id() +
                           "' ends at the goal");
    return ChoiceSet(std::move(kept));
}

} // namespace rric
