#pragma once

#include "rric/choice_set.hpp"
#include "rric/gridworld.hpp"

#include <span>
#include <vector>

namespace rric {

inline constexpr double kDefaultGoalWeight = 2.0;
inline constexpr double kDefaultBeta = 1.0;
inline constexpr int kDefaultAngleCount = 64;

/// Hypothesis space: (w_lava, w_alive) at `angle_count` equally spaced angles
/// on the unit circle, w_goal held fixed. Point k sits at angle 2*pi*k/n
/// measured from the +w_lava axis towards +w_alive.
class ThetaGrid {
public:
    static ThetaGrid circle(int angle_count, double goal_weight = kDefaultGoalWeight);

    int angle_count() const noexcept { return angle_count_; }
    double goal_weight() const noexcept { return goal_weight_; }
    std::size_t size() const noexcept { return points_.size(); }
    const RewardParams& operator[](std::size_t i) const { return points_[i]; }
    std::span<const RewardParams> points() const noexcept { return points_; }

    /// Index of the grid point whose angle is closest to theta's (w_lava, w_alive) direction.
    std::size_t nearest(const RewardParams& theta) const;
    RewardParams snap(const RewardParams& theta) const { return points_[nearest(theta)]; }

    friend bool operator==(const ThetaGrid&, const ThetaGrid&) = default;

private:
    ThetaGrid(int angle_count, double goal_weight, std::vector<RewardParams> points)
        : angle_count_(angle_count), goal_weight_(goal_weight), points_(std::move(points)) {}

    int angle_count_;
    double goal_weight_;
    std::vector<RewardParams> points_;
};

/// Normalized distribution over a ThetaGrid.
class Belief {
public:
    /// Throws PreconditionError unless probs is non-negative, grid-sized and sums to 1 +- 1e-9.
    Belief(ThetaGrid grid, std::vector<double> probs);

    static Belief uniform(ThetaGrid grid);
    static Belief point_mass(ThetaGrid grid, std::size_t index);

    const ThetaGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::size_t size() const noexcept { return probs_.size(); }

    /// Index of the most probable grid point (first on ties).
    std::size_t peak() const;

private:
    ThetaGrid grid_;
    std::vector<double> probs_;
};

/// Boltzmann-rational probability of choosing `choice` from `options`
/// under `theta`, with identity grounding. Max-shifted, so finite for any
/// beta. Throws PreconditionError if `choice` is not an option or beta < 0.
double boltzmann_likelihood(const Trajectory& choice, const ChoiceSet& options,
                            const RewardParams& theta, double beta, const GridWorld& env);

/// Posterior over the prior's grid after observing `choice` from `options`.
/// Throws PreconditionError like boltzmann_likelihood, NumericalDegeneracy
/// if the posterior mass vanishes.
Belief rric_posterior(const Trajectory& choice, const ChoiceSet& options, const Belief& prior,
                      double beta, const GridWorld& env);

/// Shannon entropy in nats.
double entropy(const Belief& b);

/// Probability-weighted mean parameter vector. Lies inside the circle in
/// general; returns are linear in theta, so planning under the mean is
/// planning under the expected reward.
RewardParams expected_theta(const Belief& b);

/// Total variation distance between two beliefs on the same grid.
double total_variation(const Belief& a, const Belief& b);

} // namespace rric
