#include "rric/inference.hpp"

#include "rric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace rric {

namespace {

// cos/sin of multiples of pi/2 are not exactly 0; snap them so that the
// axis points of the grid have exact zero components.
double clean(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

struct OptionFeatures {
    std::vector<TrajectoryFeatures> features;
    std::size_t choice = 0;
};

OptionFeatures features_of(const Trajectory& choice, const ChoiceSet& options,
                           const GridWorld& env) {
    OptionFeatures out;
    const auto idx = options.index_of(choice);
    if (!idx) throw PreconditionError("observed choice is not a member of the choice set");
    out.choice = *idx;
    out.features.reserve(options.size());
    for (const auto& t : options) out.features.push_back(trajectory_features(env, t));
    return out;
}

// log P(choice | theta, options), max-shifted.
double log_likelihood(const OptionFeatures& opts, const RewardParams& theta, double beta,
                      std::vector<double>& scratch) {
    scratch.resize(opts.features.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < opts.features.size(); ++j) {
        scratch[j] = beta * opts.features[j].dot(theta);
        top = std::max(top, scratch[j]);
    }
    double sum = 0.0;
    for (double v : scratch) sum += std::exp(v - top);
    return (scratch[opts.choice] - top) - std::log(sum);
}

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw PreconditionError("rationality beta must be finite and >= 0");
}

} // namespace

ThetaGrid ThetaGrid::circle(int angle_count, double goal_weight) {
    if (angle_count < 1) throw PreconditionError("angle_count must be positive");
    std::vector<RewardParams> pts;
    pts.reserve(static_cast<std::size_t>(angle_count));
    for (int k = 0; k < angle_count; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / angle_count;
        pts.push_back({clean(std::cos(phi)), goal_weight, clean(std::sin(phi))});
    }
    return ThetaGrid(angle_count, goal_weight, std::move(pts));
}

std::size_t ThetaGrid::nearest(const RewardParams& theta) const {
    const double norm = std::hypot(theta.w_lava, theta.w_alive);
    if (norm == 0.0) throw PreconditionError("cannot snap a zero (w_lava, w_alive) direction");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = std::hypot(points_[i].w_lava - theta.w_lava / norm,
                                    points_[i].w_alive - theta.w_alive / norm);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Belief::Belief(ThetaGrid grid, std::vector<double> probs)
    : grid_(std::move(grid)), probs_(std::move(probs)) {
    if (probs_.size() != grid_.size())
        throw PreconditionError("belief has " + std::to_string(probs_.size()) +
                                " probabilities for a grid of " + std::to_string(grid_.size()));
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw PreconditionError("belief probabilities must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw PreconditionError("belief probabilities must sum to 1");
}

Belief Belief::uniform(ThetaGrid grid) {
    const std::size_t n = grid.size();
    return Belief(std::move(grid), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Belief Belief::point_mass(ThetaGrid grid, std::size_t index) {
    std::vector<double> p(grid.size(), 0.0);
    p.at(index) = 1.0;
    return Belief(std::move(grid), std::move(p));
}

std::size_t Belief::peak() const {
    return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) -
                                    probs_.begin());
}

double boltzmann_likelihood(const Trajectory& choice, const ChoiceSet& options,
                            const RewardParams& theta, double beta, const GridWorld& env) {
    check_beta(beta);
    const OptionFeatures opts = features_of(choice, options, env);
    std::vector<double> scratch;
    return std::exp(log_likelihood(opts, theta, beta, scratch));
}

Belief rric_posterior(const Trajectory& choice, const ChoiceSet& options, const Belief& prior,
                      double beta, const GridWorld& env) {
    check_beta(beta);
    const OptionFeatures opts = features_of(choice, options, env);
    if (beta == 0.0) return prior;
    const ThetaGrid& grid = prior.grid();

    std::vector<double> log_post(grid.size());
    std::vector<double> scratch;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        log_post[i] = prior[i] > 0.0
                          ? log_likelihood(opts, grid[i], beta, scratch) + std::log(prior[i])
                          : -std::numeric_limits<double>::infinity();
        top = std::max(top, log_post[i]);
    }
    if (!std::isfinite(top)) throw NumericalDegeneracy("posterior has no finite mass");

    std::vector<double> post(grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        post[i] = std::exp(log_post[i] - top);
        total += post[i];
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalDegeneracy("posterior mass underflowed");
    for (double& p : post) p /= total;
    return Belief(grid, std::move(post));
}

double entropy(const Belief& b) {
    double h = 0.0;
    for (double p : b.probs())
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

RewardParams expected_theta(const Belief& b) {
    RewardParams mean{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < b.size(); ++i) {
        mean.w_lava += b[i] * b.grid()[i].w_lava;
        mean.w_goal += b[i] * b.grid()[i].w_goal;
        mean.w_alive += b[i] * b.grid()[i].w_alive;
    }
    return mean;
}

double total_variation(const Belief& a, const Belief& b) {
    if (a.size() != b.size()) throw PreconditionError("beliefs live on different grids");
    double tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
    return 0.5 * tv;
}

} // namespace rric
