#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rric {

/// Grid coordinate: (column, row), (0,0) is the upper-left corner.
struct Cell {
    int col = 0;
    int row = 0;

    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

/// The eight compass moves. Declaration order is the planner's tie-break order.
enum class Action : std::uint8_t { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<Action, 8> kActions = {Action::N,  Action::NE, Action::E,
                                                   Action::SE, Action::S,  Action::SW,
                                                   Action::W,  Action::NW};

std::string_view to_string(Action a);

/// Returns (and action values) within this distance of the maximum count
/// as ties, so tie-breaking does not depend on summation order.
inline constexpr double kTieTolerance = 1e-10;

/// Linear reward weights over the (lava, goal, alive) features.
struct RewardParams {
    double w_lava = 0.0;
    double w_goal = 0.0;
    double w_alive = 0.0;

    friend bool operator==(const RewardParams&, const RewardParams&) = default;
};

RewardParams operator+(const RewardParams& a, const RewardParams& b);
RewardParams operator*(double s, const RewardParams& p);

/// Featured deterministic gridworld. Immutable after construction; the
/// constructor enforces every invariant and throws ContractViolation otherwise.
class GridWorld {
public:
    GridWorld(int width, int height, int horizon, Cell start, Cell goal, std::vector<double> lava,
              std::string id = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int horizon() const noexcept { return horizon_; }
    Cell start() const noexcept { return start_; }
    Cell goal() const noexcept { return goal_; }
    const std::string& id() const noexcept { return id_; }
    std::size_t cell_count() const noexcept { return lava_.size(); }

    bool contains(Cell c) const noexcept {
        return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
    }
    std::size_t index(Cell c) const noexcept {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c.col);
    }
    Cell cell_at(std::size_t index) const noexcept {
        return Cell{static_cast<int>(index % static_cast<std::size_t>(width_)),
                    static_cast<int>(index / static_cast<std::size_t>(width_))};
    }

    double lava(Cell c) const { return lava_.at(index(c)); }
    const std::vector<double>& lava_map() const noexcept { return lava_; }
    bool is_goal(Cell c) const noexcept { return c == goal_; }

    /// Reward for entering `c` under `theta`.
    double entry_reward(Cell c, const RewardParams& theta) const;

private:
    int width_;
    int height_;
    int horizon_;
    Cell start_;
    Cell goal_;
    std::vector<double> lava_;
    std::string id_;
};

/// A dynamics-consistent state sequence beginning at the start cell.
struct Trajectory {
    std::vector<Cell> states;

    std::size_t transitions() const noexcept { return states.empty() ? 0 : states.size() - 1; }
    const Cell& final_state() const { return states.back(); }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
    friend auto operator<=>(const Trajectory&, const Trajectory&) = default;
};

/// Feature counts of a trajectory: summed lava of entered cells, number of goal
/// entries (0 or 1), and number of transitions.
struct TrajectoryFeatures {
    double lava = 0.0;
    double goal = 0.0;
    double steps = 0.0;

    double dot(const RewardParams& theta) const {
        return theta.w_lava * lava + theta.w_goal * goal + theta.w_alive * steps;
    }
};

/// 8-connected move, clamped to the grid per axis. Throws ContractViolation
/// when `cell` is outside the grid.
Cell step(const GridWorld& env, Cell cell, Action action);

bool validate_trajectory(const GridWorld& env, const Trajectory& traj);

/// Throws ContractViolation for an invalid trajectory.
TrajectoryFeatures trajectory_features(const GridWorld& env, const Trajectory& traj);

/// Sum over transitions of the entered state's reward. Throws
/// ContractViolation for an invalid trajectory.
double trajectory_return(const GridWorld& env, const Trajectory& traj, const RewardParams& theta);

/// Reads the plain-text environment format:
///
///     width height horizon
///     start_col start_row goal_col goal_row
///     <height lines of width lava values in [0,1]>
///
/// Throws ParseError with a line/column diagnostic.
GridWorld parse_gridworld(std::istream& in, std::string id = {});
GridWorld load_gridworld(const std::string& path);
void write_gridworld(std::ostream& out, const GridWorld& env);

} // namespace rric
