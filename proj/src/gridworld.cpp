#include "rric/gridworld.hpp"

#include "rric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rric {

namespace {

constexpr std::array<Cell, 8> kOffsets = {Cell{0, -1}, Cell{1, -1}, Cell{1, 0},  Cell{1, 1},
                                          Cell{0, 1},  Cell{-1, 1}, Cell{-1, 0}, Cell{-1, -1}};

std::string describe(Cell c) {
    return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

} // namespace

std::string_view to_string(Action a) {
    static constexpr std::array<std::string_view, 8> names = {"N", "NE", "E", "SE",
                                                              "S", "SW", "W", "NW"};
    return names[static_cast<std::size_t>(a)];
}

RewardParams operator+(const RewardParams& a, const RewardParams& b) {
    return {a.w_lava + b.w_lava, a.w_goal + b.w_goal, a.w_alive + b.w_alive};
}

RewardParams operator*(double s, const RewardParams& p) {
    return {s * p.w_lava, s * p.w_goal, s * p.w_alive};
}

GridWorld::GridWorld(int width, int height, int horizon, Cell start, Cell goal,
                     std::vector<double> lava, std::string id)
    : width_(width), height_(height), horizon_(horizon), start_(start), goal_(goal),
      lava_(std::move(lava)), id_(std::move(id)) {
    if (width_ < 1 || height_ < 1) throw ContractViolation("grid dimensions must be positive");
    if (horizon_ < 1) throw ContractViolation("horizon must be >= 1");
    if (lava_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
        throw ContractViolation("lava map has " + std::to_string(lava_.size()) +
                                " cells, expected width*height");
    if (!contains(start_)) throw ContractViolation("start " + describe(start_) + " is off-grid");
    if (!contains(goal_)) throw ContractViolation("goal " + describe(goal_) + " is off-grid");
    if (start_ == goal_) throw ContractViolation("goal must differ from start");
    for (std::size_t i = 0; i < lava_.size(); ++i) {
        const double v = lava_[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw ContractViolation("lava at " + describe(cell_at(i)) + " is outside [0,1]");
    }
}

double GridWorld::entry_reward(Cell c, const RewardParams& theta) const {
    return theta.w_lava * lava(c) + (is_goal(c) ? theta.w_goal : 0.0) + theta.w_alive;
}

Cell step(const GridWorld& env, Cell cell, Action action) {
    if (!env.contains(cell))
        throw ContractViolation("step from off-grid cell " + describe(cell));
    const Cell d = kOffsets[static_cast<std::size_t>(action)];
    return Cell{std::clamp(cell.col + d.col, 0, env.width() - 1),
                std::clamp(cell.row + d.row, 0, env.height() - 1)};
}

bool validate_trajectory(const GridWorld& env, const Trajectory& traj) {
    if (traj.states.empty() || traj.states.front() != env.start()) return false;
    if (traj.transitions() > static_cast<std::size_t>(env.horizon())) return false;
    for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
        const Cell from = traj.states[i];
        if (!env.contains(from) || env.is_goal(from)) return false;
        const Cell to = traj.states[i + 1];
        const bool reachable = std::any_of(kActions.begin(), kActions.end(),
                                           [&](Action a) { return step(env, from, a) == to; });
        if (!reachable) return false;
    }
    return env.contains(traj.states.back());
}

TrajectoryFeatures trajectory_features(const GridWorld& env, const Trajectory& traj) {
    if (!validate_trajectory(env, traj))
        throw ContractViolation("trajectory is not valid for environment '" + env.id() + "'");
    TrajectoryFeatures f;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        f.lava += env.lava(traj.states[i]);
        if (env.is_goal(traj.states[i])) f.goal += 1.0;
    }
    f.steps = static_cast<double>(traj.transitions());
    return f;
}

double trajectory_return(const GridWorld& env, const Trajectory& traj, const RewardParams& theta) {
    return trajectory_features(env, traj).dot(theta);
}

GridWorld parse_gridworld(std::istream& in, std::string id) {
    std::string line;
    int line_no = 0;
    auto next_line = [&](const char* what) -> std::istringstream {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
        }
        throw ParseError("line " + std::to_string(line_no + 1) + ": missing " + what);
    };
    auto read_ints = [&](const char* what, std::size_t count) {
        std::istringstream ss = next_line(what);
        std::vector<int> out;
        int v;
        while (ss >> v) out.push_back(v);
        if (!ss.eof() || out.size() != count)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(count) + " integers for " + what);
        return out;
    };

    const auto header = read_ints("'width height horizon'", 3);
    const auto endpoints = read_ints("'start_col start_row goal_col goal_row'", 4);
    const int width = header[0];
    const int height = header[1];
    if (width < 1 || height < 1 || header[2] < 1)
        throw ParseError("line 1: width, height and horizon must be positive");

    std::vector<double> lava;
    lava.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r) {
        std::istringstream ss = next_line("lava row");
        for (int c = 0; c < width; ++c) {
            std::string token;
            if (!(ss >> token))
                throw ParseError("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": missing lava value");
            double v = std::numeric_limits<double>::quiet_NaN();
            std::size_t used = 0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size())
                throw ParseError("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": '" + token + "' is not a number");
            if (!(v >= 0.0 && v <= 1.0))
                throw ParseError("line " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": lava value " + token +
                                 " is outside [0,1]");
            lava.push_back(v);
        }
        std::string extra;
        if (ss >> extra)
            throw ParseError("line " + std::to_string(line_no) + ": more than " +
                             std::to_string(width) + " values");
    }
    try {
        return GridWorld(width, height, header[2], Cell{endpoints[0], endpoints[1]},
                         Cell{endpoints[2], endpoints[3]}, std::move(lava), std::move(id));
    } catch (const ContractViolation& e) {
        throw ParseError(std::string("line 2: ") + e.what());
    }
}

GridWorld load_gridworld(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open environment file: " + path);
    std::string id = path;
    if (const auto slash = id.find_last_of('/'); slash != std::string::npos) id = id.substr(slash + 1);
    if (const auto dot = id.find_last_of('.'); dot != std::string::npos && dot > 0)
        id = id.substr(0, dot);
    try {
        return parse_gridworld(in, id);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_gridworld(std::ostream& out, const GridWorld& env) {
    out << env.width() << ' ' << env.height() << ' ' << env.horizon() << '\n'
        << env.start().col << ' ' << env.start().row << ' ' << env.goal().col << ' '
        << env.goal().row << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (int r = 0; r < env.height(); ++r) {
        for (int c = 0; c < env.width(); ++c) {
            if (c) out << ' ';
            out << env.lava(Cell{c, r});
        }
        out << '\n';
    }
    out.precision(old_precision);
}

} // namespace rric
