#include "rric/choice_set.hpp"

#include "rric/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace rric {

ChoiceSet::ChoiceSet(std::vector<Trajectory> trajectories) {
    if (trajectories.empty()) throw PreconditionError("choice set must be non-empty");
    items_.reserve(trajectories.size());
    for (auto& t : trajectories) {
        if (std::find(items_.begin(), items_.end(), t) == items_.end())
            items_.push_back(std::move(t));
    }
}

std::optional<std::size_t> ChoiceSet::index_of(const Trajectory& t) const {
    const auto it = std::find(items_.begin(), items_.end(), t);
    if (it == items_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - items_.begin());
}

bool ChoiceSet::subset_of(const ChoiceSet& other) const {
    return std::all_of(items_.begin(), items_.end(),
                       [&](const Trajectory& t) { return other.contains(t); });
}

bool ChoiceSet::same_members(const ChoiceSet& other) const {
    return size() == other.size() && subset_of(other);
}

void write_choice_set(std::ostream& out, const ChoiceSet& set) {
    for (const auto& traj : set) {
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            if (i) out << ',';
            out << traj.states[i].col << ':' << traj.states[i].row;
        }
        out << '\n';
    }
}

ChoiceSet read_choice_set(std::istream& in) {
    std::vector<Trajectory> trajectories;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Trajectory traj;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto colon = cell.find(':');
            try {
                if (colon == std::string::npos) throw std::invalid_argument("no colon");
                std::size_t used_c = 0;
                std::size_t used_r = 0;
                const std::string c_str = cell.substr(0, colon);
                const std::string r_str = cell.substr(colon + 1);
                const int c = std::stoi(c_str, &used_c);
                const int r = std::stoi(r_str, &used_r);
                if (used_c != c_str.size() || used_r != r_str.size())
                    throw std::invalid_argument("trailing characters");
                traj.states.push_back(Cell{c, r});
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": malformed cell '" + cell +
                                 "' (expected col:row)");
            }
        }
        trajectories.push_back(std::move(traj));
    }
    if (trajectories.empty()) throw ParseError("choice set file contains no trajectories");
    return ChoiceSet(std::move(trajectories));
}

} // namespace rric
