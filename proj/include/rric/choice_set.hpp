#pragma once

#include "rric/gridworld.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace rric {

/// Ordered, deduplicated, non-empty list of trajectories.
class ChoiceSet {
public:
    /// Drops later duplicates. Throws PreconditionError when `trajectories` is empty.
    explicit ChoiceSet(std::vector<Trajectory> trajectories);

    std::size_t size() const noexcept { return items_.size(); }
    const Trajectory& operator[](std::size_t i) const { return items_[i]; }
    const std::vector<Trajectory>& items() const noexcept { return items_; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

    std::optional<std::size_t> index_of(const Trajectory& t) const;
    bool contains(const Trajectory& t) const { return index_of(t).has_value(); }

    /// Same members, ignoring order.
    bool same_members(const ChoiceSet& other) const;
    /// Every member of *this is in `other`.
    bool subset_of(const ChoiceSet& other) const;

    friend bool operator==(const ChoiceSet&, const ChoiceSet&) = default;

private:
    std::vector<Trajectory> items_;
};

/// One trajectory per line as comma-separated `col:row` cells.
void write_choice_set(std::ostream& out, const ChoiceSet& set);
/// Inverse of write_choice_set. Throws ParseError on malformed input.
ChoiceSet read_choice_set(std::istream& in);

} // namespace rric
