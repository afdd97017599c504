#pragma once

#include "rric/gridworld.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rric {

inline constexpr int kDefaultGridSize = 20;
inline constexpr int kDefaultHorizon = 35;

/// Seeded random layout: start in the upper-left corner, goal in the
/// lower-right, and 2-3 circular lava blobs whose intensity falls off
/// linearly from a peak in [0.6, 1] at the centre to 0 at the radius
/// (radius in [2, 4.5] cells). Overlapping blobs take the maximum.
/// Intensities are rounded to 3 decimals; start and goal are lava-free.
GridWorld generate_layout(std::uint64_t seed, std::string id, int size = kDefaultGridSize,
                          int horizon = kDefaultHorizon);

/// Names accepted by builtin_environment_set.
std::vector<std::string> builtin_set_names();
bool is_builtin_set(std::string_view name);

/// `paper4`: four generated 20x20 layouts for the randomized study.
/// `bias1`: six lava blobs around the goal, so every goal-reaching
///          demonstration crosses lava while a clean loiter stays open.
/// `worstcase1`: a layout whose master set holds long, lava-heavy
///          demonstrations next to short, clean ones.
/// Throws UsageError for an unknown name.
std::vector<GridWorld> builtin_environment_set(std::string_view name);

} // namespace rric
