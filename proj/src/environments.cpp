#include "rric/environments.hpp"

#include "rric/errors.hpp"
#include "rric/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace rric {

namespace {

constexpr std::array<std::uint64_t, 4> kPaperSeeds = {11, 23, 37, 41};

struct Blob {
    int col, row;
    double radius, peak;
    bool flat;
};

// Goal enclosed by lava; a lava-free loiter competes with the goal paths.
constexpr std::array<Blob, 6> kBiasBlobs = {{{3, 4, 4.8346, 0.4533, false},
                                             {15, 9, 3.7686, 0.3161, true},
                                             {15, 4, 6.5665, 0.5511, true},
                                             {10, 19, 4.4112, 0.6838, false},
                                             {12, 13, 5.9878, 0.6002, true},
                                             {19, 4, 6.1513, 0.6569, false}}};

GridWorld bias_layout() {
    const int n = kDefaultGridSize;
    std::vector<double> lava(static_cast<std::size_t>(n * n), 0.0);
    for (const auto& b : kBiasBlobs) {
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                const double x = 1 - std::hypot(c - b.col, r - b.row) / b.radius;
                const double v = b.flat ? (x > 0 ? b.peak : 0.0) : b.peak * std::max(0.0, x);
                auto& cell = lava[static_cast<std::size_t>(r * n + c)];
                cell = std::max(cell, std::round(v * 100) / 100);
            }
        }
    }
    lava.front() = 0.0;
    lava.back() = 0.0;
    return GridWorld(n, n, kDefaultHorizon, Cell{0, 0}, Cell{n - 1, n - 1}, std::move(lava),
                     "bias1");
}

GridWorld worst_case_layout() { return generate_layout(kPaperSeeds[0], "worstcase1"); }

} // namespace

GridWorld generate_layout(std::uint64_t seed, std::string id, int size, int horizon) {
    if (size < 6) throw PreconditionError("generated layouts need size >= 6");
    Rng rng(seed);
    std::vector<double> lava(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
    const int blobs = 2 + static_cast<int>(rng.uniform_int(0, 1));
    for (int b = 0; b < blobs; ++b) {
        const double cc = static_cast<double>(rng.uniform_int(2, static_cast<std::uint64_t>(size - 3)));
        const double cr = static_cast<double>(rng.uniform_int(2, static_cast<std::uint64_t>(size - 3)));
        const double radius = 2.0 + 2.5 * rng.uniform01();
        const double peak = 0.6 + 0.4 * rng.uniform01();
        for (int r = 0; r < size; ++r) {
            for (int c = 0; c < size; ++c) {
                const double d = std::hypot(c - cc, r - cr);
                const double v = peak * std::max(0.0, 1.0 - d / radius);
                auto& cell = lava[static_cast<std::size_t>(r * size + c)];
                cell = std::max(cell, std::round(v * 1000.0) / 1000.0);
            }
        }
    }
    const Cell start{0, 0};
    const Cell goal{size - 1, size - 1};
    lava[static_cast<std::size_t>(start.row * size + start.col)] = 0.0;
    lava[static_cast<std::size_t>(goal.row * size + goal.col)] = 0.0;
    return GridWorld(size, size, horizon, start, goal, std::move(lava), std::move(id));
}

std::vector<std::string> builtin_set_names() { return {"paper4", "bias1", "worstcase1"}; }

bool is_builtin_set(std::string_view name) {
    const auto names = builtin_set_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<GridWorld> builtin_environment_set(std::string_view name) {
    if (name == "paper4") {
        std::vector<GridWorld> envs;
        for (std::size_t i = 0; i < kPaperSeeds.size(); ++i)
            envs.push_back(generate_layout(kPaperSeeds[i], "grid" + std::to_string(i)));
        return envs;
    }
    if (name == "bias1") return {bias_layout()};
    if (name == "worstcase1") return {worst_case_layout()};
    throw UsageError("unknown builtin environment set '" + std::string(name) +
                     "' (expected paper4, bias1 or worstcase1)");
}

} // namespace rric
