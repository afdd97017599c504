#pragma once

#include "rric/gridworld.hpp"
#include "rric/inference.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rric {

enum class Study { Randomized, Symmetry, GoalBias, B3WorstCase };

std::string_view to_string(Study s);
/// Throws UsageError.
Study parse_study(std::string_view name);

/// Default ground truth: the 64-angle grid point nearest to a mild alive
/// cost and a strong lava aversion.
inline constexpr RewardParams kDefaultThetaStar{-0.98, kDefaultGoalWeight, -0.2};

struct RunConfig {
    Study study = Study::Randomized;
    /// Builtin set name or comma-separated environment file paths. Empty
    /// selects the study's default builtin set.
    std::string envs;
    /// Snapped to the nearest grid point before use.
    RewardParams theta_star = kDefaultThetaStar;
    double beta = kDefaultBeta;
    int angles = kDefaultAngleCount;
    int tuples = 6;
    int size_min = 2;
    int size_max = 6;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
    bool mirror_a2 = false;
    int symmetry_pairs = 64;
    int symmetry_draws = 1000;
};

/// Throws UsageError naming the offending key.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
/// Applies the keys of `j` on top of `base`. Unknown keys and ill-typed
/// values raise UsageError.
RunConfig apply_json(const nlohmann::json& j, RunConfig base);

/// Defaults, then the `--config` file, then flags. Fills `out` from
/// RRIC_MISSPEC_OUT or "results" when neither sets it. The returned config
/// is validated. Throws UsageError, FileError; `help` is set instead when
/// --help was requested.
RunConfig parse_config(const std::vector<std::string>& args, std::string* help = nullptr);

/// The builtin set name that `envs` resolves to for this study, or empty
/// when `envs` lists files.
std::string resolved_env_set(const RunConfig& config);
std::vector<GridWorld> load_environments(const RunConfig& config);

/// Runs the configured study and writes its outputs into `config.out`.
/// Warnings are written to `diag` as JSON lines. Library errors propagate.
void run(const RunConfig& config, std::ostream& log, std::ostream& diag);

/// Process exit code for an error kind (see README).
int exit_code_for(std::string_view kind);

/// Full command-line entry: parses, runs, and reports errors as JSON lines
/// on `diag`. Returns the process exit status.
int cli_main(const std::vector<std::string>& args, std::ostream& log, std::ostream& diag);

} // namespace rric
