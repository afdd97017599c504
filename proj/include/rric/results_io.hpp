#pragma once

#include "rric/experiments.hpp"

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

namespace rric {

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// `class,env_id,seed,entropy_correct,entropy_misspec,entropy_change,regret,regret_env_0..`
std::string trials_csv(std::span<const TrialResult> results);
std::string summary_csv(const Summary& summary);

/// Full results including both beliefs, for plotting.
nlohmann::json trials_json(std::span<const TrialResult> results);

/// Writes `files` (name -> contents) into `dir`. Every file is first written
/// under a temporary name; renames happen only after all writes succeed.
void write_files_atomically(const std::filesystem::path& dir,
                            std::span<const std::pair<std::string, std::string>> files);

} // namespace rric
