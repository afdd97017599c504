#include "rric/cli.hpp"

#include "rric/environments.hpp"
#include "rric/errors.hpp"
#include "rric/experiments.hpp"
#include "rric/planner.hpp"
#include "rric/results_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace rric {

namespace {

using json = nlohmann::json;

constexpr std::pair<Study, std::string_view> kStudyNames[] = {
    {Study::Randomized, "randomized"},
    {Study::Symmetry, "symmetry"},
    {Study::GoalBias, "goal-bias"},
    {Study::B3WorstCase, "b3-worst-case"},
};

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(key));
    return value;
}

double parse_real(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value))
        throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(key));
    return value;
}

RewardParams parse_theta(std::string_view key, std::string_view text) {
    std::vector<double> parts;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        parts.push_back(parse_real(key, text.substr(pos, comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (parts.size() != 3)
        throw UsageError(std::string(key) + " expects w_lava,w_goal,w_alive");
    return {parts[0], parts[1], parts[2]};
}

template <typename T>
T json_get(const json& j, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!j.is_boolean()) throw UsageError("");
        } else if constexpr (std::is_integral_v<T>) {
            if (!j.is_number_integer()) throw UsageError("");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!j.is_number()) throw UsageError("");
        } else {
            if (!j.is_string()) throw UsageError("");
        }
        return j.get<T>();
    } catch (const std::exception&) {
        throw UsageError("invalid value " + j.dump() + " for " + key);
    }
}

std::vector<std::string> split_paths(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        std::string part = text.substr(pos, comma - pos);
        if (part.empty()) throw UsageError("empty path in envs '" + text + "'");
        out.push_back(std::move(part));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string_view default_env_set(Study s) {
    switch (s) {
    case Study::Randomized:
    case Study::Symmetry: return "paper4";
    case Study::GoalBias: return "bias1";
    case Study::B3WorstCase: return "worstcase1";
    }
    return "paper4";
}

json params_json(const RewardParams& p) { return json::array({p.w_lava, p.w_goal, p.w_alive}); }

[[noreturn]] void rethrow_in(const Error& e, const std::string& where) {
    throw Error(e.kind(), where + ": " + e.what());
}

json trial_brief(const TrialResult& t) {
    return {{"class", to_string(t.cls)},
            {"env_id", t.env_id},
            {"entropy_correct", t.entropy_correct},
            {"entropy_misspec", t.entropy_misspec},
            {"entropy_change", t.entropy_change},
            {"regret", t.regret}};
}

void emit_record(std::ostream& diag, std::string_view level, std::string_view kind,
                 const std::string& message) {
    diag << json{{"level", level}, {"kind", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

std::string_view to_string(Study s) {
    for (const auto& [study, name] : kStudyNames)
        if (study == s) return name;
    return "?";
}

Study parse_study(std::string_view name) {
    for (const auto& [study, n] : kStudyNames)
        if (n == name) return study;
    throw UsageError("invalid value '" + std::string(name) +
                     "' for study (expected randomized, symmetry, goal-bias or b3-worst-case)");
}

void validate(const RunConfig& c) {
    if (!(c.beta > 0.0) || !std::isfinite(c.beta)) throw UsageError("beta must be > 0");
    if (c.angles < 8) throw UsageError("angles must be >= 8");
    if (c.tuples < 1) throw UsageError("tuples must be >= 1");
    if (c.size_min < 2) throw UsageError("size_min must be >= 2");
    if (c.size_max < c.size_min) throw UsageError("size_max must be >= size_min");
    if (c.jobs < 1) throw UsageError("jobs must be >= 1");
    if (c.symmetry_pairs < 1) throw UsageError("symmetry_pairs must be >= 1");
    if (c.symmetry_draws < 0) throw UsageError("symmetry_draws must be >= 0");
    for (double w : {c.theta_star.w_lava, c.theta_star.w_goal, c.theta_star.w_alive})
        if (!std::isfinite(w)) throw UsageError("theta_star must be finite");
    if (c.mirror_a2 && c.study != Study::Randomized)
        throw UsageError("mirror_a2 only applies to the randomized study");
}

json to_json(const RunConfig& c) {
    return {{"study", to_string(c.study)},
            {"envs", c.envs},
            {"theta_star", params_json(c.theta_star)},
            {"beta", c.beta},
            {"angles", c.angles},
            {"tuples", c.tuples},
            {"size_min", c.size_min},
            {"size_max", c.size_max},
            {"seed", c.seed},
            {"jobs", c.jobs},
            {"out", c.out},
            {"mirror_a2", c.mirror_a2},
            {"symmetry_pairs", c.symmetry_pairs},
            {"symmetry_draws", c.symmetry_draws}};
}

RunConfig apply_json(const json& j, RunConfig c) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "study") c.study = parse_study(json_get<std::string>(v, key));
        else if (key == "envs") c.envs = json_get<std::string>(v, key);
        else if (key == "theta_star") {
            if (!v.is_array() || v.size() != 3)
                throw UsageError("theta_star expects [w_lava, w_goal, w_alive]");
            c.theta_star = {json_get<double>(v[0], key), json_get<double>(v[1], key),
                            json_get<double>(v[2], key)};
        } else if (key == "beta") c.beta = json_get<double>(v, key);
        else if (key == "angles") c.angles = json_get<int>(v, key);
        else if (key == "tuples") c.tuples = json_get<int>(v, key);
        else if (key == "size_min") c.size_min = json_get<int>(v, key);
        else if (key == "size_max") c.size_max = json_get<int>(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned()) throw UsageError("invalid value " + v.dump() + " for seed");
            c.seed = v.get<std::uint64_t>();
        } else if (key == "jobs") c.jobs = json_get<int>(v, key);
        else if (key == "out") c.out = json_get<std::string>(v, key);
        else if (key == "mirror_a2") c.mirror_a2 = json_get<bool>(v, key);
        else if (key == "symmetry_pairs") c.symmetry_pairs = json_get<int>(v, key);
        else if (key == "symmetry_draws") c.symmetry_draws = json_get<int>(v, key);
        else throw UsageError("unknown config key '" + key + "'");
    }
    return c;
}

RunConfig parse_config(const std::vector<std::string>& args, std::string* help) {
    CLI::App app{"Choice set misspecification experiments for RRiC reward inference",
                 "rric-misspec"};
    std::map<std::string, std::string> flags;
    const auto add = [&](const std::string& name, const std::string& desc) {
        app.add_option("--" + name, flags[name], desc);
    };
    add("config", "JSON config file; flags override its values");
    add("study", "randomized | symmetry | goal-bias | b3-worst-case");
    add("envs", "builtin set (paper4, bias1, worstcase1) or comma-separated files");
    add("theta-star", "true reward weights w_lava,w_goal,w_alive (snapped to the grid)");
    add("beta", "Boltzmann rationality coefficient");
    add("angles", "number of theta grid points on the unit circle");
    add("tuples", "pairs per class per environment (randomized study)");
    add("size-min", "smallest sampled choice set");
    add("size-max", "largest sampled choice set");
    add("seed", "master seed");
    add("jobs", "worker threads");
    add("out", "output directory (default $RRIC_MISSPEC_OUT, then ./results)");
    add("symmetry-pairs", "support size of the symmetric sampler");
    add("symmetry-draws", "Monte Carlo draws from the symmetric sampler");
    bool mirror = false;
    app.add_flag("--mirror-a2", mirror, "build A2 pairs as swaps of the A1 pairs");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        if (help) *help = app.help();
        return {};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    const auto given = [&](const std::string& name) {
        return app.get_option("--" + name)->count() > 0;
    };

    RunConfig c;
    if (given("config")) {
        const auto& path = flags["config"];
        std::ifstream in(path);
        if (!in) throw FileError("cannot open config file " + path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError("config file " + path + " is not valid JSON: " + e.what());
        }
        c = apply_json(j, c);
    }
    if (given("study")) c.study = parse_study(flags["study"]);
    if (given("envs")) c.envs = flags["envs"];
    if (given("theta-star")) c.theta_star = parse_theta("theta-star", flags["theta-star"]);
    if (given("beta")) c.beta = parse_real("beta", flags["beta"]);
    if (given("angles")) c.angles = parse_integer<int>("angles", flags["angles"]);
    if (given("tuples")) c.tuples = parse_integer<int>("tuples", flags["tuples"]);
    if (given("size-min")) c.size_min = parse_integer<int>("size-min", flags["size-min"]);
    if (given("size-max")) c.size_max = parse_integer<int>("size-max", flags["size-max"]);
    if (given("seed")) c.seed = parse_integer<std::uint64_t>("seed", flags["seed"]);
    if (given("jobs")) c.jobs = parse_integer<int>("jobs", flags["jobs"]);
    if (given("out")) c.out = flags["out"];
    if (given("symmetry-pairs"))
        c.symmetry_pairs = parse_integer<int>("symmetry-pairs", flags["symmetry-pairs"]);
    if (given("symmetry-draws"))
        c.symmetry_draws = parse_integer<int>("symmetry-draws", flags["symmetry-draws"]);
    if (mirror) c.mirror_a2 = true;

    if (c.out.empty()) {
        const char* env = std::getenv("RRIC_MISSPEC_OUT");
        c.out = (env && *env) ? env : "results";
    }
    validate(c);
    return c;
}

std::string resolved_env_set(const RunConfig& c) {
    if (c.envs.empty()) return std::string(default_env_set(c.study));
    if (is_builtin_set(c.envs)) return c.envs;
    return {};
}

std::vector<GridWorld> load_environments(const RunConfig& c) {
    const auto set = resolved_env_set(c);
    if (!set.empty()) return builtin_environment_set(set);
    std::vector<GridWorld> envs;
    for (const auto& path : split_paths(c.envs)) envs.push_back(load_gridworld(path));
    return envs;
}

void run(const RunConfig& config, std::ostream& log, std::ostream& diag) {
    validate(config);
    const auto envs = load_environments(config);
    if (envs.empty()) throw UsageError("no environments");
    const auto grid = ThetaGrid::circle(config.angles);
    const InferenceSetup setup{grid.snap(config.theta_star), config.beta, Belief::uniform(grid)};
    const SizeBounds bounds{config.size_min, config.size_max};

    RunConfig resolved = config;
    if (resolved.envs.empty()) resolved.envs = resolved_env_set(config);

    std::vector<TrialResult> trials;
    std::optional<json> report;
    switch (config.study) {
    case Study::Randomized: {
        RandomizedStudyOptions opt;
        opt.tuples_per_class_per_env = config.tuples;
        opt.size_bounds = bounds;
        opt.seed = config.seed;
        opt.jobs = config.jobs;
        opt.mirror_a2 = config.mirror_a2;
        trials = run_randomized_study(envs, setup, opt);
        break;
    }
    case Study::Symmetry: {
        const auto& env = envs.front();
        const auto master = master_choice_set(env, grid.points());
        const auto sampler = SymmetricPairSampler::common_argmax(
            master, setup.theta_star, env, static_cast<std::size_t>(config.symmetry_pairs), bounds,
            config.seed);
        auto rep = run_symmetry_verification(sampler, setup, envs, env,
                                             static_cast<std::size_t>(config.symmetry_draws),
                                             config.seed, config.jobs);
        report = json{{"study", "symmetry"},
                      {"feedback_env", env.id()},
                      {"support_pairs", rep.support_pairs},
                      {"max_antisymmetry_residual", rep.max_antisymmetry_residual},
                      {"max_entropy_antisymmetry_residual", rep.max_entropy_antisymmetry_residual},
                      {"expected_regret", rep.expected_regret},
                      {"expected_entropy_change", rep.expected_entropy_change},
                      {"n_draws", rep.n_draws},
                      {"sampled_expected_regret", rep.sampled_expected_regret}};
        trials = std::move(rep.trials);
        break;
    }
    case Study::GoalBias: {
        json per_env = json::array();
        for (const auto& env : envs) {
            TrialResult t = [&] {
                try {
                    return run_goal_bias_study(env, setup);
                } catch (const Error& e) {
                    rethrow_in(e, "goal-bias study on " + env.id());
                }
            }();
            auto entry = trial_brief(t);
            entry["underconfident"] = t.entropy_change < 0.0;
            entry["regret_positive"] = t.regret > 0.0;
            per_env.push_back(std::move(entry));
            trials.push_back(std::move(t));
        }
        report = json{{"study", "goal-bias"}, {"environments", std::move(per_env)}};
        break;
    }
    case Study::B3WorstCase: {
        json per_env = json::array();
        for (const auto& env : envs) {
            WorstCaseReport w = [&] {
                try {
                    return run_b3_worst_case(env, setup);
                } catch (const Error& e) {
                    rethrow_in(e, "b3-worst-case study on " + env.id());
                }
            }();
            per_env.push_back({{"env_id", env.id()},
                               {"theta_star", params_json(setup.theta_star)},
                               {"b2", trial_brief(w.b2)},
                               {"b3", trial_brief(w.b3)},
                               {"b2_peak", params_json(w.b2_peak)},
                               {"b3_peak", params_json(w.b3_peak)},
                               {"theta_star_negative", w.theta_star_negative},
                               {"b3_peak_positive", w.b3_peak_positive},
                               {"b3_regret_exceeds_b2", w.b3_regret_exceeds_b2}});
            trials.push_back(std::move(w.b2));
            trials.push_back(std::move(w.b3));
        }
        report = json{{"study", "b3-worst-case"}, {"environments", std::move(per_env)}};
        break;
    }
    }

    const auto summary = summarize(trials);
    if (config.study == Study::Randomized)
        for (const auto& w : summary.warnings) emit_record(diag, "warning", "empty_class", w);

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("trials.csv", trials_csv(trials));
    files.emplace_back("summary.csv", summary_csv(summary));
    files.emplace_back("trials.json", trials_json(trials).dump() + "\n");
    if (report) files.emplace_back("report.json", report->dump(2) + "\n");
    files.emplace_back("config.resolved", to_json(resolved).dump(2) + "\n");
    write_files_atomically(config.out, files);

    log << to_string(config.study) << ": " << trials.size() << " trials written to "
        << config.out << '\n';
}

int exit_code_for(std::string_view kind) {
    static const std::map<std::string_view, int> codes = {
        {"usage_error", 2},          {"file_error", 3},
        {"parse_error", 4},          {"infeasible_class", 5},
        {"infeasible_construction", 5}, {"empty_bias_set", 5},
        {"impossible_observation", 6}, {"precondition", 7},
        {"contract_violation", 7},   {"numerical_degeneracy", 8},
    };
    const auto it = codes.find(kind);
    return it == codes.end() ? 1 : it->second;
}

int cli_main(const std::vector<std::string>& args, std::ostream& log, std::ostream& diag) {
    try {
        std::string help;
        const auto config = parse_config(args, &help);
        if (!help.empty()) {
            log << help;
            return 0;
        }
        run(config, log, diag);
        return 0;
    } catch (const Error& e) {
        emit_record(diag, "error", e.kind(), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        emit_record(diag, "error", "internal", e.what());
        return 1;
    }
}

} // namespace rric
