#include "rric/results_io.hpp"

#include "rric/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rric {

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trials_csv(std::span<const TrialResult> results) {
    std::size_t env_columns = 0;
    for (const auto& r : results) env_columns = std::max(env_columns, r.per_env_regret.size());

    std::ostringstream out;
    out << "class,env_id,seed,entropy_correct,entropy_misspec,entropy_change,regret";
    for (std::size_t i = 0; i < env_columns; ++i) out << ",regret_env_" << i;
    out << '\n';
    for (const auto& r : results) {
        out << to_string(r.cls) << ',' << r.env_id << ',' << r.seed << ','
            << format_number(r.entropy_correct) << ',' << format_number(r.entropy_misspec) << ','
            << format_number(r.entropy_change) << ',' << format_number(r.regret);
        for (std::size_t i = 0; i < env_columns; ++i) {
            out << ',';
            if (i < r.per_env_regret.size()) out << format_number(r.per_env_regret[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string summary_csv(const Summary& summary) {
    std::ostringstream out;
    out << "class,count";
    for (const char* measure : {"entropy_change", "regret"})
        for (const char* stat : {"mean", "std", "median", "q1", "q3", "min", "max"})
            out << ',' << measure << '_' << stat;
    out << '\n';
    for (const auto& c : summary.classes) {
        out << to_string(c.cls) << ',' << c.count;
        for (const Stats* s : {&c.entropy_change, &c.regret}) {
            for (double v : {s->mean, s->std, s->median, s->q1, s->q3, s->min, s->max})
                out << ',' << format_number(v);
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json trials_json(std::span<const TrialResult> results) {
    nlohmann::json out;
    nlohmann::json grid = nlohmann::json::array();
    if (!results.empty()) {
        for (const auto& p : results.front().belief_correct.grid().points())
            grid.push_back({p.w_lava, p.w_goal, p.w_alive});
    }
    out["theta_grid"] = std::move(grid);
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& r : results) {
        trials.push_back({{"class", to_string(r.cls)},
                          {"env_id", r.env_id},
                          {"seed", r.seed},
                          {"entropy_correct", r.entropy_correct},
                          {"entropy_misspec", r.entropy_misspec},
                          {"entropy_change", r.entropy_change},
                          {"regret", r.regret},
                          {"per_env_regret", r.per_env_regret},
                          {"belief_correct", r.belief_correct.probs()},
                          {"belief_misspecified", r.belief_misspecified.probs()}});
    }
    out["trials"] = std::move(trials);
    return out;
}

void write_files_atomically(const std::filesystem::path& dir,
                            std::span<const std::pair<std::string, std::string>> files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw FileError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> temps;
    try {
        for (const auto& [name, contents] : files) {
            auto tmp = dir / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw FileError("cannot write " + tmp.string());
            temps.push_back(tmp);
            out << contents;
            out.close();
            if (!out) throw FileError("failed writing " + tmp.string());
        }
    } catch (...) {
        for (const auto& t : temps) std::filesystem::remove(t, ec);
        throw;
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::filesystem::rename(temps[i], dir / files[i].first, ec);
        if (ec) throw FileError("cannot rename " + temps[i].string() + ": " + ec.message());
    }
}

} // namespace rric
