#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "quantum.hpp"

namespace cim {

// Flat "key = value" file with '#' comments. Unknown keys are rejected by the
// consumers so typos fail loudly.
class KeyValueFile {
public:
    static KeyValueFile load(const std::string& path);
    static KeyValueFile parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_real_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    void mark_known(const std::string& key) const;
    void reject_unknown() const; // throws on keys never marked known

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> known_;
};

// Optional acceptance bands; --check compares results against whichever are
// present and the CLI exits 3 on violation.
struct CheckBands {
    std::optional<double> q_raw_min, q_raw_max;
    std::optional<double> aligned_mass_max; // mass of the all-ones pattern class
    std::optional<double> buildup_median_min, buildup_median_max;
    std::optional<double> buildup_ratio_max;
    std::optional<double> state_z_max, level_z_max;
    std::optional<double> squeeze_z_max, squeeze_rel_err_max;
    std::optional<double> o_avg_min, o_max_min;
    bool survey_counts = false; // verify enumeration counts 1,2,5,19
};

// Everything a CLI run needs, parsed from one config file.
struct RunConfig {
    CampaignSpec campaign;

    std::vector<int> survey_orders{4, 6, 8};
    long survey_trials = 200;

    std::vector<std::string> gset_paths;
    GsetBenchOptions gset;

    SqueezeConfig squeeze;
    std::vector<double> squeeze_p_values{0.0, 0.5, 0.9};

    int independent_n = 4;
    long independent_trials = 1000;

    long dump_trajectories = 0; // solve: export the first N trials as CSV

    CheckBands checks;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from(const KeyValueFile& file);

// "m:phase:amp" entries, comma separated; phase is "0" or "pi".
DelaySpec parse_delay_lines(int n, const std::string& text);

// Key-value text that parses back to the same simulation settings.
std::string serialize(const SimConfig& cfg);

} // namespace cim
