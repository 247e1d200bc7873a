#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "report.hpp"

namespace cim {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

} // namespace

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
    KeyValueFile file;
    file.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        size_t eq = body.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::parse,
                 origin + " line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            fail(ErrorKind::parse, origin + " line " + std::to_string(line_no) + ": empty key");
        if (!file.values_.emplace(key, value).second)
            fail(ErrorKind::parse,
                 origin + " line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return file;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    mark_known(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueFile::get_real(const std::string& key, double fallback) const {
    mark_known(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
        fail(ErrorKind::parse, origin_ + ": bad number for '" + key + "'");
    }
    if (pos != it->second.size() || !std::isfinite(v))
        fail(ErrorKind::parse, origin_ + ": bad number for '" + key + "'");
    return v;
}

long KeyValueFile::get_int(const std::string& key, long fallback) const {
    mark_known(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(it->second, &pos);
    } catch (const std::exception&) {
        fail(ErrorKind::parse, origin_ + ": bad integer for '" + key + "'");
    }
    if (pos != it->second.size())
        fail(ErrorKind::parse, origin_ + ": bad integer for '" + key + "'");
    return v;
}

uint64_t KeyValueFile::get_u64(const std::string& key, uint64_t fallback) const {
    mark_known(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
        fail(ErrorKind::parse, origin_ + ": bad unsigned integer for '" + key + "'");
    }
    if (pos != it->second.size())
        fail(ErrorKind::parse, origin_ + ": bad unsigned integer for '" + key + "'");
    return v;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    mark_known(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    fail(ErrorKind::parse, origin_ + ": bad boolean for '" + key + "' (use true/false)");
}

std::vector<double> KeyValueFile::get_real_list(const std::string& key) const {
    mark_known(key);
    std::vector<double> out;
    auto it = values_.find(key);
    if (it == values_.end()) return out;
    for (const auto& tok : split(it->second, ',')) {
        if (tok.empty()) continue;
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            fail(ErrorKind::parse, origin_ + ": bad number '" + tok + "' in '" + key + "'");
        }
        if (pos != tok.size())
            fail(ErrorKind::parse, origin_ + ": bad number '" + tok + "' in '" + key + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> KeyValueFile::get_string_list(const std::string& key) const {
    mark_known(key);
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    return split(it->second, ',');
}

void KeyValueFile::mark_known(const std::string& key) const { known_[key] = true; }

void KeyValueFile::reject_unknown() const {
    for (const auto& [key, value] : values_)
        if (!known_.count(key))
            fail(ErrorKind::parse, origin_ + ": unknown key '" + key + "'");
}

DelaySpec parse_delay_lines(int n, const std::string& text) {
    DelaySpec d;
    d.n = n;
    for (const auto& entry : split(text, ',')) {
        if (entry.empty()) continue;
        auto parts = split(entry, ':');
        if (parts.size() != 3)
            fail(ErrorKind::parse, "delay entry '" + entry + "' must be m:phase:amp");
        DelaySpec::Line line;
        try {
            line.m = std::stoi(parts[0]);
            line.amplitude = std::stod(parts[2]);
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "bad delay entry '" + entry + "'");
        }
        if (parts[1] == "pi") line.phase_pi = true;
        else if (parts[1] == "0") line.phase_pi = false;
        else fail(ErrorKind::parse, "delay phase must be 0 or pi in '" + entry + "'");
        line.enabled = true;
        d.lines.push_back(line);
    }
    validate(d);
    return d;
}

namespace {

IsingProblem parse_inline_couplings(int n, const std::string& text) {
    IsingProblem p;
    p.n = n;
    for (const auto& entry : split(text, ';')) {
        if (entry.empty()) continue;
        std::istringstream in(entry);
        int u = 0, v = 0;
        double j = 0;
        if (!(in >> u >> v >> j))
            fail(ErrorKind::parse, "inline coupling '" + entry + "' must be 'u v J' (1-indexed)");
        std::string rest;
        if (in >> rest) fail(ErrorKind::parse, "trailing tokens in coupling '" + entry + "'");
        if (u < 1 || v < 1 || u > n || v > n)
            fail(ErrorKind::validation, "inline coupling vertex out of range in '" + entry + "'");
        if (u == v) fail(ErrorKind::validation, "inline coupling on the diagonal");
        p.couplings.push_back({u - 1, v - 1, j});
    }
    p.finalize();
    return p;
}

std::optional<double> optional_real(const KeyValueFile& f, const std::string& key) {
    if (!f.has(key)) {
        f.mark_known(key);
        return std::nullopt;
    }
    return f.get_real(key, 0.0);
}

} // namespace

RunConfig run_config_from(const KeyValueFile& f) {
    RunConfig rc;

    // Problem source.
    std::string problem = f.get_string("problem", "cubic");
    if (problem == "cubic") {
        rc.campaign.problem.kind = ProblemKind::cubic;
        rc.campaign.problem.cubic_n = static_cast<int>(f.get_int("cubic_n", 4));
        rc.campaign.problem.cubic_index = static_cast<int>(f.get_int("cubic_index", 0));
    } else if (problem == "random_cubic") {
        rc.campaign.problem.kind = ProblemKind::random_cubic;
        rc.campaign.problem.cubic_n = static_cast<int>(f.get_int("cubic_n", 4));
        rc.campaign.problem.cubic_seed = f.get_u64("cubic_seed", 1);
    } else if (problem == "gset") {
        rc.campaign.problem.kind = ProblemKind::gset_file;
        rc.campaign.problem.gset_path = f.get_string("gset_path", "");
        if (rc.campaign.problem.gset_path.empty())
            fail(ErrorKind::validation, "problem = gset requires gset_path");
    } else if (problem == "delays") {
        rc.campaign.problem.kind = ProblemKind::delays;
        int n = static_cast<int>(f.get_int("delays_n", 4));
        rc.campaign.problem.delays = parse_delay_lines(n, f.get_string("delays", ""));
    } else if (problem == "uncoupled") {
        rc.campaign.problem.kind = ProblemKind::uncoupled;
        rc.campaign.problem.n_uncoupled = static_cast<int>(f.get_int("uncoupled_n", 4));
    } else if (problem == "inline") {
        rc.campaign.problem.kind = ProblemKind::inline_ising;
        int n = static_cast<int>(f.get_int("n_spins", 0));
        if (n < 1) fail(ErrorKind::validation, "problem = inline requires n_spins");
        rc.campaign.problem.inline_problem =
            parse_inline_couplings(n, f.get_string("inline_couplings", ""));
    } else {
        fail(ErrorKind::parse, "unknown problem kind '" + problem + "'");
    }

    // Campaign.
    rc.campaign.n_trials = f.get_int("n_trials", rc.campaign.n_trials);
    rc.campaign.apply_local_improvement =
        f.get_bool("apply_local_improvement", rc.campaign.apply_local_improvement);
    rc.campaign.want_q = f.get_bool("want_q", rc.campaign.want_q);
    rc.campaign.workers = static_cast<int>(f.get_int("workers", 0));

    // Simulation.
    SimConfig& sim = rc.campaign.sim;
    std::string pump = f.get_string("pump", "constant");
    if (pump == "constant") {
        sim.pump = PumpSchedule::constant(f.get_real("p", 1.1));
    } else if (pump == "ramp") {
        sim.pump = PumpSchedule::ramp(f.get_real("p_start", 0.0), f.get_real("p_end", 2.2),
                                      f.get_real("t_ramp", 1500.0));
        f.get_real("p", 0.0); // tolerated but unused with ramps
    } else {
        fail(ErrorKind::parse, "pump must be constant or ramp");
    }
    sim.xi_scale = f.get_real("xi_scale", sim.xi_scale);
    std::string mode = f.get_string("coupling_mode", "linear");
    if (mode == "linear") sim.coupling_mode = CouplingMode::linear;
    else if (mode == "sign") sim.coupling_mode = CouplingMode::sign_only;
    else fail(ErrorKind::parse, "coupling_mode must be linear or sign");
    sim.a_s = f.get_real("a_s", sim.a_s);
    std::string integrator = f.get_string("integrator", "fixed_step");
    if (integrator == "fixed_step") sim.integrator = IntegratorKind::fixed_step;
    else if (integrator == "adaptive_dp") sim.integrator = IntegratorKind::adaptive_dp;
    else fail(ErrorKind::parse, "integrator must be fixed_step or adaptive_dp");
    sim.dt = f.get_real("dt", sim.dt);
    sim.dt_max = f.get_real("dt_max", sim.dt_max);
    sim.rel_tol = f.get_real("rel_tol", sim.rel_tol);
    sim.abs_tol = f.get_real("abs_tol", sim.abs_tol);
    sim.t_max = f.get_real("t_max", sim.t_max);
    sim.seed = f.get_u64("seed", sim.seed);
    sim.sample_stride = static_cast<int>(f.get_int("sample_stride", sim.sample_stride));
    sim.buildup_fraction = f.get_real("buildup_fraction", sim.buildup_fraction);
    sim.buildup_window = f.get_real("buildup_window", sim.buildup_window);
    sim.gamma_s = f.get_real("gamma_s", sim.gamma_s);
    validate(sim);

    // Survey.
    if (f.has("survey_orders")) {
        rc.survey_orders.clear();
        for (double v : f.get_real_list("survey_orders"))
            rc.survey_orders.push_back(static_cast<int>(v));
    } else {
        f.mark_known("survey_orders");
    }
    rc.survey_trials = f.get_int("survey_trials", rc.survey_trials);

    // G-set benchmark.
    rc.gset_paths = f.get_string_list("gset_paths");
    rc.gset.n_runs = f.get_int("gset_runs", rc.gset.n_runs);
    rc.gset.vertex_cap = f.get_int("gset_vertex_cap", rc.gset.vertex_cap);
    rc.gset.allow_large = f.get_bool("gset_allow_large", rc.gset.allow_large);

    // Squeezing comparison.
    if (f.has("squeeze_p_values")) rc.squeeze_p_values = f.get_real_list("squeeze_p_values");
    else f.mark_known("squeeze_p_values");
    rc.squeeze.a_s = f.get_real("squeeze_a_s", rc.squeeze.a_s);
    rc.squeeze.dt = f.get_real("squeeze_dt", rc.squeeze.dt);
    rc.squeeze.n_trajectories =
        static_cast<int>(f.get_int("squeeze_trajectories", rc.squeeze.n_trajectories));
    rc.squeeze.samples_per_trajectory = static_cast<int>(
        f.get_int("squeeze_samples_per_trajectory", rc.squeeze.samples_per_trajectory));
    rc.squeeze.sample_stride = f.get_real("squeeze_stride", rc.squeeze.sample_stride);
    rc.squeeze.burn_in_scale = f.get_real("squeeze_burn_in_scale", rc.squeeze.burn_in_scale);
    rc.squeeze.guard = f.get_real("squeeze_guard", rc.squeeze.guard);
    rc.squeeze.seed = rc.campaign.sim.seed;

    // Independent-OPO experiment.
    rc.independent_n = static_cast<int>(f.get_int("independent_n", rc.independent_n));
    rc.independent_trials = f.get_int("independent_trials", rc.independent_trials);

    rc.dump_trajectories = f.get_int("dump_trajectories", 0);

    // Acceptance bands.
    rc.checks.q_raw_min = optional_real(f, "check_q_raw_min");
    rc.checks.q_raw_max = optional_real(f, "check_q_raw_max");
    rc.checks.aligned_mass_max = optional_real(f, "check_aligned_mass_max");
    rc.checks.buildup_median_min = optional_real(f, "check_buildup_median_min");
    rc.checks.buildup_median_max = optional_real(f, "check_buildup_median_max");
    rc.checks.buildup_ratio_max = optional_real(f, "check_buildup_ratio_max");
    rc.checks.state_z_max = optional_real(f, "check_state_z_max");
    rc.checks.level_z_max = optional_real(f, "check_level_z_max");
    rc.checks.squeeze_z_max = optional_real(f, "check_squeeze_z_max");
    rc.checks.squeeze_rel_err_max = optional_real(f, "check_squeeze_rel_err_max");
    rc.checks.o_avg_min = optional_real(f, "check_o_avg_min");
    rc.checks.o_max_min = optional_real(f, "check_o_max_min");
    rc.checks.survey_counts = f.get_bool("check_survey_counts", false);

    f.reject_unknown();
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from(KeyValueFile::load(path));
}

std::string serialize(const SimConfig& cfg) {
    auto real = [](double v) { return format_double(v); };
    std::string out;
    if (cfg.pump.kind == PumpKind::constant) {
        out += "pump = constant\np = " + real(cfg.pump.p) + "\n";
    } else {
        out += "pump = ramp\np_start = " + real(cfg.pump.p_start) +
               "\np_end = " + real(cfg.pump.p_end) + "\nt_ramp = " + real(cfg.pump.t_ramp) + "\n";
    }
    out += "xi_scale = " + real(cfg.xi_scale) + "\n";
    out += std::string("coupling_mode = ") +
           (cfg.coupling_mode == CouplingMode::linear ? "linear" : "sign") + "\n";
    out += "a_s = " + real(cfg.a_s) + "\n";
    out += std::string("integrator = ") +
           (cfg.integrator == IntegratorKind::fixed_step ? "fixed_step" : "adaptive_dp") + "\n";
    out += "dt = " + real(cfg.dt) + "\n";
    out += "dt_max = " + real(cfg.dt_max) + "\n";
    out += "rel_tol = " + real(cfg.rel_tol) + "\n";
    out += "abs_tol = " + real(cfg.abs_tol) + "\n";
    out += "t_max = " + real(cfg.t_max) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "sample_stride = " + std::to_string(cfg.sample_stride) + "\n";
    out += "buildup_fraction = " + real(cfg.buildup_fraction) + "\n";
    out += "buildup_window = " + real(cfg.buildup_window) + "\n";
    if (cfg.gamma_s > 0.0) out += "gamma_s = " + real(cfg.gamma_s) + "\n";
    return out;
}

} // namespace cim
