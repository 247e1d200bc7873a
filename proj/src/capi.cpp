#include "cim.h"

#include <cstring>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "cubic.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "readout.hpp"
#include "sde.hpp"

using namespace cim;

struct cim_graph {
    WeightedGraph g;
};
struct cim_ising {
    IsingProblem p;
};
struct cim_config {
    RunConfig rc;
};

namespace {

thread_local std::string t_last_error;
thread_local std::string t_last_summary;

cim_status status_of(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument: return CIM_ERR_INVALID_ARGUMENT;
    case ErrorKind::parse: return CIM_ERR_PARSE;
    case ErrorKind::validation: return CIM_ERR_VALIDATION;
    case ErrorKind::capability: return CIM_ERR_CAPABILITY;
    case ErrorKind::dimension: return CIM_ERR_DIMENSION;
    case ErrorKind::domain: return CIM_ERR_DOMAIN;
    case ErrorKind::divergence: return CIM_ERR_DIVERGENCE;
    case ErrorKind::stiffness: return CIM_ERR_STIFFNESS;
    case ErrorKind::io: return CIM_ERR_IO;
    case ErrorKind::internal: return CIM_ERR_INTERNAL;
    }
    return CIM_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes + thread-local message.
template <class Fn>
cim_status guarded(Fn&& fn) {
    try {
        fn();
        return CIM_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CIM_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return CIM_ERR_INTERNAL;
    }
}

cim_status require(bool ok, const char* msg) {
    if (ok) return CIM_OK;
    t_last_error = msg;
    return CIM_ERR_INVALID_ARGUMENT;
}

SpinConfig spins_from(const int8_t* spins, int n) {
    SpinConfig s;
    s.sigma.assign(spins, spins + n);
    validate(s);
    return s;
}

cim_status run_command(const cim_config* config, const char* out_dir, int check, int* check_ok,
                       CommandOutcome (*fn)(const RunConfig&, const std::string&, bool)) {
    auto bad = require(config && out_dir && check_ok, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        CommandOutcome out = fn(config->rc, out_dir, check != 0);
        t_last_summary = out.summary;
        for (const auto& failure : out.check_failures)
            t_last_summary += "\n  check failed: " + failure;
        *check_ok = out.check_ok ? 1 : 0;
    });
}

} // namespace

extern "C" {

const char* cim_status_name(cim_status status) {
    switch (status) {
    case CIM_OK: return "ok";
    case CIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CIM_ERR_PARSE: return "parse error";
    case CIM_ERR_VALIDATION: return "validation error";
    case CIM_ERR_CAPABILITY: return "capability error";
    case CIM_ERR_DIMENSION: return "dimension mismatch";
    case CIM_ERR_DOMAIN: return "domain error";
    case CIM_ERR_DIVERGENCE: return "divergence";
    case CIM_ERR_STIFFNESS: return "stiffness";
    case CIM_ERR_IO: return "io error";
    case CIM_ERR_CHECK_FAILED: return "check failed";
    case CIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* cim_last_error(void) { return t_last_error.c_str(); }
const char* cim_last_summary(void) { return t_last_summary.c_str(); }

cim_status cim_graph_parse_gset(const char* text, cim_graph** out) {
    auto bad = require(text && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_graph{parse_gset(std::string(text))}; });
}

cim_status cim_graph_load_gset(const char* path, cim_graph** out) {
    auto bad = require(path && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_graph{load_gset(path)}; });
}

cim_status cim_graph_complete(int n, double weight, cim_graph** out) {
    auto bad = require(out != nullptr, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_graph{complete_graph(n, weight)}; });
}

cim_status cim_graph_cubic(int n, int index, cim_graph** out) {
    auto bad = require(out != nullptr, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        auto graphs = enumerate_cubic_graphs(n);
        if (index < 0 || index >= static_cast<int>(graphs.size()))
            fail(ErrorKind::validation, "cubic graph index out of range");
        *out = new cim_graph{graphs[index]};
    });
}

cim_status cim_graph_random_cubic(int n, uint64_t seed, cim_graph** out) {
    auto bad = require(out != nullptr, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_graph{random_cubic_graph(n, seed)}; });
}

void cim_graph_free(cim_graph* graph) { delete graph; }

int cim_graph_vertex_count(const cim_graph* graph) { return graph ? graph->g.n : 0; }

int cim_graph_edge_count(const cim_graph* graph) {
    return graph ? static_cast<int>(graph->g.edges.size()) : 0;
}

int cim_graph_negative_edge_count(const cim_graph* graph) {
    return graph ? graph->g.negative_edge_count() : 0;
}

cim_status cim_graph_cut_value(const cim_graph* graph, const int8_t* spins, double* out) {
    auto bad = require(graph && spins && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = cut_value(graph->g, spins_from(spins, graph->g.n)); });
}

cim_status cim_cubic_graph_count(int n, int* out) {
    auto bad = require(out != nullptr, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = static_cast<int>(enumerate_cubic_graphs(n).size()); });
}

cim_status cim_ising_from_graph(const cim_graph* graph, cim_ising** out) {
    auto bad = require(graph && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_ising{graph_to_ising(graph->g)}; });
}

cim_status cim_ising_from_delays(int n, const cim_delay_line* lines, int n_lines,
                                 cim_ising** out) {
    auto bad = require(lines && out && n_lines >= 0, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        DelaySpec spec;
        spec.n = n;
        for (int i = 0; i < n_lines; ++i)
            spec.lines.push_back({lines[i].m, lines[i].phase_pi != 0, lines[i].amplitude,
                                  lines[i].enabled != 0});
        *out = new cim_ising{delay_line_topology(spec)};
    });
}

void cim_ising_free(cim_ising* ising) { delete ising; }

int cim_ising_spin_count(const cim_ising* ising) { return ising ? ising->p.n : 0; }

cim_status cim_ising_coupling(const cim_ising* ising, int i, int k, double* out) {
    auto bad = require(ising && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = ising->p.j_at(i, k); });
}

cim_status cim_ising_energy(const cim_ising* ising, const int8_t* spins, double* out) {
    auto bad = require(ising && spins && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = ising_energy(ising->p, spins_from(spins, ising->p.n)); });
}

cim_status cim_ising_ground(const cim_ising* ising, double* min_energy, long* n_ground) {
    auto bad = require(ising && min_energy && n_ground, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        auto ground = brute_force_ground(ising->p);
        *min_energy = ground.min_energy;
        *n_ground = static_cast<long>(ground.configs.size());
    });
}

cim_status cim_ising_local_improve(const cim_ising* ising, int8_t* spins) {
    auto bad = require(ising && spins, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        auto improved = local_improvement(ising->p, spins_from(spins, ising->p.n));
        std::memcpy(spins, improved.sigma.data(), improved.sigma.size());
    });
}

cim_status cim_normalized_cut_score(double o, double e_neg, double u_sdp, double* out) {
    auto bad = require(out != nullptr, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = normalized_cut_score(o, e_neg, u_sdp); });
}

cim_status cim_interferometer_pattern(const int8_t* spins, int n, uint8_t* bits) {
    auto bad = require(spins && bits && n >= 0, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        auto pattern = interferometer_pattern(spins_to_phase_state(spins_from(spins, n)));
        std::memcpy(bits, pattern.bits.data(), pattern.bits.size());
    });
}

cim_status cim_slow_detector_level(const uint8_t* bits, int n, double* level) {
    auto bad = require(bits && level && n > 0, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        PulseTrain pt;
        pt.bits.assign(bits, bits + n);
        *level = slow_detector_level(pt);
    });
}

cim_status cim_classify_pattern(const uint8_t* bits, int n, uint8_t* representative,
                                int* class_size) {
    auto bad = require(bits && representative && class_size && n > 0, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        PulseTrain pt;
        pt.bits.assign(bits, bits + n);
        auto cls = classify_pattern(pt);
        std::memcpy(representative, cls.representative.bits.data(),
                    cls.representative.bits.size());
        *class_size = cls.class_size;
    });
}

cim_status cim_config_load(const char* path, cim_config** out) {
    auto bad = require(path && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] { *out = new cim_config{load_run_config(path)}; });
}

cim_status cim_config_parse(const char* text, const char* origin, cim_config** out) {
    auto bad = require(text && out, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        auto file = KeyValueFile::parse(text, origin ? origin : "<memory>");
        *out = new cim_config{run_config_from(file)};
    });
}

void cim_config_free(cim_config* config) { delete config; }

void cim_config_override_seed(cim_config* config, uint64_t seed) {
    if (!config) return;
    config->rc.campaign.sim.seed = seed;
    config->rc.squeeze.seed = seed;
}

void cim_config_override_workers(cim_config* config, int workers) {
    if (!config) return;
    config->rc.campaign.workers = workers;
}

cim_status cim_run_trial(const cim_ising* ising, const cim_config* config, uint64_t trial_index,
                         int8_t* spins, double* energy, double* build_up) {
    auto bad = require(ising && config && spins && energy && build_up, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        TrialResult result = run_trial(ising->p, config->rc.campaign.sim, trial_index);
        std::memcpy(spins, result.spins.sigma.data(), result.spins.sigma.size());
        *energy = result.final_energy;
        *build_up = result.build_up_time ? *result.build_up_time : -1.0;
    });
}

cim_status cim_cmd_solve(const cim_config* config, const char* out_dir, int check,
                         int* check_ok) {
    return run_command(config, out_dir, check, check_ok, cmd_solve);
}

cim_status cim_cmd_survey_cubic(const cim_config* config, const char* out_dir, int check,
                                int* check_ok) {
    return run_command(config, out_dir, check, check_ok, cmd_survey_cubic);
}

cim_status cim_cmd_bench_gset(const cim_config* config, const char* out_dir, int check,
                              int* check_ok) {
    return run_command(config, out_dir, check, check_ok, cmd_bench_gset);
}

cim_status cim_cmd_squeeze(const cim_config* config, const char* out_dir, int check,
                           int* check_ok) {
    return run_command(config, out_dir, check, check_ok, cmd_squeeze);
}

cim_status cim_cmd_readout_table(const char* out_dir, int* check_ok) {
    auto bad = require(out_dir && check_ok, "null argument");
    if (bad != CIM_OK) return bad;
    return guarded([&] {
        CommandOutcome out = cim::cmd_readout_table(out_dir, false);
        t_last_summary = out.summary;
        *check_ok = 1;
    });
}

cim_status cim_cmd_independent(const cim_config* config, const char* out_dir, int check,
                               int* check_ok) {
    return run_command(config, out_dir, check, check_ok, cmd_independent);
}

} // extern "C"
