// Command-line front end for the OPO Ising machine simulator. Talks to the
// shared library exclusively through the public C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "cim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheck = 3;

struct ConfigDeleter {
    void operator()(cim_config* c) const { cim_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cim_config, ConfigDeleter>;

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
    bool check = false;
    bool verbose = false;
};

int classify_failure(cim_status status) {
    switch (status) {
    case CIM_ERR_PARSE:
    case CIM_ERR_VALIDATION:
    case CIM_ERR_IO:
    case CIM_ERR_INVALID_ARGUMENT:
        return kExitConfig;
    default:
        return kExitRuntime;
    }
}

int run(const std::string& command, const Options& opt) {
    ConfigPtr config;
    if (command != "readout-table") {
        if (opt.config_path.empty()) {
            std::fprintf(stderr, "error: %s requires --config\n", command.c_str());
            return kExitConfig;
        }
        cim_config* raw = nullptr;
        cim_status status = cim_config_load(opt.config_path.c_str(), &raw);
        if (status != CIM_OK) {
            std::fprintf(stderr, "error: %s: %s\n", cim_status_name(status), cim_last_error());
            return kExitConfig;
        }
        config.reset(raw);
        if (opt.seed_set) cim_config_override_seed(config.get(), opt.seed);
        if (opt.workers >= 0) cim_config_override_workers(config.get(), opt.workers);
    }

    int check_ok = 1;
    cim_status status = CIM_OK;
    if (command == "solve")
        status = cim_cmd_solve(config.get(), opt.out_dir.c_str(), opt.check, &check_ok);
    else if (command == "survey-cubic")
        status = cim_cmd_survey_cubic(config.get(), opt.out_dir.c_str(), opt.check, &check_ok);
    else if (command == "bench-gset")
        status = cim_cmd_bench_gset(config.get(), opt.out_dir.c_str(), opt.check, &check_ok);
    else if (command == "squeeze")
        status = cim_cmd_squeeze(config.get(), opt.out_dir.c_str(), opt.check, &check_ok);
    else if (command == "readout-table")
        status = cim_cmd_readout_table(opt.out_dir.c_str(), &check_ok);
    else if (command == "independent")
        status = cim_cmd_independent(config.get(), opt.out_dir.c_str(), opt.check, &check_ok);
    else {
        std::fprintf(stderr, "error: unknown command '%s'\n", command.c_str());
        return kExitConfig;
    }

    if (status != CIM_OK) {
        std::fprintf(stderr, "error: %s: %s\n", cim_status_name(status), cim_last_error());
        return classify_failure(status);
    }
    if (opt.verbose || !check_ok) std::fprintf(stderr, "%s\n", cim_last_summary());
    if (!check_ok) {
        std::fprintf(stderr, "check: FAIL\n");
        return kExitCheck;
    }
    if (opt.check) std::fprintf(stderr, "check: ok\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator of a time-multiplexed OPO network acting as an Ising machine"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("CIM_WORKERS")) opt.workers = std::atoi(env);

    const char* names[] = {"solve",   "survey-cubic", "bench-gset",
                           "squeeze", "readout-table", "independent"};
    const char* descriptions[] = {
        "run one multi-trial campaign on a single problem",
        "run every cubic graph of the configured orders",
        "score G-set instances against their SDP relaxation metadata",
        "cross-check squeezing between the generalized-P and Langevin models",
        "emit the 16-row phase-state measurement table",
        "run uncoupled OPOs and test phase-state uniformity",
    };
    for (int i = 0; i < 6; ++i) {
        auto* sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--config", opt.config_path, "key-value run configuration");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", opt.seed, "override the campaign seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--workers", opt.workers, "trial worker pool size (0 = hardware)");
        sub->add_flag("--check", opt.check, "verify the config's check_* bands; exit 3 on failure");
        sub->add_flag("-v,--verbose", opt.verbose, "print the run summary");
    }

    CLI11_PARSE(app, argc, argv);
    return run(app.get_subcommands().front()->get_name(), opt);
}
