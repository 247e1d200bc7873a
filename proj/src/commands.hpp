#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace cim {

struct CommandOutcome {
    bool check_requested = false;
    bool check_ok = true;
    std::vector<std::string> files;
    std::vector<std::string> check_failures;
    std::string summary; // one-line console summary (may include wall-clock)
};

CommandOutcome cmd_solve(const RunConfig& rc, const std::string& out_dir, bool check);
CommandOutcome cmd_survey_cubic(const RunConfig& rc, const std::string& out_dir, bool check);
CommandOutcome cmd_bench_gset(const RunConfig& rc, const std::string& out_dir, bool check);
CommandOutcome cmd_squeeze(const RunConfig& rc, const std::string& out_dir, bool check);
CommandOutcome cmd_readout_table(const std::string& out_dir, bool check);
CommandOutcome cmd_independent(const RunConfig& rc, const std::string& out_dir, bool check);

} // namespace cim
