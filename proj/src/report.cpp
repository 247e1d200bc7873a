#include "report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "error.hpp"
#include "json.hpp"

namespace cim {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) fail(ErrorKind::io, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail(ErrorKind::io, "cannot rename into '" + path + "': " + ec.message());
    }
}

namespace {

std::string train_string(const PulseTrain& pt) {
    std::string s;
    for (uint8_t b : pt.bits) s += static_cast<char>('0' + b);
    return s;
}

std::string spin_string(const SpinConfig& s) {
    std::string out;
    out.reserve(s.sigma.size());
    for (int8_t v : s.sigma) out += v > 0 ? '+' : '-';
    return out;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

json buildup_json(const BuildUpSummary& b) {
    return json{{"present", b.present}, {"absent", b.absent},   {"median", b.median},
                {"q1", b.q1},           {"q3", b.q3},           {"max", b.max},
                {"mean", b.mean}};
}

} // namespace

std::string histogram_csv(const StateHistogram& hist) {
    std::string csv = "representative,class_size,raw_count,per_state\n";
    for (const auto& entry : hist.entries) {
        csv += train_string(entry.representative) + "," + std::to_string(entry.class_size) + "," +
               std::to_string(entry.raw_count) + "," + format_double(entry.per_state) + "\n";
    }
    return csv;
}

std::string levels_csv(const std::map<double, double>& levels) {
    std::string csv = "level,frequency\n";
    for (const auto& [level, freq] : levels)
        csv += format_double(level) + "," + format_double(freq) + "\n";
    return csv;
}

std::string trajectory_csv(const std::vector<OpoNetworkState>& trajectory) {
    if (trajectory.empty()) fail(ErrorKind::invalid_argument, "empty trajectory");
    const int n = trajectory.front().n();
    std::string csv = "t";
    for (int j = 1; j <= n; ++j) csv += ",c_" + std::to_string(j);
    for (int j = 1; j <= n; ++j) csv += ",s_" + std::to_string(j);
    csv += "\n";
    for (const auto& st : trajectory) {
        csv += format_double(st.t);
        for (double v : st.c) csv += "," + format_double(v);
        for (double v : st.s) csv += "," + format_double(v);
        csv += "\n";
    }
    return csv;
}

std::vector<std::string> write_campaign_reports(const CampaignStats& stats,
                                                const std::string& dir) {
    std::vector<std::string> files;

    std::string summary =
        "label,n,n_trials,n_failed,oracle,ground_energy,q_raw,q_raw_lo,q_raw_hi,q_improved,"
        "q_improved_lo,q_improved_hi,buildup_present,buildup_absent,buildup_median,buildup_q1,"
        "buildup_q3,buildup_max,T,best_energy,mean_energy,best_cut,mean_cut\n";
    summary += stats.label + "," + std::to_string(stats.n) + "," + std::to_string(stats.n_trials) +
               "," + std::to_string(stats.n_failed) + "," +
               (stats.oracle_available ? "1" : "0") + "," + format_double(stats.ground_energy) +
               "," + format_double(stats.q_raw) + "," + format_double(stats.q_raw_ci.lo) + "," +
               format_double(stats.q_raw_ci.hi) + "," + format_double(stats.q_improved) + "," +
               format_double(stats.q_improved_ci.lo) + "," + format_double(stats.q_improved_ci.hi) +
               "," + std::to_string(stats.build_up.present) + "," +
               std::to_string(stats.build_up.absent) + "," + format_double(stats.build_up.median) +
               "," + format_double(stats.build_up.q1) + "," + format_double(stats.build_up.q3) +
               "," + format_double(stats.build_up.max) + "," + format_double(stats.build_up.mean) +
               "," + format_double(stats.best_energy) + "," + format_double(stats.mean_energy) +
               "," + opt_str(stats.best_cut) + "," + opt_str(stats.mean_cut) + "\n";
    files.push_back(dir + "/campaign.csv");
    write_file_atomic(files.back(), summary);

    std::string trials =
        "index,failed,energy_raw,energy_improved,cut_raw,cut_improved,build_up,success_raw,"
        "success_improved,spins\n";
    for (const auto& t : stats.trials) {
        trials += std::to_string(t.index) + "," + (t.failed ? "1" : "0") + ",";
        if (t.failed) {
            trials += ",,,,,,,\n";
            continue;
        }
        trials += format_double(t.energy_raw) + "," + format_double(t.energy_improved) + "," +
                  opt_str(t.cut_raw) + "," + opt_str(t.cut_improved) + "," + opt_str(t.build_up) +
                  "," + (t.success_raw ? "1" : "0") + "," + (t.success_improved ? "1" : "0") + "," +
                  spin_string(t.spins) + "\n";
    }
    files.push_back(dir + "/trials.csv");
    write_file_atomic(files.back(), trials);

    if (stats.histogram) {
        files.push_back(dir + "/histogram.csv");
        write_file_atomic(files.back(), histogram_csv(*stats.histogram));
    }
    if (stats.levels) {
        files.push_back(dir + "/levels.csv");
        write_file_atomic(files.back(), levels_csv(*stats.levels));
    }

    json j{{"label", stats.label},
           {"n", stats.n},
           {"n_trials", stats.n_trials},
           {"n_failed", stats.n_failed},
           {"oracle_available", stats.oracle_available},
           {"ground_energy", stats.ground_energy},
           {"q_raw", stats.q_raw},
           {"q_raw_ci", {stats.q_raw_ci.lo, stats.q_raw_ci.hi}},
           {"q_improved", stats.q_improved},
           {"q_improved_ci", {stats.q_improved_ci.lo, stats.q_improved_ci.hi}},
           {"build_up", buildup_json(stats.build_up)},
           {"best_energy", stats.best_energy},
           {"mean_energy", stats.mean_energy}};
    if (stats.best_cut) j["best_cut"] = *stats.best_cut;
    if (stats.mean_cut) j["mean_cut"] = *stats.mean_cut;
    if (stats.t_seconds > 0.0) j["T_seconds"] = stats.t_seconds;
    files.push_back(dir + "/campaign.json");
    write_file_atomic(files.back(), j.dump(2) + "\n");
    return files;
}

std::vector<std::string> write_survey_reports(const CubicSurveyResult& survey,
                                              const std::string& dir) {
    std::vector<std::string> files;
    std::string csv =
        "order,graph_index,n_trials,q_raw,q_improved,buildup_present,buildup_absent,"
        "buildup_median,buildup_q1,buildup_q3,buildup_max,T\n";
    for (const auto& row : survey.rows) {
        csv += std::to_string(row.order) + "," + std::to_string(row.graph_index) + "," +
               std::to_string(row.n_trials) + "," + format_double(row.q_raw) + "," +
               format_double(row.q_improved) + "," + std::to_string(row.build_up.present) + "," +
               std::to_string(row.build_up.absent) + "," + format_double(row.build_up.median) +
               "," + format_double(row.build_up.q1) + "," + format_double(row.build_up.q3) + "," +
               format_double(row.build_up.max) + "," + format_double(row.build_up.mean) + "\n";
    }
    files.push_back(dir + "/survey.csv");
    write_file_atomic(files.back(), csv);

    std::string summary = "order,graphs,q_min,buildup_median\n";
    json j = json::array();
    for (const auto& [order, count] : survey.graphs_per_order) {
        summary += std::to_string(order) + "," + std::to_string(count) + "," +
                   format_double(survey.q_min_per_order.at(order)) + "," +
                   format_double(survey.buildup_median_per_order.at(order)) + "\n";
        j.push_back({{"order", order},
                     {"graphs", count},
                     {"q_min", survey.q_min_per_order.at(order)},
                     {"buildup_median", survey.buildup_median_per_order.at(order)}});
    }
    files.push_back(dir + "/survey_summary.csv");
    write_file_atomic(files.back(), summary);
    files.push_back(dir + "/survey.json");
    write_file_atomic(files.back(), j.dump(2) + "\n");
    return files;
}

std::vector<std::string> write_gset_reports(const std::vector<GsetBenchRow>& rows,
                                            const std::string& dir) {
    std::vector<std::string> files;
    std::string csv = "name,V,E,U_SDP,E_neg,n_runs,O_max,O_avg,T,skipped,skip_reason\n";
    json j = json::array();
    for (const auto& row : rows) {
        if (row.skipped) {
            std::string reason = row.skip_reason;
            for (char& ch : reason)
                if (ch == ',' || ch == '\n') ch = ';';
            csv += row.name + ",,,,," + std::to_string(row.n_runs) + ",,,," + "1," + reason + "\n";
            j.push_back({{"name", row.name}, {"skipped", true}, {"skip_reason", row.skip_reason}});
            continue;
        }
        csv += row.name + "," + std::to_string(row.v) + "," + std::to_string(row.e) + "," +
               format_double(row.u_sdp) + "," + std::to_string(row.e_neg) + "," +
               std::to_string(row.n_runs) + "," + format_double(row.o_max) + "," +
               format_double(row.o_avg) + "," + format_double(row.t_mean) + ",0,\n";
        j.push_back({{"name", row.name},
                     {"V", row.v},
                     {"E", row.e},
                     {"U_SDP", row.u_sdp},
                     {"E_neg", row.e_neg},
                     {"n_runs", row.n_runs},
                     {"O_max", row.o_max},
                     {"O_avg", row.o_avg},
                     {"T", row.t_mean},
                     {"skipped", false}});
    }
    files.push_back(dir + "/bench.csv");
    write_file_atomic(files.back(), csv);
    files.push_back(dir + "/bench.json");
    write_file_atomic(files.back(), j.dump(2) + "\n");
    return files;
}

std::vector<std::string> write_squeeze_reports(const std::vector<SqueezeRow>& rows,
                                               const std::string& dir) {
    std::vector<std::string> files;
    std::string csv =
        "p,var_a1_qfpe,var_a2_qfpe,var_a1_clge,var_a2_clge,z1,z2,rejected_fraction\n";
    json j = json::array();
    for (const auto& row : rows) {
        csv += format_double(row.p) + "," + format_double(row.qfpe.var_a1) + "," +
               format_double(row.qfpe.var_a2) + "," + format_double(row.clge.var_a1) + "," +
               format_double(row.clge.var_a2) + "," + format_double(row.z1) + "," +
               format_double(row.z2) + "," + format_double(row.rejected_fraction) + "\n";
        j.push_back({{"p", row.p},
                     {"var_a1_qfpe", row.qfpe.var_a1},
                     {"var_a2_qfpe", row.qfpe.var_a2},
                     {"stderr_a1_qfpe", row.qfpe.stderr_a1},
                     {"stderr_a2_qfpe", row.qfpe.stderr_a2},
                     {"var_a1_clge", row.clge.var_a1},
                     {"var_a2_clge", row.clge.var_a2},
                     {"stderr_a1_clge", row.clge.stderr_a1},
                     {"stderr_a2_clge", row.clge.stderr_a2},
                     {"z1", row.z1},
                     {"z2", row.z2},
                     {"rejected_fraction", row.rejected_fraction},
                     {"clamp_events", row.clamp_events},
                     {"flagged", row.flagged}});
    }
    files.push_back(dir + "/squeeze.csv");
    write_file_atomic(files.back(), csv);
    files.push_back(dir + "/squeeze.json");
    write_file_atomic(files.back(), j.dump(2) + "\n");
    return files;
}

std::vector<std::string> write_readout_table_report(const std::string& dir) {
    std::string csv = "state,pulse_train,slow_detector\n";
    for (const auto& row : readout_table())
        csv += row.state + "," + row.pulse_train + "," + format_double(row.level) + "\n";
    std::vector<std::string> files{dir + "/readout_table.csv"};
    write_file_atomic(files.front(), csv);
    return files;
}

std::vector<std::string> write_independent_reports(const IndependentResult& result,
                                                   const std::string& dir) {
    std::vector<std::string> files;
    if (result.stats.histogram) {
        files.push_back(dir + "/histogram.csv");
        write_file_atomic(files.back(), histogram_csv(*result.stats.histogram));
    }
    if (result.stats.levels) {
        files.push_back(dir + "/levels.csv");
        write_file_atomic(files.back(), levels_csv(*result.stats.levels));
    }
    json j{{"n", result.stats.n},
           {"n_trials", result.stats.n_trials},
           {"n_failed", result.stats.n_failed},
           {"max_state_z", result.max_state_z},
           {"max_level_z", result.max_level_z},
           {"build_up", buildup_json(result.stats.build_up)}};
    files.push_back(dir + "/independent.json");
    write_file_atomic(files.back(), j.dump(2) + "\n");
    return files;
}

} // namespace cim
