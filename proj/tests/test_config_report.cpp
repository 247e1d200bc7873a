#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "doctest.h"
#include "error.hpp"
#include "report.hpp"

using namespace cim;

TEST_CASE("KeyValueFile parses comments, CRLF, and rejects malformed lines") {
    auto f = KeyValueFile::parse("# header\n a = 1 \r\nb = two words\n\n", "mem");
    CHECK(f.get_int("a", 0) == 1);
    CHECK(f.get_string("b", "") == "two words");
    CHECK(f.get_real("missing", 2.5) == 2.5);

    CHECK_THROWS_AS(KeyValueFile::parse("just a line\n", "mem"), Error);
    CHECK_THROWS_AS(KeyValueFile::parse("a = 1\na = 2\n", "mem"), Error);
    CHECK_THROWS_AS(KeyValueFile::parse("= 1\n", "mem"), Error);

    auto bad = KeyValueFile::parse("a = abc\n", "mem");
    CHECK_THROWS_AS(bad.get_real("a", 0.0), Error);
    auto badbool = KeyValueFile::parse("a = yes\n", "mem");
    CHECK_THROWS_AS(badbool.get_bool("a", false), Error);
}

TEST_CASE("run_config_from applies defaults and rejects unknown keys") {
    auto rc = run_config_from(KeyValueFile::parse("", "mem"));
    CHECK(rc.campaign.problem.kind == ProblemKind::cubic);
    CHECK(rc.campaign.sim.xi_scale == 0.1);
    CHECK(rc.campaign.sim.integrator == IntegratorKind::fixed_step);
    CHECK(rc.campaign.n_trials == 1000);
    CHECK(!rc.checks.q_raw_min.has_value());

    auto full = run_config_from(KeyValueFile::parse(
        "problem = delays\ndelays_n = 4\ndelays = 1:pi:1, 2:0:0.5\nn_trials = 10\nseed = 9\n"
        "pump = ramp\np_start = 0\np_end = 2.2\nt_ramp = 100\nt_max = 200\n"
        "integrator = adaptive_dp\ncheck_q_raw_min = 0.5\n",
        "mem"));
    CHECK(full.campaign.problem.kind == ProblemKind::delays);
    CHECK(full.campaign.problem.delays.lines.size() == 2);
    CHECK(full.campaign.problem.delays.lines[1].amplitude == 0.5);
    CHECK(full.campaign.sim.pump.kind == PumpKind::linear_ramp);
    CHECK(full.campaign.sim.integrator == IntegratorKind::adaptive_dp);
    CHECK(full.campaign.sim.seed == 9);
    CHECK(*full.checks.q_raw_min == 0.5);

    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse("bogus_key = 1\n", "mem")), Error);
    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse("problem = weird\n", "mem")), Error);
    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse("problem = gset\n", "mem")), Error);
    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse("integrator = rk4\n", "mem")), Error);
    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse("dt = 0.5\n", "mem")), Error);
}

TEST_CASE("inline problems parse 1-indexed couplings") {
    auto rc = run_config_from(KeyValueFile::parse(
        "problem = inline\nn_spins = 3\ninline_couplings = 1 2 -1; 2 3 0.5\n", "mem"));
    CHECK(rc.campaign.problem.inline_problem.j_at(0, 1) == -1.0);
    CHECK(rc.campaign.problem.inline_problem.j_at(1, 2) == 0.5);

    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse(
                        "problem = inline\nn_spins = 2\ninline_couplings = 1 1 1\n", "mem")),
                    Error);
    CHECK_THROWS_AS(run_config_from(KeyValueFile::parse(
                        "problem = inline\nn_spins = 2\ninline_couplings = 1 5 1\n", "mem")),
                    Error);
}

TEST_CASE("parse_delay_lines validates entries") {
    auto d = parse_delay_lines(4, "1:pi:1, 3:0:0.25");
    CHECK(d.lines.size() == 2);
    CHECK(d.lines[0].phase_pi);
    CHECK(!d.lines[1].phase_pi);
    CHECK_THROWS_AS(parse_delay_lines(4, "1:left:1"), Error);
    CHECK_THROWS_AS(parse_delay_lines(4, "9:pi:1"), Error);
    CHECK_THROWS_AS(parse_delay_lines(4, "1:pi"), Error);
}

TEST_CASE("format_double is locale-independent shortest form") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(format_double(1e-9) == "1e-09");
}

TEST_CASE("write_file_atomic leaves no temporary behind") {
    auto dir = std::filesystem::temp_directory_path() / "cim_report_test";
    std::filesystem::remove_all(dir);
    auto path = (dir / "x.csv").string();
    write_file_atomic(path, "a,b\n1,2\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    CHECK(!std::filesystem::exists(path + ".tmp"));

    // Overwrite keeps the file whole.
    write_file_atomic(path, "c\n");
    std::ifstream again(path);
    std::getline(again, line);
    CHECK(line == "c");
}

TEST_CASE("serialized simulation settings parse back identically") {
    SimConfig cfg;
    cfg.pump = PumpSchedule::ramp(0.0, 2.2, 1500.0);
    cfg.xi_scale = 0.05;
    cfg.integrator = IntegratorKind::adaptive_dp;
    cfg.dt = 0.02;
    cfg.seed = 987654321;
    cfg.t_max = 42.5;
    cfg.gamma_s = 1.7e7;

    auto rc = run_config_from(KeyValueFile::parse(serialize(cfg), "roundtrip"));
    const SimConfig& back = rc.campaign.sim;
    CHECK(back.pump.kind == PumpKind::linear_ramp);
    CHECK(back.pump.p_end == cfg.pump.p_end);
    CHECK(back.pump.t_ramp == cfg.pump.t_ramp);
    CHECK(back.xi_scale == cfg.xi_scale);
    CHECK(back.integrator == cfg.integrator);
    CHECK(back.dt == cfg.dt);
    CHECK(back.seed == cfg.seed);
    CHECK(back.t_max == cfg.t_max);
    CHECK(back.gamma_s == cfg.gamma_s);
    CHECK(back.a_s == cfg.a_s);
}

TEST_CASE("trajectory CSV lists t then c then s columns") {
    OpoNetworkState a = OpoNetworkState::vacuum(2);
    OpoNetworkState b = a;
    b.t = 0.5;
    b.c = {0.25, -0.5};
    b.s = {0.0, 1.0};
    CHECK(trajectory_csv({a, b}) ==
          "t,c_1,c_2,s_1,s_2\n0,0,0,0,0\n0.5,0.25,-0.5,0,1\n");
    CHECK_THROWS_AS(trajectory_csv({}), Error);
}

TEST_CASE("histogram and level CSV schemas are stable") {
    StateHistogram hist;
    StateHistogram::Entry entry;
    entry.representative.bits = {0, 0, 1, 1};
    entry.class_size = 4;
    entry.raw_count = 8;
    entry.per_state = 2.0;
    hist.entries.push_back(entry);
    hist.total_trials = 8;
    CHECK(histogram_csv(hist) == "representative,class_size,raw_count,per_state\n0011,4,8,2\n");

    std::map<double, double> levels{{0.0, 0.125}, {0.5, 0.75}, {1.0, 0.125}};
    CHECK(levels_csv(levels) == "level,frequency\n0,0.125\n0.5,0.75\n1,0.125\n");
}
