#include <map>

#include "doctest.h"
#include "error.hpp"
#include "readout.hpp"

using namespace cim;

namespace {

PhaseState phase(const std::string& s) {
    PhaseState ps;
    for (char ch : s) ps.pi.push_back(ch == 'p' ? 1 : 0);
    return ps;
}

std::string bits(const PulseTrain& pt) {
    std::string out;
    for (uint8_t b : pt.bits) out += static_cast<char>('0' + b);
    return out;
}

SpinConfig spins(std::initializer_list<int> values) {
    SpinConfig s;
    for (int v : values) s.sigma.push_back(static_cast<int8_t>(v));
    return s;
}

// The complete measurement table of the 4-OPO interferometer, frozen here as
// the oracle: state (slot 1 first), pulse train, slow-detector level.
struct TableRow {
    const char* state;
    const char* train;
    double level;
};
constexpr TableRow kMeasurementTable[16] = {
    {"0000", "1111", 1.0}, {"p000", "0110", 0.5}, {"0p00", "0011", 0.5}, {"pp00", "1010", 0.5},
    {"00p0", "1001", 0.5}, {"p0p0", "0000", 0.0}, {"0pp0", "0101", 0.5}, {"ppp0", "1100", 0.5},
    {"000p", "1100", 0.5}, {"p00p", "0101", 0.5}, {"0p0p", "0000", 0.0}, {"pp0p", "1001", 0.5},
    {"00pp", "1010", 0.5}, {"p0pp", "0011", 0.5}, {"0ppp", "0110", 0.5}, {"pppp", "1111", 1.0},
};

} // namespace

TEST_CASE("interferometer_pattern reproduces the reference rows") {
    CHECK(bits(interferometer_pattern(phase("0000"))) == "1111");
    CHECK(bits(interferometer_pattern(phase("p0p0"))) == "0000");
    CHECK(bits(interferometer_pattern(phase("p000"))) == "0110");
    CHECK_THROWS_AS(interferometer_pattern(phase("0")), Error);
}

TEST_CASE("all 16 phase states map onto the measurement table bit for bit") {
    for (const auto& row : kMeasurementTable) {
        auto pt = interferometer_pattern(phase(row.state));
        CHECK(bits(pt) == row.train);
        CHECK(slow_detector_level(pt) == doctest::Approx(row.level));
    }
    // And the generated table agrees, in the same order.
    auto table = readout_table();
    REQUIRE(table.size() == 16);
    for (int i = 0; i < 16; ++i) {
        CHECK(table[i].state == "|" + std::string(kMeasurementTable[i].state) + ">");
        CHECK(table[i].pulse_train == "[" + std::string(kMeasurementTable[i].train) + "]");
        CHECK(table[i].level == doctest::Approx(kMeasurementTable[i].level));
    }
}

TEST_CASE("slow_detector_level counts constructive pulses") {
    PulseTrain full{{1, 1, 1, 1}};
    PulseTrain none{{0, 0, 0, 0}};
    PulseTrain half{{0, 1, 1, 0}};
    CHECK(slow_detector_level(full) == 1.0);
    CHECK(slow_detector_level(none) == 0.0);
    CHECK(slow_detector_level(half) == 0.5);
}

TEST_CASE("classify_pattern groups rotations") {
    auto cls = classify_pattern(PulseTrain{{0, 0, 1, 1}});
    CHECK(bits(cls.representative) == "0011");
    CHECK(cls.class_size == 4);

    cls = classify_pattern(PulseTrain{{0, 1, 0, 1}});
    CHECK(bits(cls.representative) == "0101");
    CHECK(cls.class_size == 2);

    cls = classify_pattern(PulseTrain{{1, 1, 1, 1}});
    CHECK(cls.class_size == 1);
}

TEST_CASE("the 8 distinct n=4 pulse trains partition into classes 1,1,4,2") {
    std::map<std::string, int> sizes;
    for (int code = 0; code < 16; ++code) {
        PhaseState ps;
        for (int slot = 0; slot < 4; ++slot) ps.pi.push_back((code >> slot) & 1);
        auto cls = classify_pattern(interferometer_pattern(ps));
        sizes[bits(cls.representative)] = cls.class_size;
    }
    REQUIRE(sizes.size() == 4);
    CHECK(sizes["1111"] == 1);
    CHECK(sizes["0000"] == 1);
    CHECK(sizes["0011"] == 4);
    CHECK(sizes["0101"] == 2);
}

TEST_CASE("spins map to phase states; complements give identical patterns") {
    CHECK(spins_to_phase_state(spins({1, 1, 1, 1})).pi == phase("0000").pi);
    CHECK(spins_to_phase_state(spins({-1, 1, -1, 1})).pi == phase("p0p0").pi);

    for (int n = 2; n <= 8; ++n) {
        for (int code = 0; code < (1 << n); ++code) {
            PhaseState ps, complement;
            for (int slot = 0; slot < n; ++slot) {
                ps.pi.push_back((code >> slot) & 1);
                complement.pi.push_back(1 - ((code >> slot) & 1));
            }
            auto pattern = interferometer_pattern(ps);
            CHECK(pattern == interferometer_pattern(complement));
            // Phase changes around a ring pair up: even number of 0 bits.
            int zeros = 0;
            for (uint8_t b : pattern.bits) zeros += b == 0;
            CHECK(zeros % 2 == 0);
        }
    }
}

TEST_CASE("accumulate_histogram tallies classes and per-state entries") {
    CHECK_THROWS_AS(accumulate_histogram({}), Error);

    auto one = accumulate_histogram({spins({1, 1, 1, 1})});
    REQUIRE(one.entries.size() == 1);
    CHECK(bits(one.entries[0].representative) == "1111");
    CHECK(one.entries[0].raw_count == 1);

    // One trial per phase state: exactly uniform per-state entries.
    std::vector<SpinConfig> all;
    for (int code = 0; code < 16; ++code) {
        SpinConfig s;
        for (int slot = 0; slot < 4; ++slot)
            s.sigma.push_back((code >> slot) & 1 ? -1 : 1);
        all.push_back(s);
    }
    auto hist = accumulate_histogram(all);
    CHECK(hist.total_trials == 16);
    long raw_total = 0;
    REQUIRE(hist.entries.size() == 4);
    for (const auto& entry : hist.entries) {
        raw_total += entry.raw_count;
        CHECK(entry.per_state == doctest::Approx(2.0)); // 16 states / 8 distinguishable
    }
    CHECK(raw_total == hist.total_trials);
}

TEST_CASE("slow_level_distribution over the 16 equiprobable states is 12:2:2") {
    std::vector<SpinConfig> all;
    for (int code = 0; code < 16; ++code) {
        SpinConfig s;
        for (int slot = 0; slot < 4; ++slot)
            s.sigma.push_back((code >> slot) & 1 ? -1 : 1);
        all.push_back(s);
    }
    auto freq = slow_level_distribution(all);
    CHECK(freq[0.5] == doctest::Approx(12.0 / 16));
    CHECK(freq[1.0] == doctest::Approx(2.0 / 16));
    CHECK(freq[0.0] == doctest::Approx(2.0 / 16));

    auto pure = slow_level_distribution({spins({1, 1, 1, 1}), spins({1, 1, 1, 1})});
    CHECK(pure[1.0] == doctest::Approx(1.0));
}

TEST_CASE("scenario_expectations reproduces the four delay-phase scenarios") {
    auto scenario = [](bool d1, bool d2, bool d3) {
        DelaySpec d;
        d.n = 4;
        d.lines = {{1, d1, 1.0, true}, {2, d2, 1.0, true}, {3, d3, 1.0, true}};
        return scenario_expectations(d);
    };

    auto pi_0_pi = scenario(true, false, true);
    CHECK(pi_0_pi[0.0] == doctest::Approx(1.0));

    auto o_pi_pi = scenario(false, true, true);
    CHECK(o_pi_pi[0.5] == doctest::Approx(1.0));

    auto pi_pi_0 = scenario(true, true, false);
    CHECK(pi_pi_0[0.5] == doctest::Approx(1.0));

    auto pi_pi_pi = scenario(true, true, true);
    CHECK(pi_pi_pi[0.5] == doctest::Approx(2.0 / 3.0));
    CHECK(pi_pi_pi[0.0] == doctest::Approx(1.0 / 3.0));
}
