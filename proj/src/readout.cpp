#include "readout.hpp"

#include <algorithm>

#include "error.hpp"

namespace cim {

PhaseState spins_to_phase_state(const SpinConfig& s) {
    validate(s);
    PhaseState ps;
    ps.pi.resize(s.sigma.size());
    for (size_t i = 0; i < s.sigma.size(); ++i) ps.pi[i] = s.sigma[i] < 0 ? 1 : 0;
    return ps;
}

PulseTrain interferometer_pattern(const PhaseState& ps) {
    const int n = ps.n();
    if (n < 2) fail(ErrorKind::validation, "interferometer needs at least 2 slots");
    PulseTrain pt;
    pt.bits.resize(n);
    for (int k = 0; k < n; ++k) pt.bits[k] = ps.pi[k] == ps.pi[(k + 1) % n] ? 1 : 0;
    return pt;
}

double slow_detector_level(const PulseTrain& pt) {
    if (pt.n() < 1) fail(ErrorKind::validation, "empty pulse train");
    long ones = std::count(pt.bits.begin(), pt.bits.end(), uint8_t{1});
    return static_cast<double>(ones) / pt.n();
}

PatternClass classify_pattern(const PulseTrain& pt) {
    const int n = pt.n();
    if (n < 1) fail(ErrorKind::validation, "empty pulse train");
    PatternClass out;
    std::vector<PulseTrain> rotations;
    rotations.reserve(n);
    for (int r = 0; r < n; ++r) {
        PulseTrain rot;
        rot.bits.resize(n);
        for (int k = 0; k < n; ++k) rot.bits[k] = pt.bits[(k + r) % n];
        rotations.push_back(std::move(rot));
    }
    std::sort(rotations.begin(), rotations.end());
    out.representative = rotations.front();
    rotations.erase(std::unique(rotations.begin(), rotations.end()), rotations.end());
    out.class_size = static_cast<int>(rotations.size());
    return out;
}

StateHistogram accumulate_histogram(const std::vector<SpinConfig>& spins) {
    if (spins.empty()) fail(ErrorKind::domain, "no trials to histogram");
    const int n = spins.front().n();
    std::map<PulseTrain, StateHistogram::Entry> acc;
    for (const auto& s : spins) {
        if (s.n() != n) fail(ErrorKind::dimension, "mixed trial sizes");
        auto cls = classify_pattern(interferometer_pattern(spins_to_phase_state(s)));
        auto& entry = acc[cls.representative];
        entry.representative = cls.representative;
        entry.class_size = cls.class_size;
        ++entry.raw_count;
    }
    StateHistogram out;
    out.total_trials = static_cast<long>(spins.size());
    for (auto& [rep, entry] : acc) {
        entry.per_state = static_cast<double>(entry.raw_count) / entry.class_size;
        out.entries.push_back(entry);
    }
    return out;
}

std::map<double, double> slow_level_distribution(const std::vector<SpinConfig>& spins) {
    if (spins.empty()) fail(ErrorKind::domain, "no trials");
    std::map<double, double> freq{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
    for (const auto& s : spins) {
        if (s.n() != 4) fail(ErrorKind::validation, "slow-detector levels are defined for n = 4");
        double level = slow_detector_level(interferometer_pattern(spins_to_phase_state(s)));
        freq[level] += 1.0;
    }
    for (auto& [level, count] : freq) count /= static_cast<double>(spins.size());
    return freq;
}

std::map<double, double> scenario_expectations(const DelaySpec& d) {
    if (d.n != 4) fail(ErrorKind::validation, "scenario expectations are defined for n = 4");
    for (const auto& line : d.lines)
        if (line.enabled && line.amplitude <= 0.0)
            fail(ErrorKind::validation, "enabled delays need positive amplitude");
    IsingProblem p = delay_line_topology(d);
    GroundSet ground = brute_force_ground(p);
    std::map<double, double> freq{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
    for (const auto& cfg : ground.configs) {
        double level = slow_detector_level(interferometer_pattern(spins_to_phase_state(cfg)));
        freq[level] += 1.0;
    }
    for (auto& [level, count] : freq) count /= static_cast<double>(ground.configs.size());
    return freq;
}

std::vector<ReadoutTableRow> readout_table() {
    std::vector<ReadoutTableRow> rows;
    rows.reserve(16);
    for (int code = 0; code < 16; ++code) {
        PhaseState ps;
        ps.pi.resize(4);
        for (int slot = 0; slot < 4; ++slot) ps.pi[slot] = (code >> slot) & 1;
        PulseTrain pt = interferometer_pattern(ps);
        ReadoutTableRow row;
        row.state = "|";
        for (int slot = 0; slot < 4; ++slot) row.state += ps.pi[slot] ? 'p' : '0';
        row.state += ">";
        row.pulse_train = "[";
        for (uint8_t b : pt.bits) row.pulse_train += static_cast<char>('0' + b);
        row.pulse_train += "]";
        row.level = slow_detector_level(pt);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace cim
