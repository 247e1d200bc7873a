#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graph.hpp"

namespace cim {

// Binary phase of each time slot: false = |0>, true = |pi>.
struct PhaseState {
    std::vector<uint8_t> pi; // 0 or 1 per slot

    int n() const { return static_cast<int>(pi.size()); }
};

// One-bit-delay interferometer output, 1 = constructive interference of
// adjacent slots.
struct PulseTrain {
    std::vector<uint8_t> bits;

    int n() const { return static_cast<int>(bits.size()); }
    bool operator==(const PulseTrain&) const = default;
    bool operator<(const PulseTrain& o) const { return bits < o.bits; }
};

struct PatternClass {
    PulseTrain representative; // lexicographically minimal rotation
    int class_size = 0;        // number of distinct rotations
};

struct StateHistogram {
    struct Entry {
        PulseTrain representative;
        int class_size = 0;
        long raw_count = 0;
        double per_state = 0.0; // raw_count / class_size
    };
    std::vector<Entry> entries; // sorted by representative
    long total_trials = 0;
};

PhaseState spins_to_phase_state(const SpinConfig& s);

// bit_k = 1 iff phases[k] == phases[(k+1) mod n].
PulseTrain interferometer_pattern(const PhaseState& ps);

// Fraction of 1 bits, in units of the maximum intensity I_m.
double slow_detector_level(const PulseTrain& pt);

PatternClass classify_pattern(const PulseTrain& pt);

StateHistogram accumulate_histogram(const std::vector<SpinConfig>& spins);

// Frequencies of the slow-detector levels {0, 1/2, 1}; defined for n = 4.
std::map<double, double> slow_level_distribution(const std::vector<SpinConfig>& spins);

// Predicted slow-detector distribution for a 4-slot delay configuration,
// assuming uniform selection among the ground states of its topology.
std::map<double, double> scenario_expectations(const DelaySpec& d);

// One row per 4-OPO phase state, in binary-counting order with slot 1 as the
// least significant digit (the readout-table report and its oracle).
struct ReadoutTableRow {
    std::string state;       // e.g. "|p000>"
    std::string pulse_train; // e.g. "[0110]"
    double level = 0.0;      // units of I_m
};
std::vector<ReadoutTableRow> readout_table();

} // namespace cim
