#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cim {

// Undirected weighted graph, vertices stored 0-indexed. No self-loops, no
// duplicate unordered pairs.
struct WeightedGraph {
    struct Edge {
        int u, v; // u < v
        double w;
    };

    int n = 0;
    std::vector<Edge> edges;

    // Number of edges with negative weight (the E_neg of normalized scoring).
    int negative_edge_count() const;
};

// Symmetric Ising couplings with zero diagonal, stored as unordered pairs
// plus a CSR view for fast row sums.
struct IsingProblem {
    struct Coupling {
        int u, v; // u < v
        double j;
    };

    int n = 0;
    std::vector<Coupling> couplings;

    // CSR adjacency over both directions, built by finalize().
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void finalize();
    double j_at(int i, int k) const;
};

struct SpinConfig {
    std::vector<int8_t> sigma; // entries are +1 or -1

    int n() const { return static_cast<int>(sigma.size()); }
};

// Time-multiplexed delay-line network: each line couples slot i to slot
// (i+m) mod n for every i, with phase 0 (ferromagnetic, J>0) or pi
// (antiferromagnetic, J<0).
struct DelaySpec {
    struct Line {
        int m = 1;
        bool phase_pi = false;
        double amplitude = 1.0;
        bool enabled = true;
    };

    int n = 0;
    std::vector<Line> lines;
};

struct GroundSet {
    double min_energy = 0.0;
    std::vector<SpinConfig> configs; // all global minimizers (complement pairs included)
};

WeightedGraph parse_gset(std::istream& in);
WeightedGraph parse_gset(const std::string& text);
WeightedGraph load_gset(const std::string& path);

WeightedGraph complete_graph(int n, double weight = 1.0);

// MAX-CUT mapping: J_uv = -w(u,v), so minimizing the Ising energy maximizes
// the weighted cut.
IsingProblem graph_to_ising(const WeightedGraph& g);

double ising_energy(const IsingProblem& p, const SpinConfig& s);
double cut_value(const WeightedGraph& g, const SpinConfig& s);

// Exhaustive scan of all 2^n configurations; capped at n <= 24.
GroundSet brute_force_ground(const IsingProblem& p);
constexpr int kBruteForceCap = 24;

IsingProblem delay_line_topology(const DelaySpec& d);

// Greedy single-spin-flip descent; returns once no flip strictly lowers the
// energy. Deterministic (first improving flip in index order).
SpinConfig local_improvement(const IsingProblem& p, SpinConfig s);

// (O + E_neg) / (U_SDP + E_neg)
double normalized_cut_score(double o, double e_neg, double u_sdp);

void validate(const DelaySpec& d);
void validate(const SpinConfig& s);

} // namespace cim
