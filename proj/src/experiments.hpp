#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubic.hpp"
#include "graph.hpp"
#include "readout.hpp"
#include "sde.hpp"

namespace cim {

enum class ProblemKind { inline_ising, gset_file, cubic, random_cubic, delays, uncoupled };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::cubic;
    IsingProblem inline_problem;
    std::string gset_path;
    int cubic_n = 4;
    int cubic_index = 0;
    uint64_t cubic_seed = 1; // random_cubic
    DelaySpec delays;
    int n_uncoupled = 4;
};

// Resolved problem: couplings plus the source graph when one exists (for cut
// values and E_neg).
struct ResolvedProblem {
    IsingProblem ising;
    std::optional<WeightedGraph> graph;
    std::string label;
};

ResolvedProblem resolve_problem(const ProblemSpec& spec);

struct CampaignSpec {
    ProblemSpec problem;
    SimConfig sim;
    long n_trials = 1000;
    bool apply_local_improvement = true;
    bool want_q = true; // requires the exact oracle (n <= 24)
    int workers = 0;    // 0 = hardware default
};

struct TrialOutcome {
    long index = 0;
    bool failed = false; // integrator error; campaign continues
    std::string error;
    double energy_raw = 0.0;
    double energy_improved = 0.0;
    std::optional<double> cut_raw;
    std::optional<double> cut_improved;
    std::optional<double> build_up;
    bool success_raw = false;
    bool success_improved = false;
    SpinConfig spins;
};

struct BuildUpSummary {
    long present = 0;
    long absent = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0; // the normalized computation time T
};

struct BinomialInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson 95% interval.
BinomialInterval binomial_interval(long successes, long trials);

struct CampaignStats {
    std::string label;
    int n = 0;
    long n_trials = 0;
    long n_failed = 0;
    bool oracle_available = false;
    double ground_energy = 0.0;
    double q_raw = 0.0;
    double q_improved = 0.0;
    BinomialInterval q_raw_ci;
    BinomialInterval q_improved_ci;
    BuildUpSummary build_up;
    double best_energy = 0.0;
    double mean_energy = 0.0;
    std::optional<double> best_cut;
    std::optional<double> mean_cut;
    std::vector<TrialOutcome> trials;
    std::optional<StateHistogram> histogram;       // 2 <= n <= 16
    std::optional<std::map<double, double>> levels; // n == 4
    double t_seconds = 0.0;    // mean build-up as real time, when gamma_s is set
    double wall_seconds = 0.0; // console-only; never written into data files
};

CampaignStats run_campaign(const CampaignSpec& spec);

struct SweepPoint {
    double p = 0.0;
    double q_raw = 0.0;
    double q_improved = 0.0;
    BinomialInterval q_raw_ci;
    long n_trials = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double p_opt = 0.0;
    double q_opt = 0.0;
};

SweepResult sweep_pump(const ProblemSpec& problem, const std::vector<double>& p_grid,
                       const CampaignSpec& base, long trials_per_point);

struct CubicSurveyRow {
    int order = 0;
    int graph_index = 0;
    long n_trials = 0;
    double q_raw = 0.0;
    double q_improved = 0.0;
    BuildUpSummary build_up;
};

struct CubicSurveyResult {
    std::vector<CubicSurveyRow> rows;
    std::map<int, double> q_min_per_order;
    std::map<int, double> buildup_median_per_order; // pooled over the order's graphs
    std::map<int, int> graphs_per_order;
};

CubicSurveyResult cubic_survey(const std::vector<int>& orders, const CampaignSpec& base,
                               long trials_per_graph);

struct GsetMetadata {
    std::string name;
    std::optional<long> v;
    std::optional<long> e;
    double u_sdp = 0.0;
    std::optional<long> e_neg; // computed from the graph when absent
};

GsetMetadata load_gset_metadata(const std::string& path);

struct GsetBenchRow {
    std::string name;
    long v = 0;
    long e = 0;
    double u_sdp = 0.0;
    long e_neg = 0;
    long n_runs = 0;
    double o_max = 0.0; // normalized best
    double o_avg = 0.0; // normalized average
    double t_mean = 0.0; // mean normalized build-up time
    bool skipped = false;
    std::string skip_reason;
};

struct GsetBenchOptions {
    long n_runs = 100;
    long vertex_cap = 2000; // desk-scale default; lift with allow_large
    bool allow_large = false;
};

std::vector<GsetBenchRow> benchmark_gset(const std::vector<std::string>& graph_paths,
                                         const CampaignSpec& base, const GsetBenchOptions& opts);

struct IndependentResult {
    CampaignStats stats;
    // Largest |z| over the 8 per-state entries and the 3 level frequencies.
    double max_state_z = 0.0;
    double max_level_z = 0.0;
};

IndependentResult independent_opo_experiment(int n, const CampaignSpec& base, long trials);

} // namespace cim
