#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "error.hpp"

namespace cim {

ResolvedProblem resolve_problem(const ProblemSpec& spec) {
    ResolvedProblem out;
    switch (spec.kind) {
    case ProblemKind::inline_ising:
        out.ising = spec.inline_problem;
        out.ising.finalize();
        out.label = "inline";
        return out;
    case ProblemKind::gset_file:
        out.graph = load_gset(spec.gset_path);
        out.ising = graph_to_ising(*out.graph);
        out.label = spec.gset_path;
        return out;
    case ProblemKind::cubic: {
        auto graphs = enumerate_cubic_graphs(spec.cubic_n);
        if (spec.cubic_index < 0 || spec.cubic_index >= static_cast<int>(graphs.size()))
            fail(ErrorKind::validation,
                 "cubic_index out of range; order " + std::to_string(spec.cubic_n) + " has " +
                     std::to_string(graphs.size()) + " graphs");
        out.graph = graphs[spec.cubic_index];
        out.ising = graph_to_ising(*out.graph);
        out.label = "cubic-" + std::to_string(spec.cubic_n) + "-" + std::to_string(spec.cubic_index);
        return out;
    }
    case ProblemKind::random_cubic:
        out.graph = random_cubic_graph(spec.cubic_n, spec.cubic_seed);
        out.ising = graph_to_ising(*out.graph);
        out.label = "random-cubic-" + std::to_string(spec.cubic_n);
        return out;
    case ProblemKind::delays:
        out.ising = delay_line_topology(spec.delays);
        out.label = "delays-" + std::to_string(spec.delays.n);
        return out;
    case ProblemKind::uncoupled: {
        if (spec.n_uncoupled < 1) fail(ErrorKind::validation, "need at least one oscillator");
        out.ising.n = spec.n_uncoupled;
        out.ising.finalize();
        out.label = "uncoupled-" + std::to_string(spec.n_uncoupled);
        return out;
    }
    }
    fail(ErrorKind::internal, "unknown problem kind");
}

BinomialInterval binomial_interval(long successes, long trials) {
    BinomialInterval ci;
    if (trials <= 0) return ci;
    const double z = 1.959963984540054; // 95%
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    ci.lo = std::max(0.0, center - half);
    ci.hi = std::min(1.0, center + half);
    return ci;
}

namespace {

BuildUpSummary summarize_build_up(std::vector<double> times, long absent) {
    BuildUpSummary out;
    out.absent = absent;
    out.present = static_cast<long>(times.size());
    if (times.empty()) return out;
    std::sort(times.begin(), times.end());
    auto quantile = [&](double q) {
        double idx = q * (times.size() - 1);
        size_t lo = static_cast<size_t>(idx);
        size_t hi = std::min(lo + 1, times.size() - 1);
        double frac = idx - lo;
        return times[lo] * (1.0 - frac) + times[hi] * frac;
    };
    out.median = quantile(0.5);
    out.q1 = quantile(0.25);
    out.q3 = quantile(0.75);
    out.max = times.back();
    double sum = 0.0;
    for (double t : times) sum += t;
    out.mean = sum / static_cast<double>(times.size());
    return out;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

CampaignStats run_campaign(const CampaignSpec& spec) {
    if (spec.n_trials < 1) fail(ErrorKind::validation, "n_trials must be at least 1");
    validate(spec.sim);

    auto resolved = resolve_problem(spec.problem);
    const IsingProblem& problem = resolved.ising;
    const int n = problem.n;

    CampaignStats stats;
    stats.label = resolved.label;
    stats.n = n;
    stats.n_trials = spec.n_trials;

    if (spec.want_q) {
        if (n > kBruteForceCap)
            fail(ErrorKind::capability,
                 "success probability requires the exact oracle (n <= " +
                     std::to_string(kBruteForceCap) + "); disable want_q for larger problems");
        stats.ground_energy = brute_force_ground(problem).min_energy;
        stats.oracle_available = true;
    }

    const CouplingMatrix xi = assemble_couplings(problem, spec.sim.xi_scale,
                                                 spec.sim.coupling_mode);

    auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(spec.n_trials);
    std::atomic<long> next{0};
    auto work = [&]() {
        while (true) {
            long index = next.fetch_add(1);
            if (index >= spec.n_trials) return;
            TrialOutcome& out = outcomes[index];
            out.index = index;
            try {
                TrialResult trial = run_trial(xi, problem, spec.sim, static_cast<uint64_t>(index));
                out.energy_raw = trial.final_energy;
                out.build_up = trial.build_up_time;
                out.spins = trial.spins;
                if (resolved.graph) out.cut_raw = cut_value(*resolved.graph, trial.spins);
                SpinConfig improved =
                    spec.apply_local_improvement ? local_improvement(problem, trial.spins)
                                                 : trial.spins;
                out.energy_improved = ising_energy(problem, improved);
                if (resolved.graph) out.cut_improved = cut_value(*resolved.graph, improved);
            } catch (const std::exception& e) {
                out.failed = true;
                out.error = e.what();
            }
        }
    };
    int workers = worker_count(spec.workers);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // Aggregation in trial-index order, independent of scheduling.
    const double tol = 1e-9 * (1.0 + std::abs(stats.ground_energy));
    long success_raw = 0, success_improved = 0, failed = 0, absent = 0;
    std::vector<double> times;
    double energy_sum = 0.0;
    double best_energy = 0.0;
    bool first = true;
    double best_cut = 0.0, cut_sum = 0.0;
    long cut_count = 0;
    std::vector<SpinConfig> spins;
    spins.reserve(outcomes.size());
    for (auto& out : outcomes) {
        if (out.failed) {
            ++failed;
            continue;
        }
        bool built = out.build_up.has_value();
        if (built)
            times.push_back(*out.build_up);
        else
            ++absent;
        if (stats.oracle_available) {
            out.success_raw = built && std::abs(out.energy_raw - stats.ground_energy) <= tol;
            out.success_improved =
                built && std::abs(out.energy_improved - stats.ground_energy) <= tol;
            success_raw += out.success_raw;
            success_improved += out.success_improved;
        }
        energy_sum += out.energy_raw;
        if (first || out.energy_raw < best_energy) best_energy = out.energy_raw;
        if (out.cut_raw) {
            if (first || *out.cut_raw > best_cut) best_cut = *out.cut_raw;
            cut_sum += *out.cut_raw;
            ++cut_count;
        }
        first = false;
        if (n <= 16) spins.push_back(out.spins);
    }
    stats.n_failed = failed;
    long valid = spec.n_trials; // failures and timeouts count in the denominator
    if (stats.oracle_available) {
        stats.q_raw = static_cast<double>(success_raw) / valid;
        stats.q_improved = static_cast<double>(success_improved) / valid;
        stats.q_raw_ci = binomial_interval(success_raw, valid);
        stats.q_improved_ci = binomial_interval(success_improved, valid);
    }
    stats.build_up = summarize_build_up(std::move(times), absent);
    long completed = spec.n_trials - failed;
    if (completed > 0) {
        stats.mean_energy = energy_sum / completed;
        stats.best_energy = best_energy;
    }
    if (cut_count > 0) {
        stats.best_cut = best_cut;
        stats.mean_cut = cut_sum / cut_count;
    }
    if (!spins.empty() && n >= 2 && n <= 16) {
        stats.histogram = accumulate_histogram(spins);
        if (n == 4) stats.levels = slow_level_distribution(spins);
    }
    if (spec.sim.gamma_s > 0.0)
        stats.t_seconds = 2.0 * stats.build_up.mean / spec.sim.gamma_s; // tau = 2t/gamma_s
    stats.trials = std::move(outcomes);
    return stats;
}

SweepResult sweep_pump(const ProblemSpec& problem, const std::vector<double>& p_grid,
                       const CampaignSpec& base, long trials_per_point) {
    if (p_grid.empty()) fail(ErrorKind::validation, "empty pump grid");
    SweepResult out;
    for (double p : p_grid) {
        CampaignSpec spec = base;
        spec.problem = problem;
        spec.n_trials = trials_per_point;
        spec.sim.pump = PumpSchedule::constant(p);
        auto stats = run_campaign(spec);
        SweepPoint point;
        point.p = p;
        point.q_raw = stats.q_raw;
        point.q_improved = stats.q_improved;
        point.q_raw_ci = stats.q_raw_ci;
        point.n_trials = trials_per_point;
        out.points.push_back(point);
    }
    auto best = std::max_element(out.points.begin(), out.points.end(),
                                 [](const SweepPoint& a, const SweepPoint& b) {
                                     return a.q_raw < b.q_raw;
                                 });
    out.p_opt = best->p;
    out.q_opt = best->q_raw;
    return out;
}

CubicSurveyResult cubic_survey(const std::vector<int>& orders, const CampaignSpec& base,
                               long trials_per_graph) {
    CubicSurveyResult out;
    for (int order : orders) {
        auto graphs = enumerate_cubic_graphs(order);
        out.graphs_per_order[order] = static_cast<int>(graphs.size());
        std::vector<double> pooled_times;
        double q_min = 1.0;
        for (size_t gi = 0; gi < graphs.size(); ++gi) {
            CampaignSpec spec = base;
            spec.problem.kind = ProblemKind::cubic;
            spec.problem.cubic_n = order;
            spec.problem.cubic_index = static_cast<int>(gi);
            spec.n_trials = trials_per_graph;
            auto stats = run_campaign(spec);
            CubicSurveyRow row;
            row.order = order;
            row.graph_index = static_cast<int>(gi);
            row.n_trials = trials_per_graph;
            row.q_raw = stats.q_raw;
            row.q_improved = stats.q_improved;
            row.build_up = stats.build_up;
            out.rows.push_back(row);
            q_min = std::min(q_min, stats.q_raw);
            for (const auto& trial : stats.trials)
                if (!trial.failed && trial.build_up) pooled_times.push_back(*trial.build_up);
        }
        out.q_min_per_order[order] = q_min;
        out.buildup_median_per_order[order] =
            summarize_build_up(std::move(pooled_times), 0).median;
    }
    return out;
}

GsetMetadata load_gset_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open metadata '" + path + "'");
    GsetMetadata meta;
    bool have_usdp = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t") == std::string::npos;
            if (!blank)
                fail(ErrorKind::parse,
                     path + " line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "name") meta.name = value;
            else if (key == "V") meta.v = std::stol(value);
            else if (key == "E") meta.e = std::stol(value);
            else if (key == "U_SDP") {
                meta.u_sdp = std::stod(value);
                have_usdp = true;
            } else if (key == "E_neg") meta.e_neg = std::stol(value);
            else
                fail(ErrorKind::parse,
                     path + " line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(ErrorKind::parse,
                 path + " line " + std::to_string(line_no) + ": bad value for '" + key + "'");
        }
    }
    if (!have_usdp) fail(ErrorKind::parse, path + ": missing U_SDP");
    return meta;
}

std::vector<GsetBenchRow> benchmark_gset(const std::vector<std::string>& graph_paths,
                                         const CampaignSpec& base, const GsetBenchOptions& opts) {
    std::vector<GsetBenchRow> rows;
    for (const auto& path : graph_paths) {
        GsetBenchRow row;
        auto slash = path.find_last_of('/');
        row.name = slash == std::string::npos ? path : path.substr(slash + 1);
        row.n_runs = opts.n_runs;
        try {
            auto meta = load_gset_metadata(path + ".meta");
            if (!meta.name.empty()) row.name = meta.name;
            auto graph = load_gset(path);
            if (meta.v && *meta.v != graph.n)
                fail(ErrorKind::validation, path + ": metadata V does not match graph");
            if (meta.e && *meta.e != static_cast<long>(graph.edges.size()))
                fail(ErrorKind::validation, path + ": metadata E does not match graph");
            long e_neg = graph.negative_edge_count();
            if (meta.e_neg && *meta.e_neg != e_neg)
                fail(ErrorKind::validation, path + ": metadata E_neg does not match graph");
            if (graph.n > opts.vertex_cap && !opts.allow_large)
                fail(ErrorKind::capability,
                     path + ": V = " + std::to_string(graph.n) + " exceeds the desk-scale cap " +
                         std::to_string(opts.vertex_cap) + " (set allow_large)");

            CampaignSpec spec = base;
            spec.problem.kind = ProblemKind::inline_ising;
            spec.problem.inline_problem = graph_to_ising(graph);
            spec.want_q = false;
            spec.n_trials = opts.n_runs;
            auto stats = run_campaign(spec);

            row.v = graph.n;
            row.e = static_cast<long>(graph.edges.size());
            row.u_sdp = meta.u_sdp;
            row.e_neg = e_neg;
            double best = 0.0, sum = 0.0;
            long counted = 0;
            for (const auto& trial : stats.trials) {
                if (trial.failed) continue;
                double cut = cut_value(graph, spec.apply_local_improvement
                                                  ? local_improvement(spec.problem.inline_problem,
                                                                      trial.spins)
                                                  : trial.spins);
                double score = normalized_cut_score(cut, static_cast<double>(e_neg), meta.u_sdp);
                if (counted == 0 || score > best) best = score;
                sum += score;
                ++counted;
            }
            if (counted == 0) fail(ErrorKind::internal, path + ": all trials failed");
            row.o_max = best;
            row.o_avg = sum / counted;
            row.t_mean = stats.build_up.mean;
        } catch (const Error& e) {
            row.skipped = true;
            row.skip_reason = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

IndependentResult independent_opo_experiment(int n, const CampaignSpec& base, long trials) {
    CampaignSpec spec = base;
    spec.problem.kind = ProblemKind::uncoupled;
    spec.problem.n_uncoupled = n;
    spec.n_trials = trials;
    spec.want_q = n <= kBruteForceCap;
    spec.sim.xi_scale = 0.0;

    IndependentResult out;
    out.stats = run_campaign(spec);

    if (out.stats.histogram) {
        // Uniform phase-state hypothesis: each of the 2^(n-1) distinguishable
        // states has probability class_size / 2^(n-1) for its class.
        const auto& hist = *out.stats.histogram;
        double total = static_cast<double>(hist.total_trials);
        double states = std::pow(2.0, n - 1);
        for (const auto& entry : hist.entries) {
            double p_class = entry.class_size / states;
            double expected = total * p_class;
            double sigma = std::sqrt(total * p_class * (1.0 - p_class));
            if (sigma == 0.0) continue;
            double z = (static_cast<double>(entry.raw_count) - expected) / sigma;
            out.max_state_z = std::max(out.max_state_z, std::abs(z));
        }
    }
    if (out.stats.levels && n == 4) {
        const std::map<double, double> expected{{0.5, 0.75}, {1.0, 0.125}, {0.0, 0.125}};
        double total = static_cast<double>(out.stats.n_trials - out.stats.n_failed);
        for (const auto& [level, p_exp] : expected) {
            double observed = out.stats.levels->at(level) * total;
            double sigma = std::sqrt(total * p_exp * (1.0 - p_exp));
            double z = (observed - total * p_exp) / sigma;
            out.max_level_z = std::max(out.max_level_z, std::abs(z));
        }
    }
    return out;
}

} // namespace cim
