#include "sde.hpp"

#include <algorithm>

namespace cim {

double pump_at(const PumpSchedule& sched, double t) {
    if (t < 0.0) fail(ErrorKind::invalid_argument, "time must be nonnegative");
    switch (sched.kind) {
    case PumpKind::constant:
        return sched.p;
    case PumpKind::linear_ramp:
        if (t >= sched.t_ramp) return sched.p_end;
        return sched.p_start + (sched.p_end - sched.p_start) * (t / sched.t_ramp);
    }
    fail(ErrorKind::internal, "unknown pump kind");
}

void validate(const SimConfig& cfg) {
    if (cfg.pump.kind == PumpKind::constant) {
        if (cfg.pump.p < 0.0) fail(ErrorKind::validation, "pump rate must be nonnegative");
    } else {
        if (cfg.pump.p_start < 0.0 || cfg.pump.p_end < 0.0)
            fail(ErrorKind::validation, "pump rates must be nonnegative");
        if (cfg.pump.t_ramp <= 0.0) fail(ErrorKind::validation, "t_ramp must be positive");
    }
    if (!(cfg.a_s > 0.0)) fail(ErrorKind::validation, "a_s must be positive");
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.1)) fail(ErrorKind::validation, "dt must be in (0, 0.1]");
    if (!(cfg.dt_max > 0.0)) fail(ErrorKind::validation, "dt_max must be positive");
    if (!(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0))
        fail(ErrorKind::validation, "tolerances must be positive");
    if (!(cfg.t_max >= 1.0)) fail(ErrorKind::validation, "t_max must be at least 1");
    if (cfg.sample_stride < 1) fail(ErrorKind::validation, "sample_stride must be positive");
    if (!(cfg.buildup_fraction > 0.0 && cfg.buildup_fraction <= 1.0))
        fail(ErrorKind::validation, "buildup_fraction must be in (0, 1]");
    if (cfg.buildup_window < 0.0) fail(ErrorKind::validation, "buildup_window must be nonnegative");
}

double CouplingMatrix::at(int j, int l) const {
    for (int idx = row_ptr[j]; idx < row_ptr[j + 1]; ++idx)
        if (col[idx] == l) return val[idx];
    return 0.0;
}

CouplingMatrix assemble_couplings(const IsingProblem& p, double xi_scale, CouplingMode mode) {
    CouplingMatrix xi;
    xi.n = p.n;
    xi.row_ptr = p.row_ptr;
    xi.col = p.col;
    xi.val.resize(p.val.size());
    for (size_t i = 0; i < p.val.size(); ++i) {
        double j = p.val[i];
        if (mode == CouplingMode::sign_only) j = j > 0.0 ? 1.0 : (j < 0.0 ? -1.0 : 0.0);
        xi.val[i] = xi_scale * j;
    }
    return xi;
}

CouplingMatrix zero_couplings(int n) {
    CouplingMatrix xi;
    xi.n = n;
    xi.row_ptr.assign(n + 1, 0);
    return xi;
}

void drift(const OpoNetworkState& st, double p, const CouplingMatrix& xi, std::vector<double>& dc,
           std::vector<double>& ds) {
    const int n = st.n();
    if (xi.n != n) fail(ErrorKind::dimension, "coupling matrix does not match state");
    dc.resize(n);
    ds.resize(n);
    for (int j = 0; j < n; ++j) {
        double c = st.c[j];
        double s = st.s[j];
        double sq = c * c + s * s;
        double inj_c = 0.0, inj_s = 0.0;
        for (int idx = xi.row_ptr[j]; idx < xi.row_ptr[j + 1]; ++idx) {
            inj_c += xi.val[idx] * st.c[xi.col[idx]];
            inj_s += xi.val[idx] * st.s[xi.col[idx]];
        }
        dc[j] = (-1.0 + p - sq) * c + inj_c;
        ds[j] = (-1.0 - p - sq) * s + inj_s;
    }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights equal the last tableau row (FSAL); the error weights are
// the difference against the embedded 4th-order solution.
constexpr double kErr[7] = {71.0 / 57600,       0.0,        -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

} // namespace

DormandPrince::DormandPrince(int n) : n_(n) {
    stage_ = OpoNetworkState::vacuum(n);
    for (auto& k : k_) k.assign(2 * n, 0.0);
    y_new_.assign(2 * n, 0.0);
    dc_.assign(n, 0.0);
    ds_.assign(n, 0.0);
}

double DormandPrince::attempt(const OpoNetworkState& st, double dt, double p,
                              const CouplingMatrix& xi, double abs_tol, double rel_tol) {
    const int n = n_;
    auto eval = [&](const OpoNetworkState& at, std::vector<double>& k) {
        drift(at, p, xi, dc_, ds_);
        std::copy(dc_.begin(), dc_.end(), k.begin());
        std::copy(ds_.begin(), ds_.end(), k.begin() + n);
    };

    eval(st, k_[0]);
    for (int stage = 1; stage < 7; ++stage) {
        for (int i = 0; i < n; ++i) {
            double acc_c = 0.0, acc_s = 0.0;
            for (int prev = 0; prev < stage; ++prev) {
                acc_c += kA[stage][prev] * k_[prev][i];
                acc_s += kA[stage][prev] * k_[prev][n + i];
            }
            stage_.c[i] = st.c[i] + dt * acc_c;
            stage_.s[i] = st.s[i] + dt * acc_s;
        }
        eval(stage_, k_[stage]);
    }

    // Stage 7 is evaluated at the 5th-order solution, so reuse it.
    for (int i = 0; i < 2 * n; ++i) y_new_[i] = i < n ? stage_.c[i] : stage_.s[i - n];

    double sum_sq = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
        double e = 0.0;
        for (int stage = 0; stage < 7; ++stage) e += kErr[stage] * k_[stage][i];
        e *= dt;
        double y0 = i < n ? st.c[i] : st.s[i - n];
        double sc = abs_tol + rel_tol * std::max(std::abs(y0), std::abs(y_new_[i]));
        sum_sq += (e / sc) * (e / sc);
    }
    return std::sqrt(sum_sq / (2 * n));
}

std::optional<double> detect_build_up(const std::vector<OpoNetworkState>& trajectory,
                                      double fraction, double window) {
    if (trajectory.empty()) fail(ErrorKind::invalid_argument, "empty trajectory");
    const auto& last = trajectory.back();
    const int n = last.n();
    double final_power = 0.0;
    for (double c : last.c) final_power += c * c;
    if (final_power == 0.0) return std::nullopt; // never oscillated

    auto sign = [](double v) { return v < 0.0 ? -1 : 1; };
    double target = fraction * final_power;
    size_t start = trajectory.size();
    for (size_t idx = trajectory.size(); idx-- > 0;) {
        const auto& st = trajectory[idx];
        double power = 0.0;
        bool signs_ok = true;
        for (int j = 0; j < n; ++j) {
            power += st.c[j] * st.c[j];
            if (sign(st.c[j]) != sign(last.c[j])) signs_ok = false;
        }
        if (!signs_ok || power < target) break;
        start = idx;
    }
    if (start == trajectory.size()) return std::nullopt;
    double t_star = trajectory[start].t;
    if (t_star > last.t - window) return std::nullopt;
    return t_star;
}

TrialResult run_trial(const IsingProblem& problem, const SimConfig& cfg, uint64_t trial_index) {
    CouplingMatrix xi = assemble_couplings(problem, cfg.xi_scale, cfg.coupling_mode);
    return run_trial(xi, problem, cfg, trial_index);
}

TrialResult run_trial(const CouplingMatrix& xi, const IsingProblem& problem, const SimConfig& cfg,
                      uint64_t trial_index) {
    validate(cfg);
    if (xi.n != problem.n) fail(ErrorKind::dimension, "couplings do not match problem");
    const int n = problem.n;

    Rng rng(cfg.seed, trial_index);
    OpoNetworkState st = OpoNetworkState::vacuum(n);
    std::vector<OpoNetworkState> samples;
    samples.push_back(st);

    TrialResult result;
    const double t_end = cfg.t_max;
    const double t_eps = 1e-12 * t_end;

    if (cfg.integrator == IntegratorKind::fixed_step) {
        std::vector<double> dc(n), ds(n);
        long step_count = 0;
        while (st.t < t_end - t_eps) {
            double h = std::min(cfg.dt, t_end - st.t);
            double p = pump_at(cfg.pump, st.t);
            step_fixed(st, h, p, xi, cfg.a_s, rng, dc, ds);
            ++step_count;
            if (step_count % cfg.sample_stride == 0) samples.push_back(st);
        }
        result.steps = step_count;
    } else {
        DormandPrince stepper(n);
        double dt_try = std::min(cfg.dt, cfg.dt_max);
        long step_count = 0;
        while (st.t < t_end - t_eps) {
            double h = std::min(dt_try, t_end - st.t);
            double p = pump_at(cfg.pump, st.t);
            auto outcome = stepper.step(st, h, cfg, p, xi, rng);
            result.rejections += outcome.rejections;
            ++step_count;
            if (step_count % cfg.sample_stride == 0) samples.push_back(st);
            dt_try = outcome.dt_next;
        }
        result.steps = step_count;
    }
    if (samples.back().t < st.t) samples.push_back(st);

    result.spins.sigma.resize(n);
    for (int j = 0; j < n; ++j)
        result.spins.sigma[j] = st.c[j] < 0.0 ? -1 : 1; // zero breaks toward +1
    result.final_energy = ising_energy(problem, result.spins);
    result.build_up_time = detect_build_up(samples, cfg.buildup_fraction, cfg.buildup_window);
    if (cfg.keep_trajectory) result.trajectory = std::move(samples);
    return result;
}

} // namespace cim
