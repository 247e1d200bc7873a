#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace cim {

enum class PumpKind { constant, linear_ramp };

struct PumpSchedule {
    PumpKind kind = PumpKind::constant;
    double p = 1.1;       // constant level
    double p_start = 0.0; // ramp
    double p_end = 2.2;
    double t_ramp = 1500.0;

    static PumpSchedule constant(double p) {
        PumpSchedule s;
        s.kind = PumpKind::constant;
        s.p = p;
        return s;
    }
    static PumpSchedule ramp(double p_start, double p_end, double t_ramp) {
        PumpSchedule s;
        s.kind = PumpKind::linear_ramp;
        s.p_start = p_start;
        s.p_end = p_end;
        s.t_ramp = t_ramp;
        return s;
    }
};

double pump_at(const PumpSchedule& sched, double t);

enum class IntegratorKind { fixed_step, adaptive_dp };
enum class CouplingMode { linear, sign_only };

struct SimConfig {
    PumpSchedule pump;
    double xi_scale = 0.1; // magnitude multiplying J (MAX-CUT edges get -xi_scale)
    CouplingMode coupling_mode = CouplingMode::linear;
    double a_s = 1.0e7; // saturation amplitude; sets the quantum noise scale
    IntegratorKind integrator = IntegratorKind::fixed_step;
    double dt = 0.01;     // fixed step / initial adaptive try
    double dt_max = 0.05; // adaptive cap, keeps the noise resolved
    double rel_tol = 1e-5;
    double abs_tol = 1e-8;
    double t_max = 300.0;
    uint64_t seed = 1;
    int sample_stride = 10;
    double buildup_fraction = 0.9;
    double buildup_window = 10.0;
    bool keep_trajectory = false;
    double gamma_s = 0.0; // optional signal decay rate (1/s) for time conversion
};

void validate(const SimConfig& cfg);

// Network couplings xi_jl as CSR, same sparsity as the Ising problem.
struct CouplingMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    double at(int j, int l) const;
};

CouplingMatrix assemble_couplings(const IsingProblem& p, double xi_scale,
                                  CouplingMode mode = CouplingMode::linear);
CouplingMatrix zero_couplings(int n);

// Normalized quadrature amplitudes of the OPO network at time t.
struct OpoNetworkState {
    std::vector<double> c;
    std::vector<double> s;
    double t = 0.0;

    int n() const { return static_cast<int>(c.size()); }
    static OpoNetworkState vacuum(int n) {
        OpoNetworkState st;
        st.c.assign(n, 0.0);
        st.s.assign(n, 0.0);
        return st;
    }
};

// dc_j = [-1 + p - (c_j^2 + s_j^2)] c_j + sum_l xi_jl c_l
// ds_j = [-1 - p - (c_j^2 + s_j^2)] s_j + sum_l xi_jl s_l
void drift(const OpoNetworkState& st, double p, const CouplingMatrix& xi,
           std::vector<double>& dc, std::vector<double>& ds);

inline double noise_amplitude(double c, double s, double a_s) {
    return std::sqrt(c * c + s * s + 0.5) / a_s;
}

namespace detail {

inline void check_finite(const OpoNetworkState& st) {
    for (double v : st.c)
        if (!std::isfinite(v)) fail(ErrorKind::divergence, "state diverged (c), reduce dt");
    for (double v : st.s)
        if (!std::isfinite(v)) fail(ErrorKind::divergence, "state diverged (s), reduce dt");
}

} // namespace detail

// Euler-Maruyama step. Two independent normal draws per oscillator, both
// scaled by the same pre-step amplitude. dt == 0 leaves state and rng alone.
template <class RngT>
void step_fixed(OpoNetworkState& st, double dt, double p, const CouplingMatrix& xi, double a_s,
                RngT& rng, std::vector<double>& dc, std::vector<double>& ds) {
    if (dt < 0.0) fail(ErrorKind::invalid_argument, "dt must be nonnegative");
    if (dt == 0.0) return;
    drift(st, p, xi, dc, ds);
    const double sqrt_dt = std::sqrt(dt);
    const int n = st.n();
    for (int j = 0; j < n; ++j) {
        double amp = noise_amplitude(st.c[j], st.s[j], a_s);
        st.c[j] += dc[j] * dt + amp * rng.next_normal() * sqrt_dt;
        st.s[j] += ds[j] * dt + amp * rng.next_normal() * sqrt_dt;
    }
    st.t += dt;
    detail::check_finite(st);
}

struct AdaptiveOutcome {
    double dt_used = 0.0;
    double dt_next = 0.0;
    int rejections = 0;
};

// Dormand-Prince 5(4) workspace; one instance per trial, reused across steps.
class DormandPrince {
public:
    explicit DormandPrince(int n);

    // Deterministic embedded step on the drift field, then one Gaussian
    // increment per component with pre-step amplitude. Rejected tries shrink
    // dt without consuming noise draws.
    template <class RngT>
    AdaptiveOutcome step(OpoNetworkState& st, double dt_try, const SimConfig& cfg, double p,
                         const CouplingMatrix& xi, RngT& rng) {
        AdaptiveOutcome out;
        double dt = dt_try;
        if (dt <= 0.0) fail(ErrorKind::invalid_argument, "dt_try must be positive");
        while (true) {
            double err = attempt(st, dt, p, xi, cfg.abs_tol, cfg.rel_tol);
            if (err <= 1.0) {
                double factor = err == 0.0 ? kGrowMax
                                           : std::min(kGrowMax, std::max(kShrinkMin,
                                                                         kSafety * std::pow(err, -0.2)));
                out.dt_used = dt;
                out.dt_next = std::min(dt * factor, cfg.dt_max);
                const double sqrt_dt = std::sqrt(dt);
                const int n = st.n();
                for (int j = 0; j < n; ++j) {
                    double amp = noise_amplitude(st.c[j], st.s[j], cfg.a_s);
                    y_new_[j] += amp * rng.next_normal() * sqrt_dt;
                    y_new_[n + j] += amp * rng.next_normal() * sqrt_dt;
                }
                std::copy(y_new_.begin(), y_new_.begin() + n, st.c.begin());
                std::copy(y_new_.begin() + n, y_new_.end(), st.s.begin());
                st.t += dt;
                detail::check_finite(st);
                return out;
            }
            ++out.rejections;
            dt *= std::max(kShrinkMin, kSafety * std::pow(err, -0.2));
            if (dt < kDtFloor)
                fail(ErrorKind::stiffness, "adaptive step underflow below 1e-9");
        }
    }

private:
    // Runs the embedded pair from st over dt; fills y_new_ with the 5th-order
    // result and returns the scaled error norm.
    double attempt(const OpoNetworkState& st, double dt, double p, const CouplingMatrix& xi,
                   double abs_tol, double rel_tol);

    static constexpr double kSafety = 0.9;
    static constexpr double kShrinkMin = 0.2;
    static constexpr double kGrowMax = 5.0;
    static constexpr double kDtFloor = 1e-9;

    int n_;
    OpoNetworkState stage_;
    std::vector<double> k_[7];
    std::vector<double> y_new_;
    std::vector<double> dc_, ds_;
};

struct TrialResult {
    SpinConfig spins;
    std::optional<double> build_up_time;
    double final_energy = 0.0;
    std::optional<double> final_cut;
    std::vector<OpoNetworkState> trajectory; // decimated samples, kept on request
    long steps = 0;
    long rejections = 0;
};

// Earliest sampled time after which all signs match the final state and the
// total c-power stays above fraction f of its final value. Absent if that
// never happens before t_max - W, or if the network never oscillates.
std::optional<double> detect_build_up(const std::vector<OpoNetworkState>& trajectory,
                                      double fraction, double window);

TrialResult run_trial(const IsingProblem& problem, const SimConfig& cfg, uint64_t trial_index);
TrialResult run_trial(const CouplingMatrix& xi, const IsingProblem& problem, const SimConfig& cfg,
                      uint64_t trial_index);

} // namespace cim
