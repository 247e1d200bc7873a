#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace cim {

// Normalized coherent-state eigenvalues of the generalized-P expansion,
// restricted to the real manifold relevant below threshold.
struct PositivePState {
    double a = 0.0;
    double b = 0.0;
    double t = 0.0;
};

struct QuadratureStats {
    double mean_a1 = 0.0;
    double mean_a2 = 0.0;
    double var_a1 = 0.0;
    double var_a2 = 0.0;
    long n_samples = 0;
    double stderr_a1 = 0.0; // standard error of var_a1
    double stderr_a2 = 0.0; // standard error of var_a2
};

struct PositivePStepInfo {
    bool clamped_a = false; // diffusion p - a^2 went negative
    bool clamped_b = false;
};

// Euler-Maruyama step of the generalized-P stochastic process:
//   da = -[a - (p - a^2) b] dt + sqrt(p - a^2)/A_s dW_a
//   db = -[b - (p - b^2) a] dt + sqrt(p - b^2)/A_s dW_b
// Negative diffusion coefficients are clamped to zero and reported.
PositivePStepInfo positive_p_step(PositivePState& st, double p, double dt, double a_s, Rng& rng);

// Single-OPO sample of the c-number Langevin model.
struct ClgeSample {
    double c = 0.0;
    double s = 0.0;
};

// Means via the quadrature expectation relations; variances use the
// vacuum-normalized form (variance 1/4 at a = b = 0). Standard errors assume
// independent samples.
QuadratureStats qfpe_quadrature_stats(const std::vector<PositivePState>& ensemble, double a_s);

// var_a1 = A_s^2 var(c), var_a2 = A_s^2 var(s).
QuadratureStats clge_quadrature_stats(const std::vector<ClgeSample>& ensemble, double a_s);

struct SqueezeConfig {
    double a_s = 50.0;
    double dt = 0.01;
    int n_trajectories = 200;
    int samples_per_trajectory = 500;
    double sample_stride = 1.0;  // normalized time between kept samples
    double burn_in_scale = 20.0; // burn-in time = scale / max(1 - p, 0.05)
    double guard = 10.0;         // |a|, |b| excursion bound
    uint64_t seed = 1;
};

struct SqueezeRow {
    double p = 0.0;
    QuadratureStats qfpe;
    QuadratureStats clge;
    double z1 = 0.0; // (var_a1 difference) / combined stderr
    double z2 = 0.0;
    double rejected_fraction = 0.0; // positive-P trajectories beyond the guard
    long clamp_events = 0;          // clamped diffusion steps
    bool flagged = false;           // |z1| > 3 or |z2| > 3
};

// Runs both samplers to stationarity at each pump rate and compares the
// squeezing / anti-squeezing variances. Valid for p in [0, 1.2].
std::vector<SqueezeRow> squeezing_compare(const std::vector<double>& p_values,
                                          const SqueezeConfig& cfg);

} // namespace cim
