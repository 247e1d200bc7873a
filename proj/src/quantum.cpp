#include "quantum.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace cim {

namespace {

// Neumaier compensated accumulator; reductions run in a fixed order so the
// result does not depend on scheduling.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// var_a1 = <u^2> + 1/4 - <u>^2 and var_a2 = 1/4 - <v^2> + <v>^2 with
// u = A_s(a+b)/2 and v = A_s(a-b)/2. The true quadrature mean is v/i, so its
// square enters var_a2 with a plus sign; the +-1/4 terms are the vacuum
// normalization. Offset 0 selects the plain sample variance used for the
// Langevin side.
struct QuadMoments {
    Kahan su, su2, sv, sv2;
    long n = 0;

    void add(double u, double v) {
        su.add(u);
        su2.add(u * u);
        sv.add(v);
        sv2.add(v * v);
        ++n;
    }
    double mean_u() const { return su.value() / static_cast<double>(n); }
    double mean_v() const { return sv.value() / static_cast<double>(n); }
    double var1(double offset) const {
        double m = mean_u();
        return su2.value() / static_cast<double>(n) + offset - m * m;
    }
    double var2(double offset) const {
        double m = mean_v();
        double second = sv2.value() / static_cast<double>(n);
        return offset == 0.0 ? second - m * m : offset - second + m * m;
    }
};

QuadratureStats finish_iid(const QuadMoments& mom, double offset) {
    QuadratureStats out;
    out.n_samples = mom.n;
    out.mean_a1 = mom.mean_u();
    out.mean_a2 = mom.mean_v();
    out.var_a1 = mom.var1(offset);
    out.var_a2 = mom.var2(offset);
    // Independent-sample standard error of the second moments, using the
    // Gaussian relation Var(u^2) = 2 <u^2>^2 of the near-Gaussian
    // stationary state. Correlated ensembles get batch means instead.
    const double n = static_cast<double>(mom.n);
    double m2u = mom.su2.value() / n;
    double m2v = mom.sv2.value() / n;
    out.stderr_a1 = std::sqrt(2.0 * m2u * m2u / n);
    out.stderr_a2 = std::sqrt(2.0 * m2v * m2v / n);
    return out;
}

} // namespace

PositivePStepInfo positive_p_step(PositivePState& st, double p, double dt, double a_s, Rng& rng) {
    if (!(dt > 0.0)) fail(ErrorKind::invalid_argument, "dt must be positive");
    if (!(a_s > 0.0)) fail(ErrorKind::invalid_argument, "a_s must be positive");
    PositivePStepInfo info;
    double diff_a = p - st.a * st.a;
    double diff_b = p - st.b * st.b;
    if (diff_a < 0.0) {
        diff_a = 0.0;
        info.clamped_a = true;
    }
    if (diff_b < 0.0) {
        diff_b = 0.0;
        info.clamped_b = true;
    }
    double drift_a = -(st.a - (p - st.a * st.a) * st.b);
    double drift_b = -(st.b - (p - st.b * st.b) * st.a);
    double sqrt_dt = std::sqrt(dt);
    st.a += drift_a * dt + std::sqrt(diff_a) / a_s * rng.next_normal() * sqrt_dt;
    st.b += drift_b * dt + std::sqrt(diff_b) / a_s * rng.next_normal() * sqrt_dt;
    st.t += dt;
    return info;
}

QuadratureStats qfpe_quadrature_stats(const std::vector<PositivePState>& ensemble, double a_s) {
    if (ensemble.empty()) fail(ErrorKind::invalid_argument, "empty ensemble");
    QuadMoments mom;
    for (const auto& st : ensemble)
        mom.add(a_s * (st.a + st.b) / 2.0, a_s * (st.a - st.b) / 2.0);
    return finish_iid(mom, 0.25);
}

QuadratureStats clge_quadrature_stats(const std::vector<ClgeSample>& ensemble, double a_s) {
    if (ensemble.empty()) fail(ErrorKind::invalid_argument, "empty ensemble");
    QuadMoments mom;
    for (const auto& smp : ensemble) mom.add(a_s * smp.c, a_s * smp.s);
    return finish_iid(mom, 0.0);
}

namespace {

// Pooled point estimates plus batch-means standard errors: every trajectory
// is an independent batch, which keeps the stderr honest even though samples
// within a trajectory are correlated.
struct BatchedQuad {
    QuadMoments pooled;
    std::vector<double> batch_v1, batch_v2;

    void add_batch(const QuadMoments& batch, double offset) {
        batch_v1.push_back(batch.var1(offset));
        batch_v2.push_back(batch.var2(offset));
    }

    QuadratureStats finish(double offset) const {
        QuadratureStats out;
        out.n_samples = pooled.n;
        out.mean_a1 = pooled.mean_u();
        out.mean_a2 = pooled.mean_v();
        out.var_a1 = pooled.var1(offset);
        out.var_a2 = pooled.var2(offset);
        const size_t m = batch_v1.size();
        if (m > 1) {
            double m1 = 0.0, m2 = 0.0;
            for (size_t i = 0; i < m; ++i) {
                m1 += batch_v1[i];
                m2 += batch_v2[i];
            }
            m1 /= static_cast<double>(m);
            m2 /= static_cast<double>(m);
            double s1 = 0.0, s2 = 0.0;
            for (size_t i = 0; i < m; ++i) {
                s1 += (batch_v1[i] - m1) * (batch_v1[i] - m1);
                s2 += (batch_v2[i] - m2) * (batch_v2[i] - m2);
            }
            out.stderr_a1 = std::sqrt(s1 / (static_cast<double>(m) * (m - 1)));
            out.stderr_a2 = std::sqrt(s2 / (static_cast<double>(m) * (m - 1)));
        }
        return out;
    }
};

} // namespace

std::vector<SqueezeRow> squeezing_compare(const std::vector<double>& p_values,
                                          const SqueezeConfig& cfg) {
    for (double p : p_values)
        if (p < 0.0 || p > 1.2)
            fail(ErrorKind::domain, "pump rate must lie in [0, 1.2] for the squeezing check");
    if (cfg.n_trajectories < 2 || cfg.samples_per_trajectory < 1)
        fail(ErrorKind::invalid_argument, "need at least 2 trajectories and 1 sample each");
    if (!(cfg.dt > 0.0 && cfg.sample_stride >= cfg.dt))
        fail(ErrorKind::invalid_argument, "sample_stride must be at least dt");
    if (!(cfg.a_s > 0.0)) fail(ErrorKind::invalid_argument, "a_s must be positive");

    std::vector<SqueezeRow> report;
    report.reserve(p_values.size());
    const long stride_steps = std::max(1l, std::lround(cfg.sample_stride / cfg.dt));

    for (size_t pi = 0; pi < p_values.size(); ++pi) {
        const double p = p_values[pi];
        const double burn_in = cfg.burn_in_scale / std::max(1.0 - p, 0.05);
        const long burn_steps = std::lround(burn_in / cfg.dt);

        SqueezeRow row;
        row.p = p;

        // Generalized-P side.
        {
            BatchedQuad stats;
            long rejected = 0;
            for (int traj = 0; traj < cfg.n_trajectories; ++traj) {
                Rng rng(cfg.seed, 0x71667065u + pi * 0x100000u + traj);
                PositivePState st;
                QuadMoments batch;
                bool ok = true;
                auto advance = [&](long steps) {
                    for (long k = 0; k < steps && ok; ++k) {
                        auto info = positive_p_step(st, p, cfg.dt, cfg.a_s, rng);
                        row.clamp_events += info.clamped_a + info.clamped_b;
                        if (std::abs(st.a) > cfg.guard || std::abs(st.b) > cfg.guard) ok = false;
                    }
                };
                advance(burn_steps);
                for (int smp = 0; smp < cfg.samples_per_trajectory && ok; ++smp) {
                    advance(stride_steps);
                    if (!ok) break;
                    double u = cfg.a_s * (st.a + st.b) / 2.0;
                    double v = cfg.a_s * (st.a - st.b) / 2.0;
                    batch.add(u, v);
                    stats.pooled.add(u, v);
                }
                if (!ok) {
                    ++rejected;
                    continue; // partial batch dropped from stderr, pooled keeps finished samples
                }
                stats.add_batch(batch, 0.25);
            }
            row.rejected_fraction = static_cast<double>(rejected) / cfg.n_trajectories;
            row.qfpe = stats.finish(0.25);
        }

        // c-number Langevin side (single OPO).
        {
            BatchedQuad stats;
            for (int traj = 0; traj < cfg.n_trajectories; ++traj) {
                Rng rng(cfg.seed, 0x636c6765u + pi * 0x100000u + traj);
                double c = 0.0, s = 0.0;
                QuadMoments batch;
                const double sqrt_dt = std::sqrt(cfg.dt);
                auto advance = [&](long steps) {
                    for (long k = 0; k < steps; ++k) {
                        double sq = c * c + s * s;
                        double amp = std::sqrt(sq + 0.5) / cfg.a_s;
                        double dc = (-1.0 + p - sq) * c;
                        double ds = (-1.0 - p - sq) * s;
                        c += dc * cfg.dt + amp * rng.next_normal() * sqrt_dt;
                        s += ds * cfg.dt + amp * rng.next_normal() * sqrt_dt;
                    }
                };
                advance(burn_steps);
                for (int smp = 0; smp < cfg.samples_per_trajectory; ++smp) {
                    advance(stride_steps);
                    batch.add(cfg.a_s * c, cfg.a_s * s);
                    stats.pooled.add(cfg.a_s * c, cfg.a_s * s);
                }
                stats.add_batch(batch, 0.0);
            }
            row.clge = stats.finish(0.0);
        }

        double se1 = std::sqrt(row.qfpe.stderr_a1 * row.qfpe.stderr_a1 +
                               row.clge.stderr_a1 * row.clge.stderr_a1);
        double se2 = std::sqrt(row.qfpe.stderr_a2 * row.qfpe.stderr_a2 +
                               row.clge.stderr_a2 * row.clge.stderr_a2);
        row.z1 = se1 > 0.0 ? (row.qfpe.var_a1 - row.clge.var_a1) / se1 : 0.0;
        row.z2 = se2 > 0.0 ? (row.qfpe.var_a2 - row.clge.var_a2) / se2 : 0.0;
        row.flagged = std::abs(row.z1) > 3.0 || std::abs(row.z2) > 3.0;
        report.push_back(row);
    }
    return report;
}

} // namespace cim
