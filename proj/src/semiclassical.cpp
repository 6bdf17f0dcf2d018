#include "qjump/semiclassical.hpp"

#include <cmath>

namespace qjump::semiclassical {

double neoclassical_residual(double x, const models::ModelParams& p) {
    const double g = p.g, eps = p.epsilon, dw = p.delta_omega, kap = p.kappa;
    double root = std::sqrt(dw * dw * kap * kap / (g * g * g * g) + x);
    double br = std::abs(dw) / kap - 1.0 / root;
    double rhs = (2.0 * eps / g) * (2.0 * eps / g) / (1.0 + br * br);
    return x - rhs;
}

BistabilityRoots neoclassical_roots(const models::ModelParams& p) {
    if (p.kind != models::ModelKind::JC || p.g <= 0.0)
        throw ValidationError("neoclassical_roots: JC mode with g > 0 required");
    BistabilityRoots out;
    out.n_scale = (p.g / (2.0 * p.kappa)) * (p.g / (2.0 * p.kappa));
    out.n_scale_weak = p.gamma > 0.0 ? p.gamma * p.gamma / (8.0 * p.g * p.g) : 0.0;
    if (p.epsilon == 0.0) {
        out.roots.push_back({0.0, 0.0});
        return out;
    }
    // bracket sign changes of the residual on a log-spaced sweep, then bisect
    const double drive_sq = (2.0 * p.epsilon / p.g) * (2.0 * p.epsilon / p.g);
    const double x_lo = 1e-14, x_hi = 4.0 * drive_sq + 1.0;
    const int n_sweep = 200000;
    double prev_x = x_lo, prev_r = neoclassical_residual(x_lo, p);
    const double log_lo = std::log(x_lo), log_hi = std::log(x_hi);
    for (int i = 1; i <= n_sweep; ++i) {
        double x = std::exp(log_lo + (log_hi - log_lo) * i / n_sweep);
        double r = neoclassical_residual(x, p);
        if (prev_r == 0.0) {
            out.roots.push_back({prev_x, 0.0});
        } else if (prev_r * r < 0.0) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b);
                double rm = neoclassical_residual(m, p);
                if (prev_r * rm <= 0.0)
                    b = m;
                else
                    a = m;
                if (b - a < 1e-15 * std::max(1.0, b)) break;
            }
            out.roots.push_back({0.5 * (a + b), 0.0});
        }
        prev_x = x;
        prev_r = r;
    }
    for (auto& r : out.roots) r.amp_unscaled = std::sqrt(r.amp_scaled_sq * out.n_scale);
    return out;
}

namespace {

struct MbeDeriv {
    cx da, db;
    double dz;
};

MbeDeriv mbe_rhs(const SemiclassicalState& s, const models::ModelParams& p) {
    const cx I{0.0, 1.0};
    MbeDeriv d;
    d.da = -(p.kappa - I * p.delta_omega) * s.alpha - I * p.g * s.beta - I * p.epsilon;
    d.db = I * p.delta_omega * s.beta + I * p.g * s.alpha * s.zeta;
    d.dz = (2.0 * I * p.g * (std::conj(s.alpha) * s.beta - s.alpha * std::conj(s.beta))).real();
    return d;
}

SemiclassicalState advance(const SemiclassicalState& s, const MbeDeriv& d, double h) {
    return {s.alpha + h * d.da, s.beta + h * d.db, s.zeta + h * d.dz};
}

}  // namespace

std::vector<MbeSample> mbe_integrate(const SemiclassicalState& s0, const models::ModelParams& p,
                                     double t_final, double dt, int sample_every) {
    if (std::abs(s0.bloch_length2() - 1.0) > 1e-9)
        throw ValidationError("mbe_integrate: initial Bloch length must be 1");
    if (dt <= 0 || t_final < 0) throw ValidationError("mbe_integrate: bad time arguments");
    std::vector<MbeSample> out;
    SemiclassicalState s = s0;
    long n_steps = std::lround(t_final / dt);
    // four internal substeps per reported step keep the Bloch-length drift
    // below 1e-8 over 100 lifetimes at dt = 1e-3 for couplings up to g ~ 60
    const int n_sub = 4;
    const double h = dt / n_sub;
    out.push_back({0.0, s});
    for (long k = 0; k < n_steps; ++k) {
        for (int sub = 0; sub < n_sub; ++sub) {
            MbeDeriv k1 = mbe_rhs(s, p);
            MbeDeriv k2 = mbe_rhs(advance(s, k1, 0.5 * h), p);
            MbeDeriv k3 = mbe_rhs(advance(s, k2, 0.5 * h), p);
            MbeDeriv k4 = mbe_rhs(advance(s, k3, h), p);
            s.alpha += h / 6.0 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da);
            s.beta += h / 6.0 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
            s.zeta += h / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
        }
        if ((k + 1) % sample_every == 0 || k + 1 == n_steps)
            out.push_back({(k + 1) * dt, s});
    }
    return out;
}

double null_survival(double x, double t) { return std::exp(-x * (1.0 - std::exp(-2.0 * t))); }

double localization_bound(cx alpha1, cx alpha2) {
    const double m1 = std::abs(alpha1), m2 = std::abs(alpha2);
    if (!(m2 > 0.0)) throw ValidationError("localization_bound: requires |alpha2| > 0");
    if (std::fabs(m1 - m2) < 1e-9 * std::max(1.0, m1))
        throw ValidationError(
            "localization_bound: indeterminate for |alpha1| -> |alpha2| (phase-bistability limit)");
    if (!(m1 > m2))
        throw ValidationError("localization_bound: requires |alpha1| > |alpha2| > 0");
    const double denom_arg = m1 * m1 - m2 * (m2 - 1.0);
    if (denom_arg <= 0.0 || m2 / denom_arg <= 0.0)
        throw ValidationError("localization_bound: log argument out of domain");
    return -std::log(m2 / denom_arg) / (2.0 * (m1 * m1 - m2 * m2));
}

double localization_intersection(cx alpha1, cx alpha2) {
    const double a1 = std::norm(alpha1), a2 = std::norm(alpha2);
    if (!(std::abs(alpha1) > std::abs(alpha2)))
        throw ValidationError("localization_intersection: requires |alpha1| > |alpha2|");
    auto f = [&](double t) {
        double l1 = null_survival(a1, t), l2 = null_survival(a2, t);
        double decay = std::exp(-2.0 * t);
        return a1 * decay * l1 + a2 * decay * l2 - a2 * (l1 + l2);
    };
    double lo = 0.0, hi = 5.0;
    double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0.0)
        throw ValidationError("localization_intersection: no sign change on [0, 5/kappa]");
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (lo + hi);
        double fm = f(m);
        if (flo * fm <= 0.0) {
            hi = m;
            fhi = fm;
        } else {
            lo = m;
            flo = fm;
        }
        if (hi - lo < 1e-10) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace qjump::semiclassical
