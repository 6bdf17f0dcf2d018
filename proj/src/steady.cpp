#include "qjump/steady.hpp"

#include <cmath>
#include <sstream>

#include "qjump/simd.hpp"

namespace qjump::steady {

using fock::Basis;
using models::MasterEq;

namespace {

double max_abs(const CMat& m) {
    double r = 0.0;
    const cx* d = m.data();
    for (size_t i = 0; i < m.size(); ++i)
        r = std::max(r, std::max(std::fabs(d[i].real()), std::fabs(d[i].imag())));
    return r;
}

void observables(const MasterEq& me, const CMat& rho, double& n, double& g2) {
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < me.dim; ++i) {
        double ni = me.nvec[i];
        double p = rho(i, i).real();
        s1 += ni * p;
        s2 += ni * (ni - 1.0) * p;
    }
    n = s1;
    g2 = s1 > 0.0 ? s2 / (s1 * s1) : 0.0;
}

// least-squares ratio of successive difference matrices; the complex value
// estimates e^{lambda_slow * spacing}
cx difference_ratio(const CMat& d1, const CMat& d2) {
    const auto& K = simd::active();
    cx num = K.dotc(d1.size(), d1.data(), d2.data());
    double den = K.nrm2(d1.size(), d1.data());
    if (den == 0.0) return {0.0, 0.0};
    return num / den;
}

}  // namespace

SteadyReport steady_state(const models::ModelParams& p, int l_max, const SteadyOptions& opts) {
    p.validate();
    if (p.kappa <= 0.0) throw ValidationError("steady_state: dissipative model required");
    MasterEq me = models::make_master_eq(p, l_max);
    const int D = me.dim;

    double dt = opts.dt > 0.0 ? opts.dt : 2.5 / me.spectral_radius_estimate();

    CMat rho(D, D), k1(D, D), k2(D, D), k3(D, D), k4(D, D), tmp(D, D);
    rho.set_zero();
    rho(0, 0) = 1.0;  // vacuum (ground JC state in atom-Fock indexing)

    const auto& K = simd::active();
    const size_t N = rho.size();
    const double sixth = dt / 6.0;

    // snapshots for the slow-mode extrapolation
    CMat snap[3];
    int snap_count = 0;
    double snap_spacing = 25.0;           // model time between snapshots, grows
    double next_snap_t = 10.0;            // burn-in before the first snapshot
    CMat d1(D, D), d2(D, D), cand(D, D);

    double t = 0.0;
    double best_residual = 1e300;
    int checks_since_improvement = 0;
    const long check_every = std::max<long>(1, std::lround(1.0 / dt));

    SteadyReport rep;
    rep.rho_ss = fock::DensityMatrix(me.basis, l_max);

    auto finish = [&](const CMat& state, double residual, bool accelerated, bool stagnated) {
        rep.rho_ss.el = state;
        rep.rho_ss.hermitize();
        rep.rho_ss.normalize();
        observables(me, rep.rho_ss.el, rep.photon_number, rep.g2_zero);
        rep.residual = residual;
        rep.t_integrated = t;
        rep.accelerated = accelerated;
        rep.stagnated = stagnated;
        return rep;
    };

    long step = 0;
    while (t < opts.max_time) {
        me.rhs(rho, k1);
        if (step % check_every == 0) {
            double res = max_abs(k1);
            if (!std::isfinite(res)) {
                // stable-step bound was too optimistic; restart with a finer step
                dt *= 0.5;
                rho.set_zero();
                rho(0, 0) = 1.0;
                t = 0.0;
                step = 0;
                snap_count = 0;
                next_snap_t = 10.0;
                best_residual = 1e300;
                warn("steady_state: integration diverged, retrying with dt = " +
                     std::to_string(dt));
                continue;
            }
            if (res < opts.tol) return finish(rho, res, false, false);
            if (res < best_residual * 0.999) {
                best_residual = res;
                checks_since_improvement = 0;
            } else if (++checks_since_improvement > 50) {
                if (res < opts.stagnation_accept) {
                    warn("steady_state: residual stagnated at " + std::to_string(res));
                    return finish(rho, res, false, true);
                }
                std::ostringstream msg;
                msg << "steady_state: stagnation at residual " << res << " above tolerance "
                    << opts.tol;
                throw NumericalError(msg.str());
            }
        }
        K.xpay(N, rho.data(), cx{0.5 * dt, 0.0}, k1.data(), tmp.data());
        me.rhs(tmp, k2);
        K.xpay(N, rho.data(), cx{0.5 * dt, 0.0}, k2.data(), tmp.data());
        me.rhs(tmp, k3);
        K.xpay(N, rho.data(), cx{dt, 0.0}, k3.data(), tmp.data());
        me.rhs(tmp, k4);
        K.axpy(N, cx{sixth, 0.0}, k1.data(), rho.data());
        K.axpy(N, cx{2.0 * sixth, 0.0}, k2.data(), rho.data());
        K.axpy(N, cx{2.0 * sixth, 0.0}, k3.data(), rho.data());
        K.axpy(N, cx{sixth, 0.0}, k4.data(), rho.data());
        t += dt;
        ++step;

        if (opts.accelerate && t >= next_snap_t) {
            if (snap_count < 3) {
                snap[snap_count++] = rho;
            } else {
                snap[0] = snap[1];
                snap[1] = snap[2];
                snap[2] = rho;
            }
            next_snap_t += snap_spacing;
            if (snap_count == 3) {
                for (size_t i = 0; i < N; ++i) {
                    d1.data()[i] = snap[1].data()[i] - snap[0].data()[i];
                    d2.data()[i] = snap[2].data()[i] - snap[1].data()[i];
                }
                cx r = difference_ratio(d1, d2);
                if (std::abs(r) < 0.995 && std::abs(r) > 1e-8) {
                    cand = snap[2];
                    K.axpy(N, r / (1.0 - r), d2.data(), cand.data());
                    me.rhs(cand, tmp);
                    double res = max_abs(tmp);
                    if (res < opts.tol) return finish(cand, res, true, false);
                }
                // widen the window so a slower mode can dominate the differences
                snap_spacing = std::min(snap_spacing * 1.5, 400.0);
                snap_count = 0;
            }
        }
    }
    std::ostringstream msg;
    msg << "steady_state: no convergence within max_time = " << opts.max_time
        << ", residual = " << best_residual;
    throw NumericalError(msg.str());
}

SteadyReport multiphoton_reference(const models::ModelParams& p, int l_max,
                                   const SteadyOptions& opts) {
    return steady_state(p, l_max, opts);
}

double kerr_wigner_analytic_point(double x, double y, const models::ModelParams& p) {
    if (p.kind != models::ModelKind::Kerr)
        throw ValidationError("kerr_wigner_analytic: Kerr mode required");
    const cx I{0.0, 1.0};
    const cx lam = (p.kappa - I * p.delta_omega) / (I * p.chi);
    const cx et = p.epsilon / (I * p.chi);
    const cx w{x, -y};
    const cx z = 2.0 * et * w;
    cx term{1.0, 0.0};
    cx sum = term;
    bool converged = false;
    for (int k = 0; k < 400; ++k) {
        term *= z / (static_cast<double>(k + 1) * (lam + static_cast<double>(k)));
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("kerr_wigner_analytic: series not converged within term budget");
    return std::exp(-2.0 * (x * x + y * y)) * std::norm(sum);
}

fock::PhaseGrid kerr_wigner_analytic(const models::ModelParams& p,
                                     const fock::PhaseGridSpec& spec) {
    fock::PhaseGrid g;
    g.spec = spec;
    g.values.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            g.at(iy, ix) = kerr_wigner_analytic_point(g.x_at(ix), g.y_at(iy), p);
    double z = g.sum_times_area();
    if (z <= 0.0) throw NumericalError("kerr_wigner_analytic: vanishing normalization");
    for (double& v : g.values) v /= z;
    return g;
}

}  // namespace qjump::steady
