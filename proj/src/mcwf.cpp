#include "qjump/mcwf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qjump/rng.hpp"
#include "qjump/simd.hpp"

namespace qjump::mcwf {

using fock::Basis;
using models::EffectiveGen;

namespace {

constexpr double kTieBand = 1e-12;

struct StepWorkspace {
    std::vector<cx> k1, k2, k3, k4, stage;
    void resize(int d) {
        k1.resize(d);
        k2.resize(d);
        k3.resize(d);
        k4.resize(d);
        stage.resize(d);
    }
};

// 3/8-rule RK4 for d psi/dt = G(t) psi with the linear-ramp drive
void rk4_38_step(const EffectiveGen& eg, const models::ModelParams& p, double t, double dt,
                 std::vector<cx>& psi, StepWorkspace& ws) {
    const auto& K = simd::active();
    const int d = eg.dim;
    const cx h{dt, 0.0};
    eg.gen.apply(psi.data(), ws.k1.data(), p.epsilon_at(t));
    K.xpay(d, psi.data(), h * (1.0 / 3.0), ws.k1.data(), ws.stage.data());
    eg.gen.apply(ws.stage.data(), ws.k2.data(), p.epsilon_at(t + dt / 3.0));
    K.xpay(d, psi.data(), -h * (1.0 / 3.0), ws.k1.data(), ws.stage.data());
    K.axpy(d, h, ws.k2.data(), ws.stage.data());
    eg.gen.apply(ws.stage.data(), ws.k3.data(), p.epsilon_at(t + 2.0 * dt / 3.0));
    K.xpay(d, psi.data(), h, ws.k1.data(), ws.stage.data());
    K.axpy(d, -h, ws.k2.data(), ws.stage.data());
    K.axpy(d, h, ws.k3.data(), ws.stage.data());
    eg.gen.apply(ws.stage.data(), ws.k4.data(), p.epsilon_at(t + dt));
    K.axpy(d, h * (1.0 / 8.0), ws.k1.data(), psi.data());
    K.axpy(d, h * (3.0 / 8.0), ws.k2.data(), psi.data());
    K.axpy(d, h * (3.0 / 8.0), ws.k3.data(), psi.data());
    K.axpy(d, h * (1.0 / 8.0), ws.k4.data(), psi.data());
}

void renormalize(std::vector<cx>& psi) {
    const auto& K = simd::active();
    double n2 = K.nrm2(psi.size(), psi.data());
    if (n2 <= 0.0) throw NumericalError("trajectory: state norm vanished");
    K.scale_real(psi.size(), 1.0 / std::sqrt(n2), psi.data());
}

}  // namespace

JumpKind classify_single(double n_pre, double n_post, uint64_t seed, uint64_t event_index) {
    double delta = n_post - n_pre;
    if (std::fabs(delta) > kTieBand * std::max(1.0, n_pre))
        return delta > 0.0 ? JumpKind::Upward : JumpKind::Downward;
    // coherent-source boundary case: fair deterministic coin
    uint64_t h = splitmix64(seed ^ splitmix64(event_index + 0x9E37u));
    return (h >> 63) ? JumpKind::Upward : JumpKind::Downward;
}

PhotonRecord run_trajectory_pure(const models::ModelParams& p, int l_max, double dt,
                                 double t_final, uint64_t seed, const TrajectoryOptions& opts) {
    p.validate();
    if (p.n_bar != 0.0)
        throw ValidationError("run_trajectory_pure: pure-state path requires n_bar = 0");
    if (p.eta != 1.0)
        throw ValidationError("run_trajectory_pure: pure-state path requires eta = 1");
    if (dt <= 0.0 || t_final < 0.0)
        throw ValidationError("run_trajectory_pure: bad time arguments");

    Basis basis = Basis::AtomFock;
    if (p.kind == models::ModelKind::Kerr || opts.force_fock_only) basis = Basis::FockOnly;
    if (basis == Basis::FockOnly && p.kind == models::ModelKind::JC && p.g != 0.0)
        throw ValidationError("run_trajectory_pure: Fock-only basis requires g = 0");

    EffectiveGen eg = models::make_effective_gen(p, l_max, basis);
    const int d = eg.dim;
    const bool atom_channel = p.gamma > 0.0 && basis == Basis::AtomFock;

    PhotonRecord rec;
    rec.params = p;
    rec.seed = seed;
    rec.dt = dt;
    rec.l_max = l_max;
    rec.basis = basis;
    rec.t_final = t_final;

    std::vector<cx> psi(d, cx{0.0, 0.0});
    if (opts.initial) {
        if (opts.initial->basis != basis || opts.initial->l_max != l_max)
            throw ValidationError("run_trajectory_pure: initial state basis mismatch");
        psi = opts.initial->amp;
        renormalize(psi);
    } else {
        psi[0] = 1.0;  // ground state |0,-> resp. |0>
    }

    // weight vectors for <n>, <s+s->, and the lowering maps
    std::vector<double> nvec(d), svec(d), ar(d, 0.0);
    const int da = basis == Basis::AtomFock ? 2 : 1;
    for (int i = 0; i < d; ++i) {
        int n = basis == Basis::AtomFock ? i / 2 : i;
        nvec[i] = n;
        svec[i] = (basis == Basis::AtomFock && (i & 1)) ? 1.0 : 0.0;
        if (i + da < d + 0) ar[i] = std::sqrt(n + 1.0);
    }
    for (int i = d - da; i < d; ++i) ar[i] = 0.0;

    Rng rng(seed);
    StepWorkspace ws;
    ws.resize(d);
    std::vector<cx> jump_buf(d);
    const auto& K = simd::active();

    std::vector<double> snap_times = opts.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    size_t snap_idx = 0;

    const long n_steps = std::lround(t_final / dt);
    uint64_t event_index = 0;

    // Jump-kind resolution: the immediate before/after comparison decides when
    // it can; exact ties (coherent states are invariant under the jump) fall
    // back to the change between the bracketing samples, and a deterministic
    // per-event coin settles the doubly-degenerate case.
    std::vector<size_t> pending;
    double last_sample_n = 0.0;
    auto resolve_pending = [&](double n_next_sample) {
        for (size_t idx : pending) {
            Event& ev = rec.events[idx];
            double delta = n_next_sample - last_sample_n;
            if (std::fabs(delta) > kTieBand * std::max(1.0, last_sample_n))
                ev.kind = delta > 0.0 ? JumpKind::Upward : JumpKind::Downward;
        }
        pending.clear();
    };

    double n_cond = K.wnrm2(d, nvec.data(), psi.data());
    rec.samples.push_back({0.0, n_cond});
    last_sample_n = n_cond;

    for (long step = 0; step < n_steps; ++step) {
        const double t = step * dt;
        n_cond = K.wnrm2(d, nvec.data(), psi.data());
        double s_cond = atom_channel ? K.wnrm2(d, svec.data(), psi.data()) : 0.0;
        double p_cav = 2.0 * p.kappa * n_cond * dt;
        double p_atom = atom_channel ? p.gamma * s_cond * dt : 0.0;
        double p_rec = p_cav + p_atom;
        if (p_rec > 0.1) {
            if (rec.coarse_dt_steps == 0)
                warn("run_trajectory_pure: p_REC exceeded 0.1, dt too coarse");
            ++rec.coarse_dt_steps;
        }
        double r1 = rng.uniform();
        double r2 = atom_channel ? rng.uniform() : 0.0;

        if (p_rec > r1) {
            Channel ch = Channel::Cavity;
            if (atom_channel && r2 >= p_cav / p_rec) ch = Channel::Atom;
            std::fill(jump_buf.begin(), jump_buf.end(), cx{0.0, 0.0});
            if (ch == Channel::Cavity) {
                for (int i = 0; i + da < d; ++i) jump_buf[i] = ar[i] * psi[i + da];
                if (da == 2) jump_buf[d - 2] = cx{0.0, 0.0};
            } else {
                for (int n = 0; 2 * n + 1 < d; ++n) jump_buf[2 * n] = psi[2 * n + 1];
            }
            psi.swap(jump_buf);
            renormalize(psi);
            double n_post = K.wnrm2(d, nvec.data(), psi.data());
            Event ev;
            ev.t = t + dt;
            ev.ch = ch;
            ev.n_pre = n_cond;
            ev.n_post = n_post;
            ev.kind = classify_single(n_cond, n_post, seed, event_index++);
            rec.events.push_back(ev);
            if (std::fabs(n_post - n_cond) <= kTieBand * std::max(1.0, n_cond))
                pending.push_back(rec.events.size() - 1);
        } else {
            rk4_38_step(eg, p, t, dt, psi, ws);
            renormalize(psi);
        }

        const double t_next = (step + 1) * dt;
        if ((step + 1) % opts.sample_every == 0 || step + 1 == n_steps) {
            double nc = K.wnrm2(d, nvec.data(), psi.data());
            rec.samples.push_back({t_next, nc});
            resolve_pending(nc);
            last_sample_n = nc;
            if (!rec.truncation_warned) {
                double top = basis == Basis::AtomFock
                                 ? std::norm(psi[d - 1]) + std::norm(psi[d - 2])
                                 : std::norm(psi[d - 1]);
                if (top > 1e-6) {
                    warn("run_trajectory_pure: top Fock level populated, l_max too small");
                    rec.truncation_warned = true;
                }
            }
        }
        while (snap_idx < snap_times.size() && snap_times[snap_idx] <= t_next + 1e-12) {
            fock::StateVector s(basis, l_max);
            s.amp = psi;
            rec.snapshots.push_back({t_next, std::move(s)});
            ++snap_idx;
        }
    }
    return rec;
}

JumpStats classify_jumps(const PhotonRecord& rec) {
    JumpStats st;
    for (const auto& ev : rec.events) {
        if (ev.kind == JumpKind::Upward)
            ++st.upward;
        else
            ++st.downward;
        if (ev.ch == Channel::Cavity)
            ++st.cavity;
        else
            ++st.atom;
    }
    return st;
}

EnsembleResult ensemble_density(const models::ModelParams& p, int l_max, double dt, int n_traj,
                                const std::vector<double>& t_grid, uint64_t master_seed,
                                int workers, const TrajectoryOptions& opts) {
    if (n_traj < 1) throw ValidationError("ensemble_density: n_traj >= 1 required");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw ValidationError("ensemble_density: t_grid must be ascending");
    Basis basis = Basis::AtomFock;
    if (p.kind == models::ModelKind::Kerr || opts.force_fock_only) basis = Basis::FockOnly;
    const int d = fock::dim_of(basis, l_max);
    const int ng = static_cast<int>(t_grid.size());
    double t_final = t_grid.empty() ? 0.0 : *std::max_element(t_grid.begin(), t_grid.end());

    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n_traj));

    struct Accum {
        std::vector<CMat> rho;
        std::vector<double> n_sum, n_sum2;
    };
    std::vector<Accum> acc(workers);
    for (auto& a : acc) {
        a.rho.assign(ng, CMat(d, d));
        for (auto& m : a.rho) m.set_zero();
        a.n_sum.assign(ng, 0.0);
        a.n_sum2.assign(ng, 0.0);
    }

    std::atomic<int> next{0};
    auto work = [&](int w) {
        TrajectoryOptions topts = opts;
        topts.snapshot_times.assign(t_grid.begin(), t_grid.end());
        topts.sample_every = 1 << 28;  // samples not needed here
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_traj) break;
            PhotonRecord rec =
                run_trajectory_pure(p, l_max, dt, t_final, derive_seed(master_seed, i), topts);
            for (int k = 0; k < ng; ++k) {
                const auto& psi = rec.snapshots[k].psi.amp;
                CMat& m = acc[w].rho[k];
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) m(r, c) += psi[r] * std::conj(psi[c]);
                double n = 0.0;
                for (int r = 0; r < d; ++r)
                    n += (basis == Basis::AtomFock ? r / 2 : r) * std::norm(psi[r]);
                acc[w].n_sum[k] += n;
                acc[w].n_sum2[k] += n * n;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();

    EnsembleResult res;
    res.t_grid = t_grid;
    res.n_mean.assign(ng, 0.0);
    res.n_se.assign(ng, 0.0);
    for (int k = 0; k < ng; ++k) {
        fock::DensityMatrix m(basis, l_max);
        double ns = 0.0, ns2 = 0.0;
        for (int w = 0; w < workers; ++w) {
            const cx* src = acc[w].rho[k].data();
            cx* dst = m.el.data();
            for (size_t q = 0; q < m.el.size(); ++q) dst[q] += src[q];
            ns += acc[w].n_sum[k];
            ns2 += acc[w].n_sum2[k];
        }
        simd::active().scale_real(m.el.size(), 1.0 / n_traj, m.el.data());
        res.rho.push_back(std::move(m));
        double mean = ns / n_traj;
        double var = std::max(0.0, ns2 / n_traj - mean * mean);
        res.n_mean[k] = mean;
        res.n_se[k] = n_traj > 1 ? std::sqrt(var / (n_traj - 1)) : 0.0;
    }
    return res;
}

namespace {

// L - eta*S of the thermal empty-cavity conditional evolution
void mixed_rhs(const CMat& rho, CMat& out, double kappa, double n_bar, double eta, int l_max) {
    const int D = l_max + 1;
    for (int m = 0; m < D; ++m) {
        for (int n = 0; n < D; ++n) {
            cx v = -((n_bar + 1.0) * (m + n) + n_bar * (m + n + 2.0)) * rho(m, n);
            if (m + 1 < D && n + 1 < D)
                v += 2.0 * (n_bar + (1.0 - eta)) * std::sqrt((m + 1.0) * (n + 1.0)) *
                     rho(m + 1, n + 1);
            if (m >= 1 && n >= 1)
                v += 2.0 * n_bar * std::sqrt(static_cast<double>(m) * n) * rho(m - 1, n - 1);
            out(m, n) = kappa * v;
        }
    }
}

// Fehlberg 4(5), advancing with the fifth-order weights
void rkf5_step(CMat& rho, CMat* k, CMat& stage, double dt, double kappa, double n_bar, double eta,
               int l_max) {
    static const double a[6][5] = {
        {0, 0, 0, 0, 0},
        {1.0 / 4, 0, 0, 0, 0},
        {3.0 / 32, 9.0 / 32, 0, 0, 0},
        {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
        {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104, 0},
        {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40}};
    static const double b5[6] = {16.0 / 135, 0.0, 6656.0 / 12825, 28561.0 / 56430, -9.0 / 50,
                                 2.0 / 55};
    const auto& K = simd::active();
    const size_t N = rho.size();
    for (int s = 0; s < 6; ++s) {
        if (s == 0) {
            mixed_rhs(rho, k[0], kappa, n_bar, eta, l_max);
        } else {
            stage = rho;
            for (int j = 0; j < s; ++j)
                if (a[s][j] != 0.0) K.axpy(N, cx{dt * a[s][j], 0.0}, k[j].data(), stage.data());
            mixed_rhs(stage, k[s], kappa, n_bar, eta, l_max);
        }
    }
    for (int s = 0; s < 6; ++s)
        if (b5[s] != 0.0) K.axpy(N, cx{dt * b5[s], 0.0}, k[s].data(), rho.data());
}

}  // namespace

MixedRecord run_trajectory_mixed(const models::ModelParams& p, int l_max, double dt,
                                 double t_final, uint64_t seed, const MixedOptions& opts) {
    p.validate();
    if (p.kind != models::ModelKind::JC || p.g != 0.0 || p.epsilon != 0.0)
        throw ValidationError("run_trajectory_mixed: empty-cavity scenario (g = eps = 0) required");
    MixedRecord rec;
    rec.params = p;
    rec.seed = seed;
    rec.dt = dt;
    rec.l_max = l_max;

    const int D = l_max + 1;
    fock::DensityMatrix rho(Basis::FockOnly, l_max);
    if (opts.initial) {
        if (opts.initial->basis != Basis::FockOnly || opts.initial->l_max != l_max)
            throw ValidationError("run_trajectory_mixed: initial state mismatch");
        rho = *opts.initial;
    } else {
        rho.el(0, 0) = 1.0;
    }
    rho.normalize();

    CMat k[6] = {CMat(D, D), CMat(D, D), CMat(D, D), CMat(D, D), CMat(D, D), CMat(D, D)};
    CMat stage(D, D);
    Rng rng(seed);
    const auto& K = simd::active();

    std::vector<double> snap_times = opts.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    size_t snap_idx = 0;
    size_t forced_idx = 0;
    uint64_t event_index = 0;

    const long n_steps = std::lround(t_final / dt);
    auto photon_mean = [&](const CMat& m) {
        double s = 0.0;
        for (int n = 0; n < D; ++n) s += n * m(n, n).real();
        return s;
    };
    rec.samples.push_back({0.0, photon_mean(rho.el)});

    for (long step = 0; step < n_steps; ++step) {
        const double t = step * dt;
        double n_cond = photon_mean(rho.el);
        bool click;
        if (opts.forced_click_times) {
            const auto& fc = *opts.forced_click_times;
            click = forced_idx < fc.size() && std::fabs(fc[forced_idx] - (t + dt)) < 0.5 * dt;
            if (click) ++forced_idx;
        } else {
            double p_rec = p.eta * 2.0 * p.kappa * n_cond * dt;
            click = p_rec > rng.uniform();
        }
        if (click) {
            // a rho a^dag / norm
            stage.set_zero();
            for (int m = 0; m + 1 < D; ++m)
                for (int n = 0; n + 1 < D; ++n)
                    stage(m, n) =
                        std::sqrt((m + 1.0) * (n + 1.0)) * rho.el(m + 1, n + 1);
            rho.el = stage;
            double tr = rho.trace_real();
            if (tr <= 0.0) throw NumericalError("run_trajectory_mixed: click on vacuum state");
            K.scale_real(rho.el.size(), 1.0 / tr, rho.el.data());
            double n_post = photon_mean(rho.el);
            Event ev;
            ev.t = t + dt;
            ev.ch = Channel::Cavity;
            ev.n_pre = n_cond;
            ev.n_post = n_post;
            ev.kind = classify_single(n_cond, n_post, seed, event_index++);
            rec.events.push_back(ev);
        } else {
            rkf5_step(rho.el, k, stage, dt, p.kappa, p.n_bar, p.eta, l_max);
            double tr = rho.trace_real();
            if (tr <= 0.0) throw NumericalError("run_trajectory_mixed: trace collapsed");
            K.scale_real(rho.el.size(), 1.0 / tr, rho.el.data());
        }
        const double t_next = (step + 1) * dt;
        if ((step + 1) % opts.sample_every == 0 || step + 1 == n_steps)
            rec.samples.push_back({t_next, photon_mean(rho.el)});
        while (snap_idx < snap_times.size() && snap_times[snap_idx] <= t_next + 1e-12) {
            fock::DensityMatrix snap = rho;
            snap.hermitize();
            rec.snapshots.push_back({t_next, std::move(snap)});
            ++snap_idx;
        }
    }
    return rec;
}

std::vector<QPeak> find_q_peaks(const fock::DensityMatrix& rho_cav,
                                const fock::PhaseGridSpec& spec, double rel_threshold) {
    fock::PhaseGrid g = fock::q_function(rho_cav, spec);
    double gmax = *std::max_element(g.values.begin(), g.values.end());
    std::vector<QPeak> peaks;
    const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
    const double dy = (spec.y_max - spec.y_min) / (spec.ny - 1);
    for (int iy = 1; iy + 1 < spec.ny; ++iy) {
        for (int ix = 1; ix + 1 < spec.nx; ++ix) {
            double v = g.at(iy, ix);
            if (v < rel_threshold * gmax) continue;
            bool is_max = true;
            for (int a = -1; a <= 1 && is_max; ++a)
                for (int b = -1; b <= 1; ++b) {
                    if (a == 0 && b == 0) continue;
                    if (g.at(iy + a, ix + b) >= v) {
                        is_max = false;
                        break;
                    }
                }
            if (!is_max) continue;
            // quadratic vertex refinement along each axis
            double vx0 = g.at(iy, ix - 1), vx1 = g.at(iy, ix + 1);
            double vy0 = g.at(iy - 1, ix), vy1 = g.at(iy + 1, ix);
            double ox = 0.5 * (vx0 - vx1) / (vx0 - 2.0 * v + vx1);
            double oy = 0.5 * (vy0 - vy1) / (vy0 - 2.0 * v + vy1);
            if (!std::isfinite(ox) || std::fabs(ox) > 1.0) ox = 0.0;
            if (!std::isfinite(oy) || std::fabs(oy) > 1.0) oy = 0.0;
            peaks.push_back({cx{g.x_at(ix) + ox * dx, g.y_at(iy) + oy * dy}, v});
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const QPeak& a, const QPeak& b) { return a.height > b.height; });
    return peaks;
}

}  // namespace qjump::mcwf
