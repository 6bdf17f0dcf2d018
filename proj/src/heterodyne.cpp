#include "qjump/heterodyne.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qjump/rng.hpp"
#include "qjump/simd.hpp"
#include "qjump/special.hpp"

namespace qjump::heterodyne {

using fock::Basis;
using models::EffectiveGen;

namespace {

// deterministic drift of the normalized heterodyne SSE:
// f(psi) = (-iH - kappa n) psi + 2 kappa <a*> a psi - kappa |<a>|^2 psi
struct Drift {
    const EffectiveGen* eg;
    const models::ModelParams* p;
    std::vector<double> ar;  // sqrt(n+1)
    int da = 1;

    void lower(const cx* x, cx* y, int d) const {
        for (int i = 0; i + da < d; ++i) y[i] = ar[i] * x[i + da];
        for (int i = std::max(0, d - da); i < d; ++i) y[i] = cx{0.0, 0.0};
    }

    cx amean(const cx* x, int d, std::vector<cx>& buf) const {
        const auto& K = simd::active();
        buf.resize(d);
        lower(x, buf.data(), d);
        double n2 = K.nrm2(d, x);
        return K.dotc(d, x, buf.data()) / n2;
    }

    void operator()(double t, const cx* x, cx* y, std::vector<cx>& buf) const {
        const auto& K = simd::active();
        const int d = eg->dim;
        eg->gen.apply(x, y, p->epsilon_at(t));  // (-iH - kappa n) x
        buf.resize(d);
        lower(x, buf.data(), d);
        double n2 = K.nrm2(d, x);
        cx am = K.dotc(d, x, buf.data()) / n2;
        K.axpy(d, 2.0 * p->kappa * std::conj(am), buf.data(), y);
        K.axpy(d, cx{-p->kappa * std::norm(am), 0.0}, x, y);
    }
};

// Cash-Karp 5(4) embedded pair, adaptive over [t0, t0 + span]
void cash_karp_integrate(const Drift& f, double t0, double span, std::vector<cx>& psi,
                         double rtol) {
    static const double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
    static const double b21 = 1.0 / 5;
    static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                        b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static const double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
    static const double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                        d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336, d6 = c6 - 0.25;

    const int n = static_cast<int>(psi.size());
    const auto& K = simd::active();
    std::vector<cx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), st(n), buf;

    double t = 0.0;
    double h = span;
    int guard = 0;
    while (t < span) {
        if (++guard > 100000) throw NumericalError("heterodyne: step-size control stalled");
        h = std::min(h, span - t);
        f(t0 + t, psi.data(), k1.data(), buf);
        K.xpay(n, psi.data(), cx{h * b21, 0.0}, k1.data(), st.data());
        f(t0 + t + a2 * h, st.data(), k2.data(), buf);
        K.xpay(n, psi.data(), cx{h * b31, 0.0}, k1.data(), st.data());
        K.axpy(n, cx{h * b32, 0.0}, k2.data(), st.data());
        f(t0 + t + a3 * h, st.data(), k3.data(), buf);
        K.xpay(n, psi.data(), cx{h * b41, 0.0}, k1.data(), st.data());
        K.axpy(n, cx{h * b42, 0.0}, k2.data(), st.data());
        K.axpy(n, cx{h * b43, 0.0}, k3.data(), st.data());
        f(t0 + t + a4 * h, st.data(), k4.data(), buf);
        K.xpay(n, psi.data(), cx{h * b51, 0.0}, k1.data(), st.data());
        K.axpy(n, cx{h * b52, 0.0}, k2.data(), st.data());
        K.axpy(n, cx{h * b53, 0.0}, k3.data(), st.data());
        K.axpy(n, cx{h * b54, 0.0}, k4.data(), st.data());
        f(t0 + t + a5 * h, st.data(), k5.data(), buf);
        K.xpay(n, psi.data(), cx{h * b61, 0.0}, k1.data(), st.data());
        K.axpy(n, cx{h * b62, 0.0}, k2.data(), st.data());
        K.axpy(n, cx{h * b63, 0.0}, k3.data(), st.data());
        K.axpy(n, cx{h * b64, 0.0}, k4.data(), st.data());
        K.axpy(n, cx{h * b65, 0.0}, k5.data(), st.data());
        f(t0 + t + a6 * h, st.data(), k6.data(), buf);

        // error estimate
        double err2 = 0.0;
        for (int i = 0; i < n; ++i) {
            cx e = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
            err2 += std::norm(e);
        }
        double scale = std::sqrt(simd::active().nrm2(n, psi.data())) + 1e-12;
        double err = std::sqrt(err2) / (rtol * scale);
        if (err <= 1.0) {
            K.axpy(n, cx{h * c1, 0.0}, k1.data(), psi.data());
            K.axpy(n, cx{h * c3, 0.0}, k3.data(), psi.data());
            K.axpy(n, cx{h * c4, 0.0}, k4.data(), psi.data());
            K.axpy(n, cx{h * c6, 0.0}, k6.data(), psi.data());
            t += h;
            h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
            if (h < 1e-12 * span)
                throw NumericalError("heterodyne: Cash-Karp step size underflow");
        }
    }
}

}  // namespace

HeterodyneRecord run_heterodyne_trajectory(const models::ModelParams& p, int l_max, double dt,
                                           double t_final, uint64_t seed,
                                           const HeterodyneOptions& opts) {
    p.validate();
    if (p.n_bar != 0.0) throw ValidationError("run_heterodyne_trajectory: n_bar = 0 required");
    if (dt <= 0.0) throw ValidationError("run_heterodyne_trajectory: dt > 0 required");

    Basis basis = Basis::AtomFock;
    if (p.kind == models::ModelKind::Kerr || opts.force_fock_only) basis = Basis::FockOnly;
    EffectiveGen eg = models::make_effective_gen(p, l_max, basis);
    const int d = eg.dim;

    Drift f;
    f.eg = &eg;
    f.p = &p;
    f.da = basis == Basis::AtomFock ? 2 : 1;
    f.ar.assign(d, 0.0);
    for (int i = 0; i + f.da < d; ++i)
        f.ar[i] = std::sqrt((basis == Basis::AtomFock ? i / 2 : i) + 1.0);

    HeterodyneRecord rec;
    rec.params = p;
    rec.seed = seed;
    rec.dt = dt;
    rec.l_max = l_max;

    std::vector<cx> psi(d, cx{0.0, 0.0});
    if (opts.initial) {
        if (opts.initial->basis != basis || opts.initial->l_max != l_max)
            throw ValidationError("run_heterodyne_trajectory: initial state mismatch");
        psi = opts.initial->amp;
    } else {
        psi[0] = 1.0;
    }

    Rng rng(seed);
    const auto& K = simd::active();
    std::vector<cx> jbuf(d), abuf;
    std::vector<double> nvec(d);
    for (int i = 0; i < d; ++i) nvec[i] = basis == Basis::AtomFock ? i / 2 : i;

    const long n_steps = std::lround(t_final / dt);
    const double sq2k = std::sqrt(2.0 * p.kappa);
    rec.samples.push_back({0.0, K.wnrm2(d, nvec.data(), psi.data()), f.amean(psi.data(), d, abuf)});

    for (long step = 0; step < n_steps; ++step) {
        cash_karp_integrate(f, step * dt, dt, psi, opts.det_rtol);
        // Euler noise increment dZ (J - <J>) psi, J = sqrt(2 kappa) a
        double wx = rng.gauss() * std::sqrt(dt);
        double wy = rng.gauss() * std::sqrt(dt);
        cx dz = cx{wx, wy} / std::sqrt(2.0);
        rec.noise.sum_x += wx;
        rec.noise.sum_y += wy;
        rec.noise.sum_xx += wx * wx;
        rec.noise.sum_yy += wy * wy;
        rec.noise.sum_xy += wx * wy;
        rec.noise.n += 1;
        f.lower(psi.data(), jbuf.data(), d);
        double n2 = K.nrm2(d, psi.data());
        cx am = K.dotc(d, psi.data(), jbuf.data()) / n2;
        K.axpy(d, -am, psi.data(), jbuf.data());  // jbuf = (a - <a>) psi
        K.axpy(d, sq2k * dz, jbuf.data(), psi.data());
        double norm2 = K.nrm2(d, psi.data());
        if (!(norm2 > 0.0) || std::fabs(norm2 - 1.0) > 0.25)
            throw NumericalError("run_heterodyne_trajectory: norm drift too large, reduce dt");
        K.scale_real(d, 1.0 / std::sqrt(norm2), psi.data());

        if ((step + 1) % opts.sample_every == 0 || step + 1 == n_steps) {
            rec.samples.push_back({(step + 1) * dt, K.wnrm2(d, nvec.data(), psi.data()),
                                   f.amean(psi.data(), d, abuf)});
        }
    }
    fock::StateVector fin(basis, l_max);
    fin.amp = psi;
    rec.final_states.push_back(std::move(fin));
    return rec;
}

HeterodyneEnsemble heterodyne_ensemble(const models::ModelParams& p, int l_max, double dt,
                                       int n_traj, const std::vector<double>& t_grid,
                                       uint64_t master_seed, int workers,
                                       const HeterodyneOptions& opts) {
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw ValidationError("heterodyne_ensemble: t_grid must be ascending");
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n_traj));
    const int ng = static_cast<int>(t_grid.size());
    std::vector<std::vector<double>> n_sum(workers), n_sum2(workers);
    for (int w = 0; w < workers; ++w) {
        n_sum[w].assign(ng, 0.0);
        n_sum2[w].assign(ng, 0.0);
    }
    std::atomic<int> next{0};
    auto work = [&](int w) {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_traj) break;
            HeterodyneOptions o = opts;
            o.sample_every = 1;
            double t_final = t_grid.empty() ? 0.0 : t_grid.back();
            HeterodyneRecord rec = run_heterodyne_trajectory(p, l_max, dt, t_final,
                                                             derive_seed(master_seed, i), o);
            for (int k = 0; k < ng; ++k) {
                // nearest sample to the grid time
                size_t idx = std::min<size_t>(
                    rec.samples.size() - 1,
                    static_cast<size_t>(std::lround(t_grid[k] / dt)));
                double n = rec.samples[idx].n_cond;
                n_sum[w][k] += n;
                n_sum2[w][k] += n * n;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
    HeterodyneEnsemble out;
    out.t_grid = t_grid;
    out.n_mean.assign(ng, 0.0);
    out.n_se.assign(ng, 0.0);
    for (int k = 0; k < ng; ++k) {
        double s = 0.0, s2 = 0.0;
        for (int w = 0; w < workers; ++w) {
            s += n_sum[w][k];
            s2 += n_sum2[w][k];
        }
        double mean = s / n_traj;
        double var = std::max(0.0, s2 / n_traj - mean * mean);
        out.n_mean[k] = mean;
        out.n_se[k] = n_traj > 1 ? std::sqrt(var / (n_traj - 1)) : 0.0;
    }
    return out;
}

namespace {

// w = e^{q a} psi0 assembled from scratch (triangular series)
void rebuild_displaced(const std::vector<cx>& psi0, cx q, std::vector<cx>& w) {
    const int D = static_cast<int>(psi0.size());
    w.assign(D, cx{0.0, 0.0});
    for (int n = 0; n < D; ++n) {
        cx coef{1.0, 0.0};
        cx acc = psi0[n];
        for (int k = 1; n + k < D; ++k) {
            coef *= q * std::sqrt(static_cast<double>(n + k)) / static_cast<double>(k);
            acc += coef * psi0[n + k];
        }
        w[n] = acc;
    }
}

// w <- e^{dq a} w by short series
void displace_increment(std::vector<cx>& w, cx dq, std::vector<cx>& tmp) {
    const int D = static_cast<int>(w.size());
    tmp = w;
    double wmax = 0.0;
    for (const auto& v : w) wmax = std::max(wmax, std::abs(v));
    for (int k = 1; k <= 60; ++k) {
        // tmp <- dq * a * tmp / k
        for (int i = 0; i + 1 < D; ++i) tmp[i] = dq * std::sqrt(i + 1.0) * tmp[i + 1] / double(k);
        tmp[D - 1] = cx{0.0, 0.0};
        double tmax = 0.0;
        for (int i = 0; i < D; ++i) {
            w[i] += tmp[i];
            tmax = std::max(tmax, std::abs(tmp[i]));
        }
        if (tmax < 1e-15 * std::max(wmax, 1e-300)) break;
    }
}

}  // namespace

ChargeRecord charge_record(const fock::StateVector& initial, uint64_t seed,
                           const ChargeOptions& opts) {
    if (initial.basis != Basis::FockOnly)
        throw ValidationError("charge_record: Fock-only initial state required");
    const int D = initial.dim();
    std::vector<cx> psi0 = initial.amp;
    {
        double n2 = simd::active().nrm2(psi0.size(), psi0.data());
        if (n2 <= 0.0) throw ValidationError("charge_record: zero initial state");
        simd::active().scale_real(psi0.size(), 1.0 / std::sqrt(n2), psi0.data());
    }

    Rng rng(seed);
    ChargeRecord rec;
    cx q{0.0, 0.0};
    std::vector<cx> w = psi0, tmp;
    std::vector<double> dnu_pow(D);
    const double dnu = opts.nu_max / opts.nu_steps;
    const double q_limit = 2.0 * std::sqrt(static_cast<double>(initial.l_max)) + 6.0;

    rec.trace.push_back({0.0, q});
    for (int step = 0; step < opts.nu_steps; ++step) {
        const double nu = step * dnu;
        // d_n = (1-nu)^n
        const double base = 1.0 - nu;
        dnu_pow[0] = 1.0;
        for (int n = 1; n < D; ++n) dnu_pow[n] = dnu_pow[n - 1] * base;
        // drift = <a w|D|w> / <w|D|w>
        cx num{0.0, 0.0};
        double den = 0.0;
        for (int n = 0; n < D; ++n) {
            den += dnu_pow[n] * std::norm(w[n]);
            if (n + 1 < D)
                num += dnu_pow[n] * std::sqrt(n + 1.0) * std::conj(w[n + 1]) * w[n];
        }
        if (!(den > 0.0) || !std::isfinite(den))
            throw NumericalError("charge_record: potential-gradient overflow");
        cx drift = num / den;
        double gx = rng.gauss(), gy = rng.gauss();
        cx dzeta = std::sqrt(dnu / 2.0) * cx{gx, gy};
        cx dq = drift * dnu + dzeta;
        q += dq;
        if (std::abs(q) > q_limit)
            throw NumericalError("charge_record: charge escaped the truncation-supported region");
        if ((step + 1) % 250 == 0) {
            rebuild_displaced(psi0, q, w);
        } else {
            displace_increment(w, dq, tmp);
        }
        // keep w in range (any rescaling cancels in the drift ratio)
        double wmax = 0.0;
        for (const auto& v : w) wmax = std::max(wmax, std::abs(v));
        if (wmax > 1e100 || (wmax > 0.0 && wmax < 1e-100))
            simd::active().scale_real(w.size(), 1.0 / wmax, w.data());
        if ((step + 1) % opts.trace_every == 0 || step + 1 == opts.nu_steps)
            rec.trace.push_back({(step + 1) * dnu, q});
    }
    rec.q_tilde = q;
    return rec;
}

ChargeRecord charge_record_mixture(const std::vector<double>& weights,
                                   const std::vector<cx>& alphas, uint64_t seed,
                                   const ChargeOptions& opts) {
    if (weights.size() != alphas.size() || weights.empty())
        throw ValidationError("charge_record_mixture: weights/alphas mismatch");
    const int M = static_cast<int>(weights.size());
    Rng rng(seed);
    ChargeRecord rec;
    cx q{0.0, 0.0};
    const double dnu = opts.nu_max / opts.nu_steps;
    std::vector<double> logw(M);
    for (int j = 0; j < M; ++j) {
        if (weights[j] <= 0.0) throw ValidationError("charge_record_mixture: weights must be > 0");
        logw[j] = std::log(weights[j]);
    }
    rec.trace.push_back({0.0, q});
    for (int step = 0; step < opts.nu_steps; ++step) {
        const double nu = step * dnu;
        // term_j = w_j exp(2 Re(q alpha_j) - nu |alpha_j|^2)
        double lmax = -1e300;
        static thread_local std::vector<double> lt;
        lt.assign(M, 0.0);
        for (int j = 0; j < M; ++j) {
            lt[j] = logw[j] + 2.0 * (q * alphas[j]).real() - nu * std::norm(alphas[j]);
            lmax = std::max(lmax, lt[j]);
        }
        cx num{0.0, 0.0};
        double den = 0.0;
        for (int j = 0; j < M; ++j) {
            double e = std::exp(lt[j] - lmax);
            den += e;
            num += e * std::conj(alphas[j]);
        }
        cx drift = num / den;
        double gx = rng.gauss(), gy = rng.gauss();
        q += drift * dnu + std::sqrt(dnu / 2.0) * cx{gx, gy};
        if ((step + 1) % opts.trace_every == 0 || step + 1 == opts.nu_steps)
            rec.trace.push_back({(step + 1) * dnu, q});
    }
    rec.q_tilde = q;
    // localize to the nearest meter amplitude
    int best = 0;
    double bd = 1e300;
    for (int j = 0; j < M; ++j) {
        double dist = std::abs(alphas[j] - std::conj(q));
        if (dist < bd) {
            bd = dist;
            best = j;
        }
    }
    rec.branch = best;
    return rec;
}

DistributionReport charge_distribution_test(const fock::StateVector& initial, int n_samples,
                                            uint64_t master_seed, int workers,
                                            const ChargeOptions& opts) {
    if (n_samples < 1000)
        throw ValidationError("charge_distribution_test: n_samples >= 1000 required");
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, workers);

    std::vector<cx> finals(n_samples);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_samples) break;
            finals[i] = std::conj(charge_record(initial, derive_seed(master_seed, i), opts).q_tilde);
        }
    };
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();

    // Q function of the initial state defines the expected bin masses
    fock::DensityMatrix rho = fock::projector(initial);
    double nbar = fock::expectation(fock::OpTag::PhotonNumber, initial).real();
    double R = 1.5 * std::sqrt(std::max(nbar, 1.0)) + 3.0;
    const int nb = 24;
    const double h = 2.0 * R / nb;

    std::vector<double> expected(nb * nb, 0.0);
    std::vector<long> observed(nb * nb, 0);
    std::vector<cx> scratch;
    for (int by = 0; by < nb; ++by) {
        for (int bx = 0; bx < nb; ++bx) {
            // 2x2 midpoint subsample of the Q function over the bin
            double e = 0.0;
            for (int sy = 0; sy < 2; ++sy)
                for (int sx = 0; sx < 2; ++sx) {
                    double x = -R + (bx + 0.25 + 0.5 * sx) * h;
                    double y = -R + (by + 0.25 + 0.5 * sy) * h;
                    e += fock::q_function_point(rho, cx{x, y}, scratch);
                }
            expected[by * nb + bx] = 0.25 * e * h * h * n_samples;
        }
    }
    long n_outside = 0;
    for (const auto& z : finals) {
        int bx = static_cast<int>(std::floor((z.real() + R) / h));
        int by = static_cast<int>(std::floor((z.imag() + R) / h));
        if (bx < 0 || bx >= nb || by < 0 || by >= nb) {
            ++n_outside;
            continue;
        }
        ++observed[by * nb + bx];
    }

    // pool low-expectation bins (and everything outside the window) into a tail
    DistributionReport rep;
    rep.n_samples = n_samples;
    double chi2 = 0.0;
    int used = 0;
    double tail_expected = 0.0;
    long tail_observed = n_outside;
    double mass_in_bins = 0.0;
    for (int i = 0; i < nb * nb; ++i) {
        if (expected[i] >= 5.0) {
            double d = observed[i] - expected[i];
            chi2 += d * d / expected[i];
            mass_in_bins += expected[i];
            ++used;
        } else {
            tail_expected += expected[i];
            tail_observed += observed[i];
        }
    }
    tail_expected += std::max(0.0, n_samples - mass_in_bins - tail_expected);
    if (tail_expected >= 5.0) {
        double d = tail_observed - tail_expected;
        chi2 += d * d / tail_expected;
        ++used;
    }
    rep.chi2 = chi2;
    rep.bins_used = used;
    rep.dof = std::max(1, used - 1);
    rep.p_value = special::chi2_sf(chi2, rep.dof);
    return rep;
}

int projective_readout(const std::vector<cx>& coefficients,
                       const std::vector<cx>& meter_amplitudes, uint64_t seed,
                       const ChargeOptions& opts) {
    if (coefficients.size() != meter_amplitudes.size() || coefficients.empty())
        throw ValidationError("projective_readout: coefficient/meter size mismatch");
    double norm = 0.0;
    for (const auto& c : coefficients) norm += std::norm(c);
    if (std::fabs(norm - 1.0) > 1e-6)
        throw ValidationError("projective_readout: coefficients must satisfy sum |c_j|^2 = 1");
    for (size_t i = 0; i < meter_amplitudes.size(); ++i)
        for (size_t j = i + 1; j < meter_amplitudes.size(); ++j)
            if (std::norm(meter_amplitudes[i] - meter_amplitudes[j]) < 9.0)
                warn("projective_readout: meter amplitudes closer than |da|^2 = 9, "
                     "branching unreliable");
    if (coefficients.size() == 1) return 0;
    std::vector<double> weights(coefficients.size());
    for (size_t j = 0; j < coefficients.size(); ++j)
        weights[j] = std::max(std::norm(coefficients[j]), 1e-300);
    return charge_record_mixture(weights, meter_amplitudes, seed, opts).branch;
}

}  // namespace qjump::heterodyne
