#include "qjump/analytics.hpp"

#include <cmath>
#include <sstream>

#include "qjump/semiclassical.hpp"
#include "qjump/special.hpp"

namespace qjump::analytics {

using semiclassical::localization_intersection;
using semiclassical::null_survival;
using special::log_factorial;

cx coherent_overlap(cx alpha1, cx alpha2) {
    return std::exp(-0.5 * std::norm(alpha1) - 0.5 * std::norm(alpha2) +
                    std::conj(alpha1) * alpha2);
}

double initial_superposition_photon(const SuperpositionSpec& s) {
    cx ov = coherent_overlap(s.alpha1, s.alpha2);
    double num = std::norm(s.alpha1) + std::norm(s.alpha2) +
                 2.0 * std::real(std::conj(s.alpha1) * s.alpha2 * ov);
    double den = 2.0 * (1.0 + ov.real());
    return num / den;
}

double null_record_photon_exact(const SuperpositionSpec& s, double t) {
    if (t < 0.0) throw ValidationError("null_record_photon_exact: t >= 0 required");
    const double a1 = std::norm(s.alpha1), a2 = std::norm(s.alpha2);
    const double decay = std::exp(-t);
    const cx a1t = s.alpha1 * decay, a2t = s.alpha2 * decay;
    const double l1 = null_survival(a1, t), l2 = null_survival(a2, t);
    const double lc = null_survival(0.5 * a1, t) * null_survival(0.5 * a2, t);
    const cx ov = coherent_overlap(a1t, a2t);
    double num = std::norm(a1t) * l1 + std::norm(a2t) * l2 +
                 2.0 * lc * std::real(std::conj(a1t) * a2t * ov);
    double den = l1 + l2 + 2.0 * lc * ov.real();
    return num / den;
}

double null_record_photon_approx(const SuperpositionSpec& s, double t) {
    if (t < 0.0) throw ValidationError("null_record_photon_approx: t >= 0 required");
    const double a1 = std::norm(s.alpha1), a2 = std::norm(s.alpha2);
    const double d2 = std::exp(-2.0 * t);
    const double l1 = null_survival(a1, t), l2 = null_survival(a2, t);
    return (a1 * d2 * l1 + a2 * d2 * l2) / (l1 + l2);
}

fock::DensityMatrix null_record_density_matrix(const SuperpositionSpec& s, double t, int l_max) {
    if (t < 0.0) throw ValidationError("null_record_density_matrix: t >= 0 required");
    const double decay = std::exp(-t);
    const cx a[2] = {s.alpha1 * decay, s.alpha2 * decay};
    const double sqrt_lam[2] = {std::sqrt(null_survival(std::norm(s.alpha1), t)),
                                std::sqrt(null_survival(std::norm(s.alpha2), t))};
    // rho_mn = C^{-1} sum_ij sqrt(l_i l_j) <m|a_i(t)><a_j(t)|n>
    fock::DensityMatrix rho(fock::Basis::FockOnly, l_max);
    std::vector<cx> comp[2];
    for (int i = 0; i < 2; ++i) {
        comp[i].resize(l_max + 1);
        fock::StateVector ket = fock::coherent_ket(a[i], l_max);
        for (int n = 0; n <= l_max; ++n) comp[i][n] = sqrt_lam[i] * ket.amp[n];
    }
    for (int m = 0; m <= l_max; ++m)
        for (int n = 0; n <= l_max; ++n)
            rho.el(m, n) = (comp[0][m] + comp[1][m]) * std::conj(comp[0][n] + comp[1][n]);
    rho.normalize();
    return rho;
}

double poisson_count_prob(cx alpha, double t, int n) {
    if (n < 0 || t < 0) throw ValidationError("poisson_count_prob: n >= 0 and t >= 0 required");
    double mean = std::norm(alpha) * (1.0 - std::exp(-2.0 * t));
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(mean) - mean - log_factorial(n));
}

JumpOverlay build_jump_overlay(const RecordSamples& record, const SuperpositionSpec& s,
                               double window_lo, double window_hi) {
    if (record.t.size() != record.n.size() || record.t.size() < 2)
        throw ValidationError("build_jump_overlay: malformed record samples");
    JumpOverlay ov;
    ov.n_mid = initial_superposition_photon(s);
    ov.dt_end = localization_intersection(s.alpha1, s.alpha2);
    if (record.t.front() > window_lo || record.t.back() < window_hi)
        throw ValidationError("build_jump_overlay: record does not cover the window");

    // first downward crossing of n_mid inside the window
    bool found = false;
    for (size_t k = 1; k < record.t.size(); ++k) {
        if (record.t[k] < window_lo || record.t[k] > window_hi) continue;
        if (record.n[k - 1] >= ov.n_mid && record.n[k] < ov.n_mid) {
            // linear interpolation of the crossing time
            double f = (record.n[k - 1] - ov.n_mid) / (record.n[k - 1] - record.n[k]);
            ov.t_mid = record.t[k - 1] + f * (record.t[k] - record.t[k - 1]);
            found = true;
            break;
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "build_jump_overlay: no downward crossing of n_mid = " << ov.n_mid
            << " in window [" << window_lo << ", " << window_hi << "]";
        throw ValidationError(msg.str());
    }

    const double dt_sample = record.t[1] - record.t[0];
    long m = std::lround(std::ceil(ov.dt_end / dt_sample));
    for (long k = 0; k <= m; ++k) {
        double tau = std::min(k * dt_sample, ov.dt_end);
        double nf = null_record_photon_exact(s, tau);
        ov.forward_curve.t.push_back(ov.t_mid + tau);
        ov.forward_curve.n.push_back(nf);
    }
    for (long k = m; k >= 0; --k) {
        double tau = std::min(k * dt_sample, ov.dt_end);
        ov.inverted_curve.t.push_back(ov.t_mid - tau);
        ov.inverted_curve.n.push_back(2.0 * ov.n_mid - null_record_photon_exact(s, tau));
    }
    return ov;
}

}  // namespace qjump::analytics
