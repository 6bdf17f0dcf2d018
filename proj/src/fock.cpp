#include "qjump/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "qjump/simd.hpp"
#include "qjump/special.hpp"

namespace qjump::fock {

using special::log_factorial;

double StateVector::norm2() const { return simd::active().nrm2(amp.size(), amp.data()); }
double StateVector::norm() const { return std::sqrt(norm2()); }

void StateVector::normalize() {
    double n = norm();
    if (n <= 0.0) throw NumericalError("normalize: zero-norm state");
    simd::active().scale_real(amp.size(), 1.0 / n, amp.data());
}

double DensityMatrix::trace_real() const {
    double t = 0.0;
    for (int i = 0; i < dim(); ++i) t += el(i, i).real();
    return t;
}

void DensityMatrix::normalize() {
    double t = trace_real();
    if (t <= 0.0) throw NumericalError("DensityMatrix::normalize: nonpositive trace");
    simd::active().scale_real(el.size(), 1.0 / t, el.data());
}

void DensityMatrix::hermitize() {
    for (int i = 0; i < dim(); ++i) {
        el(i, i) = cx{el(i, i).real(), 0.0};
        for (int j = i + 1; j < dim(); ++j) {
            cx v = 0.5 * (el(i, j) + std::conj(el(j, i)));
            el(i, j) = v;
            el(j, i) = std::conj(v);
        }
    }
}

double DensityMatrix::hermiticity_residual() const {
    double r = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) r = std::max(r, std::abs(el(i, j) - std::conj(el(j, i))));
    return r;
}

DensityMatrix projector(const StateVector& psi) {
    DensityMatrix rho(psi.basis, psi.l_max);
    int d = psi.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho.el(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
    return rho;
}

PhaseGridSpec default_grid(double max_abs_alpha) {
    double r = 1.5 * std::max(max_abs_alpha, 1.0);
    return {-r, r, -r, r, 121, 121};
}

double PhaseGrid::x_at(int ix) const {
    return spec.nx == 1 ? spec.x_min
                        : spec.x_min + (spec.x_max - spec.x_min) * ix / (spec.nx - 1);
}
double PhaseGrid::y_at(int iy) const {
    return spec.ny == 1 ? spec.y_min
                        : spec.y_min + (spec.y_max - spec.y_min) * iy / (spec.ny - 1);
}
double PhaseGrid::cell_area() const {
    double dx = spec.nx > 1 ? (spec.x_max - spec.x_min) / (spec.nx - 1) : 1.0;
    double dy = spec.ny > 1 ? (spec.y_max - spec.y_min) / (spec.ny - 1) : 1.0;
    return dx * dy;
}
double PhaseGrid::sum_times_area() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area();
}

void PhaseGrid::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path);
    out << "x,y,value\n";
    char buf[96];
    for (int iy = 0; iy < spec.ny; ++iy) {
        for (int ix = 0; ix < spec.nx; ++ix) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", x_at(ix), y_at(iy), at(iy, ix));
            out << buf;
        }
    }
}

namespace {

// c_n = e^{-|a|^2/2} a^n / sqrt(n!), assembled in log space
void coherent_amplitudes(cx alpha, int l_max, cx* out) {
    if (alpha == cx{0.0, 0.0}) {
        std::fill(out, out + l_max + 1, cx{0.0, 0.0});
        out[0] = 1.0;
        return;
    }
    double la = std::log(std::abs(alpha));
    double ph = std::arg(alpha);
    double a2 = std::norm(alpha);
    for (int n = 0; n <= l_max; ++n) {
        double mag = -0.5 * a2 + n * la - 0.5 * log_factorial(n);
        out[n] = std::polar(std::exp(mag), n * ph);
    }
}

}  // namespace

StateVector coherent_ket(cx alpha, int l_max) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw ValidationError("coherent_ket: non-finite alpha");
    if (l_max < 0) throw ValidationError("coherent_ket: negative l_max");
    if (std::norm(alpha) > 0.5 * l_max)
        warn("coherent_ket: |alpha|^2 > l_max/2, truncation unsafe");
    StateVector psi(Basis::FockOnly, l_max);
    coherent_amplitudes(alpha, l_max, psi.amp.data());
    return psi;
}

StateVector superposition_ket(cx alpha1, cx alpha2, int l_max) {
    StateVector a = coherent_ket(alpha1, l_max);
    StateVector b = coherent_ket(alpha2, l_max);
    for (int n = 0; n <= l_max; ++n) a.amp[n] += b.amp[n];
    a.normalize();
    return a;
}

double q_function_point(const DensityMatrix& rho, cx alpha, std::vector<cx>& scratch) {
    const int d = rho.dim();
    scratch.resize(2 * d);
    cx* c = scratch.data();
    cx* y = scratch.data() + d;
    coherent_amplitudes(alpha, rho.l_max, c);
    const auto& K = simd::active();
    for (int m = 0; m < d; ++m) y[m] = K.dotu(d, rho.el.row(m), c);
    return K.dotc(d, c, y).real() / M_PI;
}

PhaseGrid q_function(const DensityMatrix& rho, const PhaseGridSpec& spec) {
    if (rho.basis != Basis::FockOnly) throw ValidationError("q_function: Fock-only basis required");
    for (double v : {spec.x_min, spec.x_max, spec.y_min, spec.y_max})
        if (!std::isfinite(v)) throw ValidationError("q_function: non-finite grid");
    PhaseGrid g;
    g.spec = spec;
    g.values.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);
    std::vector<cx> scratch;
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            g.at(iy, ix) = q_function_point(rho, cx{g.x_at(ix), g.y_at(iy)}, scratch);
    return g;
}

// W(alpha) = (2/pi) e^{-2|a|^2} [ sum_m rho_mm (-1)^m L_m(4|a|^2)
//   + 2 Re sum_{m<n} rho_mn (-1)^m sqrt(m!/n!) (2a)^{n-m} L_m^{(n-m)}(4|a|^2) ]
double wigner_point(const DensityMatrix& rho, cx alpha, std::vector<double>& lag) {
    const int L = rho.l_max;
    const double x2 = 4.0 * std::norm(alpha);
    const double l2a = (alpha == cx{0.0, 0.0}) ? 0.0 : std::log(2.0 * std::abs(alpha));
    const double ph = (alpha == cx{0.0, 0.0}) ? 0.0 : std::arg(alpha);
    lag.resize(L + 1);
    double acc = 0.0;
    for (int k = 0; k <= L; ++k) {
        special::laguerre_column(L - k, k, x2, lag.data());
        if (k == 0) {
            double s = 0.0, sign = 1.0;
            for (int m = 0; m <= L; ++m, sign = -sign) s += sign * rho.el(m, m).real() * lag[m];
            acc += s * std::exp(-0.5 * x2);
        } else {
            if (alpha == cx{0.0, 0.0}) continue;
            cx s{0.0, 0.0};
            double sign = 1.0;
            for (int m = 0; m + k <= L; ++m, sign = -sign) {
                double mag = 0.5 * (log_factorial(m) - log_factorial(m + k)) + k * l2a - 0.5 * x2;
                s += rho.el(m, m + k) * (sign * lag[m]) * std::polar(std::exp(mag), k * ph);
            }
            acc += 2.0 * s.real();
        }
    }
    return acc * (2.0 / M_PI);
}

PhaseGrid wigner_function(const DensityMatrix& rho, const PhaseGridSpec& spec) {
    if (rho.basis != Basis::FockOnly)
        throw ValidationError("wigner_function: Fock-only basis required");
    PhaseGrid g;
    g.spec = spec;
    g.values.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);
    std::vector<double> lag;
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            g.at(iy, ix) = wigner_point(rho, cx{g.x_at(ix), g.y_at(iy)}, lag);
    return g;
}

DensityMatrix partial_trace_atom(const DensityMatrix& rho) {
    if (rho.basis != Basis::AtomFock)
        throw ValidationError("partial_trace_atom: atom-Fock basis required");
    DensityMatrix rc(Basis::FockOnly, rho.l_max);
    for (int m = 0; m <= rho.l_max; ++m)
        for (int n = 0; n <= rho.l_max; ++n)
            rc.el(m, n) = rho.el(2 * m, 2 * n) + rho.el(2 * m + 1, 2 * n + 1);
    return rc;
}

cx expectation(OpTag tag, const StateVector& psi) {
    const int L = psi.l_max;
    const auto& c = psi.amp;
    const bool atom = psi.basis == Basis::AtomFock;
    double n2 = simd::active().nrm2(c.size(), c.data());
    cx acc{0.0, 0.0};
    switch (tag) {
        case OpTag::PhotonNumber: {
            double s = 0.0;
            for (int n = 0; n <= L; ++n) {
                if (atom)
                    s += n * (std::norm(c[2 * n]) + std::norm(c[2 * n + 1]));
                else
                    s += n * std::norm(c[n]);
            }
            return cx{s / n2, 0.0};
        }
        case OpTag::FieldAmplitude: {
            for (int n = 0; n + 1 <= L; ++n) {
                double r = std::sqrt(n + 1.0);
                if (atom) {
                    acc += r * (std::conj(c[2 * n]) * c[2 * (n + 1)] +
                                std::conj(c[2 * n + 1]) * c[2 * (n + 1) + 1]);
                } else {
                    acc += r * std::conj(c[n]) * c[n + 1];
                }
            }
            return acc / n2;
        }
        case OpTag::AtomicInversion: {
            if (!atom) throw ValidationError("expectation: atomic operator on Fock-only state");
            double s = 0.0;
            for (int n = 0; n <= L; ++n) s += std::norm(c[2 * n + 1]) - std::norm(c[2 * n]);
            return cx{s / n2, 0.0};
        }
        case OpTag::AtomicPolarization: {
            if (!atom) throw ValidationError("expectation: atomic operator on Fock-only state");
            for (int n = 0; n <= L; ++n) acc += std::conj(c[2 * n]) * c[2 * n + 1];
            return acc / n2;
        }
    }
    return acc;
}

cx expectation(OpTag tag, const DensityMatrix& rho) {
    const int L = rho.l_max;
    const bool atom = rho.basis == Basis::AtomFock;
    cx acc{0.0, 0.0};
    switch (tag) {
        case OpTag::PhotonNumber: {
            double s = 0.0;
            for (int n = 0; n <= L; ++n) {
                if (atom)
                    s += n * (rho.el(2 * n, 2 * n).real() + rho.el(2 * n + 1, 2 * n + 1).real());
                else
                    s += n * rho.el(n, n).real();
            }
            return cx{s, 0.0};
        }
        case OpTag::FieldAmplitude: {
            // Tr[rho a] = sum over the first superdiagonal blocks
            for (int n = 0; n + 1 <= L; ++n) {
                double r = std::sqrt(n + 1.0);
                if (atom) {
                    acc += r * (rho.el(2 * (n + 1), 2 * n) + rho.el(2 * (n + 1) + 1, 2 * n + 1));
                } else {
                    acc += r * rho.el(n + 1, n);
                }
            }
            return acc;
        }
        case OpTag::AtomicInversion: {
            if (!atom) throw ValidationError("expectation: atomic operator on Fock-only state");
            double s = 0.0;
            for (int n = 0; n <= L; ++n)
                s += rho.el(2 * n + 1, 2 * n + 1).real() - rho.el(2 * n, 2 * n).real();
            return cx{s, 0.0};
        }
        case OpTag::AtomicPolarization: {
            if (!atom) throw ValidationError("expectation: atomic operator on Fock-only state");
            for (int n = 0; n <= L; ++n) acc += rho.el(2 * n + 1, 2 * n);
            return acc;
        }
    }
    return acc;
}

}  // namespace qjump::fock
