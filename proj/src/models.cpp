#include "qjump/models.hpp"

#include <cmath>

#include "qjump/simd.hpp"

namespace qjump::models {

using fock::Basis;

void ModelParams::validate() const {
    if (g < 0 || epsilon < 0 || gamma < 0 || n_bar < 0)
        throw ValidationError("ModelParams: g, epsilon, gamma, n_bar must be >= 0");
    if (eta < 0 || eta > 1) throw ValidationError("ModelParams: eta must lie in [0,1]");
    if (kappa <= 0) throw ValidationError("ModelParams: kappa must be positive");
    if (kind == ModelKind::JC && chi != 0.0)
        throw ValidationError("ModelParams: chi must be absent in JC mode");
    if (kind == ModelKind::Kerr && g != 0.0)
        throw ValidationError("ModelParams: g must be absent in Kerr mode");
    if (has_ramp && ramp_duration <= 0)
        throw ValidationError("ModelParams: ramp duration must be positive");
}

CMat jc_hamiltonian(const ModelParams& p, int l_max) {
    if (p.kind != ModelKind::JC) throw ValidationError("jc_hamiltonian: JC mode required");
    p.validate();
    const int D = 2 * (l_max + 1);
    CMat H(D, D);
    H.set_zero();
    const cx I{0.0, 1.0};
    for (int n = 0; n <= l_max; ++n) {
        for (int s = 0; s < 2; ++s) H(2 * n + s, 2 * n + s) = -p.delta_omega * (n + s);
        if (n + 1 <= l_max) {
            double r = std::sqrt(n + 1.0);
            // i g (a^dag s- - a s+): couples |n,+> and |n+1,->
            H(2 * (n + 1), 2 * n + 1) = I * p.g * r;
            H(2 * n + 1, 2 * (n + 1)) = -I * p.g * r;
            // i eps (a^dag - a)
            for (int s = 0; s < 2; ++s) {
                H(2 * (n + 1) + s, 2 * n + s) = I * p.epsilon * r;
                H(2 * n + s, 2 * (n + 1) + s) = -I * p.epsilon * r;
            }
        }
    }
    return H;
}

CMat jc_effective_hamiltonian(const ModelParams& p, int l_max) {
    CMat H = jc_hamiltonian(p, l_max);
    const cx I{0.0, 1.0};
    for (int n = 0; n <= l_max; ++n)
        for (int s = 0; s < 2; ++s)
            H(2 * n + s, 2 * n + s) -= I * (p.kappa * n + 0.5 * p.gamma * s);
    return H;
}

void BandedGen::apply(const cx* x, cx* y, double eps) const {
    const auto& K = simd::active();
    std::fill(y, y + dim, cx{0.0, 0.0});
    K.vmuladd(dim, diag.data(), x, y);
    auto add_band = [&](const Band& b, cx scale) {
        int lo = std::max(0, -b.off);
        int hi = std::min(dim, dim - b.off);
        if (hi <= lo) return;
        if (scale == cx{1.0, 0.0}) {
            K.vmuladd(hi - lo, b.v.data() + lo, x + lo + b.off, y + lo);
        } else {
            for (int i = lo; i < hi; ++i) y[i] += scale * b.v[i] * x[i + b.off];
        }
    };
    for (const auto& b : bands) add_band(b, cx{1.0, 0.0});
    for (const auto& b : drive_bands)
        if (eps != 0.0) add_band(b, cx{eps, 0.0});
}

void BandedGen::left_accumulate(const CMat& rho, CMat& out, double eps) const {
    const auto& K = simd::active();
    const int D = dim;
    for (int i = 0; i < D; ++i) K.axpy(D, diag[i], rho.row(i), out.row(i));
    auto add_band = [&](const Band& b, double scale) {
        int lo = std::max(0, -b.off);
        int hi = std::min(D, D - b.off);
        for (int i = lo; i < hi; ++i) {
            cx c = scale * b.v[i];
            if (c != cx{0.0, 0.0}) K.axpy(D, c, rho.row(i + b.off), out.row(i));
        }
    };
    for (const auto& b : bands) add_band(b, 1.0);
    if (eps != 0.0)
        for (const auto& b : drive_bands) add_band(b, eps);
}

void BandedGen::refresh_conj() {
    diag_conj.resize(diag.size());
    for (size_t j = 0; j < diag.size(); ++j) diag_conj[j] = std::conj(diag[j]);
    for (auto* bl : {&bands, &drive_bands})
        for (auto& b : *bl)
            for (size_t i = 0; i < b.v.size(); ++i) b.v_conj[i] = std::conj(b.v[i]);
}

void BandedGen::right_dagger_accumulate(const CMat& rho, CMat& out, double eps) const {
    const auto& K = simd::active();
    const int D = dim;
    // (rho G^dag)[i, j] = sum_off conj(v_off[j]) rho[i, j+off] + conj(diag[j]) rho[i, j]
    for (int i = 0; i < D; ++i) K.vmuladd(D, diag_conj.data(), rho.row(i), out.row(i));
    auto add_band = [&](const Band& b, double scale) {
        int lo = std::max(0, -b.off);
        int hi = std::min(D, D - b.off);
        if (hi <= lo) return;
        for (int i = 0; i < D; ++i) {
            const cx* src = rho.row(i) + lo + b.off;
            cx* dst = out.row(i) + lo;
            if (scale == 1.0) {
                K.vmuladd(hi - lo, b.v_conj.data() + lo, src, dst);
            } else {
                for (int j = 0; j < hi - lo; ++j) dst[j] += scale * b.v_conj[lo + j] * src[j];
            }
        }
    };
    for (const auto& b : bands) add_band(b, 1.0);
    if (eps != 0.0)
        for (const auto& b : drive_bands) add_band(b, eps);
}

namespace {

BandedGen::Band make_band(int dim, int off) {
    BandedGen::Band b;
    b.off = off;
    b.v.assign(dim, cx{0.0, 0.0});
    b.v_conj.assign(dim, cx{0.0, 0.0});
    return b;
}

void finish_band(BandedGen::Band& b) {
    for (size_t i = 0; i < b.v.size(); ++i) b.v_conj[i] = std::conj(b.v[i]);
}

// G = -iH for the JC Hamiltonian, drive split out with unit epsilon
BandedGen jc_generator(const ModelParams& p, int l_max) {
    const int D = 2 * (l_max + 1);
    BandedGen g;
    g.dim = D;
    g.diag.assign(D, cx{0.0, 0.0});
    const cx I{0.0, 1.0};
    for (int n = 0; n <= l_max; ++n)
        for (int s = 0; s < 2; ++s) g.diag[2 * n + s] = -I * (-p.delta_omega * (n + s));
    if (p.g != 0.0) {
        auto up = make_band(D, -1);   // G[2(n+1), 2n+1]
        auto down = make_band(D, 1);  // G[2n+1, 2(n+1)]
        for (int n = 0; n + 1 <= l_max; ++n) {
            double r = std::sqrt(n + 1.0);
            up.v[2 * (n + 1)] = -I * (I * p.g * r);
            down.v[2 * n + 1] = -I * (-I * p.g * r);
        }
        finish_band(up);
        finish_band(down);
        g.bands.push_back(std::move(up));
        g.bands.push_back(std::move(down));
    }
    {
        auto raise = make_band(D, -2), lower = make_band(D, 2);
        for (int n = 0; n + 1 <= l_max; ++n) {
            double r = std::sqrt(n + 1.0);
            for (int s = 0; s < 2; ++s) {
                raise.v[2 * (n + 1) + s] = -I * (I * r);   // unit-eps a^dag part
                lower.v[2 * n + s] = -I * (-I * r);        // unit-eps a part
            }
        }
        finish_band(raise);
        finish_band(lower);
        g.drive_bands.push_back(std::move(raise));
        g.drive_bands.push_back(std::move(lower));
    }
    g.refresh_conj();
    return g;
}

// G = -iH for the Kerr Hamiltonian -dw n + chi n(n-1) + i eps (a^dag - a)
BandedGen kerr_generator(const ModelParams& p, int l_max) {
    const int D = l_max + 1;
    BandedGen g;
    g.dim = D;
    g.diag.assign(D, cx{0.0, 0.0});
    const cx I{0.0, 1.0};
    for (int n = 0; n < D; ++n)
        g.diag[n] = -I * (-p.delta_omega * n + p.chi * n * (n - 1.0));
    auto raise = make_band(D, -1), lower = make_band(D, 1);
    for (int n = 0; n + 1 <= l_max; ++n) {
        double r = std::sqrt(n + 1.0);
        raise.v[n + 1] = -I * (I * r);
        lower.v[n] = -I * (-I * r);
    }
    finish_band(raise);
    finish_band(lower);
    g.drive_bands.push_back(std::move(raise));
    g.drive_bands.push_back(std::move(lower));
    g.refresh_conj();
    return g;
}

}  // namespace

void MasterEq::rhs(const CMat& rho, CMat& out) const {
    const auto& K = simd::active();
    const int D = dim;
    out.set_zero();
    const double eps = params.epsilon;
    gen.left_accumulate(rho, out, eps);
    gen.right_dagger_accumulate(rho, out, eps);
    // cavity: 2 kappa a rho a^dag  (thermal recycling handled in the mixed path)
    const double twok = 2.0 * params.kappa;
    for (int i = 0; i + a_off < D; ++i) {
        K.wmuladd(D - a_off, cx{twok * ar[i], 0.0}, ar.data(), rho.row(i + a_off) + a_off,
                  out.row(i));
    }
    // drift: -(kappa n_i + g/2 s_i + kappa n_j + g/2 s_j) rho_ij
    for (int i = 0; i < D; ++i) {
        K.axpy(D, cx{-drift[i], 0.0}, rho.row(i), out.row(i));
        K.wmuladd(D, cx{-1.0, 0.0}, drift.data(), rho.row(i), out.row(i));
    }
    // atomic recycling gamma s- rho s+
    if (params.gamma > 0.0 && basis == Basis::AtomFock) {
        for (int n = 0; 2 * n < D; ++n)
            for (int m = 0; 2 * m < D; ++m)
                out(2 * n, 2 * m) += params.gamma * rho(2 * n + 1, 2 * m + 1);
    }
}

double MasterEq::spectral_radius_estimate() const {
    // Gershgorin-style bound on the Hamiltonian spread plus dissipator decay
    double hmax = 0.0;
    for (int i = 0; i < dim; ++i) {
        double row = std::abs(gen.diag[i]);
        for (const auto& b : gen.bands) row += std::abs(b.v[i]);
        for (const auto& b : gen.drive_bands) row += params.epsilon * std::abs(b.v[i]);
        hmax = std::max(hmax, row);
    }
    double dmax = 0.0;
    for (int i = 0; i < dim; ++i) dmax = std::max(dmax, drift[i]);
    return 2.0 * hmax + 2.0 * dmax + 2.0 * params.kappa;
}

MasterEq make_jc_master_eq(const ModelParams& p, int l_max) {
    p.validate();
    if (p.kind != ModelKind::JC) throw ValidationError("make_jc_master_eq: JC mode required");
    MasterEq me;
    me.params = p;
    me.basis = Basis::AtomFock;
    me.l_max = l_max;
    me.dim = 2 * (l_max + 1);
    me.gen = jc_generator(p, l_max);
    me.a_off = 2;
    me.nvec.resize(me.dim);
    me.ar.assign(me.dim, 0.0);
    me.drift.resize(me.dim);
    for (int n = 0; n <= l_max; ++n) {
        for (int s = 0; s < 2; ++s) {
            int i = 2 * n + s;
            me.nvec[i] = n;
            me.drift[i] = p.kappa * n + 0.5 * p.gamma * s;
            if (n + 1 <= l_max) me.ar[i] = std::sqrt(n + 1.0);
        }
    }
    return me;
}

MasterEq make_kerr_master_eq(const ModelParams& p, int l_max) {
    p.validate();
    if (p.kind != ModelKind::Kerr) throw ValidationError("make_kerr_master_eq: Kerr mode required");
    MasterEq me;
    me.params = p;
    me.basis = Basis::FockOnly;
    me.l_max = l_max;
    me.dim = l_max + 1;
    me.gen = kerr_generator(p, l_max);
    me.a_off = 1;
    me.nvec.resize(me.dim);
    me.ar.assign(me.dim, 0.0);
    me.drift.resize(me.dim);
    for (int n = 0; n <= l_max; ++n) {
        me.nvec[n] = n;
        me.drift[n] = p.kappa * n;
        if (n + 1 <= l_max) me.ar[n] = std::sqrt(n + 1.0);
    }
    return me;
}

MasterEq make_master_eq(const ModelParams& p, int l_max) {
    return p.kind == ModelKind::JC ? make_jc_master_eq(p, l_max) : make_kerr_master_eq(p, l_max);
}

EffectiveGen make_effective_gen(const ModelParams& p, int l_max, Basis basis) {
    p.validate();
    EffectiveGen eg;
    eg.basis = basis;
    eg.l_max = l_max;
    if (basis == Basis::AtomFock) {
        if (p.kind != ModelKind::JC)
            throw ValidationError("make_effective_gen: atom-Fock basis is JC-only");
        eg.gen = jc_generator(p, l_max);
        for (int n = 0; n <= l_max; ++n)
            for (int s = 0; s < 2; ++s)
                eg.gen.diag[2 * n + s] -= p.kappa * n + 0.5 * p.gamma * s;
        eg.gen.refresh_conj();
    } else {
        ModelParams q = p;
        if (p.kind == ModelKind::JC) {
            // Fock-only JC requires a decoupled atom
            if (p.g != 0.0) throw ValidationError("make_effective_gen: Fock-only needs g = 0");
            q.kind = ModelKind::Kerr;
            q.chi = 0.0;
            q.g = 0.0;
        }
        eg.gen = kerr_generator(q, l_max);
        for (int n = 0; n <= l_max; ++n) eg.gen.diag[n] -= p.kappa * n;
        eg.gen.refresh_conj();
    }
    eg.dim = eg.gen.dim;
    return eg;
}

fock::DensityMatrix jc_lindblad_rhs(const fock::DensityMatrix& rho, const ModelParams& p) {
    if (rho.basis != Basis::AtomFock)
        throw ValidationError("jc_lindblad_rhs: atom-Fock basis required");
    MasterEq me = make_jc_master_eq(p, rho.l_max);
    fock::DensityMatrix out(rho.basis, rho.l_max);
    me.rhs(rho.el, out.el);
    return out;
}

fock::DensityMatrix kerr_lindblad_rhs(const fock::DensityMatrix& rho, const ModelParams& p) {
    if (rho.basis != Basis::FockOnly)
        throw ValidationError("kerr_lindblad_rhs: Fock-only basis required");
    MasterEq me = make_kerr_master_eq(p, rho.l_max);
    fock::DensityMatrix out(rho.basis, rho.l_max);
    me.rhs(rho.el, out.el);
    return out;
}

}  // namespace qjump::models
