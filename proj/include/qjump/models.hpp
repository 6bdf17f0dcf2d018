#pragma once

#include <vector>

#include "qjump/core.hpp"
#include "qjump/fock.hpp"

namespace qjump::models {

enum class ModelKind { JC, Kerr };

// All rates in units of kappa for the JC model (kappa = 1) and of chi for the
// Kerr model (chi = 1, kappa = the configured kappa/chi ratio).
struct ModelParams {
    ModelKind kind = ModelKind::JC;
    double g = 0.0;
    double epsilon = 0.0;
    double delta_omega = 0.0;  // omega_d - omega_0
    double gamma = 0.0;
    double n_bar = 0.0;
    double eta = 1.0;
    double kappa = 1.0;
    double chi = 0.0;  // 1 in Kerr mode

    // linear drive ramp, the single supported time dependence
    bool has_ramp = false;
    double ramp_start = 0.0, ramp_stop = 0.0, ramp_duration = 0.0;

    double epsilon_at(double t) const {
        if (!has_ramp) return epsilon;
        if (t >= ramp_duration) return ramp_stop;
        return ramp_start + (ramp_stop - ramp_start) * (t / ramp_duration);
    }

    void validate() const;
};

// Dense Hermitian H/hbar over atom-Fock:
// -dw (a^dag a + s+ s-) + i g (a^dag s- - a s+) + i eps (a^dag - a)
CMat jc_hamiltonian(const ModelParams& p, int l_max);

// H - i kappa a^dag a - i (gamma/2) s+ s-
CMat jc_effective_hamiltonian(const ModelParams& p, int l_max);

// Banded generator G = -iH for fast repeated application; the drive part is
// kept separate so a ramp can scale it per stage.
struct BandedGen {
    int dim = 0;
    std::vector<cx> diag;        // G diagonal (drive-independent part)
    std::vector<cx> diag_conj;
    struct Band {
        int off;                  // G[i, i+off] = v[i]
        std::vector<cx> v;        // size dim, zero where out of range
        std::vector<cx> v_conj;   // precomputed conj for right-multiplication
    };
    std::vector<Band> bands;       // drive-independent off-diagonals
    std::vector<Band> drive_bands; // unit-epsilon drive off-diagonals

    void refresh_conj();

    // y = (G0 + eps * Gdrive) x
    void apply(const cx* x, cx* y, double eps) const;
    // out += (G rho) and out += (rho G^dag), row-major matrices
    void left_accumulate(const CMat& rho, CMat& out, double eps) const;
    void right_dagger_accumulate(const CMat& rho, CMat& out, double eps) const;
};

// Everything needed to evaluate the master-equation right-hand side without
// allocation: generator bands plus dissipator weight vectors.
struct MasterEq {
    ModelParams params;
    fock::Basis basis;
    int l_max = 0;
    int dim = 0;
    BandedGen gen;                  // G = -iH (Hermitian H part only)
    std::vector<double> nvec;       // photon number per basis index
    std::vector<double> ar;         // sqrt(n+1) ladder weights per index
    std::vector<double> drift;      // kappa*n + (gamma/2)*s per index
    int a_off = 0;                  // index offset of the lowering operator

    // out = L(rho); trace-free, Hermiticity-preserving
    void rhs(const CMat& rho, CMat& out) const;
    // rough spectral-radius bound used to pick stable RK4 steps
    double spectral_radius_estimate() const;
};

MasterEq make_jc_master_eq(const ModelParams& p, int l_max);
MasterEq make_kerr_master_eq(const ModelParams& p, int l_max);
MasterEq make_master_eq(const ModelParams& p, int l_max);

// Non-Hermitian no-click generator -i H_eff as banded form (for trajectories).
struct EffectiveGen {
    BandedGen gen;     // includes the anti-Hermitian decay on the diagonal
    int dim = 0;
    fock::Basis basis;
    int l_max = 0;
};
EffectiveGen make_effective_gen(const ModelParams& p, int l_max, fock::Basis basis);

// Allocating convenience wrappers (the spec-facing operations).
fock::DensityMatrix jc_lindblad_rhs(const fock::DensityMatrix& rho, const ModelParams& p);
fock::DensityMatrix kerr_lindblad_rhs(const fock::DensityMatrix& rho, const ModelParams& p);

}  // namespace qjump::models
