#pragma once

#include "qjump/core.hpp"
#include "qjump/fock.hpp"
#include "qjump/models.hpp"

namespace qjump::steady {

struct SteadyOptions {
    double tol = 1e-9;            // exit when ||drho/dt||_max < tol
    double dt = 0.0;              // 0: choose from the spectral-radius bound
    double max_time = 40000.0;    // model time units; exceed -> NumericalError
    bool accelerate = true;       // dominant-mode extrapolation of the slow tail
    double stagnation_accept = 1e-6;
};

struct SteadyReport {
    double photon_number = 0.0;  // <a^dag a>_ss
    double g2_zero = 0.0;        // <a^dag^2 a^2>_ss / <a^dag a>_ss^2
    fock::DensityMatrix rho_ss;
    double residual = 0.0;       // ||drho/dt||_max at exit
    double t_integrated = 0.0;
    bool accelerated = false;
    bool stagnated = false;
};

SteadyReport steady_state(const models::ModelParams& p, int l_max, const SteadyOptions& opts = {});

// alias of steady_state at the multiphoton-resonance benchmark points
SteadyReport multiphoton_reference(const models::ModelParams& p, int l_max = 20,
                                   const SteadyOptions& opts = {});

// Steady-state Wigner function of the driven Kerr oscillator,
// W(x,y) = N e^{-2(x^2+y^2)} |J_{lam-1}(sqrt(-8 et (x-iy))) / (x-iy)^{(lam-1)/2}|^2
// with lam = (kappa - i dw)/(i chi), et = eps/(i chi). The modulus-squared
// ratio is evaluated through the entire function sum_k (2 et w)^k / (k! (lam)_k),
// with the w-independent prefactor absorbed into N.
double kerr_wigner_analytic_point(double x, double y, const models::ModelParams& p);
fock::PhaseGrid kerr_wigner_analytic(const models::ModelParams& p,
                                     const fock::PhaseGridSpec& spec);

}  // namespace qjump::steady
