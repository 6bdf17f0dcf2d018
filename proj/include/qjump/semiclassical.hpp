#pragma once

#include <vector>

#include "qjump/core.hpp"
#include "qjump/models.hpp"

namespace qjump::semiclassical {

struct SemiclassicalState {
    cx alpha;     // <a>
    cx beta;      // <sigma_->
    double zeta;  // <sigma_z>

    double bloch_length2() const { return 4.0 * std::norm(beta) + zeta * zeta; }
};

struct Root {
    double amp_scaled_sq;  // |alpha~|^2
    double amp_unscaled;   // |alpha|
};

struct BistabilityRoots {
    std::vector<Root> roots;  // ascending (dim, unstable, bright by ordering)
    double n_scale;           // [g/(2 kappa)]^2
    double n_scale_weak;      // gamma^2/(8 g^2), 0 when gamma = 0
};

// residual of the steady-state amplitude equation at scaled excitation x
double neoclassical_residual(double x, const models::ModelParams& p);

// all nonnegative solutions, bracketed on a log-spaced sweep then bisected
BistabilityRoots neoclassical_roots(const models::ModelParams& p);

struct MbeSample {
    double t;
    SemiclassicalState s;
};

// d alpha/dt = -(kappa - i dw) alpha - i g beta - i eps
// d beta/dt  = i dw beta + i g alpha zeta
// d zeta/dt  = 2 i g (alpha* beta - alpha beta*)
std::vector<MbeSample> mbe_integrate(const SemiclassicalState& s0, const models::ModelParams& p,
                                     double t_final, double dt, int sample_every = 1);

// lambda(x;t) = exp[-x (1 - e^{-2 kappa t})], kappa = 1 time units
double null_survival(double x, double t);

// lower bound for the localization time (kappa = 1 units)
double localization_bound(cx alpha1, cx alpha2);

// crossing time of the two-component photon curve with |alpha2|^2
double localization_intersection(cx alpha1, cx alpha2);

}  // namespace qjump::semiclassical
