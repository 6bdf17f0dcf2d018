#pragma once

#include <vector>

#include "qjump/core.hpp"
#include "qjump/fock.hpp"

namespace qjump::analytics {

struct SuperpositionSpec {
    cx alpha1;  // bright-state amplitude
    cx alpha2;  // unstable-state amplitude
};

// <alpha1|alpha2> = exp(-|a1|^2/2 - |a2|^2/2 + conj(a1) a2)
cx coherent_overlap(cx alpha1, cx alpha2);

// photon number of the normalized |alpha1> + |alpha2> superposition
double initial_superposition_photon(const SuperpositionSpec& s);

// conditional photon number under a no-click record, exact and two-term forms
double null_record_photon_exact(const SuperpositionSpec& s, double t);
double null_record_photon_approx(const SuperpositionSpec& s, double t);

// conditional cavity density matrix during the null record
fock::DensityMatrix null_record_density_matrix(const SuperpositionSpec& s, double t, int l_max);

// P_{n;[0,t)} for a damped coherent state
double poisson_count_prob(cx alpha, double t, int n);

struct RecordSamples {
    std::vector<double> t;
    std::vector<double> n;
};

struct JumpOverlay {
    double t_mid = 0.0;
    double dt_end = 0.0;
    double n_mid = 0.0;
    RecordSamples forward_curve;   // t in [t_mid, t_mid + dt_end]
    RecordSamples inverted_curve;  // t in [t_mid - dt_end, t_mid]
};

// Steps (ii)-(iv): t_mid from the first downward crossing of n_mid inside the
// window, dt_end from the intersection construction, inverted branch by point
// reflection about (t_mid, n_mid).
JumpOverlay build_jump_overlay(const RecordSamples& record, const SuperpositionSpec& s,
                               double window_lo, double window_hi);

}  // namespace qjump::analytics
