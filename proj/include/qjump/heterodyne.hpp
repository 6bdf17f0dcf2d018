#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qjump/core.hpp"
#include "qjump/fock.hpp"
#include "qjump/models.hpp"

namespace qjump::heterodyne {

struct HeterodyneSample {
    double t;
    double n_cond;
    cx a_cond;
};

struct NoiseStats {
    double sum_x = 0.0, sum_y = 0.0;
    double sum_xx = 0.0, sum_yy = 0.0, sum_xy = 0.0;
    long n = 0;
};

struct HeterodyneRecord {
    models::ModelParams params;
    uint64_t seed = 0;
    double dt = 0.0;
    int l_max = 0;
    std::vector<HeterodyneSample> samples;
    NoiseStats noise;
    std::vector<fock::StateVector> final_states;  // last state, for ensembles
};

struct HeterodyneOptions {
    std::optional<fock::StateVector> initial;
    int sample_every = 10;
    bool force_fock_only = false;
    double det_rtol = 1e-8;  // Cash-Karp accuracy for the deterministic part
};

// Nonlinear SSE conditioned on heterodyne records: adaptive Cash-Karp for the
// deterministic drift within each macro step, Euler for the noise term,
// renormalization per macro step.
HeterodyneRecord run_heterodyne_trajectory(const models::ModelParams& p, int l_max, double dt,
                                           double t_final, uint64_t seed,
                                           const HeterodyneOptions& opts = {});

struct HeterodyneEnsemble {
    std::vector<double> t_grid;
    std::vector<double> n_mean, n_se;
};

HeterodyneEnsemble heterodyne_ensemble(const models::ModelParams& p, int l_max, double dt,
                                       int n_traj, const std::vector<double>& t_grid,
                                       uint64_t master_seed, int workers = 0,
                                       const HeterodyneOptions& opts = {});

struct ChargeOptions {
    int nu_steps = 10000;
    double nu_max = 1.0 - 1e-6;
    int trace_every = 200;
};

struct ChargeRecord {
    cx q_tilde;                                 // final cumulative charge
    std::vector<std::pair<double, cx>> trace;   // (nu, q~)
    int branch = -1;                            // projective readout, else -1
};

// Free-decay cumulative-charge SDE in nu = 1 - e^{-2 kappa t}; the potential
// gradient is the ratio of truncated Fock series.
ChargeRecord charge_record(const fock::StateVector& initial, uint64_t seed,
                           const ChargeOptions& opts = {});

// Same SDE with a statistical mixture of coherent components (closed form).
ChargeRecord charge_record_mixture(const std::vector<double>& weights,
                                   const std::vector<cx>& alphas, uint64_t seed,
                                   const ChargeOptions& opts = {});

struct DistributionReport {
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 0.0;
    int bins_used = 0;
    long n_samples = 0;
};

// Final-charge histogram against the Q function of the initial state
// (conjugated argument: the distribution of conj(q~) is compared).
DistributionReport charge_distribution_test(const fock::StateVector& initial, int n_samples,
                                            uint64_t master_seed, int workers = 0,
                                            const ChargeOptions& opts = {});

// Meter-state readout: runs the mixture charge SDE and returns the index of
// the meter amplitude closest to the final conj(q~).
int projective_readout(const std::vector<cx>& coefficients, const std::vector<cx>& meter_amplitudes,
                       uint64_t seed, const ChargeOptions& opts = {});

}  // namespace qjump::heterodyne
