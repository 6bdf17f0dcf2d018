#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qjump/core.hpp"
#include "qjump/fock.hpp"
#include "qjump/models.hpp"

namespace qjump::mcwf {

enum class Channel { Cavity, Atom };
enum class JumpKind { Upward, Downward };

struct Event {
    double t;
    Channel ch;
    JumpKind kind;
    double n_pre;   // conditional <n> immediately before the collapse
    double n_post;  // immediately after
};

struct Sample {
    double t;
    double n_cond;
};

struct StateSnapshot {
    double t;
    fock::StateVector psi;
};

struct PhotonRecord {
    models::ModelParams params;
    uint64_t seed = 0;
    double dt = 0.0;
    int l_max = 0;
    fock::Basis basis = fock::Basis::AtomFock;
    double t_final = 0.0;
    std::vector<Event> events;
    std::vector<Sample> samples;
    std::vector<StateSnapshot> snapshots;
    int coarse_dt_steps = 0;     // steps with p_REC > 0.1
    bool truncation_warned = false;
};

struct TrajectoryOptions {
    std::optional<fock::StateVector> initial;  // default: ground |0,-> (JC) / |0> (Fock)
    int sample_every = 5;
    std::vector<double> snapshot_times;
    bool force_fock_only = false;  // empty-cavity scenarios of the JC model
};

// Direct-photodetection pure-state unraveling: fixed-step jump decision, no-
// click propagation by the 3/8-rule RK4 under the non-Hermitian Hamiltonian,
// renormalization every step. gamma > 0 adds the atomic channel with the
// two-random-number variant.
PhotonRecord run_trajectory_pure(const models::ModelParams& p, int l_max, double dt,
                                 double t_final, uint64_t seed,
                                 const TrajectoryOptions& opts = {});

struct JumpStats {
    long upward = 0;
    long downward = 0;
    long cavity = 0;
    long atom = 0;
    double fraction() const {
        long tot = upward + downward;
        return tot > 0 ? static_cast<double>(upward) / tot : 0.0;
    }
};

JumpStats classify_jumps(const PhotonRecord& rec);

// Upward iff the conditional photon number increases across the collapse.
// Changes below the tie band (the coherent-state case, where a jump leaves
// the state invariant) are resolved by a deterministic per-event coin.
JumpKind classify_single(double n_pre, double n_post, uint64_t seed, uint64_t event_index);

struct EnsembleResult {
    std::vector<double> t_grid;
    std::vector<fock::DensityMatrix> rho;  // trajectory-averaged at each grid time
    std::vector<double> n_mean;
    std::vector<double> n_se;  // standard error over trajectories
};

EnsembleResult ensemble_density(const models::ModelParams& p, int l_max, double dt, int n_traj,
                                const std::vector<double>& t_grid, uint64_t master_seed,
                                int workers = 0, const TrajectoryOptions& opts = {});

// Mixed-state conditional propagation for the empty cavity with a thermal
// bath and detector efficiency eta (Fock-only, g = eps = 0).
struct MixedOptions {
    std::optional<fock::DensityMatrix> initial;  // default vacuum
    int sample_every = 5;
    std::vector<double> snapshot_times;
    std::optional<std::vector<double>> forced_click_times;  // propagator-equivalence mode
};

struct MixedRecord {
    models::ModelParams params;
    uint64_t seed = 0;
    double dt = 0.0;
    int l_max = 0;
    std::vector<Event> events;
    std::vector<Sample> samples;
    struct RhoSnapshot {
        double t;
        fock::DensityMatrix rho;
    };
    std::vector<RhoSnapshot> snapshots;
};

MixedRecord run_trajectory_mixed(const models::ModelParams& p, int l_max, double dt,
                                 double t_final, uint64_t seed, const MixedOptions& opts = {});

struct QPeak {
    cx alpha;
    double height;
};

// Local maxima of the Q function above rel_threshold * global max, sorted by
// height, sub-grid refined by a quadratic fit.
std::vector<QPeak> find_q_peaks(const fock::DensityMatrix& rho_cav,
                                const fock::PhaseGridSpec& spec, double rel_threshold = 0.05);

}  // namespace qjump::mcwf
