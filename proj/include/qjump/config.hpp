#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qjump/fock.hpp"
#include "qjump/models.hpp"

namespace qjump::config {

// Flat key=value run configuration. Unknown keys are hard errors.
struct RunConfig {
    models::ModelParams params;
    int l_max = 25;
    double dt = 0.0;  // 0: per-mode default (0.002 JC, 0.0075/kappa Kerr)
    double t_final = 100.0;
    uint64_t seed = 1;
    int n_traj = 1;
    int workers = 0;  // 0: hardware concurrency
    int sample_every = 5;
    std::vector<double> snapshot_times;
    std::string out_dir;  // empty: QJUMP_OUT env or "."
    std::string initial = "ground";  // ground | vacuum | coherent:re,im |
                                     // superposition:re1,im1,re2,im2
    double tol = 1e-9;    // steady-state exit tolerance
    double max_time = 40000.0;

    double effective_dt() const;
    std::string resolved_out_dir() const;

    // initial conditional ket for trajectory runs, or nothing for the default
    std::optional<fock::StateVector> initial_state(fock::Basis basis) const;
};

RunConfig parse_file(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_text(const std::string& text, const std::vector<std::string>& overrides = {});

}  // namespace qjump::config
