#pragma once

#include <string>

#include "qjump/mcwf.hpp"

namespace qjump::record_io {

inline constexpr int kSchemaVersion = 1;

// JSON-lines photon record: header line, then one line per event and sample.
void write_record(const mcwf::PhotonRecord& rec, const std::string& path);
mcwf::PhotonRecord read_record(const std::string& path);

// One CSV per snapshot density matrix: columns m,n,re,im.
void write_snapshot_csv(const fock::DensityMatrix& rho, const std::string& path);
fock::DensityMatrix read_snapshot_csv(const std::string& path);

std::string params_to_json(const models::ModelParams& p);
models::ModelParams params_from_json(const std::string& json_text);

}  // namespace qjump::record_io
