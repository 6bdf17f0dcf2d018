#include "qjump/record_io.hpp"

#include <fstream>

#include <json.hpp>

#include "qjump/simd.hpp"

namespace qjump::record_io {

using nlohmann::json;

namespace {

json params_json(const models::ModelParams& p) {
    json j;
    j["model"] = p.kind == models::ModelKind::JC ? "jc" : "kerr";
    j["g"] = p.g;
    j["epsilon"] = p.epsilon;
    j["delta_omega"] = p.delta_omega;
    j["gamma"] = p.gamma;
    j["n_bar"] = p.n_bar;
    j["eta"] = p.eta;
    j["kappa"] = p.kappa;
    j["chi"] = p.chi;
    if (p.has_ramp) {
        j["epsilon_ramp_start"] = p.ramp_start;
        j["epsilon_ramp_stop"] = p.ramp_stop;
        j["epsilon_ramp_duration"] = p.ramp_duration;
    }
    return j;
}

models::ModelParams params_from(const json& j) {
    models::ModelParams p;
    p.kind = j.at("model").get<std::string>() == "jc" ? models::ModelKind::JC
                                                      : models::ModelKind::Kerr;
    p.g = j.value("g", 0.0);
    p.epsilon = j.value("epsilon", 0.0);
    p.delta_omega = j.value("delta_omega", 0.0);
    p.gamma = j.value("gamma", 0.0);
    p.n_bar = j.value("n_bar", 0.0);
    p.eta = j.value("eta", 1.0);
    p.kappa = j.value("kappa", 1.0);
    p.chi = j.value("chi", 0.0);
    if (j.contains("epsilon_ramp_start")) {
        p.has_ramp = true;
        p.ramp_start = j["epsilon_ramp_start"].get<double>();
        p.ramp_stop = j["epsilon_ramp_stop"].get<double>();
        p.ramp_duration = j["epsilon_ramp_duration"].get<double>();
    }
    return p;
}

}  // namespace

std::string params_to_json(const models::ModelParams& p) { return params_json(p).dump(); }

models::ModelParams params_from_json(const std::string& text) {
    return params_from(json::parse(text));
}

void write_record(const mcwf::PhotonRecord& rec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_record: cannot open " + path);
    json hdr;
    hdr["schema_version"] = kSchemaVersion;
    hdr["params"] = params_json(rec.params);
    hdr["seed"] = rec.seed;
    hdr["dt"] = rec.dt;
    hdr["l_max"] = rec.l_max;
    hdr["t_final"] = rec.t_final;
    hdr["basis"] = rec.basis == fock::Basis::AtomFock ? "atom_fock" : "fock";
    hdr["kernels"] = std::string(simd::active_name());
    out << hdr.dump() << "\n";
    for (const auto& ev : rec.events) {
        json e;
        e["t"] = ev.t;
        e["ch"] = ev.ch == mcwf::Channel::Cavity ? "cavity" : "atom";
        e["kind"] = ev.kind == mcwf::JumpKind::Upward ? "up" : "down";
        out << e.dump() << "\n";
    }
    for (const auto& s : rec.samples) {
        json e;
        e["t"] = s.t;
        e["n"] = s.n_cond;
        out << e.dump() << "\n";
    }
}

mcwf::PhotonRecord read_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_record: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("read_record: empty file");
    json hdr = json::parse(line);
    if (hdr.at("schema_version").get<int>() != kSchemaVersion)
        throw ValidationError("read_record: unsupported schema version");
    mcwf::PhotonRecord rec;
    rec.params = params_from(hdr.at("params"));
    rec.seed = hdr.at("seed").get<uint64_t>();
    rec.dt = hdr.at("dt").get<double>();
    rec.l_max = hdr.at("l_max").get<int>();
    rec.t_final = hdr.value("t_final", 0.0);
    rec.basis = hdr.at("basis").get<std::string>() == "atom_fock" ? fock::Basis::AtomFock
                                                                  : fock::Basis::FockOnly;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json e = json::parse(line);
        if (e.contains("ch")) {
            mcwf::Event ev{};
            ev.t = e.at("t").get<double>();
            ev.ch = e.at("ch").get<std::string>() == "cavity" ? mcwf::Channel::Cavity
                                                              : mcwf::Channel::Atom;
            ev.kind = e.at("kind").get<std::string>() == "up" ? mcwf::JumpKind::Upward
                                                              : mcwf::JumpKind::Downward;
            rec.events.push_back(ev);
        } else {
            rec.samples.push_back({e.at("t").get<double>(), e.at("n").get<double>()});
        }
    }
    return rec;
}

void write_snapshot_csv(const fock::DensityMatrix& rho, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_snapshot_csv: cannot open " + path);
    out << "m,n,re,im\n";
    char buf[96];
    for (int m = 0; m < rho.dim(); ++m)
        for (int n = 0; n < rho.dim(); ++n) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", m, n, rho.el(m, n).real(),
                          rho.el(m, n).imag());
            out << buf;
        }
}

fock::DensityMatrix read_snapshot_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_snapshot_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::tuple<int, int, double, double>> entries;
    int dmax = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int m, n;
        double re, im;
        if (std::sscanf(line.c_str(), "%d,%d,%lg,%lg", &m, &n, &re, &im) != 4)
            throw ValidationError("read_snapshot_csv: malformed line: " + line);
        entries.emplace_back(m, n, re, im);
        dmax = std::max(dmax, std::max(m, n) + 1);
    }
    fock::DensityMatrix rho(fock::Basis::FockOnly, dmax - 1);
    for (auto& [m, n, re, im] : entries) rho.el(m, n) = cx{re, im};
    return rho;
}

}  // namespace qjump::record_io
