#include "qjump/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qjump::config {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

void apply(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "model") {
        if (value == "jc")
            c.params.kind = models::ModelKind::JC;
        else if (value == "kerr")
            c.params.kind = models::ModelKind::Kerr;
        else
            throw ValidationError("config: model must be 'jc' or 'kerr', got '" + value + "'");
    } else if (key == "g") {
        c.params.g = to_double(key, value);
    } else if (key == "epsilon") {
        c.params.epsilon = to_double(key, value);
    } else if (key == "delta_omega") {
        c.params.delta_omega = to_double(key, value);
    } else if (key == "gamma") {
        c.params.gamma = to_double(key, value);
    } else if (key == "n_bar") {
        c.params.n_bar = to_double(key, value);
    } else if (key == "eta") {
        c.params.eta = to_double(key, value);
    } else if (key == "chi_ratio") {
        c.params.kappa = to_double(key, value);  // kappa/chi with chi = 1
    } else if (key == "epsilon_ramp_start") {
        c.params.has_ramp = true;
        c.params.ramp_start = to_double(key, value);
    } else if (key == "epsilon_ramp_stop") {
        c.params.has_ramp = true;
        c.params.ramp_stop = to_double(key, value);
    } else if (key == "epsilon_ramp_duration") {
        c.params.has_ramp = true;
        c.params.ramp_duration = to_double(key, value);
    } else if (key == "l_max") {
        c.l_max = static_cast<int>(to_long(key, value));
    } else if (key == "dt") {
        c.dt = to_double(key, value);
    } else if (key == "t_final") {
        c.t_final = to_double(key, value);
    } else if (key == "seed") {
        c.seed = static_cast<uint64_t>(to_long(key, value));
    } else if (key == "n_traj") {
        c.n_traj = static_cast<int>(to_long(key, value));
    } else if (key == "workers") {
        c.workers = static_cast<int>(to_long(key, value));
    } else if (key == "sample_every") {
        c.sample_every = static_cast<int>(to_long(key, value));
    } else if (key == "snapshot_times") {
        c.snapshot_times = to_double_list(key, value);
    } else if (key == "out_dir") {
        c.out_dir = value;
    } else if (key == "initial") {
        c.initial = value;
    } else if (key == "tol") {
        c.tol = to_double(key, value);
    } else if (key == "max_time") {
        c.max_time = to_double(key, value);
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

void finalize(RunConfig& c) {
    if (c.params.kind == models::ModelKind::Kerr) {
        c.params.chi = 1.0;
        c.params.g = 0.0;
    } else {
        c.params.kappa = 1.0;
        c.params.chi = 0.0;
    }
    if (c.params.has_ramp && c.params.ramp_duration <= 0.0)
        c.params.ramp_duration = c.t_final;  // ramp spans the run unless stated
    if (c.params.has_ramp) c.params.epsilon = c.params.ramp_stop;
    c.params.validate();
    if (c.l_max < 1) throw ValidationError("config: l_max must be >= 1");
    if (c.t_final < 0) throw ValidationError("config: t_final must be >= 0");
    if (c.n_traj < 1) throw ValidationError("config: n_traj must be >= 1");
    if (c.sample_every < 1) throw ValidationError("config: sample_every must be >= 1");
}

}  // namespace

double RunConfig::effective_dt() const {
    if (dt > 0.0) return dt;
    return params.kind == models::ModelKind::JC ? 0.002 : 0.0075 / params.kappa;
}

std::string RunConfig::resolved_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    const char* env = std::getenv("QJUMP_OUT");
    if (env && *env) return env;
    return ".";
}

std::optional<fock::StateVector> RunConfig::initial_state(fock::Basis basis) const {
    if (initial == "ground" || initial == "vacuum") return std::nullopt;
    auto parse_pair = [&](const std::string& body, size_t expect) {
        std::vector<double> vals;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(std::stod(trim(item)));
        if (vals.size() != expect)
            throw ValidationError("config: initial state needs " + std::to_string(expect) +
                                  " numbers, got '" + body + "'");
        return vals;
    };
    if (initial.rfind("coherent:", 0) == 0) {
        auto v = parse_pair(initial.substr(9), 2);
        fock::StateVector f = fock::coherent_ket(cx{v[0], v[1]}, l_max);
        if (basis == fock::Basis::FockOnly) return f;
        // embed as field x ground atom
        fock::StateVector psi(fock::Basis::AtomFock, l_max);
        for (int n = 0; n <= l_max; ++n) psi.amp[2 * n] = f.amp[n];
        return psi;
    }
    if (initial.rfind("superposition:", 0) == 0) {
        auto v = parse_pair(initial.substr(14), 4);
        fock::StateVector f = fock::superposition_ket(cx{v[0], v[1]}, cx{v[2], v[3]}, l_max);
        if (basis == fock::Basis::FockOnly) return f;
        fock::StateVector psi(fock::Basis::AtomFock, l_max);
        for (int n = 0; n <= l_max; ++n) psi.amp[2 * n] = f.amp[n];
        return psi;
    }
    throw ValidationError("config: unknown initial state '" + initial + "'");
}

RunConfig parse_text(const std::string& text, const std::vector<std::string>& overrides) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: line " + std::to_string(lineno) +
                                  " is not key=value: '" + s + "'");
        apply(c, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    for (const auto& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: override is not key=value: '" + ov + "'");
        apply(c, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    finalize(c);
    return c;
}

RunConfig parse_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), overrides);
}

}  // namespace qjump::config
