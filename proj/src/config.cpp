#include "fsnse/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsnse {

const char* const ARTIFACT_VERSION = "0.1.0";

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(std::uint8_t(s[b]))) ++b;
    while (e > b && std::isspace(std::uint8_t(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& key, const std::string& v, Fn&& one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(one(key, item));
    }
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    double alpha = cfg.sim.diss.alpha, nu = cfg.sim.diss.nu;

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "physics" && section != "grid" && section != "noise" &&
                section != "initial" && section != "output" && section != "study")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (section == "physics") {
            if (key == "alpha") alpha = parse_double(qual, value);
            else if (key == "nu") nu = parse_double(qual, value);
            else throw ConfigError("unknown key " + qual);
        } else if (section == "grid") {
            if (key == "n") cfg.sim.level = int(parse_int(qual, value));
            else if (key == "dt") cfg.sim.dt = parse_double(qual, value);
            else if (key == "T") cfg.sim.horizon = parse_double(qual, value);
            else throw ConfigError("unknown key " + qual);
        } else if (section == "noise") {
            if (key == "kind") {
                if (value == "none") cfg.sim.noise.enabled = false;
                else {
                    cfg.sim.noise.enabled = true;
                    try {
                        cfg.sim.noise.kind = diffusion_kind_from_string(value);
                    } catch (const std::exception& e) {
                        throw ConfigError(qual + ": " + e.what());
                    }
                }
            } else if (key == "sigma") cfg.sim.noise.sigma = parse_double(qual, value);
            else if (key == "R0") cfg.sim.noise.r0 = parse_double(qual, value);
            else if (key == "gamma_Q") cfg.sim.noise.gamma_q = parse_double(qual, value);
            else if (key == "q_table") cfg.sim.noise.q_table_path = value;
            else if (key == "seed") cfg.sim.noise.seed = parse_u64(qual, value);
            else throw ConfigError("unknown key " + qual);
        } else if (section == "initial") {
            if (key == "kind") {
                try {
                    cfg.sim.initial.kind = initial_kind_from_string(value);
                } catch (const std::exception& e) {
                    throw ConfigError(qual + ": " + e.what());
                }
            } else if (key == "amplitude") cfg.sim.initial.amplitude = parse_double(qual, value);
            else if (key == "decay") cfg.sim.initial.decay = parse_double(qual, value);
            else if (key == "seed") cfg.sim.initial.seed = parse_u64(qual, value);
            else if (key == "bandwidth") cfg.sim.initial.bandwidth = int(parse_int(qual, value));
            else if (key == "path") cfg.sim.initial.path = value;
            else throw ConfigError("unknown key " + qual);
        } else if (section == "output") {
            if (key == "record_stride") cfg.sim.record_stride = int(parse_int(qual, value));
            else if (key == "snapshots") cfg.sim.snapshot_every = int(parse_int(qual, value));
            else if (key == "formulation") {
                try {
                    cfg.sim.formulation = formulation_from_string(value);
                } catch (const std::exception& e) {
                    throw ConfigError(qual + ": " + e.what());
                }
            } else if (key == "threshold") cfg.sim.blowup_threshold = parse_double(qual, value);
            else if (key == "monitor_beta") cfg.sim.monitor_beta = parse_double(qual, value);
            else if (key == "bkm_q") cfg.sim.bkm_q = parse_double(qual, value);
            else if (key == "nonlinearity")
                cfg.sim.nonlinearity = parse_bool(qual, value);
            else throw ConfigError("unknown key " + qual);
        } else if (section == "study") {
            if (key == "levels")
                cfg.study.levels = parse_list<int>(qual, value, [](const std::string& k,
                                                                   const std::string& v) {
                    return int(parse_int(k, v));
                });
            else if (key == "dts")
                cfg.study.dts = parse_list<double>(qual, value, parse_double);
            else if (key == "paths") cfg.study.paths = int(parse_int(qual, value));
            else if (key == "p") cfg.study.p = int(parse_int(qual, value));
            else if (key == "threads") cfg.study.threads = int(parse_int(qual, value));
            else throw ConfigError("unknown key " + qual);
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                              "' outside any section");
        }
    }

    // Construct the dissipation last so the validation message names the field.
    try {
        cfg.sim.diss = FractionalDissipation(alpha, nu);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("physics: ") + e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream os;
    const SimConfig& s = cfg.sim;
    os << "[physics]\n";
    os << "alpha = " << fmt(s.diss.alpha) << "\n";
    os << "nu = " << fmt(s.diss.nu) << "\n";
    os << "\n[grid]\n";
    os << "n = " << s.level << "\n";
    os << "dt = " << fmt(s.dt) << "\n";
    os << "T = " << fmt(s.horizon) << "\n";
    os << "\n[noise]\n";
    os << "kind = " << (s.noise.enabled ? diffusion_kind_name(s.noise.kind) : "none") << "\n";
    os << "sigma = " << fmt(s.noise.sigma) << "\n";
    os << "R0 = " << fmt(s.noise.r0) << "\n";
    os << "gamma_Q = " << fmt(s.noise.gamma_q) << "\n";
    if (!s.noise.q_table_path.empty()) os << "q_table = " << s.noise.q_table_path << "\n";
    os << "seed = " << s.noise.seed << "\n";
    os << "\n[initial]\n";
    os << "kind = " << initial_kind_name(s.initial.kind) << "\n";
    os << "amplitude = " << fmt(s.initial.amplitude) << "\n";
    os << "decay = " << fmt(s.initial.decay) << "\n";
    os << "seed = " << s.initial.seed << "\n";
    os << "bandwidth = " << s.initial.bandwidth << "\n";
    if (!s.initial.path.empty()) os << "path = " << s.initial.path << "\n";
    os << "\n[output]\n";
    os << "record_stride = " << s.record_stride << "\n";
    os << "snapshots = " << s.snapshot_every << "\n";
    os << "formulation = " << formulation_name(s.formulation) << "\n";
    os << "threshold = " << fmt(s.blowup_threshold) << "\n";
    if (s.monitor_beta >= 0.0) os << "monitor_beta = " << fmt(s.monitor_beta) << "\n";
    os << "bkm_q = " << fmt(s.bkm_q) << "\n";
    os << "nonlinearity = " << (s.nonlinearity ? "true" : "false") << "\n";
    if (!cfg.study.levels.empty() || !cfg.study.dts.empty()) {
        os << "\n[study]\n";
        if (!cfg.study.levels.empty()) {
            os << "levels = ";
            for (std::size_t i = 0; i < cfg.study.levels.size(); ++i)
                os << (i ? "," : "") << cfg.study.levels[i];
            os << "\n";
        }
        if (!cfg.study.dts.empty()) {
            os << "dts = ";
            for (std::size_t i = 0; i < cfg.study.dts.size(); ++i)
                os << (i ? "," : "") << fmt(cfg.study.dts[i]);
            os << "\n";
        }
        os << "paths = " << cfg.study.paths << "\n";
        os << "p = " << cfg.study.p << "\n";
        os << "threads = " << cfg.study.threads << "\n";
    }
    return os.str();
}

std::string RunManifest::to_text() const {
    std::ostringstream os;
    os << "# run manifest\n";
    os << "artifact_version = " << artifact_version << "\n";
    os << "truncation = square (modes with 0 < max(|k1|,|k2|) <= n)\n";
    os << "seed = " << seed << "\n";
    os << "started_at = " << started_at << "\n";
    os << "finished_at = " << finished_at << "\n";
    for (const auto& o : outputs) os << "output = " << o << "\n";
    if (stopping_time >= 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", stopping_time);
        os << "stopping_time = " << buf << "\n";
    }
    os << "\n# effective configuration\n";
    os << config_echo;
    return os.str();
}

} // namespace fsnse
