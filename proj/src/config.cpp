#include "pescado/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <openssl/evp.h>

namespace pescado {
namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v, const std::string& key, int line) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end)
        throw ConfigError(key, line, "cannot parse '" + std::string(v) + "' as a number");
    return x;
}

int parse_int(std::string_view v, const std::string& key, int line) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end)
        throw ConfigError(key, line, "cannot parse '" + std::string(v) + "' as an integer");
    if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(key, line, "integer out of range");
    return static_cast<int>(x);
}

bool parse_bool(std::string_view v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, line, "cannot parse '" + std::string(v) + "' as a boolean");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Draft {
    double h = 0.2;
    double R = 150.0;
    SimulationConfig cfg;
};

using Setter = std::function<void(Draft&, std::string_view, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.h", [](Draft& d, auto v, auto& k, int l) { d.h = parse_double(v, k, l); }},
        {"grid.R", [](Draft& d, auto v, auto& k, int l) { d.R = parse_double(v, k, l); }},
        {"grid.L_max", [](Draft& d, auto v, auto& k, int l) { d.cfg.L_max = parse_int(v, k, l); }},
        {"pulse.E0", [](Draft& d, auto v, auto& k, int l) { d.cfg.pulse.E0 = parse_double(v, k, l); }},
        {"pulse.omega", [](Draft& d, auto v, auto& k, int l) { d.cfg.pulse.omega = parse_double(v, k, l); }},
        {"pulse.n_cycles", [](Draft& d, auto v, auto& k, int l) { d.cfg.pulse.n_cycles = parse_int(v, k, l); }},
        {"cap.gamma0", [](Draft& d, auto v, auto& k, int l) { d.cfg.cap.gamma0 = parse_double(v, k, l); }},
        {"cap.R_c", [](Draft& d, auto v, auto& k, int l) { d.cfg.cap.R_c = parse_double(v, k, l); }},
        {"propagation.steps_per_cycle",
         [](Draft& d, auto v, auto& k, int l) { d.cfg.steps_per_cycle = parse_int(v, k, l); }},
        {"propagation.krylov_dim",
         [](Draft& d, auto v, auto& k, int l) { d.cfg.krylov_dim = parse_int(v, k, l); }},
        {"analysis.stride", [](Draft& d, auto v, auto& k, int l) { d.cfg.analysis_stride = parse_int(v, k, l); }},
        {"analysis.cutoff_c", [](Draft& d, auto v, auto& k, int l) { d.cfg.cutoff_c = parse_double(v, k, l); }},
        {"analysis.restrict_re_positive",
         [](Draft& d, auto v, auto& k, int l) { d.cfg.restrict_re_positive = parse_bool(v, k, l); }},
        {"analysis.project_bound",
         [](Draft& d, auto v, auto& k, int l) { d.cfg.project_bound = parse_bool(v, k, l); }},
        {"energy.min", [](Draft& d, auto v, auto& k, int l) { d.cfg.energy.min = parse_double(v, k, l); }},
        {"energy.max", [](Draft& d, auto v, auto& k, int l) { d.cfg.energy.max = parse_double(v, k, l); }},
        {"energy.step", [](Draft& d, auto v, auto& k, int l) { d.cfg.energy.step = parse_double(v, k, l); }},
        {"angles.theta_points",
         [](Draft& d, auto v, auto& k, int l) { d.cfg.theta_points = parse_int(v, k, l); }},
        {"split.halved_cap", [](Draft& d, auto v, auto& k, int l) { d.cfg.halved_cap = parse_bool(v, k, l); }},
    };
    return table;
}

}  // namespace

SimulationConfig load_config(std::string_view text) {
    Draft draft;
    std::map<std::string, int> seen;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", line_no, "expected 'section.key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, line_no, "unknown key");
        if (value.empty()) throw ConfigError(key, line_no, "missing value");
        if (seen.count(key)) throw ConfigError(key, line_no, "duplicate key");
        seen[key] = line_no;
        it->second(draft, value, key, line_no);
    }

    auto line_of = [&](const std::string& key) {
        const auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };

    try {
        draft.cfg.grid = RadialGrid::from_box(draft.h, draft.R);
        draft.cfg.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        throw ConfigError(e.key(), line_of(e.key()), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    return draft.cfg;
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

std::string serialize_config(const SimulationConfig& c) {
    std::ostringstream os;
    os << "grid.h = " << fmt(c.grid.h) << "\n"
       << "grid.R = " << fmt(c.grid.R()) << "\n"
       << "grid.L_max = " << c.L_max << "\n"
       << "pulse.E0 = " << fmt(c.pulse.E0) << "\n"
       << "pulse.omega = " << fmt(c.pulse.omega) << "\n"
       << "pulse.n_cycles = " << c.pulse.n_cycles << "\n"
       << "cap.gamma0 = " << fmt(c.cap.gamma0) << "\n"
       << "cap.R_c = " << fmt(c.cap.R_c) << "\n"
       << "propagation.steps_per_cycle = " << c.steps_per_cycle << "\n"
       << "propagation.krylov_dim = " << c.krylov_dim << "\n"
       << "analysis.stride = " << c.analysis_stride << "\n"
       << "analysis.cutoff_c = " << fmt(c.cutoff_c) << "\n"
       << "analysis.restrict_re_positive = " << (c.restrict_re_positive ? "true" : "false") << "\n"
       << "analysis.project_bound = " << (c.project_bound ? "true" : "false") << "\n"
       << "energy.min = " << fmt(c.energy.min) << "\n"
       << "energy.max = " << fmt(c.energy.max) << "\n"
       << "energy.step = " << fmt(c.energy.step) << "\n"
       << "angles.theta_points = " << c.theta_points << "\n"
       << "split.halved_cap = " << (c.halved_cap ? "true" : "false") << "\n";
    return os.str();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string config_hash(const SimulationConfig& config) { return sha256_hex(serialize_config(config)); }

bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

SimulationConfig preset(const std::string& name) {
    std::string base = name;
    double rc = -1.0;
    if (const auto p = name.find("-rc"); p != std::string::npos) {
        base = name.substr(0, p);
        const std::string v = name.substr(p + 3);
        rc = parse_double(v, "preset", 0);
    }

    SimulationConfig c;
    if (base == "400nm") {
        c.pulse = {0.075, 0.114, 10};
        c.L_max = 12;
    } else if (base == "200nm") {
        c.pulse = {0.1, 0.228, 10};
        c.L_max = 7;
    } else {
        throw ConfigError("preset", 0, "unknown preset '" + name + "'");
    }
    if (rc > 0.0) c.cap.R_c = rc;
    c.grid = RadialGrid::from_box(0.2, c.cap.R_c >= 120.0 ? 200.0 : 150.0);
    c.validate();
    return c;
}

std::vector<std::string> preset_names() {
    return {"400nm", "200nm", "400nm-rc<R_c>", "200nm-rc<R_c>"};
}

}  // namespace pescado
