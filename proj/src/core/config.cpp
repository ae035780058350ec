#include "core/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ksipm {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char s[32];
        std::snprintf(s, sizeof s, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(s, "%lf", &back);
        if (back == v) return s;
    }
    return buf;
}

SimParams RunConfig::sim_params() const {
    SimParams p;
    p.g = g;
    p.t_end = t_end;
    p.cfl = cfl;
    p.dt_max = dt_max;
    p.dt_min = dt_min;
    p.blowup_linf = blowup_linf;
    p.blowup_l2sq = blowup_l2sq;
    p.dealias = dealias;
    p.output_every = output_every;
    p.grid = Grid(n1, n2);
    p.enable_advection = enable_advection;
    p.enable_ks = enable_ks;
    p.enable_diffusion = enable_diffusion;
    return p;
}

ClassifierConfig RunConfig::classifier_config() const {
    ClassifierConfig c;
    c.N0 = classifier_n0;
    c.c1 = classifier_c1;
    c.C1 = classifier_C1;
    return c;
}

namespace {

struct Key {
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

double parse_num(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::exception();
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + s + "'");
    }
}

long long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used, 10);
        if (used != s.size()) throw std::exception();
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad integer '" + s + "'");
    }
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("bad boolean '" + s + "'");
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "none";
}

std::optional<double> parse_opt(const std::string& s) {
    if (s == "none" || s.empty()) return std::nullopt;
    return parse_num(s);
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(',', start);
        const std::string tok = s.substr(start, pos == std::string::npos ? pos : pos - start);
        if (!tok.empty()) out.push_back(parse_num(tok));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw std::runtime_error("empty list");
    return out;
}

// Declaration order is the canonical dump order.
const std::vector<std::pair<std::string, Key>>& key_table() {
    static const std::vector<std::pair<std::string, Key>> table = {
        {"grid.n1",
         {[](const RunConfig& c) { return std::to_string(c.n1); },
          [](RunConfig& c, const std::string& v) { c.n1 = static_cast<int>(parse_int(v)); }}},
        {"grid.n2",
         {[](const RunConfig& c) { return std::to_string(c.n2); },
          [](RunConfig& c, const std::string& v) { c.n2 = static_cast<int>(parse_int(v)); }}},
        {"physics.g",
         {[](const RunConfig& c) { return format_double(c.g); },
          [](RunConfig& c, const std::string& v) { c.g = parse_num(v); }}},
        {"physics.dealias",
         {[](const RunConfig& c) { return c.dealias ? std::string("true") : std::string("false"); },
          [](RunConfig& c, const std::string& v) { c.dealias = parse_bool(v); }}},
        {"physics.enable_advection",
         {[](const RunConfig& c) {
              return c.enable_advection ? std::string("true") : std::string("false");
          },
          [](RunConfig& c, const std::string& v) { c.enable_advection = parse_bool(v); }}},
        {"physics.enable_ks",
         {[](const RunConfig& c) { return c.enable_ks ? std::string("true") : std::string("false"); },
          [](RunConfig& c, const std::string& v) { c.enable_ks = parse_bool(v); }}},
        {"physics.enable_diffusion",
         {[](const RunConfig& c) {
              return c.enable_diffusion ? std::string("true") : std::string("false");
          },
          [](RunConfig& c, const std::string& v) { c.enable_diffusion = parse_bool(v); }}},
        {"time.t_end",
         {[](const RunConfig& c) { return format_double(c.t_end); },
          [](RunConfig& c, const std::string& v) { c.t_end = parse_num(v); }}},
        {"time.cfl",
         {[](const RunConfig& c) { return format_double(c.cfl); },
          [](RunConfig& c, const std::string& v) { c.cfl = parse_num(v); }}},
        {"time.dt_max",
         {[](const RunConfig& c) { return format_double(c.dt_max); },
          [](RunConfig& c, const std::string& v) { c.dt_max = parse_num(v); }}},
        {"time.dt_min",
         {[](const RunConfig& c) { return format_double(c.dt_min); },
          [](RunConfig& c, const std::string& v) { c.dt_min = parse_num(v); }}},
        {"time.output_every",
         {[](const RunConfig& c) { return format_double(c.output_every); },
          [](RunConfig& c, const std::string& v) { c.output_every = parse_num(v); }}},
        {"thresholds.blowup_linf",
         {[](const RunConfig& c) { return format_double(c.blowup_linf); },
          [](RunConfig& c, const std::string& v) { c.blowup_linf = parse_num(v); }}},
        {"thresholds.blowup_l2sq",
         {[](const RunConfig& c) { return format_double(c.blowup_l2sq); },
          [](RunConfig& c, const std::string& v) { c.blowup_l2sq = parse_num(v); }}},
        {"init.kind",
         {[](const RunConfig& c) { return c.init.kind; },
          [](RunConfig& c, const std::string& v) { c.init.kind = v; }}},
        {"init.mass",
         {[](const RunConfig& c) { return format_double(c.init.mass); },
          [](RunConfig& c, const std::string& v) { c.init.mass = parse_num(v); }}},
        {"init.center_x1",
         {[](const RunConfig& c) { return format_double(c.init.center_x1); },
          [](RunConfig& c, const std::string& v) { c.init.center_x1 = parse_num(v); }}},
        {"init.center_x2",
         {[](const RunConfig& c) { return format_double(c.init.center_x2); },
          [](RunConfig& c, const std::string& v) { c.init.center_x2 = parse_num(v); }}},
        {"init.sigma",
         {[](const RunConfig& c) { return format_double(c.init.sigma); },
          [](RunConfig& c, const std::string& v) { c.init.sigma = parse_num(v); }}},
        {"init.bumps",
         {[](const RunConfig& c) { return std::to_string(c.init.bumps); },
          [](RunConfig& c, const std::string& v) { c.init.bumps = static_cast<int>(parse_int(v)); }}},
        {"init.k1",
         {[](const RunConfig& c) { return std::to_string(c.init.k1); },
          [](RunConfig& c, const std::string& v) { c.init.k1 = static_cast<int>(parse_int(v)); }}},
        {"init.k2",
         {[](const RunConfig& c) { return std::to_string(c.init.k2); },
          [](RunConfig& c, const std::string& v) { c.init.k2 = static_cast<int>(parse_int(v)); }}},
        {"init.amplitude",
         {[](const RunConfig& c) { return format_double(c.init.amplitude); },
          [](RunConfig& c, const std::string& v) { c.init.amplitude = parse_num(v); }}},
        {"init.floor",
         {[](const RunConfig& c) { return format_double(c.init.floor); },
          [](RunConfig& c, const std::string& v) { c.init.floor = parse_num(v); }}},
        {"init.seed",
         {[](const RunConfig& c) { return std::to_string(c.init.seed); },
          [](RunConfig& c, const std::string& v) {
              c.init.seed = static_cast<std::uint64_t>(parse_int(v));
          }}},
        {"init.decay",
         {[](const RunConfig& c) { return format_double(c.init.decay); },
          [](RunConfig& c, const std::string& v) { c.init.decay = parse_num(v); }}},
        {"init.path",
         {[](const RunConfig& c) { return c.init.path; },
          [](RunConfig& c, const std::string& v) { c.init.path = v; }}},
        {"classifier.n0",
         {[](const RunConfig& c) { return std::to_string(c.classifier_n0); },
          [](RunConfig& c, const std::string& v) {
              c.classifier_n0 = static_cast<int>(parse_int(v));
          }}},
        {"classifier.c1",
         {[](const RunConfig& c) { return opt_str(c.classifier_c1); },
          [](RunConfig& c, const std::string& v) { c.classifier_c1 = parse_opt(v); }}},
        {"classifier.C1",
         {[](const RunConfig& c) { return opt_str(c.classifier_C1); },
          [](RunConfig& c, const std::string& v) { c.classifier_C1 = parse_opt(v); }}},
        {"nash.a",
         {[](const RunConfig& c) { return format_double(c.nash_a); },
          [](RunConfig& c, const std::string& v) { c.nash_a = parse_num(v); }}},
        {"nash.strengths",
         {[](const RunConfig& c) { return list_str(c.nash_strengths); },
          [](RunConfig& c, const std::string& v) { c.nash_strengths = parse_list(v); }}},
        {"nash.fields_per_n",
         {[](const RunConfig& c) { return std::to_string(c.nash_fields_per_n); },
          [](RunConfig& c, const std::string& v) {
              c.nash_fields_per_n = static_cast<int>(parse_int(v));
          }}},
        {"nash.decay",
         {[](const RunConfig& c) { return format_double(c.nash_decay); },
          [](RunConfig& c, const std::string& v) { c.nash_decay = parse_num(v); }}},
        {"nash.seed",
         {[](const RunConfig& c) { return std::to_string(c.nash_seed); },
          [](RunConfig& c, const std::string& v) {
              c.nash_seed = static_cast<std::uint64_t>(parse_int(v));
          }}},
        {"output.directory",
         {[](const RunConfig& c) { return c.output_directory; },
          [](RunConfig& c, const std::string& v) { c.output_directory = v; }}},
        {"output.snapshot_every",
         {[](const RunConfig& c) { return format_double(c.snapshot_every); },
          [](RunConfig& c, const std::string& v) { c.snapshot_every = parse_num(v); }}},
    };
    return table;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, k] : key_table()) {
        if (name == key) {
            k.set(cfg, trim(value));
            return;
        }
    }
    throw std::runtime_error("unknown config key '" + key + "'");
}

std::string get_key(const RunConfig& cfg, const std::string& key) {
    for (const auto& [name, k] : key_table())
        if (name == key) return k.get(cfg);
    throw std::runtime_error("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": missing '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_override(cfg, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& [name, k] : key_table()) {
        out += name;
        out += " = ";
        out += k.get(cfg);
        out += '\n';
    }
    return out;
}

}  // namespace ksipm
