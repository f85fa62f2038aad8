#include "smallcell/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace smallcell {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list value");
    return out;
}

struct KeyValues {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    double number(const std::string& key, double fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : std::stod(it->second);
    }
    long integer(const std::string& key, long fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : std::stol(it->second);
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
};

const char* kKnownKeys[] = {
    "radius_m", "n_sbs", "n_users", "n_files", "cache_bytes", "cache_spread", "zipf_zeta",
    "n_secondary_channels", "secondary_bw_hz", "primary_bw_hz", "channels_per_sbs",
    "channels_per_user", "avg_file_bytes", "tx_range_m", "ir_factor", "antennas_sbs",
    "antennas_user", "requests_per_user", "slot_seconds", "gain", "path_loss", "noise_w",
    "epsilon", "seed", "objective", "pricer", "max_iterations", "sweep_axis", "axis_values",
    "seeds_per_point",
};

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* k : kKnownKeys)
            if (key == k) known = true;
        if (!known) throw std::invalid_argument("unknown config key: " + key);
        kv.values[key] = value;
    }
    return kv;
}

SolveSpec solve_spec_from(const KeyValues& kv) {
    SolveSpec spec;
    ScenarioConfig& c = spec.scenario;
    c.radius_m = kv.number("radius_m", c.radius_m);
    c.n_sbs = static_cast<int>(kv.integer("n_sbs", c.n_sbs));
    c.n_users = static_cast<int>(kv.integer("n_users", c.n_users));
    c.n_files = static_cast<int>(kv.integer("n_files", c.n_files));
    if (kv.has("cache_bytes")) c.cache_bytes = parse_list(kv.text("cache_bytes", ""));
    c.cache_spread = kv.number("cache_spread", c.cache_spread);
    c.zipf_zeta = kv.number("zipf_zeta", c.zipf_zeta);
    c.n_secondary_channels = static_cast<int>(kv.integer("n_secondary_channels", c.n_secondary_channels));
    c.secondary_bw_hz = kv.number("secondary_bw_hz", c.secondary_bw_hz);
    c.primary_bw_hz = kv.number("primary_bw_hz", c.primary_bw_hz);
    c.channels_per_sbs = static_cast<int>(kv.integer("channels_per_sbs", c.channels_per_sbs));
    c.channels_per_user = static_cast<int>(kv.integer("channels_per_user", c.channels_per_user));
    c.avg_file_bytes = kv.number("avg_file_bytes", c.avg_file_bytes);
    c.tx_range_m = kv.number("tx_range_m", c.tx_range_m);
    c.ir_factor = kv.number("ir_factor", c.ir_factor);
    c.antennas_sbs = static_cast<int>(kv.integer("antennas_sbs", c.antennas_sbs));
    c.antennas_user = static_cast<int>(kv.integer("antennas_user", c.antennas_user));
    c.requests_per_user = static_cast<int>(kv.integer("requests_per_user", c.requests_per_user));
    c.slot_seconds = kv.number("slot_seconds", c.slot_seconds);
    c.gain = kv.number("gain", c.gain);
    c.path_loss = kv.number("path_loss", c.path_loss);
    c.noise_w = kv.number("noise_w", c.noise_w);
    c.seed = static_cast<std::uint64_t>(kv.integer("seed", static_cast<long>(c.seed)));

    spec.epsilon = kv.number("epsilon", spec.epsilon);
    spec.max_iterations = kv.integer("max_iterations", spec.max_iterations);
    std::string objective = kv.text("objective", "min_schedule");
    if (objective == "min_schedule")
        spec.objective = RmpObjective::MinSchedule;
    else if (objective == "max_throughput")
        spec.objective = RmpObjective::MaxThroughput;
    else
        throw std::invalid_argument("objective must be min_schedule or max_throughput");
    std::string pricer = kv.text("pricer", "exact");
    if (pricer == "exact")
        spec.pricer = PricerKind::Exact;
    else if (pricer == "sequential_fixing")
        spec.pricer = PricerKind::SequentialFixing;
    else
        throw std::invalid_argument("pricer must be exact or sequential_fixing");
    return spec;
}

}  // namespace

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::CacheSize: return "cache_size";
        case SweepAxis::NFiles: return "n_files";
        case SweepAxis::NUsers: return "n_users";
        case SweepAxis::NSbs: return "n_sbs";
        case SweepAxis::TxRange: return "tx_range";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "cache_size") return SweepAxis::CacheSize;
    if (name == "n_files") return SweepAxis::NFiles;
    if (name == "n_users") return SweepAxis::NUsers;
    if (name == "n_sbs") return SweepAxis::NSbs;
    if (name == "tx_range") return SweepAxis::TxRange;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

SolveSpec parse_solve_spec(const std::string& text) {
    return solve_spec_from(parse_key_values(text));
}

SweepSpec parse_sweep_spec(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    SweepSpec spec;
    spec.base = solve_spec_from(kv);
    if (!kv.has("sweep_axis") || !kv.has("axis_values"))
        throw std::invalid_argument("a sweep config needs sweep_axis and axis_values");
    spec.axis = sweep_axis_from_string(kv.text("sweep_axis", ""));
    spec.axis_values = parse_list(kv.text("axis_values", ""));
    for (std::size_t i = 1; i < spec.axis_values.size(); ++i)
        if (!(spec.axis_values[i - 1] < spec.axis_values[i]) || spec.axis_values[i - 1] <= 0.0)
            throw std::invalid_argument("axis values must be positive and strictly increasing");
    if (spec.axis_values[0] <= 0.0) throw std::invalid_argument("axis values must be positive");
    spec.seeds_per_point = static_cast<int>(kv.integer("seeds_per_point", 1));
    if (spec.seeds_per_point < 1) throw std::invalid_argument("seeds_per_point must be at least 1");
    return spec;
}

std::string format_solve_spec(const SolveSpec& spec) {
    char buf[128];
    std::string out;
    auto add = [&](const char* key, const char* fmt, auto value) {
        std::snprintf(buf, sizeof(buf), fmt, value);
        out += key;
        out += " = ";
        out += buf;
        out += '\n';
    };
    const ScenarioConfig& c = spec.scenario;
    add("radius_m", "%.10g", c.radius_m);
    add("n_sbs", "%d", c.n_sbs);
    add("n_users", "%d", c.n_users);
    add("n_files", "%d", c.n_files);
    out += "cache_bytes = ";
    for (std::size_t i = 0; i < c.cache_bytes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), i ? ",%.10g" : "%.10g", c.cache_bytes[i]);
        out += buf;
    }
    out += '\n';
    add("cache_spread", "%.10g", c.cache_spread);
    add("zipf_zeta", "%.10g", c.zipf_zeta);
    add("n_secondary_channels", "%d", c.n_secondary_channels);
    add("secondary_bw_hz", "%.10g", c.secondary_bw_hz);
    add("primary_bw_hz", "%.10g", c.primary_bw_hz);
    add("channels_per_sbs", "%d", c.channels_per_sbs);
    add("channels_per_user", "%d", c.channels_per_user);
    add("avg_file_bytes", "%.10g", c.avg_file_bytes);
    add("tx_range_m", "%.10g", c.tx_range_m);
    add("ir_factor", "%.10g", c.ir_factor);
    add("antennas_sbs", "%d", c.antennas_sbs);
    add("antennas_user", "%d", c.antennas_user);
    add("requests_per_user", "%d", c.requests_per_user);
    add("slot_seconds", "%.10g", c.slot_seconds);
    add("gain", "%.10g", c.gain);
    add("path_loss", "%.10g", c.path_loss);
    add("noise_w", "%.10g", c.noise_w);
    add("seed", "%llu", static_cast<unsigned long long>(c.seed));
    add("epsilon", "%.10g", spec.epsilon);
    out += std::string("objective = ") +
           (spec.objective == RmpObjective::MinSchedule ? "min_schedule" : "max_throughput") + "\n";
    out += std::string("pricer = ") +
           (spec.pricer == PricerKind::Exact ? "exact" : "sequential_fixing") + "\n";
    add("max_iterations", "%ld", spec.max_iterations);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace smallcell
