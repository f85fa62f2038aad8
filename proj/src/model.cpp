#include "smallcell/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace smallcell {
namespace {

// Deterministic helpers on top of mt19937_64: raw bits only, so generated
// scenarios are reproducible bit-for-bit for a fixed seed.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int n) {
    int v = static_cast<int>(uniform01(rng) * n);
    return std::min(v, n - 1);
}

Vec2 sample_disc(std::mt19937_64& rng, double radius) {
    double r = radius * std::sqrt(uniform01(rng));
    double theta = 2.0 * M_PI * uniform01(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<int> sample_channel_subset(std::mt19937_64& rng, int n_secondary, int count) {
    count = std::min(count, n_secondary);
    std::vector<int> ids(static_cast<std::size_t>(n_secondary));
    for (int i = 0; i < n_secondary; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    for (int i = 0; i < count; ++i) {
        int j = i + uniform_int(rng, n_secondary - i);
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(count));
    std::sort(ids.begin(), ids.end());
    return ids;
}

int sample_discrete(std::mt19937_64& rng, const std::vector<double>& cumulative) {
    double u = uniform01(rng);
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
}

void append(std::string& out, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out += buf;
}

}  // namespace

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool Node::can_use(int channel_id) const {
    return std::binary_search(channels.begin(), channels.end(), channel_id);
}

double RequestMatrix::total_demand_bits(const FileCatalog& catalog) const {
    double total = 0.0;
    for (int k = 0; k < n_users; ++k)
        for (int j = 0; j < n_files; ++j) total += at(k, j) * catalog.size_bits[static_cast<std::size_t>(j)];
    return total;
}

const Channel& Scenario::channel_by_id(int id) const {
    for (const Channel& c : channels)
        if (c.id == id) return c;
    throw std::invalid_argument("unknown channel id " + std::to_string(id));
}

double Scenario::rx_threshold(int channel_id) const {
    auto it = radio.rx_threshold_w.find(channel_id);
    if (it == radio.rx_threshold_w.end()) throw std::invalid_argument("no rx threshold for channel");
    return it->second;
}

double Scenario::interference_threshold(int channel_id) const {
    auto it = radio.interference_threshold_w.find(channel_id);
    if (it == radio.interference_threshold_w.end()) throw std::invalid_argument("no interference threshold for channel");
    return it->second;
}

double transmission_range(double power_w, double threshold_w, double gain, double path_loss) {
    if (power_w <= 0.0 || threshold_w <= 0.0 || gain <= 0.0 || path_loss <= 0.0)
        throw std::domain_error("transmission_range requires positive inputs");
    return std::pow(gain * power_w / threshold_w, 1.0 / path_loss);
}

double interference_range(double power_w, double interference_threshold_w, double gain, double path_loss) {
    if (power_w <= 0.0 || interference_threshold_w <= 0.0 || gain <= 0.0 || path_loss <= 0.0)
        throw std::domain_error("interference_range requires positive inputs");
    return std::pow(gain * power_w / interference_threshold_w, 1.0 / path_loss);
}

double power_for_range(double range_m, double threshold_w, double gain, double path_loss) {
    if (range_m <= 0.0 || threshold_w <= 0.0 || gain <= 0.0 || path_loss <= 0.0)
        throw std::domain_error("power_for_range requires positive inputs");
    return threshold_w * std::pow(range_m, path_loss) / gain;
}

double link_capacity(double bandwidth_hz, double distance_m, double power_w,
                     double gain, double path_loss, double noise_w) {
    if (bandwidth_hz <= 0.0 || noise_w <= 0.0 || path_loss <= 0.0 || gain <= 0.0)
        throw std::domain_error("link_capacity requires positive bandwidth, gain, path loss, noise");
    if (distance_m <= 0.0) throw std::domain_error("link_capacity requires positive distance");
    if (power_w < 0.0) throw std::domain_error("link_capacity requires nonnegative power");
    double snr = gain * std::pow(distance_m, -path_loss) * power_w / noise_w;
    return bandwidth_hz * std::log2(1.0 + snr);
}

double zipf_popularity(int rank, double zeta, int n_files) {
    if (n_files < 1) throw std::domain_error("zipf_popularity requires at least one file");
    if (rank < 1 || rank > n_files) throw std::domain_error("zipf rank out of range");
    if (zeta < 0.0) throw std::domain_error("zipf_popularity requires zeta >= 0");
    double denom = 0.0;
    for (int j = 1; j <= n_files; ++j) denom += std::pow(static_cast<double>(j), -zeta);
    return std::pow(static_cast<double>(rank), -zeta) / denom;
}

std::vector<double> zipf_distribution(double zeta, int n_files) {
    if (n_files < 1) throw std::domain_error("zipf_distribution requires at least one file");
    if (zeta < 0.0) throw std::domain_error("zipf_distribution requires zeta >= 0");
    std::vector<double> p(static_cast<std::size_t>(n_files));
    double denom = 0.0;
    for (int j = 1; j <= n_files; ++j) denom += std::pow(static_cast<double>(j), -zeta);
    for (int j = 1; j <= n_files; ++j) p[static_cast<std::size_t>(j - 1)] = std::pow(static_cast<double>(j), -zeta) / denom;
    return p;
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    if (config.n_users < 1 || config.n_sbs < 0 || config.n_files < 1)
        throw std::invalid_argument("scenario config requires users >= 1, sbs >= 0, files >= 1");
    if (config.n_secondary_channels < 1) throw std::invalid_argument("scenario config requires at least one secondary channel");
    if (config.radius_m <= 0.0 || config.tx_range_m <= 0.0 || config.secondary_bw_hz <= 0.0 ||
        config.primary_bw_hz <= 0.0 || config.avg_file_bytes <= 0.0)
        throw std::invalid_argument("scenario config requires positive radii, bandwidths, file size");
    if (config.ir_factor < 1.0) throw std::invalid_argument("ir_factor must be >= 1");
    if (config.channels_per_sbs < 1 || config.channels_per_user < 1)
        throw std::invalid_argument("channels per node must be >= 1");
    if (config.requests_per_user < 0) throw std::invalid_argument("requests_per_user must be >= 0");
    if (!(config.cache_bytes.size() == 1 || config.cache_bytes.size() == static_cast<std::size_t>(config.n_sbs)))
        throw std::invalid_argument("cache_bytes must be a scalar or one entry per SBS");

    // Each section draws from its own seeded stream, so growing one count
    // (say the file catalog) leaves the draws of every other section
    // untouched: sweeps over an axis stay paired on everything else.
    std::mt19937_64 rng_users(seed ^ 0x9e3779b97f4a7c15ULL);
    std::mt19937_64 rng_sbs(seed ^ 0xbf58476d1ce4e5b9ULL);
    std::mt19937_64 rng_catalog(seed ^ 0x94d049bb133111ebULL);
    std::mt19937_64 rng_requests(seed ^ 0xd6e8feb86659fd93ULL);

    Scenario s;
    s.seed = seed;
    s.cell_radius_m = config.radius_m;
    s.slot_seconds = config.slot_seconds;
    s.radio.gain = config.gain;
    s.radio.path_loss = config.path_loss;
    s.radio.noise_w = config.noise_w;

    s.channels.push_back({0, config.primary_bw_hz});
    for (int c = 1; c <= config.n_secondary_channels; ++c) s.channels.push_back({c, config.secondary_bw_hz});

    // Uniform receive threshold; interference threshold derived so that
    // IR = ir_factor * TR for every transmitter class.
    const double rx_threshold = 1e-10;
    const double ir_threshold = rx_threshold / std::pow(config.ir_factor, config.path_loss);
    for (const Channel& c : s.channels) {
        s.radio.rx_threshold_w[c.id] = rx_threshold;
        s.radio.interference_threshold_w[c.id] = ir_threshold;
    }

    // MBS at the center; its range covers the whole cell (2 * radius).
    s.mbs.kind = NodeKind::Mbs;
    s.mbs.position = {0.0, 0.0};
    s.mbs.antennas = 1;
    const double mbs_power = power_for_range(2.0 * config.radius_m, rx_threshold, config.gain, config.path_loss);
    for (const Channel& c : s.channels) {
        s.mbs.channels.push_back(c.id);
        s.mbs.tx_power_w[c.id] = mbs_power;
    }

    auto colliding = [&s](const Vec2& p) {
        if (p.x == s.mbs.position.x && p.y == s.mbs.position.y) return true;
        for (const Node& n : s.sbs)
            if (p.x == n.position.x && p.y == n.position.y) return true;
        for (const Node& n : s.users)
            if (p.x == n.position.x && p.y == n.position.y) return true;
        return false;
    };
    auto place = [&](std::mt19937_64& rng) {
        Vec2 p = sample_disc(rng, config.radius_m);
        while (colliding(p)) p = sample_disc(rng, config.radius_m);
        return p;
    };

    for (int k = 0; k < config.n_users; ++k) {
        Node node;
        node.kind = NodeKind::User;
        node.position = place(rng_users);
        node.antennas = config.antennas_user;
        node.channels = sample_channel_subset(rng_users, config.n_secondary_channels, config.channels_per_user);
        s.users.push_back(std::move(node));
    }

    const double sbs_power = power_for_range(config.tx_range_m, rx_threshold, config.gain, config.path_loss);
    const double cache_mean = config.cache_bytes.size() == 1 ? config.cache_bytes[0] : 0.0;
    std::vector<double> spread(static_cast<std::size_t>(config.n_sbs), 0.0);
    if (config.cache_spread > 0.0 && config.cache_bytes.size() == 1 && config.n_sbs > 0) {
        double mean = 0.0;
        for (double& u : spread) {
            u = (uniform01(rng_sbs) - 0.5) * config.cache_spread;
            mean += u;
        }
        mean /= config.n_sbs;
        for (double& u : spread) u -= mean;  // preserve the configured mean exactly
    }
    for (int n = 0; n < config.n_sbs; ++n) {
        Node node;
        node.kind = NodeKind::Sbs;
        node.position = place(rng_sbs);
        node.antennas = config.antennas_sbs;
        node.channels = sample_channel_subset(rng_sbs, config.n_secondary_channels, config.channels_per_sbs);
        double bytes = config.cache_bytes.size() == 1 ? cache_mean * (1.0 + spread[static_cast<std::size_t>(n)])
                                                      : config.cache_bytes[static_cast<std::size_t>(n)];
        node.cache_bits = bytes * 8.0;
        for (int c : node.channels) node.tx_power_w[c] = sbs_power;
        s.sbs.push_back(std::move(node));
    }

    // File catalog: sizes uniform in [0.5, 1.5] * average, rank = file id.
    s.catalog.size_bits.resize(static_cast<std::size_t>(config.n_files));
    for (double& bits : s.catalog.size_bits) bits = config.avg_file_bytes * 8.0 * (0.5 + uniform01(rng_catalog));
    s.catalog.popularity = zipf_distribution(config.zipf_zeta, config.n_files);

    s.requests.n_users = config.n_users;
    s.requests.n_files = config.n_files;
    s.requests.alpha.assign(static_cast<std::size_t>(config.n_users) * config.n_files, 0.0);
    std::vector<double> cumulative(s.catalog.popularity.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < cumulative.size(); ++j) {
        acc += s.catalog.popularity[j];
        cumulative[j] = acc;
    }
    for (int k = 0; k < config.n_users; ++k)
        for (int r = 0; r < config.requests_per_user; ++r)
            s.requests.at(k, sample_discrete(rng_requests, cumulative)) += 1.0;

    return s;
}

std::vector<CommTuple> enumerate_tuples(const Scenario& scenario) {
    std::vector<CommTuple> tuples;
    for (int tx = 0; tx < scenario.transmitter_count(); ++tx) {
        const Node& t = scenario.transmitter(tx);
        for (int k = 0; k < static_cast<int>(scenario.users.size()); ++k) {
            const Node& u = scenario.users[static_cast<std::size_t>(k)];
            double d = distance(t.position, u.position);
            for (int c : t.channels) {
                auto power = t.tx_power_w.find(c);
                if (power == t.tx_power_w.end() || power->second <= 0.0) continue;
                if (!u.can_use(c)) continue;
                double range = transmission_range(power->second, scenario.rx_threshold(c),
                                                  scenario.radio.gain, scenario.radio.path_loss);
                if (d > range) continue;
                double cap = link_capacity(scenario.channel_by_id(c).bandwidth_hz, d, power->second,
                                           scenario.radio.gain, scenario.radio.path_loss, scenario.radio.noise_w);
                tuples.push_back({tx, k, c, cap});
            }
        }
    }
    return tuples;
}

std::string Scenario::dump_text() const {
    std::string out;
    append(out, "scenario seed=%llu radius=%.17g slot=%.17g\n",
           static_cast<unsigned long long>(seed), cell_radius_m, slot_seconds);
    append(out, "radio g=%.17g gamma=%.17g eta=%.17g\n", radio.gain, radio.path_loss, radio.noise_w);
    for (const Channel& c : channels)
        append(out, "channel %d bw=%.17g pt=%.17g pi=%.17g\n", c.id, c.bandwidth_hz,
               radio.rx_threshold_w.at(c.id), radio.interference_threshold_w.at(c.id));
    auto dump_node = [&out](const char* tag, int idx, const Node& n) {
        append(out, "%s %d pos=(%.17g,%.17g) antennas=%d cache=%.17g ch=", tag, idx, n.position.x,
               n.position.y, n.antennas, n.cache_bits);
        for (int c : n.channels) append(out, "%d,", c);
        for (const auto& [c, p] : n.tx_power_w) append(out, " pw[%d]=%.17g", c, p);
        out += '\n';
    };
    dump_node("mbs", 0, mbs);
    for (std::size_t i = 0; i < sbs.size(); ++i) dump_node("sbs", static_cast<int>(i + 1), sbs[i]);
    for (std::size_t i = 0; i < users.size(); ++i) dump_node("user", static_cast<int>(i), users[i]);
    for (int j = 0; j < catalog.file_count(); ++j)
        append(out, "file %d size=%.17g pop=%.17g\n", j, catalog.size_bits[static_cast<std::size_t>(j)],
               catalog.popularity[static_cast<std::size_t>(j)]);
    for (int k = 0; k < requests.n_users; ++k)
        for (int j = 0; j < requests.n_files; ++j)
            if (requests.at(k, j) > 0.0) append(out, "req k=%d j=%d a=%.17g\n", k, j, requests.at(k, j));
    return out;
}

}  // namespace smallcell
