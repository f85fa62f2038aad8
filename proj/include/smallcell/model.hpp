// Problem instances for the small-cell caching/scheduling solver: network
// topology, radio range/capacity formulas, Zipf file catalog, and the
// enumeration of candidate communication tuples.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace smallcell {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

enum class NodeKind { Mbs, Sbs, User };

struct Channel {
    int id = 0;             // 0 = primary/basic, >=1 = secondary
    double bandwidth_hz = 0.0;
};

// Path-loss model constants plus per-channel receive/interference thresholds.
// Invariants: path_loss > 0, noise_w > 0, and P_I <= P_T per channel (so the
// interference range is at least the transmission range).
struct RadioConstants {
    double gain = 1.0;        // g
    double path_loss = 3.0;   // gamma
    double noise_w = 1e-13;   // eta
    std::map<int, double> rx_threshold_w;            // P_T per channel
    std::map<int, double> interference_threshold_w;  // P_I per channel
};

struct Node {
    NodeKind kind = NodeKind::User;
    Vec2 position;
    int antennas = 1;
    std::vector<int> channels;           // sorted channel ids usable by this node
    double cache_bits = 0.0;             // SBS only; users have none, MBS stores all
    std::map<int, double> tx_power_w;    // per-channel transmit power; transmitters only

    bool can_use(int channel_id) const;
};

struct FileCatalog {
    std::vector<double> size_bits;    // S_j
    std::vector<double> popularity;   // Zipf weights, sum to 1

    int file_count() const { return static_cast<int>(size_bits.size()); }
};

// alpha_kj: requests per slot, row-major over [user][file].
struct RequestMatrix {
    int n_users = 0;
    int n_files = 0;
    std::vector<double> alpha;

    double at(int user, int file) const { return alpha[static_cast<std::size_t>(user) * n_files + file]; }
    double& at(int user, int file) { return alpha[static_cast<std::size_t>(user) * n_files + file]; }
    bool demanded(int user, int file) const { return at(user, file) > 0.0; }
    double total_demand_bits(const FileCatalog& catalog) const;
};

// A full problem instance. Transmitters are indexed 0 = MBS, 1..N = SBS;
// users are indexed separately 0..K-1.
struct Scenario {
    RadioConstants radio;
    std::vector<Channel> channels;   // ascending id, channel 0 first
    Node mbs;
    std::vector<Node> sbs;
    std::vector<Node> users;
    FileCatalog catalog;
    RequestMatrix requests;
    double cell_radius_m = 0.0;
    double slot_seconds = 1.0;
    std::uint64_t seed = 0;

    int transmitter_count() const { return 1 + static_cast<int>(sbs.size()); }
    const Node& transmitter(int tx) const { return tx == 0 ? mbs : sbs[static_cast<std::size_t>(tx) - 1]; }
    const Channel& channel_by_id(int id) const;
    double rx_threshold(int channel_id) const;
    double interference_threshold(int channel_id) const;

    // Full-state dump with 17 significant digits; used for determinism checks
    // and debugging.
    std::string dump_text() const;
};

// A candidate single-hop transmission ((n,k),c) with its precomputed capacity.
struct CommTuple {
    int tx = 0;        // transmitter index, 0 = MBS
    int user = 0;      // receiver index
    int channel = 0;   // channel id
    double capacity_bps = 0.0;

    double capacity_per_slot(const Scenario& s) const { return capacity_bps * s.slot_seconds; }
};

// Generator parameters. Cache sizes accept a scalar (applied to every SBS) or
// one entry per SBS.
struct ScenarioConfig {
    double radius_m = 400.0;
    int n_sbs = 14;
    int n_users = 200;
    int n_files = 200;
    std::vector<double> cache_bytes = {4e9};
    double cache_spread = 0.0;        // 0 = homogeneous; 1 = +/-50% around the mean
    double zipf_zeta = 0.8;
    int n_secondary_channels = 10;
    double secondary_bw_hz = 400e3;
    double primary_bw_hz = 1e6;
    int channels_per_sbs = 5;         // clamped to the number of secondary channels
    int channels_per_user = 5;
    double avg_file_bytes = 400e6;
    double tx_range_m = 100.0;
    double ir_factor = 2.0;           // interference range = ir_factor * transmission range
    int antennas_sbs = 1;
    int antennas_user = 1;
    int requests_per_user = 1;
    double slot_seconds = 1.0;
    double gain = 1.0;
    double path_loss = 3.0;
    double noise_w = 1e-13;
    std::uint64_t seed = 1;
};

// TR = (g P / P_T)^(1/gamma). All inputs must be positive.
double transmission_range(double power_w, double threshold_w, double gain, double path_loss);

// IR = (g P / P_I)^(1/gamma).
double interference_range(double power_w, double interference_threshold_w, double gain, double path_loss);

// Inverse of transmission_range: the power that yields the given range.
double power_for_range(double range_m, double threshold_w, double gain, double path_loss);

// Shannon capacity W log2(1 + g d^-gamma P / eta) in bits/second.
double link_capacity(double bandwidth_hz, double distance_m, double power_w,
                     double gain, double path_loss, double noise_w);

// Probability of the file of rank m (1-based) under Zipf(zeta) over J files.
double zipf_popularity(int rank, double zeta, int n_files);

// All J Zipf probabilities at once; sums to 1.
std::vector<double> zipf_distribution(double zeta, int n_files);

// Deterministic scenario construction: MBS at the center, SBS and users
// uniform over the disc, per-node channel subsets, Zipf-drawn demand.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Every ((n,k),c) with the channel usable (and powered) at both ends and the
// user inside the transmitter's range, ordered by (tx, user, channel).
std::vector<CommTuple> enumerate_tuples(const Scenario& scenario);

}  // namespace smallcell
