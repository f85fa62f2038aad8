#include "smallcell/conflict.hpp"

#include <cstdio>
#include <set>
#include <stdexcept>

namespace smallcell {
namespace {

double node_interference_range(const Scenario& s, int tx, int channel) {
    const Node& t = s.transmitter(tx);
    return interference_range(t.tx_power_w.at(channel), s.interference_threshold(channel),
                              s.radio.gain, s.radio.path_loss);
}

// Tracks membership, adjacency against chosen tuples, and antenna budgets so
// the enumeration can test extensions incrementally.
struct IncrementalSet {
    const Scenario& scenario;
    const std::vector<CommTuple>& tuples;
    const ConflictGraph& graph;
    IndependentSet incidence;
    std::vector<int> tx_load;
    std::vector<int> rx_load;
    std::vector<int> members;

    IncrementalSet(const Scenario& s, const std::vector<CommTuple>& t, const ConflictGraph& g)
        : scenario(s), tuples(t), graph(g),
          incidence(t.size(), 0),
          tx_load(static_cast<std::size_t>(s.transmitter_count()), 0),
          rx_load(s.users.size(), 0) {}

    bool can_add(int v) const {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        if (tx_load[static_cast<std::size_t>(t.tx)] + 1 > scenario.transmitter(t.tx).antennas) return false;
        if (rx_load[static_cast<std::size_t>(t.user)] + 1 > scenario.users[static_cast<std::size_t>(t.user)].antennas) return false;
        for (int m : members)
            if (graph.edge(v, m)) return false;
        return true;
    }
    void add(int v) {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        incidence[static_cast<std::size_t>(v)] = 1;
        ++tx_load[static_cast<std::size_t>(t.tx)];
        ++rx_load[static_cast<std::size_t>(t.user)];
        members.push_back(v);
    }
    void remove(int v) {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        incidence[static_cast<std::size_t>(v)] = 0;
        --tx_load[static_cast<std::size_t>(t.tx)];
        --rx_load[static_cast<std::size_t>(t.user)];
        members.pop_back();
    }
    bool maximal() const {
        for (int v = 0; v < static_cast<int>(tuples.size()); ++v)
            if (!incidence[static_cast<std::size_t>(v)] && can_add(v)) return false;
        return true;
    }
};

}  // namespace

int ConflictGraph::edge_count() const {
    int count = 0;
    for (int u = 0; u < n_vertices; ++u)
        for (int v = u + 1; v < n_vertices; ++v)
            if (edge(u, v)) ++count;
    return count;
}

std::string ConflictGraph::dump_edge_list(const std::vector<CommTuple>& tuples) const {
    std::string out;
    char buf[128];
    for (int v = 0; v < n_vertices; ++v) {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        std::snprintf(buf, sizeof(buf), "v %d tx=%d user=%d channel=%d capacity=%.10g\n",
                      v, t.tx, t.user, t.channel, t.capacity_bps);
        out += buf;
    }
    for (int u = 0; u < n_vertices; ++u)
        for (int v = u + 1; v < n_vertices; ++v)
            if (edge(u, v)) {
                std::snprintf(buf, sizeof(buf), "e %d %d\n", u, v);
                out += buf;
            }
    return out;
}

bool conflicts(const CommTuple& a, const CommTuple& b, const Scenario& scenario) {
    if (a.channel != b.channel) return false;
    if (a.tx == b.tx || a.user == b.user) return true;
    const Vec2& rx_a = scenario.users[static_cast<std::size_t>(a.user)].position;
    const Vec2& rx_b = scenario.users[static_cast<std::size_t>(b.user)].position;
    const Vec2& tx_a = scenario.transmitter(a.tx).position;
    const Vec2& tx_b = scenario.transmitter(b.tx).position;
    if (distance(rx_a, tx_b) <= node_interference_range(scenario, b.tx, b.channel)) return true;
    if (distance(rx_b, tx_a) <= node_interference_range(scenario, a.tx, a.channel)) return true;
    return false;
}

ConflictGraph build_conflict_graph(const Scenario& scenario, const std::vector<CommTuple>& tuples) {
    ConflictGraph g;
    g.n_vertices = static_cast<int>(tuples.size());
    g.adjacency.assign(tuples.size() * tuples.size(), 0);
    for (int u = 0; u < g.n_vertices; ++u)
        for (int v = u + 1; v < g.n_vertices; ++v)
            if (conflicts(tuples[static_cast<std::size_t>(u)], tuples[static_cast<std::size_t>(v)], scenario)) {
                g.adjacency[static_cast<std::size_t>(u) * g.n_vertices + v] = 1;
                g.adjacency[static_cast<std::size_t>(v) * g.n_vertices + u] = 1;
            }
    return g;
}

bool is_independent(const IndependentSet& candidate, const Scenario& scenario,
                    const std::vector<CommTuple>& tuples) {
    if (candidate.size() != tuples.size())
        throw std::invalid_argument("incidence length does not match tuple count");
    std::vector<int> members;
    for (std::size_t v = 0; v < candidate.size(); ++v)
        if (candidate[v]) members.push_back(static_cast<int>(v));

    std::vector<int> tx_load(static_cast<std::size_t>(scenario.transmitter_count()), 0);
    std::vector<int> rx_load(scenario.users.size(), 0);
    for (int v : members) {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        if (++tx_load[static_cast<std::size_t>(t.tx)] > scenario.transmitter(t.tx).antennas) return false;
        if (++rx_load[static_cast<std::size_t>(t.user)] > scenario.users[static_cast<std::size_t>(t.user)].antennas) return false;
    }
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (conflicts(tuples[static_cast<std::size_t>(members[i])],
                          tuples[static_cast<std::size_t>(members[j])], scenario))
                return false;
    return true;
}

bool is_maximal(const IndependentSet& set, const Scenario& scenario,
                const std::vector<CommTuple>& tuples) {
    if (!is_independent(set, scenario, tuples))
        throw std::invalid_argument("is_maximal requires an independent set");
    IndependentSet extended = set;
    for (std::size_t v = 0; v < tuples.size(); ++v) {
        if (extended[v]) continue;
        extended[v] = 1;
        bool ok = is_independent(extended, scenario, tuples);
        extended[v] = 0;
        if (ok) return false;
    }
    return true;
}

std::vector<IndependentSet> enumerate_independent_sets(const Scenario& scenario,
                                                       const std::vector<CommTuple>& tuples,
                                                       int max_tuples_guard) {
    if (static_cast<int>(tuples.size()) > max_tuples_guard)
        throw std::invalid_argument("tuple count exceeds the enumeration guard");
    ConflictGraph graph = build_conflict_graph(scenario, tuples);
    IncrementalSet state(scenario, tuples, graph);
    std::set<IndependentSet> found;

    // Include/exclude recursion visiting every independent set once; maximal
    // ones are kept.
    auto recurse = [&](auto&& self, int v) -> void {
        if (v == static_cast<int>(tuples.size())) {
            if (state.maximal()) found.insert(state.incidence);
            return;
        }
        if (state.can_add(v)) {
            state.add(v);
            self(self, v + 1);
            state.remove(v);
        }
        self(self, v + 1);
    };
    recurse(recurse, 0);

    std::vector<IndependentSet> out(found.begin(), found.end());
    for (const IndependentSet& s : out)
        if (!is_independent(s, scenario, tuples))
            throw std::logic_error("enumerated set failed the independence predicate");
    return out;
}

std::vector<IndependentSet> enumerate_all_independent_sets(const Scenario& scenario,
                                                           const std::vector<CommTuple>& tuples,
                                                           int max_tuples_guard) {
    if (static_cast<int>(tuples.size()) > max_tuples_guard)
        throw std::invalid_argument("tuple count exceeds the enumeration guard");
    ConflictGraph graph = build_conflict_graph(scenario, tuples);
    IncrementalSet state(scenario, tuples, graph);
    std::vector<IndependentSet> out;
    auto recurse = [&](auto&& self, int v) -> void {
        if (v == static_cast<int>(tuples.size())) {
            out.push_back(state.incidence);
            return;
        }
        if (state.can_add(v)) {
            state.add(v);
            self(self, v + 1);
            state.remove(v);
        }
        self(self, v + 1);
    };
    recurse(recurse, 0);
    return out;
}

}  // namespace smallcell
