#include "smallcell/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smallcell {
namespace {

std::vector<double> tuple_weights(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                  const std::vector<double>& link_price) {
    if (link_price.size() != tuples.size())
        throw std::invalid_argument("price vector length does not match tuple count");
    std::vector<double> w(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        double price = link_price[t];
        if (price < -1e-9) throw std::invalid_argument("link prices must be nonnegative");
        w[t] = std::max(price, 0.0) * tuples[t].capacity_per_slot(scenario);
    }
    return w;
}

// Depth-first include/exclude search over positive-weight tuples sorted by
// weight. The bound is the residual sum of unexplored positive weights.
struct BranchAndBound {
    const Scenario& scenario;
    const std::vector<CommTuple>& tuples;
    const ConflictGraph& graph;
    const std::vector<double>& weights;
    PricingTieBreak tie_break;

    std::vector<int> order;    // candidate tuples, weight descending
    std::vector<double> suffix;
    std::vector<int> chosen;
    std::vector<int> tx_load, rx_load;
    IndependentSet current;
    IndependentSet best;
    double current_beta = 0.0;
    double best_beta = 0.0;

    explicit BranchAndBound(const Scenario& s, const std::vector<CommTuple>& t,
                            const ConflictGraph& g, const std::vector<double>& w, PricingTieBreak tb)
        : scenario(s), tuples(t), graph(g), weights(w), tie_break(tb),
          tx_load(static_cast<std::size_t>(s.transmitter_count()), 0),
          rx_load(s.users.size(), 0),
          current(t.size(), 0), best(t.size(), 0) {
        for (std::size_t v = 0; v < t.size(); ++v)
            if (w[v] > 0.0) order.push_back(static_cast<int>(v));
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)];
        });
        suffix.assign(order.size() + 1, 0.0);
        for (std::size_t i = order.size(); i-- > 0;)
            suffix[i] = suffix[i + 1] + weights[static_cast<std::size_t>(order[i])];
    }

    bool lex_better(const IndependentSet& a, const IndependentSet& b) const {
        return tie_break == PricingTieBreak::PreferLowIndex
                   ? std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())
                   : std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }

    bool can_add(int v) const {
        const CommTuple& t = tuples[static_cast<std::size_t>(v)];
        if (tx_load[static_cast<std::size_t>(t.tx)] + 1 > scenario.transmitter(t.tx).antennas) return false;
        if (rx_load[static_cast<std::size_t>(t.user)] + 1 > scenario.users[static_cast<std::size_t>(t.user)].antennas) return false;
        for (int m : chosen)
            if (graph.edge(v, m)) return false;
        return true;
    }

    void consider_current() {
        // Candidates compare by the canonical index-order sum so the reported
        // optimum is bit-identical to an index-order recomputation.
        double canonical = 0.0;
        for (std::size_t v = 0; v < current.size(); ++v)
            if (current[v]) canonical += weights[v];
        if (canonical > best_beta || (canonical == best_beta && lex_better(current, best))) {
            best_beta = canonical;
            best = current;
        }
    }

    void search(std::size_t depth) {
        if (current_beta + suffix[depth] < best_beta - 1e-12) return;  // cannot improve
        if (depth == order.size()) {
            consider_current();
            return;
        }
        int v = order[depth];
        if (can_add(v)) {
            const CommTuple& t = tuples[static_cast<std::size_t>(v)];
            chosen.push_back(v);
            ++tx_load[static_cast<std::size_t>(t.tx)];
            ++rx_load[static_cast<std::size_t>(t.user)];
            current[static_cast<std::size_t>(v)] = 1;
            current_beta += weights[static_cast<std::size_t>(v)];
            search(depth + 1);
            current_beta -= weights[static_cast<std::size_t>(v)];
            current[static_cast<std::size_t>(v)] = 0;
            --tx_load[static_cast<std::size_t>(t.tx)];
            --rx_load[static_cast<std::size_t>(t.user)];
            chosen.pop_back();
        }
        search(depth + 1);
    }
};

}  // namespace

double column_beta(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                   const std::vector<double>& link_price, const IndependentSet& column) {
    if (column.size() != tuples.size())
        throw std::invalid_argument("column length does not match tuple count");
    std::vector<double> w = tuple_weights(scenario, tuples, link_price);
    double beta = 0.0;
    for (std::size_t t = 0; t < tuples.size(); ++t)
        if (column[t]) beta += w[t];
    return beta;
}

double reduced_cost(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                    const std::vector<double>& link_price, const IndependentSet& column) {
    return 1.0 - column_beta(scenario, tuples, link_price, column);
}

PricingResult solve_pricing_exact(const Scenario& scenario, const std::vector<CommTuple>& tuples,
                                  const ConflictGraph& graph, const std::vector<double>& link_price,
                                  PricingTieBreak tie_break) {
    std::vector<double> w = tuple_weights(scenario, tuples, link_price);
    BranchAndBound bb(scenario, tuples, graph, w, tie_break);
    bb.search(0);
    PricingResult result;
    result.column = bb.best;
    result.beta = column_beta(scenario, tuples, link_price, result.column);  // canonical order
    result.reduced_cost = 1.0 - result.beta;
    return result;
}

SequentialFixingPricer::SequentialFixingPricer(const Scenario& scenario, std::vector<CommTuple> tuples)
    : scenario_(scenario), tuples_(std::move(tuples)) {
    const std::size_t q = tuples_.size();
    relaxation_.sense = lp::Sense::Maximize;
    for (std::size_t t = 0; t < q; ++t) relaxation_.add_variable(0.0, 0.0, 1.0);
    auto blank = [q] { return std::vector<double>(q, 0.0); };

    // One link per (transmitter, channel) and per (receiver, channel).
    for (int tx = 0; tx < scenario_.transmitter_count(); ++tx)
        for (const Channel& ch : scenario_.channels) {
            auto row = blank();
            int count = 0;
            for (std::size_t t = 0; t < q; ++t)
                if (tuples_[t].tx == tx && tuples_[t].channel == ch.id) {
                    row[t] = 1.0;
                    ++count;
                }
            if (count > 1) relaxation_.add_row(std::move(row), lp::Relation::LessEqual, 1.0);
        }
    for (int k = 0; k < static_cast<int>(scenario_.users.size()); ++k)
        for (const Channel& ch : scenario_.channels) {
            auto row = blank();
            int count = 0;
            for (std::size_t t = 0; t < q; ++t)
                if (tuples_[t].user == k && tuples_[t].channel == ch.id) {
                    row[t] = 1.0;
                    ++count;
                }
            if (count > 1) relaxation_.add_row(std::move(row), lp::Relation::LessEqual, 1.0);
        }

    // Antenna budgets.
    for (int tx = 0; tx < scenario_.transmitter_count(); ++tx) {
        auto row = blank();
        int count = 0;
        for (std::size_t t = 0; t < q; ++t)
            if (tuples_[t].tx == tx) {
                row[t] = 1.0;
                ++count;
            }
        if (count > scenario_.transmitter(tx).antennas)
            relaxation_.add_row(std::move(row), lp::Relation::LessEqual, scenario_.transmitter(tx).antennas);
    }
    for (int k = 0; k < static_cast<int>(scenario_.users.size()); ++k) {
        auto row = blank();
        int count = 0;
        for (std::size_t t = 0; t < q; ++t)
            if (tuples_[t].user == k) {
                row[t] = 1.0;
                ++count;
            }
        if (count > scenario_.users[static_cast<std::size_t>(k)].antennas)
            relaxation_.add_row(std::move(row), lp::Relation::LessEqual,
                                scenario_.users[static_cast<std::size_t>(k)].antennas);
    }

    // Interference: an active tuple excludes same-channel tuples from other
    // transmitters whose signal reaches this receiver.
    for (std::size_t t = 0; t < q; ++t) {
        auto row = blank();
        row[t] = 1.0;
        int others = 0;
        for (std::size_t o = 0; o < q; ++o) {
            if (o == t) continue;
            const CommTuple& a = tuples_[t];
            const CommTuple& b = tuples_[o];
            if (b.channel != a.channel || b.tx == a.tx || b.user == a.user) continue;
            const Node& other_tx = scenario_.transmitter(b.tx);
            double ir = interference_range(other_tx.tx_power_w.at(b.channel),
                                           scenario_.interference_threshold(b.channel),
                                           scenario_.radio.gain, scenario_.radio.path_loss);
            if (distance(scenario_.users[static_cast<std::size_t>(a.user)].position, other_tx.position) <= ir) {
                row[o] = 1.0;
                ++others;
            }
        }
        if (others > 0) relaxation_.add_row(std::move(row), lp::Relation::LessEqual, 1.0);
    }
}

PricingResult SequentialFixingPricer::solve(const std::vector<double>& link_price) {
    std::vector<double> w = tuple_weights(scenario_, tuples_, link_price);
    const std::size_t q = tuples_.size();

    if (!warm_) warm_.emplace(relaxation_);
    warm_->set_objective(w);
    lp::LpSolution sol = warm_->solve();
    if (sol.status != lp::LpStatus::Optimal)
        throw lp::SolverError("pricing relaxation failed to solve");

    // Fix fractional variables one at a time; every round re-solves the
    // relaxation with the accumulated fixes.
    std::vector<int> fixed(q, -1);  // -1 free, else 0/1
    auto fractional = [](double v) { return std::min(v, 1.0 - v) > 1e-6; };
    for (std::size_t round = 0; round < q; ++round) {
        int pick = -1;
        double pick_value = -1.0;
        for (std::size_t t = 0; t < q; ++t)
            if (fixed[t] < 0 && fractional(sol.primal[t]) && sol.primal[t] > pick_value) {
                pick = static_cast<int>(t);
                pick_value = sol.primal[t];
            }
        if (pick < 0) break;

        lp::LpProblem trial = relaxation_;
        trial.objective = w;
        for (std::size_t t = 0; t < q; ++t)
            if (fixed[t] >= 0) trial.lower[t] = trial.upper[t] = fixed[t];
        trial.lower[static_cast<std::size_t>(pick)] = trial.upper[static_cast<std::size_t>(pick)] = 1.0;
        lp::LpSolution trial_sol = lp::solve_lp(trial);
        if (trial_sol.status == lp::LpStatus::Optimal) {
            fixed[static_cast<std::size_t>(pick)] = 1;
            sol = std::move(trial_sol);
        } else {
            fixed[static_cast<std::size_t>(pick)] = 0;
            trial.lower[static_cast<std::size_t>(pick)] = trial.upper[static_cast<std::size_t>(pick)] = 0.0;
            trial_sol = lp::solve_lp(trial);
            if (trial_sol.status != lp::LpStatus::Optimal)
                throw lp::SolverError("sequential fixing lost feasibility");
            sol = std::move(trial_sol);
        }
    }

    PricingResult result;
    result.column.assign(q, 0);
    for (std::size_t t = 0; t < q; ++t)
        if (sol.primal[t] >= 0.5) result.column[t] = 1;

    // The integral system equals the independence predicate; degrade greedily
    // if rounding ever produced a conflict.
    if (!is_independent(result.column, scenario_, tuples_)) {
        std::vector<std::size_t> members;
        for (std::size_t t = 0; t < q; ++t)
            if (result.column[t]) members.push_back(t);
        std::stable_sort(members.begin(), members.end(),
                         [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
        for (std::size_t m : members) {
            if (is_independent(result.column, scenario_, tuples_)) break;
            result.column[m] = 0;
        }
    }
    result.beta = column_beta(scenario_, tuples_, link_price, result.column);
    result.reduced_cost = 1.0 - result.beta;
    return result;
}

PricingResult solve_pricing_sequential_fixing(const Scenario& scenario,
                                              const std::vector<CommTuple>& tuples,
                                              const std::vector<double>& link_price) {
    SequentialFixingPricer pricer(scenario, tuples);
    return pricer.solve(link_price);
}

}  // namespace smallcell
