#include "dshare/solver.hpp"

#include <algorithm>
#include <limits>

namespace dshare {

namespace {

// One positive-probability joint history before the actions of epoch t are applied.
struct Node {
    int state = 0;
    std::vector<int> joint_obs;
    std::vector<int> joint_actions;
    std::vector<std::size_t> codes; // info-set code of every controller at t
    double prob = 0.0;
};

class Enumerator {
public:
    Enumerator(const ProblemSpec& spec, int k, const StrategyTuple& strategies)
        : spec_(spec), layout_(spec), k_(k), strategies_(strategies) {}

    std::vector<Node> initial() const {
        std::vector<Node> out;
        for (int x = 0; x < spec_.state_size; ++x) {
            for (int jo = 0; jo < spec_.joint_obs_count(); ++jo) {
                const double p = spec_.initial_dist[x] * spec_.joint_observation(1, x, 0, jo);
                if (p == 0.0) continue;
                Node node{x, {jo}, {}, {}, p};
                fill_codes(1, node);
                out.push_back(std::move(node));
            }
        }
        return out;
    }

    /// Reachable info sets of controller k in canonical order.
    std::vector<std::size_t> reachable(const std::vector<Node>& frontier) const {
        std::vector<std::size_t> out;
        for (const Node& node : frontier) out.push_back(node.codes[k_]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    int joint_action(int t, const Node& node, int own_action) const {
        std::vector<int> actions(spec_.num_controllers);
        for (int j = 0; j < spec_.num_controllers; ++j)
            actions[j] = j == k_ ? own_action : strategies_[j].at(t, node.codes[j]);
        return spec_.encode_joint_action(actions);
    }

    /// Applies controller k's epoch-t actions; returns the stage cost and fills the next frontier.
    double advance(int t, const std::vector<Node>& frontier, const std::vector<int>& own_actions,
                   std::vector<Node>* next) const {
        double cost = 0.0;
        for (const Node& node : frontier) {
            const int ja = joint_action(t, node, own_actions[node.codes[k_]]);
            cost += node.prob * spec_.cost(t, node.state, ja);
            if (!next) continue;
            for (int xn = 0; xn < spec_.state_size; ++xn) {
                const double ps = node.prob * spec_.transition(t, node.state, ja, xn);
                if (ps == 0.0) continue;
                for (int jo = 0; jo < spec_.joint_obs_count(); ++jo) {
                    const double p = ps * spec_.joint_observation(t + 1, xn, ja, jo);
                    if (p == 0.0) continue;
                    Node child{xn, node.joint_obs, node.joint_actions, {}, p};
                    child.joint_obs.push_back(jo);
                    child.joint_actions.push_back(ja);
                    fill_codes(t + 1, child);
                    next->push_back(std::move(child));
                }
            }
        }
        return cost;
    }

    const ProblemSpec& spec() const { return spec_; }
    const InfoLayout& layout() const { return layout_; }
    int controller() const { return k_; }

private:
    void fill_codes(int t, Node& node) const {
        node.codes.resize(spec_.num_controllers);
        for (int j = 0; j < spec_.num_controllers; ++j)
            node.codes[j] = layout_.info_code_of(t, j, node.joint_obs, node.joint_actions);
    }

    const ProblemSpec& spec_;
    InfoLayout layout_;
    int k_;
    const StrategyTuple& strategies_;
};

// Advances an odometer over |U|^size assignments; false once it wraps around.
bool next_assignment(std::vector<int>& digits, int radix) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < radix) return true;
        digits[i] = 0;
    }
    return false;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap, bool& saturated) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base > 1 && r > cap / base) {
            saturated = true;
            return cap + 1;
        }
        r *= base;
    }
    return r;
}

class Search {
public:
    Search(const Enumerator& e, Strategy& scratch) : e_(e), scratch_(scratch) {}

    void run(int t, const std::vector<Node>& frontier, double accumulated) {
        const ProblemSpec& spec = e_.spec();
        const int k = e_.controller();
        const int nu = spec.action_sizes[k];
        const auto codes = e_.reachable(frontier);
        auto& own = scratch_.actions[t - 1];

        if (t == spec.horizon) {
            // The last action only enters the last stage cost, so it is chosen per info set.
            std::vector<double> per_action(own.size() * nu, 0.0);
            for (const Node& node : frontier)
                for (int u = 0; u < nu; ++u)
                    per_action[node.codes[k] * nu + u] +=
                        node.prob * spec.cost(t, node.state, e_.joint_action(t, node, u));
            double total = accumulated;
            for (std::size_t code : codes) {
                int arg = 0;
                for (int u = 1; u < nu; ++u)
                    if (per_action[code * nu + u] < per_action[code * nu + arg] - kTieTolerance) arg = u;
                own[code] = arg;
                total += per_action[code * nu + arg];
            }
            ++enumerated;
            if (!found || total < best_payoff - kTieTolerance) {
                found = true;
                best_payoff = total;
                best = scratch_;
            }
            for (std::size_t code : codes) own[code] = 0;
            return;
        }

        std::vector<int> digits(codes.size(), 0);
        do {
            for (std::size_t i = 0; i < codes.size(); ++i) own[codes[i]] = digits[i];
            std::vector<Node> next;
            const double cost = e_.advance(t, frontier, own, &next);
            run(t + 1, next, accumulated + cost);
        } while (next_assignment(digits, nu));
        for (std::size_t code : codes) own[code] = 0;
    }

    bool found = false;
    double best_payoff = 0.0;
    Strategy best;
    std::uint64_t enumerated = 0;

private:
    const Enumerator& e_;
    Strategy& scratch_;
};

std::uint64_t count_prefixes(const Enumerator& e, Strategy& scratch, int t, const std::vector<Node>& frontier,
                             std::uint64_t budget, bool& saturated) {
    const ProblemSpec& spec = e.spec();
    const int nu = spec.action_sizes[e.controller()];
    if (t == spec.horizon) return 1;
    const auto codes = e.reachable(frontier);
    if (t == spec.horizon - 1) return saturating_pow(nu, codes.size(), budget, saturated);
    auto& own = scratch.actions[t - 1];
    std::uint64_t total = 0;
    std::vector<int> digits(codes.size(), 0);
    do {
        for (std::size_t i = 0; i < codes.size(); ++i) own[codes[i]] = digits[i];
        std::vector<Node> next;
        e.advance(t, frontier, own, &next);
        total += count_prefixes(e, scratch, t + 1, next, budget, saturated);
        if (total > budget) {
            saturated = true;
            break;
        }
    } while (next_assignment(digits, nu));
    for (std::size_t code : codes) own[code] = 0;
    return total;
}

} // namespace

std::uint64_t bruteforce_count(const ProblemSpec& spec, int k, const StrategyTuple& strategies, std::uint64_t budget) {
    check_strategies(spec, strategies);
    const Enumerator e(spec, k, strategies);
    Strategy scratch = zero_strategy(spec, k);
    bool saturated = false;
    return count_prefixes(e, scratch, 1, e.initial(), budget, saturated);
}

BruteForceResult best_response_bruteforce(const ProblemSpec& spec, int k, const StrategyTuple& strategies,
                                          std::uint64_t budget) {
    check_strategies(spec, strategies);
    const Enumerator e(spec, k, strategies);
    Strategy scratch = zero_strategy(spec, k);
    bool saturated = false;
    const auto frontier = e.initial();
    const std::uint64_t count = count_prefixes(e, scratch, 1, frontier, budget, saturated);
    if (count > budget) throw BudgetExceeded(count, saturated, budget);

    Search search(e, scratch);
    search.run(1, frontier, 0.0);
    return BruteForceResult{search.best_payoff, std::move(search.best), search.enumerated};
}

} // namespace dshare
