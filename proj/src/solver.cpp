#include "dshare/solver.hpp"

#include "response_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dshare {

BudgetExceeded::BudgetExceeded(std::uint64_t count, bool at_least, std::uint64_t budget)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "strategy space has " << (at_least ? "at least " : "") << count
             << " enumerated prefixes, budget is " << budget;
          return os.str();
      }()),
      count_(count), at_least_(at_least) {}

SeparationViolation::SeparationViolation(int t_, std::size_t first, std::size_t second, double first_value,
                                         double second_value)
    : std::logic_error([&] {
          std::ostringstream os;
          os.precision(17);
          os << "separation violated at t=" << t_ << ": info sets " << first << " and " << second
             << " share a key but have values " << first_value << " and " << second_value;
          return os.str();
      }()),
      t(t_), first_code(first), second_code(second) {}

std::string to_string(Backend backend) {
    switch (backend) {
    case Backend::Raw: return "raw";
    case Backend::SemiSeparated: return "semi-separated";
    case Backend::SeparatedPi: return "separated-pi";
    case Backend::InfoStateTheta: return "info-state-theta";
    }
    return "unknown";
}

GroupKey quantize(std::span<const double> probs) {
    GroupKey key;
    key.reserve(probs.size());
    for (double p : probs) key.push_back(std::llround(p / kQuantum));
    return key;
}

double expected_total_cost(const ProblemSpec& spec, const StrategyTuple& strategies) {
    const JointDistribution joint = joint_distribution(spec, strategies, spec.horizon);
    double total = 0.0;
    for (const auto& w : joint.paths) {
        double cost = 0.0;
        for (int t = 1; t <= spec.horizon; ++t)
            cost += spec.cost(t, w.path.states[t - 1], w.path.joint_actions[t - 1]);
        total += w.prob * cost;
    }
    return total;
}

double expected_cost_via_beliefs(const ProblemSpec& spec, const StrategyTuple& strategies, int k) {
    const InfoLayout layout(spec);
    const PrivateFilterTable table = private_filter_table(spec, strategies, k);
    const int K = spec.num_controllers;
    std::vector<std::size_t> privs(K);
    std::vector<int> actions(K);
    double total = 0.0;
    for (int t = 1; t <= spec.horizon; ++t) {
        const std::size_t others = layout.others_count(t, k);
        for (std::size_t code = 0; code < layout.info_count(t, k); ++code) {
            const double weight = table.prob[t - 1][code];
            if (weight <= 0.0) continue;
            const PrivateBelief& xi = *table.beliefs[t - 1][code];
            const std::size_t common = layout.common_part(t, k, code);
            actions[k] = strategies[k].at(t, code);
            double stage = 0.0;
            for (std::size_t r = 0; r < others; ++r) {
                layout.decode_others(t, k, r, privs);
                for (int j = 0; j < K; ++j)
                    if (j != k) actions[j] = strategies[j].at(t, layout.info_code(t, j, common, privs[j]));
                const int ja = spec.encode_joint_action(actions);
                for (int x = 0; x < spec.state_size; ++x) stage += xi.probs[x * others + r] * spec.cost(t, x, ja);
            }
            total += weight * stage;
        }
    }
    return total;
}

std::vector<std::vector<std::optional<double>>> conditional_cost_to_go(const ProblemSpec& spec,
                                                                       const StrategyTuple& strategies, int k) {
    const InfoLayout layout(spec);
    const JointDistribution joint = joint_distribution(spec, strategies, spec.horizon);
    std::vector<std::vector<std::optional<double>>> out(spec.horizon);
    for (int t = 1; t <= spec.horizon; ++t) {
        const std::size_t n = layout.info_count(t, k);
        std::vector<double> mass(n, 0.0), cost(n, 0.0);
        for (const auto& w : joint.paths) {
            const std::size_t code = layout.info_code_of(t, k, w.path.joint_obs, w.path.joint_actions);
            double remaining = 0.0;
            for (int s = t; s <= spec.horizon; ++s)
                remaining += spec.cost(s, w.path.states[s - 1], w.path.joint_actions[s - 1]);
            mass[code] += w.prob;
            cost[code] += w.prob * remaining;
        }
        out[t - 1].resize(n);
        for (std::size_t code = 0; code < n; ++code)
            if (mass[code] >= kZeroMass) out[t - 1][code] = cost[code] / mass[code];
    }
    return out;
}

BestResponse best_response_dp(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    check_strategies(spec, strategies);
    detail::ResponseModel model(spec, k, strategies);
    const InfoLayout& layout = model.layout();
    const int n = spec.horizon;

    BestResponse out;
    out.table.owner = k;
    out.table.backend = Backend::Raw;
    out.table.entries.resize(n);
    out.strategy.actions.resize(n);
    for (int t = n; t >= 1; --t) {
        auto& entries = out.table.entries[t - 1];
        entries.assign(layout.info_count(t, k), ValueEntry{});
        const auto continuation = [&](std::size_t next) {
            const ValueEntry& e = out.table.entries[t][next];
            return e.reachable ? e.value : 0.0;
        };
        for (std::size_t code = 0; code < entries.size(); ++code) {
            if (!model.belief(t, code)) continue;
            const auto [value, action] = model.minimize(t, code, continuation);
            entries[code] = ValueEntry{value, action, true};
        }
        auto& actions = out.strategy.actions[t - 1];
        actions.resize(entries.size());
        for (std::size_t code = 0; code < entries.size(); ++code) actions[code] = entries[code].action;
    }
    for (std::size_t code = 0; code < out.table.entries[0].size(); ++code) {
        const ValueEntry& e = out.table.entries[0][code];
        if (e.reachable) out.value += model.filters().prob[0][code] * e.value;
    }
    return out;
}

PbpResult pbp_solve(const ProblemSpec& spec, StrategyTuple initial, const PbpOptions& options) {
    if (!(options.epsilon > 0.0)) throw std::invalid_argument("pbp_solve: epsilon must be positive");
    check_strategies(spec, initial);
    PbpResult result;
    result.strategies = std::move(initial);
    result.payoff = expected_total_cost(spec, result.strategies);
    result.trace.push_back(result.payoff);
    for (int round = 1; round <= options.max_iters; ++round) {
        result.iterations = round;
        bool improved = false;
        for (int k = 0; k < spec.num_controllers; ++k) {
            BestResponse br = best_response_dp(spec, k, result.strategies);
            StrategyTuple candidate = result.strategies;
            candidate[k] = std::move(br.strategy);
            const double payoff = expected_total_cost(spec, candidate);
            if (payoff < result.payoff - options.epsilon) {
                result.strategies = std::move(candidate);
                result.payoff = payoff;
                result.trace.push_back(payoff);
                improved = true;
            }
        }
        if (!improved) {
            result.converged = true;
            break;
        }
    }
    return result;
}

Verification verify_pbp(const ProblemSpec& spec, const StrategyTuple& strategies, std::uint64_t budget) {
    check_strategies(spec, strategies);
    const double payoff = expected_total_cost(spec, strategies);
    Verification out;
    out.worst_gap = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.num_controllers; ++k) {
        BruteForceResult best = best_response_bruteforce(spec, k, strategies, budget);
        const double gap = payoff - best.payoff;
        if (gap > out.worst_gap) {
            out.worst_gap = gap;
            if (gap > kTolerance) out.witness = Witness{k, std::move(best.strategy), best.payoff};
        }
    }
    out.holds = out.worst_gap <= kTolerance;
    return out;
}

} // namespace dshare
