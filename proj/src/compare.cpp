#include "dshare/compare.hpp"

#include <cmath>

namespace dshare {

namespace {

// Folds one (oracle, recursion) pair into the cell; the oracle decides reachability.
template <class Belief>
void check_pair(CompareCell& cell, const Filtered<Belief>& oracle, const Filtered<Belief>& recursion, int t,
                std::size_t code) {
    if (!oracle) return;
    ++cell.checked;
    if (!recursion || recursion->probs.size() != oracle->probs.size()) {
        cell.pass = false;
        if (cell.detail.empty())
            cell.detail = "recursion undefined at t=" + std::to_string(t) + " code=" + std::to_string(code);
        return;
    }
    for (std::size_t i = 0; i < oracle->probs.size(); ++i) {
        const double err = std::abs(oracle->probs[i] - recursion->probs[i]);
        cell.max_error = std::max(cell.max_error, err);
        if (err > kTolerance && cell.pass) {
            cell.pass = false;
            cell.detail = "mismatch at t=" + std::to_string(t) + " code=" + std::to_string(code);
        }
    }
}

} // namespace

CompareCell compare_private_filter(const ProblemSpec& spec, const StrategyTuple& strategies, int k) {
    CompareCell cell;
    cell.name = "xi_" + std::to_string(k);
    const PrivateFilterTable table = private_filter_table(spec, strategies, k);
    for (int t = 1; t <= spec.horizon; ++t) {
        const auto oracle = private_conditionals_from_joint(spec, joint_distribution(spec, strategies, t), k);
        for (std::size_t code = 0; code < oracle.beliefs.size(); ++code)
            check_pair(cell, oracle.beliefs[code], table.beliefs[t - 1][code], t, code);
    }
    return cell;
}

CompareCell compare_pi_filter(const ProblemSpec& spec, const StrategyTuple& strategies) {
    CompareCell cell;
    cell.name = "pi";
    const auto table = pi_filter_table(spec);
    for (int t = spec.delay + 1; t <= spec.horizon; ++t) {
        const auto oracle = pi_from_joint(spec, joint_distribution(spec, strategies, t));
        for (std::size_t code = 0; code < oracle.size(); ++code)
            check_pair(cell, oracle[code], table[t - 1][code], t, code);
    }
    return cell;
}

CompareCell compare_theta_filter(const ProblemSpec& spec, const StrategyTuple& strategies) {
    CompareCell cell;
    cell.name = "theta";
    const auto table = theta_filter_table(spec, strategies);
    for (int t = 1; t <= spec.horizon; ++t) {
        const auto oracle = theta_from_joint(spec, joint_distribution(spec, strategies, t));
        for (std::size_t code = 0; code < oracle.size(); ++code)
            check_pair(cell, oracle[code], table[t - 1][code], t, code);
    }
    return cell;
}

CompareCell compare_dp_bruteforce(const ProblemSpec& spec, const StrategyTuple& strategies, int k,
                                  std::uint64_t budget) {
    CompareCell cell;
    cell.name = "dp_vs_bruteforce_" + std::to_string(k);
    const double dp = best_response_dp(spec, k, strategies).value;
    const double bf = best_response_bruteforce(spec, k, strategies, budget).payoff;
    cell.checked = 1;
    cell.max_error = std::abs(dp - bf);
    cell.pass = cell.max_error <= kTolerance;
    if (!cell.pass) cell.detail = "dp=" + std::to_string(dp) + " bruteforce=" + std::to_string(bf);
    return cell;
}

std::vector<CompareCell> compare_all(const ProblemSpec& spec, const StrategyTuple& strategies, std::uint64_t budget) {
    std::vector<CompareCell> cells;
    for (int k = 0; k < spec.num_controllers; ++k) cells.push_back(compare_private_filter(spec, strategies, k));
    cells.push_back(compare_pi_filter(spec, strategies));
    cells.push_back(compare_theta_filter(spec, strategies));
    for (int k = 0; k < spec.num_controllers; ++k) cells.push_back(compare_dp_bruteforce(spec, strategies, k, budget));
    return cells;
}

json cell_to_json(const CompareCell& cell) {
    return {{"name", cell.name},
            {"pass", cell.pass},
            {"max_error", cell.max_error},
            {"checked", cell.checked},
            {"detail", cell.detail}};
}

} // namespace dshare
