#pragma once

#include "dshare/io.hpp"
#include "dshare/solver.hpp"

#include <string>
#include <vector>

namespace dshare {

/// One cell of the oracle comparison matrix.
struct CompareCell {
    std::string name;
    bool pass = true;
    double max_error = 0.0;
    std::size_t checked = 0;
    std::string detail;
};

/// Recursion outputs against the joint-law conditionals at every reachable set, epochs 1..n.
CompareCell compare_private_filter(const ProblemSpec& spec, const StrategyTuple& strategies, int k);
CompareCell compare_pi_filter(const ProblemSpec& spec, const StrategyTuple& strategies);
CompareCell compare_theta_filter(const ProblemSpec& spec, const StrategyTuple& strategies);

/// best_response_dp value against best_response_bruteforce payoff for controller k.
CompareCell compare_dp_bruteforce(const ProblemSpec& spec, const StrategyTuple& strategies, int k,
                                  std::uint64_t budget);

/// Every filter cell and every DP cell of one instance.
std::vector<CompareCell> compare_all(const ProblemSpec& spec, const StrategyTuple& strategies, std::uint64_t budget);

json cell_to_json(const CompareCell& cell);

} // namespace dshare
