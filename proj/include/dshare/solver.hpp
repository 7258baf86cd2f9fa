#pragma once

#include "dshare/filters.hpp"
#include "dshare/info.hpp"
#include "dshare/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dshare {

/// Grid used to quantize beliefs into grouping keys.
inline constexpr double kQuantum = 1e-9;
/// Two action values closer than this count as tied; the lower index wins.
inline constexpr double kTieTolerance = 1e-12;
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t count, bool at_least, std::uint64_t budget);
    std::uint64_t count() const { return count_; }
    /// True when enumeration stopped early and count() is only a lower bound.
    bool at_least() const { return at_least_; }

private:
    std::uint64_t count_;
    bool at_least_;
};

class SeparationViolation : public std::logic_error {
public:
    SeparationViolation(int t, std::size_t first, std::size_t second, double first_value, double second_value);
    int t;
    std::size_t first_code;
    std::size_t second_code;
};

class NotSeparated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Backend { Raw, SemiSeparated, SeparatedPi, InfoStateTheta };
std::string to_string(Backend backend);

struct ValueEntry {
    double value = 0.0;
    int action = 0;
    bool reachable = false;
};

/// Value process of controller `owner` over raw info sets: entries[t-1][code].
struct ValueTable {
    int owner = 0;
    Backend backend = Backend::Raw;
    std::vector<std::vector<ValueEntry>> entries;
};

using GroupKey = std::vector<std::int64_t>;
GroupKey quantize(std::span<const double> probs);

struct Group {
    double value = 0.0;
    int action = 0;
    std::vector<std::size_t> members;
};

/// Value process keyed by a sufficient statistic: groups[t-1][key]; key_of[t-1][code]
/// is the key of each raw info set (nullopt when not in the table).
struct GroupedValueTable {
    int owner = 0;
    Backend backend = Backend::SemiSeparated;
    std::vector<std::map<GroupKey, Group>> groups;
    std::vector<std::vector<std::optional<GroupKey>>> key_of;
};

struct BestResponse {
    ValueTable table;
    Strategy strategy;
    /// Sum over i_1^k of P(i_1^k) * V_1(i_1^k): the best achievable payoff.
    double value = 0.0;
};

struct BruteForceResult {
    double payoff = 0.0;
    Strategy strategy;
    std::uint64_t enumerated = 0;
};

struct PbpOptions {
    int max_iters = 100;
    double epsilon = 1e-9;
};

struct PbpResult {
    StrategyTuple strategies;
    double payoff = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

struct Witness {
    int controller = 0;
    Strategy deviation;
    double payoff = 0.0;
};

struct Verification {
    bool holds = true;
    double worst_gap = 0.0;
    std::optional<Witness> witness;
};

/// E sum_t l(t, X_t, U_t) under the exact joint law.
double expected_total_cost(const ProblemSpec& spec, const StrategyTuple& strategies);

/// The same payoff written with controller k's private beliefs and P(I_t^k).
double expected_cost_via_beliefs(const ProblemSpec& spec, const StrategyTuple& strategies, int k);

/// J_{t,n}(i_t^k): expected remaining cost given I_t^k = code; nullopt where P(i) = 0.
std::vector<std::vector<std::optional<double>>> conditional_cost_to_go(const ProblemSpec& spec,
                                                                       const StrategyTuple& strategies, int k);

/// Backward DP over raw info sets against the other controllers' strategies
/// (strategies[k] is ignored).
BestResponse best_response_dp(const ProblemSpec& spec, int k, const StrategyTuple& strategies);

/// Exhaustive search over controller k's strategies on reachable info sets.
BruteForceResult best_response_bruteforce(const ProblemSpec& spec, int k, const StrategyTuple& strategies,
                                          std::uint64_t budget = kDefaultBudget);

/// Number of strategy prefixes best_response_bruteforce enumerates (saturating at budget + 1).
std::uint64_t bruteforce_count(const ProblemSpec& spec, int k, const StrategyTuple& strategies,
                               std::uint64_t budget = kDefaultBudget);

PbpResult pbp_solve(const ProblemSpec& spec, StrategyTuple initial, const PbpOptions& options = {});

Verification verify_pbp(const ProblemSpec& spec, const StrategyTuple& strategies,
                        std::uint64_t budget = kDefaultBudget);

/// Value process keyed by (Xi, delta, lambda); continuation through the Xi recursion.
GroupedValueTable semi_separated_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies);

/// Value process keyed by (Xi, Pi, lambda). Requires the other controllers to be separated.
GroupedValueTable separated_pi_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies);

/// Value process keyed by (Xi, Theta) under the full tuple. Requires a separated tuple.
GroupedValueTable info_state_theta_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies);

/// Controllers j != k whose strategy does not factor through (Xi^j, Pi, lambda^j) make this throw.
void check_separated_pi(const ProblemSpec& spec, int k, const StrategyTuple& strategies);
void check_separated_theta(const ProblemSpec& spec, int k, const StrategyTuple& strategies);

/// Greedy information-state strategy read off a grouped table: one action per key.
std::vector<std::map<GroupKey, int>> group_policy(const GroupedValueTable& table);

} // namespace dshare
