#pragma once

#include "dshare/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dshare {

class InconsistentHistory : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Common component: joint observations and joint actions of epochs 1..t-T.
struct CommonInfo {
    int t = 1;
    std::vector<int> joint_obs;
    std::vector<int> joint_actions;

    friend bool operator==(const CommonInfo&, const CommonInfo&) = default;
};

/// Private component of controller k: own observations at epochs s..t and own
/// actions at s..t-1, where s = max(t-T+1, 1).
struct PrivateInfo {
    int t = 1;
    int k = 0;
    std::vector<int> own_obs;
    std::vector<int> own_actions;

    friend bool operator==(const PrivateInfo&, const PrivateInfo&) = default;
};

struct InfoSet {
    CommonInfo common;
    PrivateInfo priv;

    friend bool operator==(const InfoSet&, const InfoSet&) = default;
};

/// Joint observation and joint action of one epoch, as they enter the common component.
struct JointStep {
    int joint_obs = 0;
    int joint_action = 0;

    friend bool operator==(const JointStep&, const JointStep&) = default;
};

/// Arguments of another controller's strategy at an earlier epoch.
struct StrategyArgs {
    int controller = 0;
    int t = 1;
    std::size_t code = 0;
};

/**
 * Canonical mixed-radix encoding of information patterns for one instance.
 *
 * Common code: steps in time order (earliest most significant), each step digit
 * joint_obs * |U^(K)| + joint_action. Private code: own observations then own
 * actions, in time order. Info-set code: common * private_count + private.
 */
class InfoLayout {
public:
    explicit InfoLayout(const ProblemSpec& spec);

    const ProblemSpec& spec() const { return *spec_; }
    int horizon() const { return spec_->horizon; }
    int delay() const { return spec_->delay; }
    int controllers() const { return spec_->num_controllers; }

    /// Number of steps stored in the common component at epoch t.
    int common_length(int t) const { return std::max(t - delay(), 0); }
    /// First epoch covered by the private component at epoch t.
    int private_start(int t) const { return std::max(t - delay() + 1, 1); }
    int private_obs_length(int t) const { return t - private_start(t) + 1; }
    int private_action_length(int t) const { return private_obs_length(t) - 1; }

    std::size_t step_radix() const { return step_radix_; }
    std::size_t common_count(int t) const;
    std::size_t private_count(int t, int k) const;
    std::size_t info_count(int t, int k) const { return common_count(t) * private_count(t, k); }

    std::size_t encode(const CommonInfo& c) const;
    std::size_t encode(const PrivateInfo& p) const;
    std::size_t encode(const InfoSet& i) const;
    CommonInfo decode_common(int t, std::size_t code) const;
    PrivateInfo decode_private(int t, int k, std::size_t code) const;
    InfoSet decode_info(int t, int k, std::size_t code) const;

    std::size_t common_part(int t, int k, std::size_t info_code) const { return info_code / private_count(t, k); }
    std::size_t private_part(int t, int k, std::size_t info_code) const { return info_code % private_count(t, k); }
    std::size_t info_code(int t, int k, std::size_t common, std::size_t priv) const {
        return common * private_count(t, k) + priv;
    }

    /// Step digit of the common component at epoch index `step` (1-based) of common code at t.
    JointStep common_step(int t, std::size_t common, int step) const;
    std::size_t extend_common(std::size_t common, const JointStep& step) const {
        return common * step_radix_ + step.joint_obs * spec_->joint_action_count() + step.joint_action;
    }

    /// Oldest own observation/action stored in a private code (the ones shared next epoch).
    int oldest_obs(int t, int k, std::size_t priv) const;
    std::optional<int> oldest_action(int t, int k, std::size_t priv) const;

    /// Private code at t+1 from the code at t after observing y_{t+1} and applying u_t.
    std::size_t roll_private(int t, int k, std::size_t priv, int next_obs, int action) const;

    /**
     * Successor info-set code without consistency checks. `shared` is the joint step
     * of epoch t-T+1 and must be present exactly when t >= T.
     */
    std::size_t successor_code(int t, int k, std::size_t code, int next_obs, int action,
                               const std::optional<JointStep>& shared) const;

    /// Mixed-radix index of the other controllers' private codes (increasing j != k).
    std::size_t others_count(int t, int k) const;
    std::size_t encode_others(int t, int k, std::span<const std::size_t> privs) const;
    void decode_others(int t, int k, std::size_t code, std::span<std::size_t> privs) const;
    /// Mixed-radix index of all controllers' private codes.
    std::size_t all_count(int t) const;
    std::size_t encode_all(int t, std::span<const std::size_t> privs) const;
    void decode_all(int t, std::size_t code, std::span<std::size_t> privs) const;

    /// Common code at t of a joint history (indices 0..t-1 hold epochs 1..t).
    std::size_t common_code_of(int t, std::span<const int> joint_obs, std::span<const int> joint_actions) const;
    std::size_t private_code_of(int t, int k, std::span<const int> joint_obs, std::span<const int> joint_actions) const;
    std::size_t info_code_of(int t, int k, std::span<const int> joint_obs, std::span<const int> joint_actions) const;

private:
    const ProblemSpec* spec_;
    std::size_t step_radix_ = 1;
};

std::vector<CommonInfo> enumerate_common(const ProblemSpec& spec, int t);
std::vector<PrivateInfo> enumerate_private(const ProblemSpec& spec, int t, int k);

/**
 * i_{t+1}^k from i_t^k. The joint step of epoch t-T+1 extends the common part; its
 * k-components must agree with what i_t^k already records. When t < T the common
 * part is unchanged and `shared` is ignored.
 */
InfoSet successor_infoset(const ProblemSpec& spec, const InfoSet& current, int next_obs, int action,
                          const JointStep& shared);

/**
 * Arguments (delta_{t-T+1}, lambda_{t-T+1}^j) of every other controller's strategy
 * at epoch t-T+1, reconstructed from the common component at t and the others'
 * observations y_{t-T+1}^j (indexed by controller; entry k ignored).
 * Throws std::out_of_range when t-T+1 < 1.
 */
std::vector<StrategyArgs> other_strategy_args(const InfoLayout& layout, int t, int k, std::size_t common,
                                              std::span<const int> lagged_obs);

/// Deterministic strategy of one controller: actions[t-1][info code].
struct Strategy {
    std::vector<std::vector<int>> actions;

    int at(int t, std::size_t code) const { return actions[t - 1][code]; }
    friend bool operator==(const Strategy&, const Strategy&) = default;
};

using StrategyTuple = std::vector<Strategy>;

Strategy zero_strategy(const ProblemSpec& spec, int k);
StrategyTuple zero_strategies(const ProblemSpec& spec);
Strategy random_strategy(const ProblemSpec& spec, int k, std::uint64_t seed);
StrategyTuple random_strategies(const ProblemSpec& spec, std::uint64_t seed);

/// Throws ValidationError unless the strategy is total and in range for controller k.
void check_strategy(const ProblemSpec& spec, int k, const Strategy& strategy);
void check_strategies(const ProblemSpec& spec, const StrategyTuple& strategies);

/// Every controller's actions at (t, delta_t), indexed [j][private code].
struct StrategySlice {
    int t = 1;
    std::vector<std::vector<int>> actions;
};

StrategySlice slice_at(const InfoLayout& layout, const StrategyTuple& strategies, int t, std::size_t common);

} // namespace dshare
