#pragma once

#include "dshare/info.hpp"
#include "dshare/model.hpp"

#include <optional>
#include <vector>

namespace dshare {

/// Mass below this is treated as exactly zero when normalizing.
inline constexpr double kZeroMass = 1e-14;

/// Xi_t^k: law of (X_t, Lambda_t^{-k}) given I_t^k. Index x * others_count + others code.
struct PrivateBelief {
    int t = 1;
    int k = 0;
    std::vector<double> probs;
};

/// Pi_t: law of X_{t-T} given the common component (defined for t >= T+1).
struct CentralBeliefPi {
    int t = 1;
    std::vector<double> probs;
};

/// Theta_t: law of (X_t, Lambda_t^(K)) given the common component. Index x * all_count + all code.
struct CentralBeliefTheta {
    int t = 1;
    std::vector<double> probs;
};

/// A conditional that is std::nullopt when the conditioning event has zero probability.
template <class Belief>
using Filtered = std::optional<Belief>;

struct Trajectory {
    std::vector<int> states;
    std::vector<int> joint_obs;
    std::vector<int> joint_actions;
};

struct WeightedTrajectory {
    Trajectory path;
    double prob = 0.0;
};

/// Exact law of every positive-probability prefix (x, y, u)_{1..t}.
struct JointDistribution {
    int t = 1;
    std::vector<WeightedTrajectory> paths;
};

JointDistribution joint_distribution(const ProblemSpec& spec, const StrategyTuple& strategies, int t);

/// Bayes conditional of (X_t, Lambda_t^{-k}) given I_t^k = code, computed from the joint law.
Filtered<PrivateBelief> conditional_from_joint(const ProblemSpec& spec, const JointDistribution& joint, int k,
                                               std::size_t code);

/// All private conditionals at the joint's epoch, indexed by info-set code, plus P(I_t^k = code).
struct PrivateConditionals {
    std::vector<Filtered<PrivateBelief>> beliefs;
    std::vector<double> mass;
};
PrivateConditionals private_conditionals_from_joint(const ProblemSpec& spec, const JointDistribution& joint, int k);

/// Oracle conditionals given the common component, indexed by common code.
std::vector<Filtered<CentralBeliefPi>> pi_from_joint(const ProblemSpec& spec, const JointDistribution& joint);
std::vector<Filtered<CentralBeliefTheta>> theta_from_joint(const ProblemSpec& spec, const JointDistribution& joint);

Filtered<PrivateBelief> private_belief_init(const ProblemSpec& spec, int own_obs, int k);

/// Unnormalized mass of the update (the probability of the new observation and shared data).
struct PrivateStep {
    Filtered<PrivateBelief> belief;
    double mass = 0.0;
};

/**
 * One step of the private recursion Xi_t^k -> Xi_{t+1}^k.
 *
 * `current` is the belief at i_t^k whose common code is `common`; `slice` holds every
 * controller's actions at (t, delta_t). `shared` is the joint step of epoch t-T+1 that
 * enters the common component at t+1 (required when t >= T, ignored otherwise); the
 * other controllers' components restrict lambda_t^{-k}. Order: select, predict, correct,
 * normalize.
 */
PrivateStep private_belief_step(const InfoLayout& layout, const PrivateBelief& current, const StrategySlice& slice,
                                int next_obs, int action, const std::optional<JointStep>& shared);

Filtered<PrivateBelief> private_belief_update(const InfoLayout& layout, const PrivateBelief& current,
                                              const StrategySlice& slice, int next_obs, int action,
                                              const std::optional<JointStep>& shared);

/// Pi_{T+1} = P(X_1 | Y_1^(K) = joint_obs).
Filtered<CentralBeliefPi> pi_init(const ProblemSpec& spec, int joint_obs);

/// Pi_t -> Pi_{t+1}: predict with u_{t-T}, correct with y_{t-T+1}; no strategy input.
Filtered<CentralBeliefPi> pi_update(const ProblemSpec& spec, const CentralBeliefPi& current, int lagged_joint_obs,
                                    int lagged_joint_action);

/// Theta_1 = P(X_1, Y_1^(K)).
CentralBeliefTheta theta_init(const ProblemSpec& spec);

/**
 * Theta_t -> Theta_{t+1} with Dirac action selection from `slice`; the new private
 * observations are rolled into lambda_{t+1}^(K). When t >= T the result is conditioned
 * on the joint step of epoch t-T+1 that becomes common.
 */
Filtered<CentralBeliefTheta> theta_update(const InfoLayout& layout, const CentralBeliefTheta& current,
                                          const StrategySlice& slice, const std::optional<JointStep>& shared);

/// Previous info set of i_{t+1}^k together with the data that produced it.
struct Predecessor {
    std::size_t code = 0;
    int next_obs = 0;
    int action = 0;
    std::optional<JointStep> shared;
};
Predecessor predecessor_of(const InfoLayout& layout, int t_next, int k, std::size_t code);

/**
 * Xi_t^k at every info set of controller k, obtained by chaining the recursion.
 * An info set is reachable when its recorded own actions can be played (the belief
 * does not depend on controller k's strategy). `prob` is P(I_t^k = code) under the
 * full tuple, so it is zero wherever strategies[k] disagrees with the recorded actions.
 */
struct PrivateFilterTable {
    int k = 0;
    std::vector<std::vector<Filtered<PrivateBelief>>> beliefs;
    std::vector<std::vector<double>> prob;
};
PrivateFilterTable private_filter_table(const ProblemSpec& spec, const StrategyTuple& strategies, int k);

/// Pi along every common history; entries for t <= T are empty vectors.
std::vector<std::vector<Filtered<CentralBeliefPi>>> pi_filter_table(const ProblemSpec& spec);

/// Theta along every common history under the tuple.
std::vector<std::vector<Filtered<CentralBeliefTheta>>> theta_filter_table(const ProblemSpec& spec,
                                                                          const StrategyTuple& strategies);

} // namespace dshare
