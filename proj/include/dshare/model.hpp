#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dshare {

/// Kernel rows must sum to one within this absolute tolerance.
inline constexpr double kRowSumTolerance = 1e-12;
/// Default comparison tolerance for probabilities and values.
inline constexpr double kTolerance = 1e-9;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sizes of a decentralized network instance.
struct Dims {
    int horizon = 1;
    int num_controllers = 1;
    int delay = 1;
    int state_size = 1;
    std::vector<int> obs_sizes{1};
    std::vector<int> action_sizes{1};
};

/**
 * Finite decentralized stochastic network with a T-step delayed sharing
 * pattern. Epochs are 1-based (t = 1..horizon), controllers and all space
 * indices are 0-based.
 *
 * Joint actions and joint observations are flattened row-major with
 * controller 0 most significant, so a joint action index is
 * ((u^0 * |U^1| + u^1) * |U^2| + u^2) ...
 *
 * Storage layout (all flat, row-major):
 *   initial_obs_kernel[k]     : [x][y]           q_1^k(y | x)
 *   obs_kernels[k][t-2]       : [x][a][y]        q_t^k(y | x_t, u_{t-1}),  t = 2..n
 *   transition_kernels[t-1]   : [x][a][x']       s_{t+1}(x' | x_t, u_t),    t = 1..n-1
 *   stage_cost[t-1]           : [x][a]           l(t, x_t, u_t),            t = 1..n
 */
struct ProblemSpec {
    int horizon = 0;
    int num_controllers = 0;
    int delay = 0;
    int state_size = 0;
    std::vector<int> obs_sizes;
    std::vector<int> action_sizes;

    std::vector<double> initial_dist;
    std::vector<std::vector<double>> initial_obs_kernel;
    std::vector<std::vector<std::vector<double>>> obs_kernels;
    std::vector<std::vector<double>> transition_kernels;
    std::vector<std::vector<double>> stage_cost;

    int joint_action_count() const;
    int joint_obs_count() const;

    /// P(X_{t+1} = next | X_t = x, U_t = joint_action), t in 1..n-1.
    double transition(int t, int x, int joint_action, int next) const {
        return transition_kernels[t - 1][(static_cast<std::size_t>(x) * joint_action_count() + joint_action) *
                                             state_size +
                                         next];
    }

    /// P(Y_t^k = y | X_t = x, U_{t-1} = prev_joint_action); prev_joint_action is ignored at t = 1.
    double observation(int t, int k, int x, int prev_joint_action, int y) const {
        const int ny = obs_sizes[k];
        if (t == 1) return initial_obs_kernel[k][static_cast<std::size_t>(x) * ny + y];
        return obs_kernels[k][t - 2][(static_cast<std::size_t>(x) * joint_action_count() + prev_joint_action) * ny + y];
    }

    /// Product of all controllers' observation kernels at a joint observation.
    double joint_observation(int t, int x, int prev_joint_action, int joint_obs) const;

    double cost(int t, int x, int joint_action) const {
        return stage_cost[t - 1][static_cast<std::size_t>(x) * joint_action_count() + joint_action];
    }

    std::vector<int> decode_joint_action(int joint_action) const;
    int encode_joint_action(std::span<const int> actions) const;
    std::vector<int> decode_joint_obs(int joint_obs) const;
    int encode_joint_obs(std::span<const int> obs) const;

    Dims dims() const;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Checks every invariant; returns the spec unchanged or throws ValidationError naming
/// the first violation.
ProblemSpec validate_problem(const ProblemSpec& spec);

/// Seeded random instance: kernel rows drawn uniformly then normalized, costs uniform in [0, 1].
ProblemSpec random_problem(std::uint64_t seed, const Dims& dims);

/// Rescales every kernel row to sum exactly to one (up to rounding).
ProblemSpec normalize_problem(const ProblemSpec& spec);

/// A spec of the requested dimensions with every kernel uniform and zero cost.
ProblemSpec uniform_problem(const Dims& dims);

/// Mixed-radix helpers shared by the encodings; digit 0 is the most significant.
std::size_t encode_digits(std::span<const int> digits, std::span<const int> radices);
void decode_digits(std::size_t code, std::span<const int> radices, std::span<int> digits);

} // namespace dshare
