#pragma once

// Reference computations for the tests. They share nothing with the library beyond
// ProblemSpec's kernel accessors and the Strategy container: histories are enumerated
// directly and info sets are encoded here from the documented layout.

#include "dshare/model.hpp"
#include "dshare/info.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using dshare::ProblemSpec;
using dshare::StrategyTuple;

/// A prefix observed up to epoch t: states, joint observations 1..t, joint actions 1..t-1.
struct Prefix {
    double prob = 0.0;
    std::vector<int> x;
    std::vector<int> jo;
    std::vector<int> ja;
};

inline int joint_actions(const ProblemSpec& s) {
    int n = 1;
    for (int a : s.action_sizes) n *= a;
    return n;
}

inline int joint_observations(const ProblemSpec& s) {
    int n = 1;
    for (int y : s.obs_sizes) n *= y;
    return n;
}

/// Component k of a joint index with controller 0 most significant.
inline int component(int joint, const std::vector<int>& sizes, int k) {
    for (int j = static_cast<int>(sizes.size()) - 1; j > k; --j) joint /= sizes[j];
    return joint % sizes[k];
}

inline std::size_t common_count(const ProblemSpec& s, int t) {
    std::size_t n = 1;
    for (int i = 0; i < std::max(t - s.delay, 0); ++i) n *= joint_observations(s) * joint_actions(s);
    return n;
}

inline std::size_t common_code(const ProblemSpec& s, int t, const Prefix& p) {
    std::size_t c = 0;
    for (int i = 0; i < t - s.delay; ++i)
        c = c * (joint_observations(s) * joint_actions(s)) + p.jo[i] * joint_actions(s) + p.ja[i];
    return c;
}

inline int first_private(const ProblemSpec& s, int t) { return std::max(t - s.delay + 1, 1); }

inline std::size_t private_count(const ProblemSpec& s, int t, int k) {
    std::size_t n = 1;
    const int first = first_private(s, t);
    for (int e = first; e <= t; ++e) n *= s.obs_sizes[k];
    for (int e = first; e < t; ++e) n *= s.action_sizes[k];
    return n;
}

inline std::size_t private_code(const ProblemSpec& s, int t, int k, const Prefix& p) {
    std::size_t c = 0;
    const int first = first_private(s, t);
    for (int e = first; e <= t; ++e) c = c * s.obs_sizes[k] + component(p.jo[e - 1], s.obs_sizes, k);
    for (int e = first; e < t; ++e) c = c * s.action_sizes[k] + component(p.ja[e - 1], s.action_sizes, k);
    return c;
}

inline std::size_t info_code(const ProblemSpec& s, int t, int k, const Prefix& p) {
    return common_code(s, t, p) * private_count(s, t, k) + private_code(s, t, k, p);
}

/// Joint action chosen at epoch t (the prefix must reach t).
inline int act(const ProblemSpec& s, const StrategyTuple& g, int t, const Prefix& p) {
    int ja = 0;
    for (int k = 0; k < s.num_controllers; ++k) ja = ja * s.action_sizes[k] + g[k].at(t, info_code(s, t, k, p));
    return ja;
}

inline double obs_prob(const ProblemSpec& s, int t, int x, int prev_ja, int jo) {
    double p = 1.0;
    for (int k = 0; k < s.num_controllers; ++k) {
        const int y = component(jo, s.obs_sizes, k);
        const int ny = s.obs_sizes[k];
        p *= t == 1 ? s.initial_obs_kernel[k][x * ny + y]
                    : s.obs_kernels[k][t - 2][(static_cast<std::size_t>(x) * joint_actions(s) + prev_ja) * ny + y];
    }
    return p;
}

/// All positive-probability prefixes at epoch t.
inline std::vector<Prefix> prefixes(const ProblemSpec& s, const StrategyTuple& g, int t) {
    std::vector<Prefix> level;
    for (int x = 0; x < s.state_size; ++x)
        for (int jo = 0; jo < joint_observations(s); ++jo) {
            const double p = s.initial_dist[x] * obs_prob(s, 1, x, 0, jo);
            if (p > 0.0) level.push_back({p, {x}, {jo}, {}});
        }
    for (int e = 1; e < t; ++e) {
        std::vector<Prefix> next;
        for (const Prefix& p : level) {
            const int ja = act(s, g, e, p);
            const int x = p.x.back();
            for (int xn = 0; xn < s.state_size; ++xn) {
                const double pt = s.transition_kernels[e - 1][(static_cast<std::size_t>(x) * joint_actions(s) + ja) *
                                                                  s.state_size +
                                                              xn];
                for (int jo = 0; jo < joint_observations(s); ++jo) {
                    const double q = p.prob * pt * obs_prob(s, e + 1, xn, ja, jo);
                    if (q <= 0.0) continue;
                    Prefix c = p;
                    c.prob = q;
                    c.x.push_back(xn);
                    c.jo.push_back(jo);
                    c.ja.push_back(ja);
                    next.push_back(std::move(c));
                }
            }
        }
        level = std::move(next);
    }
    return level;
}

inline double stage_cost(const ProblemSpec& s, int t, int x, int ja) {
    return s.stage_cost[t - 1][static_cast<std::size_t>(x) * joint_actions(s) + ja];
}

/// Expected total cost by summing over complete trajectories.
inline double total_cost(const ProblemSpec& s, const StrategyTuple& g) {
    double total = 0.0;
    for (const Prefix& p : prefixes(s, g, s.horizon)) {
        double c = 0.0;
        for (int t = 1; t <= s.horizon; ++t)
            c += stage_cost(s, t, p.x[t - 1], t < s.horizon ? p.ja[t - 1] : act(s, g, t, p));
        total += p.prob * c;
    }
    return total;
}

/// Conditional law, normalized per conditioning code; nullopt where the code has no mass.
using Conditionals = std::vector<std::optional<std::vector<double>>>;

inline Conditionals normalize(std::vector<std::vector<double>> acc) {
    Conditionals out(acc.size());
    for (std::size_t c = 0; c < acc.size(); ++c) {
        double z = 0.0;
        for (double v : acc[c]) z += v;
        if (z < 1e-14) continue;
        for (double& v : acc[c]) v /= z;
        out[c] = std::move(acc[c]);
    }
    return out;
}

/// P(X_t, Lambda_t^{-k} | I_t^k), index x * others + (others' private codes, increasing j != k).
inline Conditionals private_conditionals(const ProblemSpec& s, const StrategyTuple& g, int t, int k) {
    std::size_t others = 1;
    for (int j = 0; j < s.num_controllers; ++j)
        if (j != k) others *= private_count(s, t, j);
    std::vector<std::vector<double>> acc(common_count(s, t) * private_count(s, t, k),
                                         std::vector<double>(s.state_size * others, 0.0));
    for (const Prefix& p : prefixes(s, g, t)) {
        std::size_t r = 0;
        for (int j = 0; j < s.num_controllers; ++j)
            if (j != k) r = r * private_count(s, t, j) + private_code(s, t, j, p);
        acc[info_code(s, t, k, p)][p.x[t - 1] * others + r] += p.prob;
    }
    return normalize(std::move(acc));
}

/// P(X_{t-T} | Delta_t), for t > T.
inline Conditionals lagged_state_conditionals(const ProblemSpec& s, const StrategyTuple& g, int t) {
    std::vector<std::vector<double>> acc(common_count(s, t), std::vector<double>(s.state_size, 0.0));
    for (const Prefix& p : prefixes(s, g, t)) acc[common_code(s, t, p)][p.x[t - s.delay - 1]] += p.prob;
    return normalize(std::move(acc));
}

/// P(X_t, Lambda_t^(K) | Delta_t), index x * all + (all private codes, controller 0 most significant).
inline Conditionals central_conditionals(const ProblemSpec& s, const StrategyTuple& g, int t) {
    std::size_t all = 1;
    for (int j = 0; j < s.num_controllers; ++j) all *= private_count(s, t, j);
    std::vector<std::vector<double>> acc(common_count(s, t), std::vector<double>(s.state_size * all, 0.0));
    for (const Prefix& p : prefixes(s, g, t)) {
        std::size_t r = 0;
        for (int j = 0; j < s.num_controllers; ++j) r = r * private_count(s, t, j) + private_code(s, t, j, p);
        acc[common_code(s, t, p)][p.x[t - 1] * all + r] += p.prob;
    }
    return normalize(std::move(acc));
}

/**
 * Classical finite-horizon POMDP optimum for a single controller: value iteration over
 * the tree of reachable beliefs b_t(x) = P(X_t = x | y_1..t, u_1..t-1).
 */
inline double pomdp_value(const ProblemSpec& s) {
    const int nx = s.state_size;
    const int ny = s.obs_sizes[0];
    const int nu = s.action_sizes[0];
    std::function<double(int, const std::vector<double>&)> value = [&](int t, const std::vector<double>& b) {
        double best = 0.0;
        for (int u = 0; u < nu; ++u) {
            double q = 0.0;
            for (int x = 0; x < nx; ++x) q += b[x] * stage_cost(s, t, x, u);
            if (t < s.horizon) {
                for (int y = 0; y < ny; ++y) {
                    std::vector<double> next(nx, 0.0);
                    double py = 0.0;
                    for (int xn = 0; xn < nx; ++xn) {
                        double pred = 0.0;
                        for (int x = 0; x < nx; ++x)
                            pred += b[x] * s.transition_kernels[t - 1][(x * nu + u) * nx + xn];
                        next[xn] = pred * s.obs_kernels[0][t - 1][(xn * nu + u) * ny + y];
                        py += next[xn];
                    }
                    if (py <= 0.0) continue;
                    for (double& v : next) v /= py;
                    q += py * value(t + 1, next);
                }
            }
            if (u == 0 || q < best) best = q;
        }
        return best;
    };
    double total = 0.0;
    for (int y = 0; y < ny; ++y) {
        std::vector<double> b(nx);
        double py = 0.0;
        for (int x = 0; x < nx; ++x) {
            b[x] = s.initial_dist[x] * s.initial_obs_kernel[0][x * ny + y];
            py += b[x];
        }
        if (py <= 0.0) continue;
        for (double& v : b) v /= py;
        total += py * value(1, b);
    }
    return total;
}

} // namespace oracle
