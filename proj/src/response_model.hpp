#pragma once

#include "dshare/filters.hpp"
#include "dshare/info.hpp"
#include "dshare/solver.hpp"

#include <optional>
#include <vector>

namespace dshare::detail {

/**
 * Controller k's one-step decision problem against fixed strategies of the others:
 * private beliefs along every info set plus the expected stage cost and continuation
 * of each action. Continuations are looked up through a caller-supplied map from
 * successor info-set codes to values, so the raw and grouped value processes share
 * the same transition measure.
 */
class ResponseModel {
public:
    ResponseModel(const ProblemSpec& spec, int k, const StrategyTuple& strategies)
        : spec_(spec), k_(k), strategies_(strategies), layout_(spec),
          filters_(private_filter_table(spec, strategies, k)) {
        slices_.resize(spec.horizon);
        for (int t = 1; t <= spec.horizon; ++t) slices_[t - 1].resize(layout_.common_count(t));
    }

    const InfoLayout& layout() const { return layout_; }
    const PrivateFilterTable& filters() const { return filters_; }
    int controller() const { return k_; }

    const Filtered<PrivateBelief>& belief(int t, std::size_t code) const { return filters_.beliefs[t - 1][code]; }

    const StrategySlice& slice(int t, std::size_t common) {
        auto& s = slices_[t - 1][common];
        if (!s) s = slice_at(layout_, strategies_, t, common);
        return *s;
    }

    /// Stage cost plus expected continuation of action u at a reachable info set.
    template <class Continuation>
    double q_value(int t, std::size_t code, int u, Continuation&& continuation) {
        const PrivateBelief& xi = *belief(t, code);
        const int K = spec_.num_controllers;
        const int n = spec_.horizon;
        const int nx = spec_.state_size;
        const std::size_t common = layout_.common_part(t, k_, code);
        const std::size_t priv = layout_.private_part(t, k_, code);
        const StrategySlice& sl = slice(t, common);
        const std::size_t others = layout_.others_count(t, k_);
        const bool last = t == n;
        const bool sharing = !last && t >= layout_.delay();

        std::vector<std::size_t> privs(K);
        std::vector<int> actions(K), lagged_obs(K), lagged_actions(K);
        std::vector<std::size_t> successors(spec_.obs_sizes[k_]);
        double stage = 0.0;
        double future = 0.0;
        for (std::size_t r = 0; r < others; ++r) {
            layout_.decode_others(t, k_, r, privs);
            bool any = false;
            for (int x = 0; x < nx && !any; ++x) any = xi.probs[x * others + r] != 0.0;
            if (!any) continue;

            for (int j = 0; j < K; ++j) actions[j] = j == k_ ? u : sl.actions[j][privs[j]];
            const int ja = spec_.encode_joint_action(actions);

            if (!last) {
                std::optional<JointStep> shared;
                if (sharing) {
                    // The joint step of epoch t-T+1 becomes common at t+1. Other controllers'
                    // actions there are regenerated from their strategies.
                    for (int j = 0; j < K; ++j)
                        lagged_obs[j] = layout_.oldest_obs(t, j, j == k_ ? priv : privs[j]);
                    lagged_actions[k_] = layout_.oldest_action(t, k_, priv).value_or(u);
                    for (const StrategyArgs& a : other_strategy_args(layout_, t, k_, common, lagged_obs))
                        lagged_actions[a.controller] = strategies_[a.controller].at(a.t, a.code);
                    shared = JointStep{spec_.encode_joint_obs(lagged_obs), spec_.encode_joint_action(lagged_actions)};
                }
                for (int y = 0; y < spec_.obs_sizes[k_]; ++y)
                    successors[y] = layout_.successor_code(t, k_, code, y, u, shared);
            }

            for (int x = 0; x < nx; ++x) {
                const double w = xi.probs[x * others + r];
                if (w == 0.0) continue;
                stage += w * spec_.cost(t, x, ja);
                if (last) continue;
                for (int xn = 0; xn < nx; ++xn) {
                    const double p = w * spec_.transition(t, x, ja, xn);
                    if (p == 0.0) continue;
                    for (int y = 0; y < spec_.obs_sizes[k_]; ++y) {
                        const double q = p * spec_.observation(t + 1, k_, xn, ja, y);
                        if (q == 0.0) continue;
                        future += q * continuation(successors[y]);
                    }
                }
            }
        }
        return stage + future;
    }

    /// Minimizing action with the lowest-index tie-break.
    template <class Continuation>
    std::pair<double, int> minimize(int t, std::size_t code, Continuation&& continuation) {
        double best = 0.0;
        int arg = -1;
        for (int u = 0; u < spec_.action_sizes[k_]; ++u) {
            const double v = q_value(t, code, u, continuation);
            if (arg < 0 || v < best - kTieTolerance) {
                best = v;
                arg = u;
            }
        }
        return {best, arg};
    }

private:
    const ProblemSpec& spec_;
    int k_;
    const StrategyTuple& strategies_;
    InfoLayout layout_;
    PrivateFilterTable filters_;
    std::vector<std::vector<std::optional<StrategySlice>>> slices_;
};

} // namespace dshare::detail
