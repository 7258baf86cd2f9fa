#include "dshare/filters.hpp"

#include <numeric>

namespace dshare {

namespace {

double normalize(std::vector<double>& probs) {
    const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (mass < kZeroMass) return mass;
    for (double& p : probs) p /= mass;
    return mass;
}

int select_joint_action(const InfoLayout& layout, const StrategyTuple& strategies, int t, const Trajectory& path) {
    const ProblemSpec& spec = layout.spec();
    std::vector<int> actions(spec.num_controllers);
    for (int k = 0; k < spec.num_controllers; ++k)
        actions[k] = strategies[k].at(t, layout.info_code_of(t, k, path.joint_obs, path.joint_actions));
    return spec.encode_joint_action(actions);
}

// Every combination of the other controllers' observations, with own_obs in slot k.
std::vector<std::vector<int>> other_obs_combos(const ProblemSpec& spec, int k, int own_obs) {
    std::vector<std::vector<int>> out;
    std::vector<int> ys(spec.num_controllers, 0);
    ys[k] = own_obs;
    while (true) {
        out.push_back(ys);
        int j = spec.num_controllers - 1;
        for (; j >= 0; --j) {
            if (j == k) continue;
            if (++ys[j] < spec.obs_sizes[j]) break;
            ys[j] = 0;
        }
        if (j < 0) break;
    }
    return out;
}

// True when the private codes are consistent with the joint step that becomes common;
// controllers in `skip` (or -1 for none) are not checked.
bool agrees_with_shared(const InfoLayout& layout, int t, const std::vector<std::size_t>& privs,
                        const StrategySlice& slice, const std::vector<int>& shared_obs,
                        const std::vector<int>& shared_actions, int skip) {
    for (int j = 0; j < layout.controllers(); ++j) {
        if (j == skip) continue;
        if (layout.oldest_obs(t, j, privs[j]) != shared_obs[j]) return false;
        const auto recorded = layout.oldest_action(t, j, privs[j]);
        const int action = recorded ? *recorded : slice.actions[j][privs[j]];
        if (action != shared_actions[j]) return false;
    }
    return true;
}

} // namespace

JointDistribution joint_distribution(const ProblemSpec& spec, const StrategyTuple& strategies, int t) {
    const InfoLayout layout(spec);
    JointDistribution out;
    out.t = t;
    const int nx = spec.state_size;
    const int no = spec.joint_obs_count();

    std::vector<WeightedTrajectory> current;
    for (int x = 0; x < nx; ++x) {
        const double p0 = spec.initial_dist[x];
        if (p0 == 0.0) continue;
        for (int jo = 0; jo < no; ++jo) {
            const double p = p0 * spec.joint_observation(1, x, 0, jo);
            if (p == 0.0) continue;
            WeightedTrajectory w{Trajectory{{x}, {jo}, {}}, p};
            w.path.joint_actions.push_back(select_joint_action(layout, strategies, 1, w.path));
            current.push_back(std::move(w));
        }
    }
    for (int s = 2; s <= t; ++s) {
        std::vector<WeightedTrajectory> next;
        for (const auto& w : current) {
            const int x = w.path.states.back();
            const int ja = w.path.joint_actions.back();
            for (int xn = 0; xn < nx; ++xn) {
                const double ps = w.prob * spec.transition(s - 1, x, ja, xn);
                if (ps == 0.0) continue;
                for (int jo = 0; jo < no; ++jo) {
                    const double p = ps * spec.joint_observation(s, xn, ja, jo);
                    if (p == 0.0) continue;
                    WeightedTrajectory e{w.path, p};
                    e.path.states.push_back(xn);
                    e.path.joint_obs.push_back(jo);
                    e.path.joint_actions.push_back(select_joint_action(layout, strategies, s, e.path));
                    next.push_back(std::move(e));
                }
            }
        }
        current = std::move(next);
    }
    out.paths = std::move(current);
    return out;
}

PrivateConditionals private_conditionals_from_joint(const ProblemSpec& spec, const JointDistribution& joint, int k) {
    const InfoLayout layout(spec);
    const int t = joint.t;
    const std::size_t n = layout.info_count(t, k);
    const std::size_t others = layout.others_count(t, k);
    std::vector<std::vector<double>> acc(n);
    PrivateConditionals out;
    out.mass.assign(n, 0.0);
    std::vector<std::size_t> privs(spec.num_controllers);
    for (const auto& w : joint.paths) {
        const auto& p = w.path;
        const std::size_t code = layout.info_code_of(t, k, p.joint_obs, p.joint_actions);
        for (int j = 0; j < spec.num_controllers; ++j)
            privs[j] = j == k ? 0 : layout.private_code_of(t, j, p.joint_obs, p.joint_actions);
        auto& v = acc[code];
        if (v.empty()) v.assign(spec.state_size * others, 0.0);
        v[p.states[t - 1] * others + layout.encode_others(t, k, privs)] += w.prob;
        out.mass[code] += w.prob;
    }
    out.beliefs.resize(n);
    for (std::size_t code = 0; code < n; ++code) {
        if (acc[code].empty() || normalize(acc[code]) < kZeroMass) continue;
        out.beliefs[code] = PrivateBelief{t, k, std::move(acc[code])};
    }
    return out;
}

Filtered<PrivateBelief> conditional_from_joint(const ProblemSpec& spec, const JointDistribution& joint, int k,
                                               std::size_t code) {
    const InfoLayout layout(spec);
    const int t = joint.t;
    const std::size_t others = layout.others_count(t, k);
    std::vector<double> probs(spec.state_size * others, 0.0);
    std::vector<std::size_t> privs(spec.num_controllers);
    for (const auto& w : joint.paths) {
        const auto& p = w.path;
        if (layout.info_code_of(t, k, p.joint_obs, p.joint_actions) != code) continue;
        for (int j = 0; j < spec.num_controllers; ++j)
            privs[j] = j == k ? 0 : layout.private_code_of(t, j, p.joint_obs, p.joint_actions);
        probs[p.states[t - 1] * others + layout.encode_others(t, k, privs)] += w.prob;
    }
    if (normalize(probs) < kZeroMass) return std::nullopt;
    return PrivateBelief{t, k, std::move(probs)};
}

std::vector<Filtered<CentralBeliefPi>> pi_from_joint(const ProblemSpec& spec, const JointDistribution& joint) {
    const InfoLayout layout(spec);
    const int t = joint.t;
    const int T = spec.delay;
    if (t <= T) return {};
    const std::size_t n = layout.common_count(t);
    std::vector<std::vector<double>> acc(n);
    for (const auto& w : joint.paths) {
        const auto& p = w.path;
        auto& v = acc[layout.common_code_of(t, p.joint_obs, p.joint_actions)];
        if (v.empty()) v.assign(spec.state_size, 0.0);
        v[p.states[t - T - 1]] += w.prob;
    }
    std::vector<Filtered<CentralBeliefPi>> out(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (acc[c].empty() || normalize(acc[c]) < kZeroMass) continue;
        out[c] = CentralBeliefPi{t, std::move(acc[c])};
    }
    return out;
}

std::vector<Filtered<CentralBeliefTheta>> theta_from_joint(const ProblemSpec& spec, const JointDistribution& joint) {
    const InfoLayout layout(spec);
    const int t = joint.t;
    const std::size_t n = layout.common_count(t);
    const std::size_t all = layout.all_count(t);
    std::vector<std::vector<double>> acc(n);
    std::vector<std::size_t> privs(spec.num_controllers);
    for (const auto& w : joint.paths) {
        const auto& p = w.path;
        auto& v = acc[layout.common_code_of(t, p.joint_obs, p.joint_actions)];
        if (v.empty()) v.assign(spec.state_size * all, 0.0);
        for (int j = 0; j < spec.num_controllers; ++j)
            privs[j] = layout.private_code_of(t, j, p.joint_obs, p.joint_actions);
        v[p.states[t - 1] * all + layout.encode_all(t, privs)] += w.prob;
    }
    std::vector<Filtered<CentralBeliefTheta>> out(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (acc[c].empty() || normalize(acc[c]) < kZeroMass) continue;
        out[c] = CentralBeliefTheta{t, std::move(acc[c])};
    }
    return out;
}

Filtered<PrivateBelief> private_belief_init(const ProblemSpec& spec, int own_obs, int k) {
    const InfoLayout layout(spec);
    const std::size_t others = layout.others_count(1, k);
    std::vector<double> probs(spec.state_size * others, 0.0);
    std::vector<std::size_t> privs(spec.num_controllers);
    for (int x = 0; x < spec.state_size; ++x) {
        const double px = spec.initial_dist[x] * spec.observation(1, k, x, 0, own_obs);
        if (px == 0.0) continue;
        for (std::size_t r = 0; r < others; ++r) {
            layout.decode_others(1, k, r, privs);
            double p = px;
            // At t = 1 the private code of controller j is its first observation.
            for (int j = 0; j < spec.num_controllers; ++j)
                if (j != k) p *= spec.observation(1, j, x, 0, static_cast<int>(privs[j]));
            probs[x * others + r] = p;
        }
    }
    if (normalize(probs) < kZeroMass) return std::nullopt;
    return PrivateBelief{1, k, std::move(probs)};
}

PrivateStep private_belief_step(const InfoLayout& layout, const PrivateBelief& current, const StrategySlice& slice,
                                int next_obs, int action, const std::optional<JointStep>& shared) {
    const ProblemSpec& spec = layout.spec();
    const int t = current.t;
    const int k = current.k;
    const int K = spec.num_controllers;
    const int nx = spec.state_size;
    const std::size_t others_now = layout.others_count(t, k);
    const std::size_t others_next = layout.others_count(t + 1, k);
    const bool sharing = t >= layout.delay();

    std::vector<int> shared_obs, shared_actions;
    if (sharing) {
        shared_obs = spec.decode_joint_obs(shared->joint_obs);
        shared_actions = spec.decode_joint_action(shared->joint_action);
    }
    const auto combos = other_obs_combos(spec, k, next_obs);

    std::vector<double> out(nx * others_next, 0.0);
    std::vector<std::size_t> privs(K), next_privs(K, 0);
    std::vector<int> actions(K);
    std::vector<std::size_t> rolled(combos.size());
    for (std::size_t r = 0; r < others_now; ++r) {
        layout.decode_others(t, k, r, privs);
        if (sharing && !agrees_with_shared(layout, t, privs, slice, shared_obs, shared_actions, k)) continue;
        for (int j = 0; j < K; ++j) actions[j] = j == k ? action : slice.actions[j][privs[j]];
        const int ja = spec.encode_joint_action(actions);
        for (std::size_t c = 0; c < combos.size(); ++c) {
            for (int j = 0; j < K; ++j)
                if (j != k) next_privs[j] = layout.roll_private(t, j, privs[j], combos[c][j], actions[j]);
            rolled[c] = layout.encode_others(t + 1, k, next_privs);
        }
        for (int x = 0; x < nx; ++x) {
            const double w = current.probs[x * others_now + r];
            if (w == 0.0) continue;
            for (int xn = 0; xn < nx; ++xn) {
                double p = w * spec.transition(t, x, ja, xn);
                if (p == 0.0) continue;
                p *= spec.observation(t + 1, k, xn, ja, next_obs);
                if (p == 0.0) continue;
                for (std::size_t c = 0; c < combos.size(); ++c) {
                    double q = p;
                    for (int j = 0; j < K; ++j)
                        if (j != k) q *= spec.observation(t + 1, j, xn, ja, combos[c][j]);
                    out[xn * others_next + rolled[c]] += q;
                }
            }
        }
    }
    PrivateStep step;
    step.mass = normalize(out);
    if (step.mass >= kZeroMass) step.belief = PrivateBelief{t + 1, k, std::move(out)};
    return step;
}

Filtered<PrivateBelief> private_belief_update(const InfoLayout& layout, const PrivateBelief& current,
                                              const StrategySlice& slice, int next_obs, int action,
                                              const std::optional<JointStep>& shared) {
    return private_belief_step(layout, current, slice, next_obs, action, shared).belief;
}

Filtered<CentralBeliefPi> pi_init(const ProblemSpec& spec, int joint_obs) {
    std::vector<double> probs(spec.state_size);
    for (int x = 0; x < spec.state_size; ++x) probs[x] = spec.initial_dist[x] * spec.joint_observation(1, x, 0, joint_obs);
    if (normalize(probs) < kZeroMass) return std::nullopt;
    return CentralBeliefPi{spec.delay + 1, std::move(probs)};
}

Filtered<CentralBeliefPi> pi_update(const ProblemSpec& spec, const CentralBeliefPi& current, int lagged_joint_obs,
                                    int lagged_joint_action) {
    const int lag = current.t - spec.delay; // epoch of the state Pi_t describes
    std::vector<double> probs(spec.state_size, 0.0);
    for (int x = 0; x < spec.state_size; ++x) {
        const double w = current.probs[x];
        if (w == 0.0) continue;
        for (int xn = 0; xn < spec.state_size; ++xn) probs[xn] += w * spec.transition(lag, x, lagged_joint_action, xn);
    }
    for (int xn = 0; xn < spec.state_size; ++xn)
        probs[xn] *= spec.joint_observation(lag + 1, xn, lagged_joint_action, lagged_joint_obs);
    if (normalize(probs) < kZeroMass) return std::nullopt;
    return CentralBeliefPi{current.t + 1, std::move(probs)};
}

CentralBeliefTheta theta_init(const ProblemSpec& spec) {
    const InfoLayout layout(spec);
    const std::size_t all = layout.all_count(1);
    std::vector<double> probs(spec.state_size * all, 0.0);
    std::vector<std::size_t> privs(spec.num_controllers);
    std::vector<int> ys(spec.num_controllers);
    for (int x = 0; x < spec.state_size; ++x) {
        for (std::size_t r = 0; r < all; ++r) {
            layout.decode_all(1, r, privs);
            for (int j = 0; j < spec.num_controllers; ++j) ys[j] = static_cast<int>(privs[j]);
            probs[x * all + r] = spec.initial_dist[x] * spec.joint_observation(1, x, 0, spec.encode_joint_obs(ys));
        }
    }
    return CentralBeliefTheta{1, std::move(probs)};
}

Filtered<CentralBeliefTheta> theta_update(const InfoLayout& layout, const CentralBeliefTheta& current,
                                          const StrategySlice& slice, const std::optional<JointStep>& shared) {
    const ProblemSpec& spec = layout.spec();
    const int t = current.t;
    const int K = spec.num_controllers;
    const int nx = spec.state_size;
    const int no = spec.joint_obs_count();
    const std::size_t all_now = layout.all_count(t);
    const std::size_t all_next = layout.all_count(t + 1);
    const bool sharing = t >= layout.delay();

    std::vector<int> shared_obs, shared_actions;
    if (sharing) {
        shared_obs = spec.decode_joint_obs(shared->joint_obs);
        shared_actions = spec.decode_joint_action(shared->joint_action);
    }

    std::vector<double> out(nx * all_next, 0.0);
    std::vector<std::size_t> privs(K), next_privs(K);
    std::vector<int> actions(K);
    std::vector<std::size_t> rolled(no);
    for (std::size_t r = 0; r < all_now; ++r) {
        layout.decode_all(t, r, privs);
        if (sharing && !agrees_with_shared(layout, t, privs, slice, shared_obs, shared_actions, -1)) continue;
        for (int j = 0; j < K; ++j) actions[j] = slice.actions[j][privs[j]];
        const int ja = spec.encode_joint_action(actions);
        for (int jo = 0; jo < no; ++jo) {
            const auto ys = spec.decode_joint_obs(jo);
            for (int j = 0; j < K; ++j) next_privs[j] = layout.roll_private(t, j, privs[j], ys[j], actions[j]);
            rolled[jo] = layout.encode_all(t + 1, next_privs);
        }
        for (int x = 0; x < nx; ++x) {
            const double w = current.probs[x * all_now + r];
            if (w == 0.0) continue;
            for (int xn = 0; xn < nx; ++xn) {
                const double p = w * spec.transition(t, x, ja, xn);
                if (p == 0.0) continue;
                for (int jo = 0; jo < no; ++jo)
                    out[xn * all_next + rolled[jo]] += p * spec.joint_observation(t + 1, xn, ja, jo);
            }
        }
    }
    if (normalize(out) < kZeroMass) return std::nullopt;
    return CentralBeliefTheta{t + 1, std::move(out)};
}

Predecessor predecessor_of(const InfoLayout& layout, int t_next, int k, std::size_t code) {
    const ProblemSpec& spec = layout.spec();
    const int t = t_next - 1;
    std::size_t common = layout.common_part(t_next, k, code);
    const PrivateInfo next = layout.decode_private(t_next, k, layout.private_part(t_next, k, code));

    Predecessor pred;
    pred.next_obs = next.own_obs.back();
    PrivateInfo prev;
    prev.t = t;
    prev.k = k;
    if (t >= layout.delay()) {
        pred.shared = layout.common_step(t_next, common, layout.common_length(t_next));
        common /= layout.step_radix();
        const int shared_obs = spec.decode_joint_obs(pred.shared->joint_obs)[k];
        const int shared_action = spec.decode_joint_action(pred.shared->joint_action)[k];
        prev.own_obs.push_back(shared_obs);
        prev.own_obs.insert(prev.own_obs.end(), next.own_obs.begin(), next.own_obs.end() - 1);
        if (next.own_actions.empty()) {
            pred.action = shared_action;
        } else {
            pred.action = next.own_actions.back();
            prev.own_actions.push_back(shared_action);
            prev.own_actions.insert(prev.own_actions.end(), next.own_actions.begin(), next.own_actions.end() - 1);
        }
    } else {
        prev.own_obs.assign(next.own_obs.begin(), next.own_obs.end() - 1);
        pred.action = next.own_actions.back();
        prev.own_actions.assign(next.own_actions.begin(), next.own_actions.end() - 1);
    }
    pred.code = layout.info_code(t, k, common, layout.encode(prev));
    return pred;
}

PrivateFilterTable private_filter_table(const ProblemSpec& spec, const StrategyTuple& strategies, int k) {
    const InfoLayout layout(spec);
    PrivateFilterTable table;
    table.k = k;
    table.beliefs.resize(spec.horizon);
    table.prob.resize(spec.horizon);

    table.beliefs[0].resize(layout.info_count(1, k));
    table.prob[0].assign(layout.info_count(1, k), 0.0);
    for (int y = 0; y < spec.obs_sizes[k]; ++y) {
        table.beliefs[0][y] = private_belief_init(spec, y, k);
        for (int x = 0; x < spec.state_size; ++x)
            table.prob[0][y] += spec.initial_dist[x] * spec.observation(1, k, x, 0, y);
    }

    for (int t = 1; t < spec.horizon; ++t) {
        const std::size_t n = layout.info_count(t + 1, k);
        auto& beliefs = table.beliefs[t];
        auto& prob = table.prob[t];
        beliefs.resize(n);
        prob.assign(n, 0.0);
        std::vector<std::optional<StrategySlice>> slices(layout.common_count(t));
        for (std::size_t code = 0; code < n; ++code) {
            const Predecessor pred = predecessor_of(layout, t + 1, k, code);
            const auto& prev = table.beliefs[t - 1][pred.code];
            if (!prev) continue;
            const std::size_t common = layout.common_part(t, k, pred.code);
            auto& slice = slices[common];
            if (!slice) slice = slice_at(layout, strategies, t, common);
            PrivateStep step = private_belief_step(layout, *prev, *slice, pred.next_obs, pred.action, pred.shared);
            if (!step.belief) continue;
            beliefs[code] = std::move(step.belief);
            if (strategies[k].at(t, pred.code) == pred.action) prob[code] = table.prob[t - 1][pred.code] * step.mass;
        }
    }
    return table;
}

std::vector<std::vector<Filtered<CentralBeliefPi>>> pi_filter_table(const ProblemSpec& spec) {
    const InfoLayout layout(spec);
    const int T = spec.delay;
    std::vector<std::vector<Filtered<CentralBeliefPi>>> table(spec.horizon);
    if (T + 1 > spec.horizon) return table;
    auto& first = table[T];
    first.resize(layout.common_count(T + 1));
    for (std::size_t c = 0; c < first.size(); ++c) first[c] = pi_init(spec, layout.common_step(T + 1, c, 1).joint_obs);
    for (int t = T + 1; t < spec.horizon; ++t) {
        auto& next = table[t];
        next.resize(layout.common_count(t + 1));
        for (std::size_t c = 0; c < next.size(); ++c) {
            const std::size_t prev_code = c / layout.step_radix();
            const auto& prev = table[t - 1][prev_code];
            if (!prev) continue;
            const JointStep newest = layout.common_step(t + 1, c, layout.common_length(t + 1));
            const JointStep lagged = layout.common_step(t, prev_code, t - T);
            next[c] = pi_update(spec, *prev, newest.joint_obs, lagged.joint_action);
        }
    }
    return table;
}

std::vector<std::vector<Filtered<CentralBeliefTheta>>> theta_filter_table(const ProblemSpec& spec,
                                                                          const StrategyTuple& strategies) {
    const InfoLayout layout(spec);
    std::vector<std::vector<Filtered<CentralBeliefTheta>>> table(spec.horizon);
    table[0].push_back(theta_init(spec));
    for (int t = 1; t < spec.horizon; ++t) {
        auto& next = table[t];
        next.resize(layout.common_count(t + 1));
        const bool sharing = t >= spec.delay;
        std::vector<std::optional<StrategySlice>> slices(layout.common_count(t));
        for (std::size_t c = 0; c < next.size(); ++c) {
            const std::size_t prev_code = sharing ? c / layout.step_radix() : c;
            const auto& prev = table[t - 1][prev_code];
            if (!prev) continue;
            std::optional<JointStep> shared;
            if (sharing) shared = layout.common_step(t + 1, c, layout.common_length(t + 1));
            auto& slice = slices[prev_code];
            if (!slice) slice = slice_at(layout, strategies, t, prev_code);
            next[c] = theta_update(layout, *prev, *slice, shared);
        }
    }
    return table;
}

} // namespace dshare
