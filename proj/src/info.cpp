#include "dshare/info.hpp"

#include <random>
#include <string>

namespace dshare {

namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

InfoLayout::InfoLayout(const ProblemSpec& spec)
    : spec_(&spec),
      step_radix_(static_cast<std::size_t>(spec.joint_obs_count()) * spec.joint_action_count()) {}

std::size_t InfoLayout::common_count(int t) const { return ipow(step_radix_, common_length(t)); }

std::size_t InfoLayout::private_count(int t, int k) const {
    return ipow(spec_->obs_sizes[k], private_obs_length(t)) * ipow(spec_->action_sizes[k], private_action_length(t));
}

std::size_t InfoLayout::encode(const CommonInfo& c) const {
    std::size_t code = 0;
    for (std::size_t i = 0; i < c.joint_obs.size(); ++i)
        code = extend_common(code, JointStep{c.joint_obs[i], c.joint_actions[i]});
    return code;
}

std::size_t InfoLayout::encode(const PrivateInfo& p) const {
    const std::size_t ny = spec_->obs_sizes[p.k];
    const std::size_t nu = spec_->action_sizes[p.k];
    std::size_t code = 0;
    for (int y : p.own_obs) code = code * ny + y;
    for (int u : p.own_actions) code = code * nu + u;
    return code;
}

std::size_t InfoLayout::encode(const InfoSet& i) const {
    return info_code(i.priv.t, i.priv.k, encode(i.common), encode(i.priv));
}

CommonInfo InfoLayout::decode_common(int t, std::size_t code) const {
    CommonInfo c;
    c.t = t;
    const int m = common_length(t);
    c.joint_obs.resize(m);
    c.joint_actions.resize(m);
    const std::size_t na = spec_->joint_action_count();
    for (int i = m; i-- > 0;) {
        const std::size_t digit = code % step_radix_;
        code /= step_radix_;
        c.joint_obs[i] = static_cast<int>(digit / na);
        c.joint_actions[i] = static_cast<int>(digit % na);
    }
    return c;
}

PrivateInfo InfoLayout::decode_private(int t, int k, std::size_t code) const {
    PrivateInfo p;
    p.t = t;
    p.k = k;
    p.own_obs.resize(private_obs_length(t));
    p.own_actions.resize(private_action_length(t));
    const std::size_t ny = spec_->obs_sizes[k];
    const std::size_t nu = spec_->action_sizes[k];
    for (std::size_t i = p.own_actions.size(); i-- > 0;) {
        p.own_actions[i] = static_cast<int>(code % nu);
        code /= nu;
    }
    for (std::size_t i = p.own_obs.size(); i-- > 0;) {
        p.own_obs[i] = static_cast<int>(code % ny);
        code /= ny;
    }
    return p;
}

InfoSet InfoLayout::decode_info(int t, int k, std::size_t code) const {
    return InfoSet{decode_common(t, common_part(t, k, code)), decode_private(t, k, private_part(t, k, code))};
}

JointStep InfoLayout::common_step(int t, std::size_t common, int step) const {
    const int m = common_length(t);
    for (int i = m; i > step; --i) common /= step_radix_;
    const std::size_t digit = common % step_radix_;
    const std::size_t na = spec_->joint_action_count();
    return JointStep{static_cast<int>(digit / na), static_cast<int>(digit % na)};
}

int InfoLayout::oldest_obs(int t, int k, std::size_t priv) const {
    const std::size_t tail = ipow(spec_->obs_sizes[k], private_obs_length(t) - 1) *
                             ipow(spec_->action_sizes[k], private_action_length(t));
    return static_cast<int>(priv / tail);
}

std::optional<int> InfoLayout::oldest_action(int t, int k, std::size_t priv) const {
    const int len = private_action_length(t);
    if (len == 0) return std::nullopt;
    const std::size_t tail = ipow(spec_->action_sizes[k], len - 1);
    return static_cast<int>((priv / tail) % spec_->action_sizes[k]);
}

std::size_t InfoLayout::roll_private(int t, int k, std::size_t priv, int next_obs, int action) const {
    const std::size_t ny = spec_->obs_sizes[k];
    const std::size_t nu = spec_->action_sizes[k];
    const int obs_len = private_obs_length(t);
    const int act_len = private_action_length(t);
    const std::size_t act_radix = ipow(nu, act_len);
    std::size_t obs_code = priv / act_radix;
    std::size_t act_code = priv % act_radix;
    const bool drop = private_start(t + 1) > private_start(t);
    if (drop) {
        obs_code %= ipow(ny, obs_len - 1);
        if (act_len > 0) act_code %= ipow(nu, act_len - 1);
    }
    obs_code = obs_code * ny + next_obs;
    // The action of epoch t is stored only when the private window holds actions at t+1.
    if (private_action_length(t + 1) > 0) act_code = act_code * nu + action;
    return obs_code * ipow(nu, private_action_length(t + 1)) + act_code;
}

std::size_t InfoLayout::successor_code(int t, int k, std::size_t code, int next_obs, int action,
                                       const std::optional<JointStep>& shared) const {
    std::size_t common = common_part(t, k, code);
    const std::size_t priv = private_part(t, k, code);
    if (t >= delay()) common = extend_common(common, *shared);
    return info_code(t + 1, k, common, roll_private(t, k, priv, next_obs, action));
}

std::size_t InfoLayout::others_count(int t, int k) const {
    std::size_t n = 1;
    for (int j = 0; j < controllers(); ++j)
        if (j != k) n *= private_count(t, j);
    return n;
}

std::size_t InfoLayout::encode_others(int t, int k, std::span<const std::size_t> privs) const {
    std::size_t code = 0;
    for (int j = 0; j < controllers(); ++j)
        if (j != k) code = code * private_count(t, j) + privs[j];
    return code;
}

void InfoLayout::decode_others(int t, int k, std::size_t code, std::span<std::size_t> privs) const {
    for (int j = controllers(); j-- > 0;) {
        if (j == k) {
            privs[j] = 0;
            continue;
        }
        const std::size_t r = private_count(t, j);
        privs[j] = code % r;
        code /= r;
    }
}

std::size_t InfoLayout::all_count(int t) const {
    std::size_t n = 1;
    for (int j = 0; j < controllers(); ++j) n *= private_count(t, j);
    return n;
}

std::size_t InfoLayout::encode_all(int t, std::span<const std::size_t> privs) const {
    std::size_t code = 0;
    for (int j = 0; j < controllers(); ++j) code = code * private_count(t, j) + privs[j];
    return code;
}

void InfoLayout::decode_all(int t, std::size_t code, std::span<std::size_t> privs) const {
    for (int j = controllers(); j-- > 0;) {
        const std::size_t r = private_count(t, j);
        privs[j] = code % r;
        code /= r;
    }
}

std::size_t InfoLayout::common_code_of(int t, std::span<const int> joint_obs,
                                       std::span<const int> joint_actions) const {
    std::size_t code = 0;
    for (int s = 1; s <= common_length(t); ++s)
        code = extend_common(code, JointStep{joint_obs[s - 1], joint_actions[s - 1]});
    return code;
}

std::size_t InfoLayout::private_code_of(int t, int k, std::span<const int> joint_obs,
                                        std::span<const int> joint_actions) const {
    const std::size_t ny = spec_->obs_sizes[k];
    const std::size_t nu = spec_->action_sizes[k];
    std::size_t code = 0;
    for (int s = private_start(t); s <= t; ++s) code = code * ny + spec_->decode_joint_obs(joint_obs[s - 1])[k];
    for (int s = private_start(t); s < t; ++s) code = code * nu + spec_->decode_joint_action(joint_actions[s - 1])[k];
    return code;
}

std::size_t InfoLayout::info_code_of(int t, int k, std::span<const int> joint_obs,
                                     std::span<const int> joint_actions) const {
    return info_code(t, k, common_code_of(t, joint_obs, joint_actions),
                     private_code_of(t, k, joint_obs, joint_actions));
}

std::vector<CommonInfo> enumerate_common(const ProblemSpec& spec, int t) {
    const InfoLayout layout(spec);
    std::vector<CommonInfo> out;
    const std::size_t n = layout.common_count(t);
    out.reserve(n);
    for (std::size_t c = 0; c < n; ++c) out.push_back(layout.decode_common(t, c));
    return out;
}

std::vector<PrivateInfo> enumerate_private(const ProblemSpec& spec, int t, int k) {
    const InfoLayout layout(spec);
    std::vector<PrivateInfo> out;
    const std::size_t n = layout.private_count(t, k);
    out.reserve(n);
    for (std::size_t c = 0; c < n; ++c) out.push_back(layout.decode_private(t, k, c));
    return out;
}

InfoSet successor_infoset(const ProblemSpec& spec, const InfoSet& current, int next_obs, int action,
                          const JointStep& shared) {
    const int t = current.priv.t;
    const int k = current.priv.k;
    const int T = spec.delay;
    if (t + 1 > spec.horizon) throw std::out_of_range("successor_infoset: t+1 exceeds the horizon");
    if (next_obs < 0 || next_obs >= spec.obs_sizes[k] || action < 0 || action >= spec.action_sizes[k])
        throw std::out_of_range("successor_infoset: observation or action out of range");

    InfoSet next;
    next.common = current.common;
    next.common.t = t + 1;
    next.priv.t = t + 1;
    next.priv.k = k;

    const auto& own_obs = current.priv.own_obs;
    const auto& own_actions = current.priv.own_actions;
    if (t >= T) {
        // Epoch t-T+1 leaves the private window; the caller's joint step must agree with it.
        const int shared_obs = spec.decode_joint_obs(shared.joint_obs)[k];
        const int shared_action = spec.decode_joint_action(shared.joint_action)[k];
        const int recorded_action = own_actions.empty() ? action : own_actions.front();
        if (shared_obs != own_obs.front())
            throw InconsistentHistory("successor_infoset: shared observation of controller " + std::to_string(k) +
                                      " disagrees with the recorded one");
        if (shared_action != recorded_action)
            throw InconsistentHistory("successor_infoset: shared action of controller " + std::to_string(k) +
                                      " disagrees with the recorded one");
        next.common.joint_obs.push_back(shared.joint_obs);
        next.common.joint_actions.push_back(shared.joint_action);
        next.priv.own_obs.assign(own_obs.begin() + 1, own_obs.end());
        if (!own_actions.empty()) next.priv.own_actions.assign(own_actions.begin() + 1, own_actions.end());
    } else {
        next.priv.own_obs = own_obs;
        next.priv.own_actions = own_actions;
    }
    next.priv.own_obs.push_back(next_obs);
    if (T >= 2) next.priv.own_actions.push_back(action);
    return next;
}

std::vector<StrategyArgs> other_strategy_args(const InfoLayout& layout, int t, int k, std::size_t common,
                                              std::span<const int> lagged_obs) {
    const int T = layout.delay();
    const int target = t - T + 1;
    if (target < 1) throw std::out_of_range("other_strategy_args: t-T+1 < 1");
    const ProblemSpec& spec = layout.spec();
    std::vector<StrategyArgs> out;

    // Common component at the earlier epoch is a prefix of the one at t.
    std::size_t prefix = 0;
    for (int s = 1; s <= layout.common_length(target); ++s)
        prefix = layout.extend_common(prefix, layout.common_step(t, common, s));

    for (int j = 0; j < layout.controllers(); ++j) {
        if (j == k) continue;
        const std::size_t ny = spec.obs_sizes[j];
        const std::size_t nu = spec.action_sizes[j];
        std::size_t priv = 0;
        const int start = layout.private_start(target);
        for (int s = start; s < target; ++s) {
            const JointStep step = layout.common_step(t, common, s);
            priv = priv * ny + spec.decode_joint_obs(step.joint_obs)[j];
        }
        priv = priv * ny + lagged_obs[j];
        for (int s = start; s < target; ++s) {
            const JointStep step = layout.common_step(t, common, s);
            priv = priv * nu + spec.decode_joint_action(step.joint_action)[j];
        }
        out.push_back(StrategyArgs{j, target, layout.info_code(target, j, prefix, priv)});
    }
    return out;
}

Strategy zero_strategy(const ProblemSpec& spec, int k) {
    const InfoLayout layout(spec);
    Strategy s;
    for (int t = 1; t <= spec.horizon; ++t) s.actions.emplace_back(layout.info_count(t, k), 0);
    return s;
}

StrategyTuple zero_strategies(const ProblemSpec& spec) {
    StrategyTuple out;
    for (int k = 0; k < spec.num_controllers; ++k) out.push_back(zero_strategy(spec, k));
    return out;
}

Strategy random_strategy(const ProblemSpec& spec, int k, std::uint64_t seed) {
    Strategy s = zero_strategy(spec, k);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, spec.action_sizes[k] - 1);
    for (auto& epoch : s.actions)
        for (int& a : epoch) a = pick(rng);
    return s;
}

StrategyTuple random_strategies(const ProblemSpec& spec, std::uint64_t seed) {
    StrategyTuple out;
    for (int k = 0; k < spec.num_controllers; ++k)
        out.push_back(random_strategy(spec, k, seed * 1000003ULL + static_cast<std::uint64_t>(k)));
    return out;
}

void check_strategy(const ProblemSpec& spec, int k, const Strategy& strategy) {
    const InfoLayout layout(spec);
    if (strategy.actions.size() != static_cast<std::size_t>(spec.horizon))
        throw ValidationError("strategy of controller " + std::to_string(k) + " does not cover every epoch");
    for (int t = 1; t <= spec.horizon; ++t) {
        const auto& epoch = strategy.actions[t - 1];
        if (epoch.size() != layout.info_count(t, k))
            throw ValidationError("strategy of controller " + std::to_string(k) + " is not total at t=" +
                                  std::to_string(t));
        for (int a : epoch)
            if (a < 0 || a >= spec.action_sizes[k])
                throw ValidationError("strategy of controller " + std::to_string(k) + " has an out-of-range action");
    }
}

void check_strategies(const ProblemSpec& spec, const StrategyTuple& strategies) {
    if (strategies.size() != static_cast<std::size_t>(spec.num_controllers))
        throw ValidationError("strategy tuple size differs from num_controllers");
    for (int k = 0; k < spec.num_controllers; ++k) check_strategy(spec, k, strategies[k]);
}

StrategySlice slice_at(const InfoLayout& layout, const StrategyTuple& strategies, int t, std::size_t common) {
    StrategySlice slice;
    slice.t = t;
    slice.actions.resize(layout.controllers());
    for (int j = 0; j < layout.controllers(); ++j) {
        const std::size_t np = layout.private_count(t, j);
        const auto& epoch = strategies[j].actions[t - 1];
        slice.actions[j].assign(epoch.begin() + common * np, epoch.begin() + (common + 1) * np);
    }
    return slice;
}

} // namespace dshare
