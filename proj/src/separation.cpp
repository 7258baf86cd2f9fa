#include "dshare/solver.hpp"

#include "response_model.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace dshare {

namespace {

/// Grouping key of one info set; `reported` is false for internal fallback keys.
struct KeyChoice {
    GroupKey key;
    bool reported = true;
};

using KeyFunction = std::function<std::optional<KeyChoice>(int t, std::size_t code, const PrivateBelief& xi)>;

void append(GroupKey& key, std::span<const double> probs) {
    const GroupKey q = quantize(probs);
    key.insert(key.end(), q.begin(), q.end());
}

/**
 * Backward recursion over grouping keys. Every member of a group is minimized on its
 * own, with continuations read from the group values of its successors; members that
 * disagree on the value, or whose argmin is not a tie for the group's action, violate
 * the claimed sufficiency of the key.
 */
GroupedValueTable keyed_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies, Backend backend,
                              const KeyFunction& key_fn) {
    detail::ResponseModel model(spec, k, strategies);
    const InfoLayout& layout = model.layout();
    const int n = spec.horizon;

    std::vector<std::map<GroupKey, Group>> groups(n);
    std::vector<std::vector<std::optional<KeyChoice>>> keys(n);
    for (int t = n; t >= 1; --t) {
        auto& here = groups[t - 1];
        auto& key_here = keys[t - 1];
        key_here.assign(layout.info_count(t, k), std::nullopt);
        const auto continuation = [&](std::size_t next) {
            const auto& key = keys[t][next];
            return key ? groups[t].at(key->key).value : 0.0;
        };
        for (std::size_t code = 0; code < key_here.size(); ++code) {
            const auto& xi = model.belief(t, code);
            if (!xi) continue;
            key_here[code] = key_fn(t, code, *xi);
            if (!key_here[code]) continue;
            const auto [value, action] = model.minimize(t, code, continuation);
            auto [it, inserted] = here.try_emplace(key_here[code]->key, Group{value, action, {code}});
            if (inserted) continue;
            Group& group = it->second;
            const std::size_t first = group.members.front();
            if (std::abs(group.value - value) > kTolerance) throw SeparationViolation(t, first, code, group.value, value);
            if (action != group.action) {
                const double q = model.q_value(t, code, group.action, continuation);
                if (std::abs(q - value) > kTolerance) throw SeparationViolation(t, first, code, group.value, q);
            }
            group.members.push_back(code);
        }
    }

    GroupedValueTable out;
    out.owner = k;
    out.backend = backend;
    out.groups.resize(n);
    out.key_of.resize(n);
    for (int t = 1; t <= n; ++t) {
        out.key_of[t - 1].resize(keys[t - 1].size());
        for (std::size_t code = 0; code < keys[t - 1].size(); ++code) {
            const auto& key = keys[t - 1][code];
            if (!key || !key->reported) continue;
            out.key_of[t - 1][code] = key->key;
            out.groups[t - 1].try_emplace(key->key, groups[t - 1].at(key->key));
        }
    }
    return out;
}

/// Throws NotSeparated unless every gamma^j (j != k) is constant on the groups of `key_fn`.
void check_factoring(const ProblemSpec& spec, int k, const StrategyTuple& strategies, const char* what,
                     const std::function<std::optional<GroupKey>(int t, int j, std::size_t code,
                                                                 const PrivateBelief& xi)>& key_fn) {
    check_strategies(spec, strategies);
    const InfoLayout layout(spec);
    for (int j = 0; j < spec.num_controllers; ++j) {
        if (j == k) continue;
        const PrivateFilterTable table = private_filter_table(spec, strategies, j);
        for (int t = 1; t <= spec.horizon; ++t) {
            std::map<GroupKey, std::pair<std::size_t, int>> seen;
            for (std::size_t code = 0; code < layout.info_count(t, j); ++code) {
                const auto& xi = table.beliefs[t - 1][code];
                if (!xi) continue;
                const auto key = key_fn(t, j, code, *xi);
                if (!key) continue;
                const int action = strategies[j].at(t, code);
                const auto [it, inserted] = seen.try_emplace(*key, code, action);
                if (!inserted && it->second.second != action) {
                    std::ostringstream os;
                    os << "strategy of controller " << j << " does not factor through " << what << " at t=" << t
                       << ": info sets " << it->second.first << " and " << code << " share a key";
                    throw NotSeparated(os.str());
                }
            }
        }
    }
}

} // namespace

GroupedValueTable semi_separated_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    check_strategies(spec, strategies);
    const InfoLayout layout(spec);
    return keyed_table(spec, k, strategies, Backend::SemiSeparated,
                       [&](int t, std::size_t code, const PrivateBelief& xi) -> std::optional<KeyChoice> {
                           KeyChoice c;
                           append(c.key, xi.probs);
                           c.key.push_back(static_cast<std::int64_t>(layout.common_part(t, k, code)));
                           c.key.push_back(static_cast<std::int64_t>(layout.private_part(t, k, code)));
                           return c;
                       });
}

GroupedValueTable separated_pi_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    check_separated_pi(spec, k, strategies);
    const InfoLayout layout(spec);
    const auto pi = pi_filter_table(spec);
    return keyed_table(spec, k, strategies, Backend::SeparatedPi,
                       [&](int t, std::size_t code, const PrivateBelief& xi) -> std::optional<KeyChoice> {
                           KeyChoice c;
                           append(c.key, xi.probs);
                           if (t > spec.delay) {
                               const auto& p = pi[t - 1][layout.common_part(t, k, code)];
                               if (!p) return std::nullopt;
                               append(c.key, p->probs);
                           }
                           c.key.push_back(static_cast<std::int64_t>(layout.private_part(t, k, code)));
                           return c;
                       });
}

GroupedValueTable info_state_theta_table(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    check_separated_theta(spec, k, strategies);
    const InfoLayout layout(spec);
    const auto theta = theta_filter_table(spec, strategies);
    return keyed_table(spec, k, strategies, Backend::InfoStateTheta,
                       [&](int t, std::size_t code, const PrivateBelief& xi) -> std::optional<KeyChoice> {
                           KeyChoice c;
                           const auto& th = theta[t - 1][layout.common_part(t, k, code)];
                           if (!th) {
                               // The common history is impossible under the tuple (controller k
                               // deviated earlier); keep the raw info set as its own group.
                               c.key = {-1, static_cast<std::int64_t>(code)};
                               c.reported = false;
                               return c;
                           }
                           append(c.key, xi.probs);
                           append(c.key, th->probs);
                           return c;
                       });
}

void check_separated_pi(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    const InfoLayout layout(spec);
    const auto pi = pi_filter_table(spec);
    check_factoring(spec, k, strategies, "(Xi, Pi, lambda)",
                    [&](int t, int j, std::size_t code, const PrivateBelief& xi) -> std::optional<GroupKey> {
                        GroupKey key = quantize(xi.probs);
                        if (t > spec.delay) {
                            const auto& p = pi[t - 1][layout.common_part(t, j, code)];
                            if (!p) return std::nullopt;
                            append(key, p->probs);
                        }
                        key.push_back(static_cast<std::int64_t>(layout.private_part(t, j, code)));
                        return key;
                    });
}

void check_separated_theta(const ProblemSpec& spec, int k, const StrategyTuple& strategies) {
    const InfoLayout layout(spec);
    const auto theta = theta_filter_table(spec, strategies);
    check_factoring(spec, k, strategies, "(Xi, Theta, lambda)",
                    [&](int t, int j, std::size_t code, const PrivateBelief& xi) -> std::optional<GroupKey> {
                        const auto& th = theta[t - 1][layout.common_part(t, j, code)];
                        if (!th) return std::nullopt;
                        GroupKey key = quantize(xi.probs);
                        append(key, th->probs);
                        key.push_back(static_cast<std::int64_t>(layout.private_part(t, j, code)));
                        return key;
                    });
}

std::vector<std::map<GroupKey, int>> group_policy(const GroupedValueTable& table) {
    std::vector<std::map<GroupKey, int>> out(table.groups.size());
    for (std::size_t t = 0; t < table.groups.size(); ++t)
        for (const auto& [key, group] : table.groups[t]) out[t].emplace(key, group.action);
    return out;
}

} // namespace dshare
