#include <doctest.h>

#include "oracles.hpp"

#include "dshare/info.hpp"

#include <set>

using namespace dshare;

namespace {

ProblemSpec desk(std::uint64_t seed, int delay) { return random_problem(seed, Dims{3, 2, delay, 2, {2, 2}, {2, 2}}); }

} // namespace

TEST_CASE("info-set codes are a bijection onto 0..count-1") {
    for (int delay : {1, 2, 3}) {
        const ProblemSpec s = random_problem(1, Dims{3, 2, delay, 2, {2, 3}, {3, 2}});
        const InfoLayout layout(s);
        for (int t = 1; t <= s.horizon; ++t)
            for (int k = 0; k < 2; ++k) {
                CHECK(layout.info_count(t, k) == oracle::common_count(s, t) * oracle::private_count(s, t, k));
                std::set<std::size_t> seen;
                for (const CommonInfo& c : enumerate_common(s, t))
                    for (const PrivateInfo& p : enumerate_private(s, t, k)) {
                        const InfoSet i{c, p};
                        const std::size_t code = layout.encode(i);
                        CHECK(code < layout.info_count(t, k));
                        CHECK(layout.decode_info(t, k, code) == i);
                        seen.insert(code);
                    }
                CHECK(seen.size() == layout.info_count(t, k));
            }
    }
}

TEST_CASE("component lengths follow the sharing delay") {
    const ProblemSpec s = desk(1, 2);
    const InfoLayout layout(s);
    CHECK(layout.common_length(1) == 0);
    CHECK(layout.common_length(2) == 0);
    CHECK(layout.common_length(3) == 1);
    CHECK(layout.private_obs_length(1) == 1);
    CHECK(layout.private_obs_length(3) == 2);
    CHECK(layout.private_action_length(3) == 1);
}

TEST_CASE("codes of recorded histories agree with the reference encoding") {
    for (int delay : {1, 2}) {
        const ProblemSpec s = desk(6, delay);
        const InfoLayout layout(s);
        const StrategyTuple g = random_strategies(s, 9);
        for (int t = 1; t <= s.horizon; ++t)
            for (const auto& p : oracle::prefixes(s, g, t))
                for (int k = 0; k < 2; ++k)
                    CHECK(layout.info_code_of(t, k, p.jo, p.ja) == oracle::info_code(s, t, k, p));
    }
}

TEST_CASE("successor info sets nest and reject inconsistent shared data") {
    for (int delay : {1, 2}) {
        const ProblemSpec s = desk(2, delay);
        const InfoLayout layout(s);
        const StrategyTuple g = random_strategies(s, 4);
        for (int t = 1; t < s.horizon; ++t)
            for (const auto& p : oracle::prefixes(s, g, t + 1))
                for (int k = 0; k < 2; ++k) {
                    const InfoSet now = layout.decode_info(t, k, layout.info_code_of(t, k, p.jo, p.ja));
                    const int y = s.decode_joint_obs(p.jo[t])[k];
                    const int u = s.decode_joint_action(p.ja[t - 1])[k];
                    const int lag = std::max(t - delay + 1, 1);
                    const JointStep shared{p.jo[lag - 1], p.ja[lag - 1]};
                    const InfoSet next = successor_infoset(s, now, y, u, shared);
                    CHECK(layout.encode(next) == layout.info_code_of(t + 1, k, p.jo, p.ja));
                    // The common component only grows.
                    CHECK(std::equal(now.common.joint_obs.begin(), now.common.joint_obs.end(),
                                     next.common.joint_obs.begin()));
                    if (t >= delay) {
                        // Flipping controller k's own component of the shared observation
                        // contradicts what i_t^k already records.
                        auto obs = s.decode_joint_obs(shared.joint_obs);
                        obs[k] = 1 - obs[k];
                        const JointStep wrong{s.encode_joint_obs(obs), shared.joint_action};
                        CHECK_THROWS_AS(successor_infoset(s, now, y, u, wrong), InconsistentHistory);
                    }
                }
        const InfoSet last = layout.decode_info(s.horizon, 0, 0);
        CHECK_THROWS_AS(successor_infoset(s, last, 0, 0, JointStep{}), std::out_of_range);
    }
}

TEST_CASE("reconstructed strategy arguments reproduce the recorded lagged actions") {
    for (int delay : {1, 2}) {
        const ProblemSpec s = desk(8, delay);
        const InfoLayout layout(s);
        const StrategyTuple g = random_strategies(s, 21);
        std::size_t checked = 0;
        for (int t = delay; t <= s.horizon; ++t)
            for (const auto& p : oracle::prefixes(s, g, t + (t < s.horizon ? 1 : 0)))
                for (int k = 0; k < 2; ++k) {
                    const int lag = t - delay + 1;
                    const auto obs = s.decode_joint_obs(p.jo[lag - 1]);
                    const std::size_t common = layout.common_code_of(t, p.jo, p.ja);
                    for (const StrategyArgs& a : other_strategy_args(layout, t, k, common, obs)) {
                        CHECK(a.t == lag);
                        CHECK(a.code == layout.info_code_of(lag, a.controller, p.jo, p.ja));
                        if (lag < static_cast<int>(p.ja.size()) + 1) {
                            CHECK(g[a.controller].at(a.t, a.code) ==
                                  s.decode_joint_action(p.ja[lag - 1])[a.controller]);
                            ++checked;
                        }
                    }
                }
        CHECK(checked > 0);
        CHECK_THROWS_AS(other_strategy_args(layout, delay - 1 < 1 ? 0 : delay - 1, 0, 0, std::vector<int>{0, 0}),
                        std::out_of_range);
    }
}

TEST_CASE("strategy helpers") {
    const ProblemSpec s = desk(3, 1);
    const InfoLayout layout(s);
    const StrategyTuple z = zero_strategies(s);
    CHECK_NOTHROW(check_strategies(s, z));
    CHECK(random_strategies(s, 5) == random_strategies(s, 5));
    CHECK_FALSE(random_strategies(s, 5) == random_strategies(s, 6));
    StrategyTuple bad = z;
    bad[1].actions[2][0] = 2;
    CHECK_THROWS_AS(check_strategies(s, bad), ValidationError);
    bad = z;
    bad[0].actions[1].pop_back();
    CHECK_THROWS_AS(check_strategies(s, bad), ValidationError);
    bad = z;
    bad.pop_back();
    CHECK_THROWS_AS(check_strategies(s, bad), ValidationError);

    const StrategyTuple g = random_strategies(s, 12);
    for (int t = 1; t <= s.horizon; ++t)
        for (std::size_t c = 0; c < layout.common_count(t); ++c) {
            const StrategySlice slice = slice_at(layout, g, t, c);
            for (int j = 0; j < 2; ++j)
                for (std::size_t p = 0; p < layout.private_count(t, j); ++p)
                    CHECK(slice.actions[j][p] == g[j].at(t, layout.info_code(t, j, c, p)));
        }
}
