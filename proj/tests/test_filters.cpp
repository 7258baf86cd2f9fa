#include <doctest.h>

#include "oracles.hpp"

#include "dshare/filters.hpp"

#include <cmath>
#include <map>
#include <tuple>

using namespace dshare;

namespace {

ProblemSpec desk(std::uint64_t seed, int delay) { return random_problem(seed, Dims{3, 2, delay, 2, {2, 2}, {2, 2}}); }

// One controller, two epochs, binary spaces, hand-picked numbers.
ProblemSpec two_step() {
    ProblemSpec s = uniform_problem(Dims{2, 1, 1, 2, {2}, {2}});
    s.initial_dist = {0.6, 0.4};
    s.initial_obs_kernel[0] = {0.9, 0.1, 0.2, 0.8};
    // [x][u][x']
    s.transition_kernels[0] = {0.7, 0.3, 0.1, 0.9, 0.4, 0.6, 0.5, 0.5};
    return validate_problem(s);
}

double sum(const std::vector<double>& v) {
    double z = 0.0;
    for (double p : v) z += p;
    return z;
}

} // namespace

TEST_CASE("state marginal after one step matches a hand computation") {
    const ProblemSpec s = two_step();
    StrategyTuple g = zero_strategies(s);
    g[0].actions[0] = {0, 1}; // act on the first observation
    // 0.6*0.9*0.7 + 0.6*0.1*0.1 + 0.4*0.2*0.4 + 0.4*0.8*0.5
    const double expected = 0.576;
    double got = 0.0;
    for (const auto& w : joint_distribution(s, g, 2).paths)
        if (w.path.states[1] == 0) got += w.prob;
    CHECK(got == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("joint law agrees with the reference trajectory enumeration") {
    for (int delay : {1, 2}) {
        const ProblemSpec s = desk(5, delay);
        const StrategyTuple g = random_strategies(s, 17);
        for (int t = 1; t <= s.horizon; ++t) {
            const auto ref = oracle::prefixes(s, g, t);
            const auto joint = joint_distribution(s, g, t);
            double total = 0.0;
            for (const auto& w : joint.paths) total += w.prob;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            using Key = std::tuple<std::vector<int>, std::vector<int>, std::vector<int>>;
            std::map<Key, double> expected;
            for (const auto& p : ref) expected[{p.x, p.jo, p.ja}] += p.prob;
            std::map<Key, double> got;
            for (const auto& w : joint.paths) {
                std::vector<int> ja(w.path.joint_actions.begin(), w.path.joint_actions.begin() + (t - 1));
                got[{w.path.states, w.path.joint_obs, ja}] += w.prob;
            }
            REQUIRE(got.size() == expected.size());
            for (const auto& [key, prob] : expected) {
                REQUIRE(got.count(key) == 1);
                CHECK(got[key] == doctest::Approx(prob).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("every defined belief is a probability vector") {
    for (int delay : {1, 2}) {
        const ProblemSpec s = desk(9, delay);
        const StrategyTuple g = random_strategies(s, 2);
        for (int k = 0; k < 2; ++k) {
            const PrivateFilterTable table = private_filter_table(s, g, k);
            for (int t = 1; t <= s.horizon; ++t)
                for (std::size_t c = 0; c < table.beliefs[t - 1].size(); ++c) {
                    const auto& b = table.beliefs[t - 1][c];
                    if (!b) {
                        CHECK(table.prob[t - 1][c] == 0.0);
                        continue;
                    }
                    CHECK(sum(b->probs) == doctest::Approx(1.0).epsilon(1e-12));
                    for (double p : b->probs) CHECK(p >= 0.0);
                }
            double mass = 0.0;
            for (double p : table.prob[s.horizon - 1]) mass += p;
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        }
        for (const auto& level : theta_filter_table(s, g))
            for (const auto& b : level)
                if (b) CHECK(sum(b->probs) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("recursions match the reference conditionals") {
    for (int delay : {1, 2})
        for (std::uint64_t seed : {3u, 14u}) {
            const ProblemSpec s = desk(seed, delay);
            const StrategyTuple g = random_strategies(s, seed + 40);
            const auto pi = pi_filter_table(s);
            const auto theta = theta_filter_table(s, g);
            for (int t = 1; t <= s.horizon; ++t) {
                for (int k = 0; k < 2; ++k) {
                    const auto ref = oracle::private_conditionals(s, g, t, k);
                    const auto xi = private_filter_table(s, g, k);
                    for (std::size_t c = 0; c < ref.size(); ++c) {
                        if (!ref[c]) continue;
                        REQUIRE(xi.beliefs[t - 1][c].has_value());
                        for (std::size_t i = 0; i < ref[c]->size(); ++i)
                            CHECK(xi.beliefs[t - 1][c]->probs[i] == doctest::Approx((*ref[c])[i]).epsilon(1e-12));
                    }
                }
                if (t > delay) {
                    const auto ref = oracle::lagged_state_conditionals(s, g, t);
                    for (std::size_t c = 0; c < ref.size(); ++c)
                        if (ref[c]) CHECK(pi[t - 1][c]->probs[0] == doctest::Approx((*ref[c])[0]).epsilon(1e-12));
                } else {
                    CHECK(pi[t - 1].empty());
                }
                const auto ref = oracle::central_conditionals(s, g, t);
                for (std::size_t c = 0; c < ref.size(); ++c) {
                    if (!ref[c]) continue;
                    REQUIRE(theta[t - 1][c].has_value());
                    for (std::size_t i = 0; i < ref[c]->size(); ++i)
                        CHECK(theta[t - 1][c]->probs[i] == doctest::Approx((*ref[c])[i]).epsilon(1e-12));
                }
            }
        }
}

TEST_CASE("the lagged-state filter ignores strategies") {
    const ProblemSpec s = desk(4, 1);
    const auto table = pi_filter_table(s);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const StrategyTuple g = random_strategies(s, seed);
        for (int t = 2; t <= s.horizon; ++t) {
            const auto oracle_pi = pi_from_joint(s, joint_distribution(s, g, t));
            for (std::size_t c = 0; c < oracle_pi.size(); ++c)
                if (oracle_pi[c]) CHECK(table[t - 1][c]->probs[1] == doctest::Approx(oracle_pi[c]->probs[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("single controller: the central filter is the classical history filter") {
    const ProblemSpec s = random_problem(2, Dims{3, 1, 1, 3, {2}, {2}});
    const StrategyTuple g = random_strategies(s, 8);
    const auto theta = theta_filter_table(s, g);
    const auto xi = private_filter_table(s, g, 0);
    const InfoLayout layout(s);
    // With one controller the private belief at (delta, y_t) is the central belief conditioned on y_t.
    for (int t = 1; t <= s.horizon; ++t)
        for (std::size_t c = 0; c < layout.common_count(t); ++c) {
            if (!theta[t - 1][c]) continue;
            const auto& th = theta[t - 1][c]->probs;
            const std::size_t all = layout.all_count(t);
            for (std::size_t y = 0; y < all; ++y) {
                double z = 0.0;
                for (int x = 0; x < s.state_size; ++x) z += th[x * all + y];
                if (z < 1e-12) continue;
                const auto& b = xi.beliefs[t - 1][layout.info_code(t, 0, c, y)];
                REQUIRE(b.has_value());
                for (int x = 0; x < s.state_size; ++x)
                    CHECK(b->probs[x] == doctest::Approx(th[x * all + y] / z).epsilon(1e-12));
            }
        }
}

TEST_CASE("impossible observations give an undefined update") {
    ProblemSpec s = two_step();
    s.initial_obs_kernel[0] = {1.0, 0.0, 1.0, 0.0};
    s = validate_problem(s);
    CHECK_FALSE(private_belief_init(s, 1, 0).has_value());
    CHECK(private_belief_init(s, 0, 0).has_value());
    CHECK_FALSE(pi_init(s, 1).has_value());
}
