#include <doctest.h>

#include "dshare/model.hpp"

#include <cmath>
#include <limits>

using namespace dshare;

namespace {

ProblemSpec desk(std::uint64_t seed, int delay = 1) { return random_problem(seed, Dims{3, 2, delay, 2, {2, 2}, {2, 2}}); }

template <class F>
std::string validation_message(F&& mutate) {
    ProblemSpec s = desk(1);
    mutate(s);
    try {
        validate_problem(s);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("random instances are valid, normalized and reproducible") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ProblemSpec a = desk(seed);
        CHECK_NOTHROW(validate_problem(a));
        CHECK(a == desk(seed));
        CHECK_FALSE(a == desk(seed + 1));
        double z = 0.0;
        for (double p : a.initial_dist) z += p;
        CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
        for (int t = 1; t < a.horizon; ++t)
            for (int x = 0; x < a.state_size; ++x)
                for (int ja = 0; ja < a.joint_action_count(); ++ja) {
                    double row = 0.0;
                    for (int xn = 0; xn < a.state_size; ++xn) row += a.transition(t, x, ja, xn);
                    CHECK(std::abs(row - 1.0) <= kRowSumTolerance);
                }
    }
}

TEST_CASE("joint indices put controller 0 first") {
    const ProblemSpec s = random_problem(3, Dims{2, 3, 1, 2, {2, 3, 2}, {3, 2, 2}});
    CHECK(s.joint_action_count() == 12);
    CHECK(s.joint_obs_count() == 12);
    const std::vector<int> u{2, 1, 0};
    CHECK(s.encode_joint_action(u) == (2 * 2 + 1) * 2 + 0);
    for (int a = 0; a < s.joint_action_count(); ++a) CHECK(s.encode_joint_action(s.decode_joint_action(a)) == a);
    for (int o = 0; o < s.joint_obs_count(); ++o) CHECK(s.encode_joint_obs(s.decode_joint_obs(o)) == o);
}

TEST_CASE("joint observation probability is the product of the marginals") {
    const ProblemSpec s = desk(4);
    for (int t = 1; t <= s.horizon; ++t)
        for (int x = 0; x < s.state_size; ++x)
            for (int jo = 0; jo < s.joint_obs_count(); ++jo) {
                const auto y = s.decode_joint_obs(jo);
                const double expected = s.observation(t, 0, x, 1, y[0]) * s.observation(t, 1, x, 1, y[1]);
                CHECK(s.joint_observation(t, x, 1, jo) == doctest::Approx(expected).epsilon(1e-15));
            }
}

TEST_CASE("validation names the violated invariant") {
    CHECK(validation_message([](ProblemSpec& s) { s.initial_dist[0] += 0.01; }).find("row-sum") == 0);
    CHECK(validation_message([](ProblemSpec& s) { s.transition_kernels[0][0] *= 0.5; }).find("row-sum") == 0);
    CHECK(validation_message([](ProblemSpec& s) { s.delay = 0; }).find("delay") == 0);
    CHECK(validation_message([](ProblemSpec& s) { s.delay = 4; }).find("delay") == 0);
    CHECK(validation_message([](ProblemSpec& s) { s.stage_cost.pop_back(); }).find("size mismatch") == 0);
    CHECK(validation_message([](ProblemSpec& s) { s.obs_kernels[1][0].push_back(0.0); }).find("size mismatch") == 0);
    CHECK(validation_message([](ProblemSpec& s) {
              s.stage_cost[1][2] = std::numeric_limits<double>::quiet_NaN();
          }).find("non-finite cost") == 0);
    CHECK(validation_message([](ProblemSpec&) {}).empty());
}

TEST_CASE("normalize repairs rows that are off by rounding") {
    ProblemSpec s = desk(2);
    s.initial_dist[0] *= 1.0 + 1e-9;
    CHECK_THROWS_AS(validate_problem(s), ValidationError);
    CHECK_NOTHROW(validate_problem(normalize_problem(s)));
}

TEST_CASE("uniform instance has zero cost and uniform kernels") {
    const ProblemSpec s = uniform_problem(Dims{2, 2, 1, 3, {2, 2}, {2, 1}});
    CHECK_NOTHROW(validate_problem(s));
    CHECK(s.transition(1, 0, 1, 2) == doctest::Approx(1.0 / 3));
    CHECK(s.cost(2, 1, 0) == 0.0);
}

TEST_CASE("mixed-radix digits round trip") {
    const std::vector<int> radices{3, 1, 4, 2};
    std::vector<int> digits(4);
    for (std::size_t code = 0; code < 24; ++code) {
        decode_digits(code, radices, digits);
        CHECK(encode_digits(digits, radices) == code);
    }
}
