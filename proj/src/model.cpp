#include "dshare/model.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace dshare {

namespace {

int product(const std::vector<int>& sizes) {
    return std::accumulate(sizes.begin(), sizes.end(), 1, std::multiplies<>());
}

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

void check_size(std::size_t got, std::size_t want, const std::string& what) {
    if (got != want) {
        std::ostringstream os;
        os << "size mismatch: " << what << " has " << got << " entries, expected " << want;
        fail(os.str());
    }
}

// Every consecutive block of `row` entries must be a probability vector.
void check_rows(const std::vector<double>& probs, std::size_t row, const std::string& what) {
    for (std::size_t start = 0; start < probs.size(); start += row) {
        double sum = 0.0;
        for (std::size_t i = start; i < start + row; ++i) {
            const double p = probs[i];
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                std::ostringstream os;
                os << "probability out of range: " << what << " entry " << i << " = " << p;
                fail(os.str());
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream os;
            os.precision(17);
            os << "row-sum: " << what << " row " << start / row << " sums to " << sum;
            fail(os.str());
        }
    }
}

void normalize_rows(std::vector<double>& probs, std::size_t row) {
    for (std::size_t start = 0; start < probs.size(); start += row) {
        double sum = 0.0;
        for (std::size_t i = start; i < start + row; ++i) sum += probs[i];
        if (sum <= 0.0) continue;
        for (std::size_t i = start; i < start + row; ++i) probs[i] /= sum;
    }
}

void check_dims(const Dims& d) {
    if (d.horizon < 1) fail("horizon must be >= 1");
    if (d.num_controllers < 1) fail("num_controllers must be >= 1");
    if (d.delay < 1 || d.delay > d.horizon) fail("delay: must satisfy 1 <= T <= n");
    if (d.state_size < 1) fail("state_size must be >= 1");
    check_size(d.obs_sizes.size(), d.num_controllers, "obs_sizes");
    check_size(d.action_sizes.size(), d.num_controllers, "action_sizes");
    for (int s : d.obs_sizes)
        if (s < 1) fail("obs_sizes entries must be >= 1");
    for (int s : d.action_sizes)
        if (s < 1) fail("action_sizes entries must be >= 1");
}

} // namespace

std::size_t encode_digits(std::span<const int> digits, std::span<const int> radices) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) code = code * radices[i] + digits[i];
    return code;
}

void decode_digits(std::size_t code, std::span<const int> radices, std::span<int> digits) {
    for (std::size_t i = radices.size(); i-- > 0;) {
        digits[i] = static_cast<int>(code % radices[i]);
        code /= radices[i];
    }
}

int ProblemSpec::joint_action_count() const { return product(action_sizes); }
int ProblemSpec::joint_obs_count() const { return product(obs_sizes); }

double ProblemSpec::joint_observation(int t, int x, int prev_joint_action, int joint_obs) const {
    double p = 1.0;
    for (int k = num_controllers; k-- > 0;) {
        const int y = joint_obs % obs_sizes[k];
        joint_obs /= obs_sizes[k];
        p *= observation(t, k, x, prev_joint_action, y);
    }
    return p;
}

std::vector<int> ProblemSpec::decode_joint_action(int joint_action) const {
    std::vector<int> out(num_controllers);
    decode_digits(joint_action, action_sizes, out);
    return out;
}

int ProblemSpec::encode_joint_action(std::span<const int> actions) const {
    return static_cast<int>(encode_digits(actions, action_sizes));
}

std::vector<int> ProblemSpec::decode_joint_obs(int joint_obs) const {
    std::vector<int> out(num_controllers);
    decode_digits(joint_obs, obs_sizes, out);
    return out;
}

int ProblemSpec::encode_joint_obs(std::span<const int> obs) const {
    return static_cast<int>(encode_digits(obs, obs_sizes));
}

Dims ProblemSpec::dims() const {
    return Dims{horizon, num_controllers, delay, state_size, obs_sizes, action_sizes};
}

ProblemSpec validate_problem(const ProblemSpec& spec) {
    check_dims(spec.dims());
    const std::size_t nx = spec.state_size;
    const std::size_t na = spec.joint_action_count();
    const int n = spec.horizon;
    const int K = spec.num_controllers;

    check_size(spec.initial_dist.size(), nx, "initial_dist");
    check_rows(spec.initial_dist, nx, "initial_dist");

    check_size(spec.initial_obs_kernel.size(), K, "initial_obs_kernel");
    check_size(spec.obs_kernels.size(), K, "obs_kernels");
    for (int k = 0; k < K; ++k) {
        const std::size_t ny = spec.obs_sizes[k];
        const std::string tag = "controller " + std::to_string(k);
        check_size(spec.initial_obs_kernel[k].size(), nx * ny, "initial_obs_kernel[" + tag + "]");
        check_rows(spec.initial_obs_kernel[k], ny, "initial_obs_kernel[" + tag + "]");
        check_size(spec.obs_kernels[k].size(), n - 1, "obs_kernels[" + tag + "]");
        for (int t = 2; t <= n; ++t) {
            const auto& q = spec.obs_kernels[k][t - 2];
            const std::string what = "obs_kernels[" + tag + ", t=" + std::to_string(t) + "]";
            check_size(q.size(), nx * na * ny, what);
            check_rows(q, ny, what);
        }
    }

    check_size(spec.transition_kernels.size(), n - 1, "transition_kernels");
    for (int t = 1; t < n; ++t) {
        const auto& s = spec.transition_kernels[t - 1];
        const std::string what = "transition_kernels[t=" + std::to_string(t) + "]";
        check_size(s.size(), nx * na * nx, what);
        check_rows(s, nx, what);
    }

    check_size(spec.stage_cost.size(), n, "stage_cost");
    for (int t = 1; t <= n; ++t) {
        const auto& c = spec.stage_cost[t - 1];
        check_size(c.size(), nx * na, "stage_cost[t=" + std::to_string(t) + "]");
        for (double v : c)
            if (!std::isfinite(v)) fail("non-finite cost at t=" + std::to_string(t));
    }
    return spec;
}

ProblemSpec uniform_problem(const Dims& d) {
    check_dims(d);
    ProblemSpec spec;
    spec.horizon = d.horizon;
    spec.num_controllers = d.num_controllers;
    spec.delay = d.delay;
    spec.state_size = d.state_size;
    spec.obs_sizes = d.obs_sizes;
    spec.action_sizes = d.action_sizes;
    const std::size_t nx = d.state_size;
    const std::size_t na = spec.joint_action_count();
    spec.initial_dist.assign(nx, 1.0 / nx);
    for (int k = 0; k < d.num_controllers; ++k) {
        const std::size_t ny = d.obs_sizes[k];
        spec.initial_obs_kernel.emplace_back(nx * ny, 1.0 / ny);
        spec.obs_kernels.emplace_back();
        for (int t = 2; t <= d.horizon; ++t) spec.obs_kernels[k].emplace_back(nx * na * ny, 1.0 / ny);
    }
    for (int t = 1; t < d.horizon; ++t) spec.transition_kernels.emplace_back(nx * na * nx, 1.0 / nx);
    for (int t = 1; t <= d.horizon; ++t) spec.stage_cost.emplace_back(nx * na, 0.0);
    return spec;
}

ProblemSpec random_problem(std::uint64_t seed, const Dims& d) {
    ProblemSpec spec = uniform_problem(d);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](std::vector<double>& v) {
        for (double& p : v) p = unit(rng);
    };
    const std::size_t nx = d.state_size;
    draw(spec.initial_dist);
    normalize_rows(spec.initial_dist, nx);
    for (int k = 0; k < d.num_controllers; ++k) {
        const std::size_t ny = d.obs_sizes[k];
        draw(spec.initial_obs_kernel[k]);
        normalize_rows(spec.initial_obs_kernel[k], ny);
        for (auto& q : spec.obs_kernels[k]) {
            draw(q);
            normalize_rows(q, ny);
        }
    }
    for (auto& s : spec.transition_kernels) {
        draw(s);
        normalize_rows(s, nx);
    }
    for (auto& c : spec.stage_cost) draw(c);
    return validate_problem(spec);
}

ProblemSpec normalize_problem(const ProblemSpec& spec) {
    ProblemSpec out = spec;
    const std::size_t nx = spec.state_size;
    normalize_rows(out.initial_dist, nx);
    for (int k = 0; k < spec.num_controllers; ++k) {
        normalize_rows(out.initial_obs_kernel[k], spec.obs_sizes[k]);
        for (auto& q : out.obs_kernels[k]) normalize_rows(q, spec.obs_sizes[k]);
    }
    for (auto& s : out.transition_kernels) normalize_rows(s, nx);
    return out;
}

} // namespace dshare
