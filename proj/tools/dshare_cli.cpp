// Command-line front end: validate instances, solve for person-by-person optimal
// strategies, verify tuples, dump filters and run the oracle comparison suite.

#include "dshare/compare.hpp"
#include "dshare/io.hpp"
#include "dshare/report.hpp"
#include "dshare/solver.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace dshare;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kFailed = 2, kBudget = 3 };

struct Config {
    std::string problem;
    std::string strategies;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seeded = false;
    double epsilon = 1e-9;
    int max_iters = 100;
    std::uint64_t budget = kDefaultBudget;
    int controller = 0;
    bool no_verify = false;
    int seeds = 20;
    Dims dims{3, 2, 1, 2, {2, 2}, {2, 2}};
};

int diagnose(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    return code;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

StrategyTuple initial_strategies(const ProblemSpec& spec, const Config& cfg) {
    if (!cfg.strategies.empty()) return load_strategies(spec, cfg.strategies);
    return cfg.seeded ? random_strategies(spec, cfg.seed) : zero_strategies(spec);
}

json summary(const ProblemSpec& spec) {
    const InfoLayout layout(spec);
    json counts = json::array();
    for (int k = 0; k < spec.num_controllers; ++k) {
        json per_t = json::array();
        for (int t = 1; t <= spec.horizon; ++t) per_t.push_back(layout.info_count(t, k));
        counts.push_back(per_t);
    }
    json j = provenance(spec);
    j["command"] = "validate";
    j["valid"] = true;
    j["horizon"] = spec.horizon;
    j["num_controllers"] = spec.num_controllers;
    j["delay"] = spec.delay;
    j["state_size"] = spec.state_size;
    j["obs_sizes"] = spec.obs_sizes;
    j["action_sizes"] = spec.action_sizes;
    j["info_set_counts"] = counts;
    return j;
}

int run_validate(const Config& cfg) {
    write_text(cfg.out, dump(summary(load_problem(cfg.problem))));
    return kOk;
}

int run_solve(const Config& cfg) {
    const ProblemSpec spec = load_problem(cfg.problem);
    const PbpOptions options{cfg.max_iters, cfg.epsilon};
    const PbpResult result = pbp_solve(spec, initial_strategies(spec, cfg), options);
    std::optional<Verification> verification;
    if (!cfg.no_verify) verification = verify_pbp(spec, result.strategies, cfg.budget);
    if (cfg.format == "csv") {
        std::string text;
        for (int k = 0; k < spec.num_controllers; ++k) text += value_table_csv(best_response_dp(spec, k, result.strategies).table);
        write_text(cfg.out, text);
    } else {
        write_text(cfg.out, dump(solve_report(spec, result, options, cfg.budget, verification)));
    }
    return kOk;
}

int run_best_response(const Config& cfg) {
    const ProblemSpec spec = load_problem(cfg.problem);
    if (cfg.controller < 0 || cfg.controller >= spec.num_controllers)
        throw ValidationError("controller out of range");
    const BestResponse br = best_response_dp(spec, cfg.controller, initial_strategies(spec, cfg));
    if (cfg.format == "csv") {
        write_text(cfg.out, value_table_csv(br.table));
        return kOk;
    }
    json j = provenance(spec);
    j["command"] = "best-response";
    j["controller"] = cfg.controller;
    j["value"] = br.value;
    j["strategy"] = br.strategy.actions;
    j["value_table"] = value_table_to_json(br.table);
    write_text(cfg.out, dump(j));
    return kOk;
}

int run_verify(const Config& cfg) {
    const ProblemSpec spec = load_problem(cfg.problem);
    if (cfg.strategies.empty()) throw ValidationError("verify needs --strategies");
    const StrategyTuple tuple = load_strategies(spec, cfg.strategies);
    const Verification v = verify_pbp(spec, tuple, cfg.budget);
    json j = provenance(spec);
    j["command"] = "verify";
    j["payoff"] = expected_total_cost(spec, tuple);
    j["verification"] = verification_to_json(v);
    write_text(cfg.out, dump(j));
    return v.holds ? kOk : kFailed;
}

template <class Belief>
void emit(json& rows, std::ostringstream& csv, const char* kind, int t, int k, std::size_t code,
          const Filtered<Belief>& b) {
    if (!b) return;
    rows.push_back({{"kind", kind}, {"t", t}, {"controller", k}, {"code", code}, {"probs", b->probs}});
    for (std::size_t i = 0; i < b->probs.size(); ++i)
        csv << kind << ',' << t << ',' << k << ',' << code << ',' << i << ',' << b->probs[i] << '\n';
}

int run_filters(const Config& cfg) {
    const ProblemSpec spec = load_problem(cfg.problem);
    const StrategyTuple tuple = initial_strategies(spec, cfg);
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "kind,t,controller,code,index,probability\n";
    for (int k = 0; k < spec.num_controllers; ++k) {
        const PrivateFilterTable table = private_filter_table(spec, tuple, k);
        for (int t = 1; t <= spec.horizon; ++t)
            for (std::size_t code = 0; code < table.beliefs[t - 1].size(); ++code)
                if (table.prob[t - 1][code] > 0.0) emit(rows, csv, "xi", t, k, code, table.beliefs[t - 1][code]);
    }
    const auto pi = pi_filter_table(spec);
    const auto theta = theta_filter_table(spec, tuple);
    for (int t = 1; t <= spec.horizon; ++t) {
        for (std::size_t c = 0; c < pi[t - 1].size(); ++c) emit(rows, csv, "pi", t, -1, c, pi[t - 1][c]);
        for (std::size_t c = 0; c < theta[t - 1].size(); ++c) emit(rows, csv, "theta", t, -1, c, theta[t - 1][c]);
    }
    if (cfg.format == "csv") {
        write_text(cfg.out, csv.str());
    } else {
        json j = provenance(spec);
        j["command"] = "filters";
        j["strategies"] = strategies_to_json(tuple).at("strategies");
        j["beliefs"] = rows;
        write_text(cfg.out, dump(j));
    }
    return kOk;
}

int run_oracle_compare(const Config& cfg) {
    std::vector<std::pair<std::string, ProblemSpec>> instances;
    if (!cfg.problem.empty()) {
        instances.emplace_back(cfg.problem, load_problem(cfg.problem));
    } else {
        for (int delay : {1, 2})
            for (int seed = 1; seed <= cfg.seeds; ++seed) {
                Dims dims{3, 2, delay, 2, {2, 2}, {2, 2}};
                instances.emplace_back("seed=" + std::to_string(seed) + " delay=" + std::to_string(delay),
                                       random_problem(seed, dims));
            }
    }
    bool all = true;
    json matrix = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "instance,cell,pass,max_error,checked\n";
    std::uint64_t index = 0;
    for (const auto& [name, spec] : instances) {
        const StrategyTuple tuple = cfg.strategies.empty() ? random_strategies(spec, cfg.seeded ? cfg.seed : ++index)
                                                           : load_strategies(spec, cfg.strategies);
        json cells = json::array();
        for (const CompareCell& cell : compare_all(spec, tuple, cfg.budget)) {
            all = all && cell.pass;
            cells.push_back(cell_to_json(cell));
            csv << name << ',' << cell.name << ',' << (cell.pass ? 1 : 0) << ',' << cell.max_error << ','
                << cell.checked << '\n';
        }
        matrix.push_back({{"instance", name}, {"instance_hash", instance_hash(spec)}, {"cells", cells}});
    }
    if (cfg.format == "csv") {
        write_text(cfg.out, csv.str());
    } else {
        write_text(cfg.out, dump({{"tool", kToolName},
                                  {"version", kToolVersion},
                                  {"command", "oracle-compare"},
                                  {"all_pass", all},
                                  {"matrix", matrix}}));
    }
    return all ? kOk : kFailed;
}

int run_random_gen(const Config& cfg) {
    Dims dims = cfg.dims;
    if (dims.obs_sizes.size() == 1) dims.obs_sizes.assign(dims.num_controllers, dims.obs_sizes[0]);
    if (dims.action_sizes.size() == 1) dims.action_sizes.assign(dims.num_controllers, dims.action_sizes[0]);
    const ProblemSpec spec = validate_problem(random_problem(cfg.seed, dims));
    write_text(cfg.out, dump(problem_to_json(spec)));
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact person-by-person optimization for decentralized control with delayed sharing"};
    app.require_subcommand(1);
    Config cfg;

    const auto common = [&](CLI::App* sub, bool needs_problem) {
        auto* p = sub->add_option("--problem", cfg.problem, "problem JSON file");
        if (needs_problem) p->required();
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    };
    const auto seeded = [&](CLI::App* sub, const char* help) {
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& s) {
                cfg.seed = s;
                cfg.seeded = true;
            },
            help);
    };
    const auto budget = [&](CLI::App* sub) {
        sub->add_option("--budget", cfg.budget, "brute-force enumeration budget")->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "check a problem file and print a summary");
    common(validate, true);

    auto* solve = app.add_subcommand("solve", "run person-by-person best-response iteration");
    common(solve, true);
    seeded(solve, "seed for random initial strategies (default: all zeros)");
    solve->add_option("--strategies", cfg.strategies, "initial strategies JSON");
    solve->add_option("--epsilon", cfg.epsilon, "minimum accepted improvement")->check(CLI::PositiveNumber);
    solve->add_option("--max-iters", cfg.max_iters, "maximum number of rounds")->check(CLI::NonNegativeNumber);
    solve->add_flag("--no-verify", cfg.no_verify, "skip brute-force verification of the result");
    budget(solve);

    auto* best = app.add_subcommand("best-response", "best response of one controller by dynamic programming");
    common(best, true);
    seeded(best, "seed for random strategies of the others (default: all zeros)");
    best->add_option("--strategies", cfg.strategies, "strategies JSON");
    best->add_option("--controller", cfg.controller, "responding controller (0-based)");

    auto* verify = app.add_subcommand("verify", "check a tuple for person-by-person optimality");
    common(verify, true);
    verify->add_option("--strategies", cfg.strategies, "strategies JSON")->required();
    budget(verify);

    auto* filters = app.add_subcommand("filters", "dump private and centralized beliefs on reachable histories");
    common(filters, true);
    seeded(filters, "seed for random strategies (default: all zeros)");
    filters->add_option("--strategies", cfg.strategies, "strategies JSON");

    auto* compare = app.add_subcommand("oracle-compare", "filters and DP against brute-force oracles");
    common(compare, false);
    seeded(compare, "seed for the random strategies (default: instance index)");
    compare->add_option("--strategies", cfg.strategies, "strategies JSON (requires --problem)");
    compare->add_option("--seeds", cfg.seeds, "grid seeds 1..N when no problem is given")->check(CLI::PositiveNumber);
    budget(compare);

    auto* gen = app.add_subcommand("random-gen", "write a seeded random instance");
    gen->add_option("--seed", cfg.seed, "random seed");
    gen->add_option("--out", cfg.out, "output file (default stdout)");
    gen->add_option("--horizon", cfg.dims.horizon)->check(CLI::PositiveNumber);
    gen->add_option("--controllers", cfg.dims.num_controllers)->check(CLI::PositiveNumber);
    gen->add_option("--delay", cfg.dims.delay)->check(CLI::PositiveNumber);
    gen->add_option("--states", cfg.dims.state_size)->check(CLI::PositiveNumber);
    gen->add_option("--obs", cfg.dims.obs_sizes, "one size, or one per controller");
    gen->add_option("--actions", cfg.dims.action_sizes, "one size, or one per controller");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        return diagnose("usage", e.what(), kInvalid);
    }

    try {
        if (*validate) return run_validate(cfg);
        if (*solve) return run_solve(cfg);
        if (*best) return run_best_response(cfg);
        if (*verify) return run_verify(cfg);
        if (*filters) return run_filters(cfg);
        if (*compare) return run_oracle_compare(cfg);
        if (*gen) return run_random_gen(cfg);
    } catch (const BudgetExceeded& e) {
        std::cerr << json{{"error", "budget_exceeded"},
                          {"message", e.what()},
                          {"count", e.count()},
                          {"at_least", e.at_least()},
                          {"exit_code", kBudget}}
                         .dump()
                  << '\n';
        return kBudget;
    } catch (const ValidationError& e) {
        return diagnose("validation", e.what(), kInvalid);
    } catch (const InconsistentHistory& e) {
        return diagnose("validation", e.what(), kInvalid);
    } catch (const std::exception& e) {
        return diagnose("internal", e.what(), kFailed);
    }
    return kOk;
}
