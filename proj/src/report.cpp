#include "dshare/report.hpp"

namespace dshare {

json provenance(const ProblemSpec& spec) {
    return {{"tool", kToolName}, {"version", kToolVersion}, {"instance_hash", instance_hash(spec)}};
}

json settings_json(const PbpOptions& options, std::uint64_t budget) {
    return {
        {"epsilon", options.epsilon},
        {"max_iters", options.max_iters},
        {"budget", budget},
        {"quantization_grid", kQuantum},
        {"tolerance", kTolerance},
        {"tie_tolerance", kTieTolerance},
        {"row_sum_tolerance", kRowSumTolerance},
        {"zero_mass_threshold", kZeroMass},
        {"tie_break", "lowest action index"},
    };
}

json verification_to_json(const Verification& v) {
    json out{{"holds", v.holds}, {"worst_gap", v.worst_gap}, {"witness", nullptr}};
    if (v.witness)
        out["witness"] = {{"controller", v.witness->controller},
                          {"payoff", v.witness->payoff},
                          {"deviation", v.witness->deviation.actions}};
    return out;
}

json solve_report(const ProblemSpec& spec, const PbpResult& result, const PbpOptions& options, std::uint64_t budget,
                  const std::optional<Verification>& verification) {
    json report = provenance(spec);
    report["command"] = "solve";
    report["settings"] = settings_json(options, budget);

    json res{{"payoff", result.payoff},
             {"iterations", result.iterations},
             {"converged", result.converged},
             {"trace", result.trace}};
    res["strategies"] = strategies_to_json(result.strategies).at("strategies");
    report["result"] = res;

    json tables = json::array();
    for (int k = 0; k < spec.num_controllers; ++k)
        tables.push_back(value_table_to_json(best_response_dp(spec, k, result.strategies).table));
    report["value_tables"] = tables;
    report["verification"] = verification ? verification_to_json(*verification) : json(nullptr);
    return report;
}

} // namespace dshare
