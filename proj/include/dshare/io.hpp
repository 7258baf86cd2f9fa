#pragma once

#include "dshare/filters.hpp"
#include "dshare/info.hpp"
#include "dshare/model.hpp"
#include "dshare/solver.hpp"

#include <json.hpp>

#include <string>

namespace dshare {

using json = nlohmann::json;

/**
 * Problem files use nested row-major arrays:
 *   initial_obs_kernel [k][x][y], obs_kernels [k][t-2][x][a][y],
 *   transition_kernels [t-1][x][a][x'], stage_cost [t-1][x][a]
 * where a is the flattened joint action. See docs/problem.schema.json.
 */
json problem_to_json(const ProblemSpec& spec);
/// Parses and validates; every structural or numeric problem becomes a ValidationError.
ProblemSpec problem_from_json(const json& j);

ProblemSpec load_problem(const std::string& path);
void save_problem(const std::string& path, const ProblemSpec& spec);

/// {"strategies": [k][t-1][info code]}.
json strategies_to_json(const StrategyTuple& strategies);
/// Accepts the object above (or any report containing it) and checks it against the spec.
StrategyTuple strategies_from_json(const ProblemSpec& spec, const json& j);
StrategyTuple load_strategies(const ProblemSpec& spec, const std::string& path);

/// FNV-1a 64 of the canonical problem JSON, as 16 hex digits.
std::string instance_hash(const ProblemSpec& spec);

json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

/// "index,probability" lines.
std::string belief_csv(std::span<const double> probs);

json value_table_to_json(const ValueTable& table);
std::string value_table_csv(const ValueTable& table);
json grouped_table_to_json(const GroupedValueTable& table);
std::string grouped_table_csv(const GroupedValueTable& table);

} // namespace dshare
