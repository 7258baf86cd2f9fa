#pragma once

#include "dshare/io.hpp"
#include "dshare/solver.hpp"

#include <optional>

namespace dshare {

inline constexpr const char* kToolName = "dshare";
inline constexpr const char* kToolVersion = "0.1.0";

/// Tool, version and instance hash shared by every report.
json provenance(const ProblemSpec& spec);

/// Numerical settings that determine the output: grids, tolerances and tie-break rule.
json settings_json(const PbpOptions& options, std::uint64_t budget);

json verification_to_json(const Verification& v);

/**
 * Full solve report: provenance, settings, the PbP result with its trace, per-controller
 * raw value tables of the final tuple and, when given, the verification summary. The
 * output is a pure function of its arguments (no clocks, no addresses).
 */
json solve_report(const ProblemSpec& spec, const PbpResult& result, const PbpOptions& options, std::uint64_t budget,
                  const std::optional<Verification>& verification);

} // namespace dshare
