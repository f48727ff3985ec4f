#pragma once

// Verification suites: every check is addressed by (name, parameters), so a
// report item can always be rerun from its own record.

#include <string>
#include <vector>

#include <json.hpp>

#include "bwlat/enumeration.hpp"
#include "bwlat/report.hpp"

namespace bwlat {

struct RunOptions {
    EnumOptions enumeration;
    bool heavy = false;
    bool strict = false;
    std::uint64_t seed = 20240601;
    std::uint64_t samples = 1000;
};

struct MRange {
    int first = 1;
    int last = 4;
};

/// "A..B" or "A".
MRange parse_m_range(const std::string& text);

const std::vector<std::string>& suite_names();

/// True when the check is gated behind --heavy.
bool is_heavy(const std::string& check, const nlohmann::ordered_json& parameters);

/// Runs one check. Budget exhaustion yields a skipped item; under `strict`
/// the BudgetExceeded error propagates instead.
CheckItem run_check(const std::string& check, const nlohmann::ordered_json& parameters, const RunOptions& options);

/// The (check, parameters) list a suite expands to over the m range.
std::vector<std::pair<std::string, nlohmann::ordered_json>> suite_plan(const std::string& suite, MRange range,
                                                                       const RunOptions& options);

VerificationReport run_suite(const std::string& suite, MRange range, const RunOptions& options);

/// Reruns every item of a saved report; the result lists, per item, whether
/// status and counts were reproduced.
VerificationReport rerun_report(const VerificationReport& saved, const RunOptions& options);

}  // namespace bwlat
