// Reproduction suites over the bundled fixture tables. Each check reports expected vs computed.
#pragma once

#include "cyperiods/ingest.hpp"
#include "cyperiods/relations.hpp"

#include <string>
#include <vector>

namespace cyp {

// note: an explained discrepancy in printed data, never counted as a failure
enum class CheckStatus { pass, fail, skipped, note };
std::string to_string(CheckStatus s);

struct CheckResult {
    std::string suite;
    std::string name;
    CheckStatus status = CheckStatus::fail;
    std::string expected;
    std::string computed;
    std::string residual;  // |computed - expected| or a relation residual
    int agreeing_digits = 0;
    std::string detail;
};

struct VerifyConfig {
    int digits = 60;
    IngestConfig ingest = IngestConfig::defaults();
};

/// T3 P61 FE OP862 OP867 S63 SHIMURA MONO T2
const std::vector<std::string>& suite_ids();
/// "all" runs every suite. Errors inside a check become failed checks; unknown ids throw NotFound.
std::vector<CheckResult> run_suite(const std::string& id, const VerifyConfig& cfg);

/// 10^-(decimals - 2) for a printed decimal literal, the tolerance used against printed values.
Real printed_tolerance(const std::string& literal);
/// Number of significant digits in a printed decimal literal.
int significant_digits(const std::string& literal);

}  // namespace cyp
