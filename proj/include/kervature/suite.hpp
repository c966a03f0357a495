#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kervature/json_io.hpp"

namespace kervature {

/// Expected outcome of a suite check.  "report-only" matches anything, which
/// makes known negative results (the K0 failures) first-class green entries.
enum class Expect { Pass, Fail, Skipped, ReportOnly };

std::string expect_str(Expect e);
Expect parse_expect(const std::string& s);

struct CheckSpec {
    std::string name;      // unique label for the report
    std::string check;     // dispatch tag, validated at parse time
    std::string kernel;    // name from SuiteConfig::kernels; empty for family checks
    Expect expect = Expect::ReportOnly;
    Json params = Json::object();  // remaining keys of the check object
};

struct SuiteConfig {
    int workers = 0;       // 0: library default (KERVATURE_WORKERS or hardware)
    std::string output;    // report directory; empty: stdout only
    std::string format = "json";  // json | csv | both
    std::vector<std::pair<std::string, KernelPtr>> kernels;
    std::vector<CheckSpec> checks;
};

SuiteConfig parse_suite_config(const Json& j);

/// Embedded config text for a built-in suite name, or nullptr if unknown.
/// "reference-suite" ships the full verification matrix.
const char* builtin_config(const std::string& name);

struct CheckResult {
    std::string name;
    std::string check;
    std::string kernel;
    Expect expect = Expect::ReportOnly;
    std::string outcome;   // pass | fail | skipped | error
    bool matched = false;
    Json report = Json::object();
    std::string error;     // set iff outcome == "error"
};

struct SuiteResult {
    int workers = 1;
    std::vector<CheckResult> checks;
    int matched = 0;
    int mismatched = 0;
    int errors = 0;
    /// 0 when every check matched its expectation, 1 otherwise.  Infrastructure
    /// failures surface as exceptions, not as an exit code here.
    int exit_code() const { return mismatched == 0 ? 0 : 1; }
};

/// Runs every check (concurrently up to the worker count) and assembles the
/// results in input order.  Evaluation errors are recorded per check; only
/// infrastructure failures throw.
SuiteResult run_suite(const SuiteConfig& cfg);

/// Full suite report.  With the timestamp included, two runs of the same
/// config differ at most in the generated_at line.
Json suite_report_json(const SuiteResult& r, bool with_timestamp = true);

/// One CSV row per check: name,check,kernel,expect,outcome,matched.
std::string csv_summary(const SuiteResult& r);

enum class GridQuantity { K, Curvature, Gaussian, Ratio, Margin };

GridQuantity parse_quantity(const std::string& s);

/// CSV table of a pointwise quantity over the sample: coordinates first, then
/// the entries of the quantity at (z, z).  ratio is d dbar log K * (1-|z|^2)^2
/// and margin is 1/(1-|z|^2)^2 - d dbar log K; both are disc-only.
std::string emit_grid(const KernelPtr& k, GridQuantity q, const SampleSet& s);

}  // namespace kervature
