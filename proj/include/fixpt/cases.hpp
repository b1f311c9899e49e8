#pragma once

#include <string>
#include <vector>

#include "fixpt/serialize.hpp"

namespace fixpt {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ComparisonRow {
    std::string quantity;
    std::optional<double> closed_form, estimated, observed;
};

struct NamedTrace {
    std::string file; // "trace.csv" for the primary run
    Trace trace;
};

struct CaseResult {
    std::string name;
    std::vector<NamedTrace> traces;
    std::vector<AnnulusRate> annuli; // of the primary trace
    Json estimates = Json::object();
    std::optional<RateCertificate> certificate;
    std::optional<Verdict> verdict;
    std::optional<ViolationProfile> profile;
    std::vector<ComparisonRow> comparison;
    std::vector<Check> checks;

    const Trace& primary() const { return traces.front().trace; }
    bool passed() const;
    std::vector<std::string> failures() const;
    std::optional<double> certified_c() const;
};

struct CaseContext {
    std::uint64_t seed = 0;
    Execution execution = Execution::parallel;
};

const std::vector<std::string>& case_names();

// default parameters of a study; ParseError for an unknown name
Json case_defaults(const std::string& name);

// defaults overridden by `given`; unknown keys are rejected
Json merge_params(const std::string& name, const Json& given, const std::string& path = "case.params");

// `params` must be a merged parameter object
CaseResult run_case(const std::string& name, const Json& params, const CaseContext& ctx = {});

} // namespace fixpt
