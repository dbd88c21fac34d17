#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relkit/budget.hpp"
#include "relkit/cache.hpp"

namespace relkit {

/// One catalogue case: inputs as DSL/JSON data, an expected verdict string
/// and the source anchor it reproduces.
struct ReproCase {
    std::string id;
    std::string anchor;
    std::string op;
    nlohmann::json params;
    std::string expect;
};

std::vector<ReproCase> load_catalog(const std::string& path);
std::vector<ReproCase> parse_catalog(const nlohmann::json& j);

struct CaseResult {
    std::string verdict;
    nlohmann::json witnesses = nlohmann::json::array();  // DSL literals
};

/// Executes the referenced operation; counterexamples and found witnesses are
/// returned as DSL structure literals alongside the verdict.
CaseResult run_case(const ReproCase& c, const SearchBudget& budget = {});

struct ReproOutcome {
    std::string id;
    std::string verdict;
    nlohmann::json witnesses = nlohmann::json::array();
    bool pass = false;
    bool from_cache = false;
    long long wall_ms = 0;
};

struct ReproReport {
    std::vector<ReproOutcome> outcomes;  // ordered by case id
    int passed = 0, failed = 0;
};

/// Runs cases (all, or the ones matching `only`) on `jobs` workers; the
/// report order is fixed by case id regardless of scheduling. A cache makes
/// repeated runs replay stored verdicts; a deterministic 10% sample is
/// recomputed and compared against the cached value.
ReproReport run_repro(const std::vector<ReproCase>& catalog, const std::string& only, int jobs,
                      const RunCache* cache, const SearchBudget& budget = {});

}  // namespace relkit
