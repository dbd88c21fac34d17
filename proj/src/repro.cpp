#include "relkit/repro.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "relkit/amalgam.hpp"
#include "relkit/amalgam_builders.hpp"
#include "relkit/canonical.hpp"
#include "relkit/configuration.hpp"
#include "relkit/dsl.hpp"
#include "relkit/dss.hpp"
#include "relkit/json_io.hpp"
#include "relkit/partition.hpp"
#include "relkit/partition_builders.hpp"
#include "relkit/dot.hpp"
#include "relkit/products.hpp"

namespace relkit {

namespace {

Structure param_structure(const nlohmann::json& params, const std::string& field) {
    const auto& j = params.at(field);
    if (j.is_string()) return parse_structure(j.get<std::string>());
    return structure_from_json(j);
}

ClassSpec param_class(const nlohmann::json& params, const std::string& field) {
    return parse_class(params.at(field).get<std::string>());
}

std::vector<int> param_ints(const nlohmann::json& params, const std::string& field) {
    return params.at(field).get<std::vector<int>>();
}

DssInstance param_dss_instance(const nlohmann::json& params) {
    DssInstance inst;
    inst.a = param_structure(params, "a");
    inst.b = param_structure(params, "b");
    inst.c = param_structure(params, "c");
    inst.f = param_ints(params, "f");
    inst.base = param_ints(params, "base");
    inst.pivot = params.at("pivot").get<int>();
    inst.g = param_ints(params, "g");
    return inst;
}

CaseResult dispatch(const ReproCase& c, const SearchBudget& budget) {
    const auto& p = c.params;
    if (c.op == "check_ap_instance") {
        auto k = param_class(p, "class");
        AmalgInstance inst{param_structure(p, "a"), param_structure(p, "b0"),
                           param_structure(p, "b1"), param_ints(p, "f0"), param_ints(p, "f1")};
        auto r = check_ap_instance(k, inst, p.at("host").get<int>(),
                                   p.value("strong", false), budget);
        CaseResult out;
        out.verdict = r.status == ApResult::Status::Found ? "found" : "none-up-to-bound";
        if (r.amalgam) out.witnesses.push_back(print_structure(r.amalgam->c));
        return out;
    }
    if (c.op == "check_jep") {
        auto r = check_jep(param_class(p, "class"), p.at("base").get<int>(),
                           p.at("host").get<int>(), budget);
        CaseResult out;
        out.verdict = r.status == JepResult::Status::Pass ? "pass" : "no-host-up-to-bound";
        if (r.failing_pair) {
            out.witnesses.push_back(print_structure(r.failing_pair->first));
            out.witnesses.push_back(print_structure(r.failing_pair->second));
        }
        return out;
    }
    if (c.op == "check_sap_exhaustive" || c.op == "check_ap_exhaustive") {
        auto r = check_amalgamation_exhaustive(param_class(p, "class"), p.at("base").get<int>(),
                                               p.at("host").get<int>(),
                                               c.op == "check_sap_exhaustive", budget);
        CaseResult out;
        out.verdict = r.pass ? "pass" : "fail";
        if (r.failing) {
            out.witnesses.push_back(print_structure(r.failing->a));
            out.witnesses.push_back(print_structure(r.failing->b0));
            out.witnesses.push_back(print_structure(r.failing->b1));
        }
        return out;
    }
    if (c.op == "check_hereditary") {
        auto r = check_hereditary(param_class(p, "class"), p.at("size").get<int>());
        CaseResult out;
        out.verdict = r.pass ? "pass" : "fail";
        if (r.member) out.witnesses.push_back(print_structure(*r.member));
        return out;
    }
    if (c.op == "singleton_census") {
        return {std::to_string(singleton_census(param_class(p, "class"))), {}};
    }
    if (c.op == "check_reductive_subclass") {
        std::map<std::string, std::string> renames;
        if (p.contains("renames"))
            for (const auto& [from, to] : p.at("renames").items())
                renames[from] = to.get<std::string>();
        auto r = check_reductive_subclass(param_class(p, "class0"), param_class(p, "class1"),
                                          p.at("size").get<int>(), renames);
        CaseResult out;
        out.verdict = r.pass ? "pass" : "fail";
        if (r.counterexample) out.witnesses.push_back(print_structure(*r.counterexample));
        return out;
    }
    if (c.op == "check_disjoint_n") {
        auto r = check_disjoint_n(param_class(p, "class"), p.at("n").get<int>(),
                                  p.at("base").get<int>(), p.value("pad", 0), budget);
        CaseResult out;
        switch (r.status) {
            case DisjointNResult::Status::Pass: out.verdict = "pass"; break;
            case DisjointNResult::Status::Counterexample: out.verdict = "counterexample"; break;
            case DisjointNResult::Status::Inconclusive: out.verdict = "inconclusive"; break;
        }
        if (r.witness)
            for (const auto& piece : r.witness->structures)
                out.witnesses.push_back(print_structure(piece));
        return out;
    }
    if (c.op == "check_dss") {
        auto r = check_dss(param_class(p, "class"), p.at("size").get<int>(),
                           p.at("host").get<int>(), true, budget);
        CaseResult out;
        out.verdict = r.status == DssSweepResult::Status::Pass ? "pass" : "counter-instance";
        if (r.counter) out.witnesses.push_back(describe(*r.counter));
        return out;
    }
    if (c.op == "check_dss_instance") {
        auto r = check_dss_instance(param_class(p, "class"), param_dss_instance(p),
                                    p.value("host", -1), budget);
        CaseResult out;
        out.verdict = r.status == DssInstanceResult::Status::Found ? "found" : "none-up-to-bound";
        if (r.witness) out.witnesses.push_back(print_structure(r.witness->d));
        return out;
    }
    if (c.op == "dss_from_3amalg") {
        auto r = dss_from_3amalg(param_class(p, "class"), param_dss_instance(p), budget);
        CaseResult out;
        switch (r.status) {
            case DssBuild::Status::Built: out.verdict = "built"; break;
            case DssBuild::Status::HypothesisFailed: out.verdict = "hypothesis-failed"; break;
            case DssBuild::Status::SolverFailed: out.verdict = "solver-failed"; break;
        }
        if (r.witness) out.witnesses.push_back(print_structure(r.witness->d));
        return out;
    }
    if (c.op == "find_indivisibility_witness") {
        auto r = find_indivisibility_witness(param_class(p, "class"), param_structure(p, "pattern"),
                                             p.at("colors").get<int>(), p.at("max_size").get<int>(),
                                             budget);
        if (r.status != WitnessSearch::Status::Found) return {"none-up-to-bound", {}};
        CaseResult out;
        out.verdict = "found:" + std::to_string(r.witness->size());
        out.witnesses.push_back(print_structure(*r.witness));
        return out;
    }
    if (c.op == "verify_indivisibility_witness") {
        bool ok = verify_indivisibility_witness(param_class(p, "class"),
                                                param_structure(p, "pattern"),
                                                p.at("colors").get<int>(),
                                                param_structure(p, "witness"));
        return {ok ? "true" : "false", {}};
    }
    if (c.op == "lex_indivisibility_witness") {
        auto r = lex_indivisibility_witness(param_class(p, "class0"), param_class(p, "class1"),
                                            param_structure(p, "pattern"),
                                            p.at("colors").get<int>());
        CaseResult out;
        if (r.status == WitnessBuild::Status::Built) {
            out.verdict = r.verified_substructure ? "built-verified" : "built";
            out.witnesses.push_back(print_structure(r.left_factor));
            out.witnesses.push_back(print_structure(r.right_factor));
        } else {
            out.verdict = "inconclusive";
        }
        return out;
    }
    if (c.op == "builtin_configuration") {
        auto which = builtin_configuration_from_name(p.at("name").get<std::string>());
        if (!which) throw std::invalid_argument("unknown configuration " + c.id);
        auto w = builtin_configuration(*which, p.at("size").get<int>());
        return {verify_configuration(w) ? "violation" : "verified", {}};
    }
    if (c.op == "compose_dg_po") {
        auto outer = builtin_configuration(BuiltinConfiguration::DgToG, p.at("size").get<int>());
        auto inner = builtin_configuration(BuiltinConfiguration::GToPo,
                                           2 * p.at("size").get<int>());
        auto composed = compose_configurations(outer, inner);
        return {verify_configuration(composed) ? "violation" : "verified", {}};
    }
    throw std::invalid_argument("unknown repro op " + c.op);
}

}  // namespace

std::vector<ReproCase> parse_catalog(const nlohmann::json& j) {
    std::vector<ReproCase> out;
    for (const auto& item : j) {
        ReproCase c;
        c.id = item.at("id").get<std::string>();
        c.anchor = item.value("anchor", "");
        c.op = item.at("op").get<std::string>();
        c.params = item.value("params", nlohmann::json::object());
        c.expect = item.at("expect").get<std::string>();
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(),
              [](const ReproCase& a, const ReproCase& b) { return a.id < b.id; });
    return out;
}

std::vector<ReproCase> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog " + path);
    nlohmann::json j;
    in >> j;
    return parse_catalog(j);
}

CaseResult run_case(const ReproCase& c, const SearchBudget& budget) {
    return dispatch(c, budget);
}

ReproReport run_repro(const std::vector<ReproCase>& catalog, const std::string& only, int jobs,
                      const RunCache* cache, const SearchBudget& budget) {
    std::vector<const ReproCase*> selected;
    for (const auto& c : catalog)
        if (only.empty() || only == "all" || c.id == only) selected.push_back(&c);

    ReproReport report;
    report.outcomes.resize(selected.size());
    std::mutex next_mutex;
    size_t next = 0;

    auto worker = [&] {
        while (true) {
            size_t index;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= selected.size()) return;
                index = next++;
            }
            const ReproCase& c = *selected[index];
            ReproOutcome outcome;
            outcome.id = c.id;
            const std::string request =
                nlohmann::json{{"op", c.op}, {"params", c.params}}.dump();
            const uint64_t key = RunCache::key_of(request);
            // A deterministic tenth of the records is recomputed even on
            // cache hits and compared against the stored verdict.
            const bool audit = key % 10 == 0;
            auto start = std::chrono::steady_clock::now();
            std::optional<std::string> verdict;
            nlohmann::json witnesses = nlohmann::json::array();
            if (cache) {
                if (auto hit = cache->lookup(key)) {
                    if (hit->value("request", "") == request) {
                        verdict = hit->at("verdict").get<std::string>();
                        witnesses = hit->value("witnesses", nlohmann::json::array());
                        outcome.from_cache = true;
                    }
                }
            }
            if (!verdict || (audit && cache)) {
                std::string computed;
                nlohmann::json computed_witnesses = nlohmann::json::array();
                try {
                    auto result = run_case(c, budget.restarted());
                    computed = std::move(result.verdict);
                    computed_witnesses = std::move(result.witnesses);
                } catch (const std::exception& e) {
                    computed = std::string("error: ") + e.what();
                }
                if (verdict && *verdict != computed)
                    computed = "error: cache mismatch (stored " + *verdict + ", recomputed " +
                               computed + ")";
                verdict = computed;
                witnesses = std::move(computed_witnesses);
                auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
                if (cache && verdict->rfind("error:", 0) != 0)
                    cache->store(key, nlohmann::json{{"request", request},
                                                     {"verdict", *verdict},
                                                     {"witnesses", witnesses},
                                                     {"wall_ms", wall}});
            }
            outcome.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            outcome.verdict = *verdict;
            outcome.witnesses = std::move(witnesses);
            outcome.pass = *verdict == c.expect;
            report.outcomes[index] = std::move(outcome);
        }
    };

    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& o : report.outcomes) (o.pass ? report.passed : report.failed)++;
    return report;
}

}  // namespace relkit
