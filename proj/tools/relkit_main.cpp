// relkit: a workbench for finite relational structures.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "relkit/amalgam.hpp"
#include "relkit/amalgam_builders.hpp"
#include "relkit/canonical.hpp"
#include "relkit/configuration.hpp"
#include "relkit/dot.hpp"
#include "relkit/dsl.hpp"
#include "relkit/dss.hpp"
#include "relkit/enumerate.hpp"
#include "relkit/json_io.hpp"
#include "relkit/partition.hpp"
#include "relkit/partition_builders.hpp"
#include "relkit/products.hpp"
#include "relkit/repro.hpp"

using namespace relkit;

namespace {

enum ExitCode { kPass = 0, kFail = 1, kInconclusive = 2, kUsage = 3 };

struct GlobalOptions {
    std::string format = "dsl";
    int jobs = 1;
    std::string cache_dir;
    double time_limit = 0;  // seconds; 0 = none
    std::string defs_file;  // optional DSL definitions

    SearchBudget budget() const {
        if (time_limit <= 0) return {};
        return SearchBudget::after(std::chrono::milliseconds(static_cast<long long>(
            time_limit * 1000)));
    }
    DslEnv env() const {
        if (defs_file.empty()) return {};
        std::ifstream in(defs_file);
        if (!in) throw std::runtime_error("cannot open definitions file " + defs_file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_dsl_file(buffer.str());
    }
};

std::string read_input(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::runtime_error("cannot open " + arg.substr(1));
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
    return arg;
}

Structure input_structure(const GlobalOptions& opts, const std::string& arg) {
    std::string text = read_input(arg);
    if (opts.format == "json") return structure_from_json(nlohmann::json::parse(text));
    return parse_structure(text, opts.env());
}

void print_structure_out(const GlobalOptions& opts, const Structure& s) {
    if (opts.format == "json")
        std::cout << structure_to_json(s).dump(2) << "\n";
    else
        std::cout << print_structure(s) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relkit: products, amalgamation, indivisibility and interpretations "
                 "for finite relational structures"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions opts;
    app.add_option("--format", opts.format, "Input/output format: dsl or json")
        ->check(CLI::IsMember({"dsl", "json"}));
    app.add_option("--jobs", opts.jobs, "Worker threads for catalogue runs");
    app.add_option("--cache-dir", opts.cache_dir, "On-disk result cache directory");
    app.add_option("--time-limit", opts.time_limit, "Soft time limit per search, seconds");
    app.add_option("--defs", opts.defs_file, "DSL file with named structures/classes");
    std::string config_file;
    app.add_option("--config", config_file, "JSON config with defaults for the global options")
        ->each([&](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
            nlohmann::json j;
            in >> j;
            opts.format = j.value("format", opts.format);
            opts.jobs = j.value("jobs", opts.jobs);
            opts.cache_dir = j.value("cache_dir", opts.cache_dir);
            opts.time_limit = j.value("time_limit", opts.time_limit);
            opts.defs_file = j.value("defs", opts.defs_file);
        });

    int exit_code = kPass;

    // check ap|sap|jep|hp|namalg
    auto* check = app.add_subcommand("check", "Amalgamation-style checks on a class");
    std::string check_kind, check_class;
    int check_base = 2, check_host = 6, check_n = 3, check_pad = 0, check_size = 4;
    bool check_strong = false;
    check->add_option("kind", check_kind, "ap | sap | jep | hp | namalg")->required();
    check->add_option("--class", check_class, "Class expression")->required();
    check->add_option("--base", check_base, "Size bound on the instances");
    check->add_option("--host", check_host, "Search bound for hosts/amalgams");
    check->add_option("--n", check_n, "Amalgamation dimension for namalg");
    check->add_option("--pad", check_pad, "Fresh points allowed beyond the colimit");
    check->add_option("--size", check_size, "Size bound for hp");
    check->add_flag("--strong", check_strong, "Require strong (disjoint) amalgams for ap");
    check->callback([&] {
        auto k = parse_class(read_input(check_class), opts.env());
        if (check_kind == "jep") {
            auto r = check_jep(k, check_base, check_host, opts.budget());
            if (r.status == JepResult::Status::Pass) {
                std::cout << "pass\n";
            } else {
                std::cout << "no-host-up-to-bound\n  left: "
                          << print_structure(r.failing_pair->first)
                          << "\n  right: " << print_structure(r.failing_pair->second) << "\n";
                exit_code = kInconclusive;
            }
        } else if (check_kind == "ap" || check_kind == "sap") {
            auto r = check_amalgamation_exhaustive(k, check_base, check_host,
                                                   check_kind == "sap" || check_strong,
                                                   opts.budget());
            if (r.pass) {
                std::cout << "pass\n";
            } else {
                std::cout << (r.exhaustive ? "fail\n" : "fail (bounded search)\n");
                if (r.failing) {
                    std::cout << "  a: " << print_structure(r.failing->a) << "\n  b0: "
                              << print_structure(r.failing->b0)
                              << "\n  b1: " << print_structure(r.failing->b1) << "\n";
                }
                exit_code = r.exhaustive ? kFail : kInconclusive;
            }
        } else if (check_kind == "hp") {
            auto r = check_hereditary(k, check_size);
            if (r.pass) {
                std::cout << "pass\n";
            } else {
                std::cout << "fail\n  member: " << print_structure(*r.member)
                          << "\n  substructure: " << print_structure(*r.substructure) << "\n";
                exit_code = kFail;
            }
        } else if (check_kind == "namalg") {
            auto r = check_disjoint_n(k, check_n, check_base, check_pad, opts.budget());
            if (r.status == DisjointNResult::Status::Pass) {
                std::cout << "pass (" << r.systems_checked << " base systems)\n";
            } else {
                bool certified = r.status == DisjointNResult::Status::Counterexample;
                std::cout << (certified ? "counterexample\n" : "inconclusive\n");
                if (r.witness)
                    for (size_t i = 0; i < r.witness->sets.size(); ++i)
                        std::cout << "  piece " << r.witness->sets[i] << ": "
                                  << print_structure(r.witness->structures[i]) << "\n";
                exit_code = certified ? kFail : kInconclusive;
            }
        } else {
            throw CLI::ValidationError("kind", "expected ap|sap|jep|hp|namalg");
        }
    });

    // indivisible verify|search
    auto* indiv = app.add_subcommand("indivisible", "Indivisibility checks and witness search");
    std::string indiv_kind, indiv_class, indiv_pattern, indiv_witness;
    int indiv_colors = 2, indiv_max = 6;
    indiv->add_option("kind", indiv_kind, "verify | search")->required();
    indiv->add_option("--class", indiv_class)->required();
    indiv->add_option("--pattern", indiv_pattern)->required();
    indiv->add_option("--colors", indiv_colors);
    indiv->add_option("--max-size", indiv_max);
    indiv->add_option("--witness", indiv_witness);
    indiv->callback([&] {
        auto k = parse_class(read_input(indiv_class), opts.env());
        auto pattern = input_structure(opts, indiv_pattern);
        if (indiv_kind == "verify") {
            auto b = input_structure(opts, indiv_witness);
            bool ok = verify_indivisibility_witness(k, pattern, indiv_colors, b);
            std::cout << (ok ? "true" : "false") << "\n";
            exit_code = ok ? kPass : kFail;
        } else if (indiv_kind == "search") {
            auto r = find_indivisibility_witness(k, pattern, indiv_colors, indiv_max,
                                                 opts.budget());
            if (r.status == WitnessSearch::Status::Found) {
                std::cout << "found\n";
                print_structure_out(opts, *r.witness);
            } else {
                std::cout << "none-up-to-bound\n";
                exit_code = kInconclusive;
            }
        } else {
            throw CLI::ValidationError("kind", "expected verify|search");
        }
    });

    // dss check
    auto* dss = app.add_subcommand("dss", "Definable self-similarity sweep");
    std::string dss_kind = "check", dss_class;
    int dss_size = 2, dss_host = 5;
    bool dss_full_range = false;
    dss->add_option("kind", dss_kind)->check(CLI::IsMember({"check"}));
    dss->add_option("--class", dss_class)->required();
    dss->add_option("--size", dss_size);
    dss->add_option("--host", dss_host);
    dss->add_flag("--full-range", dss_full_range,
                  "Quantify over all embeddings, not just one-point extensions");
    dss->callback([&] {
        auto k = parse_class(read_input(dss_class), opts.env());
        auto r = check_dss(k, dss_size, dss_host, !dss_full_range, opts.budget());
        if (r.status == DssSweepResult::Status::Pass) {
            std::cout << "pass (" << r.instances_checked << " instances)\n";
        } else {
            std::cout << "counter-instance\n  " << describe(*r.counter) << "\n";
            exit_code = kFail;
        }
    });

    // product lex|full|super|decompose-lex|decompose-full
    auto* product = app.add_subcommand("product", "Build or decompose product structures");
    std::string prod_kind, prod_left, prod_right, prod_input, prod_class0, prod_class1;
    std::vector<int> prod_aligner;
    int prod_bound = 6;
    product->add_option("kind", prod_kind, "lex | full | super | decompose-lex | decompose-full")
        ->required();
    product->add_option("--left", prod_left);
    product->add_option("--right", prod_right);
    product->add_option("--aligner", prod_aligner)->delimiter(',');
    product->add_option("--input", prod_input);
    product->add_option("--class0", prod_class0);
    product->add_option("--class1", prod_class1);
    product->add_option("--bound", prod_bound);
    product->callback([&] {
        if (prod_kind == "lex" || prod_kind == "full" || prod_kind == "super") {
            auto left = input_structure(opts, prod_left);
            auto right = input_structure(opts, prod_right);
            if (prod_kind == "lex") {
                print_structure_out(opts, lex_power(left, right).structure);
            } else if (prod_kind == "full") {
                print_structure_out(opts, full_structure({left, right}).structure);
            } else {
                std::vector<int> aligner = prod_aligner;
                if (aligner.empty())
                    for (int i = 0; i < left.size(); ++i) aligner.push_back(i);
                print_structure_out(opts, superpose_structures({left, right, aligner}).structure);
            }
            return;
        }
        auto k0 = parse_class(read_input(prod_class0), opts.env());
        auto k1 = parse_class(read_input(prod_class1), opts.env());
        auto s = input_structure(opts, prod_input);
        if (prod_kind == "decompose-lex") {
            auto d = decompose_lex(s, k0, k1);
            if (!d.accepted) {
                std::cout << "reject: " << d.reason << "\n";
                exit_code = kFail;
                return;
            }
            std::cout << "accept\nbase: " << print_structure(d.base) << "\n";
            for (size_t i = 0; i < d.fibers.size(); ++i)
                std::cout << "fiber " << i << ": " << print_structure(d.fibers[i]) << "\n";
        } else if (prod_kind == "decompose-full") {
            auto d = decompose_full(s, k0, k1, prod_bound);
            if (d.verdict == FullDecomposition::Verdict::Accept) {
                std::cout << "accept\nq0: " << print_structure(d.q0)
                          << "\nq1: " << print_structure(d.q1) << "\n";
            } else if (d.verdict == FullDecomposition::Verdict::Reject) {
                std::cout << "reject: " << d.reason << "\n";
                exit_code = kFail;
            } else {
                std::cout << "inconclusive: " << d.reason << "\n";
                exit_code = kInconclusive;
            }
        } else {
            throw CLI::ValidationError("kind", "unknown product kind");
        }
    });

    // config build|compose|transfer
    auto* config = app.add_subcommand("config", "Interpretation witnesses");
    std::string config_kind, config_name = "dg-to-g", config_outer, config_inner;
    std::string config_mode = "lex";
    int config_size = 3;
    config->add_option("kind", config_kind, "build | compose | transfer")->required();
    config->add_option("--name", config_name, "dg-to-g | g-to-po | g-to-t");
    config->add_option("--outer", config_outer);
    config->add_option("--inner", config_inner);
    config->add_option("--mode", config_mode, "lex | full | super (for transfer)");
    config->add_option("--size", config_size);
    config->callback([&] {
        auto by_name = [&](const std::string& name, int size) {
            auto which = builtin_configuration_from_name(name);
            if (!which) throw CLI::ValidationError("name", "unknown configuration " + name);
            return builtin_configuration(*which, size);
        };
        if (config_kind == "build") {
            auto w = by_name(config_name, config_size);
            std::cout << witness_to_json(w).dump(2) << "\n";
        } else if (config_kind == "compose") {
            auto outer = by_name(config_outer, config_size);
            auto inner = by_name(config_inner, 2 * config_size);
            auto composed = compose_configurations(outer, inner);
            std::cout << witness_to_json(composed).dump(2) << "\n";
        } else if (config_kind == "transfer") {
            // Set components realized in one shared bare-set target; entries
            // cover the product structures up to --size.
            ConfigWitness wsets;
            wsets.interp.index_sig = Signature{};
            wsets.interp.target_sig = Signature{};
            wsets.interp.width = 1;
            for (int n = 0; n <= config_size; ++n) {
                ConfigEntry e;
                e.index = make_set(n);
                e.target = make_set(std::max(config_size + 1, 1));
                e.map.resize(n);
                for (int v = 0; v < n; ++v) e.map[v] = {v};
                wsets.entries.push_back(std::move(e));
            }
            ConfigWitness out;
            if (config_mode == "lex") {
                std::vector<LexTransferEntry> entries;
                std::vector<Structure> fibers;
                std::function<void(int, int)> assemble = [&](int remaining, int max_fiber) {
                    if (!fibers.empty())
                        entries.push_back({LexAssembly{make_set(static_cast<int>(fibers.size())),
                                                       fibers, Signature{}}});
                    for (int s = 1; s <= std::min(remaining, max_fiber); ++s) {
                        fibers.push_back(make_set(s));
                        assemble(remaining - s, s);
                        fibers.pop_back();
                    }
                };
                assemble(config_size, config_size);
                out = lex_config_transfer(wsets, wsets, entries);
            } else if (config_mode == "full") {
                std::vector<FullTransferEntry> entries;
                for (int n0 = 1; n0 <= config_size; ++n0)
                    for (int n1 = 1; n0 * n1 <= config_size; ++n1)
                        entries.push_back({make_set(n0), make_set(n1), {}});
                out = full_config_transfer(wsets, wsets, entries);
            } else if (config_mode == "super") {
                auto spec = ClassSpec::super(ClassSpec::builtin(BuiltinClass::Sets),
                                             ClassSpec::builtin(BuiltinClass::Sets));
                std::vector<Structure> entries;
                for (int n = 0; n <= config_size; ++n)
                    entries.push_back(Structure(spec.sig(), n));
                out = super_config_transfer(wsets, wsets, entries, spec);
            } else {
                throw CLI::ValidationError("mode", "expected lex|full|super");
            }
            std::cout << witness_to_json(out).dump(2) << "\n";
        } else {
            throw CLI::ValidationError("kind", "expected build|compose|transfer");
        }
    });

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "Isomorph-free member lists");
    std::string enum_class;
    int enum_size = 3;
    enumerate->add_option("--class", enum_class)->required();
    enumerate->add_option("--size", enum_size);
    enumerate->callback([&] {
        auto k = parse_class(read_input(enum_class), opts.env());
        const auto& members = enumerate_members(k, enum_size);
        std::cout << members.size() << " members of size " << enum_size << "\n";
        for (const auto& m : members) print_structure_out(opts, m);
    });

    // export dot
    auto* export_cmd = app.add_subcommand("export", "Export a structure");
    std::string export_kind, export_input;
    export_cmd->add_option("kind", export_kind, "dot")->required();
    export_cmd->add_option("--input", export_input)->required();
    export_cmd->callback([&] {
        if (export_kind != "dot") throw CLI::ValidationError("kind", "expected dot");
        std::cout << export_dot(input_structure(opts, export_input));
    });

    // repro run|list
    auto* repro = app.add_subcommand("repro", "Run the example catalogue");
    std::string repro_kind = "run", repro_id = "all", repro_catalog = "data/repro/catalog.json";
    repro->add_option("kind", repro_kind, "run | list");
    repro->add_option("id", repro_id, "Case id or 'all'");
    repro->add_option("--catalog", repro_catalog, "Catalogue file");
    repro->callback([&] {
        auto catalog = load_catalog(repro_catalog);
        if (repro_kind == "list") {
            for (const auto& c : catalog) std::cout << c.id << "  [" << c.op << "]\n";
            return;
        }
        std::unique_ptr<RunCache> cache;
        if (!opts.cache_dir.empty()) cache = std::make_unique<RunCache>(opts.cache_dir);
        auto report = run_repro(catalog, repro_id, opts.jobs, cache.get(), opts.budget());
        if (report.outcomes.empty()) {
            std::cerr << "no such case: " << repro_id << "\n";
            exit_code = kUsage;
            return;
        }
        for (const auto& o : report.outcomes) {
            std::cout << (o.pass ? "PASS " : "FAIL ") << o.id << "  " << o.verdict << "\n";
            std::cerr << o.id << " took " << o.wall_ms << " ms" << (o.from_cache ? " (cached)" : "")
                      << "\n";
        }
        std::cout << report.passed << " passed, " << report.failed << " failed\n";
        if (report.failed) exit_code = kFail;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    } catch (const DslError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return exit_code;
}
