#include "doctest.h"

#include "oracles.hpp"
#include "relkit/canonical.hpp"
#include "relkit/configuration.hpp"
#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"
#include "relkit/products.hpp"

using namespace relkit;

namespace {
const ClassSpec g_graphs = ClassSpec::builtin(BuiltinClass::Graphs);
const ClassSpec g_digraphs = ClassSpec::builtin(BuiltinClass::Digraphs);
const ClassSpec g_sets = ClassSpec::builtin(BuiltinClass::Sets);

// Width-1 identity witness for a class over all members of size <= n into
// each member itself.
ConfigWitness identity_witness(const ClassSpec& k, int max_size) {
    ConfigWitness w;
    w.interp.index_sig = k.sig();
    w.interp.target_sig = k.sig();
    w.interp.width = 1;
    for (const auto& decl : k.sig().symbols()) {
        std::vector<VarRef> vars;
        for (int i = 0; i < decl.arity; ++i) vars.push_back({i, 0});
        w.interp.formulas.emplace(decl.name, QfFormula::atom(decl.name, vars));
    }
    for (int n = 0; n <= max_size; ++n)
        for (const auto& m : enumerate_members(k, n)) {
            ConfigEntry e;
            e.index = m;
            e.target = m;
            e.map.resize(m.size());
            for (int v = 0; v < m.size(); ++v) e.map[v] = {v};
            w.entries.push_back(std::move(e));
        }
    return w;
}
}  // namespace

TEST_CASE("eval_qf") {
    auto k2 = complete_graph(2);
    auto phi = QfFormula::atom("E", {{0, 0}, {1, 1}});
    CHECK(eval_qf(phi, k2, {{0, 9}, {9, 1}}));
    CHECK_FALSE(eval_qf(phi, k2, {{0, 9}, {9, 0}}));

    auto eq = QfFormula::eq({0, 0}, {1, 0});
    CHECK(eval_qf(eq, k2, {{1}, {1}}));
    CHECK_FALSE(eval_qf(eq, k2, {{0}, {1}}));

    auto mixed = QfFormula::conj(
        {QfFormula::negate(QfFormula::atom("E", {{0, 0}, {1, 0}})),
         QfFormula::atom("E", {{1, 0}, {0, 0}})});
    CHECK_FALSE(eval_qf(mixed, k2, {{0}, {1}}));

    CHECK(eval_qf(QfFormula::range_eq(0, 1, 0, 2), k2, {{0, 1}, {0, 1}}));
    CHECK_FALSE(eval_qf(QfFormula::range_eq(0, 1, 0, 2), k2, {{0, 1}, {0, 0}}));

    CHECK_THROWS(eval_qf(phi, k2, {{0}}));  // unassigned variable
}

TEST_CASE("formula round trip") {
    auto phi = QfFormula::disj(
        {QfFormula::conj({QfFormula::atom("E", {{0, 0}, {1, 1}}), QfFormula::truth(true)}),
         QfFormula::negate(QfFormula::range_eq(0, 1, 2, 3)),
         QfFormula::eq({0, 1}, {1, 0})});
    auto text = formula_to_string(phi);
    CHECK(formula_to_string(parse_formula(text)) == text);
}

TEST_CASE("builtin configuration: digraphs into graphs") {
    auto w = builtin_configuration(BuiltinConfiguration::DgToG, 3);
    CHECK(verify_configuration(w) == std::nullopt);
    CHECK(w.interp.width == 2);
    CHECK(w.injective());

    // The 2-cycle digraph's target: 4 vertices, exactly 2 undirected edges.
    auto two_cycle = make_digraph(2, {{0, 1}, {1, 0}});
    bool found = false;
    for (const auto& e : w.entries) {
        if (is_isomorphic(e.index, two_cycle)) {
            found = true;
            CHECK(e.target.size() == 4);
            CHECK(e.target.tuples(0).size() == 4);  // 2 undirected edges
        }
    }
    CHECK(found);

    // A deliberately flipped edge in one map breaks the condition.
    auto broken = w;
    for (auto& e : broken.entries) {
        if (e.index.size() == 2 && e.index.tuples(0).size() == 1) {
            std::swap(e.map[0], e.map[1]);
            auto violation = verify_configuration(broken);
            REQUIRE(violation);
            CHECK(violation->symbol == "R");
            break;
        }
    }

    // Empty entry list verifies vacuously.
    ConfigWitness empty;
    empty.interp = w.interp;
    CHECK(verify_configuration(empty) == std::nullopt);
}

TEST_CASE("builtin configuration: graphs into partial orders and tournaments") {
    auto po = builtin_configuration(BuiltinConfiguration::GToPo, 3);
    CHECK(verify_configuration(po) == std::nullopt);
    auto t = builtin_configuration(BuiltinConfiguration::GToT, 3);
    CHECK(verify_configuration(t) == std::nullopt);
    // Targets checked in class by construction; spot-check one.
    auto po_class = ClassSpec::builtin(BuiltinClass::PartialOrders);
    for (const auto& e : po.entries) CHECK(contains(po_class, e.target));
}

TEST_CASE("compose_configurations") {
    // DG -> G -> PO: a width-4 witness over digraphs of size <= 3.
    auto outer = builtin_configuration(BuiltinConfiguration::DgToG, 3);
    auto inner = builtin_configuration(BuiltinConfiguration::GToPo, 6);
    auto composed = compose_configurations(outer, inner);
    CHECK(composed.interp.width == 4);
    CHECK(verify_configuration(composed) == std::nullopt);
    CHECK(composed.entries.size() == outer.entries.size());

    // Composition with the identity changes nothing semantically.
    auto id = identity_witness(g_graphs, 6);
    CHECK(id.injective());
    auto with_id = compose_configurations(outer, id);
    CHECK(with_id.interp.width == 2);
    CHECK(verify_configuration(with_id) == std::nullopt);

    // Non-injective inner rejected: collapse a map.
    auto non_injective = id;
    bool patched = false;
    for (auto& e : non_injective.entries)
        if (e.index.size() == 2 && e.index.tuple_count() == 0) {
            e.map[1] = e.map[0];
            patched = true;
            break;
        }
    REQUIRE(patched);
    CHECK_FALSE(non_injective.injective());
    CHECK_THROWS(compose_configurations(outer, non_injective));
}

TEST_CASE("make_injective") {
    // A constant-map witness into a 3-element target.
    ConfigWitness w;
    w.interp.index_sig = g_sets.sig();
    w.interp.target_sig = graph_signature();
    w.interp.width = 1;
    ConfigEntry e;
    e.index = make_set(3);
    e.target = edgeless_graph(3);
    e.map = {{0}, {0}, {0}};
    w.entries.push_back(e);
    REQUIRE(verify_configuration(w) == std::nullopt);
    CHECK_FALSE(w.injective());

    auto inj = make_injective(w);
    CHECK(inj.interp.width == 2);
    CHECK(inj.injective());
    CHECK(verify_configuration(inj) == std::nullopt);

    // Idempotent in effect on an already injective witness.
    auto again = make_injective(inj);
    CHECK(again.injective());

    // Target too small.
    ConfigWitness too_small = w;
    too_small.entries[0].target = edgeless_graph(2);
    too_small.entries[0].map = {{0}, {0}, {1}};
    REQUIRE(verify_configuration(too_small) == std::nullopt);
    CHECK_THROWS(make_injective(too_small));
}

TEST_CASE("lex_config_transfer") {
    // sets lex sets over a 4-element bare-set target.
    ConfigWitness w0;
    w0.interp.index_sig = g_sets.sig();
    w0.interp.target_sig = Signature{};
    w0.interp.width = 1;
    for (int n = 0; n <= 4; ++n) {
        ConfigEntry e;
        e.index = make_set(n);
        e.target = make_set(4);
        e.map.resize(n);
        for (int v = 0; v < n; ++v) e.map[v] = {v};
        w0.entries.push_back(std::move(e));
    }
    auto w1 = w0;  // same shape for the base side; injective
    REQUIRE(w1.injective());

    std::vector<LexTransferEntry> entries;
    entries.push_back({LexAssembly{make_set(2), {make_set(1), make_set(2)}, Signature{}}});
    entries.push_back({LexAssembly{make_set(1), {make_set(3)}, Signature{}}});
    entries.push_back({LexAssembly{make_set(4), std::vector<Structure>(4, make_set(1)), Signature{}}});
    auto transferred = lex_config_transfer(w0, w1, entries);
    CHECK(transferred.interp.width == 2);
    CHECK(verify_configuration(transferred) == std::nullopt);

    // Non-injective base witness rejected.
    ConfigWitness bad = w1;
    bad.entries[2].map[1] = bad.entries[2].map[0];
    CHECK_THROWS(lex_config_transfer(w0, bad, entries));
}

TEST_CASE("full_config_transfer") {
    // graphs boxtimes sets realized inside a 4-element graph target.
    ConfigWitness w0;
    w0.interp.index_sig = graph_signature();
    w0.interp.target_sig = graph_signature();
    w0.interp.width = 1;
    w0.interp.formulas.emplace("E", QfFormula::atom("E", {{0, 0}, {1, 0}}));
    auto host = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});  // 4-cycle
    for (int n = 0; n <= 2; ++n)
        for (const auto& m : enumerate_members(g_graphs, n)) {
            auto maps = embedding_maps(m, host);
            if (maps.empty()) continue;
            ConfigEntry e;
            e.index = m;
            e.target = host;
            e.map.resize(m.size());
            for (int v = 0; v < m.size(); ++v) e.map[v] = {maps[0][v]};
            w0.entries.push_back(std::move(e));
        }
    ConfigWitness w1;
    w1.interp.index_sig = g_sets.sig();
    w1.interp.target_sig = graph_signature();
    w1.interp.width = 1;
    for (int n = 0; n <= 2; ++n) {
        ConfigEntry e;
        e.index = make_set(n);
        e.target = host;
        e.map.resize(n);
        for (int v = 0; v < n; ++v) e.map[v] = {v};
        w1.entries.push_back(std::move(e));
    }
    REQUIRE(w0.injective());
    REQUIRE(w1.injective());

    std::vector<FullTransferEntry> entries;
    entries.push_back({complete_graph(2), make_set(2), {}});
    entries.push_back({complete_graph(2), make_set(2), {0, 3}});  // anti-diagonal
    auto transferred = full_config_transfer(w0, w1, entries);
    CHECK(transferred.interp.width == 2);
    CHECK(verify_configuration(transferred) == std::nullopt);

    ConfigWitness bad = w1;
    for (auto& e : bad.entries)
        if (e.index.size() == 2) e.map[1] = e.map[0];
    CHECK_THROWS(full_config_transfer(w0, bad, entries));
}

TEST_CASE("super_config_transfer") {
    auto lo = ClassSpec::builtin(BuiltinClass::LinearOrders);
    auto spec = ClassSpec::super(g_graphs, lo);
    // Component witnesses into a shared linear-order target.
    auto target = make_linear_order(4);
    ConfigWitness w0;
    w0.interp.index_sig = g_graphs.sig();
    w0.interp.target_sig = target.sig();
    w0.interp.width = 2;
    // E(x, y) iff the two interval blocks strictly cross.
    auto crossing = [](int x, int y) {
        return QfFormula::conj({QfFormula::atom("lt", {{x, 0}, {y, 0}}),
                                QfFormula::atom("lt", {{y, 0}, {x, 1}}),
                                QfFormula::atom("lt", {{x, 1}, {y, 1}})});
    };
    w0.interp.formulas.emplace("E", QfFormula::disj({crossing(0, 1), crossing(1, 0)}));
    {
        ConfigEntry edge;
        edge.index = complete_graph(2);
        edge.target = target;
        edge.map = {{0, 2}, {1, 3}};  // crossing intervals
        w0.entries.push_back(edge);
        ConfigEntry nonedge;
        nonedge.index = edgeless_graph(2);
        nonedge.target = target;
        nonedge.map = {{0, 1}, {2, 3}};  // disjoint intervals
        w0.entries.push_back(nonedge);
        ConfigEntry point;
        point.index = edgeless_graph(1);
        point.target = target;
        point.map = {{0, 1}};
        w0.entries.push_back(point);
    }
    REQUIRE(verify_configuration(w0) == std::nullopt);

    ConfigWitness w1;
    w1.interp.index_sig = lo.sig();
    w1.interp.target_sig = target.sig();
    w1.interp.width = 1;
    w1.interp.formulas.emplace("lt", QfFormula::atom("lt", {{0, 0}, {1, 0}}));
    for (int n = 1; n <= 2; ++n) {
        ConfigEntry e;
        e.index = make_linear_order(n);
        e.target = target;
        e.map.resize(n);
        for (int v = 0; v < n; ++v) e.map[v] = {v};
        w1.entries.push_back(std::move(e));
    }
    REQUIRE(verify_configuration(w1) == std::nullopt);

    // Superposed entries: an edge with both orientations of the order.
    std::vector<Structure> entries;
    for (auto flip : {false, true}) {
        StructureBuilder sb(spec.sig(), 2);
        sb.edge("E", 0, 1);
        sb.add2("lt", flip ? 1 : 0, flip ? 0 : 1);
        entries.push_back(sb.build());
    }
    auto transferred = super_config_transfer(w0, w1, entries, spec);
    CHECK(transferred.interp.width == 3);
    CHECK(verify_configuration(transferred) == std::nullopt);
}

TEST_CASE("check_reductive_subclass") {
    auto po = ClassSpec::builtin(BuiltinClass::PartialOrders);
    auto t = ClassSpec::builtin(BuiltinClass::Tournaments);

    CHECK(check_reductive_subclass(po, g_digraphs, 3, {{"lt", "R"}}).pass);
    CHECK(check_reductive_subclass(g_graphs, g_digraphs, 3, {{"E", "R"}}).pass);

    auto fail = check_reductive_subclass(g_graphs, t, 3, {{"E", "R"}});
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.counterexample);
    CHECK(fail.counterexample->size() == 2);
}
