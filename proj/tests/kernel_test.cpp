#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "relkit/canonical.hpp"
#include "relkit/embedding.hpp"
#include "relkit/qf_class.hpp"
#include "relkit/structure.hpp"

using namespace relkit;

TEST_CASE("validate_structure") {
    CHECK(validate_structure(make_graph(3, {{0, 1}})).ok);

    Structure bad_range(graph_signature(), 3, {{{0, 3}}});
    auto r1 = validate_structure(bad_range);
    CHECK_FALSE(r1.ok);
    CHECK(r1.message == "entry out of range");

    Structure bad_arity(graph_signature(), 3, {{{0, 1, 2}}});
    auto r2 = validate_structure(bad_arity);
    CHECK_FALSE(r2.ok);
    CHECK(r2.message == "arity mismatch");
}

TEST_CASE("induced_substructure") {
    auto k3 = complete_graph(3);
    auto sub = induced_substructure(k3, {0, 1});
    CHECK(sub.structure == complete_graph(2));
    CHECK(sub.new_to_old == std::vector<int>{0, 1});

    auto full = induced_substructure(k3, {0, 1, 2});
    CHECK(full.structure == k3);

    auto ends = induced_substructure(path_graph(3), {0, 2});
    CHECK(ends.structure == edgeless_graph(2));

    CHECK_THROWS(induced_substructure(k3, {5}));
}

TEST_CASE("enumerate_embeddings matches brute force") {
    auto k2 = complete_graph(2);
    auto k3 = complete_graph(3);
    CHECK(embedding_maps(k2, k3).size() == oracle::all_embeddings(k2, k3).size());
    CHECK(embedding_maps(k2, k3).size() == 6);
    CHECK(embedding_maps(k2, edgeless_graph(2)).empty());

    auto point = make_graph(1, {});
    CHECK(embedding_maps(point, path_graph(4)).size() == 4);

    // Deterministic lexicographic order.
    auto maps = embedding_maps(k2, k3);
    CHECK(std::is_sorted(maps.begin(), maps.end()));

    // Random-ish sweep across small graphs, both directions.
    std::vector<Structure> pool = {path_graph(3), cycle_graph(4), complete_graph(3),
                                   edgeless_graph(3), make_graph(4, {{0, 1}, {2, 3}})};
    for (const auto& a : pool)
        for (const auto& b : pool)
            CHECK(embedding_maps(a, b) == oracle::all_embeddings(a, b));
}

TEST_CASE("embedding composition stays an embedding") {
    auto a = complete_graph(2);
    auto b = complete_graph(3);
    auto c = complete_graph(4);
    for (const auto& e1 : enumerate_embeddings(a, b))
        for (const auto& e2 : enumerate_embeddings(b, c)) {
            auto comp = compose(e2, e1);
            CHECK(is_valid_embedding(comp));
        }

    // Seeded random triples over a two-symbol signature.
    std::mt19937 rng(7);
    Signature sig(std::vector<SymbolDecl>{{"R", 2}, {"P", 1}});
    auto random_structure = [&](int n) {
        StructureBuilder builder(sig, n);
        for (int x = 0; x < n; ++x) {
            if (rng() % 8 == 0) builder.add("P", {x});
            for (int y = 0; y < n; ++y)
                if (rng() % 10 == 0) builder.add("R", {x, y});
        }
        return builder.build();
    };
    int composed = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto sa = random_structure(1 + static_cast<int>(rng() % 2));
        auto sb = random_structure(3 + static_cast<int>(rng() % 2));
        auto sc = random_structure(6);
        auto e1s = enumerate_embeddings(sa, sb);
        auto e2s = enumerate_embeddings(sb, sc);
        if (e1s.empty() || e2s.empty()) continue;
        auto comp = compose(e2s[0], e1s[0]);
        CHECK(is_valid_embedding(comp));
        ++composed;
    }
    CHECK(composed > 0);
}

TEST_CASE("automorphisms") {
    CHECK(aut_order(complete_graph(3)) == oracle::count_automorphisms(complete_graph(3)));
    CHECK(aut_order(complete_graph(3)) == 6);
    CHECK(aut_order(path_graph(3)) == 2);
    CHECK(aut_order(Structure{}) == 1);  // the empty structure: the empty map
    CHECK(aut_order(cycle_graph(5)) == 10);

    // Embeddings s -> s restricted to surjective maps = automorphisms.
    auto s = make_graph(4, {{0, 1}, {1, 2}});
    auto expected = embedding_maps(s, s);
    auto auts = enumerate_automorphisms(s);
    REQUIRE(auts.size() == expected.size());
    for (size_t i = 0; i < auts.size(); ++i) CHECK(auts[i].map == expected[i]);
}

TEST_CASE("canonical forms") {
    auto p1 = make_graph(3, {{0, 1}, {1, 2}});
    auto p2 = make_graph(3, {{1, 0}, {0, 2}});  // relabeled path
    CHECK(canonical_form(p1) == canonical_form(p2));
    CHECK(is_isomorphic(p1, p2));
    CHECK_FALSE(is_isomorphic(complete_graph(3), p1));

    // All 4 digraphs on 2 vertices; the two single-arc ones coincide.
    std::vector<Structure> digraphs = {
        make_digraph(2, {}), make_digraph(2, {{0, 1}}), make_digraph(2, {{1, 0}}),
        make_digraph(2, {{0, 1}, {1, 0}})};
    std::set<CanonicalForm> forms;
    for (const auto& d : digraphs) forms.insert(canonical_form(d));
    CHECK(forms.size() == 3);
    CHECK(is_isomorphic(digraphs[1], digraphs[2]));
}

TEST_CASE("canonical form is permutation invariant") {
    std::vector<Structure> pool = {path_graph(4), cycle_graph(5), complete_bipartite(2, 3),
                                   make_digraph(3, {{0, 1}, {1, 2}, {2, 0}}),
                                   make_equivalence({0, 0, 1, 1, 1})};
    for (const auto& s : pool) {
        auto base = canonical_form(s);
        std::vector<int> perm(s.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            CHECK(canonical_form(apply_permutation(s, perm)) == base);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("age_of") {
    auto forms = age_of(complete_graph(3), 2);
    CHECK(forms.size() == 3);  // empty, point, K2

    // Path on 3: exhaustive over all 8 subsets gives 5 distinct shapes.
    CHECK(age_of(path_graph(3), 3).size() == 5);
    CHECK(age_of(edgeless_graph(5), 3).size() == 4);

    // Age is monotone under induced substructures.
    auto s = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    auto sub = induced_substructure(s, {0, 1, 2, 3}).structure;
    auto big = age_of(s, 5);
    for (const auto& f : age_of(sub, 4)) CHECK(big.count(f));
}

TEST_CASE("qf_class") {
    // K3 over base {0}, pivot 1: both other vertices look alike over 0.
    CHECK(qf_class({complete_graph(3), {0}, 1}) == std::vector<int>{1, 2});

    // Equivalence structure with classes {0,1,2} and {3,4}: class of 1 over {0}.
    auto e = make_equivalence({0, 0, 0, 1, 1});
    CHECK(qf_class({e, {0}, 1}) == std::vector<int>{1, 2});

    // Empty base: same unary/loop pattern as the pivot.
    Signature usig({{"P", 1}});
    Structure u(usig, 3, {{{0}}});
    CHECK(qf_class({u, {}, 0}) == std::vector<int>{0});
    CHECK(qf_class({u, {}, 1}) == std::vector<int>{1, 2});

    // Base = everything else: only the pivot remains.
    CHECK(qf_class({complete_graph(3), {0, 2}, 1}) == std::vector<int>{1});

    CHECK_THROWS(qf_class({complete_graph(3), {1}, 1}));
}

TEST_CASE("quotient_by_congruence") {
    // Equality partition: isomorphic copy.
    auto p3 = path_graph(3);
    auto q = quotient_by_congruence(p3, {0, 1, 2}, {0});
    REQUIRE(q.congruence);
    CHECK(is_isomorphic(q.quotient, p3));

    // Quotient of an equivalence structure by its own classes: loops only.
    auto e = make_equivalence({7, 7, 9, 9});
    auto qe = quotient_by_congruence(e, {0, 0, 1, 1}, {0});
    REQUIRE(qe.congruence);
    CHECK(qe.quotient.size() == 2);
    CHECK(qe.quotient.tuples(0) == std::vector<Tuple>{{0, 0}, {1, 1}});

    // Dropping all symbols gives a bare 2-element structure.
    auto qs = quotient_by_congruence(e, {0, 0, 1, 1}, {});
    REQUIRE(qs.congruence);
    CHECK(qs.quotient.size() == 2);
    CHECK(qs.quotient.sig().symbol_count() == 0);

    // An edge crossing blocks inconsistently is not a congruence.
    auto bad = quotient_by_congruence(path_graph(3), {0, 0, 1}, {0});
    CHECK_FALSE(bad.congruence);
    CHECK(bad.offending_symbol == "E");
}
