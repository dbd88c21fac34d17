#pragma once

// Shared inputs used by several suites: the catalogue's counterexample
// classes and instances.

#include "relkit/class_spec.hpp"
#include "relkit/structure.hpp"

namespace fixtures {

using namespace relkit;

/// The union of R0-graphs and R1-graphs: symmetric irreflexive relations that
/// never coexist. Expressed by its minimal forbidden induced patterns: loops,
/// asymmetric pairs, and the minimal two-coloured configurations.
inline ClassSpec two_graph_union_class() {
    Signature sig(std::vector<SymbolDecl>{{"R0", 2}, {"R1", 2}});
    std::vector<Structure> forbidden;
    auto build = [&](int n, std::vector<Tuple> r0, std::vector<Tuple> r1) {
        return Structure(sig, n, {std::move(r0), std::move(r1)});
    };
    // Loops.
    forbidden.push_back(build(1, {{0, 0}}, {}));
    forbidden.push_back(build(1, {}, {{0, 0}}));
    forbidden.push_back(build(1, {{0, 0}}, {{0, 0}}));
    // Loop-free asymmetric pairs, one representative per isomorphism class.
    forbidden.push_back(build(2, {{0, 1}}, {}));                  // single R0 arc
    forbidden.push_back(build(2, {}, {{0, 1}}));                  // single R1 arc
    forbidden.push_back(build(2, {{0, 1}}, {{0, 1}}));            // parallel arcs
    forbidden.push_back(build(2, {{0, 1}}, {{1, 0}}));            // opposite arcs
    forbidden.push_back(build(2, {{0, 1}, {1, 0}}, {{0, 1}}));    // R0 edge + R1 arc
    forbidden.push_back(build(2, {{0, 1}}, {{0, 1}, {1, 0}}));    // R0 arc + R1 edge
    // Minimal symmetric configurations carrying both colours.
    forbidden.push_back(build(2, {{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}));  // doubled pair
    forbidden.push_back(build(3, {{0, 1}, {1, 0}}, {{1, 2}, {2, 1}}));  // sharing a vertex
    forbidden.push_back(
        build(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}, {{0, 2}, {2, 0}}));  // two R0, one R1
    forbidden.push_back(
        build(3, {{0, 2}, {2, 0}}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}));  // one R0, two R1
    forbidden.push_back(build(4, {{0, 1}, {1, 0}}, {{2, 3}, {3, 2}}));  // disjoint edges
    return ClassSpec::forbidden(sig, std::move(forbidden), "two_graph_union");
}

/// The planar amalgamation failure: an edgeless 4-set with the two stars
/// whose completion forces a K3,3.
struct PlanarApInstance {
    Structure a, b0, b1;
};

inline PlanarApInstance planar_k33_instance() {
    PlanarApInstance out;
    out.a = edgeless_graph(4);
    std::vector<std::pair<int, int>> e0;
    for (int i = 0; i < 3; ++i) {
        e0.emplace_back(i, 4);
        e0.emplace_back(i, 5);
    }
    out.b0 = make_graph(6, e0);
    std::vector<std::pair<int, int>> e1;
    for (int i = 0; i < 4; ++i) e1.emplace_back(i, 4);
    out.b1 = make_graph(5, e1);
    return out;
}

}  // namespace fixtures
