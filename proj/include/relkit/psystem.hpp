#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkit/structure.hpp"

namespace relkit {

/// A disjoint P-amalgamation system: structures indexed by an
/// intersection-closed family of subsets of {0..n-1} (as bitmasks), with
/// coherent embeddings along inclusions.
struct PSystem {
    int n = 2;
    std::vector<uint32_t> sets;         // sorted ascending
    std::vector<Structure> structures;  // aligned with sets
    /// maps[{i,j}] = embedding map structures[i] -> structures[j],
    /// required for every pair sets[i] subset-of sets[j].
    std::map<std::pair<int, int>, std::vector<int>> maps;

    int index_of(uint32_t mask) const;
    const Structure& at(uint32_t mask) const;
    const std::vector<int>& map_between(uint32_t from, uint32_t to) const;
};

/// Convenience builder: add the indexed structures and the non-trivial maps;
/// identity self-maps and empty-source maps are filled in automatically.
class PSystemBuilder {
public:
    explicit PSystemBuilder(int n) : n_(n) {}
    PSystemBuilder& add(uint32_t mask, Structure s);
    PSystemBuilder& map(uint32_t from, uint32_t to, std::vector<int> m);
    PSystem build() const;

private:
    int n_;
    std::vector<std::pair<uint32_t, Structure>> structures_;
    std::vector<std::tuple<uint32_t, uint32_t, std::vector<int>>> maps_;
};

/// All proper subsets of {0..n-1}: the index family of a base system.
std::vector<uint32_t> proper_subsets(int n);

struct PSystemReport {
    bool ok = true;
    std::string axiom;   // "shape", "embedding", "identity", "commutativity", "disjointness"
    std::string detail;
};

PSystemReport verify_p_system(const PSystem& sys);

/// The glued universe of a system: elements are (minimal origin set, element)
/// pairs, ordered by (mask, element). Relations are copied from the pieces;
/// by strong preservation the copies can never conflict.
struct Colimit {
    Structure glued;                          // positive tuples only
    std::vector<std::vector<int>> inclusion;  // per set index: A_p -> glued
    std::vector<uint32_t> origin_mask;        // per glued element
    /// A tuple of the glued universe is relationally determined iff the union
    /// of its origin masks lies inside some index set.
    bool defined(const Tuple& t, const std::vector<uint32_t>& sets) const;
};

Colimit colimit_base(const PSystem& sys);

}  // namespace relkit
