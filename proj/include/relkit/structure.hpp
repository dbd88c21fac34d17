#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relkit/signature.hpp"

namespace relkit {

using Tuple = std::vector<int>;

/// A finite relational structure with universe 0..n-1. Immutable value type;
/// copies share the underlying representation.
class Structure {
public:
    Structure();  // empty structure over the empty signature
    Structure(Signature sig, int size);
    Structure(Signature sig, int size, std::vector<std::vector<Tuple>> relations);

    const Signature& sig() const { return impl_->sig; }
    int size() const { return impl_->size; }

    const std::vector<Tuple>& tuples(int sym) const { return impl_->relations[sym]; }
    bool holds(int sym, const Tuple& t) const;
    bool holds2(int sym, int a, int b) const;

    /// Total number of tuples over all symbols.
    int tuple_count() const;

    bool operator==(const Structure& other) const;
    bool operator!=(const Structure& other) const { return !(*this == other); }

    std::string to_string() const;

private:
    struct Impl {
        Signature sig;
        int size = 0;
        std::vector<std::vector<Tuple>> relations;  // per symbol, sorted + deduped
    };
    std::shared_ptr<const Impl> impl_;
};

/// Incremental builder for structures.
class StructureBuilder {
public:
    StructureBuilder(Signature sig, int size);
    StructureBuilder& add(int sym, Tuple t);
    StructureBuilder& add(std::string_view sym, Tuple t);
    /// Adds (a,b) for a binary symbol.
    StructureBuilder& add2(std::string_view sym, int a, int b);
    /// Adds both (a,b) and (b,a).
    StructureBuilder& edge(std::string_view sym, int a, int b);
    Structure build() const;

private:
    Signature sig_;
    int size_;
    std::vector<std::vector<Tuple>> relations_;
};

struct ViolationReport {
    bool ok = true;
    std::string message;
    std::string symbol;
    Tuple tuple;
};

/// Checks the representation invariants: arity match and entries in range.
/// Reports the first offending tuple.
ViolationReport validate_structure(const Structure& s);

/// The induced substructure on `subset` together with the order-preserving
/// renumbering old element -> new element.
struct InducedSubstructure {
    Structure structure;
    std::vector<int> old_to_new;  // -1 for dropped elements
    std::vector<int> new_to_old;
};

InducedSubstructure induced_substructure(const Structure& s, const std::vector<int>& subset);

/// Reduct to a subset of the signature. `symbols` are indices into s.sig(),
/// in the order they should appear; optional renaming to fresh names.
Structure reduct(const Structure& s, const std::vector<int>& symbols,
                 const std::vector<std::string>* new_names = nullptr);

/// Relabels a structure along a permutation of its universe (new = perm[old]).
Structure apply_permutation(const Structure& s, const std::vector<int>& perm);

struct QuotientResult {
    bool congruence = false;
    Structure quotient;               // over the listed symbols only
    std::vector<int> class_of;        // element -> class index
    std::string offending_symbol;     // set when !congruence
    Tuple witness_a, witness_b;       // classwise-equal tuples with distinct values
};

/// Quotients s by the given partition (element -> block id, blocks need not be
/// contiguous). Verifies that each listed symbol's relation depends only on
/// the blocks of its arguments. Classes are renumbered by smallest member.
QuotientResult quotient_by_congruence(const Structure& s, const std::vector<int>& partition,
                                      const std::vector<int>& symbols);

/// Convenience constructors used throughout the tests and the catalog.
Signature graph_signature(const std::string& symbol = "E");
Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::string& symbol = "E");
Structure make_digraph(int n, const std::vector<std::pair<int, int>>& arcs,
                       const std::string& symbol = "R");
Structure make_linear_order(int n, const std::string& symbol = "lt");
Structure make_set(int n);
/// Equivalence structure from a block assignment (element -> block id).
Structure make_equivalence(const std::vector<int>& block_of, const std::string& symbol = "E");
Structure complete_graph(int n);
Structure path_graph(int n);
Structure cycle_graph(int n);
Structure edgeless_graph(int n);
Structure complete_bipartite(int a, int b);

}  // namespace relkit
