#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkit/class_spec.hpp"
#include "relkit/formula.hpp"
#include "relkit/products.hpp"
#include "relkit/structure.hpp"

namespace relkit {

/// A width-n quantifier-free interpretation of the index signature in the
/// target signature.
struct Interpretation {
    Signature index_sig;
    Signature target_sig;
    int width = 1;
    std::map<std::string, QfFormula> formulas;  // one per index symbol

    const QfFormula& formula_for(const std::string& symbol) const;
};

/// One realized index structure: a target structure and the block map.
struct ConfigEntry {
    Structure index;
    Structure target;
    std::vector<std::vector<int>> map;  // index element -> width-tuple
};

struct ConfigWitness {
    Interpretation interp;
    std::vector<ConfigEntry> entries;

    bool injective() const;  // every entry map injective on tuples
};

struct ConfigViolation {
    int entry = 0;
    std::string symbol;
    Tuple args;
};

/// Exhaustive check of the realization condition
///   index |= R(t)  iff  target |= I(R)(map(t))
/// over all entries, symbols and argument tuples (repeats included).
std::optional<ConfigViolation> verify_configuration(const ConfigWitness& w);

enum class BuiltinConfiguration { DgToG, GToPo, GToT };

const char* builtin_configuration_name(BuiltinConfiguration b);
std::optional<BuiltinConfiguration> builtin_configuration_from_name(std::string_view name);

/// The doubled-target constructions: width-2 maps a -> ((a,0),(a,1)) into a
/// graph / partial order / tournament on index x 2. Entries cover all index
/// structures of size <= max_size up to isomorphism; targets are verified
/// members of the target class.
ConfigWitness builtin_configuration(BuiltinConfiguration which, int max_size);

/// Substitutes the inner interpretation into the outer one; equality atoms
/// between blocks expand to coordinate equalities, which is sound because
/// the inner witness is injective. Widths multiply. Outer targets must
/// appear, up to isomorphism, among the inner indices.
ConfigWitness compose_configurations(const ConfigWitness& outer, const ConfigWitness& inner);

/// Appends an injectivity coordinate: width + 1, formulas unchanged, maps
/// extended by an injective tag. Every target must have at least as many
/// elements as its index structure.
ConfigWitness make_injective(const ConfigWitness& w);

/// Entry descriptors for the product transfers.
struct LexTransferEntry {
    LexAssembly assembly;
};
struct FullTransferEntry {
    Structure left_index, right_index;
    std::vector<int> cells;  // subset of the grid; empty = whole product
};

/// Configuration for lexicographic products: blocks concatenate, fiber
/// formulas are guarded by base-block equality, E reads base-block equality.
/// Requires the right witness injective.
ConfigWitness lex_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                  const std::vector<LexTransferEntry>& entries);

/// Configuration for full products; both witnesses must be injective.
ConfigWitness full_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                   const std::vector<FullTransferEntry>& entries);

/// Configuration for free superpositions; no injectivity needed.
ConfigWitness super_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                    const std::vector<Structure>& entries,
                                    const ClassSpec& super_spec);

struct ReductiveCheck {
    bool pass = true;
    std::optional<Structure> counterexample;  // member of k0 with no reduct preimage
};

/// Is every member of k0 (up to `size`) the reduct of some member of k1?
/// `renames` maps k0 symbol names to k1 symbol names (identity by default).
ReductiveCheck check_reductive_subclass(const ClassSpec& k0, const ClassSpec& k1, int size,
                                        const std::map<std::string, std::string>& renames = {});

}  // namespace relkit
