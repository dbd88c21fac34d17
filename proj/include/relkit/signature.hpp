#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace relkit {

struct SymbolDecl {
    std::string name;
    int arity = 0;

    bool operator==(const SymbolDecl&) const = default;
    auto operator<=>(const SymbolDecl&) const = default;
};

/// A relational signature: an ordered list of relation symbols with arities.
/// Names are pairwise distinct, arities are >= 1.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<SymbolDecl> symbols);

    int symbol_count() const { return static_cast<int>(symbols_.size()); }
    const SymbolDecl& symbol(int i) const { return symbols_[i]; }
    const std::vector<SymbolDecl>& symbols() const { return symbols_; }
    int arity(int i) const { return symbols_[i].arity; }

    /// Index of a symbol by name, -1 if absent.
    int index_of(std::string_view name) const;
    bool has(std::string_view name) const { return index_of(name) >= 0; }

    bool operator==(const Signature&) const = default;
    auto operator<=>(const Signature&) const = default;

    std::string to_string() const;

private:
    std::vector<SymbolDecl> symbols_;
};

/// One renamed symbol in a combined signature: which operand it came from
/// (0 = left, 1 = right, 2 = product-added symbols) and the old/new names.
struct SymbolRename {
    int slot = 0;
    std::string from;
    std::string to;
};

/// Disjoint union of signatures with automatic collision renaming.
/// `extra` symbols are added first and keep their names when possible.
struct CombinedSignature {
    Signature sig;
    std::vector<int> extra_index;  // indices of the extra symbols, in order
    std::vector<int> left_index;   // indices of sig0's symbols, in sig0 order
    std::vector<int> right_index;  // indices of sig1's symbols, in sig1 order
    std::vector<SymbolRename> renames;
};

CombinedSignature combine_signatures(const Signature& sig0, const Signature& sig1,
                                     const std::vector<SymbolDecl>& extra);

}  // namespace relkit
