#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "relkit/structure.hpp"

namespace relkit {

/// A strong embedding: injective, preserves and reflects every relation.
struct Embedding {
    Structure source;
    Structure target;
    std::vector<int> map;

    int operator()(int v) const { return map[v]; }
};

/// Checks the Embedding invariants against the stored endpoints.
bool is_valid_embedding(const Embedding& e);
bool is_valid_embedding(const Structure& a, const Structure& b, const std::vector<int>& map);

Embedding identity_embedding(const Structure& s);
/// g after f; throws if endpoints do not line up.
Embedding compose(const Embedding& g, const Embedding& f);

/// Options for the embedding search.
struct EmbeddingSearchOptions {
    /// Prescribed images; -1 means free. Size must equal |a| when present.
    const std::vector<int>* fixed = nullptr;
    /// Allowed target elements (size |b|); unset means all allowed.
    const std::vector<char>* target_allowed = nullptr;
    /// Stop after this many embeddings.
    long long limit = -1;
};

/// All strong embeddings a -> b, as maps, in lexicographic order of the map
/// vector. Backtracking with per-vertex candidate filtering on relation
/// degree profiles.
std::vector<std::vector<int>> embedding_maps(const Structure& a, const Structure& b,
                                             const EmbeddingSearchOptions& opts = {});

/// Spec-level wrappers returning Embedding values.
std::vector<Embedding> enumerate_embeddings(const Structure& a, const Structure& b);
bool embeds(const Structure& a, const Structure& b);
std::optional<Embedding> first_embedding(const Structure& a, const Structure& b);

std::vector<Embedding> enumerate_automorphisms(const Structure& s);
long long aut_order(const Structure& s);

}  // namespace relkit
