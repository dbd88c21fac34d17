#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "relkit/structure.hpp"

namespace relkit {

/// A total order key with A ~ B iff canonical_form(A) == canonical_form(B),
/// for structures over the same signature.
struct CanonicalForm {
    std::vector<int64_t> code;

    bool operator==(const CanonicalForm&) const = default;
    auto operator<=>(const CanonicalForm&) const = default;
};

/// Soft working limit for canonical forms; larger inputs throw unless
/// `ignore_soft_limit` is set.
inline constexpr int kCanonicalSoftLimit = 10;

CanonicalForm canonical_form(const Structure& s, bool ignore_soft_limit = false);

/// The permutation realizing the canonical form (new = perm[old]).
std::vector<int> canonical_permutation(const Structure& s, bool ignore_soft_limit = false);

/// Canonically relabeled copy.
Structure canonical_copy(const Structure& s, bool ignore_soft_limit = false);

bool is_isomorphic(const Structure& a, const Structure& b);

/// Canonical forms of all induced substructures of size <= max_size
/// (the age of s, truncated).
std::set<CanonicalForm> age_of(const Structure& s, int max_size);

/// Representative structures, one per form, for the truncated age.
std::vector<Structure> age_representatives(const Structure& s, int max_size);

}  // namespace relkit
