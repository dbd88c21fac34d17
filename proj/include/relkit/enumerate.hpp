#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relkit/class_spec.hpp"
#include "relkit/structure.hpp"

namespace relkit {

/// Isomorph-free list of the members of k with exactly `size` elements,
/// sorted by canonical code. Results are cached per (class, size).
/// Throws when the per-signature enumeration limit is exceeded.
const std::vector<Structure>& enumerate_members(const ClassSpec& k, int size);

/// Members of every size in [0, size].
std::vector<Structure> enumerate_members_up_to(const ClassSpec& k, int size);

/// Default enumeration size limit for a class (overridable per call site).
int enumeration_limit(const ClassSpec& k);

struct HereditaryReport {
    bool pass = true;
    std::optional<Structure> member;     // member with a non-member substructure
    std::optional<Structure> substructure;
};

/// Exhaustively checks that one-point-deleted substructures of members of
/// size <= `size` stay in the class. At small sizes the member list is
/// cross-validated against a filtered full enumeration.
HereditaryReport check_hereditary(const ClassSpec& k, int size);

/// True when check_hereditary(k, size) has passed (runs and caches it).
bool hereditary_verified(const ClassSpec& k, int size);

/// Number of isomorphism classes of 1-element members.
int singleton_census(const ClassSpec& k);

/// First non-empty member in enumeration order; used where a construction
/// needs "any element of the class".
std::optional<Structure> first_nonempty_member(const ClassSpec& k, int max_size = 4);

}  // namespace relkit
