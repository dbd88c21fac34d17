#pragma once

#include <vector>

#include "relkit/structure.hpp"

namespace relkit {

/// Selects the quantifier-free-type class of a pivot over a base set: the
/// elements a' such that (pivot -> a', identity on base) is an isomorphism of
/// the induced substructures on {pivot} u base and {a'} u base.
struct QfClassSelector {
    Structure ambient;
    std::vector<int> base;  // subset of the universe, pivot excluded
    int pivot = 0;
};

/// Sorted element list of the selected class; always contains the pivot,
/// never meets the base. Throws if pivot is in base.
std::vector<int> qf_class(const QfClassSelector& sel);

/// Membership indicator over the whole universe.
std::vector<char> qf_class_mask(const QfClassSelector& sel);

}  // namespace relkit
