#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relkit/budget.hpp"
#include "relkit/class_spec.hpp"
#include "relkit/structure.hpp"

namespace relkit {

struct Coloring {
    int colors = 2;
    std::vector<int> assignment;  // per element of the domain
};

struct ColoringSearch {
    enum class Status { BadColoringFound, NoneExists, Aborted };
    Status status = Status::NoneExists;
    std::optional<Coloring> coloring;
    long long hyperedges = 0;
};

/// Searches for a k-coloring of b with no monochromatic embedded copy of a.
/// NoneExists means b witnesses the pair (a, k). Embedding images are
/// deduplicated as vertex sets; the backtracking fixes the first vertex's
/// colour and introduces new colours in canonical order. Structures over an
/// empty signature short-circuit to the pigeonhole bound.
ColoringSearch find_bad_coloring(const Structure& a, const Structure& b, int k,
                                 const SearchBudget& budget = {}, long long node_limit = -1);

/// Replays a coloring against every embedding image; true iff none is
/// monochromatic. Used to re-verify search output.
bool coloring_is_bad(const Structure& a, const Structure& b, const Coloring& c);

/// True iff b witnesses (a, colors) in k: both are members and no bad
/// coloring exists. Throws on membership violations.
bool verify_indivisibility_witness(const ClassSpec& k, const Structure& a, int colors,
                                   const Structure& b);

struct WitnessSearch {
    enum class Status { Found, NoneUpToBound };
    Status status = Status::NoneUpToBound;
    std::optional<Structure> witness;
};

/// Scans members by size and returns the first verified witness for (a,
/// colors).
WitnessSearch find_indivisibility_witness(const ClassSpec& k, const Structure& a, int colors,
                                          int max_size, const SearchBudget& budget = {});

}  // namespace relkit
