#pragma once

#include <optional>
#include <string>

#include "relkit/budget.hpp"
#include "relkit/class_spec.hpp"
#include "relkit/partition.hpp"
#include "relkit/products.hpp"

namespace relkit {

/// Bounds for the component oracles of the witness builders.
struct WitnessOracleBounds {
    int jep_host = 6;        // joint-embedding search bound for the fibers
    int witness_max0 = 12;   // component witness search bound, left class
    int witness_max1 = 700;  // component witness search bound, right class
    SearchBudget budget;
};

struct WitnessBuild {
    enum class Status { Built, Inconclusive };
    Status status = Status::Inconclusive;
    std::string note;  // which oracle failed when inconclusive

    /// The constructed witness factors: witness = left_factor lex/full
    /// right_factor (uniform fibers for lex).
    Structure left_factor, right_factor;
    /// Materialized witness; omitted above the materialization cap.
    std::optional<Structure> witness;
    /// An induced substructure of the witness that itself passed
    /// find_bad_coloring = none; since a monochromatic copy inside an induced
    /// substructure is one inside the whole structure, this certifies the
    /// witness. Equals the witness when verification ran directly.
    std::optional<Structure> verified_substructure;
};

/// Indivisibility witness for a pattern in a lexicographic product: joins the
/// fibers, takes component witnesses and assembles them uniformly.
WitnessBuild lex_indivisibility_witness(const ClassSpec& k0, const ClassSpec& k1,
                                        const Structure& pattern, int colors,
                                        const WitnessOracleBounds& bounds = {});

/// Indivisibility witness for a pattern in a full product; the right witness
/// search runs over colors * |emb(left quotient, left witness)| colours.
WitnessBuild full_indivisibility_witness(const ClassSpec& k0, const ClassSpec& k1,
                                         const Structure& pattern, int colors,
                                         const WitnessOracleBounds& bounds = {});

}  // namespace relkit
