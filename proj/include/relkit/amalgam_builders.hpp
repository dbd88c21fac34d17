#pragma once

#include <optional>
#include <string>

#include "relkit/amalgam.hpp"
#include "relkit/budget.hpp"
#include "relkit/class_spec.hpp"
#include "relkit/products.hpp"
#include "relkit/psystem.hpp"

namespace relkit {

/// Bounds for the component searches a constructive builder delegates to.
struct OracleBounds {
    int host = 6;
    SearchBudget budget;
};

struct BuilderResult {
    enum class Status { Built, Inconclusive };
    Status status = Status::Inconclusive;
    std::optional<Amalgam> amalgam;
    /// For the full-product builder: whether the assembled amalgam also
    /// passed the strong (disjointness) check.
    bool strong_ok = false;
    std::string note;  // failing sub-instance when inconclusive
};

/// Amalgamation in a lexicographic product, assembled fiberwise over a base
/// amalgam: fresh fibers, copied fibers, jointly embedded fibers and
/// amalgamated fibers, depending on where the base point came from.
BuilderResult lex_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                  const AmalgInstance& inst, const OracleBounds& oracle0,
                                  const OracleBounds& oracle1);

/// Same construction with strong component amalgams; the result is verified
/// strong.
BuilderResult lex_strong_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                         const AmalgInstance& inst, const OracleBounds& oracle0,
                                         const OracleBounds& oracle1);

/// Amalgamation in a full product, assembled componentwise on the quotient
/// amalgams. With `strong` the component searches are strong and the result
/// reports whether disjointness survived the product assembly (it can fail).
BuilderResult full_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                   const AmalgInstance& inst, const OracleBounds& oracle0,
                                   const OracleBounds& oracle1, bool strong);

struct SuperNAmalgResult {
    enum class Status { Built, ComponentFailed, HypothesisFailed };
    Status status = Status::HypothesisFailed;
    bool ok = false;
    PSystem completed;
    bool exhaustive = false;  // when a component failure is certified
    std::string error;
};

/// Extends a base system in a free superposition by solving the two reduct
/// systems and aligning the solutions through the shared colimit. Requires
/// both component classes hereditary-verified.
SuperNAmalgResult super_n_amalgam_builder(const ClassSpec& super_spec, const PSystem& base_sys,
                                          int pad, const SearchBudget& budget = {});

}  // namespace relkit
