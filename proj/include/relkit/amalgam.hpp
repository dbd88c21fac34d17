#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relkit/budget.hpp"
#include "relkit/class_spec.hpp"
#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"
#include "relkit/psystem.hpp"
#include "relkit/structure.hpp"

namespace relkit {

/// One amalgamation problem: f0: a -> b0 and f1: a -> b1.
struct AmalgInstance {
    Structure a, b0, b1;
    std::vector<int> f0, f1;
};

/// Throws unless both maps are strong embeddings.
void validate_instance(const AmalgInstance& inst);

struct Amalgam {
    Structure c;
    std::vector<int> g0, g1;  // b0 -> c, b1 -> c
};

/// The amalgam verification predicate: c in k, g0/g1 strong embeddings,
/// g0 . f0 = g1 . f1, and (when strong) images meet exactly in the a-image.
bool verify_amalgam(const ClassSpec& k, const AmalgInstance& inst, const Amalgam& am, bool strong,
                    std::string* why = nullptr);

struct ApResult {
    enum class Status { Found, NoneUpToBound };
    Status status = Status::NoneUpToBound;
    std::optional<Amalgam> amalgam;
    /// The negative verdict is certified: the class is hereditary-verified at
    /// the relevant sizes and every candidate universe was fully searched.
    bool exhaustive = false;
};

/// Searches for an amalgam. Candidate universes are quotients of the pushout
/// (extra overlap between the b0/b1 images is allowed unless `strong`),
/// smallest universe first; padding with fresh points up to `host` only when
/// the class is not hereditary-verified.
ApResult check_ap_instance(const ClassSpec& k, const AmalgInstance& inst, int host, bool strong,
                           const SearchBudget& budget = {});

struct JepResult {
    enum class Status { Pass, NoHostUpToBound };
    Status status = Status::Pass;
    std::optional<std::pair<Structure, Structure>> failing_pair;
};

/// For every pair of members of size <= base, searches a joint host of size
/// <= host. A failing pair is reported as a bounded verdict, never as a
/// certified counterexample.
JepResult check_jep(const ClassSpec& k, int base, int host, const SearchBudget& budget = {});

struct ApSweepResult {
    bool pass = true;
    std::optional<AmalgInstance> failing;
    bool exhaustive = false;
};

/// Exhaustive (strong) amalgamation check over all instances with
/// |b0|, |b1| <= base, up to isomorphism.
ApSweepResult check_amalgamation_exhaustive(const ClassSpec& k, int base, int host, bool strong,
                                            const SearchBudget& budget = {});

struct ExtensionResult {
    bool found = false;
    PSystem completed;      // the input system plus the full index set
    bool exhaustive = false;  // negative is certified
};

/// Completes a base system over Pow(n) \ {n} to a disjoint Pow(n)-system if
/// possible: relation completions on the colimit universe, plus up to `pad`
/// fresh points when the class is not hereditary-verified.
ExtensionResult extend_base_system(const ClassSpec& k, const PSystem& sys, int pad,
                                   const SearchBudget& budget = {});

/// All base systems over Pow(n) \ {n} with |A_p| <= base, one per
/// simultaneous-isomorphism class, in a deterministic order.
std::vector<PSystem> enumerate_base_systems(const ClassSpec& k, int n, int base);

struct DisjointNResult {
    enum class Status { Pass, Counterexample, Inconclusive };
    Status status = Status::Pass;
    std::optional<PSystem> witness;  // unextendable base system
    int systems_checked = 0;
};

DisjointNResult check_disjoint_n(const ClassSpec& k, int n, int base, int pad = 0,
                                 const SearchBudget& budget = {});

}  // namespace relkit
