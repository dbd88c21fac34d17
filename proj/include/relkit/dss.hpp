#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relkit/budget.hpp"
#include "relkit/class_spec.hpp"
#include "relkit/embedding.hpp"
#include "relkit/structure.hpp"

namespace relkit {

/// One instance of the definable-self-similarity condition: f: a -> b, a
/// base set and pivot in c, and g embedding a into the pivot's
/// quantifier-free-type class over the base.
struct DssInstance {
    Structure a, b, c;
    std::vector<int> f;     // a -> b
    std::vector<int> base;  // subset of c, sorted
    int pivot = 0;          // element of c outside base
    std::vector<int> g;     // a -> c, image inside the pivot's class
};

void validate_dss_instance(const DssInstance& inst);
std::string describe(const DssInstance& inst);

struct DssWitness {
    Structure d;
    std::vector<int> j;  // c -> d
    std::vector<int> h;  // b -> d, image inside the class of j(pivot) over j(base)
};

bool verify_dss_witness(const ClassSpec& k, const DssInstance& inst, const DssWitness& w,
                        std::string* why = nullptr);

struct DssInstanceResult {
    enum class Status { Found, NoneUpToBound };
    Status status = Status::NoneUpToBound;
    std::optional<DssWitness> witness;
};

/// Searches hosts d in k with |d| <= host (default |b| + |c| when host < 0)
/// for j, h with h . f = j . g and h landing in the class of j(pivot).
DssInstanceResult check_dss_instance(const ClassSpec& k, const DssInstance& inst, int host = -1,
                                     const SearchBudget& budget = {});

/// All witnesses in deterministic order, up to `limit`.
std::vector<DssWitness> enumerate_dss_witnesses(const ClassSpec& k, const DssInstance& inst,
                                                int host, int limit,
                                                const SearchBudget& budget = {});

struct DssSweepResult {
    enum class Status { Pass, CounterInstance };
    Status status = Status::Pass;
    std::optional<DssInstance> counter;  // no witness within the host bound
    long long instances_checked = 0;
};

/// Exhaustive sweep over instances with |a|,|b|,|c| <= size. By default b
/// ranges over one-point extensions of the a-image; `one_point_only = false`
/// widens to the full quantifier range.
DssSweepResult check_dss(const ClassSpec& k, int size, int host, bool one_point_only = true,
                         const SearchBudget& budget = {});

struct DssBuild {
    enum class Status { Built, HypothesisFailed, SolverFailed };
    Status status = Status::SolverFailed;
    std::optional<DssWitness> witness;
    std::string note;
};

/// Constructs the witness from disjoint 3-amalgamation: the base system
/// (empty; a, singleton, base; b, c, c) is completed and d, j, h are read off
/// the completion. Requires exactly one singleton up to isomorphism.
DssBuild dss_from_3amalg(const ClassSpec& k, const DssInstance& inst,
                         const SearchBudget& budget = {});

/// Transfers definable self-similarity through a free superposition: solves
/// the two reduct instances, trims the solutions and aligns them into one
/// overlay witness. Component witnesses are streamed until a pair aligns.
DssBuild super_dss_transfer(const ClassSpec& super_spec, const DssInstance& inst, int host = -1,
                            int stream_limit = 64, const SearchBudget& budget = {});

}  // namespace relkit
