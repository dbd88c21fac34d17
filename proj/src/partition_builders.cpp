#include "relkit/partition_builders.hpp"

#include <algorithm>
#include <stdexcept>

#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"

namespace relkit {

namespace {

constexpr int kMaterializeCap = 400;       // elements
constexpr long long kEdgeCap = 2'000'000;  // hyperedges per verification attempt
constexpr long long kNodeCap = 60'000'000;

// Verifies that `witness` (given as factors) witnesses (pattern, colors).
// Verification runs on increasing induced subproducts: a monochromatic copy
// inside an induced substructure is a monochromatic copy in the whole
// structure, so the first subproduct with no bad coloring certifies the
// witness. Returns the certifying substructure.
std::optional<Structure> verify_by_subproducts(const Structure& left, const Structure& right,
                                               bool lex, const Structure& pattern, int colors,
                                               const SearchBudget& budget) {
    for (int cols = 1; cols <= right.size(); ++cols) {
        std::vector<int> prefix(cols);
        for (int i = 0; i < cols; ++i) prefix[i] = i;
        auto sub_right = induced_substructure(right, prefix).structure;
        Structure candidate = lex ? lex_power(left, sub_right).structure
                                  : full_structure({left, sub_right}).structure;
        long long edge_estimate = 1;
        for (int i = 0; i < pattern.size(); ++i) edge_estimate *= candidate.size();
        if (edge_estimate > kEdgeCap) break;
        auto search = find_bad_coloring(pattern, candidate, colors, budget, kNodeCap);
        if (search.status == ColoringSearch::Status::NoneExists) return candidate;
        // A bad coloring or an aborted search: more columns add constraints,
        // so keep growing.
    }
    return std::nullopt;
}

}  // namespace

WitnessBuild lex_indivisibility_witness(const ClassSpec& k0, const ClassSpec& k1,
                                        const Structure& pattern, int colors,
                                        const WitnessOracleBounds& bounds) {
    WitnessBuild out;
    auto d = decompose_lex(pattern, k0, k1);
    if (!d.accepted)
        throw std::invalid_argument("lex_indivisibility_witness: pattern does not decompose: " +
                                    d.reason);

    // Join the fibers into one structure of the left class.
    Structure joined(k0.sig(), 0);
    for (const auto& fiber : d.fibers) {
        bool found = false;
        for (int size = std::max(joined.size(), fiber.size()); size <= bounds.jep_host && !found;
             ++size) {
            if (size > enumeration_limit(k0)) break;
            for (const auto& host : enumerate_members(k0, size)) {
                if (bounds.budget.expired()) break;
                if (embeds(joined, host) && embeds(fiber, host)) {
                    joined = host;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            out.note = "joint embedding of the fibers failed in " + k0.label() + " within host " +
                       std::to_string(bounds.jep_host);
            return out;
        }
    }

    auto left = find_indivisibility_witness(k0, joined, colors, bounds.witness_max0, bounds.budget);
    if (left.status != WitnessSearch::Status::Found) {
        out.note = "no witness for the joined fiber in " + k0.label();
        return out;
    }
    auto right = find_indivisibility_witness(k1, d.base, colors, bounds.witness_max1, bounds.budget);
    if (right.status != WitnessSearch::Status::Found) {
        out.note = "no witness for the base in " + k1.label();
        return out;
    }
    out.left_factor = *left.witness;
    out.right_factor = *right.witness;
    if (out.left_factor.size() * out.right_factor.size() <= kMaterializeCap)
        out.witness = lex_power(out.left_factor, out.right_factor).structure;
    out.verified_substructure = verify_by_subproducts(out.left_factor, out.right_factor, true,
                                                      pattern, colors, bounds.budget);
    out.status = WitnessBuild::Status::Built;
    return out;
}

WitnessBuild full_indivisibility_witness(const ClassSpec& k0, const ClassSpec& k1,
                                         const Structure& pattern, int colors,
                                         const WitnessOracleBounds& bounds) {
    WitnessBuild out;
    auto d = decompose_full(pattern, k0, k1, default_full_host_bound(pattern));
    if (d.verdict != FullDecomposition::Verdict::Accept)
        throw std::invalid_argument("full_indivisibility_witness: pattern does not decompose: " +
                                    d.reason);
    if (!(d.host0 == d.q0) || !(d.host1 == d.q1)) {
        out.note = "minimal hosts unavailable";
        return out;
    }

    auto left = find_indivisibility_witness(k0, d.q0, colors, bounds.witness_max0, bounds.budget);
    if (left.status != WitnessSearch::Status::Found) {
        out.note = "no witness for the left quotient in " + k0.label();
        return out;
    }
    const long long m = static_cast<long long>(embedding_maps(d.q0, *left.witness).size());
    const long long blown_up = static_cast<long long>(colors) * m;
    if (blown_up > 100000) {
        out.note = "colour blow-up too large: " + std::to_string(blown_up);
        return out;
    }
    auto right = find_indivisibility_witness(k1, d.q1, static_cast<int>(blown_up),
                                             bounds.witness_max1, bounds.budget);
    if (right.status != WitnessSearch::Status::Found) {
        out.note = "no witness for the right quotient in " + k1.label() + " with " +
                   std::to_string(blown_up) + " colours";
        return out;
    }
    out.left_factor = *left.witness;
    out.right_factor = *right.witness;
    if (out.left_factor.size() * out.right_factor.size() <= kMaterializeCap)
        out.witness = full_structure({out.left_factor, out.right_factor}).structure;
    out.verified_substructure = verify_by_subproducts(out.left_factor, out.right_factor, false,
                                                      pattern, colors, bounds.budget);
    out.status = WitnessBuild::Status::Built;
    return out;
}

}  // namespace relkit
