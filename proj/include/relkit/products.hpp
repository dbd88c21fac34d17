#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relkit/class_spec.hpp"
#include "relkit/signature.hpp"
#include "relkit/structure.hpp"

namespace relkit {

/// Fibered disjoint union over a base structure: one fiber per base element,
/// a fresh equivalence symbol E marking the fibers.
struct LexAssembly {
    Structure base;                 // over L1
    std::vector<Structure> fibers;  // over L0, one per base element, same signature
    /// Fiber signature, needed when there are no fibers to read it from.
    std::optional<Signature> fiber_sig;
};

/// Cartesian product with fresh symbols E0/E1 marking coordinate equality.
struct FullAssembly {
    Structure left;   // over L0
    Structure right;  // over L1
};

/// Same universe carrying both structures; right is transported along the
/// aligner bijection (element i of the result plays right[aligner[i]]).
struct Superposition {
    Structure left;
    Structure right;
    std::vector<int> aligner;
};

struct ProductStructure {
    Structure structure;
    CombinedSignature combined;
    /// Result element -> (fiber element a, base element b) for lex,
    /// (left a, right b) for full.
    std::vector<std::pair<int, int>> coords;
    int pair_index(int a, int b) const;
};

ProductStructure lex_structure(const LexAssembly& asm_);
ProductStructure full_structure(const FullAssembly& asm_);
/// Uniform-fiber convenience: every fiber equals `fiber`.
ProductStructure lex_power(const Structure& fiber, const Structure& base);

struct SuperposedStructure {
    Structure structure;
    CombinedSignature combined;
};

SuperposedStructure superpose_structures(const Superposition& sup);

/// Reducts of a structure over a product/superposition signature back to the
/// operand signatures (left, right), with original symbol names restored.
std::pair<Structure, Structure> split_superposition(const Structure& s, const ClassSpec& super_spec);
Structure product_left_reduct(const Structure& s, const ClassSpec& spec);
Structure product_right_reduct(const Structure& s, const ClassSpec& spec);

struct LexDecomposition {
    bool accepted = false;
    std::string reason;              // set when rejected
    Structure base;                  // over k1's signature
    std::vector<Structure> fibers;   // over k0's signature, one per base element
    std::vector<int> element_class;  // element of s -> base element
    std::vector<int> element_index;  // element of s -> index within its fiber
};

/// Accepts iff E is an equivalence, L0 tuples stay within single E-classes,
/// L1 relations are E-congruences, the quotient is in k1 and every class is
/// in k0.
LexDecomposition decompose_lex(const Structure& s, const ClassSpec& k0, const ClassSpec& k1);

struct FullDecomposition {
    enum class Verdict { Accept, Reject, Inconclusive };
    Verdict verdict = Verdict::Reject;
    std::string reason;
    Structure q0, q1;            // quotients by E0 / E1 classes
    Structure host0, host1;      // members the quotients embed into
    std::vector<int> class0_of;  // element -> E0 class
    std::vector<int> class1_of;  // element -> E1 class
};

/// Bound used when deciding membership: hereditary-verified components are
/// decided directly on the quotients.
int default_full_host_bound(const Structure& s);

FullDecomposition decompose_full(const Structure& s, const ClassSpec& k0, const ClassSpec& k1,
                                 int bound);

struct SweepResult {
    bool pass = true;
    std::string counterexample;  // description of the first failure
};

/// Compares age(product) with the product of the ages, up to `size`.
enum class ProductMode { Lex, Full };
SweepResult age_product_check(const Structure& a, const Structure& b, ProductMode mode, int size);

/// Checks the finite automorphism-order identities
///   |Aut(a lex b)| = |Aut(a)|^|b| * |Aut(b)| and
///   |Aut(a full b)| = |Aut(a)| * |Aut(b)|.
/// Requires both operands non-empty.
SweepResult aut_order_product_check(const Structure& a, const Structure& b);

}  // namespace relkit
