#include "relkit/products.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relkit/canonical.hpp"
#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"

namespace relkit {

namespace {

void append_all_assignments(int arity, const std::vector<int>& sizes,
                            const std::function<void(const Tuple&)>& emit) {
    Tuple t(arity, 0);
    for (int j = 0; j < arity; ++j)
        if (sizes[j] == 0) return;
    while (true) {
        emit(t);
        int j = arity - 1;
        while (j >= 0 && ++t[j] == sizes[j]) t[j--] = 0;
        if (j < 0) break;
    }
}

}  // namespace

int ProductStructure::pair_index(int a, int b) const {
    for (int i = 0; i < static_cast<int>(coords.size()); ++i)
        if (coords[i].first == a && coords[i].second == b) return i;
    return -1;
}

ProductStructure lex_structure(const LexAssembly& asm_) {
    const auto& base = asm_.base;
    if (static_cast<int>(asm_.fibers.size()) != base.size())
        throw std::invalid_argument("lex_structure: one fiber per base element required");
    Signature fiber_sig = asm_.fiber_sig ? *asm_.fiber_sig
                          : asm_.fibers.empty() ? Signature{}
                                                : asm_.fibers[0].sig();
    for (const auto& f : asm_.fibers)
        if (f.sig() != fiber_sig)
            throw std::invalid_argument("lex_structure: fibers over different signatures");

    ProductStructure out;
    out.combined = combine_signatures(fiber_sig, base.sig(), {{"E", 2}});
    const int e_sym = out.combined.extra_index[0];

    std::vector<int> offset(base.size() + 1, 0);
    for (int b = 0; b < base.size(); ++b) offset[b + 1] = offset[b] + asm_.fibers[b].size();
    const int n = offset[base.size()];
    for (int b = 0; b < base.size(); ++b)
        for (int a = 0; a < asm_.fibers[b].size(); ++a) out.coords.emplace_back(a, b);

    std::vector<std::vector<Tuple>> rels(out.combined.sig.symbol_count());
    // L0 relations: within single fibers.
    for (int i = 0; i < fiber_sig.symbol_count(); ++i) {
        auto& rel = rels[out.combined.left_index[i]];
        for (int b = 0; b < base.size(); ++b)
            for (const auto& t : asm_.fibers[b].tuples(i)) {
                Tuple m(t.size());
                for (size_t j = 0; j < t.size(); ++j) m[j] = offset[b] + t[j];
                rel.push_back(std::move(m));
            }
    }
    // L1 relations: read off base coordinates.
    for (int i = 0; i < base.sig().symbol_count(); ++i) {
        auto& rel = rels[out.combined.right_index[i]];
        for (const auto& t : base.tuples(i)) {
            std::vector<int> sizes(t.size());
            for (size_t j = 0; j < t.size(); ++j) sizes[j] = asm_.fibers[t[j]].size();
            append_all_assignments(static_cast<int>(t.size()), sizes, [&](const Tuple& pick) {
                Tuple m(t.size());
                for (size_t j = 0; j < t.size(); ++j) m[j] = offset[t[j]] + pick[j];
                rel.push_back(m);
            });
        }
    }
    // E: same base coordinate.
    for (int b = 0; b < base.size(); ++b)
        for (int x = offset[b]; x < offset[b + 1]; ++x)
            for (int y = offset[b]; y < offset[b + 1]; ++y) rels[e_sym].push_back({x, y});

    out.structure = Structure(out.combined.sig, n, std::move(rels));
    return out;
}

ProductStructure lex_power(const Structure& fiber, const Structure& base) {
    LexAssembly asm_{base, std::vector<Structure>(base.size(), fiber)};
    return lex_structure(asm_);
}

ProductStructure full_structure(const FullAssembly& asm_) {
    const auto& A = asm_.left;
    const auto& B = asm_.right;
    ProductStructure out;
    out.combined = combine_signatures(A.sig(), B.sig(), {{"E0", 2}, {"E1", 2}});
    const int e0 = out.combined.extra_index[0], e1 = out.combined.extra_index[1];
    const int n = A.size() * B.size();
    auto id = [&](int a, int b) { return a * B.size() + b; };
    for (int a = 0; a < A.size(); ++a)
        for (int b = 0; b < B.size(); ++b) out.coords.emplace_back(a, b);

    std::vector<std::vector<Tuple>> rels(out.combined.sig.symbol_count());
    for (int i = 0; i < A.sig().symbol_count(); ++i) {
        auto& rel = rels[out.combined.left_index[i]];
        for (const auto& t : A.tuples(i)) {
            std::vector<int> sizes(t.size(), B.size());
            append_all_assignments(static_cast<int>(t.size()), sizes, [&](const Tuple& pick) {
                Tuple m(t.size());
                for (size_t j = 0; j < t.size(); ++j) m[j] = id(t[j], pick[j]);
                rel.push_back(m);
            });
        }
    }
    for (int i = 0; i < B.sig().symbol_count(); ++i) {
        auto& rel = rels[out.combined.right_index[i]];
        for (const auto& t : B.tuples(i)) {
            std::vector<int> sizes(t.size(), A.size());
            append_all_assignments(static_cast<int>(t.size()), sizes, [&](const Tuple& pick) {
                Tuple m(t.size());
                for (size_t j = 0; j < t.size(); ++j) m[j] = id(pick[j], t[j]);
                rel.push_back(m);
            });
        }
    }
    for (int a = 0; a < A.size(); ++a)
        for (int b = 0; b < B.size(); ++b)
            for (int b2 = 0; b2 < B.size(); ++b2) rels[e0].push_back({id(a, b), id(a, b2)});
    for (int b = 0; b < B.size(); ++b)
        for (int a = 0; a < A.size(); ++a)
            for (int a2 = 0; a2 < A.size(); ++a2) rels[e1].push_back({id(a, b), id(a2, b)});

    out.structure = Structure(out.combined.sig, n, std::move(rels));
    return out;
}

SuperposedStructure superpose_structures(const Superposition& sup) {
    if (sup.left.size() != sup.right.size())
        throw std::invalid_argument("superpose: size mismatch");
    const int n = sup.left.size();
    std::vector<char> hit(n, 0);
    if (static_cast<int>(sup.aligner.size()) != n)
        throw std::invalid_argument("superpose: aligner size mismatch");
    for (int v : sup.aligner) {
        if (v < 0 || v >= n || hit[v]) throw std::invalid_argument("superpose: aligner not bijective");
        hit[v] = 1;
    }
    std::vector<int> inverse(n);
    for (int i = 0; i < n; ++i) inverse[sup.aligner[i]] = i;

    SuperposedStructure out;
    out.combined = combine_signatures(sup.left.sig(), sup.right.sig(), {});
    std::vector<std::vector<Tuple>> rels(out.combined.sig.symbol_count());
    for (int i = 0; i < sup.left.sig().symbol_count(); ++i)
        rels[out.combined.left_index[i]] = sup.left.tuples(i);
    for (int i = 0; i < sup.right.sig().symbol_count(); ++i) {
        auto& rel = rels[out.combined.right_index[i]];
        for (const auto& t : sup.right.tuples(i)) {
            Tuple m(t.size());
            for (size_t j = 0; j < t.size(); ++j) m[j] = inverse[t[j]];
            rel.push_back(std::move(m));
        }
    }
    out.structure = Structure(out.combined.sig, n, std::move(rels));
    return out;
}

namespace {

Structure reduct_named(const Structure& s, const std::vector<int>& indices, const Signature& names) {
    std::vector<std::string> out_names;
    for (int i = 0; i < names.symbol_count(); ++i) out_names.push_back(names.symbol(i).name);
    return reduct(s, indices, &out_names);
}

}  // namespace

std::pair<Structure, Structure> split_superposition(const Structure& s, const ClassSpec& spec) {
    const auto& combined = spec.combined();
    if (s.sig() != combined.sig)
        throw std::invalid_argument("split_superposition: signature mismatch");
    return {reduct_named(s, combined.left_index, spec.left().sig()),
            reduct_named(s, combined.right_index, spec.right().sig())};
}

Structure product_left_reduct(const Structure& s, const ClassSpec& spec) {
    return reduct_named(s, spec.combined().left_index, spec.left().sig());
}

Structure product_right_reduct(const Structure& s, const ClassSpec& spec) {
    return reduct_named(s, spec.combined().right_index, spec.right().sig());
}

namespace {

// Partition of the universe by a binary relation assumed reflexive/symmetric/
// transitive; returns classes numbered by least member, or nullopt if the
// relation is not an equivalence.
std::optional<std::vector<int>> equivalence_classes(const Structure& s, int sym,
                                                    std::string* reason) {
    for (int v = 0; v < s.size(); ++v)
        if (!s.holds2(sym, v, v)) {
            if (reason) *reason = "not reflexive at " + std::to_string(v);
            return std::nullopt;
        }
    for (const auto& t : s.tuples(sym))
        if (!s.holds2(sym, t[1], t[0])) {
            if (reason) *reason = "not symmetric";
            return std::nullopt;
        }
    for (const auto& t : s.tuples(sym))
        for (const auto& u : s.tuples(sym))
            if (t[1] == u[0] && !s.holds2(sym, t[0], u[1])) {
                if (reason) *reason = "not transitive";
                return std::nullopt;
            }
    std::vector<int> cls(s.size(), -1);
    int next = 0;
    for (int v = 0; v < s.size(); ++v) {
        if (cls[v] >= 0) continue;
        cls[v] = next;
        for (int w = v + 1; w < s.size(); ++w)
            if (s.holds2(sym, v, w)) cls[w] = next;
        ++next;
    }
    return cls;
}

}  // namespace

LexDecomposition decompose_lex(const Structure& s, const ClassSpec& k0, const ClassSpec& k1) {
    auto combined = combine_signatures(k0.sig(), k1.sig(), {{"E", 2}});
    LexDecomposition out;
    if (s.sig() != combined.sig)
        throw std::invalid_argument("decompose_lex: structure not over the lex signature " +
                                    combined.sig.to_string());
    const int e_sym = combined.extra_index[0];
    std::string why;
    auto cls = equivalence_classes(s, e_sym, &why);
    if (!cls) {
        out.reason = "E not an equivalence relation: " + why;
        return out;
    }
    out.element_class = *cls;
    const int classes = s.size() == 0 ? 0 : *std::max_element(cls->begin(), cls->end()) + 1;

    // L0 tuples must stay within one class.
    for (size_t i = 0; i < combined.left_index.size(); ++i) {
        for (const auto& t : s.tuples(combined.left_index[i])) {
            for (size_t j = 1; j < t.size(); ++j)
                if ((*cls)[t[j]] != (*cls)[t[0]]) {
                    out.reason = "cross-class tuple in " +
                                 s.sig().symbol(combined.left_index[i]).name;
                    return out;
                }
        }
    }
    // L1 relations must be E-congruences; the quotient is the base.
    auto q = quotient_by_congruence(s, *cls, combined.right_index);
    if (!q.congruence) {
        out.reason = "relation " + q.offending_symbol + " is not an E-congruence";
        return out;
    }
    out.base = Structure(k1.sig(), classes, [&] {
        std::vector<std::vector<Tuple>> rels(k1.sig().symbol_count());
        for (int i = 0; i < k1.sig().symbol_count(); ++i) rels[i] = q.quotient.tuples(i);
        return rels;
    }());
    if (!contains(k1, out.base)) {
        out.reason = "E-quotient not in " + k1.label();
        return out;
    }

    out.element_index.assign(s.size(), -1);
    std::vector<std::vector<int>> members(classes);
    for (int v = 0; v < s.size(); ++v) {
        out.element_index[v] = static_cast<int>(members[out.element_class[v]].size());
        members[out.element_class[v]].push_back(v);
    }
    for (int c = 0; c < classes; ++c) {
        auto ind = induced_substructure(s, members[c]);
        Structure fiber = reduct_named(ind.structure, combined.left_index, k0.sig());
        if (!contains(k0, fiber)) {
            out.reason = "E-class " + std::to_string(c) + " not in " + k0.label();
            return out;
        }
        out.fibers.push_back(std::move(fiber));
    }
    out.accepted = true;
    return out;
}

int default_full_host_bound(const Structure& s) { return std::max(s.size(), 1); }

FullDecomposition decompose_full(const Structure& s, const ClassSpec& k0, const ClassSpec& k1,
                                 int bound) {
    auto combined = combine_signatures(k0.sig(), k1.sig(), {{"E0", 2}, {"E1", 2}});
    FullDecomposition out;
    if (s.sig() != combined.sig)
        throw std::invalid_argument("decompose_full: structure not over the full-product signature " +
                                    combined.sig.to_string());
    std::string why;
    auto cls0 = equivalence_classes(s, combined.extra_index[0], &why);
    if (!cls0) {
        out.reason = "E0 not an equivalence relation: " + why;
        return out;
    }
    auto cls1 = equivalence_classes(s, combined.extra_index[1], &why);
    if (!cls1) {
        out.reason = "E1 not an equivalence relation: " + why;
        return out;
    }
    out.class0_of = *cls0;
    out.class1_of = *cls1;
    std::map<std::pair<int, int>, int> cell_count;
    for (int v = 0; v < s.size(); ++v)
        if (++cell_count[{(*cls0)[v], (*cls1)[v]}] > 1) {
            out.reason = "class intersection > 1";
            return out;
        }

    auto q0 = quotient_by_congruence(s, *cls0, combined.left_index);
    if (!q0.congruence) {
        out.reason = "relation " + q0.offending_symbol + " is not an E0-congruence";
        return out;
    }
    auto q1 = quotient_by_congruence(s, *cls1, combined.right_index);
    if (!q1.congruence) {
        out.reason = "relation " + q1.offending_symbol + " is not an E1-congruence";
        return out;
    }
    const int n0 = s.size() == 0 ? 0 : *std::max_element(cls0->begin(), cls0->end()) + 1;
    const int n1 = s.size() == 0 ? 0 : *std::max_element(cls1->begin(), cls1->end()) + 1;
    out.q0 = Structure(k0.sig(), n0, [&] {
        std::vector<std::vector<Tuple>> rels(k0.sig().symbol_count());
        for (int i = 0; i < k0.sig().symbol_count(); ++i) rels[i] = q0.quotient.tuples(i);
        return rels;
    }());
    out.q1 = Structure(k1.sig(), n1, [&] {
        std::vector<std::vector<Tuple>> rels(k1.sig().symbol_count());
        for (int i = 0; i < k1.sig().symbol_count(); ++i) rels[i] = q1.quotient.tuples(i);
        return rels;
    }());

    // The quotients must embed into members of the component classes.
    auto host = [&](const ClassSpec& k, const Structure& q, Structure* host_out) -> FullDecomposition::Verdict {
        if (contains(k, q)) {
            *host_out = q;
            return FullDecomposition::Verdict::Accept;
        }
        if (hereditary_verified(k, std::min(bound, q.size() + 2)))
            return FullDecomposition::Verdict::Reject;
        for (int size = q.size() + 1; size <= bound; ++size)
            for (const auto& c : enumerate_members(k, size))
                if (embeds(q, c)) {
                    *host_out = c;
                    return FullDecomposition::Verdict::Accept;
                }
        return FullDecomposition::Verdict::Inconclusive;
    };
    auto v0 = host(k0, out.q0, &out.host0);
    if (v0 != FullDecomposition::Verdict::Accept) {
        out.verdict = v0;
        out.reason = "E0-quotient not hosted in " + k0.label();
        return out;
    }
    auto v1 = host(k1, out.q1, &out.host1);
    if (v1 != FullDecomposition::Verdict::Accept) {
        out.verdict = v1;
        out.reason = "E1-quotient not hosted in " + k1.label();
        return out;
    }
    out.verdict = FullDecomposition::Verdict::Accept;
    return out;
}

SweepResult age_product_check(const Structure& a, const Structure& b, ProductMode mode, int size) {
    std::set<CanonicalForm> lhs, rhs;
    if (mode == ProductMode::Lex) {
        lhs = age_of(lex_power(a, b).structure, size);
        auto base_reps = age_representatives(b, size);
        auto fiber_reps = age_representatives(a, size);
        std::vector<Structure> nonempty;
        for (const auto& f : fiber_reps)
            if (f.size() > 0) nonempty.push_back(f);
        for (const auto& base : base_reps) {
            std::vector<Structure> fibers;
            std::function<void(int, int)> assign = [&](int i, int budget) {
                if (i == base.size()) {
                    rhs.insert(canonical_form(lex_structure({base, fibers, a.sig()}).structure));
                    return;
                }
                for (const auto& f : nonempty) {
                    if (f.size() > budget) continue;
                    fibers.push_back(f);
                    assign(i + 1, budget - f.size());
                    fibers.pop_back();
                }
            };
            if (base.size() <= size) assign(0, size);
        }
    } else {
        lhs = age_of(full_structure({a, b}).structure, size);
        for (const auto& ar : age_representatives(a, size))
            for (const auto& br : age_representatives(b, size)) {
                auto forms = age_of(full_structure({ar, br}).structure, size);
                rhs.insert(forms.begin(), forms.end());
            }
    }
    if (lhs == rhs) return {};
    SweepResult out;
    out.pass = false;
    std::ostringstream msg;
    msg << "age mismatch: product side has " << lhs.size() << " forms, class side " << rhs.size();
    out.counterexample = msg.str();
    return out;
}

SweepResult aut_order_product_check(const Structure& a, const Structure& b) {
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("aut_order_product_check: operands must be non-empty");
    SweepResult out;
    long long aa = aut_order(a), ab = aut_order(b);
    long long lex_expect = ab;
    for (int i = 0; i < b.size(); ++i) lex_expect *= aa;
    long long lex_actual = aut_order(lex_power(a, b).structure);
    if (lex_actual != lex_expect) {
        out.pass = false;
        out.counterexample = "lex: |Aut| = " + std::to_string(lex_actual) + ", expected " +
                             std::to_string(lex_expect);
        return out;
    }
    long long full_actual = aut_order(full_structure({a, b}).structure);
    if (full_actual != aa * ab) {
        out.pass = false;
        out.counterexample = "full: |Aut| = " + std::to_string(full_actual) + ", expected " +
                             std::to_string(aa * ab);
        return out;
    }
    return out;
}

}  // namespace relkit
