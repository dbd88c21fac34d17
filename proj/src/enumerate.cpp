#include "relkit/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "relkit/canonical.hpp"
#include "relkit/embedding.hpp"
#include "relkit/products.hpp"

namespace relkit {

namespace {

struct ClassCache {
    std::map<int, std::vector<Structure>> members;  // by exact size
    int hereditary_checked = -1;
    bool hereditary_ok = false;
};

std::mutex cache_mutex;
std::map<std::string, ClassCache>& cache_map() {
    static std::map<std::string, ClassCache> m;
    return m;
}

using Slot = std::pair<int, Tuple>;
using Alternative = std::vector<Slot>;
using ChoiceGroup = std::vector<Alternative>;

// Relation slots that involve element v of an n-element universe.
std::vector<Slot> slots_touching(const Signature& sig, int n, int v) {
    std::vector<Slot> out;
    for (int sym = 0; sym < sig.symbol_count(); ++sym) {
        const int arity = sig.arity(sym);
        Tuple t(arity, 0);
        while (true) {
            if (std::find(t.begin(), t.end(), v) != t.end()) out.emplace_back(sym, t);
            int j = arity - 1;
            while (j >= 0 && ++t[j] == n) t[j--] = 0;
            if (j < 0) break;
        }
    }
    return out;
}

// How a new element may relate to the existing ones, encoded as independent
// choice groups. Builtins get folded alternatives (undirected pairs, one-of
// orientations, permutation-closed hyperedges); the generic fallback toggles
// raw slots.
std::vector<ChoiceGroup> extension_choices(const ClassSpec& k, int size) {
    const int v = size - 1;
    std::vector<ChoiceGroup> groups;
    auto raw = [&]() {
        auto slots = slots_touching(k.sig(), size, v);
        if (slots.size() > 25)
            throw std::invalid_argument("enumerate_members: extension slot count too large for " +
                                        k.label());
        for (auto& s : slots) groups.push_back({{}, {s}});
    };
    if (k.kind() != ClassSpec::Kind::Builtin) {
        raw();
        return groups;
    }
    switch (k.builtin_kind()) {
        case BuiltinClass::Sets:
            return groups;
        case BuiltinClass::Graphs:
        case BuiltinClass::Forests:
        case BuiltinClass::PlanarGraphs:
            for (int w = 0; w < v; ++w)
                groups.push_back({{}, {{0, {v, w}}, {0, {w, v}}}});
            return groups;
        case BuiltinClass::EquivalenceRelations:
            groups.push_back({{{0, {v, v}}}});  // reflexive loop, forced
            for (int w = 0; w < v; ++w)
                groups.push_back({{}, {{0, {v, w}}, {0, {w, v}}}});
            return groups;
        case BuiltinClass::LinearOrders:
        case BuiltinClass::Tournaments:
            for (int w = 0; w < v; ++w)
                groups.push_back({{{0, {w, v}}}, {{0, {v, w}}}});
            return groups;
        case BuiltinClass::PartialOrders:
            for (int w = 0; w < v; ++w)
                groups.push_back({{}, {{0, {w, v}}}, {{0, {v, w}}}});
            return groups;
        case BuiltinClass::Digraphs:
            for (int w = 0; w < v; ++w)
                groups.push_back({{}, {{0, {w, v}}}, {{0, {v, w}}}, {{0, {w, v}}, {0, {v, w}}}});
            return groups;
        case BuiltinClass::Hypergraphs: {
            const int arity = k.hyper_arity();
            std::vector<int> pick;
            std::vector<std::vector<int>> subsets;
            std::function<void(int)> rec = [&](int from) {
                if (static_cast<int>(pick.size()) == arity - 1) {
                    subsets.push_back(pick);
                    return;
                }
                for (int w = from; w < v; ++w) {
                    pick.push_back(w);
                    rec(w + 1);
                    pick.pop_back();
                }
            };
            rec(0);
            for (const auto& s : subsets) {
                Tuple edge = s;
                edge.push_back(v);
                std::sort(edge.begin(), edge.end());
                Alternative all;
                Tuple perm = edge;
                do all.push_back({0, perm});
                while (std::next_permutation(perm.begin(), perm.end()));
                groups.push_back({{}, all});
            }
            return groups;
        }
        case BuiltinClass::UnaryAll:
        case BuiltinClass::UnaryAtMostOne:
            groups.push_back({{}, {{0, {v}}}});
            return groups;
    }
    raw();
    return groups;
}

void insert_candidate(std::map<CanonicalForm, Structure>& found, const ClassSpec& k,
                      const Structure& cand) {
    if (!contains(k, cand)) return;
    auto form = canonical_form(cand);
    if (!found.count(form)) found.emplace(std::move(form), canonical_copy(cand));
}

std::vector<Structure> collect(std::map<CanonicalForm, Structure>&& found) {
    std::vector<Structure> out;
    out.reserve(found.size());
    for (auto& [form, s] : found) out.push_back(std::move(s));
    return out;
}

// For forbidden-induced classes over unary/binary signatures, the extension
// enumerates per-vertex choice groups and prunes each group against the
// small (size <= 2) forbidden patterns as soon as the pair is decided.
struct ExtensionPlan {
    std::vector<ChoiceGroup> groups;
    std::vector<int> decided_vertex;  // vertex fully related after the group, -1 if none
};

ExtensionPlan forbidden_extension_plan(const ClassSpec& k, int size) {
    const int v = size - 1;
    ExtensionPlan plan;
    // Loop choices for the new vertex.
    std::vector<Slot> loop_slots;
    for (int sym = 0; sym < k.sig().symbol_count(); ++sym) {
        if (k.sig().arity(sym) == 1) loop_slots.push_back({sym, {v}});
        if (k.sig().arity(sym) == 2) loop_slots.push_back({sym, {v, v}});
    }
    ChoiceGroup loops;
    for (uint32_t mask = 0; mask < (1u << loop_slots.size()); ++mask) {
        Alternative alt;
        for (size_t j = 0; j < loop_slots.size(); ++j)
            if (mask & (1u << j)) alt.push_back(loop_slots[j]);
        loops.push_back(std::move(alt));
    }
    plan.groups.push_back(std::move(loops));
    plan.decided_vertex.push_back(v);
    for (int w = 0; w < v; ++w) {
        std::vector<Slot> cross;
        for (int sym = 0; sym < k.sig().symbol_count(); ++sym) {
            if (k.sig().arity(sym) != 2) continue;
            cross.push_back({sym, {v, w}});
            cross.push_back({sym, {w, v}});
        }
        ChoiceGroup group;
        for (uint32_t mask = 0; mask < (1u << cross.size()); ++mask) {
            Alternative alt;
            for (size_t j = 0; j < cross.size(); ++j)
                if (mask & (1u << j)) alt.push_back(cross[j]);
            group.push_back(std::move(alt));
        }
        plan.groups.push_back(std::move(group));
        plan.decided_vertex.push_back(w);
    }
    return plan;
}

std::vector<Structure> extend_by_one(const ClassSpec& k, const std::vector<Structure>& smaller,
                                     int size) {
    std::map<CanonicalForm, Structure> found;
    const int v = size - 1;

    ExtensionPlan plan;
    bool incremental = false;
    if (k.kind() == ClassSpec::Kind::ForbiddenInduced) {
        int max_arity = 0;
        for (const auto& s : k.sig().symbols()) max_arity = std::max(max_arity, s.arity);
        if (max_arity <= 2) {
            plan = forbidden_extension_plan(k, size);
            incremental = true;
        }
    }
    if (plan.groups.empty() && !incremental) {
        plan.groups = extension_choices(k, size);
        plan.decided_vertex.assign(plan.groups.size(), -1);
    }
    double combinations = 1;
    for (const auto& g : plan.groups) combinations *= static_cast<double>(g.size());
    if (!incremental && combinations > 4e6)
        throw std::invalid_argument("enumerate_members: extension too large for " + k.label());

    // Small forbidden patterns drive the incremental pruning.
    std::vector<const Structure*> small_patterns;
    if (incremental)
        for (const auto& p : k.forbidden_patterns())
            if (p.size() <= 2) small_patterns.push_back(&p);

    for (const auto& rep : smaller) {
        std::vector<std::vector<Tuple>> base(k.sig().symbol_count());
        for (int i = 0; i < k.sig().symbol_count(); ++i) base[i] = rep.tuples(i);
        std::function<void(size_t, std::vector<std::vector<Tuple>>&)> rec =
            [&](size_t gi, std::vector<std::vector<Tuple>>& rels) {
                if (gi == plan.groups.size()) {
                    insert_candidate(found, k, Structure(k.sig(), size, rels));
                    return;
                }
                for (const auto& alt : plan.groups[gi]) {
                    auto next = rels;
                    for (const auto& [sym, t] : alt) next[sym].push_back(t);
                    if (incremental && plan.decided_vertex[gi] >= 0) {
                        Structure current(k.sig(), size, next);
                        std::vector<int> region = {v};
                        if (plan.decided_vertex[gi] != v) region.push_back(plan.decided_vertex[gi]);
                        auto ind = induced_substructure(current, region).structure;
                        bool pruned = false;
                        for (const auto* p : small_patterns)
                            if (p->size() <= ind.size() && embeds(*p, ind)) {
                                pruned = true;
                                break;
                            }
                        if (pruned) continue;
                    }
                    rec(gi + 1, next);
                }
            };
        rec(0, base);
    }
    return collect(std::move(found));
}

// Members of a lex product: assemblies of non-empty component members over a
// component base.
std::vector<Structure> lex_members(const ClassSpec& k, int size) {
    std::map<CanonicalForm, Structure> found;
    if (size == 0) {
        insert_candidate(found, k, Structure(k.sig(), 0));
        return collect(std::move(found));
    }
    std::vector<Structure> nonempty_fibers;
    for (int n = 1; n <= size; ++n)
        for (const auto& f : enumerate_members(k.left(), n)) nonempty_fibers.push_back(f);
    for (int m = 1; m <= size; ++m) {
        for (const auto& base : enumerate_members(k.right(), m)) {
            std::vector<Structure> fibers;
            std::function<void(int, int)> assign = [&](int i, int budget) {
                if (i == base.size()) {
                    if (budget == 0)
                        insert_candidate(found, k,
                                         lex_structure({base, fibers, k.left().sig()}).structure);
                    return;
                }
                int remaining = base.size() - i - 1;
                for (const auto& f : nonempty_fibers) {
                    if (f.size() > budget - remaining) continue;
                    fibers.push_back(f);
                    assign(i + 1, budget - f.size());
                    fibers.pop_back();
                }
            };
            assign(0, size);
        }
    }
    return collect(std::move(found));
}

// Members of a full product: size-element subsets of component products.
std::vector<Structure> full_members(const ClassSpec& k, int size) {
    std::map<CanonicalForm, Structure> found;
    if (size == 0) {
        insert_candidate(found, k, Structure(k.sig(), 0));
        return collect(std::move(found));
    }
    for (int n0 = 1; n0 <= size; ++n0)
        for (int n1 = 1; n1 <= size; ++n1) {
            for (const auto& a : enumerate_members(k.left(), n0))
                for (const auto& b : enumerate_members(k.right(), n1)) {
                    auto grid = full_structure({a, b});
                    const int cells = grid.structure.size();
                    // Only subsets meeting every row and column; the rest
                    // arise from smaller factors.
                    std::vector<int> pick;
                    std::vector<int> row(n0, 0), col(n1, 0);
                    int rows_left = n0, cols_left = n1;
                    std::function<void(int)> rec = [&](int from) {
                        const int remaining = size - static_cast<int>(pick.size());
                        if (rows_left > remaining || cols_left > remaining) return;
                        if (remaining == 0) {
                            insert_candidate(found, k,
                                             induced_substructure(grid.structure, pick).structure);
                            return;
                        }
                        for (int c = from; c < cells; ++c) {
                            auto [r, cl] = grid.coords[c];
                            pick.push_back(c);
                            if (++row[r] == 1) --rows_left;
                            if (++col[cl] == 1) --cols_left;
                            rec(c + 1);
                            if (--row[r] == 0) ++rows_left;
                            if (--col[cl] == 0) ++cols_left;
                            pick.pop_back();
                        }
                    };
                    rec(0);
                }
        }
    return collect(std::move(found));
}

// Members of a free superposition: overlay component members along every
// aligner.
std::vector<Structure> super_members(const ClassSpec& k, int size) {
    std::map<CanonicalForm, Structure> found;
    std::vector<int> aligner(size);
    for (int i = 0; i < size; ++i) aligner[i] = i;
    for (const auto& a : enumerate_members(k.left(), size))
        for (const auto& b : enumerate_members(k.right(), size)) {
            auto perm = aligner;
            do {
                insert_candidate(found, k, superpose_structures({a, b, perm}).structure);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    return collect(std::move(found));
}

// Filtered full enumeration at an exact size; only viable for small slot
// counts, used to cross-validate the structured paths.
std::optional<std::vector<Structure>> full_enumeration(const ClassSpec& k, int size) {
    std::vector<Slot> slots;
    for (int sym = 0; sym < k.sig().symbol_count(); ++sym) {
        const int arity = k.sig().arity(sym);
        if (size == 0) continue;
        Tuple t(arity, 0);
        while (true) {
            slots.emplace_back(sym, t);
            int j = arity - 1;
            while (j >= 0 && ++t[j] == size) t[j--] = 0;
            if (j < 0) break;
        }
    }
    if (slots.size() > 18) return std::nullopt;
    std::map<CanonicalForm, Structure> found;
    for (uint64_t mask = 0; mask < (uint64_t{1} << slots.size()); ++mask) {
        std::vector<std::vector<Tuple>> rels(k.sig().symbol_count());
        for (size_t j = 0; j < slots.size(); ++j)
            if (mask & (uint64_t{1} << j)) rels[slots[j].first].push_back(slots[j].second);
        insert_candidate(found, k, Structure(k.sig(), size, rels));
    }
    return collect(std::move(found));
}

std::vector<Structure> compute_members(const ClassSpec& k, int size) {
    switch (k.kind()) {
        case ClassSpec::Kind::Lex: return lex_members(k, size);
        case ClassSpec::Kind::Full: return full_members(k, size);
        case ClassSpec::Kind::Super: return super_members(k, size);
        default: break;
    }
    if (size == 0) {
        std::vector<Structure> base;
        Structure empty(k.sig(), 0);
        if (contains(k, empty)) base.push_back(std::move(empty));
        return base;
    }
    return extend_by_one(k, enumerate_members(k, size - 1), size);
}

}  // namespace

int enumeration_limit(const ClassSpec& k) {
    if (k.kind() == ClassSpec::Kind::Builtin) {
        switch (k.builtin_kind()) {
            case BuiltinClass::Sets: return 600;
            case BuiltinClass::Graphs: return 7;
            case BuiltinClass::Hypergraphs: return 5;
            case BuiltinClass::LinearOrders: return 12;
            case BuiltinClass::EquivalenceRelations: return 10;
            case BuiltinClass::PartialOrders: return 6;
            case BuiltinClass::Tournaments: return 6;
            case BuiltinClass::Digraphs: return 5;
            case BuiltinClass::Forests: return 8;
            case BuiltinClass::PlanarGraphs: return 7;
            case BuiltinClass::UnaryAll: return 10;
            case BuiltinClass::UnaryAtMostOne: return 10;
        }
    }
    if (k.kind() == ClassSpec::Kind::ForbiddenInduced) {
        int binary = 0, higher = 0;
        for (const auto& s : k.sig().symbols()) (s.arity <= 2 ? binary : higher)++;
        if (higher > 0) return 4;
        return binary <= 1 ? 6 : 6;
    }
    if (k.kind() == ClassSpec::Kind::Super)
        return std::min({5, enumeration_limit(k.left()), enumeration_limit(k.right())});
    return std::min({8, enumeration_limit(k.left()), enumeration_limit(k.right())});
}

const std::vector<Structure>& enumerate_members(const ClassSpec& k, int size) {
    if (size < 0) throw std::invalid_argument("enumerate_members: negative size");
    if (size > enumeration_limit(k))
        throw std::invalid_argument("enumerate_members: size " + std::to_string(size) +
                                    " beyond limit for " + k.label());
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto& cache = cache_map()[k.key()];
        auto it = cache.members.find(size);
        if (it != cache.members.end()) return it->second;
    }
    auto list = compute_members(k, size);  // may recurse; computed unlocked
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& cache = cache_map()[k.key()];
    auto it = cache.members.find(size);
    if (it != cache.members.end()) return it->second;  // idempotent insert
    return cache.members.emplace(size, std::move(list)).first->second;
}

std::vector<Structure> enumerate_members_up_to(const ClassSpec& k, int size) {
    std::vector<Structure> out;
    for (int n = 0; n <= size; ++n) {
        const auto& list = enumerate_members(k, n);
        out.insert(out.end(), list.begin(), list.end());
    }
    return out;
}

HereditaryReport check_hereditary(const ClassSpec& k, int size) {
    HereditaryReport report;
    for (int n = 1; n <= size; ++n) {
        const auto& members = enumerate_members(k, n);
        // Cross-validate the structured enumeration against a filtered full
        // enumeration where the latter is feasible.
        if (n <= 3) {
            if (auto full = full_enumeration(k, n)) {
                if (full->size() != members.size())
                    throw std::logic_error("enumerate_members incomplete for " + k.label() +
                                           " at size " + std::to_string(n));
            }
        }
        for (const auto& m : members) {
            for (int drop = 0; drop < n; ++drop) {
                std::vector<int> keep;
                for (int v = 0; v < n; ++v)
                    if (v != drop) keep.push_back(v);
                auto sub = induced_substructure(m, keep).structure;
                if (!contains(k, sub)) {
                    report.pass = false;
                    report.member = m;
                    report.substructure = sub;
                    return report;
                }
            }
        }
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& cache = cache_map()[k.key()];
    if (size > cache.hereditary_checked) {
        cache.hereditary_checked = size;
        cache.hereditary_ok = true;
    }
    return report;
}

bool hereditary_verified(const ClassSpec& k, int size) {
    int checkable = std::min(size, enumeration_limit(k));
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        const auto& cache = cache_map()[k.key()];
        if (cache.hereditary_checked >= checkable) return cache.hereditary_ok;
    }
    return check_hereditary(k, checkable).pass;
}

int singleton_census(const ClassSpec& k) {
    return static_cast<int>(enumerate_members(k, 1).size());
}

std::optional<Structure> first_nonempty_member(const ClassSpec& k, int max_size) {
    for (int n = 1; n <= max_size; ++n) {
        const auto& list = enumerate_members(k, n);
        if (!list.empty()) return list.front();
    }
    return std::nullopt;
}

}  // namespace relkit
