#include "relkit/dss.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relkit/amalgam.hpp"
#include "relkit/canonical.hpp"
#include "relkit/enumerate.hpp"
#include "relkit/products.hpp"
#include "relkit/psystem.hpp"
#include "relkit/qf_class.hpp"

#include <map>
#include <mutex>

namespace relkit {

namespace {

// Class-level disjoint 3-amalgamation evidence (bounded at base 2), cached.
bool disjoint_3_verified(const ClassSpec& k, const SearchBudget& budget) {
    static std::mutex mutex;
    static std::map<std::string, bool> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(k.key());
        if (it != cache.end()) return it->second;
    }
    bool ok = check_disjoint_n(k, 3, 2, 0, budget).status == DisjointNResult::Status::Pass;
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(k.key(), ok);
    return ok;
}

}  // namespace

void validate_dss_instance(const DssInstance& inst) {
    if (!is_valid_embedding(inst.a, inst.b, inst.f))
        throw std::invalid_argument("dss instance: f is not a strong embedding");
    if (!is_valid_embedding(inst.a, inst.c, inst.g))
        throw std::invalid_argument("dss instance: g is not a strong embedding");
    auto mask = qf_class_mask({inst.c, inst.base, inst.pivot});
    for (int image : inst.g)
        if (!mask[image])
            throw std::invalid_argument("dss instance: g does not land in the pivot's class");
}

std::string describe(const DssInstance& inst) {
    std::ostringstream os;
    os << "a=" << inst.a.to_string() << " b=" << inst.b.to_string() << " c=" << inst.c.to_string()
       << " base={";
    for (size_t i = 0; i < inst.base.size(); ++i) os << (i ? "," : "") << inst.base[i];
    os << "} pivot=" << inst.pivot;
    return os.str();
}

bool verify_dss_witness(const ClassSpec& k, const DssInstance& inst, const DssWitness& w,
                        std::string* why) {
    auto explain = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!contains(k, w.d)) return explain("host not in class");
    if (!is_valid_embedding(inst.c, w.d, w.j)) return explain("j not a strong embedding");
    if (!is_valid_embedding(inst.b, w.d, w.h)) return explain("h not a strong embedding");
    std::vector<int> jbase;
    for (int e : inst.base) jbase.push_back(w.j[e]);
    auto mask = qf_class_mask({w.d, jbase, w.j[inst.pivot]});
    for (int image : w.h)
        if (!mask[image]) return explain("h does not land in the class of j(pivot)");
    for (int x = 0; x < inst.a.size(); ++x)
        if (w.h[inst.f[x]] != w.j[inst.g[x]]) return explain("square does not commute");
    return true;
}

namespace {

template <typename Sink>
void dss_witness_search(const ClassSpec& k, const DssInstance& inst, int host,
                        const SearchBudget& budget, Sink&& sink) {
    validate_dss_instance(inst);
    if (host < 0) host = inst.b.size() + inst.c.size();
    for (int size = std::max(inst.b.size(), inst.c.size()); size <= host; ++size) {
        if (size > enumeration_limit(k)) return;
        for (const auto& d : enumerate_members(k, size)) {
            if (budget.expired()) return;
            for (const auto& j : embedding_maps(inst.c, d)) {
                if (budget.expired()) return;
                std::vector<int> jbase;
                for (int e : inst.base) jbase.push_back(j[e]);
                auto mask = qf_class_mask({d, jbase, j[inst.pivot]});
                std::vector<int> fixed(inst.b.size(), -1);
                bool feasible = true;
                for (int x = 0; x < inst.a.size(); ++x) {
                    int target = j[inst.g[x]];
                    if (!mask[target]) {
                        feasible = false;  // forced image outside the class
                        break;
                    }
                    fixed[inst.f[x]] = target;
                }
                if (!feasible) continue;
                EmbeddingSearchOptions opts;
                std::vector<char> allowed(mask.begin(), mask.end());
                opts.fixed = &fixed;
                opts.target_allowed = &allowed;
                opts.limit = 1;
                auto hs = embedding_maps(inst.b, d, opts);
                if (hs.empty()) continue;
                DssWitness w{d, j, hs[0]};
                std::string why;
                if (!verify_dss_witness(k, inst, w, &why))
                    throw std::logic_error("dss search: witness fails verification: " + why);
                if (!sink(std::move(w))) return;
            }
        }
    }
}

}  // namespace

DssInstanceResult check_dss_instance(const ClassSpec& k, const DssInstance& inst, int host,
                                     const SearchBudget& budget) {
    DssInstanceResult out;
    dss_witness_search(k, inst, host, budget, [&](DssWitness w) {
        out.status = DssInstanceResult::Status::Found;
        out.witness = std::move(w);
        return false;
    });
    return out;
}

std::vector<DssWitness> enumerate_dss_witnesses(const ClassSpec& k, const DssInstance& inst,
                                                int host, int limit, const SearchBudget& budget) {
    std::vector<DssWitness> out;
    dss_witness_search(k, inst, host, budget, [&](DssWitness w) {
        out.push_back(std::move(w));
        return static_cast<int>(out.size()) < limit;
    });
    return out;
}

DssSweepResult check_dss(const ClassSpec& k, int size, int host, bool one_point_only,
                         const SearchBudget& budget) {
    DssSweepResult out;
    // (a, b, f) pairs: by default every one-point restriction of a member b.
    std::vector<std::tuple<Structure, Structure, std::vector<int>>> shapes;
    for (int bs = 1; bs <= size; ++bs) {
        for (const auto& b : enumerate_members(k, bs)) {
            if (one_point_only) {
                // Deduplicate (b, dropped point) pairs up to isomorphism: mark
                // the dropped point with a fresh unary symbol and canonicalize.
                std::vector<SymbolDecl> marked_decls = b.sig().symbols();
                marked_decls.push_back({"__dropped", 1});
                Signature marked_sig{marked_decls};
                std::set<CanonicalForm> seen;
                for (int drop = 0; drop < b.size(); ++drop) {
                    std::vector<std::vector<Tuple>> marked(marked_sig.symbol_count());
                    for (int i = 0; i < b.sig().symbol_count(); ++i) marked[i] = b.tuples(i);
                    marked.back().push_back({drop});
                    auto form = canonical_form(Structure(marked_sig, b.size(), std::move(marked)));
                    if (seen.count(form)) continue;
                    seen.insert(form);
                    std::vector<int> keep;
                    for (int v = 0; v < b.size(); ++v)
                        if (v != drop) keep.push_back(v);
                    auto ind = induced_substructure(b, keep);
                    shapes.emplace_back(ind.structure, b, ind.new_to_old);
                }
            } else {
                for (int as = 0; as <= bs; ++as)
                    for (const auto& a : enumerate_members(k, as))
                        for (const auto& f : embedding_maps(a, b)) shapes.emplace_back(a, b, f);
            }
        }
    }
    for (int cs = 1; cs <= size; ++cs) {
        for (const auto& c : enumerate_members(k, cs)) {
            // Base subsets and pivots.
            for (uint32_t mask = 0; mask < (1u << c.size()); ++mask) {
                std::vector<int> base;
                for (int v = 0; v < c.size(); ++v)
                    if (mask & (1u << v)) base.push_back(v);
                for (int pivot = 0; pivot < c.size(); ++pivot) {
                    if (mask & (1u << pivot)) continue;
                    auto class_mask = qf_class_mask({c, base, pivot});
                    std::vector<char> allowed(class_mask.begin(), class_mask.end());
                    for (const auto& [a, b, f] : shapes) {
                        EmbeddingSearchOptions opts;
                        opts.target_allowed = &allowed;
                        for (const auto& g : embedding_maps(a, c, opts)) {
                            ++out.instances_checked;
                            if (budget.expired()) {
                                out.status = DssSweepResult::Status::CounterInstance;
                                return out;
                            }
                            DssInstance inst{a, b, c, f, base, pivot, g};
                            auto r = check_dss_instance(k, inst, host, budget);
                            if (r.status != DssInstanceResult::Status::Found) {
                                out.status = DssSweepResult::Status::CounterInstance;
                                out.counter = std::move(inst);
                                return out;
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// One step of the 3-amalgamation construction, for |b| = |a| + 1.
DssBuild dss_step(const ClassSpec& k, const DssInstance& inst_in, const SearchBudget& budget) {
    DssBuild out;
    DssInstance inst = inst_in;
    std::sort(inst.base.begin(), inst.base.end());
    // The extra point of b.
    std::vector<char> in_image(inst.b.size(), 0);
    for (int x : inst.f) in_image[x] = 1;
    int extra = -1;
    for (int v = 0; v < inst.b.size(); ++v)
        if (!in_image[v]) extra = v;

    auto base_struct = induced_substructure(inst.c, inst.base);
    auto singleton_b = induced_substructure(inst.b, {extra});

    PSystemBuilder builder(3);
    builder.add(0b000, Structure(k.sig(), 0));
    builder.add(0b001, inst.a);
    builder.add(0b010, singleton_b.structure);
    builder.add(0b100, base_struct.structure);
    builder.add(0b011, inst.b);
    builder.add(0b101, inst.c);
    builder.add(0b110, inst.c);
    builder.map(0b001, 0b011, inst.f);
    builder.map(0b001, 0b101, inst.g);
    builder.map(0b010, 0b011, {extra});
    builder.map(0b010, 0b110, {inst.pivot});
    builder.map(0b100, 0b101, inst.base);
    builder.map(0b100, 0b110, inst.base);
    auto sys = builder.build();
    auto report = verify_p_system(sys);
    if (!report.ok) {
        out.status = DssBuild::Status::HypothesisFailed;
        out.note = "constructed base system invalid: " + report.axiom + " (" + report.detail + ")";
        return out;
    }
    auto ext = extend_base_system(k, sys, 0, budget);
    if (!ext.found) {
        out.status = DssBuild::Status::SolverFailed;
        out.note = "3-amalgamation solver found no completion";
        return out;
    }
    DssWitness w;
    w.d = ext.completed.at(0b111);
    w.j = ext.completed.map_between(0b101, 0b111);
    w.h = ext.completed.map_between(0b011, 0b111);
    std::string why;
    if (!verify_dss_witness(k, inst, w, &why)) {
        out.status = DssBuild::Status::SolverFailed;
        out.note = "completion does not verify: " + why;
        return out;
    }
    out.status = DssBuild::Status::Built;
    out.witness = std::move(w);
    return out;
}

}  // namespace

namespace {

// Peels one point of b off at a time; each one-point extension is handled by
// the 3-amalgamation system, and the witnesses compose along j.
DssBuild dss_from_3amalg_impl(const ClassSpec& k, const DssInstance& inst,
                              const SearchBudget& budget) {
    DssBuild out;
    if (inst.b.size() == inst.a.size()) {
        // f is an isomorphism: d = c, j = identity, h = g . f^{-1}.
        DssWitness w;
        w.d = inst.c;
        w.j.resize(inst.c.size());
        for (int v = 0; v < inst.c.size(); ++v) w.j[v] = v;
        w.h.assign(inst.b.size(), -1);
        for (int x = 0; x < inst.a.size(); ++x) w.h[inst.f[x]] = inst.g[x];
        std::string why;
        if (!verify_dss_witness(k, inst, w, &why)) {
            out.status = DssBuild::Status::SolverFailed;
            out.note = "degenerate step does not verify: " + why;
            return out;
        }
        out.status = DssBuild::Status::Built;
        out.witness = std::move(w);
        return out;
    }
    // Restrict b to the a-image plus one fresh point.
    std::vector<char> in_image(inst.b.size(), 0);
    for (int x : inst.f) in_image[x] = 1;
    int fresh = -1;
    for (int v = 0; v < inst.b.size() && fresh < 0; ++v)
        if (!in_image[v]) fresh = v;
    std::vector<int> keep = inst.f;
    keep.push_back(fresh);
    auto step_b = induced_substructure(inst.b, keep);
    DssInstance step = inst;
    step.b = step_b.structure;
    step.f.resize(inst.a.size());
    for (int x = 0; x < inst.a.size(); ++x) step.f[x] = step_b.old_to_new[inst.f[x]];

    auto built = dss_step(k, step, budget);
    if (built.status != DssBuild::Status::Built) return built;
    const auto& w1 = *built.witness;

    if (step.b.size() == inst.b.size()) {
        DssWitness w{w1.d, w1.j, std::vector<int>(inst.b.size())};
        for (int v = 0; v < inst.b.size(); ++v) w.h[v] = w1.h[step_b.old_to_new[v]];
        out.status = DssBuild::Status::Built;
        out.witness = std::move(w);
        return out;
    }
    // Continue with the extended image inside the original b, over the class
    // data transported into the step witness.
    DssInstance next;
    next.a = step.b;
    next.b = inst.b;
    next.f = step_b.new_to_old;
    next.c = w1.d;
    for (int e : inst.base) next.base.push_back(w1.j[e]);
    std::sort(next.base.begin(), next.base.end());
    next.pivot = w1.j[inst.pivot];
    next.g = w1.h;
    auto rest = dss_from_3amalg_impl(k, next, budget);
    if (rest.status != DssBuild::Status::Built) return rest;

    DssWitness w;
    w.d = rest.witness->d;
    w.j.resize(inst.c.size());
    for (int v = 0; v < inst.c.size(); ++v) w.j[v] = rest.witness->j[w1.j[v]];
    w.h = rest.witness->h;
    out.status = DssBuild::Status::Built;
    out.witness = std::move(w);
    return out;
}

}  // namespace

DssBuild dss_from_3amalg(const ClassSpec& k, const DssInstance& inst, const SearchBudget& budget) {
    validate_dss_instance(inst);
    DssBuild out;
    if (singleton_census(k) != 1) {
        out.status = DssBuild::Status::HypothesisFailed;
        out.note = "class does not have exactly one singleton up to isomorphism";
        return out;
    }
    if (!hereditary_verified(k, std::min(inst.b.size() + inst.c.size(), enumeration_limit(k)))) {
        out.status = DssBuild::Status::HypothesisFailed;
        out.note = "class is not hereditary-verified at the working size";
        return out;
    }
    if (!disjoint_3_verified(k, budget)) {
        out.status = DssBuild::Status::HypothesisFailed;
        out.note = "class fails the disjoint 3-amalgamation check at base 2";
        return out;
    }
    auto built = dss_from_3amalg_impl(k, inst, budget);
    if (built.status != DssBuild::Status::Built) return built;
    std::string why;
    if (!verify_dss_witness(k, inst, *built.witness, &why))
        throw std::logic_error("dss_from_3amalg: assembled witness fails verification: " + why);
    return built;
}

DssBuild super_dss_transfer(const ClassSpec& super_spec, const DssInstance& inst, int host,
                            int stream_limit, const SearchBudget& budget) {
    DssBuild out;
    if (super_spec.kind() != ClassSpec::Kind::Super)
        throw std::invalid_argument("super_dss_transfer: class is not a superposition");
    validate_dss_instance(inst);
    const auto& k0 = super_spec.left();
    const auto& k1 = super_spec.right();
    if (!hereditary_verified(k0, std::min(inst.b.size() + inst.c.size(), enumeration_limit(k0))) ||
        !hereditary_verified(k1, std::min(inst.b.size() + inst.c.size(), enumeration_limit(k1)))) {
        out.status = DssBuild::Status::HypothesisFailed;
        out.note = "component classes are not hereditary-verified";
        return out;
    }

    auto component_instance = [&](bool left) {
        DssInstance comp = inst;
        comp.a = left ? product_left_reduct(inst.a, super_spec)
                      : product_right_reduct(inst.a, super_spec);
        comp.b = left ? product_left_reduct(inst.b, super_spec)
                      : product_right_reduct(inst.b, super_spec);
        comp.c = left ? product_left_reduct(inst.c, super_spec)
                      : product_right_reduct(inst.c, super_spec);
        return comp;
    };
    auto inst0 = component_instance(true);
    auto inst1 = component_instance(false);
    auto w0s = enumerate_dss_witnesses(k0, inst0, host, stream_limit, budget);
    auto w1s = enumerate_dss_witnesses(k1, inst1, host, stream_limit, budget);
    if (w0s.empty() || w1s.empty()) {
        out.status = DssBuild::Status::SolverFailed;
        out.note = std::string("component ") + (w0s.empty() ? k0.label() : k1.label()) +
                   " has no witness within bounds";
        return out;
    }

    auto trim = [&](const DssInstance& comp, const DssWitness& w, Structure* trimmed,
                    std::vector<int>* old_to_new, std::vector<int>* j2, std::vector<int>* h2) {
        std::set<int> keep_set(w.h.begin(), w.h.end());
        keep_set.insert(w.j.begin(), w.j.end());
        std::vector<int> keep(keep_set.begin(), keep_set.end());
        auto ind = induced_substructure(w.d, keep);
        *trimmed = ind.structure;
        *old_to_new = ind.old_to_new;
        j2->resize(w.j.size());
        h2->resize(w.h.size());
        for (size_t v = 0; v < w.j.size(); ++v) (*j2)[v] = ind.old_to_new[w.j[v]];
        for (size_t v = 0; v < w.h.size(); ++v) (*h2)[v] = ind.old_to_new[w.h[v]];
        (void)comp;
    };

    for (size_t i0 = 0; i0 < w0s.size(); ++i0) {
        for (size_t i1 = 0; i1 < w1s.size(); ++i1) {
            if (budget.expired()) break;
            Structure t0, t1;
            std::vector<int> o0, o1, j0, h0, j1, h1;
            trim(inst0, w0s[i0], &t0, &o0, &j0, &h0);
            trim(inst1, w1s[i1], &t1, &o1, &j1, &h1);
            if (t0.size() != t1.size()) continue;
            // Alignment: h0(x) <-> h1(x) and j0(y) <-> j1(y) must assemble
            // into a bijection.
            std::vector<int> align(t0.size(), -1);
            std::vector<int> seen(t1.size(), -1);
            bool ok = true;
            auto bind = [&](int u, int v) {
                if (align[u] == -1 && seen[v] == -1) {
                    align[u] = v;
                    seen[v] = u;
                    return true;
                }
                return align[u] == v && seen[v] == u;
            };
            for (int x = 0; x < inst.b.size() && ok; ++x) ok = bind(h0[x], h1[x]);
            for (int y = 0; y < inst.c.size() && ok; ++y) ok = bind(j0[y], j1[y]);
            if (!ok) continue;
            for (int v = 0; v < t0.size(); ++v) ok = ok && align[v] >= 0;
            if (!ok) continue;  // trims cover, so full assignment is expected

            auto overlay = superpose_structures({t0, t1, align});
            if (overlay.structure.sig() != super_spec.sig()) continue;
            DssWitness w{overlay.structure, j0, h0};
            std::string why;
            if (!verify_dss_witness(super_spec, inst, w, &why)) continue;
            out.status = DssBuild::Status::Built;
            out.witness = std::move(w);
            return out;
        }
    }
    out.status = DssBuild::Status::SolverFailed;
    out.note = "component witnesses could not be aligned within the stream limit";
    return out;
}

}  // namespace relkit
