#include "relkit/amalgam_builders.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "relkit/enumerate.hpp"

namespace relkit {

namespace {

// Base-level and fiber-level factors of an embedding between decomposed lex
// products (the product embedding lemma read off concretely).
struct LexFactors {
    std::vector<int> base_map;                // A-base -> B-base
    std::vector<std::vector<int>> fiber_map;  // per A-base point
};

LexFactors factor_lex_embedding(const LexDecomposition& da, const LexDecomposition& db,
                                const std::vector<int>& f) {
    LexFactors out;
    out.base_map.assign(da.base.size(), -1);
    out.fiber_map.resize(da.base.size());
    for (size_t i = 0; i < out.fiber_map.size(); ++i)
        out.fiber_map[i].assign(da.fibers[i].size(), -1);
    for (size_t x = 0; x < f.size(); ++x) {
        int cls = da.element_class[x];
        int image_cls = db.element_class[f[x]];
        if (out.base_map[cls] >= 0 && out.base_map[cls] != image_cls)
            throw std::logic_error("factor_lex_embedding: embedding does not respect fibers");
        out.base_map[cls] = image_cls;
        out.fiber_map[cls][da.element_index[x]] = db.element_index[f[x]];
    }
    return out;
}

// Position of the pair (fiber element, base point) in the assembled product.
int assembled_index(const std::vector<int>& offsets, int base_point, int fiber_elem) {
    return offsets[base_point] + fiber_elem;
}

BuilderResult lex_builder_impl(const ClassSpec& k0, const ClassSpec& k1, const AmalgInstance& inst,
                               const OracleBounds& oracle0, const OracleBounds& oracle1,
                               bool strong) {
    validate_instance(inst);
    BuilderResult result;
    auto da = decompose_lex(inst.a, k0, k1);
    auto db0 = decompose_lex(inst.b0, k0, k1);
    auto db1 = decompose_lex(inst.b1, k0, k1);
    if (!da.accepted || !db0.accepted || !db1.accepted)
        throw std::invalid_argument("lex_amalgam_builder: instance does not decompose");

    auto fac0 = factor_lex_embedding(da, db0, inst.f0);
    auto fac1 = factor_lex_embedding(da, db1, inst.f1);

    // Base amalgam in k1.
    AmalgInstance base_inst{da.base, db0.base, db1.base, fac0.base_map, fac1.base_map};
    auto base_am = check_ap_instance(k1, base_inst, oracle1.host, strong, oracle1.budget);
    if (base_am.status != ApResult::Status::Found) {
        result.note = "base amalgamation in " + k1.label() + " failed within host " +
                      std::to_string(oracle1.host);
        return result;
    }
    const auto& g1_0 = base_am.amalgam->g0;
    const auto& g1_1 = base_am.amalgam->g1;
    const Structure& base_c = base_am.amalgam->c;

    // Preimages of each base point of the amalgam.
    std::vector<int> pre0(base_c.size(), -1), pre1(base_c.size(), -1), from_a(base_c.size(), -1);
    for (size_t b = 0; b < g1_0.size(); ++b) pre0[g1_0[b]] = static_cast<int>(b);
    for (size_t b = 0; b < g1_1.size(); ++b) pre1[g1_1[b]] = static_cast<int>(b);
    for (int ai = 0; ai < da.base.size(); ++ai) from_a[g1_0[fac0.base_map[ai]]] = ai;

    std::vector<Structure> fibers;
    std::map<std::pair<int, int>, std::vector<int>> fiber_emb;  // (side, base of b_t) -> map
    for (int c = 0; c < base_c.size(); ++c) {
        if (from_a[c] >= 0) {
            // Over the a-image: amalgamate the fibers over the a-fiber.
            int ai = from_a[c];
            AmalgInstance fiber_inst{da.fibers[ai], db0.fibers[fac0.base_map[ai]],
                                     db1.fibers[fac1.base_map[ai]], fac0.fiber_map[ai],
                                     fac1.fiber_map[ai]};
            auto am = check_ap_instance(k0, fiber_inst, oracle0.host, strong, oracle0.budget);
            if (am.status != ApResult::Status::Found) {
                result.note = "fiber amalgamation in " + k0.label() + " failed over a-base point " +
                              std::to_string(ai);
                return result;
            }
            fiber_emb[{0, fac0.base_map[ai]}] = am.amalgam->g0;
            fiber_emb[{1, fac1.base_map[ai]}] = am.amalgam->g1;
            fibers.push_back(am.amalgam->c);
        } else if (pre0[c] >= 0 && pre1[c] >= 0) {
            // Shared base point outside the a-image: join the two fibers.
            AmalgInstance joint{Structure(k0.sig(), 0), db0.fibers[pre0[c]], db1.fibers[pre1[c]],
                                {}, {}};
            auto am = check_ap_instance(k0, joint, oracle0.host, false, oracle0.budget);
            if (am.status != ApResult::Status::Found) {
                result.note = "joint fiber embedding in " + k0.label() + " failed at base point " +
                              std::to_string(c);
                return result;
            }
            fiber_emb[{0, pre0[c]}] = am.amalgam->g0;
            fiber_emb[{1, pre1[c]}] = am.amalgam->g1;
            fibers.push_back(am.amalgam->c);
        } else if (pre0[c] >= 0 || pre1[c] >= 0) {
            // One side only: copy its fiber.
            int side = pre0[c] >= 0 ? 0 : 1;
            int b = side == 0 ? pre0[c] : pre1[c];
            const auto& fiber = side == 0 ? db0.fibers[b] : db1.fibers[b];
            std::vector<int> id(fiber.size());
            for (size_t v = 0; v < id.size(); ++v) id[v] = static_cast<int>(v);
            fiber_emb[{side, b}] = std::move(id);
            fibers.push_back(fiber);
        } else {
            // Fresh base point: any fiber from the class.
            auto fresh = first_nonempty_member(k0);
            fibers.push_back(fresh ? *fresh : Structure(k0.sig(), 0));
        }
    }

    auto product = lex_structure({base_c, fibers, k0.sig()});
    std::vector<int> offsets(base_c.size() + 1, 0);
    for (int b = 0; b < base_c.size(); ++b) offsets[b + 1] = offsets[b] + fibers[b].size();

    Amalgam am;
    am.c = product.structure;
    am.g0.resize(inst.b0.size());
    am.g1.resize(inst.b1.size());
    for (int x = 0; x < inst.b0.size(); ++x) {
        int b = db0.element_class[x];
        am.g0[x] = assembled_index(offsets, g1_0[b], fiber_emb.at({0, b})[db0.element_index[x]]);
    }
    for (int x = 0; x < inst.b1.size(); ++x) {
        int b = db1.element_class[x];
        am.g1[x] = assembled_index(offsets, g1_1[b], fiber_emb.at({1, b})[db1.element_index[x]]);
    }

    auto spec = ClassSpec::lex(k0, k1);
    std::string why;
    if (!verify_amalgam(spec, inst, am, strong, &why))
        throw std::logic_error("lex_amalgam_builder: assembled amalgam fails verification: " + why);
    result.status = BuilderResult::Status::Built;
    result.strong_ok = strong;
    result.amalgam = std::move(am);
    return result;
}

}  // namespace

BuilderResult lex_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                  const AmalgInstance& inst, const OracleBounds& oracle0,
                                  const OracleBounds& oracle1) {
    return lex_builder_impl(k0, k1, inst, oracle0, oracle1, false);
}

BuilderResult lex_strong_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                         const AmalgInstance& inst, const OracleBounds& oracle0,
                                         const OracleBounds& oracle1) {
    return lex_builder_impl(k0, k1, inst, oracle0, oracle1, true);
}

BuilderResult full_amalgam_builder(const ClassSpec& k0, const ClassSpec& k1,
                                   const AmalgInstance& inst, const OracleBounds& oracle0,
                                   const OracleBounds& oracle1, bool strong) {
    validate_instance(inst);
    BuilderResult result;
    auto da = decompose_full(inst.a, k0, k1, default_full_host_bound(inst.a));
    auto db0 = decompose_full(inst.b0, k0, k1, default_full_host_bound(inst.b0));
    auto db1 = decompose_full(inst.b1, k0, k1, default_full_host_bound(inst.b1));
    if (da.verdict != FullDecomposition::Verdict::Accept ||
        db0.verdict != FullDecomposition::Verdict::Accept ||
        db1.verdict != FullDecomposition::Verdict::Accept)
        throw std::invalid_argument("full_amalgam_builder: instance does not decompose");
    if (!(da.host0 == da.q0) || !(da.host1 == da.q1) || !(db0.host0 == db0.q0) ||
        !(db0.host1 == db0.q1) || !(db1.host0 == db1.q0) || !(db1.host1 == db1.q1)) {
        result.note = "minimal hosts unavailable (a quotient is not itself a member)";
        return result;
    }

    // Coordinate factors of the embeddings.
    auto factor = [](const FullDecomposition& dx, const FullDecomposition& dy,
                     const std::vector<int>& f, bool first) {
        const auto& cls_x = first ? dx.class0_of : dx.class1_of;
        const auto& cls_y = first ? dy.class0_of : dy.class1_of;
        int n = first ? dx.q0.size() : dx.q1.size();
        std::vector<int> m(n, -1);
        for (size_t x = 0; x < f.size(); ++x) {
            int c = cls_x[x], image = cls_y[f[x]];
            if (m[c] >= 0 && m[c] != image)
                throw std::logic_error("full_amalgam_builder: embedding does not factor");
            m[c] = image;
        }
        return m;
    };
    AmalgInstance inst0{da.q0, db0.q0, db1.q0, factor(da, db0, inst.f0, true),
                        factor(da, db1, inst.f1, true)};
    AmalgInstance inst1{da.q1, db0.q1, db1.q1, factor(da, db0, inst.f0, false),
                        factor(da, db1, inst.f1, false)};
    auto am0 = check_ap_instance(k0, inst0, oracle0.host, strong, oracle0.budget);
    if (am0.status != ApResult::Status::Found) {
        result.note = "left quotient amalgamation in " + k0.label() + " failed";
        return result;
    }
    auto am1 = check_ap_instance(k1, inst1, oracle1.host, strong, oracle1.budget);
    if (am1.status != ApResult::Status::Found) {
        result.note = "right quotient amalgamation in " + k1.label() + " failed";
        return result;
    }

    auto product = full_structure({am0.amalgam->c, am1.amalgam->c});
    Amalgam am;
    am.c = product.structure;
    am.g0.resize(inst.b0.size());
    am.g1.resize(inst.b1.size());
    for (int x = 0; x < inst.b0.size(); ++x)
        am.g0[x] = product.pair_index(am0.amalgam->g0[db0.class0_of[x]],
                                      am1.amalgam->g0[db0.class1_of[x]]);
    for (int x = 0; x < inst.b1.size(); ++x)
        am.g1[x] = product.pair_index(am0.amalgam->g1[db1.class0_of[x]],
                                      am1.amalgam->g1[db1.class1_of[x]]);

    auto spec = ClassSpec::full(k0, k1);
    std::string why;
    if (!verify_amalgam(spec, inst, am, false, &why))
        throw std::logic_error("full_amalgam_builder: assembled amalgam fails verification: " + why);
    result.strong_ok = verify_amalgam(spec, inst, am, true);
    result.status = BuilderResult::Status::Built;
    result.amalgam = std::move(am);
    return result;
}

SuperNAmalgResult super_n_amalgam_builder(const ClassSpec& super_spec, const PSystem& base_sys,
                                          int pad, const SearchBudget& budget) {
    SuperNAmalgResult result;
    if (super_spec.kind() != ClassSpec::Kind::Super)
        throw std::invalid_argument("super_n_amalgam_builder: class is not a superposition");
    const auto& k0 = super_spec.left();
    const auto& k1 = super_spec.right();

    auto colimit = colimit_base(base_sys);
    const int universe = colimit.glued.size();
    if (!hereditary_verified(k0, std::min(universe, enumeration_limit(k0))) ||
        !hereditary_verified(k1, std::min(universe, enumeration_limit(k1)))) {
        result.status = SuperNAmalgResult::Status::HypothesisFailed;
        result.error = "component classes are not hereditary-verified";
        return result;
    }

    // Reduct systems share the index sets and maps.
    auto reduct_system = [&](bool left) {
        PSystem sys = base_sys;
        for (auto& s : sys.structures)
            s = left ? product_left_reduct(s, super_spec) : product_right_reduct(s, super_spec);
        return sys;
    };
    auto sys0 = reduct_system(true);
    auto sys1 = reduct_system(false);

    const uint32_t full = (1u << base_sys.n) - 1;
    Structure pulled[2];
    for (int t = 0; t < 2; ++t) {
        const auto& kt = t == 0 ? k0 : k1;
        auto ext = extend_base_system(kt, t == 0 ? sys0 : sys1, pad, budget);
        if (!ext.found) {
            result.status = SuperNAmalgResult::Status::ComponentFailed;
            result.exhaustive = ext.exhaustive;
            result.error = "component " + kt.label() + " has no extension within bounds";
            return result;
        }
        // phi: colimit universe -> solution, assembled from the new maps.
        const auto& completed = ext.completed;
        const Structure& c = completed.at(full);
        std::vector<int> phi(universe, -1);
        for (size_t i = 0; i < base_sys.sets.size(); ++i) {
            const auto& to_full = completed.map_between(base_sys.sets[i], full);
            for (size_t v = 0; v < to_full.size(); ++v) phi[colimit.inclusion[i][v]] = to_full[v];
        }
        // Hereditary components are solved on the colimit universe itself, so
        // phi is a bijection; pull the solution back onto that universe.
        if (c.size() != universe)
            throw std::logic_error("super_n_amalgam_builder: unexpected solution size");
        std::vector<int> inverse(universe, -1);
        for (int v = 0; v < universe; ++v) inverse[phi[v]] = v;
        std::vector<int> relabel(universe);
        for (int v = 0; v < universe; ++v) relabel[v] = inverse[v] >= 0 ? -1 : -1;
        // apply_permutation maps old -> perm[old]; we want element v of the
        // result to carry the relations of phi[v] in c, i.e. perm = inverse.
        pulled[t] = apply_permutation(c, inverse);
    }

    std::vector<int> identity(universe);
    for (int v = 0; v < universe; ++v) identity[v] = v;
    auto overlay = superpose_structures({pulled[0], pulled[1], identity});
    if (overlay.structure.sig() != super_spec.sig())
        throw std::logic_error("super_n_amalgam_builder: signature drift in the overlay");
    if (!contains(super_spec, overlay.structure))
        throw std::logic_error("super_n_amalgam_builder: overlay not in the superposition class");

    PSystemBuilder builder(base_sys.n);
    for (size_t i = 0; i < base_sys.sets.size(); ++i)
        builder.add(base_sys.sets[i], base_sys.structures[i]);
    builder.add(full, overlay.structure);
    for (const auto& [key, m] : base_sys.maps)
        builder.map(base_sys.sets[key.first], base_sys.sets[key.second], m);
    for (size_t i = 0; i < base_sys.sets.size(); ++i)
        builder.map(base_sys.sets[i], full, colimit.inclusion[i]);
    result.completed = builder.build();
    auto report = verify_p_system(result.completed);
    if (!report.ok)
        throw std::logic_error("super_n_amalgam_builder: completed system fails verification: " +
                               report.axiom);
    result.status = SuperNAmalgResult::Status::Built;
    result.ok = true;
    return result;
}

}  // namespace relkit
