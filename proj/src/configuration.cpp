#include "relkit/configuration.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "relkit/canonical.hpp"
#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"

namespace relkit {

const QfFormula& Interpretation::formula_for(const std::string& symbol) const {
    auto it = formulas.find(symbol);
    if (it == formulas.end())
        throw std::invalid_argument("interpretation: no formula for symbol " + symbol);
    return it->second;
}

bool ConfigWitness::injective() const {
    for (const auto& e : entries) {
        std::set<std::vector<int>> seen;
        for (const auto& block : e.map)
            if (!seen.insert(block).second) return false;
    }
    return true;
}

std::optional<ConfigViolation> verify_configuration(const ConfigWitness& w) {
    for (size_t ei = 0; ei < w.entries.size(); ++ei) {
        const auto& e = w.entries[ei];
        if (static_cast<int>(e.map.size()) != e.index.size())
            throw std::invalid_argument("configuration entry: map size mismatch");
        for (const auto& block : e.map)
            if (static_cast<int>(block.size()) != w.interp.width)
                throw std::invalid_argument("configuration entry: block width mismatch");
        for (int sym = 0; sym < w.interp.index_sig.symbol_count(); ++sym) {
            const auto& decl = w.interp.index_sig.symbol(sym);
            const auto& phi = w.interp.formula_for(decl.name);
            int index_sym = e.index.sig().index_of(decl.name);
            if (index_sym < 0)
                throw std::invalid_argument("configuration entry: index structure lacks symbol " +
                                            decl.name);
            Tuple t(decl.arity, 0);
            if (e.index.size() == 0) continue;
            while (true) {
                std::vector<std::vector<int>> blocks(decl.arity);
                for (int j = 0; j < decl.arity; ++j) blocks[j] = e.map[t[j]];
                if (e.index.holds(index_sym, t) != eval_qf(phi, e.target, blocks)) {
                    return ConfigViolation{static_cast<int>(ei), decl.name, t};
                }
                int j = decl.arity - 1;
                while (j >= 0 && ++t[j] == e.index.size()) t[j--] = 0;
                if (j < 0) break;
            }
        }
    }
    return std::nullopt;
}

const char* builtin_configuration_name(BuiltinConfiguration b) {
    switch (b) {
        case BuiltinConfiguration::DgToG: return "dg-to-g";
        case BuiltinConfiguration::GToPo: return "g-to-po";
        case BuiltinConfiguration::GToT: return "g-to-t";
    }
    return "?";
}

std::optional<BuiltinConfiguration> builtin_configuration_from_name(std::string_view name) {
    if (name == "dg-to-g") return BuiltinConfiguration::DgToG;
    if (name == "g-to-po") return BuiltinConfiguration::GToPo;
    if (name == "g-to-t") return BuiltinConfiguration::GToT;
    return std::nullopt;
}

ConfigWitness builtin_configuration(BuiltinConfiguration which, int max_size) {
    ConfigWitness w;
    ClassSpec index_class = which == BuiltinConfiguration::DgToG
                                ? ClassSpec::builtin(BuiltinClass::Digraphs)
                                : ClassSpec::builtin(BuiltinClass::Graphs);
    ClassSpec target_class = which == BuiltinConfiguration::DgToG
                                 ? ClassSpec::builtin(BuiltinClass::Graphs)
                             : which == BuiltinConfiguration::GToPo
                                 ? ClassSpec::builtin(BuiltinClass::PartialOrders)
                                 : ClassSpec::builtin(BuiltinClass::Tournaments);
    w.interp.index_sig = index_class.sig();
    w.interp.target_sig = target_class.sig();
    w.interp.width = 2;
    const std::string index_sym = index_class.sig().symbol(0).name;
    const std::string target_sym = target_class.sig().symbol(0).name;
    switch (which) {
        case BuiltinConfiguration::DgToG:
            w.interp.formulas.emplace(index_sym,
                                      QfFormula::atom(target_sym, {{0, 0}, {1, 1}}));
            break;
        case BuiltinConfiguration::GToPo:
        case BuiltinConfiguration::GToT:
            w.interp.formulas.emplace(
                index_sym, QfFormula::conj({QfFormula::atom(target_sym, {{0, 0}, {1, 1}}),
                                            QfFormula::atom(target_sym, {{1, 0}, {0, 1}})}));
            break;
    }

    for (int n = 0; n <= max_size; ++n) {
        for (const auto& a : enumerate_members(index_class, n)) {
            // Target on a x 2, numbered (element, level) -> 2*element + level.
            StructureBuilder tb(target_class.sig(), 2 * n);
            const int r = 0;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    bool related = a.holds2(0, x, y);
                    switch (which) {
                        case BuiltinConfiguration::DgToG:
                            if (related) tb.edge(target_sym, 2 * x, 2 * y + 1);
                            break;
                        case BuiltinConfiguration::GToPo:
                            if (related) tb.add2(target_sym, 2 * x, 2 * y + 1);
                            break;
                        case BuiltinConfiguration::GToT:
                            // Cross-level pairs follow the edge relation; the
                            // within-pair orientation points downward so the
                            // realization condition also holds on repeated
                            // argument tuples.
                            if (x == y)
                                tb.add2(target_sym, 2 * x + 1, 2 * x);
                            else if (related)
                                tb.add2(target_sym, 2 * x, 2 * y + 1);
                            else
                                tb.add2(target_sym, 2 * y + 1, 2 * x);
                            break;
                    }
                    if (which == BuiltinConfiguration::GToT && x < y) {
                        // Same-level pairs need an orientation too.
                        tb.add2(target_sym, 2 * x, 2 * y);
                        tb.add2(target_sym, 2 * x + 1, 2 * y + 1);
                    }
                }
            (void)r;
            ConfigEntry entry;
            entry.index = a;
            entry.target = tb.build();
            auto member = contains_report(target_class, entry.target);
            if (!member.member)
                throw std::logic_error(std::string("builtin_configuration: target not in ") +
                                       target_class.label() + ": " + member.reason);
            entry.map.resize(n);
            for (int x = 0; x < n; ++x) entry.map[x] = {2 * x, 2 * x + 1};
            w.entries.push_back(std::move(entry));
        }
    }
    if (auto violation = verify_configuration(w))
        throw std::logic_error("builtin_configuration: realization condition fails on entry " +
                               std::to_string(violation->entry));
    return w;
}

namespace {

// Substitution of the inner interpretation into an outer formula: atoms over
// the middle signature become inner formulas on expanded blocks, equality
// atoms between middle blocks expand to coordinate equalities (sound because
// the inner witness is injective).
QfFormula substitute(const QfFormula& outer, const Interpretation& inner) {
    const int wi = inner.width;
    switch (outer.kind()) {
        case QfFormula::Kind::True:
        case QfFormula::Kind::False: return outer;
        case QfFormula::Kind::Atom: {
            const auto& inner_formula = inner.formula_for(outer.symbol());
            return inner_formula.remap([&](const VarRef& v) {
                const VarRef& outer_var = outer.args()[v.arg];
                return VarRef{outer_var.arg, outer_var.coord * wi + v.coord};
            });
        }
        case QfFormula::Kind::Eq: {
            std::vector<QfFormula> eqs;
            const VarRef a = outer.args()[0], b = outer.args()[1];
            for (int i = 0; i < wi; ++i)
                eqs.push_back(QfFormula::eq({a.arg, a.coord * wi + i}, {b.arg, b.coord * wi + i}));
            return QfFormula::conj(std::move(eqs));
        }
        case QfFormula::Kind::RangeEq: {
            std::vector<QfFormula> eqs;
            for (int c = 0; c < outer.range_len(); ++c)
                for (int i = 0; i < wi; ++i)
                    eqs.push_back(
                        QfFormula::eq({outer.range_arg0(), (outer.range_offset() + c) * wi + i},
                                      {outer.range_arg1(), (outer.range_offset() + c) * wi + i}));
            return QfFormula::conj(std::move(eqs));
        }
        case QfFormula::Kind::Not:
            return QfFormula::negate(substitute(outer.children()[0], inner));
        case QfFormula::Kind::And:
        case QfFormula::Kind::Or: {
            std::vector<QfFormula> children;
            for (const auto& c : outer.children()) children.push_back(substitute(c, inner));
            return outer.kind() == QfFormula::Kind::And ? QfFormula::conj(std::move(children))
                                                        : QfFormula::disj(std::move(children));
        }
    }
    throw std::logic_error("substitute: unknown formula kind");
}

// The inner entry whose index structure is isomorphic to s, plus the
// isomorphism (first in deterministic order).
std::pair<const ConfigEntry*, std::vector<int>> matching_entry(const ConfigWitness& w,
                                                               const Structure& s) {
    for (const auto& e : w.entries) {
        if (e.index.size() != s.size() || e.index.sig() != s.sig()) continue;
        auto iso = first_embedding(s, e.index);
        if (iso) return {&e, iso->map};
    }
    throw std::invalid_argument("configuration transfer: no entry for a required structure");
}

}  // namespace

ConfigWitness compose_configurations(const ConfigWitness& outer, const ConfigWitness& inner) {
    if (!inner.injective())
        throw std::invalid_argument("compose_configurations: inner witness must be injective");
    if (!(outer.interp.target_sig == inner.interp.index_sig))
        throw std::invalid_argument(
            "compose_configurations: outer target signature differs from inner index signature");
    ConfigWitness out;
    out.interp.index_sig = outer.interp.index_sig;
    out.interp.target_sig = inner.interp.target_sig;
    out.interp.width = outer.interp.width * inner.interp.width;
    for (const auto& [name, phi] : outer.interp.formulas)
        out.interp.formulas.emplace(name, substitute(phi, inner.interp));

    for (const auto& e : outer.entries) {
        auto [inner_entry, iso] = matching_entry(inner, e.target);
        ConfigEntry composed;
        composed.index = e.index;
        composed.target = inner_entry->target;
        composed.map.resize(e.index.size());
        for (int x = 0; x < e.index.size(); ++x) {
            for (int j = 0; j < outer.interp.width; ++j) {
                const auto& block = inner_entry->map[iso[e.map[x][j]]];
                composed.map[x].insert(composed.map[x].end(), block.begin(), block.end());
            }
        }
        out.entries.push_back(std::move(composed));
    }
    if (auto violation = verify_configuration(out))
        throw std::logic_error("compose_configurations: realization fails on entry " +
                               std::to_string(violation->entry) + " symbol " + violation->symbol);
    return out;
}

ConfigWitness make_injective(const ConfigWitness& w) {
    ConfigWitness out = w;
    out.interp.width = w.interp.width + 1;
    for (auto& e : out.entries) {
        if (e.target.size() < e.index.size())
            throw std::invalid_argument("make_injective: target too small for an injective tag");
        for (int x = 0; x < e.index.size(); ++x) e.map[x].push_back(x);
    }
    if (auto violation = verify_configuration(out))
        throw std::logic_error("make_injective: realization fails on entry " +
                               std::to_string(violation->entry));
    if (!out.injective()) throw std::logic_error("make_injective: output is not injective");
    return out;
}

namespace {

void require_same_target_sig(const ConfigWitness& w0, const ConfigWitness& w1) {
    if (!(w0.interp.target_sig == w1.interp.target_sig))
        throw std::invalid_argument("configuration transfer: target signatures differ");
}

// Formulas of a combined interpretation: left formulas on the leading
// coordinates, right formulas shifted by n0, plus the product bookkeeping.
void combine_formulas(Interpretation* out, const CombinedSignature& combined,
                      const Interpretation& i0, const Interpretation& i1, bool lex_guard) {
    const int n0 = i0.width;
    for (size_t i = 0; i < combined.left_index.size(); ++i) {
        const auto& result_name = combined.sig.symbol(combined.left_index[i]).name;
        const auto& original = i0.index_sig.symbol(static_cast<int>(i)).name;
        auto phi = i0.formula_for(original).remap([](const VarRef& v) { return v; });
        if (lex_guard) {
            const int arity = i0.index_sig.symbol(static_cast<int>(i)).arity;
            std::vector<QfFormula> parts{std::move(phi)};
            for (int x = 0; x < arity; ++x)
                for (int y = x + 1; y < arity; ++y)
                    parts.push_back(QfFormula::range_eq(x, y, n0, i1.width));
            phi = QfFormula::conj(std::move(parts));
        }
        out->formulas.emplace(result_name, std::move(phi));
    }
    for (size_t i = 0; i < combined.right_index.size(); ++i) {
        const auto& result_name = combined.sig.symbol(combined.right_index[i]).name;
        const auto& original = i1.index_sig.symbol(static_cast<int>(i)).name;
        out->formulas.emplace(result_name, i1.formula_for(original).remap([&](const VarRef& v) {
            return VarRef{v.arg, v.coord + n0};
        }));
    }
}

}  // namespace

ConfigWitness lex_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                  const std::vector<LexTransferEntry>& entries) {
    if (!w1.injective())
        throw std::invalid_argument(
            "lex_config_transfer: the base witness must be injective (make_injective provides one)");
    require_same_target_sig(w0, w1);
    auto combined = combine_signatures(w0.interp.index_sig, w1.interp.index_sig, {{"E", 2}});
    ConfigWitness out;
    out.interp.index_sig = combined.sig;
    out.interp.target_sig = w0.interp.target_sig;
    out.interp.width = w0.interp.width + w1.interp.width;
    combine_formulas(&out.interp, combined, w0.interp, w1.interp, true);
    out.interp.formulas.emplace(combined.sig.symbol(combined.extra_index[0]).name,
                                QfFormula::range_eq(0, 1, w0.interp.width, w1.interp.width));

    for (const auto& entry : entries) {
        auto product = lex_structure(
            {entry.assembly.base, entry.assembly.fibers, w0.interp.index_sig});
        auto [base_entry, base_iso] = matching_entry(w1, entry.assembly.base);
        ConfigEntry built;
        built.index = product.structure;
        built.target = base_entry->target;
        built.map.resize(product.structure.size());
        for (int x = 0; x < product.structure.size(); ++x) {
            auto [a, b] = product.coords[x];
            auto [fiber_entry, fiber_iso] = matching_entry(w0, entry.assembly.fibers[b]);
            if (!(fiber_entry->target == base_entry->target))
                throw std::invalid_argument(
                    "lex_config_transfer: fiber and base entries use different targets");
            built.map[x] = fiber_entry->map[fiber_iso[a]];
            const auto& zblock = base_entry->map[base_iso[b]];
            built.map[x].insert(built.map[x].end(), zblock.begin(), zblock.end());
        }
        out.entries.push_back(std::move(built));
    }
    if (auto violation = verify_configuration(out))
        throw std::logic_error("lex_config_transfer: realization fails on entry " +
                               std::to_string(violation->entry) + " symbol " + violation->symbol);
    return out;
}

ConfigWitness full_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                   const std::vector<FullTransferEntry>& entries) {
    if (!w0.injective() || !w1.injective())
        throw std::invalid_argument("full_config_transfer: both witnesses must be injective");
    require_same_target_sig(w0, w1);
    auto combined =
        combine_signatures(w0.interp.index_sig, w1.interp.index_sig, {{"E0", 2}, {"E1", 2}});
    ConfigWitness out;
    out.interp.index_sig = combined.sig;
    out.interp.target_sig = w0.interp.target_sig;
    out.interp.width = w0.interp.width + w1.interp.width;
    combine_formulas(&out.interp, combined, w0.interp, w1.interp, false);
    out.interp.formulas.emplace(combined.sig.symbol(combined.extra_index[0]).name,
                                QfFormula::range_eq(0, 1, 0, w0.interp.width));
    out.interp.formulas.emplace(combined.sig.symbol(combined.extra_index[1]).name,
                                QfFormula::range_eq(0, 1, w0.interp.width, w1.interp.width));

    for (const auto& entry : entries) {
        auto grid = full_structure({entry.left_index, entry.right_index});
        auto [left_entry, left_iso] = matching_entry(w0, entry.left_index);
        auto [right_entry, right_iso] = matching_entry(w1, entry.right_index);
        if (!(left_entry->target == right_entry->target))
            throw std::invalid_argument("full_config_transfer: entries use different targets");
        std::vector<int> cells = entry.cells;
        if (cells.empty())
            for (int c = 0; c < grid.structure.size(); ++c) cells.push_back(c);
        auto ind = induced_substructure(grid.structure, cells);
        ConfigEntry built;
        built.index = ind.structure;
        built.target = left_entry->target;
        built.map.resize(ind.structure.size());
        for (size_t i = 0; i < ind.new_to_old.size(); ++i) {
            auto [a0, a1] = grid.coords[ind.new_to_old[i]];
            built.map[i] = left_entry->map[left_iso[a0]];
            const auto& block = right_entry->map[right_iso[a1]];
            built.map[i].insert(built.map[i].end(), block.begin(), block.end());
        }
        out.entries.push_back(std::move(built));
    }
    if (auto violation = verify_configuration(out))
        throw std::logic_error("full_config_transfer: realization fails on entry " +
                               std::to_string(violation->entry) + " symbol " + violation->symbol);
    return out;
}

ConfigWitness super_config_transfer(const ConfigWitness& w0, const ConfigWitness& w1,
                                    const std::vector<Structure>& entries,
                                    const ClassSpec& super_spec) {
    require_same_target_sig(w0, w1);
    const auto& combined = super_spec.combined();
    ConfigWitness out;
    out.interp.index_sig = combined.sig;
    out.interp.target_sig = w0.interp.target_sig;
    out.interp.width = w0.interp.width + w1.interp.width;
    combine_formulas(&out.interp, combined, w0.interp, w1.interp, false);

    for (const auto& s : entries) {
        auto parts = split_superposition(s, super_spec);
        auto [left_entry, left_iso] = matching_entry(w0, parts.first);
        auto [right_entry, right_iso] = matching_entry(w1, parts.second);
        if (!(left_entry->target == right_entry->target))
            throw std::invalid_argument("super_config_transfer: entries use different targets");
        ConfigEntry built;
        built.index = s;
        built.target = left_entry->target;
        built.map.resize(s.size());
        for (int x = 0; x < s.size(); ++x) {
            built.map[x] = left_entry->map[left_iso[x]];
            const auto& block = right_entry->map[right_iso[x]];
            built.map[x].insert(built.map[x].end(), block.begin(), block.end());
        }
        out.entries.push_back(std::move(built));
    }
    if (auto violation = verify_configuration(out))
        throw std::logic_error("super_config_transfer: realization fails on entry " +
                               std::to_string(violation->entry) + " symbol " + violation->symbol);
    return out;
}

ReductiveCheck check_reductive_subclass(const ClassSpec& k0, const ClassSpec& k1, int size,
                                        const std::map<std::string, std::string>& renames) {
    ReductiveCheck out;
    // Indices in k1's signature of k0's symbols, after renaming.
    std::vector<int> indices;
    std::vector<std::string> names;
    for (const auto& decl : k0.sig().symbols()) {
        auto it = renames.find(decl.name);
        const std::string& target_name = it == renames.end() ? decl.name : it->second;
        int idx = k1.sig().index_of(target_name);
        if (idx < 0 || k1.sig().arity(idx) != decl.arity)
            throw std::invalid_argument("check_reductive_subclass: symbol " + decl.name +
                                        " has no counterpart in " + k1.label());
        indices.push_back(idx);
        names.push_back(decl.name);
    }
    for (int n = 0; n <= size; ++n) {
        for (const auto& a : enumerate_members(k0, n)) {
            bool found = false;
            for (const auto& b : enumerate_members(k1, n)) {
                auto r = reduct(b, indices, &names);
                if (is_isomorphic(a, r)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                out.pass = false;
                out.counterexample = a;
                return out;
            }
        }
    }
    return out;
}

}  // namespace relkit
