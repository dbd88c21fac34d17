#include "relkit/amalgam.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "relkit/amalgam_builders.hpp"
#include "relkit/canonical.hpp"

namespace relkit {

namespace {

using Slot = std::pair<int, Tuple>;

// Size at which hereditary evidence is collected for certificate decisions:
// enough to cover the working universe, capped to keep member enumeration
// cheap.
int hereditary_evidence_size(const ClassSpec& k, int universe) {
    return std::min(enumeration_limit(k), std::max(4, std::min(universe, 6)));
}

// A structure whose relations are decided only on part of its tuples: the
// positives are stored, the undecided slots listed separately.
struct PartialStructure {
    Structure positives;
    std::vector<Slot> free_slots;

    bool is_free(int sym, const Tuple& t) const {
        return std::binary_search(free_slots.begin(), free_slots.end(), Slot{sym, t});
    }
};

// Injective map of a partial structure into a member candidate: decided
// slots must be preserved and reflected, free slots are unconstrained.
std::optional<std::vector<int>> partial_embedding(const PartialStructure& p, const Structure& c) {
    const Structure& u = p.positives;
    if (u.size() > c.size()) return std::nullopt;
    const int n = u.size();
    std::vector<int> map(n, -1);
    std::vector<char> used(c.size(), 0);

    // Positive-degree filter per (symbol, position).
    int max_arity = 1;
    for (int i = 0; i < u.sig().symbol_count(); ++i) max_arity = std::max(max_arity, u.sig().arity(i));
    auto degrees = [&](const Structure& s) {
        std::vector<std::vector<int>> deg(s.size(),
                                          std::vector<int>(s.sig().symbol_count() * max_arity, 0));
        for (int i = 0; i < s.sig().symbol_count(); ++i)
            for (const auto& t : s.tuples(i))
                for (size_t pos = 0; pos < t.size(); ++pos)
                    ++deg[t[pos]][i * max_arity + static_cast<int>(pos)];
        return deg;
    };
    auto du = degrees(u), dc = degrees(c);

    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == n) return true;
        for (int t = 0; t < c.size(); ++t) {
            if (used[t]) continue;
            bool feasible = true;
            for (size_t i = 0; i < du[v].size(); ++i)
                if (du[v][i] > dc[t][i]) {
                    feasible = false;
                    break;
                }
            if (!feasible) continue;
            map[v] = t;
            used[t] = 1;
            bool ok = true;
            for (int sym = 0; sym < u.sig().symbol_count() && ok; ++sym) {
                const int arity = u.sig().arity(sym);
                Tuple tup(arity, 0), image(arity);
                while (true) {
                    bool closes = false, in_range = true;
                    for (int j = 0; j < arity; ++j) {
                        if (tup[j] > v || map[tup[j]] < 0) {
                            in_range = false;
                            break;
                        }
                        closes = closes || tup[j] == v;
                        image[j] = map[tup[j]];
                    }
                    if (in_range && closes && !p.is_free(sym, tup) &&
                        u.holds(sym, tup) != c.holds(sym, image)) {
                        ok = false;
                        break;
                    }
                    int j = arity - 1;
                    while (j >= 0 && ++tup[j] == v + 1) tup[j--] = 0;
                    if (j < 0) break;
                }
            }
            if (ok && rec(v + 1)) return true;
            used[t] = 0;
            map[v] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return map;
}

struct CompletionResult {
    Structure host;
    std::vector<int> phi;  // universe of the partial structure -> host
};

// Finds a member of k realizing the partial structure. Hereditary-verified
// classes are completed on the same universe; otherwise up to `max_extra`
// fresh points are allowed via the member search.
std::optional<CompletionResult> complete_partial(const ClassSpec& k, const PartialStructure& p,
                                                 int max_extra, const SearchBudget& budget,
                                                 bool* exhaustive) {
    const int n = p.positives.size();
    std::vector<int> identity(n);
    for (int i = 0; i < n; ++i) identity[i] = i;

    const size_t f = p.free_slots.size();
    if (max_extra == 0 && f <= 16) {
        for (uint64_t mask = 0; mask < (uint64_t{1} << f); ++mask) {
            if (budget.expired()) {
                *exhaustive = false;
                return std::nullopt;
            }
            std::vector<std::vector<Tuple>> rels(p.positives.sig().symbol_count());
            for (int i = 0; i < p.positives.sig().symbol_count(); ++i)
                rels[i] = p.positives.tuples(i);
            for (size_t j = 0; j < f; ++j)
                if (mask & (uint64_t{1} << j))
                    rels[p.free_slots[j].first].push_back(p.free_slots[j].second);
            Structure cand(p.positives.sig(), n, std::move(rels));
            if (contains(k, cand)) return CompletionResult{cand, identity};
        }
        return std::nullopt;
    }
    for (int size = n; size <= n + max_extra; ++size) {
        if (size > enumeration_limit(k)) {
            *exhaustive = false;
            return std::nullopt;
        }
        for (const auto& c : enumerate_members(k, size)) {
            if (budget.expired()) {
                *exhaustive = false;
                return std::nullopt;
            }
            if (auto phi = partial_embedding(p, c)) return CompletionResult{c, std::move(*phi)};
        }
    }
    return std::nullopt;
}

}  // namespace

void validate_instance(const AmalgInstance& inst) {
    if (!is_valid_embedding(inst.a, inst.b0, inst.f0))
        throw std::invalid_argument("amalgamation instance: f0 is not a strong embedding");
    if (!is_valid_embedding(inst.a, inst.b1, inst.f1))
        throw std::invalid_argument("amalgamation instance: f1 is not a strong embedding");
}

bool verify_amalgam(const ClassSpec& k, const AmalgInstance& inst, const Amalgam& am, bool strong,
                    std::string* why) {
    auto explain = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!contains(k, am.c)) return explain("amalgam not in class");
    if (!is_valid_embedding(inst.b0, am.c, am.g0)) return explain("g0 not a strong embedding");
    if (!is_valid_embedding(inst.b1, am.c, am.g1)) return explain("g1 not a strong embedding");
    for (int x = 0; x < inst.a.size(); ++x)
        if (am.g0[inst.f0[x]] != am.g1[inst.f1[x]]) return explain("square does not commute");
    if (strong) {
        std::set<int> im0(am.g0.begin(), am.g0.end());
        std::set<int> image_of_a;
        for (int x = 0; x < inst.a.size(); ++x) image_of_a.insert(am.g0[inst.f0[x]]);
        for (int y : am.g1)
            if (im0.count(y) && !image_of_a.count(y))
                return explain("images overlap beyond the a-image");
    }
    return true;
}

ApResult check_ap_instance(const ClassSpec& k, const AmalgInstance& inst, int host, bool strong,
                           const SearchBudget& budget) {
    validate_instance(inst);
    ApResult result;
    if (host < std::max(inst.b0.size(), inst.b1.size()))
        throw std::invalid_argument("check_ap_instance: host below max(|b0|,|b1|)");

    // Pushout ids: b0 keeps its numbering, the b1-only part is appended.
    std::vector<int> g1_base(inst.b1.size(), -1);
    for (int x = 0; x < inst.a.size(); ++x) g1_base[inst.f1[x]] = inst.f0[x];
    std::vector<int> private1;
    for (int y = 0; y < inst.b1.size(); ++y)
        if (g1_base[y] < 0) private1.push_back(y);
    std::vector<int> private0;
    {
        std::vector<char> hit(inst.b0.size(), 0);
        for (int x : inst.f0) hit[x] = 1;
        for (int y = 0; y < inst.b0.size(); ++y)
            if (!hit[y]) private0.push_back(y);
    }

    // Matchings between the private parts; most identification (smallest
    // universe) first. Strong amalgams admit no identification at all.
    std::vector<std::vector<std::pair<int, int>>> matchings;
    {
        std::vector<std::pair<int, int>> current;
        std::function<void(size_t)> rec = [&](size_t i0) {
            matchings.push_back(current);
            for (size_t i = i0; i < private0.size(); ++i) {
                bool used0 = false;
                for (auto [a0, a1] : current) used0 = used0 || a0 == static_cast<int>(i);
                if (used0) continue;
                for (size_t j = 0; j < private1.size(); ++j) {
                    bool used1 = false;
                    for (auto [a0, a1] : current) used1 = used1 || a1 == static_cast<int>(j);
                    if (used1) continue;
                    current.emplace_back(static_cast<int>(i), static_cast<int>(j));
                    rec(i + 1);
                    current.pop_back();
                }
            }
        };
        if (strong)
            matchings.push_back({});
        else
            rec(0);
        std::stable_sort(matchings.begin(), matchings.end(),
                         [](const auto& x, const auto& y) { return x.size() > y.size(); });
    }

    bool exhaustive = true;
    for (const auto& matching : matchings) {
        if (budget.expired()) {
            exhaustive = false;
            break;
        }
        const int universe = inst.b0.size() + static_cast<int>(private1.size() - matching.size());
        if (universe > host) {
            exhaustive = false;
            continue;
        }
        // Complete g1 for this matching.
        auto g1 = g1_base;
        std::vector<char> matched1(private1.size(), 0);
        for (auto [i0, i1] : matching) {
            g1[private1[i1]] = private0[i0];
            matched1[i1] = 1;
        }
        int next = inst.b0.size();
        for (size_t j = 0; j < private1.size(); ++j)
            if (!matched1[j]) g1[private1[j]] = next++;
        std::vector<int> g0(inst.b0.size());
        for (int y = 0; y < inst.b0.size(); ++y) g0[y] = y;

        // Forced values: tuples inside either image; both images must agree.
        std::vector<int> pre0(universe, -1), pre1(universe, -1);
        for (int y = 0; y < inst.b0.size(); ++y) pre0[g0[y]] = y;
        for (int y = 0; y < inst.b1.size(); ++y) pre1[g1[y]] = y;

        PartialStructure partial;
        std::vector<std::vector<Tuple>> positives(k.sig().symbol_count());
        bool consistent = true;
        for (int sym = 0; sym < k.sig().symbol_count() && consistent; ++sym) {
            if (universe == 0) break;
            const int arity = k.sig().arity(sym);
            Tuple t(arity, 0), back(arity);
            while (true) {
                bool in0 = true, in1 = true;
                for (int j = 0; j < arity; ++j) {
                    in0 = in0 && pre0[t[j]] >= 0;
                    in1 = in1 && pre1[t[j]] >= 0;
                }
                std::optional<bool> value;
                if (in0) {
                    for (int j = 0; j < arity; ++j) back[j] = pre0[t[j]];
                    value = inst.b0.holds(sym, back);
                }
                if (in1) {
                    for (int j = 0; j < arity; ++j) back[j] = pre1[t[j]];
                    bool v1 = inst.b1.holds(sym, back);
                    if (value && *value != v1) {
                        consistent = false;
                        break;
                    }
                    value = v1;
                }
                if (value) {
                    if (*value) positives[sym].push_back(t);
                } else {
                    partial.free_slots.emplace_back(sym, t);
                }
                int j = arity - 1;
                while (j >= 0 && ++t[j] == universe) t[j--] = 0;
                if (j < 0) break;
            }
        }
        if (!consistent) continue;
        partial.positives = Structure(k.sig(), universe, std::move(positives));
        std::sort(partial.free_slots.begin(), partial.free_slots.end());

        const bool hereditary = hereditary_verified(k, hereditary_evidence_size(k, universe));
        const int max_extra = hereditary ? 0 : host - universe;
        bool search_exhaustive = true;
        auto completion = complete_partial(k, partial, max_extra, budget, &search_exhaustive);
        if (!completion) {
            exhaustive = exhaustive && hereditary && search_exhaustive;
            continue;
        }
        Amalgam am;
        am.c = completion->host;
        am.g0.resize(inst.b0.size());
        am.g1.resize(inst.b1.size());
        for (int y = 0; y < inst.b0.size(); ++y) am.g0[y] = completion->phi[g0[y]];
        for (int y = 0; y < inst.b1.size(); ++y) am.g1[y] = completion->phi[g1[y]];
        std::string why;
        if (!verify_amalgam(k, inst, am, strong, &why))
            throw std::logic_error("check_ap_instance: produced amalgam fails verification: " + why);
        result.status = ApResult::Status::Found;
        result.amalgam = std::move(am);
        return result;
    }
    result.status = ApResult::Status::NoneUpToBound;
    result.exhaustive = exhaustive;
    return result;
}

JepResult check_jep(const ClassSpec& k, int base, int host, const SearchBudget& budget) {
    JepResult result;
    auto members = enumerate_members_up_to(k, base);
    std::vector<Structure> nonempty;
    for (const auto& m : members)
        if (m.size() > 0) nonempty.push_back(m);
    for (size_t i = 0; i < nonempty.size(); ++i)
        for (size_t j = i; j < nonempty.size(); ++j) {
            const auto& a = nonempty[i];
            const auto& b = nonempty[j];
            bool found = false;
            for (int size = std::max(a.size(), b.size()); size <= host && !found; ++size) {
                if (size > enumeration_limit(k)) break;
                for (const auto& c : enumerate_members(k, size)) {
                    if (budget.expired()) break;
                    if (embeds(a, c) && embeds(b, c)) {
                        found = true;
                        break;
                    }
                }
            }
            if (!found) {
                result.status = JepResult::Status::NoHostUpToBound;
                result.failing_pair = {a, b};
                return result;
            }
        }
    return result;
}

ApSweepResult check_amalgamation_exhaustive(const ClassSpec& k, int base, int host, bool strong,
                                            const SearchBudget& budget) {
    ApSweepResult result;
    result.exhaustive = true;
    auto members = enumerate_members_up_to(k, base);
    for (const auto& a : members) {
        for (size_t i = 0; i < members.size(); ++i) {
            if (members[i].size() < a.size()) continue;
            auto f0s = embedding_maps(a, members[i]);
            for (size_t j = i; j < members.size(); ++j) {
                if (members[j].size() < a.size()) continue;
                auto f1s = embedding_maps(a, members[j]);
                for (size_t x = 0; x < f0s.size(); ++x)
                    for (size_t y = (i == j ? x : 0); y < f1s.size(); ++y) {
                        if (budget.expired()) {
                            result.exhaustive = false;
                            return result;
                        }
                        AmalgInstance inst{a, members[i], members[j], f0s[x], f1s[y]};
                        auto r = check_ap_instance(k, inst, host, strong, budget);
                        if (r.status != ApResult::Status::Found) {
                            result.pass = false;
                            result.failing = inst;
                            result.exhaustive = r.exhaustive;
                            return result;
                        }
                    }
            }
        }
    }
    return result;
}

namespace {

bool subset_mask(uint32_t p, uint32_t q) { return (p & ~q) == 0; }

}  // namespace

std::vector<PSystem> enumerate_base_systems(const ClassSpec& k, int n, int base) {
    const auto P = proper_subsets(n);
    const uint32_t full = (1u << n) - 1;
    std::vector<uint32_t> maximal;
    for (uint32_t p : P)
        if (static_cast<int>(__builtin_popcount(p)) == n - 1) maximal.push_back(p);

    // Marker-extended signature for isomorph-free dedup: support classes are
    // pinned by one unary symbol per index set.
    std::vector<SymbolDecl> marker_decls = k.sig().symbols();
    for (uint32_t p : P) marker_decls.push_back({"S" + std::to_string(p), 1});
    Signature marker_sig{marker_decls};

    std::vector<std::pair<CanonicalForm, PSystem>> found;
    std::set<CanonicalForm> seen;

    // Support profiles: how many elements carry each support set.
    std::vector<int> profile(P.size(), 0);
    std::function<void(size_t)> profiles = [&](size_t i) {
        if (i == P.size()) {
            // Universe ordered by (support mask, index).
            std::vector<uint32_t> support;
            for (size_t s = 0; s < P.size(); ++s)
                for (int c = 0; c < profile[s]; ++c) support.push_back(P[s]);
            const int universe = static_cast<int>(support.size());

            std::vector<std::vector<int>> piece_elems(P.size());
            for (size_t s = 0; s < P.size(); ++s)
                for (int v = 0; v < universe; ++v)
                    if (subset_mask(support[v], P[s])) piece_elems[s].push_back(v);

            // Defined slots grouped by the first maximal piece covering them.
            std::vector<std::vector<Slot>> piece_slots(maximal.size());
            std::set<Slot> claimed;
            for (size_t mi = 0; mi < maximal.size(); ++mi) {
                int pi = -1;
                for (size_t s = 0; s < P.size(); ++s)
                    if (P[s] == maximal[mi]) pi = static_cast<int>(s);
                const auto& elems = piece_elems[pi];
                for (int sym = 0; sym < k.sig().symbol_count(); ++sym) {
                    const int arity = k.sig().arity(sym);
                    std::vector<int> idx(arity, 0);
                    if (elems.empty()) continue;
                    while (true) {
                        Tuple t(arity);
                        for (int j = 0; j < arity; ++j) t[j] = elems[idx[j]];
                        if (!claimed.count({sym, t})) {
                            claimed.insert({sym, t});
                            piece_slots[mi].push_back({sym, t});
                        }
                        int j = arity - 1;
                        while (j >= 0 && ++idx[j] == static_cast<int>(elems.size())) idx[j--] = 0;
                        if (j < 0) break;
                    }
                }
            }

            // Assign slot values piece by piece, pruning by membership as
            // soon as a piece is fully decided.
            std::vector<std::vector<Tuple>> rels(k.sig().symbol_count());
            std::function<void(size_t)> assign = [&](size_t mi) {
                if (mi == maximal.size()) {
                    Structure whole(k.sig(), universe, rels);
                    // Membership of every piece.
                    for (size_t s = 0; s < P.size(); ++s) {
                        auto piece = induced_substructure(whole, piece_elems[s]).structure;
                        if (!contains(k, piece)) return;
                    }
                    // Dedup up to simultaneous isomorphism.
                    std::vector<std::vector<Tuple>> marked(marker_sig.symbol_count());
                    for (int i = 0; i < k.sig().symbol_count(); ++i) marked[i] = rels[i];
                    for (int v = 0; v < universe; ++v) {
                        int s_index = static_cast<int>(
                            std::find(P.begin(), P.end(), support[v]) - P.begin());
                        marked[k.sig().symbol_count() + s_index].push_back({v});
                    }
                    auto form = canonical_form(Structure(marker_sig, universe, std::move(marked)));
                    if (seen.count(form)) return;
                    seen.insert(form);

                    PSystemBuilder builder(n);
                    for (size_t s = 0; s < P.size(); ++s)
                        builder.add(P[s], induced_substructure(whole, piece_elems[s]).structure);
                    for (size_t s = 0; s < P.size(); ++s)
                        for (size_t r = 0; r < P.size(); ++r) {
                            if (!subset_mask(P[s], P[r]) || s == r) continue;
                            // piece_elems are sorted, so the inclusion is the
                            // index map between the two element lists.
                            std::vector<int> m(piece_elems[s].size());
                            for (size_t v = 0; v < piece_elems[s].size(); ++v)
                                m[v] = static_cast<int>(
                                    std::lower_bound(piece_elems[r].begin(), piece_elems[r].end(),
                                                     piece_elems[s][v]) -
                                    piece_elems[r].begin());
                            builder.map(P[s], P[r], std::move(m));
                        }
                    auto sys = builder.build();
                    auto report = verify_p_system(sys);
                    if (!report.ok)
                        throw std::logic_error("enumerate_base_systems: built an invalid system: " +
                                               report.axiom);
                    found.emplace_back(std::move(form), std::move(sys));
                    return;
                }
                std::function<void(size_t)> fill = [&](size_t si) {
                    if (si == piece_slots[mi].size()) {
                        // Piece fully decided; prune non-members.
                        int pi = -1;
                        for (size_t s = 0; s < P.size(); ++s)
                            if (P[s] == maximal[mi]) pi = static_cast<int>(s);
                        auto piece = induced_substructure(Structure(k.sig(), universe, rels),
                                                          piece_elems[pi])
                                         .structure;
                        if (!contains(k, piece)) return;
                        assign(mi + 1);
                        return;
                    }
                    const auto& [sym, t] = piece_slots[mi][si];
                    fill(si + 1);  // slot false
                    rels[sym].push_back(t);
                    fill(si + 1);  // slot true
                    rels[sym].pop_back();
                };
                fill(0);
            };
            assign(0);
            return;
        }
        for (int c = 0;; ++c) {
            profile[static_cast<int>(i)] = c;
            bool feasible = true;
            for (uint32_t m : maximal) {
                int total = 0;
                for (size_t s = 0; s <= i; ++s)
                    if (subset_mask(P[s], m)) total += profile[s];
                if (total > base) feasible = false;
            }
            if (!feasible) break;
            profiles(i + 1);
        }
        profile[static_cast<int>(i)] = 0;
        (void)full;
    };
    profiles(0);

    std::sort(found.begin(), found.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<PSystem> out;
    out.reserve(found.size());
    for (auto& [form, sys] : found) out.push_back(std::move(sys));
    return out;
}

ExtensionResult extend_base_system(const ClassSpec& k, const PSystem& sys, int pad,
                                   const SearchBudget& budget) {
    // Free superpositions extend componentwise: solve the reduct systems and
    // align them through the shared colimit.
    if (k.kind() == ClassSpec::Kind::Super) {
        auto result = super_n_amalgam_builder(k, sys, pad, budget);
        ExtensionResult out;
        out.found = result.ok;
        if (result.ok) out.completed = std::move(result.completed);
        out.exhaustive = result.exhaustive;
        return out;
    }

    auto colimit = colimit_base(sys);
    const int universe = colimit.glued.size();
    PartialStructure partial;
    partial.positives = colimit.glued;
    for (int sym = 0; sym < k.sig().symbol_count(); ++sym) {
        const int arity = k.sig().arity(sym);
        Tuple t(arity, 0);
        if (universe == 0) continue;
        while (true) {
            if (!colimit.defined(t, sys.sets)) partial.free_slots.emplace_back(sym, t);
            int j = arity - 1;
            while (j >= 0 && ++t[j] == universe) t[j--] = 0;
            if (j < 0) break;
        }
    }
    std::sort(partial.free_slots.begin(), partial.free_slots.end());

    const bool hereditary = hereditary_verified(k, hereditary_evidence_size(k, universe + pad));
    const int max_extra = hereditary ? 0 : pad;
    bool search_exhaustive = true;
    ExtensionResult out;
    auto completion = complete_partial(k, partial, max_extra, budget, &search_exhaustive);
    if (!completion) {
        out.exhaustive = hereditary && search_exhaustive;
        return out;
    }
    const uint32_t full = (1u << sys.n) - 1;
    PSystemBuilder builder(sys.n);
    for (size_t i = 0; i < sys.sets.size(); ++i) builder.add(sys.sets[i], sys.structures[i]);
    builder.add(full, completion->host);
    for (const auto& [key, m] : sys.maps) builder.map(sys.sets[key.first], sys.sets[key.second], m);
    for (size_t i = 0; i < sys.sets.size(); ++i) {
        std::vector<int> m(sys.structures[i].size());
        for (size_t v = 0; v < m.size(); ++v) m[v] = completion->phi[colimit.inclusion[i][v]];
        builder.map(sys.sets[i], full, std::move(m));
    }
    out.completed = builder.build();
    auto report = verify_p_system(out.completed);
    if (!report.ok)
        throw std::logic_error("extend_base_system: completed system fails verification: " +
                               report.axiom + " (" + report.detail + ")");
    out.found = true;
    out.exhaustive = true;
    return out;
}

DisjointNResult check_disjoint_n(const ClassSpec& k, int n, int base, int pad,
                                 const SearchBudget& budget) {
    DisjointNResult result;
    auto systems = enumerate_base_systems(k, n, base);
    result.systems_checked = static_cast<int>(systems.size());
    for (const auto& sys : systems) {
        if (budget.expired()) {
            result.status = DisjointNResult::Status::Inconclusive;
            return result;
        }
        auto ext = extend_base_system(k, sys, pad, budget);
        if (!ext.found) {
            result.status = ext.exhaustive ? DisjointNResult::Status::Counterexample
                                           : DisjointNResult::Status::Inconclusive;
            result.witness = sys;
            return result;
        }
    }
    return result;
}

}  // namespace relkit
