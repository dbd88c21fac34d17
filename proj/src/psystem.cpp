#include "relkit/psystem.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relkit/embedding.hpp"

namespace relkit {

namespace {

bool subset(uint32_t p, uint32_t q) { return (p & ~q) == 0; }

std::string mask_name(uint32_t mask, int n) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
            if (!first) os << ',';
            os << i;
            first = false;
        }
    os << '}';
    return os.str();
}

}  // namespace

int PSystem::index_of(uint32_t mask) const {
    auto it = std::lower_bound(sets.begin(), sets.end(), mask);
    if (it == sets.end() || *it != mask) return -1;
    return static_cast<int>(it - sets.begin());
}

const Structure& PSystem::at(uint32_t mask) const {
    int i = index_of(mask);
    if (i < 0) throw std::out_of_range("PSystem::at: no such index set");
    return structures[i];
}

const std::vector<int>& PSystem::map_between(uint32_t from, uint32_t to) const {
    auto it = maps.find({index_of(from), index_of(to)});
    if (it == maps.end()) throw std::out_of_range("PSystem::map_between: missing map");
    return it->second;
}

PSystemBuilder& PSystemBuilder::add(uint32_t mask, Structure s) {
    structures_.emplace_back(mask, std::move(s));
    return *this;
}

PSystemBuilder& PSystemBuilder::map(uint32_t from, uint32_t to, std::vector<int> m) {
    maps_.emplace_back(from, to, std::move(m));
    return *this;
}

PSystem PSystemBuilder::build() const {
    PSystem sys;
    sys.n = n_;
    for (const auto& [mask, s] : structures_) sys.sets.push_back(mask);
    std::sort(sys.sets.begin(), sys.sets.end());
    sys.sets.erase(std::unique(sys.sets.begin(), sys.sets.end()), sys.sets.end());
    sys.structures.resize(sys.sets.size(), Structure{});
    for (const auto& [mask, s] : structures_) sys.structures[sys.index_of(mask)] = s;
    for (const auto& [from, to, m] : maps_) sys.maps[{sys.index_of(from), sys.index_of(to)}] = m;
    // Fill identities and maps out of empty pieces.
    for (size_t i = 0; i < sys.sets.size(); ++i)
        for (size_t j = 0; j < sys.sets.size(); ++j) {
            if (!subset(sys.sets[i], sys.sets[j])) continue;
            auto key = std::make_pair(static_cast<int>(i), static_cast<int>(j));
            if (sys.maps.count(key)) continue;
            if (i == j) {
                std::vector<int> id(sys.structures[i].size());
                for (size_t v = 0; v < id.size(); ++v) id[v] = static_cast<int>(v);
                sys.maps[key] = std::move(id);
            } else if (sys.structures[i].size() == 0) {
                sys.maps[key] = {};
            }
        }
    return sys;
}

std::vector<uint32_t> proper_subsets(int n) {
    std::vector<uint32_t> out;
    const uint32_t full = (1u << n) - 1;
    for (uint32_t m = 0; m < full; ++m) out.push_back(m);
    return out;
}

PSystemReport verify_p_system(const PSystem& sys) {
    PSystemReport report;
    auto fail = [&](std::string axiom, std::string detail) {
        report.ok = false;
        report.axiom = std::move(axiom);
        report.detail = std::move(detail);
        return report;
    };
    const size_t m = sys.sets.size();
    if (sys.structures.size() != m) return fail("shape", "structures/sets size mismatch");
    // Intersection closure.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            if (sys.index_of(sys.sets[i] & sys.sets[j]) < 0)
                return fail("shape", "index family not closed under intersections");
    // Every inclusion has a valid strong embedding.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (!subset(sys.sets[i], sys.sets[j])) continue;
            auto it = sys.maps.find({static_cast<int>(i), static_cast<int>(j)});
            if (it == sys.maps.end())
                return fail("shape", "missing map " + mask_name(sys.sets[i], sys.n) + " -> " +
                                         mask_name(sys.sets[j], sys.n));
            if (!is_valid_embedding(sys.structures[i], sys.structures[j], it->second))
                return fail("embedding", "map " + mask_name(sys.sets[i], sys.n) + " -> " +
                                             mask_name(sys.sets[j], sys.n) +
                                             " is not a strong embedding");
        }
    // Identity.
    for (size_t i = 0; i < m; ++i) {
        const auto& self = sys.maps.at({static_cast<int>(i), static_cast<int>(i)});
        for (size_t v = 0; v < self.size(); ++v)
            if (self[v] != static_cast<int>(v))
                return fail("identity", "self-map of " + mask_name(sys.sets[i], sys.n) +
                                            " is not the identity");
    }
    // Commutativity.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t l = 0; l < m; ++l) {
                if (!subset(sys.sets[i], sys.sets[j]) || !subset(sys.sets[j], sys.sets[l])) continue;
                const auto& fij = sys.maps.at({static_cast<int>(i), static_cast<int>(j)});
                const auto& fjl = sys.maps.at({static_cast<int>(j), static_cast<int>(l)});
                const auto& fil = sys.maps.at({static_cast<int>(i), static_cast<int>(l)});
                for (size_t v = 0; v < fij.size(); ++v)
                    if (fil[v] != fjl[fij[v]])
                        return fail("commutativity",
                                    mask_name(sys.sets[i], sys.n) + " -> " +
                                        mask_name(sys.sets[j], sys.n) + " -> " +
                                        mask_name(sys.sets[l], sys.n));
            }
    // Disjointness.
    for (size_t l = 0; l < m; ++l)
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) {
                if (!subset(sys.sets[i], sys.sets[l]) || !subset(sys.sets[j], sys.sets[l])) continue;
                const auto& fil = sys.maps.at({static_cast<int>(i), static_cast<int>(l)});
                const auto& fjl = sys.maps.at({static_cast<int>(j), static_cast<int>(l)});
                int inter = sys.index_of(sys.sets[i] & sys.sets[j]);
                const auto& fkl = sys.maps.at({inter, static_cast<int>(l)});
                std::set<int> im_i(fil.begin(), fil.end());
                std::set<int> im_j(fjl.begin(), fjl.end());
                std::set<int> im_k(fkl.begin(), fkl.end());
                std::set<int> meet;
                for (int v : im_i)
                    if (im_j.count(v)) meet.insert(v);
                if (meet != im_k)
                    return fail("disjointness",
                                "images of " + mask_name(sys.sets[i], sys.n) + " and " +
                                    mask_name(sys.sets[j], sys.n) + " in " +
                                    mask_name(sys.sets[l], sys.n) +
                                    " overlap beyond the intersection piece");
            }
    return report;
}

bool Colimit::defined(const Tuple& t, const std::vector<uint32_t>& sets) const {
    uint32_t need = 0;
    for (int v : t) need |= origin_mask[v];
    for (uint32_t p : sets)
        if (subset(need, p)) return true;
    return false;
}

Colimit colimit_base(const PSystem& sys) {
    auto report = verify_p_system(sys);
    if (!report.ok)
        throw std::invalid_argument("colimit_base: invalid system (" + report.axiom + ": " +
                                    report.detail + ")");
    // Minimal origin of each element of each piece. The q's whose image
    // contains an element are closed under intersection, so a unique minimal
    // one exists.
    const size_t m = sys.sets.size();
    // (piece, element) -> (origin piece, origin element)
    std::vector<std::vector<std::pair<int, int>>> origin(m);
    for (size_t p = 0; p < m; ++p) {
        origin[p].assign(sys.structures[p].size(), {static_cast<int>(p), -1});
        for (int x = 0; x < sys.structures[p].size(); ++x) {
            uint32_t best = sys.sets[p];
            int best_pre = x;
            for (size_t q = 0; q < m; ++q) {
                if (q == p || !subset(sys.sets[q], sys.sets[p])) continue;
                const auto& f = sys.maps.at({static_cast<int>(q), static_cast<int>(p)});
                for (size_t z = 0; z < f.size(); ++z)
                    if (f[z] == x && subset(sys.sets[q], best)) {
                        best = sys.sets[q];
                        best_pre = static_cast<int>(z);
                    }
            }
            origin[p][x] = {sys.index_of(best), best_pre};
        }
    }
    // Collect colimit elements: those whose minimal origin is themselves.
    std::vector<std::pair<uint32_t, int>> elems;  // (mask, element in that piece)
    for (size_t p = 0; p < m; ++p)
        for (int x = 0; x < sys.structures[p].size(); ++x)
            if (origin[p][x] == std::make_pair(static_cast<int>(p), x))
                elems.emplace_back(sys.sets[p], x);
    std::sort(elems.begin(), elems.end());

    auto elem_id = [&](int piece, int x) {
        auto key = std::make_pair(sys.sets[origin[piece][x].first], origin[piece][x].second);
        return static_cast<int>(std::lower_bound(elems.begin(), elems.end(), key) - elems.begin());
    };

    Colimit out;
    out.origin_mask.reserve(elems.size());
    for (const auto& [mask, x] : elems) out.origin_mask.push_back(mask);
    out.inclusion.resize(m);
    for (size_t p = 0; p < m; ++p) {
        out.inclusion[p].resize(sys.structures[p].size());
        for (int x = 0; x < sys.structures[p].size(); ++x)
            out.inclusion[p][x] = elem_id(static_cast<int>(p), x);
    }
    const Signature& sig =
        sys.structures.empty() ? Signature{} : sys.structures[0].sig();
    std::vector<std::vector<Tuple>> rels(sig.symbol_count());
    for (size_t p = 0; p < m; ++p)
        for (int sym = 0; sym < sig.symbol_count(); ++sym)
            for (const auto& t : sys.structures[p].tuples(sym)) {
                Tuple mapped(t.size());
                for (size_t j = 0; j < t.size(); ++j) mapped[j] = out.inclusion[p][t[j]];
                rels[sym].push_back(std::move(mapped));
            }
    out.glued = Structure(sig, static_cast<int>(elems.size()), std::move(rels));
    return out;
}

}  // namespace relkit
