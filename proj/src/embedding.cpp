#include "relkit/embedding.hpp"

#include <algorithm>
#include <stdexcept>

namespace relkit {

namespace {

// Tuples over {0..v} that contain v, for each arity present in the signature.
// Used for the incremental strong-preservation check: when v is assigned,
// exactly these tuples become fully decided.
std::vector<Tuple> tuples_closing_at(int v, int arity) {
    std::vector<Tuple> out;
    Tuple t(arity, 0);
    while (true) {
        if (std::find(t.begin(), t.end(), v) != t.end()) out.push_back(t);
        int j = arity - 1;
        while (j >= 0 && t[j] == v) t[j--] = 0;
        if (j < 0) break;
        ++t[j];
    }
    return out;
}

struct DegreeProfile {
    // deg[v][sym * max_arity + pos] = #tuples of sym with v at position pos
    std::vector<std::vector<int>> deg;

    DegreeProfile(const Structure& s, int max_arity) {
        deg.assign(s.size(), std::vector<int>(s.sig().symbol_count() * max_arity, 0));
        for (int i = 0; i < s.sig().symbol_count(); ++i)
            for (const auto& t : s.tuples(i))
                for (size_t p = 0; p < t.size(); ++p)
                    ++deg[t[p]][i * max_arity + static_cast<int>(p)];
    }
};

struct Searcher {
    const Structure& a;
    const Structure& b;
    const EmbeddingSearchOptions& opts;
    Searcher(const Structure& a_, const Structure& b_, const EmbeddingSearchOptions& opts_)
        : a(a_), b(b_), opts(opts_) {}
    int max_arity = 1;
    std::vector<std::vector<std::vector<Tuple>>> closing;  // per vertex, per symbol
    std::vector<std::vector<char>> candidate;               // [v][t] degree-feasible
    std::vector<int> map;
    std::vector<char> used;
    std::vector<std::vector<int>>* out;
    long long found = 0;

    bool consistent(int v) {
        // Both directions of strong preservation on all tuples decided by v.
        for (int sym = 0; sym < a.sig().symbol_count(); ++sym) {
            Tuple image(a.sig().arity(sym));
            for (const auto& t : closing[v][sym]) {
                bool in_range = true;
                for (size_t j = 0; j < t.size(); ++j) {
                    if (map[t[j]] < 0) { in_range = false; break; }
                    image[j] = map[t[j]];
                }
                if (!in_range) continue;  // involves an unassigned fixed gap
                if (a.holds(sym, t) != b.holds(sym, image)) return false;
            }
        }
        return true;
    }

    bool rec(int v) {
        if (v == a.size()) {
            ++found;
            if (out) out->push_back(map);
            return opts.limit >= 0 && found >= opts.limit;
        }
        if (map[v] >= 0) {  // prescribed by opts.fixed
            int t = map[v];
            if (used[t] || !candidate[v][t]) return false;
            used[t] = 1;
            bool stop = consistent(v) && rec(v + 1);
            used[t] = 0;
            return stop;
        }
        for (int t = 0; t < b.size(); ++t) {
            if (used[t] || !candidate[v][t]) continue;
            map[v] = t;
            used[t] = 1;
            bool stop = consistent(v) && rec(v + 1);
            used[t] = 0;
            map[v] = -1;
            if (stop) return true;
        }
        return false;
    }

    void run(std::vector<std::vector<int>>* sink) {
        out = sink;
        if (a.sig() != b.sig())
            throw std::invalid_argument("embedding search: signature mismatch");
        for (int i = 0; i < a.sig().symbol_count(); ++i)
            max_arity = std::max(max_arity, a.sig().arity(i));

        closing.resize(a.size());
        for (int v = 0; v < a.size(); ++v) {
            closing[v].resize(a.sig().symbol_count());
            for (int sym = 0; sym < a.sig().symbol_count(); ++sym)
                closing[v][sym] = tuples_closing_at(v, a.sig().arity(sym));
        }

        DegreeProfile da(a, max_arity), db(b, max_arity);
        candidate.assign(a.size(), std::vector<char>(b.size(), 1));
        for (int v = 0; v < a.size(); ++v)
            for (int t = 0; t < b.size(); ++t) {
                if (opts.target_allowed && !(*opts.target_allowed)[t]) {
                    candidate[v][t] = 0;
                    continue;
                }
                for (size_t k = 0; k < da.deg[v].size(); ++k)
                    if (da.deg[v][k] > db.deg[t][k]) {
                        candidate[v][t] = 0;
                        break;
                    }
            }

        map.assign(a.size(), -1);
        if (opts.fixed) {
            if (static_cast<int>(opts.fixed->size()) != a.size())
                throw std::invalid_argument("embedding search: bad fixed map size");
            map = *opts.fixed;
            for (int v = 0; v < a.size(); ++v)
                if (map[v] >= 0 && (map[v] >= b.size())) return;
        }
        used.assign(b.size(), 0);
        rec(0);
    }
};

}  // namespace

bool is_valid_embedding(const Structure& a, const Structure& b, const std::vector<int>& map) {
    if (a.sig() != b.sig()) return false;
    if (static_cast<int>(map.size()) != a.size()) return false;
    std::vector<char> used(b.size(), 0);
    for (int v : map) {
        if (v < 0 || v >= b.size() || used[v]) return false;
        used[v] = 1;
    }
    for (int sym = 0; sym < a.sig().symbol_count(); ++sym) {
        const int arity = a.sig().arity(sym);
        Tuple t(arity, 0), image(arity);
        bool done = a.size() == 0 && arity > 0;
        while (!done) {
            for (int j = 0; j < arity; ++j) image[j] = map[t[j]];
            if (a.holds(sym, t) != b.holds(sym, image)) return false;
            int j = arity - 1;
            while (j >= 0 && ++t[j] == a.size()) t[j--] = 0;
            if (j < 0) done = true;
        }
    }
    return true;
}

bool is_valid_embedding(const Embedding& e) {
    return is_valid_embedding(e.source, e.target, e.map);
}

Embedding identity_embedding(const Structure& s) {
    std::vector<int> id(s.size());
    for (int i = 0; i < s.size(); ++i) id[i] = i;
    return {s, s, std::move(id)};
}

Embedding compose(const Embedding& g, const Embedding& f) {
    if (!(f.target == g.source))
        throw std::invalid_argument("compose: endpoint mismatch");
    std::vector<int> m(f.map.size());
    for (size_t i = 0; i < f.map.size(); ++i) m[i] = g.map[f.map[i]];
    return {f.source, g.target, std::move(m)};
}

std::vector<std::vector<int>> embedding_maps(const Structure& a, const Structure& b,
                                             const EmbeddingSearchOptions& opts) {
    std::vector<std::vector<int>> out;
    Searcher s{a, b, opts};
    s.run(&out);
    return out;
}

std::vector<Embedding> enumerate_embeddings(const Structure& a, const Structure& b) {
    std::vector<Embedding> out;
    for (auto& m : embedding_maps(a, b)) out.push_back({a, b, std::move(m)});
    return out;
}

bool embeds(const Structure& a, const Structure& b) {
    EmbeddingSearchOptions opts;
    opts.limit = 1;
    return !embedding_maps(a, b, opts).empty();
}

std::optional<Embedding> first_embedding(const Structure& a, const Structure& b) {
    EmbeddingSearchOptions opts;
    opts.limit = 1;
    auto maps = embedding_maps(a, b, opts);
    if (maps.empty()) return std::nullopt;
    return Embedding{a, b, std::move(maps[0])};
}

std::vector<Embedding> enumerate_automorphisms(const Structure& s) {
    return enumerate_embeddings(s, s);
}

long long aut_order(const Structure& s) {
    return static_cast<long long>(embedding_maps(s, s).size());
}

}  // namespace relkit
