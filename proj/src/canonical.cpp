#include "relkit/canonical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "relkit/embedding.hpp"

namespace relkit {

namespace {

// Iterated colour refinement. Each round a vertex key is its old colour plus
// the multiset of (symbol, position pattern, colours of co-occurring entries)
// over the tuples it sits in. Colours are renumbered by sorted key, so the
// final colouring and the order of its classes are isomorphism-invariant.
std::vector<int> refine_colors(const Structure& s) {
    const int n = s.size();
    std::vector<int> color(n, 0);
    int classes = n > 0 ? 1 : 0;
    for (int round = 0; round < n; ++round) {
        std::vector<std::vector<int64_t>> key(n);
        for (int v = 0; v < n; ++v) key[v].push_back(color[v]);
        for (int sym = 0; sym < s.sig().symbol_count(); ++sym) {
            std::vector<std::vector<std::vector<int64_t>>> per_vertex(n);
            for (const auto& t : s.tuples(sym)) {
                for (size_t p = 0; p < t.size(); ++p) {
                    std::vector<int64_t> item;
                    item.push_back(sym);
                    item.push_back(static_cast<int64_t>(p));
                    for (int e : t) item.push_back(color[e]);
                    per_vertex[t[p]].push_back(std::move(item));
                }
            }
            for (int v = 0; v < n; ++v) {
                std::sort(per_vertex[v].begin(), per_vertex[v].end());
                key[v].push_back(-1);  // symbol separator
                for (const auto& item : per_vertex[v])
                    key[v].insert(key[v].end(), item.begin(), item.end());
            }
        }
        std::vector<std::vector<int64_t>> sorted = key;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v)
            color[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
        int new_classes = static_cast<int>(sorted.size());
        if (new_classes == classes) break;
        classes = new_classes;
    }
    return color;
}

int64_t encode_tuple(const Tuple& t, int n) {
    int64_t code = 0;
    for (int e : t) code = code * n + e;
    return code;
}

std::vector<int64_t> encode_structure(const Structure& s, const std::vector<int>& perm) {
    std::vector<int64_t> code;
    code.push_back(s.size());
    const int n = std::max(s.size(), 1);
    for (int sym = 0; sym < s.sig().symbol_count(); ++sym) {
        std::vector<int64_t> rel;
        rel.reserve(s.tuples(sym).size());
        Tuple image;
        for (const auto& t : s.tuples(sym)) {
            image.resize(t.size());
            for (size_t j = 0; j < t.size(); ++j) image[j] = perm[t[j]];
            rel.push_back(encode_tuple(image, n));
        }
        std::sort(rel.begin(), rel.end());
        code.push_back(-1);  // symbol separator
        code.insert(code.end(), rel.begin(), rel.end());
    }
    return code;
}

struct CanonicalSearch {
    const Structure& s;
    explicit CanonicalSearch(const Structure& s_) : s(s_) {}
    std::vector<std::vector<int>> blocks;  // vertices per colour class, class order fixed
    std::vector<int> block_start;
    std::vector<int> perm;  // old -> new position
    std::vector<int> best_perm;
    std::vector<int64_t> best;
    bool have_best = false;

    // Within a class, try every arrangement; classes are small after
    // refinement so this stays cheap in practice.
    void rec(size_t bi) {
        if (bi == blocks.size()) {
            auto code = encode_structure(s, perm);
            if (!have_best || code < best) {
                best = std::move(code);
                best_perm = perm;
                have_best = true;
            }
            return;
        }
        std::vector<int> arrangement = blocks[bi];
        do {
            for (size_t i = 0; i < arrangement.size(); ++i)
                perm[arrangement[i]] = block_start[bi] + static_cast<int>(i);
            rec(bi + 1);
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    }

    std::vector<int> run() {
        perm.assign(s.size(), -1);
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        rec(0);
        return best_perm;
    }
};

}  // namespace

std::vector<int> canonical_permutation(const Structure& s, bool ignore_soft_limit) {
    const int n = s.size();
    if (n == 0) return {};
    if (s.tuple_count() == 0) {  // all permutations equivalent
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        return id;
    }
    if (!ignore_soft_limit && s.size() > kCanonicalSoftLimit)
        throw std::invalid_argument("canonical_form: size beyond soft limit; pass the override");
    auto colors = refine_colors(s);
    int classes = *std::max_element(colors.begin(), colors.end()) + 1;
    CanonicalSearch search{s};
    search.blocks.assign(classes, {});
    for (int v = 0; v < n; ++v) search.blocks[colors[v]].push_back(v);
    search.block_start.assign(classes, 0);
    for (int c = 1; c < classes; ++c)
        search.block_start[c] =
            search.block_start[c - 1] + static_cast<int>(search.blocks[c - 1].size());
    return search.run();
}

CanonicalForm canonical_form(const Structure& s, bool ignore_soft_limit) {
    auto perm = canonical_permutation(s, ignore_soft_limit);
    return {encode_structure(s, perm)};
}

Structure canonical_copy(const Structure& s, bool ignore_soft_limit) {
    return apply_permutation(s, canonical_permutation(s, ignore_soft_limit));
}

bool is_isomorphic(const Structure& a, const Structure& b) {
    if (a.sig() != b.sig())
        throw std::invalid_argument("is_isomorphic: signature mismatch");
    if (a.size() != b.size()) return false;
    for (int sym = 0; sym < a.sig().symbol_count(); ++sym)
        if (a.tuples(sym).size() != b.tuples(sym).size()) return false;
    // A strong embedding between equal-size structures is an isomorphism.
    return embeds(a, b);
}

std::set<CanonicalForm> age_of(const Structure& s, int max_size) {
    std::set<CanonicalForm> out;
    for (const auto& rep : age_representatives(s, max_size)) out.insert(canonical_form(rep));
    return out;
}

std::vector<Structure> age_representatives(const Structure& s, int max_size) {
    std::map<CanonicalForm, Structure> reps;
    const int n = s.size();
    std::vector<int> subset;
    // Enumerate subsets of size <= max_size by backtracking.
    std::function<void(int)> rec = [&](int from) {
        auto ind = induced_substructure(s, subset);
        auto form = canonical_form(ind.structure);
        reps.emplace(std::move(form), ind.structure);
        if (static_cast<int>(subset.size()) >= max_size) return;
        for (int v = from; v < n; ++v) {
            subset.push_back(v);
            rec(v + 1);
            subset.pop_back();
        }
    };
    rec(0);
    std::vector<Structure> out;
    out.reserve(reps.size());
    for (auto& [form, st] : reps) out.push_back(st);
    return out;
}

}  // namespace relkit
