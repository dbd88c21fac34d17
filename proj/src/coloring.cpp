#include "relkit/partition.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "relkit/embedding.hpp"
#include "relkit/enumerate.hpp"

namespace relkit {

namespace {

// Monochromaticity depends only on the image vertex set, so hyperedges are
// deduplicated image sets.
std::vector<std::vector<int>> embedding_hyperedges(const Structure& a, const Structure& b) {
    std::set<std::vector<int>> edges;
    for (const auto& m : embedding_maps(a, b)) {
        std::vector<int> image = m;
        std::sort(image.begin(), image.end());
        edges.insert(std::move(image));
    }
    return {edges.begin(), edges.end()};
}

struct ColoringDfs {
    const std::vector<std::vector<int>>& edges;
    int n, k;
    const SearchBudget& budget;
    long long node_limit;
    ColoringDfs(const std::vector<std::vector<int>>& edges_, int n_, int k_,
                const SearchBudget& budget_, long long node_limit_)
        : edges(edges_), n(n_), k(k_), budget(budget_), node_limit(node_limit_) {}
    std::vector<std::vector<int>> incident;  // vertex -> edge indices
    std::vector<int> color;
    std::vector<int> colored_count;  // per edge
    std::vector<int> edge_color;     // common colour so far, -1 once mixed
    long long nodes = 0;
    bool aborted = false;

    bool assign_ok(int v, int c) {
        for (int e : incident[v]) {
            if (edge_color[e] == -1 && colored_count[e] > 0) continue;  // mixed already
            if (colored_count[e] == static_cast<int>(edges[e].size()) - 1 &&
                (colored_count[e] == 0 || edge_color[e] == c))
                return false;  // would complete a monochromatic edge
        }
        return true;
    }

    void apply(int v, int c) {
        color[v] = c;
        for (int e : incident[v]) {
            if (colored_count[e] == 0)
                edge_color[e] = c;
            else if (edge_color[e] != c)
                edge_color[e] = -1;
            ++colored_count[e];
        }
    }

    void undo(int v, int c) {
        color[v] = -1;
        for (int e : incident[v]) {
            --colored_count[e];
            if (colored_count[e] == 0) {
                edge_color[e] = -1;
            } else if (edge_color[e] == -1) {
                // Recompute the common colour among the still-colored ones.
                int common = -2;
                for (int w : edges[e]) {
                    if (color[w] < 0) continue;
                    if (common == -2)
                        common = color[w];
                    else if (common != color[w])
                        common = -1;
                }
                edge_color[e] = common == -2 ? -1 : common;
            }
        }
        (void)c;
    }

    bool rec(int v, int max_used) {
        if (++nodes == node_limit || (nodes % 4096 == 0 && budget.expired())) {
            aborted = true;
            return false;
        }
        if (v == n) return true;
        int top = std::min(k - 1, max_used + 1);
        for (int c = 0; c <= top; ++c) {
            if (!assign_ok(v, c)) continue;
            apply(v, c);
            if (rec(v + 1, std::max(max_used, c))) return true;
            if (aborted) return false;
            undo(v, c);
        }
        return false;
    }
};

}  // namespace

ColoringSearch find_bad_coloring(const Structure& a, const Structure& b, int k,
                                 const SearchBudget& budget, long long node_limit) {
    if (a.sig() != b.sig())
        throw std::invalid_argument("find_bad_coloring: signature mismatch");
    if (k < 2) throw std::invalid_argument("find_bad_coloring: need at least 2 colours");
    ColoringSearch out;

    if (a.size() == 0) {
        // The empty image is monochromatic; every coloring contains it.
        out.status = ColoringSearch::Status::NoneExists;
        return out;
    }
    if (a.sig().symbol_count() == 0) {
        // Bare sets: every |a|-subset is an image, so a bad coloring exists
        // exactly below the pigeonhole bound k(|a|-1)+1.
        out.hyperedges = 1;
        if (b.size() >= k * (a.size() - 1) + 1) {
            out.status = ColoringSearch::Status::NoneExists;
            return out;
        }
        // Round-robin keeps every colour class at ceil(n/k) <= |a|-1 elements.
        Coloring c{k, std::vector<int>(b.size(), 0)};
        for (int v = 0; v < b.size(); ++v) c.assignment[v] = v % k;
        if (!coloring_is_bad(a, b, c))
            throw std::logic_error("find_bad_coloring: pigeonhole fast path is inconsistent");
        out.status = ColoringSearch::Status::BadColoringFound;
        out.coloring = std::move(c);
        return out;
    }

    auto edges = embedding_hyperedges(a, b);
    out.hyperedges = static_cast<long long>(edges.size());
    if (edges.empty()) {
        // No copies of a at all: the all-zero coloring is vacuously bad.
        out.status = ColoringSearch::Status::BadColoringFound;
        out.coloring = Coloring{k, std::vector<int>(b.size(), 0)};
        return out;
    }

    ColoringDfs dfs(edges, b.size(), k, budget, node_limit);
    dfs.incident.resize(b.size());
    for (size_t e = 0; e < edges.size(); ++e)
        for (int v : edges[e]) dfs.incident[v].push_back(static_cast<int>(e));
    dfs.color.assign(b.size(), -1);
    dfs.colored_count.assign(edges.size(), 0);
    dfs.edge_color.assign(edges.size(), -1);

    if (dfs.rec(0, -1)) {
        Coloring c{k, dfs.color};
        if (!coloring_is_bad(a, b, c))
            throw std::logic_error("find_bad_coloring: produced coloring fails re-verification");
        out.status = ColoringSearch::Status::BadColoringFound;
        out.coloring = std::move(c);
        return out;
    }
    out.status = dfs.aborted ? ColoringSearch::Status::Aborted : ColoringSearch::Status::NoneExists;
    return out;
}

bool coloring_is_bad(const Structure& a, const Structure& b, const Coloring& c) {
    if (static_cast<int>(c.assignment.size()) != b.size()) return false;
    if (a.size() == 0) return false;
    if (a.sig().symbol_count() == 0) {
        std::vector<int> count(c.colors, 0);
        for (int v = 0; v < b.size(); ++v)
            if (++count[c.assignment[v]] >= a.size()) return false;
        return true;
    }
    for (const auto& m : embedding_maps(a, b)) {
        bool mono = true;
        for (size_t i = 1; i < m.size(); ++i)
            if (c.assignment[m[i]] != c.assignment[m[0]]) {
                mono = false;
                break;
            }
        if (mono) return false;
    }
    return true;
}

bool verify_indivisibility_witness(const ClassSpec& k, const Structure& a, int colors,
                                   const Structure& b) {
    auto ra = contains_report(k, a);
    if (!ra.member)
        throw std::invalid_argument("verify_indivisibility_witness: pattern not in class: " +
                                    ra.reason);
    auto rb = contains_report(k, b);
    if (!rb.member)
        throw std::invalid_argument("verify_indivisibility_witness: candidate not in class: " +
                                    rb.reason);
    auto search = find_bad_coloring(a, b, colors);
    if (search.status == ColoringSearch::Status::Aborted)
        throw std::runtime_error("verify_indivisibility_witness: search aborted");
    return search.status == ColoringSearch::Status::NoneExists;
}

WitnessSearch find_indivisibility_witness(const ClassSpec& k, const Structure& a, int colors,
                                          int max_size, const SearchBudget& budget) {
    WitnessSearch out;
    if (!contains(k, a))
        throw std::invalid_argument("find_indivisibility_witness: pattern not in class");
    for (int size = std::max(a.size(), 1); size <= max_size; ++size) {
        if (size > enumeration_limit(k)) break;
        for (const auto& b : enumerate_members(k, size)) {
            if (budget.expired()) return out;
            auto search = find_bad_coloring(a, b, colors, budget);
            if (search.status == ColoringSearch::Status::NoneExists) {
                out.status = WitnessSearch::Status::Found;
                out.witness = b;
                return out;
            }
        }
    }
    return out;
}

}  // namespace relkit
