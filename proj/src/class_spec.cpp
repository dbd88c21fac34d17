#include "relkit/class_spec.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "relkit/canonical.hpp"
#include "relkit/embedding.hpp"
#include "relkit/products.hpp"

namespace relkit {

namespace {

struct BuiltinInfo {
    BuiltinClass kind;
    const char* name;
};

constexpr BuiltinInfo kBuiltins[] = {
    {BuiltinClass::Sets, "sets"},
    {BuiltinClass::Graphs, "graphs"},
    {BuiltinClass::Hypergraphs, "hypergraphs"},
    {BuiltinClass::LinearOrders, "linear_orders"},
    {BuiltinClass::EquivalenceRelations, "equivalence_relations"},
    {BuiltinClass::PartialOrders, "partial_orders"},
    {BuiltinClass::Tournaments, "tournaments"},
    {BuiltinClass::Digraphs, "digraphs"},
    {BuiltinClass::Forests, "forests"},
    {BuiltinClass::PlanarGraphs, "planar_graphs"},
    {BuiltinClass::UnaryAll, "unary_all"},
    {BuiltinClass::UnaryAtMostOne, "unary_at_most_one"},
};

Signature builtin_signature(BuiltinClass b, int hyper_arity) {
    switch (b) {
        case BuiltinClass::Sets: return Signature{};
        case BuiltinClass::Graphs:
        case BuiltinClass::Forests:
        case BuiltinClass::PlanarGraphs:
        case BuiltinClass::EquivalenceRelations: return Signature({{"E", 2}});
        case BuiltinClass::Hypergraphs: return Signature({{"E", hyper_arity}});
        case BuiltinClass::LinearOrders:
        case BuiltinClass::PartialOrders: return Signature({{"lt", 2}});
        case BuiltinClass::Tournaments:
        case BuiltinClass::Digraphs: return Signature({{"R", 2}});
        case BuiltinClass::UnaryAll:
        case BuiltinClass::UnaryAtMostOne: return Signature({{"P", 1}});
    }
    throw std::logic_error("builtin_signature: unknown builtin");
}

}  // namespace

const char* builtin_name(BuiltinClass b) {
    for (const auto& info : kBuiltins)
        if (info.kind == b) return info.name;
    return "?";
}

std::optional<BuiltinClass> builtin_from_name(std::string_view name) {
    for (const auto& info : kBuiltins)
        if (name == info.name) return info.kind;
    return std::nullopt;
}

struct ClassSpec::Impl {
    Kind kind = Kind::Builtin;
    BuiltinClass builtin = BuiltinClass::Sets;
    int hyper_arity = 2;
    Signature sig;
    std::vector<Structure> forbidden;
    std::optional<ClassSpec> left, right;
    CombinedSignature combined;
    std::string label;
    std::string key;
};

ClassSpec ClassSpec::builtin(BuiltinClass b, int hyper_arity) {
    if (b == BuiltinClass::Hypergraphs && hyper_arity < 2)
        throw std::invalid_argument("hypergraphs: arity must be >= 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Builtin;
    impl->builtin = b;
    impl->hyper_arity = hyper_arity;
    impl->sig = builtin_signature(b, hyper_arity);
    impl->label = builtin_name(b);
    if (b == BuiltinClass::Hypergraphs)
        impl->label += "(" + std::to_string(hyper_arity) + ")";
    impl->key = "builtin:" + impl->label;
    return ClassSpec(std::move(impl));
}

ClassSpec ClassSpec::forbidden(Signature sig, std::vector<Structure> patterns,
                               std::string label) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ForbiddenInduced;
    impl->sig = std::move(sig);
    for (const auto& p : patterns)
        if (p.sig() != impl->sig)
            throw std::invalid_argument("forbidden: pattern signature mismatch");
    impl->forbidden = std::move(patterns);
    impl->label = label.empty() ? "forbidden" : std::move(label);
    std::ostringstream key;
    key << "forbidden:" << impl->sig.to_string() << ':';
    std::vector<std::string> codes;
    for (const auto& p : impl->forbidden) {
        std::ostringstream c;
        for (auto v : canonical_form(p).code) c << v << ',';
        codes.push_back(c.str());
    }
    std::sort(codes.begin(), codes.end());
    for (const auto& c : codes) key << c << ';';
    impl->key = key.str();
    return ClassSpec(std::move(impl));
}

ClassSpec ClassSpec::product(Kind kind, ClassSpec k0, ClassSpec k1, const char* tag) {
    std::vector<SymbolDecl> extra;
    if (kind == Kind::Lex) extra = {{"E", 2}};
    if (kind == Kind::Full) extra = {{"E0", 2}, {"E1", 2}};
    auto combined = combine_signatures(k0.sig(), k1.sig(), extra);
    std::ostringstream label, key;
    label << tag << '(' << k0.label() << ", " << k1.label() << ')';
    key << tag << '(' << k0.key() << '|' << k1.key() << ')';
    auto impl = std::make_shared<Impl>();
    impl->kind = kind;
    impl->sig = combined.sig;
    impl->combined = std::move(combined);
    impl->left = std::move(k0);
    impl->right = std::move(k1);
    impl->label = label.str();
    impl->key = key.str();
    return ClassSpec(std::move(impl));
}

ClassSpec ClassSpec::lex(ClassSpec k0, ClassSpec k1) {
    return product(Kind::Lex, std::move(k0), std::move(k1), "lex");
}
ClassSpec ClassSpec::full(ClassSpec k0, ClassSpec k1) {
    return product(Kind::Full, std::move(k0), std::move(k1), "full");
}
ClassSpec ClassSpec::super(ClassSpec k0, ClassSpec k1) {
    return product(Kind::Super, std::move(k0), std::move(k1), "super");
}

ClassSpec::Kind ClassSpec::kind() const { return impl_->kind; }
BuiltinClass ClassSpec::builtin_kind() const { return impl_->builtin; }
int ClassSpec::hyper_arity() const { return impl_->hyper_arity; }
const Signature& ClassSpec::sig() const { return impl_->sig; }
const std::vector<Structure>& ClassSpec::forbidden_patterns() const { return impl_->forbidden; }
const ClassSpec& ClassSpec::left() const { return *impl_->left; }
const ClassSpec& ClassSpec::right() const { return *impl_->right; }
const CombinedSignature& ClassSpec::combined() const { return impl_->combined; }
const std::string& ClassSpec::label() const { return impl_->label; }
const std::string& ClassSpec::key() const { return impl_->key; }

namespace {

bool symmetric_irreflexive(const Structure& s, int sym, std::string* reason) {
    for (const auto& t : s.tuples(sym)) {
        if (t[0] == t[1]) {
            if (reason) *reason = "loop at " + std::to_string(t[0]);
            return false;
        }
        if (!s.holds2(sym, t[1], t[0])) {
            if (reason)
                *reason = "asymmetric pair (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + ")";
            return false;
        }
    }
    return true;
}

bool irreflexive(const Structure& s, int sym, std::string* reason) {
    for (const auto& t : s.tuples(sym))
        if (t[0] == t[1]) {
            if (reason) *reason = "loop at " + std::to_string(t[0]);
            return false;
        }
    return true;
}

bool transitive(const Structure& s, int sym, std::string* reason) {
    for (const auto& t : s.tuples(sym))
        for (const auto& u : s.tuples(sym)) {
            if (t[1] != u[0]) continue;
            if (!s.holds2(sym, t[0], u[1])) {
                if (reason)
                    *reason = "transitivity fails at (" + std::to_string(t[0]) + "," +
                              std::to_string(t[1]) + "," + std::to_string(u[1]) + ")";
                return false;
            }
        }
    return true;
}

bool total_asymmetric(const Structure& s, int sym, std::string* reason) {
    for (int a = 0; a < s.size(); ++a)
        for (int b = a + 1; b < s.size(); ++b) {
            bool ab = s.holds2(sym, a, b), ba = s.holds2(sym, b, a);
            if (ab == ba) {
                if (reason)
                    *reason = std::string(ab ? "both" : "neither") + " direction on (" +
                              std::to_string(a) + "," + std::to_string(b) + ")";
                return false;
            }
        }
    return true;
}

MembershipResult fail(std::string reason) { return {false, std::move(reason)}; }
MembershipResult ok() { return {true, {}}; }

MembershipResult builtin_contains(const ClassSpec& k, const Structure& s) {
    std::string why;
    const int sym = 0;
    switch (k.builtin_kind()) {
        case BuiltinClass::Sets:
            return ok();
        case BuiltinClass::Graphs:
            if (!symmetric_irreflexive(s, sym, &why)) return fail(why);
            return ok();
        case BuiltinClass::Hypergraphs: {
            for (const auto& t : s.tuples(sym)) {
                Tuple sorted = t;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    return fail("repeated entry in hyperedge");
                Tuple perm = sorted;
                do {
                    if (!s.holds(sym, perm)) return fail("hyperedge not closed under permutation");
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
            return ok();
        }
        case BuiltinClass::LinearOrders:
            if (!irreflexive(s, sym, &why)) return fail(why);
            if (!total_asymmetric(s, sym, &why)) return fail(why);
            if (!transitive(s, sym, &why)) return fail(why);
            return ok();
        case BuiltinClass::EquivalenceRelations: {
            for (int v = 0; v < s.size(); ++v)
                if (!s.holds2(sym, v, v)) return fail("not reflexive at " + std::to_string(v));
            for (const auto& t : s.tuples(sym))
                if (!s.holds2(sym, t[1], t[0])) return fail("not symmetric");
            if (!transitive(s, sym, &why)) return fail(why);
            return ok();
        }
        case BuiltinClass::PartialOrders:
            if (!irreflexive(s, sym, &why)) return fail(why);
            if (!transitive(s, sym, &why)) return fail(why);
            return ok();
        case BuiltinClass::Tournaments:
            if (!irreflexive(s, sym, &why)) return fail(why);
            if (!total_asymmetric(s, sym, &why)) return fail(why);
            return ok();
        case BuiltinClass::Digraphs:
            if (!irreflexive(s, sym, &why)) return fail(why);
            return ok();
        case BuiltinClass::Forests:
            if (!symmetric_irreflexive(s, sym, &why)) return fail(why);
            if (!is_acyclic_graph(s, sym)) return fail("contains a cycle");
            return ok();
        case BuiltinClass::PlanarGraphs:
            if (s.size() > 12)
                throw std::invalid_argument("planar_graphs: size beyond planarity soft limit 12");
            if (!symmetric_irreflexive(s, sym, &why)) return fail(why);
            if (!is_planar_graph(s, sym)) return fail("contains a K5 or K3,3 subdivision");
            return ok();
        case BuiltinClass::UnaryAll:
            return ok();
        case BuiltinClass::UnaryAtMostOne:
            if (s.tuples(sym).size() > 1) return fail("more than one P element");
            return ok();
    }
    throw std::logic_error("builtin_contains: unknown builtin");
}

}  // namespace

bool is_acyclic_graph(const Structure& s, int sym) {
    std::vector<std::vector<int>> adj(s.size());
    for (const auto& t : s.tuples(sym)) adj[t[0]].push_back(t[1]);
    std::vector<char> visited(s.size(), 0);
    // DFS carrying the parent; a visited non-parent neighbour closes a cycle.
    std::function<bool(int, int)> dfs = [&](int v, int parent) -> bool {
        visited[v] = 1;
        bool parent_edge_seen = false;
        for (int w : adj[v]) {
            if (w == parent && !parent_edge_seen) {
                parent_edge_seen = true;
                continue;
            }
            if (visited[w]) return false;
            if (!dfs(w, v)) return false;
        }
        return true;
    };
    for (int root = 0; root < s.size(); ++root)
        if (!visited[root] && !dfs(root, -1)) return false;
    return true;
}

namespace {

struct SubdivisionSearch {
    const std::vector<std::vector<int>>& adj;
    const std::vector<std::pair<int, int>>& pattern_edges;
    std::vector<int> branch;
    std::vector<char> used;

    bool connect(size_t ei) {
        if (ei == pattern_edges.size()) return true;
        auto [pu, pv] = pattern_edges[ei];
        return path_dfs(branch[pu], branch[pv], ei);
    }

    bool path_dfs(int cur, int goal, size_t ei) {
        for (int w : adj[cur]) {
            if (w == goal) {
                if (connect(ei + 1)) return true;
                continue;
            }
            if (used[w]) continue;
            used[w] = 1;
            if (path_dfs(w, goal, ei)) return true;
            used[w] = 0;
        }
        return false;
    }
};

bool has_subdivision(const std::vector<std::vector<int>>& adj, int n,
                     const std::vector<std::pair<int, int>>& pattern_edges,
                     const std::vector<int>& pattern_degree, bool sides_symmetric) {
    const int k = static_cast<int>(pattern_degree.size());
    std::vector<int> branch(k, -1);
    std::vector<char> used(n, 0);
    SubdivisionSearch search{adj, pattern_edges, branch, used};

    // Branch vertices ascending within each symmetry class of the pattern.
    std::function<bool(int)> choose = [&](int i) -> bool {
        if (i == k) return search.connect(0);
        int lo = 0;
        if (i > 0 && (sides_symmetric ? (i != k / 2) : true)) lo = search.branch[i - 1] + 1;
        if (sides_symmetric && i == k / 2) lo = search.branch[0] + 1;
        for (int v = lo; v < n; ++v) {
            if (search.used[v]) continue;
            if (static_cast<int>(adj[v].size()) < pattern_degree[i]) continue;
            search.branch[i] = v;
            search.used[v] = 1;
            if (choose(i + 1)) return true;
            search.used[v] = 0;
        }
        return false;
    };
    return choose(0);
}

}  // namespace

bool is_planar_graph(const Structure& s, int sym) {
    const int n = s.size();
    if (n <= 4) return true;
    std::vector<std::vector<int>> adj(n);
    int edges = 0;
    for (const auto& t : s.tuples(sym))
        if (t[0] != t[1]) {
            adj[t[0]].push_back(t[1]);
            ++edges;
        }
    edges /= 2;
    if (n >= 3 && edges > 3 * n - 6) return false;

    std::vector<std::pair<int, int>> k5_edges;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) k5_edges.emplace_back(i, j);
    if (has_subdivision(adj, n, k5_edges, std::vector<int>(5, 4), false)) return false;

    std::vector<std::pair<int, int>> k33_edges;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k33_edges.emplace_back(i, 3 + j);
    if (has_subdivision(adj, n, k33_edges, std::vector<int>(6, 3), true)) return false;
    return true;
}

MembershipResult contains_report(const ClassSpec& k, const Structure& s) {
    if (s.sig() != k.sig())
        throw std::invalid_argument("contains: structure signature " + s.sig().to_string() +
                                    " does not match class " + k.label() + " over " +
                                    k.sig().to_string());
    switch (k.kind()) {
        case ClassSpec::Kind::Builtin:
            return builtin_contains(k, s);
        case ClassSpec::Kind::ForbiddenInduced:
            for (const auto& p : k.forbidden_patterns())
                if (p.size() <= s.size() && embeds(p, s))
                    return fail("contains forbidden pattern " + p.to_string());
            return ok();
        case ClassSpec::Kind::Lex: {
            auto d = decompose_lex(s, k.left(), k.right());
            if (!d.accepted) return fail(d.reason);
            return ok();
        }
        case ClassSpec::Kind::Full: {
            auto d = decompose_full(s, k.left(), k.right(), default_full_host_bound(s));
            if (d.verdict == FullDecomposition::Verdict::Accept) return ok();
            return fail(d.reason);
        }
        case ClassSpec::Kind::Super: {
            auto parts = split_superposition(s, k);
            auto r0 = contains_report(k.left(), parts.first);
            if (!r0.member) return fail("left reduct: " + r0.reason);
            auto r1 = contains_report(k.right(), parts.second);
            if (!r1.member) return fail("right reduct: " + r1.reason);
            return ok();
        }
    }
    throw std::logic_error("contains: unknown kind");
}

bool contains(const ClassSpec& k, const Structure& s) { return contains_report(k, s).member; }

}  // namespace relkit
