#include "relkit/structure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace relkit {

Structure::Structure() : Structure(Signature{}, 0) {}

Structure::Structure(Signature sig, int size)
    : Structure(std::move(sig), size, {}) {}

Structure::Structure(Signature sig, int size, std::vector<std::vector<Tuple>> relations) {
    if (size < 0) throw std::invalid_argument("structure: negative size");
    auto impl = std::make_shared<Impl>();
    relations.resize(sig.symbol_count());
    for (auto& rel : relations) {
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    impl->sig = std::move(sig);
    impl->size = size;
    impl->relations = std::move(relations);
    impl_ = std::move(impl);
}

bool Structure::holds(int sym, const Tuple& t) const {
    const auto& rel = impl_->relations[sym];
    return std::binary_search(rel.begin(), rel.end(), t);
}

bool Structure::holds2(int sym, int a, int b) const {
    thread_local Tuple t(2);
    t.resize(2);
    t[0] = a;
    t[1] = b;
    return holds(sym, t);
}

int Structure::tuple_count() const {
    int n = 0;
    for (const auto& rel : impl_->relations) n += static_cast<int>(rel.size());
    return n;
}

bool Structure::operator==(const Structure& other) const {
    if (impl_ == other.impl_) return true;
    return impl_->sig == other.impl_->sig && impl_->size == other.impl_->size &&
           impl_->relations == other.impl_->relations;
}

std::string Structure::to_string() const {
    std::ostringstream os;
    os << "over " << sig().to_string() << " size " << size() << " {";
    for (int i = 0; i < sig().symbol_count(); ++i) {
        if (tuples(i).empty()) continue;
        os << ' ' << sig().symbol(i).name << ':';
        for (const auto& t : tuples(i)) {
            os << '(';
            for (size_t j = 0; j < t.size(); ++j) {
                if (j) os << ',';
                os << t[j];
            }
            os << ')';
        }
        os << ';';
    }
    os << " }";
    return os.str();
}

StructureBuilder::StructureBuilder(Signature sig, int size)
    : sig_(std::move(sig)), size_(size), relations_(sig_.symbol_count()) {}

StructureBuilder& StructureBuilder::add(int sym, Tuple t) {
    relations_.at(sym).push_back(std::move(t));
    return *this;
}

StructureBuilder& StructureBuilder::add(std::string_view sym, Tuple t) {
    int i = sig_.index_of(sym);
    if (i < 0) throw std::invalid_argument("builder: unknown symbol " + std::string(sym));
    return add(i, std::move(t));
}

StructureBuilder& StructureBuilder::add2(std::string_view sym, int a, int b) {
    return add(sym, Tuple{a, b});
}

StructureBuilder& StructureBuilder::edge(std::string_view sym, int a, int b) {
    add(sym, Tuple{a, b});
    return add(sym, Tuple{b, a});
}

Structure StructureBuilder::build() const { return Structure(sig_, size_, relations_); }

ViolationReport validate_structure(const Structure& s) {
    for (int i = 0; i < s.sig().symbol_count(); ++i) {
        const int arity = s.sig().arity(i);
        for (const auto& t : s.tuples(i)) {
            if (static_cast<int>(t.size()) != arity)
                return {false, "arity mismatch", s.sig().symbol(i).name, t};
            for (int e : t)
                if (e < 0 || e >= s.size())
                    return {false, "entry out of range", s.sig().symbol(i).name, t};
        }
    }
    return {};
}

InducedSubstructure induced_substructure(const Structure& s, const std::vector<int>& subset) {
    std::vector<int> elems = subset;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (int e : elems)
        if (e < 0 || e >= s.size())
            throw std::out_of_range("induced_substructure: element out of range");

    InducedSubstructure out;
    out.old_to_new.assign(s.size(), -1);
    out.new_to_old = elems;
    for (size_t i = 0; i < elems.size(); ++i) out.old_to_new[elems[i]] = static_cast<int>(i);

    std::vector<std::vector<Tuple>> rels(s.sig().symbol_count());
    for (int i = 0; i < s.sig().symbol_count(); ++i) {
        for (const auto& t : s.tuples(i)) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (int e : t) {
                if (out.old_to_new[e] < 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(out.old_to_new[e]);
            }
            if (inside) rels[i].push_back(std::move(mapped));
        }
    }
    out.structure = Structure(s.sig(), static_cast<int>(elems.size()), std::move(rels));
    return out;
}

Structure reduct(const Structure& s, const std::vector<int>& symbols,
                 const std::vector<std::string>* new_names) {
    std::vector<SymbolDecl> decls;
    std::vector<std::vector<Tuple>> rels;
    for (size_t i = 0; i < symbols.size(); ++i) {
        const auto& d = s.sig().symbol(symbols[i]);
        decls.push_back({new_names ? (*new_names)[i] : d.name, d.arity});
        rels.push_back(s.tuples(symbols[i]));
    }
    return Structure(Signature(std::move(decls)), s.size(), std::move(rels));
}

Structure apply_permutation(const Structure& s, const std::vector<int>& perm) {
    std::vector<std::vector<Tuple>> rels(s.sig().symbol_count());
    for (int i = 0; i < s.sig().symbol_count(); ++i) {
        for (const auto& t : s.tuples(i)) {
            Tuple m(t.size());
            for (size_t j = 0; j < t.size(); ++j) m[j] = perm[t[j]];
            rels[i].push_back(std::move(m));
        }
    }
    return Structure(s.sig(), s.size(), std::move(rels));
}

QuotientResult quotient_by_congruence(const Structure& s, const std::vector<int>& partition,
                                      const std::vector<int>& symbols) {
    if (static_cast<int>(partition.size()) != s.size())
        throw std::invalid_argument("quotient: partition size mismatch");

    QuotientResult out;
    // Renumber classes by smallest member.
    std::map<int, int> first_seen;  // block id -> class index
    out.class_of.assign(s.size(), -1);
    for (int e = 0; e < s.size(); ++e) {
        auto [it, fresh] = first_seen.emplace(partition[e], static_cast<int>(first_seen.size()));
        out.class_of[e] = it->second;
        (void)fresh;
    }
    const int classes = static_cast<int>(first_seen.size());

    // Pick a representative per class.
    std::vector<int> rep(classes, -1);
    for (int e = 0; e < s.size(); ++e)
        if (rep[out.class_of[e]] < 0) rep[out.class_of[e]] = e;

    std::vector<SymbolDecl> decls;
    std::vector<std::vector<Tuple>> rels;
    for (int sym : symbols) {
        const int arity = s.sig().arity(sym);
        // Check congruence: value must agree across all classwise-equal tuples.
        std::map<Tuple, std::pair<bool, Tuple>> value;  // class tuple -> (value, witness)
        Tuple t(arity);
        // Iterate all tuples over the universe.
        bool done = s.size() == 0 && arity > 0;
        std::fill(t.begin(), t.end(), 0);
        while (!done) {
            Tuple cls(arity);
            for (int j = 0; j < arity; ++j) cls[j] = out.class_of[t[j]];
            bool v = s.holds(sym, t);
            auto it = value.find(cls);
            if (it == value.end()) {
                value.emplace(cls, std::make_pair(v, t));
            } else if (it->second.first != v) {
                out.congruence = false;
                out.offending_symbol = s.sig().symbol(sym).name;
                out.witness_a = it->second.second;
                out.witness_b = t;
                return out;
            }
            int j = arity - 1;
            while (j >= 0 && ++t[j] == s.size()) t[j--] = 0;
            if (j < 0) done = true;
        }
        const auto& d = s.sig().symbol(sym);
        decls.push_back(d);
        std::vector<Tuple> rel;
        for (const auto& [cls, vw] : value)
            if (vw.first) rel.push_back(cls);
        rels.push_back(std::move(rel));
    }
    out.congruence = true;
    out.quotient = Structure(Signature(std::move(decls)), classes, std::move(rels));
    return out;
}

Signature graph_signature(const std::string& symbol) {
    return Signature({{symbol, 2}});
}

Structure make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                     const std::string& symbol) {
    StructureBuilder b(graph_signature(symbol), n);
    for (auto [x, y] : edges) b.edge(symbol, x, y);
    return b.build();
}

Structure make_digraph(int n, const std::vector<std::pair<int, int>>& arcs,
                       const std::string& symbol) {
    StructureBuilder b(Signature({{symbol, 2}}), n);
    for (auto [x, y] : arcs) b.add2(symbol, x, y);
    return b.build();
}

Structure make_linear_order(int n, const std::string& symbol) {
    StructureBuilder b(Signature({{symbol, 2}}), n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.add2(symbol, i, j);
    return b.build();
}

Structure make_set(int n) { return Structure(Signature{}, n); }

Structure make_equivalence(const std::vector<int>& block_of, const std::string& symbol) {
    const int n = static_cast<int>(block_of.size());
    StructureBuilder b(Signature({{symbol, 2}}), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (block_of[i] == block_of[j]) b.add2(symbol, i, j);
    return b.build();
}

Structure complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return make_graph(n, edges);
}

Structure path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_graph(n, edges);
}

Structure cycle_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return make_graph(n, edges);
}

Structure edgeless_graph(int n) { return make_graph(n, {}); }

Structure complete_bipartite(int a, int b) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return make_graph(a + b, edges);
}

}  // namespace relkit
