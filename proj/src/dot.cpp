#include "relkit/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace relkit {

namespace {

// E-style symbols (edge/equivalence conventions) collapse symmetric pairs to
// one undirected edge; everything else renders as arcs.
bool collapses(const Structure& s, int sym) {
    const auto& name = s.sig().symbol(sym).name;
    if (name.empty() || name[0] != 'E') return false;
    for (const auto& t : s.tuples(sym))
        if (t[0] == t[1] || !s.holds2(sym, t[1], t[0])) return false;
    return true;
}

}  // namespace

std::string export_dot(const Structure& s, const std::string& name) {
    bool all_undirected = true;
    for (int i = 0; i < s.sig().symbol_count(); ++i)
        if (s.sig().arity(i) >= 2 && !s.tuples(i).empty() && !collapses(s, i))
            all_undirected = false;
    std::ostringstream os;
    os << (all_undirected ? "graph " : "digraph ") << name << " {\n";
    for (int v = 0; v < s.size(); ++v) {
        std::string label = std::to_string(v);
        for (int i = 0; i < s.sig().symbol_count(); ++i) {
            if (s.sig().arity(i) != 1) continue;
            if (s.holds(i, {v})) label += ":" + s.sig().symbol(i).name;
        }
        os << "  n" << v << " [label=\"" << label << "\"];\n";
    }
    const char* arrow = all_undirected ? " -- " : " -> ";
    for (int i = 0; i < s.sig().symbol_count(); ++i) {
        const int arity = s.sig().arity(i);
        const auto& symbol = s.sig().symbol(i).name;
        if (arity == 1) continue;
        if (arity == 2) {
            if (collapses(s, i)) {
                std::set<std::pair<int, int>> rendered;
                for (const auto& t : s.tuples(i)) {
                    auto key = std::minmax(t[0], t[1]);
                    if (!rendered.insert({key.first, key.second}).second) continue;
                    os << "  n" << key.first << arrow << 'n' << key.second << " [label=\""
                       << symbol << '"' << (all_undirected ? "" : ", dir=none") << "];\n";
                }
            } else {
                for (const auto& t : s.tuples(i))
                    os << "  n" << t[0] << arrow << 'n' << t[1] << " [label=\"" << symbol
                       << "\"];\n";
            }
            continue;
        }
        // Arity >= 3: a factor node per tuple, edges labelled by position.
        int factor = 0;
        for (const auto& t : s.tuples(i)) {
            std::string fnode = "f_" + symbol + "_" + std::to_string(factor++);
            os << "  " << fnode << " [shape=box, label=\"" << symbol << "\"];\n";
            for (size_t p = 0; p < t.size(); ++p)
                os << "  " << fnode << arrow << 'n' << t[p] << " [label=\"" << p
                   << '"' << (all_undirected ? "" : ", dir=none") << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace relkit
