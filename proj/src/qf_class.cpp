#include "relkit/qf_class.hpp"

#include <algorithm>
#include <stdexcept>

namespace relkit {

namespace {

// Does the map (pivot -> cand, identity on base) give an isomorphism of the
// induced substructures on {pivot} u base and {cand} u base?
bool same_qf_type(const Structure& s, const std::vector<int>& base, int pivot, int cand) {
    std::vector<int> dom = base;
    dom.push_back(pivot);
    // Tuples over dom, compared against the image under pivot -> cand.
    for (int sym = 0; sym < s.sig().symbol_count(); ++sym) {
        const int arity = s.sig().arity(sym);
        std::vector<int> idx(arity, 0);
        Tuple t(arity), image(arity);
        while (true) {
            for (int j = 0; j < arity; ++j) {
                t[j] = dom[idx[j]];
                image[j] = t[j] == pivot ? cand : t[j];
            }
            if (s.holds(sym, t) != s.holds(sym, image)) return false;
            int j = arity - 1;
            while (j >= 0 && ++idx[j] == static_cast<int>(dom.size())) idx[j--] = 0;
            if (j < 0) break;
        }
    }
    return true;
}

}  // namespace

std::vector<char> qf_class_mask(const QfClassSelector& sel) {
    const auto& s = sel.ambient;
    if (sel.pivot < 0 || sel.pivot >= s.size())
        throw std::out_of_range("qf_class: pivot out of range");
    std::vector<char> in_base(s.size(), 0);
    for (int e : sel.base) {
        if (e < 0 || e >= s.size()) throw std::out_of_range("qf_class: base element out of range");
        in_base[e] = 1;
    }
    if (in_base[sel.pivot]) throw std::invalid_argument("qf_class: pivot in base");

    std::vector<char> mask(s.size(), 0);
    for (int cand = 0; cand < s.size(); ++cand) {
        if (in_base[cand]) continue;  // the map would not be injective
        if (cand == sel.pivot || same_qf_type(s, sel.base, sel.pivot, cand)) mask[cand] = 1;
    }
    return mask;
}

std::vector<int> qf_class(const QfClassSelector& sel) {
    auto mask = qf_class_mask(sel);
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(mask.size()); ++v)
        if (mask[v]) out.push_back(v);
    return out;
}

}  // namespace relkit
