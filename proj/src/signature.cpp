#include "relkit/signature.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace relkit {

Signature::Signature(std::vector<SymbolDecl> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.name.empty())
            throw std::invalid_argument("signature: empty symbol name");
        if (s.arity < 1)
            throw std::invalid_argument("signature: arity must be >= 1 for " + s.name);
        if (!seen.insert(s.name).second)
            throw std::invalid_argument("signature: duplicate symbol " + s.name);
    }
}

int Signature::index_of(std::string_view name) const {
    for (int i = 0; i < symbol_count(); ++i)
        if (symbols_[i].name == name) return i;
    return -1;
}

std::string Signature::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < symbol_count(); ++i) {
        if (i) os << ", ";
        os << symbols_[i].name << '/' << symbols_[i].arity;
    }
    os << ']';
    return os.str();
}

CombinedSignature combine_signatures(const Signature& sig0, const Signature& sig1,
                                     const std::vector<SymbolDecl>& extra) {
    CombinedSignature out;
    std::set<std::string> taken;
    std::vector<SymbolDecl> symbols;

    auto add = [&](const SymbolDecl& s, int slot) {
        std::string name = s.name;
        if (taken.count(name)) {
            name = s.name + "_" + std::to_string(slot);
            for (int k = 0; taken.count(name); ++k)
                name = s.name + "_" + std::to_string(slot) + "_" + std::to_string(k);
        }
        if (name != s.name) out.renames.push_back({slot, s.name, name});
        taken.insert(name);
        symbols.push_back({name, s.arity});
        return static_cast<int>(symbols.size()) - 1;
    };

    for (const auto& s : extra) out.extra_index.push_back(add(s, 2));
    for (const auto& s : sig0.symbols()) out.left_index.push_back(add(s, 0));
    for (const auto& s : sig1.symbols()) out.right_index.push_back(add(s, 1));
    out.sig = Signature(std::move(symbols));
    return out;
}

}  // namespace relkit
