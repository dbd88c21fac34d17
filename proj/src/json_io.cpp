#include "relkit/json_io.hpp"

#include "relkit/formula.hpp"

namespace relkit {

json signature_to_json(const Signature& sig) {
    json out = json::array();
    for (const auto& s : sig.symbols()) out.push_back(json::array({s.name, s.arity}));
    return out;
}

Signature signature_from_json(const json& j) {
    std::vector<SymbolDecl> symbols;
    for (const auto& item : j) symbols.push_back({item.at(0).get<std::string>(), item.at(1).get<int>()});
    return Signature(std::move(symbols));
}

json structure_to_json(const Structure& s) {
    json relations = json::object();
    for (int i = 0; i < s.sig().symbol_count(); ++i) {
        json rel = json::array();
        for (const auto& t : s.tuples(i)) rel.push_back(t);
        relations[s.sig().symbol(i).name] = std::move(rel);
    }
    return json{{"signature", signature_to_json(s.sig())},
                {"size", s.size()},
                {"relations", std::move(relations)}};
}

Structure structure_from_json(const json& j) {
    Signature sig = signature_from_json(j.at("signature"));
    int size = j.at("size").get<int>();
    std::vector<std::vector<Tuple>> rels(sig.symbol_count());
    if (j.contains("relations")) {
        for (const auto& [name, tuples] : j.at("relations").items()) {
            int sym = sig.index_of(name);
            if (sym < 0) throw std::invalid_argument("structure_from_json: unknown symbol " + name);
            for (const auto& t : tuples) rels[sym].push_back(t.get<Tuple>());
        }
    }
    return Structure(std::move(sig), size, std::move(rels));
}

json witness_to_json(const ConfigWitness& w) {
    json formulas = json::object();
    for (const auto& [name, phi] : w.interp.formulas) formulas[name] = formula_to_string(phi);
    json entries = json::array();
    for (const auto& e : w.entries)
        entries.push_back(json{{"index", structure_to_json(e.index)},
                               {"target", structure_to_json(e.target)},
                               {"map", e.map}});
    return json{{"interpretation",
                 json{{"index_signature", signature_to_json(w.interp.index_sig)},
                      {"target_signature", signature_to_json(w.interp.target_sig)},
                      {"width", w.interp.width},
                      {"formulas", std::move(formulas)}}},
                {"entries", std::move(entries)}};
}

ConfigWitness witness_from_json(const json& j) {
    ConfigWitness w;
    const auto& interp = j.at("interpretation");
    w.interp.index_sig = signature_from_json(interp.at("index_signature"));
    w.interp.target_sig = signature_from_json(interp.at("target_signature"));
    w.interp.width = interp.at("width").get<int>();
    for (const auto& [name, text] : interp.at("formulas").items())
        w.interp.formulas.emplace(name, parse_formula(text.get<std::string>()));
    for (const auto& e : j.at("entries")) {
        ConfigEntry entry;
        entry.index = structure_from_json(e.at("index"));
        entry.target = structure_from_json(e.at("target"));
        entry.map = e.at("map").get<std::vector<std::vector<int>>>();
        w.entries.push_back(std::move(entry));
    }
    return w;
}

}  // namespace relkit
