#pragma once

#include <string>

#include "json.hpp"
#include "relkit/configuration.hpp"
#include "relkit/structure.hpp"

namespace relkit {

using nlohmann::json;

json structure_to_json(const Structure& s);
Structure structure_from_json(const json& j);

json signature_to_json(const Signature& sig);
Signature signature_from_json(const json& j);

/// Configuration witnesses as structured records; formulas in prefix
/// notation.
json witness_to_json(const ConfigWitness& w);
ConfigWitness witness_from_json(const json& j);

}  // namespace relkit
