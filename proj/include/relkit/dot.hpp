#pragma once

#include <string>

#include "relkit/structure.hpp"

namespace relkit {

/// Deterministic DOT rendering: binary symbols as edges (symmetric pairs
/// collapsed to undirected ones), unary symbols as node labels, higher-arity
/// tuples as labelled factor nodes.
std::string export_dot(const Structure& s, const std::string& name = "s");

}  // namespace relkit
