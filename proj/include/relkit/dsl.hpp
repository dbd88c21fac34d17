#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "relkit/class_spec.hpp"
#include "relkit/structure.hpp"

namespace relkit {

struct DslError : std::runtime_error {
    int line = 0, column = 0;
    DslError(std::string message, int line_, int column_)
        : std::runtime_error(message + " at " + std::to_string(line_) + ":" +
                             std::to_string(column_)),
          line(line_),
          column(column_) {}
};

/// Named structures and classes accumulated while parsing.
struct DslEnv {
    std::map<std::string, Structure> structures;
    std::map<std::string, ClassSpec> classes;
};

/// One parsed top-level item.
using DslValue = std::variant<Structure, ClassSpec>;

/// Parses a single expression: either a structure literal
///   over [E/2] size 3 { E: (0,1) (1,0); }
/// or a class expression
///   builtin graphs | forbidden { ... } over [..] | lex(a, b) | full | super
/// Named references resolve against `env`.
DslValue parse_dsl(const std::string& text, const DslEnv& env = {});

Structure parse_structure(const std::string& text, const DslEnv& env = {});
ClassSpec parse_class(const std::string& text, const DslEnv& env = {});

/// Parses a file of `structure NAME = ...` / `class NAME = ...` definitions.
DslEnv parse_dsl_file(const std::string& text);

/// Canonical printers; parse(print(x)) is structurally equal to x.
std::string print_structure(const Structure& s);
std::string print_class(const ClassSpec& k);
std::string print_signature(const Signature& sig);

}  // namespace relkit
