#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relkit/structure.hpp"

namespace relkit {

/// A variable of an interpretation formula: coordinate `coord` of the
/// `arg`-th argument block.
struct VarRef {
    int arg = 0;
    int coord = 0;
    bool operator==(const VarRef&) const = default;
};

/// Quantifier-free formulas over a target signature: relational atoms,
/// equalities, block-range equalities (expanded at evaluation time) and
/// boolean connectives.
class QfFormula {
public:
    enum class Kind { True, False, Atom, Eq, RangeEq, Not, And, Or };

    static QfFormula truth(bool value);
    static QfFormula atom(std::string symbol, std::vector<VarRef> args);
    static QfFormula eq(VarRef a, VarRef b);
    /// Conjunction of coordinate equalities x_{arg0,offset+i} = x_{arg1,offset+i}.
    static QfFormula range_eq(int arg0, int arg1, int offset, int len);
    static QfFormula negate(QfFormula f);
    static QfFormula conj(std::vector<QfFormula> fs);
    static QfFormula disj(std::vector<QfFormula> fs);

    Kind kind() const { return kind_; }
    const std::string& symbol() const { return symbol_; }
    const std::vector<VarRef>& args() const { return args_; }
    int range_arg0() const { return range_[0]; }
    int range_arg1() const { return range_[1]; }
    int range_offset() const { return range_[2]; }
    int range_len() const { return range_[3]; }
    const std::vector<QfFormula>& children() const { return children_; }

    /// Largest argument index mentioned, -1 when none.
    int max_arg() const;
    /// Largest coordinate mentioned, -1 when none.
    int max_coord() const;

    QfFormula remap(const std::function<VarRef(const VarRef&)>& fn) const;

private:
    Kind kind_ = Kind::True;
    std::string symbol_;
    std::vector<VarRef> args_;
    int range_[4] = {0, 0, 0, 0};
    std::vector<QfFormula> children_;
};

/// Standard quantifier-free satisfaction; `blocks[arg]` is the tuple of
/// target elements assigned to the arg-th block. Throws on unassigned
/// variables or unknown symbols.
bool eval_qf(const QfFormula& phi, const Structure& target,
             const std::vector<std::vector<int>>& blocks);

std::string formula_to_string(const QfFormula& f);
QfFormula parse_formula(const std::string& text);  // inverse of formula_to_string

}  // namespace relkit
