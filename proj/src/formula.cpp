#include "relkit/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace relkit {

QfFormula QfFormula::truth(bool value) {
    QfFormula f;
    f.kind_ = value ? Kind::True : Kind::False;
    return f;
}

QfFormula QfFormula::atom(std::string symbol, std::vector<VarRef> args) {
    QfFormula f;
    f.kind_ = Kind::Atom;
    f.symbol_ = std::move(symbol);
    f.args_ = std::move(args);
    return f;
}

QfFormula QfFormula::eq(VarRef a, VarRef b) {
    QfFormula f;
    f.kind_ = Kind::Eq;
    f.args_ = {a, b};
    return f;
}

QfFormula QfFormula::range_eq(int arg0, int arg1, int offset, int len) {
    QfFormula f;
    f.kind_ = Kind::RangeEq;
    f.range_[0] = arg0;
    f.range_[1] = arg1;
    f.range_[2] = offset;
    f.range_[3] = len;
    return f;
}

QfFormula QfFormula::negate(QfFormula inner) {
    QfFormula f;
    f.kind_ = Kind::Not;
    f.children_.push_back(std::move(inner));
    return f;
}

QfFormula QfFormula::conj(std::vector<QfFormula> fs) {
    QfFormula f;
    f.kind_ = Kind::And;
    f.children_ = std::move(fs);
    return f;
}

QfFormula QfFormula::disj(std::vector<QfFormula> fs) {
    QfFormula f;
    f.kind_ = Kind::Or;
    f.children_ = std::move(fs);
    return f;
}

int QfFormula::max_arg() const {
    int best = -1;
    if (kind_ == Kind::Atom || kind_ == Kind::Eq)
        for (const auto& v : args_) best = std::max(best, v.arg);
    if (kind_ == Kind::RangeEq) best = std::max(range_[0], range_[1]);
    for (const auto& c : children_) best = std::max(best, c.max_arg());
    return best;
}

int QfFormula::max_coord() const {
    int best = -1;
    if (kind_ == Kind::Atom || kind_ == Kind::Eq)
        for (const auto& v : args_) best = std::max(best, v.coord);
    if (kind_ == Kind::RangeEq) best = std::max(best, range_[2] + range_[3] - 1);
    for (const auto& c : children_) best = std::max(best, c.max_coord());
    return best;
}

QfFormula QfFormula::remap(const std::function<VarRef(const VarRef&)>& fn) const {
    QfFormula out = *this;
    if (kind_ == Kind::Atom || kind_ == Kind::Eq)
        for (auto& v : out.args_) v = fn(v);
    if (kind_ == Kind::RangeEq) {
        // Expand to explicit equalities so the remap can move coordinates
        // freely.
        std::vector<QfFormula> eqs;
        for (int i = 0; i < range_[3]; ++i)
            eqs.push_back(QfFormula::eq(fn({range_[0], range_[2] + i}), fn({range_[1], range_[2] + i})));
        return QfFormula::conj(std::move(eqs));
    }
    for (auto& c : out.children_) c = c.remap(fn);
    return out;
}

bool eval_qf(const QfFormula& phi, const Structure& target,
             const std::vector<std::vector<int>>& blocks) {
    auto lookup = [&](const VarRef& v) {
        if (v.arg < 0 || v.arg >= static_cast<int>(blocks.size()) || v.coord < 0 ||
            v.coord >= static_cast<int>(blocks[v.arg].size()))
            throw std::out_of_range("eval_qf: unassigned variable (" + std::to_string(v.arg) + "," +
                                    std::to_string(v.coord) + ")");
        return blocks[v.arg][v.coord];
    };
    switch (phi.kind()) {
        case QfFormula::Kind::True: return true;
        case QfFormula::Kind::False: return false;
        case QfFormula::Kind::Atom: {
            int sym = target.sig().index_of(phi.symbol());
            if (sym < 0) throw std::invalid_argument("eval_qf: unknown symbol " + phi.symbol());
            Tuple t;
            t.reserve(phi.args().size());
            for (const auto& v : phi.args()) t.push_back(lookup(v));
            if (static_cast<int>(t.size()) != target.sig().arity(sym))
                throw std::invalid_argument("eval_qf: arity mismatch for " + phi.symbol());
            return target.holds(sym, t);
        }
        case QfFormula::Kind::Eq: return lookup(phi.args()[0]) == lookup(phi.args()[1]);
        case QfFormula::Kind::RangeEq: {
            for (int i = 0; i < phi.range_len(); ++i)
                if (lookup({phi.range_arg0(), phi.range_offset() + i}) !=
                    lookup({phi.range_arg1(), phi.range_offset() + i}))
                    return false;
            return true;
        }
        case QfFormula::Kind::Not: return !eval_qf(phi.children()[0], target, blocks);
        case QfFormula::Kind::And:
            for (const auto& c : phi.children())
                if (!eval_qf(c, target, blocks)) return false;
            return true;
        case QfFormula::Kind::Or:
            for (const auto& c : phi.children())
                if (eval_qf(c, target, blocks)) return true;
            return false;
    }
    throw std::logic_error("eval_qf: unknown formula kind");
}

std::string formula_to_string(const QfFormula& f) {
    std::ostringstream os;
    switch (f.kind()) {
        case QfFormula::Kind::True: os << "(true)"; break;
        case QfFormula::Kind::False: os << "(false)"; break;
        case QfFormula::Kind::Atom: {
            os << "(atom " << f.symbol();
            for (const auto& v : f.args()) os << " (v " << v.arg << ' ' << v.coord << ')';
            os << ')';
            break;
        }
        case QfFormula::Kind::Eq: {
            os << "(eq (v " << f.args()[0].arg << ' ' << f.args()[0].coord << ") (v "
               << f.args()[1].arg << ' ' << f.args()[1].coord << "))";
            break;
        }
        case QfFormula::Kind::RangeEq:
            os << "(range-eq " << f.range_arg0() << ' ' << f.range_arg1() << ' ' << f.range_offset()
               << ' ' << f.range_len() << ')';
            break;
        case QfFormula::Kind::Not: os << "(not " << formula_to_string(f.children()[0]) << ')'; break;
        case QfFormula::Kind::And:
        case QfFormula::Kind::Or: {
            os << (f.kind() == QfFormula::Kind::And ? "(and" : "(or");
            for (const auto& c : f.children()) os << ' ' << formula_to_string(c);
            os << ')';
            break;
        }
    }
    return os.str();
}

namespace {

struct SexpParser {
    const std::string& text;
    size_t pos = 0;

    void skip() {
        while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    void expect(char c) {
        skip();
        if (pos >= text.size() || text[pos] != c)
            throw std::invalid_argument("parse_formula: expected '" + std::string(1, c) + "' at " +
                                        std::to_string(pos));
        ++pos;
    }
    std::string token() {
        skip();
        size_t start = pos;
        while (pos < text.size() && !isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos) throw std::invalid_argument("parse_formula: empty token");
        return text.substr(start, pos - start);
    }
    int number() { return std::stoi(token()); }
    bool at_close() {
        skip();
        return pos < text.size() && text[pos] == ')';
    }

    VarRef var() {
        expect('(');
        if (token() != "v") throw std::invalid_argument("parse_formula: expected a variable");
        VarRef v{number(), number()};
        expect(')');
        return v;
    }

    QfFormula formula() {
        expect('(');
        std::string head = token();
        QfFormula out;
        if (head == "true") {
            out = QfFormula::truth(true);
        } else if (head == "false") {
            out = QfFormula::truth(false);
        } else if (head == "atom") {
            std::string sym = token();
            std::vector<VarRef> args;
            while (!at_close()) args.push_back(var());
            out = QfFormula::atom(std::move(sym), std::move(args));
        } else if (head == "eq") {
            VarRef a = var(), b = var();
            out = QfFormula::eq(a, b);
        } else if (head == "range-eq") {
            int a0 = number(), a1 = number(), off = number(), len = number();
            out = QfFormula::range_eq(a0, a1, off, len);
        } else if (head == "not") {
            out = QfFormula::negate(formula());
        } else if (head == "and" || head == "or") {
            std::vector<QfFormula> children;
            while (!at_close()) children.push_back(formula());
            out = head == "and" ? QfFormula::conj(std::move(children))
                                : QfFormula::disj(std::move(children));
        } else {
            throw std::invalid_argument("parse_formula: unknown head " + head);
        }
        expect(')');
        return out;
    }
};

}  // namespace

QfFormula parse_formula(const std::string& text) {
    SexpParser parser{text};
    auto f = parser.formula();
    parser.skip();
    if (parser.pos != text.size())
        throw std::invalid_argument("parse_formula: trailing input");
    return f;
}

}  // namespace relkit
