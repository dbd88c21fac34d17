#include "relkit/dsl.hpp"

#include <cctype>
#include <sstream>

namespace relkit {

namespace {

struct Token {
    enum class Kind { Identifier, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long value = 0;
    int line = 1, column = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, column = 1;
    Token current;

    explicit Lexer(const std::string& text) : src(text) { advance(); }

    void bump(char c) {
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_space() {
        while (pos < src.size()) {
            if (isspace(static_cast<unsigned char>(src[pos]))) {
                bump(src[pos]);
            } else if (src[pos] == '#') {  // comment to end of line
                while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_space();
        current = Token{};
        current.line = line;
        current.column = column;
        if (pos >= src.size()) {
            current.kind = Token::Kind::End;
            return;
        }
        char c = src[pos];
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos < src.size() && (isalnum(static_cast<unsigned char>(src[pos])) ||
                                        src[pos] == '_')) {
                word += src[pos];
                bump(src[pos]);
            }
            current.kind = Token::Kind::Identifier;
            current.text = std::move(word);
            return;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            std::string word;
            while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) {
                v = v * 10 + (src[pos] - '0');
                word += src[pos];
                bump(src[pos]);
            }
            current.kind = Token::Kind::Number;
            current.value = v;
            current.text = std::move(word);
            return;
        }
        current.kind = Token::Kind::Punct;
        current.text = std::string(1, c);
        bump(c);
    }
};

struct Parser {
    Lexer lex;
    const DslEnv& env;

    Parser(const std::string& text, const DslEnv& env_) : lex(text), env(env_) {}

    [[noreturn]] void fail(const std::string& message) {
        throw DslError(message, lex.current.line, lex.current.column);
    }

    bool at_ident(const char* word) {
        return lex.current.kind == Token::Kind::Identifier && lex.current.text == word;
    }
    bool at_punct(char c) {
        return lex.current.kind == Token::Kind::Punct && lex.current.text[0] == c;
    }
    void expect_punct(char c) {
        if (!at_punct(c)) fail(std::string("expected '") + c + "'");
        lex.advance();
    }
    void expect_keyword(const char* word) {
        if (!at_ident(word)) fail(std::string("expected '") + word + "'");
        lex.advance();
    }
    std::string identifier(const char* what) {
        if (lex.current.kind != Token::Kind::Identifier) fail(std::string("expected ") + what);
        auto word = lex.current.text;
        lex.advance();
        return word;
    }
    int number(const char* what) {
        if (lex.current.kind != Token::Kind::Number) fail(std::string("expected ") + what);
        long long v = lex.current.value;
        lex.advance();
        return static_cast<int>(v);
    }

    Signature signature() {
        expect_punct('[');
        std::vector<SymbolDecl> symbols;
        if (!at_punct(']')) {
            while (true) {
                std::string name = identifier("symbol name");
                expect_punct('/');
                int arity = number("symbol arity");
                symbols.push_back({std::move(name), arity});
                if (at_punct(',')) {
                    lex.advance();
                    continue;
                }
                break;
            }
        }
        expect_punct(']');
        try {
            return Signature(std::move(symbols));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    Structure structure_literal() {
        expect_keyword("over");
        Signature sig = signature();
        expect_keyword("size");
        int size = number("structure size");
        std::vector<std::vector<Tuple>> rels(sig.symbol_count());
        if (at_punct('{')) {
            lex.advance();
            while (!at_punct('}')) {
                auto pos_line = lex.current.line, pos_col = lex.current.column;
                std::string name = identifier("relation symbol");
                int sym = sig.index_of(name);
                if (sym < 0) throw DslError("unknown relation symbol " + name, pos_line, pos_col);
                expect_punct(':');
                while (at_punct('(')) {
                    lex.advance();
                    Tuple t;
                    while (!at_punct(')')) {
                        t.push_back(number("tuple entry"));
                        if (at_punct(',')) lex.advance();
                    }
                    expect_punct(')');
                    if (static_cast<int>(t.size()) != sig.arity(sym))
                        throw DslError("arity mismatch for " + name, pos_line, pos_col);
                    for (int e : t)
                        if (e < 0 || e >= size)
                            throw DslError("tuple entry out of range for " + name, pos_line,
                                           pos_col);
                    rels[sym].push_back(std::move(t));
                }
                expect_punct(';');
            }
            expect_punct('}');
        }
        return Structure(std::move(sig), size, std::move(rels));
    }

    ClassSpec class_expr() {
        if (at_ident("builtin")) {
            lex.advance();
            auto pos_line = lex.current.line, pos_col = lex.current.column;
            std::string name = identifier("builtin class name");
            auto kind = builtin_from_name(name);
            if (!kind) throw DslError("unknown builtin class " + name, pos_line, pos_col);
            int arity = 2;
            if (at_punct('(')) {
                lex.advance();
                arity = number("hypergraph arity");
                expect_punct(')');
            }
            return ClassSpec::builtin(*kind, arity);
        }
        if (at_ident("forbidden")) {
            lex.advance();
            expect_punct('{');
            std::vector<Structure> patterns;
            while (!at_punct('}')) patterns.push_back(structure_literal());
            expect_punct('}');
            expect_keyword("over");
            Signature sig = signature();
            try {
                return ClassSpec::forbidden(std::move(sig), std::move(patterns));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
        if (at_ident("lex") || at_ident("full") || at_ident("super")) {
            std::string op = identifier("product");
            expect_punct('(');
            ClassSpec left = class_expr();
            expect_punct(',');
            ClassSpec right = class_expr();
            expect_punct(')');
            if (op == "lex") return ClassSpec::lex(std::move(left), std::move(right));
            if (op == "full") return ClassSpec::full(std::move(left), std::move(right));
            return ClassSpec::super(std::move(left), std::move(right));
        }
        auto pos_line = lex.current.line, pos_col = lex.current.column;
        std::string name = identifier("class expression");
        auto it = env.classes.find(name);
        if (it == env.classes.end())
            throw DslError("unknown class name " + name, pos_line, pos_col);
        return it->second;
    }

    DslValue value() {
        if (at_ident("over")) return structure_literal();
        if (lex.current.kind == Token::Kind::Identifier) {
            auto it = env.structures.find(lex.current.text);
            if (it != env.structures.end() && !env.classes.count(lex.current.text)) {
                lex.advance();
                return it->second;
            }
        }
        return class_expr();
    }

    void expect_end() {
        if (lex.current.kind != Token::Kind::End) fail("trailing input");
    }
};

}  // namespace

DslValue parse_dsl(const std::string& text, const DslEnv& env) {
    Parser parser(text, env);
    auto v = parser.value();
    parser.expect_end();
    return v;
}

Structure parse_structure(const std::string& text, const DslEnv& env) {
    auto v = parse_dsl(text, env);
    if (!std::holds_alternative<Structure>(v))
        throw DslError("expected a structure", 1, 1);
    return std::get<Structure>(v);
}

ClassSpec parse_class(const std::string& text, const DslEnv& env) {
    auto v = parse_dsl(text, env);
    if (!std::holds_alternative<ClassSpec>(v))
        throw DslError("expected a class expression", 1, 1);
    return std::get<ClassSpec>(v);
}

DslEnv parse_dsl_file(const std::string& text) {
    DslEnv env;
    Parser parser(text, env);
    while (parser.lex.current.kind != Token::Kind::End) {
        if (parser.at_ident("structure")) {
            parser.lex.advance();
            std::string name = parser.identifier("structure name");
            parser.expect_punct('=');
            env.structures.emplace(name, parser.structure_literal());
        } else if (parser.at_ident("class")) {
            parser.lex.advance();
            std::string name = parser.identifier("class name");
            parser.expect_punct('=');
            env.classes.emplace(name, parser.class_expr());
        } else {
            parser.fail("expected 'structure' or 'class'");
        }
    }
    return env;
}

std::string print_signature(const Signature& sig) {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < sig.symbol_count(); ++i) {
        if (i) os << ", ";
        os << sig.symbol(i).name << '/' << sig.symbol(i).arity;
    }
    os << ']';
    return os.str();
}

std::string print_structure(const Structure& s) {
    std::ostringstream os;
    os << "over " << print_signature(s.sig()) << " size " << s.size();
    if (s.tuple_count() > 0) {
        os << " {";
        for (int i = 0; i < s.sig().symbol_count(); ++i) {
            if (s.tuples(i).empty()) continue;
            os << ' ' << s.sig().symbol(i).name << ':';
            for (const auto& t : s.tuples(i)) {
                os << " (";
                for (size_t j = 0; j < t.size(); ++j) {
                    if (j) os << ',';
                    os << t[j];
                }
                os << ')';
            }
            os << ';';
        }
        os << " }";
    }
    return os.str();
}

std::string print_class(const ClassSpec& k) {
    switch (k.kind()) {
        case ClassSpec::Kind::Builtin: {
            std::string out = std::string("builtin ") + builtin_name(k.builtin_kind());
            if (k.builtin_kind() == BuiltinClass::Hypergraphs)
                out += "(" + std::to_string(k.hyper_arity()) + ")";
            return out;
        }
        case ClassSpec::Kind::ForbiddenInduced: {
            std::ostringstream os;
            os << "forbidden {";
            for (const auto& p : k.forbidden_patterns()) os << ' ' << print_structure(p);
            os << " } over " << print_signature(k.sig());
            return os.str();
        }
        case ClassSpec::Kind::Lex:
            return "lex(" + print_class(k.left()) + ", " + print_class(k.right()) + ")";
        case ClassSpec::Kind::Full:
            return "full(" + print_class(k.left()) + ", " + print_class(k.right()) + ")";
        case ClassSpec::Kind::Super:
            return "super(" + print_class(k.left()) + ", " + print_class(k.right()) + ")";
    }
    return "";
}

}  // namespace relkit
