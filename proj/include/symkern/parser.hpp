#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "symkern/expr.hpp"
#include "symkern/symbols.hpp"

namespace symkern {

// Expression grammar (normative text format, see docs/grammar.md):
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Integer and decimal literals; decimals are exact rationals (0.5 -> 1/2).
// No implicit multiplication. Reserved names: pi, E, I, oo.

namespace detail {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) return {TokKind::End, "", {start, start}};
        char c = src_[pos_];
        auto single = [&](TokKind k) {
            ++pos_;
            return Token{k, std::string(1, c), {start, pos_}};
        };
        switch (c) {
            case '+': return single(TokKind::Plus);
            case '-': return single(TokKind::Minus);
            case '*': return single(TokKind::Star);
            case '/': return single(TokKind::Slash);
            case '^': return single(TokKind::Caret);
            case '(': return single(TokKind::LParen);
            case ')': return single(TokKind::RParen);
            case ',': return single(TokKind::Comma);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    throw Error(ErrorKind::SyntaxError, "expected digits after decimal point",
                                SourceSpan{start, pos_});
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            return {TokKind::Number, std::string(src_.substr(start, pos_ - start)), {start, pos_}};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {TokKind::Ident, std::string(src_.substr(start, pos_ - start)), {start, pos_}};
        }
        throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'",
                    SourceSpan{start, start + 1});
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

inline bool lookup_function(const std::string& name, FuncName& out) {
    if (name == "sin") out = FuncName::Sin;
    else if (name == "cos") out = FuncName::Cos;
    else if (name == "exp") out = FuncName::Exp;
    else if (name == "log") out = FuncName::Log;
    else if (name == "abs") out = FuncName::Abs;
    else return false;
    return true;
}

class ExprParser {
  public:
    ExprParser(std::string_view src, SymbolTable& table) : lex_(src), table_(table) { advance(); }

    Expr parse_all() {
        Expr e = parse_expr();
        expect(TokKind::End, "end of input");
        return e;
    }

  private:
    void advance() { tok_ = lex_.next(); }

    void expect(TokKind k, const char* what) {
        if (tok_.kind != k)
            throw Error(ErrorKind::SyntaxError,
                        std::string("expected ") + what + ", found '" +
                            (tok_.kind == TokKind::End ? "<end>" : tok_.text) + "'",
                        tok_.span);
        advance();
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (tok_.kind == TokKind::Plus || tok_.kind == TokKind::Minus) {
            bool minus = tok_.kind == TokKind::Minus;
            advance();
            Expr rhs = parse_term();
            e = minus ? sub(std::move(e), std::move(rhs)) : add({std::move(e), std::move(rhs)});
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_unary();
        while (tok_.kind == TokKind::Star || tok_.kind == TokKind::Slash) {
            bool slash = tok_.kind == TokKind::Slash;
            advance();
            Expr rhs = parse_unary();
            e = slash ? div(std::move(e), std::move(rhs)) : mul({std::move(e), std::move(rhs)});
        }
        return e;
    }

    Expr parse_unary() {
        if (tok_.kind == TokKind::Minus) {
            advance();
            Expr e = parse_unary();
            if (e.kind() == ExprKind::Infinity) return infinity(-e.infinity_sign());
            return neg(std::move(e));
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (tok_.kind == TokKind::Caret) {
            advance();
            Expr ex = parse_unary();  // right-associative; binds tighter than unary minus
            return pow(std::move(base), std::move(ex));
        }
        return base;
    }

    Expr parse_atom() {
        if (tok_.kind == TokKind::Number) {
            auto v = BigRational::parse(tok_.text);
            if (!v) throw Error(ErrorKind::SyntaxError, "bad number literal '" + tok_.text + "'", tok_.span);
            advance();
            return constant(*v);
        }
        if (tok_.kind == TokKind::LParen) {
            advance();
            Expr e = parse_expr();
            expect(TokKind::RParen, "')'");
            return e;
        }
        if (tok_.kind == TokKind::Ident) {
            Token name = tok_;
            advance();
            if (tok_.kind == TokKind::LParen) {
                advance();
                std::vector<Expr> args;
                args.push_back(parse_expr());
                while (tok_.kind == TokKind::Comma) {
                    advance();
                    args.push_back(parse_expr());
                }
                expect(TokKind::RParen, "')'");
                FuncName f;
                if (name.text == "sqrt") {
                    if (args.size() != 1)
                        throw Error(ErrorKind::SyntaxError, "sqrt takes one argument", name.span);
                    return sqrt_(std::move(args[0]));
                }
                if (!lookup_function(name.text, f))
                    throw Error(ErrorKind::UnknownFunction, "unknown function '" + name.text + "'",
                                name.span);
                if (args.size() != 1)
                    throw Error(ErrorKind::SyntaxError, name.text + " takes one argument", name.span);
                return func(f, std::move(args[0]));
            }
            if (name.text == "pi") return pi_constant();
            if (name.text == "E") return euler_e();
            if (name.text == "I") return imaginary_unit();
            if (name.text == "oo") return infinity(1);
            return symbol(table_.intern(name.text));
        }
        throw Error(ErrorKind::SyntaxError,
                    std::string("expected a number, name or '(', found '") +
                        (tok_.kind == TokKind::End ? "<end>" : tok_.text) + "'",
                    tok_.span);
    }

    Lexer lex_;
    SymbolTable& table_;
    Token tok_{TokKind::End, "", {}};
};

}  // namespace detail

/// Parses expression text into a canonical Expr, interning new symbols into
/// `table`. Throws SyntaxError (with span) or UnknownFunction.
inline Expr parse(std::string_view text, SymbolTable& table) {
    detail::ExprParser p(text, table);
    return p.parse_all();
}

}  // namespace symkern
