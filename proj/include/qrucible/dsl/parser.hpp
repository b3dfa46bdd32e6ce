#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "lexer.hpp"

namespace qrucible::dsl {

/// Recursive-descent parser for the expression grammar (docs/grammar.ebnf).
///
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (peek_punct("+") || peek_punct("-")) {
            Token op = next();
            ExprPtr rhs = parse_term();
            lhs = make_node(op.text == "+" ? Kind::Add : Kind::Sub, {lhs, rhs}, op.span);
        }
        return lhs;
    }

    const Token& peek() const { return toks_[pos_]; }
    bool peek_punct(std::string_view p) const { return peek().type == Tok::Punct && peek().text == p; }
    bool peek_ident(std::string_view p) const { return peek().type == Tok::Ident && peek().text == p; }
    bool at_end() const { return peek().type == Tok::End; }

    Token next() {
        Token t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    Token expect_punct(std::string_view p) {
        if (!peek_punct(p)) fail("expected '" + std::string(p) + "'");
        return next();
    }
    Token expect(Tok type, std::string_view what) {
        if (peek().type != type) fail("expected " + std::string(what));
        return next();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
        raise(ErrorKind::SyntaxError, msg + ", got " + got + " at " + t.span.str());
    }

private:
    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (peek_punct("*") || peek_punct("/")) {
            Token op = next();
            ExprPtr rhs = parse_unary();
            lhs = make_node(op.text == "*" ? Kind::Mul : Kind::Div, {lhs, rhs}, op.span);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek_punct("-")) {
            Token op = next();
            return make_node(Kind::Neg, {parse_unary()}, op.span);
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (peek_punct("^")) {
            Token op = next();
            return make_node(Kind::Pow, {base, parse_unary()}, op.span);
        }
        return base;
    }

    std::vector<ExprPtr> parse_list_items(std::string_view close) {
        std::vector<ExprPtr> items;
        if (peek_punct(close)) return items;
        items.push_back(parse_expr());
        while (peek_punct(",")) {
            next();
            items.push_back(parse_expr());
        }
        return items;
    }

    ExprPtr parse_atom() {
        const Token t = peek();
        switch (t.type) {
        case Tok::Int: {
            next();
            return make_num(BigRat(mpz_class(t.text)), t.span);
        }
        case Tok::Rat: {
            next();
            auto slash = t.text.find('/');
            BigRat v(mpz_class(t.text.substr(0, slash)), mpz_class(t.text.substr(slash + 1)));
            if (sgn(v.get_den()) == 0) raise(ErrorKind::SyntaxError, "zero denominator in literal at " + t.span.str());
            return make_num(v, t.span);
        }
        case Tok::Ident: {
            next();
            if (t.text == "ct" && peek_punct("{")) {
                next();
                ExprPtr body = parse_expr();
                expect_punct("}");
                return make_node(Kind::CT, {body}, t.span);
            }
            if (t.text == "sum" && peek_punct("(")) {
                next();
                Token var = expect(Tok::Ident, "summation variable");
                expect_punct("=");
                ExprPtr lo = parse_expr();
                expect_punct("..");
                ExprPtr hi = parse_expr();
                expect_punct(";");
                ExprPtr body = parse_expr();
                expect_punct(")");
                return make_sum(var.text, lo, hi, body, t.span);
            }
            if (peek_punct("(")) {
                next();
                std::vector<std::vector<ExprPtr>> groups;
                if (!peek_punct(")")) {
                    groups.push_back(parse_list_items(")"));
                    while (peek_punct(";")) {
                        next();
                        groups.push_back(parse_list_items(")"));
                    }
                }
                expect_punct(")");
                return make_call(t.text, std::move(groups), t.span);
            }
            return make_sym(t.text, t.span);
        }
        case Tok::Punct:
            if (t.text == "(") {
                next();
                ExprPtr e = parse_expr();
                expect_punct(")");
                return e;
            }
            if (t.text == "[") {
                next();
                auto items = parse_list_items("]");
                expect_punct("]");
                return make_node(Kind::List, std::move(items), t.span);
            }
            break;
        default: break;
        }
        fail("expected an expression");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

/// Parse a complete expression.
inline ExprPtr parse(std::string_view text) {
    Parser p(text);
    ExprPtr e = p.parse_expr();
    if (!p.at_end()) p.fail("unexpected trailing input");
    return e;
}

} // namespace qrucible::dsl
