#pragma once

#include <memory>
#include <string>
#include <vector>

#include "../cyclotomic.hpp"

namespace qrucible::dsl {

struct Span {
    int line = 1;
    int col = 1;

    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

enum class Kind {
    Num,  // nonnegative rational literal
    Sym,  // q, z, t, w, w2, inf, or a bound name
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // kids: base, exponent
    Call, // head(g1; g2; ...), each group a comma list
    List, // [a, b, ...]
    Sum,  // sum(name = lo..hi; body), kids: lo, hi, body
    CT,   // ct{body}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Kind kind = Kind::Num;
    Span span;
    BigRat num;
    std::string name;
    std::vector<ExprPtr> kids;
    std::vector<std::vector<ExprPtr>> groups;
};

inline ExprPtr make_num(BigRat v, Span s = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Num;
    e->num = std::move(v);
    e->num.canonicalize();
    e->span = s;
    return e;
}
inline ExprPtr make_sym(std::string n, Span s = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Sym;
    e->name = std::move(n);
    e->span = s;
    return e;
}
inline ExprPtr make_node(Kind k, std::vector<ExprPtr> kids, Span s = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = std::move(kids);
    e->span = s;
    return e;
}
inline ExprPtr make_call(std::string head, std::vector<std::vector<ExprPtr>> groups, Span s = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Call;
    e->name = std::move(head);
    e->groups = std::move(groups);
    e->span = s;
    return e;
}
inline ExprPtr make_sum(std::string var, ExprPtr lo, ExprPtr hi, ExprPtr body, Span s = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Sum;
    e->name = std::move(var);
    e->kids = {std::move(lo), std::move(hi), std::move(body)};
    e->span = s;
    return e;
}

/// Equality of trees, ignoring source spans.
inline bool same_tree(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.num != b.num) return false;
    if (a.kids.size() != b.kids.size() || a.groups.size() != b.groups.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!same_tree(*a.kids[i], *b.kids[i])) return false;
    for (std::size_t g = 0; g < a.groups.size(); ++g) {
        if (a.groups[g].size() != b.groups[g].size()) return false;
        for (std::size_t i = 0; i < a.groups[g].size(); ++i)
            if (!same_tree(*a.groups[g][i], *b.groups[g][i])) return false;
    }
    return true;
}

} // namespace qrucible::dsl
