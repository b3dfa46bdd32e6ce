#pragma once

#include <string>

#include "ast.hpp"

namespace qrucible::dsl {

namespace detail {

inline int precedence(const Expr& e) {
    switch (e.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
    }
}

inline std::string print_at(const Expr& e, int min_prec);

inline std::string join(const std::vector<ExprPtr>& xs, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += sep;
        s += print_at(*xs[i], 0);
    }
    return s;
}

inline std::string print_at(const Expr& e, int min_prec) {
    std::string s;
    switch (e.kind) {
    case Kind::Num: s = e.num.get_str(); break;
    case Kind::Sym: s = e.name; break;
    case Kind::Neg: s = "-" + print_at(*e.kids[0], 3); break;
    case Kind::Add: s = print_at(*e.kids[0], 1) + " + " + print_at(*e.kids[1], 2); break;
    case Kind::Sub: s = print_at(*e.kids[0], 1) + " - " + print_at(*e.kids[1], 2); break;
    case Kind::Mul: s = print_at(*e.kids[0], 2) + "*" + print_at(*e.kids[1], 3); break;
    case Kind::Div: s = print_at(*e.kids[0], 2) + " / " + print_at(*e.kids[1], 3); break;
    case Kind::Pow: {
        const Expr& b = *e.kids[0];
        const Expr& x = *e.kids[1];
        bool bare_base = b.kind == Kind::Sym || b.kind == Kind::Call || b.kind == Kind::List || b.kind == Kind::CT ||
                         b.kind == Kind::Sum || (b.kind == Kind::Num && sgn(b.num.get_den() - 1) == 0);
        std::string bs = bare_base ? print_at(b, 5) : "(" + print_at(b, 0) + ")";
        bool bare_exp = x.kind == Kind::Sym || (x.kind == Kind::Num && x.num.get_den() == 1);
        s = bs + "^" + (bare_exp ? print_at(x, 5) : "(" + print_at(x, 0) + ")");
        break;
    }
    case Kind::Call: {
        s = e.name + "(";
        for (std::size_t g = 0; g < e.groups.size(); ++g) {
            if (g) s += "; ";
            s += join(e.groups[g], ", ");
        }
        s += ")";
        break;
    }
    case Kind::List: s = "[" + join(e.kids, ", ") + "]"; break;
    case Kind::Sum:
        s = "sum(" + e.name + " = " + print_at(*e.kids[0], 0) + ".." + print_at(*e.kids[1], 0) + "; " + print_at(*e.kids[2], 0) + ")";
        break;
    case Kind::CT: s = "ct{" + print_at(*e.kids[0], 0) + "}"; break;
    }
    if (precedence(e) < min_prec) return "(" + s + ")";
    return s;
}

} // namespace detail

/// Canonical text; parse(print(e)) reproduces e.
inline std::string print(const Expr& e) { return detail::print_at(e, 0); }
inline std::string print(const ExprPtr& e) { return print(*e); }

} // namespace qrucible::dsl
