#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "../ctengine.hpp"
#include "../ortho.hpp"
#include "../qkernel.hpp"
#include "ast.hpp"
#include "printer.hpp"

namespace qrucible::dsl {

/// Result of evaluating an expression: an exact monomial c q^e z^a t^b, or
/// a truncated series in q with polynomial dependence on z and t.
struct Value {
    bool is_mono = true;
    LMonomial m;
    TZSeries s;

    static Value mono(LMonomial x) { return {true, std::move(x), {}}; }
    static Value series(TZSeries x) { return {false, {}, std::move(x)}; }
};

/// Evaluates ASTs in one series context. `tmax` is the t-degree kept; names
/// bound with `bind` shadow the built-in symbols.
class Elaborator {
public:
    Elaborator(const SeriesContext& ctx, int tmax) : ctx_(ctx), tmax_(tmax) {}

    const SeriesContext& context() const { return ctx_; }
    void bind(const std::string& name, Value v) { env_[name] = std::move(v); }
    void bind_expr(const std::string& name, const Expr& e) { bind(name, eval(e)); }

    Value eval(const Expr& e) {
        try {
            return eval_node(e);
        } catch (const Error& err) {
            throw err.at(e.span.str() + " in '" + abbreviate(e) + "'");
        }
    }

    TZSeries eval_series(const Expr& e) { return to_series(eval(e)); }

    TZSeries to_series(const Value& v) const {
        if (!v.is_mono) return v.s;
        if (v.m.t > tmax_) return TZSeries(ctx_, tmax_);
        return TZSeries::monomial(v.m, ctx_, tmax_);
    }

private:
    static std::string abbreviate(const Expr& e) {
        std::string s = print(e);
        if (s.size() > 60) s = s.substr(0, 57) + "...";
        return s;
    }

    static bool is_number(const Value& v) { return v.is_mono && v.m.q == Frac(0) && v.m.z == 0 && v.m.t == 0 && v.m.coeff.is_rational(); }

    static BigRat as_rational(const Value& v, const char* what) {
        if (v.is_mono && v.m.coeff.is_zero()) return 0;
        if (!is_number(v)) raise(ErrorKind::TypeError, std::string(what) + " must be a rational number");
        return v.m.coeff.re();
    }
    static long as_integer(const Value& v, const char* what) {
        BigRat r = as_rational(v, what);
        if (r.get_den() != 1 || !r.get_num().fits_slong_p()) raise(ErrorKind::TypeError, std::string(what) + " must be an integer");
        return r.get_num().get_si();
    }
    static LMonomial as_lmono(const Value& v, const char* what) {
        if (!v.is_mono) raise(ErrorKind::TypeError, std::string(what) + " must be a monomial");
        return v.m;
    }
    static Monomial as_scalar(const Value& v, const char* what) {
        LMonomial m = as_lmono(v, what);
        if (!m.is_scalar()) raise(ErrorKind::TypeError, std::string(what) + " must not involve z or t");
        return m.as_monomial();
    }

    Value add(Value a, const Value& b, bool negate) {
        if (a.is_mono && b.is_mono && a.m.q == b.m.q && a.m.z == b.m.z && a.m.t == b.m.t) {
            a.m.coeff = negate ? a.m.coeff - b.m.coeff : a.m.coeff + b.m.coeff;
            return a;
        }
        if (a.is_mono && a.m.is_zero()) return negate ? neg(b) : b;
        if (b.is_mono && b.m.is_zero()) return a;
        TZSeries x = to_series(a);
        TZSeries y = to_series(b);
        return Value::series(negate ? x - y : x + y);
    }

    static Value neg(const Value& a) {
        if (a.is_mono) return Value::mono(-a.m);
        return Value::series(-a.s);
    }

    Value mul(const Value& a, const Value& b) {
        if (a.is_mono && b.is_mono) return Value::mono(a.m * b.m);
        if (a.is_mono || b.is_mono) {
            const LMonomial& m = a.is_mono ? a.m : b.m;
            TZSeries s = a.is_mono ? b.s : a.s;
            if (m.t < 0) raise(ErrorKind::NotInvertible, "negative power of t");
            s.mul_monomial(m);
            return Value::series(std::move(s));
        }
        return Value::series(a.s * b.s);
    }

    Value power(const Value& v, long k) {
        if (k < 0) raise(ErrorKind::TypeError, "internal: negative power");
        if (v.is_mono) return Value::mono(v.m.pow(k));
        Value acc = Value::mono(LMonomial(1));
        Value base = v;
        while (k) {
            if (k & 1) acc = mul(acc, base);
            k >>= 1;
            if (k) base = mul(base, base);
        }
        return acc;
    }

    Value invert_value(const Value& v) {
        if (v.is_mono) {
            if (v.m.coeff.is_zero()) raise(ErrorKind::DivisionByZero, "division by zero");
            if (v.m.t > 0) raise(ErrorKind::NotInvertible, "negative power of t");
            return Value::mono(LMonomial(1) / v.m);
        }
        return Value::series(v.s.inverse());
    }

    /// 1/e, using exact reciprocal Pochhammers where the structure allows.
    Value inverse_of(const Expr& e) {
        try {
            switch (e.kind) {
            case Kind::Call:
                if (e.name == "qp") return pochhammer_call(e, true);
                break;
            case Kind::Mul: return mul(inverse_of(*e.kids[0]), inverse_of(*e.kids[1]));
            case Kind::Div: return mul(inverse_of(*e.kids[0]), eval(*e.kids[1]));
            case Kind::Neg: return neg(inverse_of(*e.kids[0]));
            case Kind::Pow: {
                Value x = eval(*e.kids[1]);
                if (is_number(x) && x.m.coeff.re().get_den() == 1) {
                    long k = as_integer(x, "exponent");
                    if (k >= 0) return power(inverse_of(*e.kids[0]), k);
                    return power(eval(*e.kids[0]), -k);
                }
                break;
            }
            default: break;
            }
            return invert_value(eval(e));
        } catch (const Error& err) {
            throw err.at(e.span.str() + " in '" + abbreviate(e) + "'");
        }
    }

    Value eval_node(const Expr& e) {
        switch (e.kind) {
        case Kind::Num: return Value::mono(LMonomial(CycRat(e.num)));
        case Kind::Sym: return symbol(e);
        case Kind::Neg: return neg(eval(*e.kids[0]));
        case Kind::Add: return add(eval(*e.kids[0]), eval(*e.kids[1]), false);
        case Kind::Sub: return add(eval(*e.kids[0]), eval(*e.kids[1]), true);
        case Kind::Mul: return mul(eval(*e.kids[0]), eval(*e.kids[1]));
        case Kind::Div: {
            Value num = eval(*e.kids[0]);
            return mul(num, inverse_of(*e.kids[1]));
        }
        case Kind::Pow: return pow_node(e);
        case Kind::Call: return call(e);
        case Kind::List: raise(ErrorKind::TypeError, "a list is only allowed as a phi parameter group");
        case Kind::Sum: return sum_node(e);
        case Kind::CT: return ct_node(e);
        }
        raise(ErrorKind::TypeError, "unknown node");
    }

    Value symbol(const Expr& e) {
        if (auto it = env_.find(e.name); it != env_.end()) return it->second;
        if (e.name == "q") return Value::mono(LMonomial(1, 1));
        if (e.name == "z") return Value::mono(LMonomial(1, 0, 1, 0));
        if (e.name == "t") {
            if (tmax_ <= 0) raise(ErrorKind::TypeError, "t used in a case without a t-order (set T)");
            return Value::mono(LMonomial(1, 0, 0, 1));
        }
        if (e.name == "w") return Value::mono(LMonomial(CycRat::omega()));
        if (e.name == "w2") return Value::mono(LMonomial(CycRat::omega2()));
        if (e.name == "inf") raise(ErrorKind::TypeError, "'inf' is only allowed as a Pochhammer length");
        raise(ErrorKind::UnknownSymbol, "unknown symbol '" + e.name + "'");
    }

    Value pow_node(const Expr& e) {
        Value x = eval(*e.kids[1]);
        if (!is_number(x)) {
            if (x.is_mono && x.m.coeff.is_zero()) return Value::mono(LMonomial(1));
            raise(ErrorKind::TypeError, "exponent must be a rational number");
        }
        BigRat r = x.m.coeff.re();
        if (r.get_den() == 1) {
            long k = as_integer(x, "exponent");
            if (k >= 0) return power(eval(*e.kids[0]), k);
            return power(inverse_of(*e.kids[0]), -k);
        }
        Value b = eval(*e.kids[0]);
        if (!b.is_mono || !b.m.coeff.is_one() || b.m.z != 0 || b.m.t != 0)
            raise(ErrorKind::ExponentNotRepresentable, "fractional power needs a base q^e with coefficient 1");
        if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) raise(ErrorKind::ExponentNotRepresentable, "exponent too large");
        return Value::mono(LMonomial(1, b.m.q * Frac(r.get_num().get_si(), r.get_den().get_si())));
    }

    static void arity(const Expr& e, std::size_t lo, std::size_t hi) {
        if (e.groups.size() < lo || e.groups.size() > hi)
            raise(ErrorKind::TypeError, e.name + " expects " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
                                            " ';'-separated argument groups");
    }
    const Expr& single(const Expr& e, std::size_t g) {
        if (e.groups[g].size() != 1) raise(ErrorKind::TypeError, e.name + ": argument group " + std::to_string(g + 1) + " takes one value");
        return *e.groups[g][0];
    }

    std::optional<long> count_of(const Expr& c) {
        if (c.kind == Kind::Sym && c.name == "inf" && !env_.count("inf")) return std::nullopt;
        long n = as_integer(eval(c), "Pochhammer length");
        if (n < 0) raise(ErrorKind::TypeError, "negative Pochhammer length");
        return n;
    }

    Value pochhammer_call(const Expr& e, bool inverse) {
        arity(e, 3, 3);
        Monomial base = as_scalar(eval(single(e, 1)), "Pochhammer base");
        std::optional<long> count = count_of(single(e, 2));
        if (e.groups[0].empty()) raise(ErrorKind::TypeError, "qp needs at least one argument");
        Value acc = Value::mono(LMonomial(1));
        for (const auto& a : e.groups[0]) {
            LMonomial arg = as_lmono(eval(*a), "Pochhammer argument");
            if (arg.is_scalar()) {
                PochSpec ps{arg.as_monomial(), base, count};
                QSeries s = inverse ? inverse_pochhammer(ps, ctx_) : pochhammer(ps, ctx_);
                acc = mul(acc, Value::series(TZSeries(s, tmax_)));
            } else {
                acc = mul(acc, Value::series(tz_pochhammer(arg, base, count, ctx_, tmax_, inverse)));
            }
        }
        return acc;
    }

    std::vector<LMonomial> param_list(const Expr& e, const char* what) {
        if (e.kind != Kind::List) raise(ErrorKind::TypeError, std::string(what) + " must be a [..] list");
        std::vector<LMonomial> out;
        for (const auto& k : e.kids) out.push_back(as_lmono(eval(*k), what));
        return out;
    }

    Value call(const Expr& e) {
        const std::string& h = e.name;
        if (h == "qp") return pochhammer_call(e, false);
        if (h == "phi") {
            arity(e, 4, 4);
            LPhiSpec s;
            s.uppers = param_list(single(e, 0), "phi upper parameters");
            s.lowers = param_list(single(e, 1), "phi lower parameters");
            s.base = as_scalar(eval(single(e, 2)), "phi base");
            s.argument = as_lmono(eval(single(e, 3)), "phi argument");
            bool scalar = s.argument.is_scalar();
            for (const auto& m : s.uppers) scalar = scalar && m.is_scalar();
            for (const auto& m : s.lowers) scalar = scalar && m.is_scalar();
            if (scalar) {
                PhiSpec p;
                for (const auto& m : s.uppers) p.uppers.push_back(m.as_monomial());
                for (const auto& m : s.lowers) p.lowers.push_back(m.as_monomial());
                p.base = s.base;
                p.argument = s.argument.as_monomial();
                return Value::series(TZSeries(phi(p, ctx_), tmax_));
            }
            return Value::series(phi_general(s, ctx_, tmax_));
        }
        if (h == "F") {
            arity(e, 1, 1);
            if (e.groups[0].size() != 3) raise(ErrorKind::TypeError, "F takes three arguments u, v, w");
            Monomial u = as_scalar(eval(*e.groups[0][0]), "u"), v = as_scalar(eval(*e.groups[0][1]), "v"),
                     w = as_scalar(eval(*e.groups[0][2]), "w");
            return Value::series(TZSeries(multisum(builtin::kanade_russell_F(u, v, w), ctx_), tmax_));
        }
        if (h == "capparelli" || h == "tsf" || h == "tsc" || h == "tse" || h == "ntss") {
            if (!e.groups.empty() && !(e.groups.size() == 1 && e.groups[0].empty())) raise(ErrorKind::TypeError, h + " takes no arguments");
            MultiSumSpec s = h == "capparelli" ? builtin::capparelli()
                             : h == "tsf"      ? builtin::tsf()
                             : h == "tsc"      ? builtin::tsc()
                             : h == "tse"      ? builtin::tse()
                                               : builtin::ntss();
            return Value::series(TZSeries(multisum(s, ctx_), tmax_));
        }
        if (h == "jtp") {
            arity(e, 1, 1);
            Monomial zv = as_scalar(eval(single(e, 0)), "jtp argument");
            return Value::series(TZSeries(jtp_sum(zv, ctx_), tmax_));
        }
        if (h == "rogersC" || h == "awp") {
            arity(e, 3, 4);
            long n = as_integer(eval(single(e, 0)), "polynomial degree");
            if (n < 0) raise(ErrorKind::TypeError, "negative polynomial degree");
            Monomial base = as_scalar(eval(single(e, 2)), "base");
            ZSeries p(ctx_);
            if (h == "rogersC") {
                p = rogers_poly(n, {as_scalar(eval(single(e, 1)), "Rogers parameter"), base}, ctx_);
            } else {
                if (e.groups[1].size() != 4) raise(ErrorKind::TypeError, "awp takes four parameters a, b, c, d");
                AWParam ap;
                ap.a = as_scalar(eval(*e.groups[1][0]), "a");
                ap.b = as_scalar(eval(*e.groups[1][1]), "b");
                ap.c = as_scalar(eval(*e.groups[1][2]), "c");
                ap.d = as_scalar(eval(*e.groups[1][3]), "d");
                ap.base = base;
                p = aw_poly(n, ap, ctx_);
            }
            if (e.groups.size() == 4) {
                LMonomial zv = as_lmono(eval(single(e, 3)), "z value");
                if (zv.t != 0) raise(ErrorKind::TypeError, "z value must not involve t");
                if (zv.is_zero()) raise(ErrorKind::PoleHit, "z = 0 in a Laurent polynomial");
                p = p.substitute(zv.coeff, ctx_.scaled(zv.q), zv.z);
            }
            return Value::series(TZSeries(p, tmax_));
        }
        if (h == "floor") {
            arity(e, 1, 1);
            BigRat r = as_rational(eval(single(e, 0)), "floor argument");
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
            return Value::mono(LMonomial(CycRat(BigRat(f))));
        }
        raise(ErrorKind::UnknownSymbol, "unknown function '" + h + "'");
    }

    Value sum_node(const Expr& e) {
        long lo = as_integer(eval(*e.kids[0]), "summation bound");
        long hi = as_integer(eval(*e.kids[1]), "summation bound");
        if (hi - lo > 100000) raise(ErrorKind::BoundExceeded, "summation range too long");
        std::optional<Value> saved;
        if (auto it = env_.find(e.name); it != env_.end()) saved = it->second;
        Value acc = Value::mono(LMonomial(0));
        for (long k = lo; k <= hi; ++k) {
            env_[e.name] = Value::mono(LMonomial(CycRat(k)));
            acc = add(acc, eval(*e.kids[2]), false);
        }
        if (saved) env_[e.name] = *saved;
        else env_.erase(e.name);
        return acc;
    }

    // ct{...}: the body is a product of Pochhammer symbols, monomials and
    // z-free factors, each possibly raised to an integer power.
    struct CtParts {
        CTIntegrand in;
        std::vector<Value> scalars;
    };

    void flatten(const Expr& e, long p, CtParts& out) {
        try {
            flatten_node(e, p, out);
        } catch (const Error& err) {
            throw err.at(e.span.str() + " in '" + abbreviate(e) + "'");
        }
    }

    void flatten_node(const Expr& e, long p, CtParts& out) {
        switch (e.kind) {
        case Kind::Mul:
            flatten(*e.kids[0], p, out);
            flatten(*e.kids[1], p, out);
            return;
        case Kind::Div:
            flatten(*e.kids[0], p, out);
            flatten(*e.kids[1], -p, out);
            return;
        case Kind::Neg:
            if (p % 2) out.in.prefactor = -out.in.prefactor;
            flatten(*e.kids[0], p, out);
            return;
        case Kind::Pow: {
            Value x = eval(*e.kids[1]);
            if (is_number(x) && x.m.coeff.re().get_den() == 1) {
                flatten(*e.kids[0], p * as_integer(x, "exponent"), out);
                return;
            }
            break;
        }
        case Kind::Call:
            if (e.name == "qp") {
                arity(e, 3, 3);
                Monomial base = as_scalar(eval(single(e, 1)), "Pochhammer base");
                std::optional<long> count = count_of(single(e, 2));
                for (const auto& a : e.groups[0]) {
                    LMonomial arg = as_lmono(eval(*a), "Pochhammer argument");
                    if (arg.t != 0) raise(ErrorKind::TypeError, "t inside a constant-term integrand");
                    if (arg.z == 0) {
                        PochSpec ps{arg.as_monomial(), base, count};
                        QSeries s = p < 0 ? inverse_pochhammer(ps, ctx_) : pochhammer(ps, ctx_);
                        out.scalars.push_back(power(Value::series(TZSeries(s, tmax_)), std::abs(p)));
                        continue;
                    }
                    for (long k = 0; k < std::abs(p); ++k)
                        out.in.groups.push_back({arg.as_monomial(), arg.z, base, count, p < 0});
                }
                return;
            }
            break;
        default: break;
        }
        if (p == 0) return;
        Value v = eval(e);
        if (v.is_mono) {
            if (v.m.t != 0) raise(ErrorKind::TypeError, "t inside a constant-term integrand");
            LMonomial m = p > 0 ? v.m.pow(p) : (LMonomial(1) / v.m).pow(-p);
            out.in.prefactor = out.in.prefactor * m;
            return;
        }
        for (int k = 0; k <= v.s.tmax(); ++k) {
            const ZSeries& zk = v.s.tcoeff(k);
            if (zk.is_zero()) continue;
            if (k > 0 || zk.min_degree() != 0 || zk.max_degree() != 0)
                raise(ErrorKind::TypeError, "constant-term factor depends on z or t but is not a Pochhammer symbol or monomial");
        }
        out.scalars.push_back(p > 0 ? power(v, p) : power(invert_value(v), -p));
    }

    Value ct_node(const Expr& e) {
        CtParts parts;
        flatten(*e.kids[0], 1, parts);
        QSeries r = ct_product(parts.in, ctx_);
        Value acc = Value::series(TZSeries(r, tmax_));
        for (const auto& s : parts.scalars) acc = mul(acc, s);
        return acc;
    }

    SeriesContext ctx_;
    int tmax_ = 0;
    std::map<std::string, Value> env_;
};

} // namespace qrucible::dsl
