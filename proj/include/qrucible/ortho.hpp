#pragma once

#include <array>
#include <string>
#include <vector>

#include "ctengine.hpp"
#include "qkernel.hpp"
#include "zseries.hpp"

namespace qrucible {

/// Parameters of the Rogers polynomial C_n(x; a | base), x = (z + 1/z)/2.
struct RogersParam {
    Monomial a;
    Monomial base = Monomial::q(1);
};

/// Parameters of the Askey-Wilson polynomial p_n(x; a, b, c, d | base).
struct AWParam {
    Monomial a, b, c, d;
    Monomial base = Monomial::q(1);
};

/// sum_k (a;b)_k (a;b)_{n-k} / ((b;b)_k (b;b)_{n-k}) z^{n-2k}
inline ZSeries rogers_poly(long n, const RogersParam& p, const SeriesContext& ctx) {
    return with_working_order(ctx, [&](const SeriesContext& w) {
               ZSeries r(w);
               for (long k = 0; k <= n; ++k) {
                   QSeries c = pochhammer({p.a, p.base, k}, w) * pochhammer({p.a, p.base, n - k}, w) *
                               inverse_pochhammer({p.base, p.base, k}, w) * inverse_pochhammer({p.base, p.base, n - k}, w);
                   r.add_at(static_cast<int>(n - 2 * k), c);
               }
               return TZSeries(r);
           })
        .tcoeff(0);
}

/// (q,ab,cd;q)_n sum_k (az,bz;q)_k (c/z,d/z;q)_{n-k} / ((q,ab;q)_k (q,cd;q)_{n-k}) z^{n-2k},
/// with the Pochhammer quotients cancelled to polynomials in the parameters.
inline ZSeries aw_poly(long n, const AWParam& p, const SeriesContext& ctx) {
    const Monomial& q = p.base;
    return with_working_order(ctx, [&](const SeriesContext& w) {
               ZSeries r(w);
               for (long k = 0; k <= n; ++k) {
                   QSeries s = pochhammer({p.a * p.b * q.pow(k), q, n - k}, w) * pochhammer({p.c * p.d * q.pow(n - k), q, k}, w) *
                               pochhammer({q, q, n}, w) * inverse_pochhammer({q, q, k}, w) * inverse_pochhammer({q, q, n - k}, w);
                   ZSeries up = zproduct(std::vector<ZGroup>{{p.a, 1, q, k, false}, {p.b, 1, q, k, false}}, w);
                   ZSeries dn = zproduct(std::vector<ZGroup>{{p.c, -1, q, n - k, false}, {p.d, -1, q, n - k, false}}, w);
                   ZSeries term = up * dn;
                   term.mul_monomial(1, 0, static_cast<int>(n - 2 * k));
                   term = term * ZSeries(s);
                   r += term;
               }
               return TZSeries(r);
           })
        .tcoeff(0);
}

/// C_n at x = -1/2, i.e. z = w.
inline QSeries rogers_at_minus_half(long n, const RogersParam& p, const SeriesContext& ctx) {
    return rogers_poly(n, p, ctx).substitute(CycRat::omega(), 0, 0).coeff(0);
}

/// sum_{l <= n/3} (a^3;q^3)_l (a^{-1};q)_{n-3l} / ((q^3;q^3)_l (q;q)_{n-3l}) a^{n-3l}
inline QSeries rogers_minus_half_sum(long n, const RogersParam& p, const SeriesContext& ctx) {
    const Monomial& q = p.base;
    const Monomial q3 = q.pow(3);
    const Monomial ai = Monomial{1, 0} / p.a;
    return with_working_order(ctx, [&](const SeriesContext& w) {
        QSeries r = QSeries::zero(w);
        for (long l = 0; 3 * l <= n; ++l) {
            QSeries t = pochhammer({p.a.pow(3), q3, l}, w) * pochhammer({ai, q, n - 3 * l}, w) *
                        inverse_pochhammer({q3, q3, l}, w) * inverse_pochhammer({q, q, n - 3 * l}, w);
            Monomial an = p.a.pow(n - 3 * l);
            t.mul_monomial(an.coeff, w.scaled(an.exp));
            r += t;
        }
        return r;
    });
}

/// a^n (a^{-1};q)_n/(q;q)_n 4phi3(q^{-n}, q^{1-n}, q^{2-n}, a^3; a q^{1-n}, a q^{2-n}, a q^{3-n}; q^3, q^3)
inline QSeries rogers_minus_half_balanced(long n, const RogersParam& p, const SeriesContext& ctx) {
    const Monomial& q = p.base;
    const Monomial ai = Monomial{1, 0} / p.a;
    return with_working_order(ctx, [&](const SeriesContext& w) {
        PhiSpec s;
        s.uppers = {q.pow(-n), q.pow(1 - n), q.pow(2 - n), p.a.pow(3)};
        s.lowers = {p.a * q.pow(1 - n), p.a * q.pow(2 - n), p.a * q.pow(3 - n)};
        s.base = q.pow(3);
        s.argument = q.pow(3);
        QSeries r = phi(s, w) * pochhammer({ai, q, n}, w) * inverse_pochhammer({q, q, n}, w);
        Monomial an = p.a.pow(n);
        r.mul_monomial(an.coeff, w.scaled(an.exp));
        return r;
    });
}

/// The generating functions for Rogers polynomials with a t-truncated left side.
enum class GenFun { acg, adg, ncg, acge, acgm };

inline std::string to_string(GenFun g) {
    switch (g) {
    case GenFun::acg: return "acg";
    case GenFun::adg: return "adg";
    case GenFun::ncg: return "ncg";
    case GenFun::acge: return "acge";
    case GenFun::acgm: return "acgm";
    }
    return "?";
}

/// t-coefficients 0..tmax of the product/series side.
inline std::vector<ZSeries> genfun_lhs(GenFun v, const Monomial& a, int tmax, const SeriesContext& ctx) {
    const Monomial q = Monomial::q(1), q2 = Monomial::q(2);
    const LMonomial z(1, 0, 1, 0), zi(1, 0, -1, 0), t(1, 0, 0, 1);
    auto la = [](const Monomial& m) { return LMonomial(m); };
    auto phi_tz = [&](std::vector<LMonomial> up, std::vector<LMonomial> lo, const Monomial& b, const LMonomial& arg,
                      const SeriesContext& w) { return phi_general({std::move(up), std::move(lo), b, arg}, w, tmax); };
    TZSeries r = with_working_order(ctx, [&](const SeriesContext& w) {
        auto P = [&](const LMonomial& x, const Monomial& b, bool inv) { return tz_pochhammer(x, b, std::nullopt, w, tmax, inv); };
        switch (v) {
        case GenFun::acg:
            return P(t * la(q) * zi, q2, false) * P(t * z, q2, true) *
                   phi_tz({la(a) * z, -la(a) * z}, {-la(a * a)}, q, t * zi, w);
        case GenFun::adg:
            return P(-t * zi, q, false) * P(t * z, q, true) *
                   phi_tz({la(a) * z * z, la(a * q) * z * z}, {la(a * a * q)}, q2, t * t * zi * zi, w);
        case GenFun::ncg: {
            Monomial aq = a * Monomial::q(Frac(1, 2));
            return phi_tz({la(a) * z, -la(a) * z}, {-la(a * a)}, q, t * zi, w) *
                   phi_tz({la(aq) * zi, -la(aq) * zi}, {-la(a * a * q)}, q, t * z, w);
        }
        case GenFun::acge:
        case GenFun::acgm: {
            Monomial s = v == GenFun::acge ? -(a * a) : -(a * a / q);
            return P(la(a * a) * t * t, q2, false) * P(la(s), q, true) * P(t * z, q2, true) * P(t * zi, q2, true) *
                   phi_tz({t * z, t * zi}, {la(a) * t, -la(a) * t}, q, la(s), w);
        }
        }
        raise(ErrorKind::TypeError, "unknown generating function");
    });
    std::vector<ZSeries> out;
    for (int k = 0; k <= tmax; ++k) out.push_back(r.tcoeff(k));
    return out;
}

/// Coefficient of t^n on the Rogers-polynomial side.
inline ZSeries genfun_rhs(GenFun v, long n, const Monomial& a, const SeriesContext& ctx) {
    const Monomial q = Monomial::q(1), q2 = Monomial::q(2);
    return with_working_order(ctx, [&](const SeriesContext& w) {
               QSeries c = QSeries::one(w);
               RogersParam rp;
               switch (v) {
               case GenFun::acg:
               case GenFun::acge:
                   c = pochhammer({a * a * q, q2, n}, w) * inverse_pochhammer({a.pow(4), q2, n}, w);
                   rp = {a * a, q2};
                   break;
               case GenFun::acgm:
                   c = pochhammer({a * a / q, q2, n}, w) * inverse_pochhammer({a.pow(4) / q2, q2, n}, w);
                   rp = {a * a, q2};
                   break;
               case GenFun::adg:
                   c = pochhammer({-a, q, n}, w) * inverse_pochhammer({a * a, q, n}, w);
                   rp = {a, q};
                   break;
               case GenFun::ncg: {
                   Monomial h = Monomial::q(Frac(1, 2));
                   c = pochhammer_multi({a * a * h, -(a * a * h)}, q, n, w) * inverse_pochhammer({-(a * a * q), q, n}, w) *
                       inverse_pochhammer({a.pow(4), q, n}, w);
                   rp = {a * a, q};
                   break;
               }
               }
               return TZSeries(rogers_poly(n, rp, w) * ZSeries(c));
           })
        .tcoeff(0);
}

} // namespace qrucible
