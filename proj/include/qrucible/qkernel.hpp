#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "series.hpp"
#include "zseries.hpp"

namespace qrucible {

/// (argument; base)_count; count == nullopt is the infinite product.
struct PochSpec {
    Monomial argument;
    Monomial base = Monomial::q(1);
    std::optional<long> count;
};

namespace detail {

/// Index j >= 0 with a*b^j == 1 exactly, if any.
inline std::optional<long> unit_index(const LMonomial& a, const Monomial& b, std::int64_t denom) {
    if (!a.is_scalar() || a.is_zero()) return std::nullopt;
    std::int64_t ea = scale_exponent(a.q, denom), eb = scale_exponent(b.exp, denom);
    if (eb == 0) {
        if (ea != 0) return std::nullopt;
        // b^j coefficient cycles; check a small period (roots of unity in Q(w) have order <= 6)
        for (long j = 0; j < 6; ++j)
            if ((a.coeff * b.coeff.pow(j)).is_one()) return j;
        return std::nullopt;
    }
    if (ea % eb != 0) return std::nullopt;
    long j = static_cast<long>(-ea / eb);
    if (j < 0) return std::nullopt;
    if ((a.coeff * b.coeff.pow(j)).is_one()) return j;
    return std::nullopt;
}

} // namespace detail

/// Exact (a;b)_n, or (a;b)_inf truncated at the context order.
inline QSeries pochhammer(const PochSpec& spec, const SeriesContext& ctx) {
    const std::int64_t D = ctx.denom;
    std::int64_t ea = scale_exponent(spec.argument.exp, D);
    std::int64_t eb = scale_exponent(spec.base.exp, D);
    if (!spec.count && eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "infinite product with base " + spec.base.str());
    if (spec.count && *spec.count < 0) raise(ErrorKind::TypeError, "negative Pochhammer length");
    if (spec.argument.is_zero()) return QSeries::one(ctx);
    if (spec.count && *spec.count == 0) return QSeries::one(ctx);

    // factors with negative exponent are rewritten as -c q^e (1 - c^{-1} q^{-e})
    struct Factor {
        CycRat c;
        std::int64_t e;
    };
    std::vector<Factor> factors;
    CycRat pre_c = 1;
    std::int64_t pre_e = 0;
    CycRat c = spec.argument.coeff;
    std::int64_t e = ea;
    for (long j = 0;; ++j) {
        if (spec.count && j >= *spec.count) break;
        if (!spec.count && e >= ctx.order - pre_e) break;
        if (e == 0 && c.is_one()) return QSeries::zero(ctx);
        if (e < 0) {
            pre_c *= -c;
            pre_e += e;
            factors.push_back({c.inv(), -e});
        } else {
            factors.push_back({c, e});
        }
        c *= spec.base.coeff;
        e += eb;
        if (spec.count && eb <= 0 && j > 100000) raise(ErrorKind::BoundExceeded, "Pochhammer length");
    }
    SeriesContext work = ctx.with_order(ctx.order - pre_e);
    QSeries p = QSeries::one(work);
    for (const auto& f : factors) {
        if (f.e >= work.order) continue;
        p.mul_binomial(f.c, f.e);
    }
    p.mul_monomial(pre_c, pre_e);
    return p.with_context(ctx);
}

/// 1/(a;b)_n; throws ZeroDenominator if a factor vanishes.
inline QSeries inverse_pochhammer(const PochSpec& spec, const SeriesContext& ctx) {
    const std::int64_t D = ctx.denom;
    std::int64_t ea = scale_exponent(spec.argument.exp, D);
    std::int64_t eb = scale_exponent(spec.base.exp, D);
    if (!spec.count && eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "infinite product with base " + spec.base.str());
    QSeries r = QSeries::one(ctx);
    if (spec.argument.is_zero() || (spec.count && *spec.count <= 0)) return r;
    CycRat c = spec.argument.coeff;
    std::int64_t e = ea;
    for (long j = 0;; ++j) {
        if (spec.count && j >= *spec.count) break;
        if (!spec.count && e >= ctx.order + std::max<std::int64_t>(0, -r.valuation())) break;
        if (e == 0 && c.is_one()) raise(ErrorKind::ZeroDenominator, "factor (1 - 1) in 1/(" + spec.argument.str() + ";" + spec.base.str() + ")");
        r.div_binomial(c, e);
        c *= spec.base.coeff;
        e += eb;
    }
    return r;
}

/// (a_1,...,a_m; b)_n.
inline QSeries pochhammer_multi(const std::vector<Monomial>& args, const Monomial& base, std::optional<long> count,
                                const SeriesContext& ctx) {
    QSeries r = QSeries::one(ctx);
    for (const auto& a : args) {
        r *= pochhammer({a, base, count}, ctx);
        if (r.is_zero()) break;
    }
    return r;
}

/// Parameters of the basic hypergeometric series r phi s over base b.
struct PhiSpec {
    std::vector<Monomial> uppers;
    std::vector<Monomial> lowers;
    Monomial base = Monomial::q(1);
    Monomial argument;
};

/// Parameters of r phi s whose entries may involve z and t.
struct LPhiSpec {
    std::vector<LMonomial> uppers;
    std::vector<LMonomial> lowers;
    Monomial base = Monomial::q(1);
    LMonomial argument;
};

namespace detail {

/// Lower bound for the q-valuation contributed by the factor (1 - m).
inline std::int64_t num_factor_lb(const LMonomial& m, std::int64_t e) {
    if (m.is_zero()) return 0;
    return std::min<std::int64_t>(0, e);
}

/// Lower bound for the q-valuation of 1/(1 - m).
inline std::int64_t den_factor_lb(const LMonomial& m, std::int64_t e, int tmax) {
    if (m.is_zero()) return 0;
    if (m.is_scalar()) return -std::min<std::int64_t>(0, e);
    if (m.t > 0) return std::min<std::int64_t>(0, e * (tmax / m.t));
    return 0; // z-geometric expansion needs e > 0
}

} // namespace detail

/// sum_n (uppers;b)_n / (b, lowers;b)_n ((-1)^n b^{n(n-1)/2})^{1+s-r} arg^n,
/// evaluated by term-ratio updates. Summation stops once every remaining term
/// provably has q-valuation at least the context order (or t-degree above tmax).
inline TZSeries phi_general(const LPhiSpec& spec, const SeriesContext& ctx, int tmax) {
    const std::int64_t D = ctx.denom;
    const std::int64_t N = ctx.order;
    const std::int64_t eb = scale_exponent(spec.base.exp, D);
    if (eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "phi base " + spec.base.str());
    if (spec.base.coeff.is_zero()) raise(ErrorKind::NonPositiveBaseExponent, "zero base");
    for (const auto& m : spec.uppers)
        if (m.t < 0) raise(ErrorKind::NotInvertible, "negative t-degree parameter");
    for (const auto& m : spec.lowers)
        if (m.t < 0) raise(ErrorKind::NotInvertible, "negative t-degree parameter");
    const long r = static_cast<long>(spec.uppers.size());
    const long s = static_cast<long>(spec.lowers.size());
    const long p = 1 + s - r;
    const LMonomial& arg = spec.argument;
    if (arg.t < 0) raise(ErrorKind::NotInvertible, "negative t-degree argument");
    const std::int64_t earg = scale_exponent(arg.q, D);

    // termination and vanishing denominators
    std::optional<long> n_term;
    if (arg.is_zero()) n_term = 1;
    for (const auto& a : spec.uppers) {
        if (a.is_zero()) continue;
        if (auto j = detail::unit_index(a, spec.base, D)) n_term = std::min(n_term.value_or(*j + 1), *j + 1);
    }
    for (const auto& b : spec.lowers) {
        if (b.is_zero()) continue;
        if (auto j = detail::unit_index(b, spec.base, D)) {
            if (!n_term || *j + 1 <= *n_term - 1 + 0 && *j < *n_term - 1 + 1 - 1 + 0) {
                // a denominator factor (1 - b q^j) enters term j+1
            }
            if (!n_term || *j + 1 < *n_term)
                raise(ErrorKind::ZeroDenominator, "lower parameter " + b.str() + " gives a zero factor at index " + std::to_string(*j));
        }
    }

    auto exps_up = std::vector<std::int64_t>();
    auto exps_lo = std::vector<std::int64_t>();
    for (const auto& a : spec.uppers) exps_up.push_back(a.is_zero() ? 0 : scale_exponent(a.q, D));
    for (const auto& b : spec.lowers) exps_lo.push_back(b.is_zero() ? 0 : scale_exponent(b.q, D));

    // step(n): lower bound of val(term_{n+1}) - val(term_n)
    auto step = [&](long n) {
        std::int64_t d = earg + p * n * eb;
        for (std::size_t i = 0; i < spec.uppers.size(); ++i) d += detail::num_factor_lb(spec.uppers[i], exps_up[i] + n * eb);
        for (std::size_t i = 0; i < spec.lowers.size(); ++i) d += detail::den_factor_lb(spec.lowers[i], exps_lo[i] + n * eb, tmax);
        return d;
    };
    // first index after which all parameter exponents are nonnegative
    long n_settle = 0;
    for (auto e : exps_up) n_settle = std::max<long>(n_settle, e < 0 ? static_cast<long>((-e + eb - 1) / eb) : 0);
    for (auto e : exps_lo) n_settle = std::max<long>(n_settle, e < 0 ? static_cast<long>((-e + eb - 1) / eb) : 0);

    const bool t_terminates = arg.t > 0;
    if (!n_term && !t_terminates) {
        if (p < 0 || (p == 0 && earg <= 0))
            raise(ErrorKind::NonSummable, "term valuations do not grow (1+s-r = " + std::to_string(p) + ")");
    }

    // determine the number of terms and the working order from the valuation bounds
    constexpr long kMaxTerms = 200000;
    std::vector<std::int64_t> lb{0};
    long n_stop = 0;
    for (long n = 0;; ++n) {
        if (n_term && n >= *n_term) {
            n_stop = n;
            break;
        }
        if (t_terminates && static_cast<long>(n) * arg.t > tmax) {
            n_stop = n;
            break;
        }
        if (n >= n_settle && lb.back() >= N && step(n) > 0 && (p > 0 || (p == 0 && earg > 0))) {
            n_stop = n;
            break;
        }
        if (n > kMaxTerms) raise(ErrorKind::NonSummable, "series did not reach the truncation order");
        lb.push_back(lb.back() + step(n));
    }
    std::int64_t drop = 0, best = lb[0];
    for (long n = 0; n < n_stop; ++n) {
        best = std::max(best, lb[static_cast<std::size_t>(n)]);
        drop = std::max(drop, best - lb[static_cast<std::size_t>(n)]);
    }
    SeriesContext work = ctx.with_order(N + drop);

    TZSeries sum(work, tmax);
    TZSeries term = TZSeries::monomial(LMonomial(1), work, tmax);
    const LMonomial base_l(spec.base);
    LMonomial bn(1); // b^n
    for (long n = 0; n < n_stop; ++n) {
        sum += term;
        if (n + 1 >= n_stop) break;
        // ratio term_{n+1}/term_n
        LMonomial mono = arg;
        if (p != 0) {
            LMonomial f = (-bn).pow(p);
            mono = mono * f;
        }
        std::vector<LMonomial> up, lo;
        for (const auto& a : spec.uppers)
            if (!a.is_zero()) up.push_back(a * bn);
        for (const auto& b : spec.lowers)
            if (!b.is_zero()) lo.push_back(b * bn);
        LMonomial qn1 = bn * base_l; // b^{n+1}
        auto neg = [&](const LMonomial& m) { return scale_exponent(m.q, D) < 0; };
        bool mono_first = neg(mono);
        if (mono_first) term.mul_monomial(mono);
        for (const auto& a : up)
            if (neg(a)) term.mul_binomial(a);
        for (const auto& a : up)
            if (!neg(a)) term.mul_binomial(a);
        for (const auto& b : lo) term.div_binomial(b);
        term.div_binomial(qn1);
        if (!mono_first) term.mul_monomial(mono);
        bn = qn1;
    }
    TZSeries out(ctx, tmax);
    out += sum;
    out.truncate_in_place(N);
    return out;
}

/// r phi s with scalar monomial parameters.
inline QSeries phi(const PhiSpec& spec, const SeriesContext& ctx) {
    LPhiSpec l;
    for (const auto& a : spec.uppers) l.uppers.emplace_back(a);
    for (const auto& b : spec.lowers) l.lowers.emplace_back(b);
    l.base = spec.base;
    l.argument = spec.argument;
    TZSeries r = phi_general(l, ctx, 0);
    return r.as_series().with_context(ctx);
}

/// (arg; base)_count with arg possibly involving z and t, or its reciprocal.
inline TZSeries tz_pochhammer(const LMonomial& arg, const Monomial& base, std::optional<long> count, const SeriesContext& ctx,
                              int tmax, bool inverse = false) {
    if (arg.is_scalar()) {
        PochSpec ps{arg.as_monomial(), base, count};
        return TZSeries(inverse ? inverse_pochhammer(ps, ctx) : pochhammer(ps, ctx), tmax);
    }
    const std::int64_t eb = ctx.scaled(base.exp);
    if (!count && eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "infinite product with base " + base.str());
    TZSeries r = TZSeries::monomial(LMonomial(1), ctx, tmax);
    if (arg.is_zero()) return r;
    LMonomial f = arg;
    const LMonomial b(base);
    for (long j = 0;; ++j) {
        if (count && j >= *count) break;
        if (!count && ctx.scaled(f.q) >= ctx.order - std::min<std::int64_t>(0, r.min_valuation())) break;
        if (f.t > tmax) break;
        if (inverse) r.div_binomial(f);
        else r.mul_binomial(f);
        f = f * b;
    }
    return r;
}

inline std::int64_t min_truncation_of(const QSeries& s) { return s.truncation(); }
inline std::int64_t min_truncation_of(const TZSeries& s) { return s.min_truncation(); }
inline QSeries recontext(const QSeries& s, const SeriesContext& ctx) { return s.with_context(ctx); }
inline TZSeries recontext(const TZSeries& s, const SeriesContext& ctx) { return s.with_context(ctx); }

/// Evaluate f at increasing working orders until the result is known to the
/// requested order (or the attempts run out; the caller sees the shortfall).
template <class F>
auto with_working_order(const SeriesContext& ctx, F&& f, int attempts = 5) {
    std::int64_t extra = 0;
    for (int i = 0;; ++i) {
        auto r = recontext(f(ctx.with_order(ctx.order + extra)), ctx);
        std::int64_t t = min_truncation_of(r);
        if (t >= ctx.order || i + 1 >= attempts) return r;
        extra += (ctx.order - t) + 4 + extra / 2;
    }
}

/// Quadratic-form multiple sum
///   sum_{k >= 0} (-1)^{s.k} prod_i c_i^{k_i} q^{k^T Q k + l.k + sum_i k_i e_i}
///                / prod_i (B_i;B_i)_{k_i}
/// where c_i q^{e_i} are the per-variable coefficient monomials.
struct MultiSumSpec {
    std::string name;
    std::vector<std::vector<Frac>> quadratic; // symmetric
    std::vector<Frac> linear;
    std::vector<int> sign_exponents;
    std::vector<Monomial> denominators; // B_i
    std::vector<Monomial> coefficients;

    std::size_t num_vars() const { return linear.size(); }
};

inline QSeries multisum(const MultiSumSpec& spec, const SeriesContext& ctx) {
    const std::size_t m = spec.num_vars();
    const std::int64_t D = ctx.denom;
    const std::int64_t N = ctx.order;
    if (spec.quadratic.size() != m || spec.sign_exponents.size() != m || spec.denominators.size() != m ||
        spec.coefficients.size() != m)
        raise(ErrorKind::DivergentSpec, "inconsistent multisum dimensions in " + spec.name);

    // growth certificate: nonnegative cross terms and growing diagonals
    std::vector<Frac> lin(m);
    for (std::size_t i = 0; i < m; ++i) {
        lin[i] = spec.linear[i] + spec.coefficients[i].exp;
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && spec.quadratic[i][j] < Frac(0))
                raise(ErrorKind::DivergentSpec, spec.name + ": negative cross term, growth not certified");
        const Frac& a = spec.quadratic[i][i];
        if (a < Frac(0) || (a == Frac(0) && lin[i] <= Frac(0)))
            raise(ErrorKind::DivergentSpec, spec.name + ": exponent does not grow along variable " + std::to_string(i));
        if (scale_exponent(spec.denominators[i].exp, D) <= 0)
            raise(ErrorKind::NonPositiveBaseExponent, spec.name + ": denominator base " + spec.denominators[i].str());
    }
    auto diag = [&](std::size_t i, long k) { return spec.quadratic[i][i] * Frac(k * k) + lin[i] * Frac(k); };
    std::vector<Frac> mins(m, Frac(0));
    for (std::size_t i = 0; i < m; ++i)
        for (long k = 0;; ++k) {
            Frac v = diag(i, k);
            if (v < mins[i]) mins[i] = v;
            if (k > 0 && diag(i, k + 1) > v && v >= Frac(0)) break;
        }
    Frac total_min = 0;
    for (auto& v : mins) total_min += v;
    Frac target = ctx.unscaled(N);
    std::vector<long> bound(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Frac rest = total_min - mins[i];
        long k = 0;
        for (long kk = 0; kk < 100000; ++kk) {
            if (diag(i, kk) + rest < target) k = kk;
            else if (diag(i, kk + 1) > diag(i, kk) && diag(i, kk) >= Frac(0)) break;
        }
        bound[i] = k;
    }

    std::vector<std::vector<QSeries>> inv_den(m);
    for (std::size_t i = 0; i < m; ++i) {
        inv_den[i].reserve(static_cast<std::size_t>(bound[i] + 1));
        QSeries cur = QSeries::one(ctx);
        inv_den[i].push_back(cur);
        CycRat bc = spec.denominators[i].coeff;
        std::int64_t be = scale_exponent(spec.denominators[i].exp, D);
        CycRat c = bc;
        std::int64_t e = be;
        for (long k = 1; k <= bound[i]; ++k) {
            cur.div_binomial(c, e);
            inv_den[i].push_back(cur);
            c *= bc;
            e += be;
        }
    }

    QSeries total = QSeries::zero(ctx);
    std::vector<long> k(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx < m) {
            for (long v = 0; v <= bound[idx]; ++v) {
                k[idx] = v;
                rec(idx + 1);
            }
            return;
        }
        Frac ex = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!k[i]) continue;
            ex += lin[i] * Frac(k[i]);
            for (std::size_t j = 0; j < m; ++j)
                if (k[j]) ex += spec.quadratic[i][j] * Frac(k[i] * k[j]);
        }
        std::int64_t se = scale_exponent(ex, D);
        if (se >= N) return;
        CycRat c = 1;
        long sgn = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sgn += static_cast<long>(spec.sign_exponents[i]) * k[i];
            if (k[i]) c *= spec.coefficients[i].coeff.pow(k[i]);
        }
        if (sgn % 2) c = -c;
        SeriesContext local = ctx.with_order(N - se);
        QSeries t = QSeries::constant(c, local);
        for (std::size_t i = 0; i < m; ++i)
            if (k[i]) t = t * inv_den[i][static_cast<std::size_t>(k[i])].truncated(N - se);
        t.shift(se);
        total += t.with_context(ctx);
    };
    rec(0);
    return total;
}

/// Two-sided theta sum sum_{n in Z} (-1)^n q^{n(n-1)/2} z^n.
inline QSeries jtp_sum(const Monomial& z, const SeriesContext& ctx) {
    const std::int64_t D = ctx.denom, N = ctx.order;
    const std::int64_t ez = scale_exponent(z.exp, D);
    if (z.is_zero()) return QSeries::one(ctx);
    CycRat zi = z.coeff.inv();
    QSeries total = QSeries::zero(ctx);
    auto expo = [&](std::int64_t n) { return D * (n * (n - 1) / 2) + n * ez; };
    for (int dir : {1, -1}) {
        for (std::int64_t n = (dir > 0 ? 0 : -1);; n += dir) {
            std::int64_t e = expo(n);
            std::int64_t next = expo(n + dir);
            if (e >= N && next > e) break;
            if (e < N) {
                CycRat c = n >= 0 ? z.coeff.pow(n) : zi.pow(-n);
                if (n % 2) c = -c;
                total += QSeries::monomial(c, e, ctx);
            }
        }
    }
    return total;
}

namespace builtin {

inline std::vector<std::vector<Frac>> sym(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Frac>> out;
    for (auto& r : rows) {
        std::vector<Frac> row;
        for (long v : r) row.emplace_back(v);
        out.push_back(std::move(row));
    }
    return out;
}

/// F(u,v,w) = sum (-1)^k q^{3k(k-1) + (i+2j+3k)(i+2j+3k-1)} u^i v^j w^k
///            / ((q;q)_i (q^4;q^4)_j (q^6;q^6)_k)
inline MultiSumSpec kanade_russell_F(const Monomial& u, const Monomial& v, const Monomial& w) {
    return {"F",
            sym({{1, 2, 3}, {2, 4, 6}, {3, 6, 12}}),
            {Frac(-1), Frac(-2), Frac(-6)},
            {0, 0, 1},
            {Monomial::q(1), Monomial::q(4), Monomial::q(6)},
            {u, v, w}};
}

/// sum q^{2j^2+6jk+6k^2} / ((q;q)_j (q^3;q^3)_k)
inline MultiSumSpec capparelli() {
    return {"capparelli", sym({{2, 3}, {3, 6}}), {Frac(0), Frac(0)}, {0, 0}, {Monomial::q(1), Monomial::q(3)}, {Monomial{}, Monomial{}}};
}

namespace detail {
// 2 binom(i+j+3k, 2) + 6 binom(k, 2): quadratic part and the -L - 3k linear part
inline MultiSumSpec triple_sum(std::string name, Frac li, Frac lj, Frac lk, std::vector<int> signs, Monomial jbase) {
    return {std::move(name),
            sym({{1, 1, 3}, {1, 1, 3}, {3, 3, 12}}),
            {Frac(-1) + li, Frac(-1) + lj, Frac(-6) + lk},
            std::move(signs),
            {Monomial::q(1), jbase, Monomial::q(6)},
            {Monomial{}, Monomial{}, Monomial{}}};
}
} // namespace detail

/// (-1)^j q^{2C(i+j+3k,2)+6C(k,2)+2i+3j+12k} / ((q;q)_i (q;q)_j (q^6;q^6)_k)
inline MultiSumSpec tsf() { return detail::triple_sum("tsf", 2, 3, 12, {0, 1, 0}, Monomial::q(1)); }
/// (-1)^{j+k} q^{2C(i+j+3k,2)+6C(k,2)+i+j+6k} / ((q;q)_i (-q;-q)_j (q^6;q^6)_k)
inline MultiSumSpec tsc() { return detail::triple_sum("tsc", 1, 1, 6, {0, 1, 1}, Monomial{-1, 1}); }
/// (-1)^{j+k} q^{2C(i+j+3k,2)+6C(k,2)+2i+3j+12k} / ((q;q)_i (-q;-q)_j (q^6;q^6)_k)
inline MultiSumSpec tse() { return detail::triple_sum("tse", 2, 3, 12, {0, 1, 1}, Monomial{-1, 1}); }
/// (-1)^{j+k} q^{2C(i+j+3k,2)+6C(k,2)+2i+3j/2+9k} / ((q;q)_i (-q;-q)_j (q^6;q^6)_k)
inline MultiSumSpec ntss() { return detail::triple_sum("ntss", 2, Frac(3, 2), 9, {0, 1, 1}, Monomial{-1, 1}); }

} // namespace builtin

} // namespace qrucible
