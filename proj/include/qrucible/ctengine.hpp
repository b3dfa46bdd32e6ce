#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qkernel.hpp"
#include "zseries.hpp"

namespace qrucible {

/// The factor (1 - coeff q^{qexp/D} z^{zdeg}).
struct ZFactor {
    CycRat coeff;
    std::int64_t qexp = 0;
    int zdeg = 0;
};

/// (arg z^zdeg; base)_count, or its reciprocal when `inverse` is set.
struct ZGroup {
    Monomial arg;
    int zdeg = 0;
    Monomial base = Monomial::q(1);
    std::optional<long> count;
    bool inverse = false;
};

/// Product of explicit factors as a Laurent polynomial in z.
inline ZSeries zproduct(const std::vector<ZFactor>& factors, const SeriesContext& ctx) {
    ZSeries r(QSeries::one(ctx));
    for (const auto& f : factors) r.mul_binomial(f.coeff, f.qexp, f.zdeg);
    return r;
}

/// Product of Pochhammer groups. Infinite groups contribute factors until
/// their q-exponent passes the order plus the most negative valuation seen so
/// far. Reciprocal groups need positive q-exponents (geometric in z).
inline ZSeries zproduct(const std::vector<ZGroup>& groups, const SeriesContext& ctx) {
    ZSeries r(QSeries::one(ctx));
    for (const auto& g : groups) {
        if (g.arg.is_zero()) continue;
        std::int64_t ea = ctx.scaled(g.arg.exp), eb = ctx.scaled(g.base.exp);
        if (!g.count && eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "infinite product with base " + g.base.str());
        CycRat c = g.arg.coeff;
        std::int64_t e = ea;
        for (long j = 0;; ++j) {
            if (g.count && j >= *g.count) break;
            if (!g.count && e >= ctx.order - std::min<std::int64_t>(0, r.min_valuation())) break;
            if (g.inverse) r.div_binomial(c, e, g.zdeg);
            else r.mul_binomial(c, e, g.zdeg);
            c *= g.base.coeff;
            e += eb;
        }
    }
    return r;
}

/// Coefficient of z^0.
inline QSeries constant_term(const ZSeries& x) { return x.coeff(0); }

/// CT_z of prefactor * prod(groups).
struct CTIntegrand {
    std::vector<ZGroup> groups;
    LMonomial prefactor = LMonomial(1);
};

namespace detail {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct SideGroup {
    std::vector<std::pair<CycRat, std::int64_t>> finite; // explicit factors (finite groups)
    CycRat c0, cb;                                       // infinite groups: c0 cb^j q^{e0 + j eb}
    std::int64_t e0 = 0, eb = 0;
    bool infinite = false;
    bool inverse = false;
    int step = 1; // |z-degree|
};

/// Lower bound on the q-valuation of the coefficient of y^{step k}.
inline std::int64_t group_bound(const SideGroup& g, long k) {
    if (k == 0) return 0;
    if (g.infinite) {
        if (g.inverse) return k * g.e0;
        return k * g.e0 + (k * (k - 1) / 2) * g.eb;
    }
    std::vector<std::int64_t> ex;
    for (const auto& f : g.finite) ex.push_back(f.second);
    std::sort(ex.begin(), ex.end());
    if (ex.empty()) return kInf;
    if (g.inverse) return k * ex.front();
    if (k > static_cast<long>(ex.size())) return kInf;
    std::int64_t s = 0;
    for (long i = 0; i < k; ++i) s += ex[static_cast<std::size_t>(i)];
    return s;
}

/// Min-plus combination of the group bounds up to degree dmax.
inline std::vector<std::int64_t> side_bounds(const std::vector<SideGroup>& gs, int dmax) {
    std::vector<std::int64_t> L(static_cast<std::size_t>(dmax + 1), kInf);
    L[0] = 0;
    for (const auto& g : gs) {
        std::vector<std::int64_t> nl(L.size(), kInf);
        std::vector<std::int64_t> gb;
        for (long k = 0; k * g.step <= dmax; ++k) gb.push_back(group_bound(g, k));
        for (int d = 0; d <= dmax; ++d) {
            if (L[static_cast<std::size_t>(d)] >= kInf) continue;
            for (long k = 0; d + k * g.step <= dmax; ++k) {
                std::int64_t b = gb[static_cast<std::size_t>(k)];
                if (b >= kInf) break;
                auto& dst = nl[static_cast<std::size_t>(d + k * g.step)];
                dst = std::min(dst, L[static_cast<std::size_t>(d)] + b);
            }
        }
        L = std::move(nl);
    }
    return L;
}

/// Multiply the truncated power series V (in y) by (1 - c q^e y^s) or divide by it.
inline void apply_factor(std::vector<QSeries>& V, const CycRat& c, std::int64_t e, int s, bool inverse) {
    const int dmax = static_cast<int>(V.size()) - 1;
    if (s > dmax) return;
    if (!inverse) {
        for (int d = dmax; d >= s; --d) {
            const QSeries& src = V[static_cast<std::size_t>(d - s)];
            if (src.is_zero() && src.truncation() >= V[static_cast<std::size_t>(d)].truncation()) continue;
            QSeries t = src;
            t.mul_monomial(c, e);
            V[static_cast<std::size_t>(d)] -= t;
        }
    } else {
        for (int d = s; d <= dmax; ++d) {
            const QSeries& src = V[static_cast<std::size_t>(d - s)];
            if (src.is_zero() && src.truncation() >= V[static_cast<std::size_t>(d)].truncation()) continue;
            QSeries t = src;
            t.mul_monomial(c, e);
            V[static_cast<std::size_t>(d)] += t;
        }
    }
}

inline std::vector<QSeries> expand_side(const std::vector<SideGroup>& gs, int dmax, const SeriesContext& work,
                                        std::int64_t min_bound) {
    std::vector<QSeries> V(static_cast<std::size_t>(std::max(dmax, 0) + 1), QSeries::zero(work));
    V[0] = QSeries::one(work);
    if (dmax < 0) return V;
    const std::int64_t cutoff = work.order - std::min<std::int64_t>(0, min_bound);
    for (const auto& g : gs) {
        if (!g.infinite) {
            for (const auto& f : g.finite) apply_factor(V, f.first, f.second, g.step, g.inverse);
            continue;
        }
        CycRat c = g.c0;
        for (std::int64_t e = g.e0; e < cutoff; e += g.eb) {
            apply_factor(V, c, e, g.step, g.inverse);
            c *= g.cb;
        }
    }
    return V;
}

} // namespace detail

/// Constant term of prefactor * prod(groups) via the split
///   prod = P(z) M(1/z),  CT[z^k P M] = sum_d P_d M_{d+k}.
/// Each side is a power series truncated at the window W, chosen from
/// valuation bounds so the omitted terms are invisible below the order;
/// `extra_window` enlarges W for stability checks.
inline QSeries ct_product(const CTIntegrand& in, const SeriesContext& ctx, int extra_window = 0) {
    const std::int64_t D = ctx.denom;
    const std::int64_t N = ctx.order;
    std::vector<detail::SideGroup> pos, neg;
    QSeries scalar = QSeries::one(ctx);
    bool have_scalar = false;
    std::vector<ZGroup> scalar_groups;
    for (const auto& g : in.groups) {
        if (g.arg.is_zero()) continue;
        if (g.zdeg == 0) {
            scalar_groups.push_back(g);
            have_scalar = true;
            continue;
        }
        detail::SideGroup s;
        s.inverse = g.inverse;
        s.step = std::abs(g.zdeg);
        std::int64_t ea = scale_exponent(g.arg.exp, D), eb = scale_exponent(g.base.exp, D);
        if (g.count) {
            CycRat c = g.arg.coeff;
            std::int64_t e = ea;
            for (long j = 0; j < *g.count; ++j) {
                s.finite.emplace_back(c, e);
                c *= g.base.coeff;
                e += eb;
            }
        } else {
            if (eb <= 0) raise(ErrorKind::NonPositiveBaseExponent, "infinite product with base " + g.base.str());
            s.infinite = true;
            s.c0 = g.arg.coeff;
            s.cb = g.base.coeff;
            s.e0 = ea;
            s.eb = eb;
        }
        (g.zdeg > 0 ? pos : neg).push_back(std::move(s));
    }
    const int k0 = in.prefactor.z;
    if (in.prefactor.t != 0) raise(ErrorKind::TypeError, "t inside a constant-term integrand");
    const std::int64_t e0 = in.prefactor.is_zero() ? 0 : scale_exponent(in.prefactor.q, D);
    if (in.prefactor.is_zero()) return QSeries::zero(ctx);

    // window from the valuation bounds of the two sides
    std::int64_t target = N - e0;
    int dcap = 32;
    int W = -1;
    std::vector<std::int64_t> Lp, Lm;
    for (;;) {
        int mdeg = dcap + std::max(k0, 0);
        Lp = detail::side_bounds(pos, dcap);
        Lm = detail::side_bounds(neg, mdeg);
        auto total = [&](int d) {
            int j = d + k0;
            if (j < 0 || j > mdeg) return detail::kInf;
            std::int64_t a = Lp[static_cast<std::size_t>(d)], b = Lm[static_cast<std::size_t>(j)];
            if (a >= detail::kInf || b >= detail::kInf) return detail::kInf;
            return a + b;
        };
        W = -1;
        for (int d = 0; d <= dcap; ++d)
            if (total(d) < target) W = d;
        bool tail_ok = W <= dcap / 2;
        if (tail_ok) {
            // the bound must still be growing at the end of the scanned range
            std::int64_t a = total(dcap / 2), b = total(dcap);
            tail_ok = (a >= detail::kInf || b >= detail::kInf || b > a);
        }
        if (tail_ok) break;
        if (dcap >= kMaxZSpan) raise(ErrorKind::WindowOverflow, "constant-term window does not close below the order");
        dcap *= 2;
    }
    if (W < 0) W = 0;
    W += extra_window;
    const int pmax = W;
    const int mmax = W + k0;
    if (mmax < 0) return QSeries::zero(ctx);

    std::int64_t minp = 0, minm = 0;
    Lp = detail::side_bounds(pos, pmax);
    Lm = detail::side_bounds(neg, mmax);
    for (auto v : Lp) minp = std::min(minp, v);
    for (auto v : Lm) minm = std::min(minm, v);

    std::int64_t work_order = target - std::min<std::int64_t>(minp, minm) + 2;
    QSeries result;
    for (int attempt = 0; attempt < 5; ++attempt) {
        SeriesContext work = ctx.with_order(work_order);
        auto P = detail::expand_side(pos, pmax, work, minp);
        auto M = detail::expand_side(neg, mmax, work, minm);
        QSeries sum = QSeries::zero(work);
        for (int d = std::max(0, -k0); d <= pmax; ++d) {
            int j = d + k0;
            if (j > mmax) break;
            sum += P[static_cast<std::size_t>(d)] * M[static_cast<std::size_t>(j)];
        }
        sum.mul_monomial(in.prefactor.coeff, e0);
        if (have_scalar) {
            for (const auto& g : scalar_groups) {
                PochSpec ps{g.arg, g.base, g.count};
                sum = sum * (g.inverse ? inverse_pochhammer(ps, work) : pochhammer(ps, work));
            }
        }
        result = sum.with_context(ctx);
        if (result.truncation() >= N) break;
        work_order += (N - result.truncation()) + 4;
    }
    return result;
}

/// CT[(a1 z, a2 z, q z, 1/z; q)_inf / (b1 z, b2 z, b3 z; q)_inf] under a1 a2 = b1 b2 b3.
inline QSeries integral_tpia(const std::vector<Monomial>& alphas, const std::vector<Monomial>& betas,
                             const SeriesContext& ctx) {
    if (alphas.size() != 2 || betas.size() != 3) raise(ErrorKind::TypeError, "integral_tpia needs 2 alphas and 3 betas");
    if (!(alphas[0] * alphas[1] == betas[0] * betas[1] * betas[2]))
        raise(ErrorKind::BalanceViolated, "a1 a2 = " + (alphas[0] * alphas[1]).str() + " but b1 b2 b3 = " +
                                              (betas[0] * betas[1] * betas[2]).str());
    const Monomial q = Monomial::q(1);
    CTIntegrand in;
    for (const auto& a : alphas) in.groups.push_back({a, 1, q, std::nullopt, false});
    in.groups.push_back({q, 1, q, std::nullopt, false});
    in.groups.push_back({Monomial{}, -1, q, std::nullopt, false});
    for (const auto& b : betas) in.groups.push_back({b, 1, q, std::nullopt, true});
    return ct_product(in, ctx);
}

/// Integrand (1/z, q^2 z; q^2)(-w z^3; q^6) / ((-u z; q)(v z^2; q^4)).
inline CTIntegrand kanade_russell_integrand(const Monomial& u, const Monomial& v, const Monomial& w) {
    CTIntegrand in;
    in.groups.push_back({Monomial{}, -1, Monomial::q(2), std::nullopt, false});
    in.groups.push_back({Monomial::q(2), 1, Monomial::q(2), std::nullopt, false});
    in.groups.push_back({-w, 3, Monomial::q(6), std::nullopt, false});
    in.groups.push_back({-u, 1, Monomial::q(1), std::nullopt, true});
    in.groups.push_back({v, 2, Monomial::q(4), std::nullopt, true});
    return in;
}

/// (q^2;q^2)_inf times the constant term of the integrand above.
inline QSeries kanade_russell_integral(const Monomial& u, const Monomial& v, const Monomial& w, const SeriesContext& ctx,
                                       int extra_window = 0) {
    QSeries ct = ct_product(kanade_russell_integrand(u, v, w), ctx, extra_window);
    return ct * pochhammer({Monomial::q(2), Monomial::q(2), std::nullopt}, ctx);
}

/// (q;q)/(c,t;q) CT[(abz, cz, qz/t, t/z; q) / (az, bz, cz/t; q)].
inline QSeries phi21_integral(const Monomial& a, const Monomial& b, const Monomial& c, const Monomial& t,
                              const SeriesContext& ctx) {
    const Monomial q = Monomial::q(1);
    CTIntegrand in;
    in.groups.push_back({a * b, 1, q, std::nullopt, false});
    in.groups.push_back({c, 1, q, std::nullopt, false});
    in.groups.push_back({q / t, 1, q, std::nullopt, false});
    in.groups.push_back({t, -1, q, std::nullopt, false});
    in.groups.push_back({a, 1, q, std::nullopt, true});
    in.groups.push_back({b, 1, q, std::nullopt, true});
    in.groups.push_back({c / t, 1, q, std::nullopt, true});
    QSeries ct = ct_product(in, ctx);
    return ct * pochhammer({q, q, std::nullopt}, ctx) * inverse_pochhammer({c, q, std::nullopt}, ctx) *
           inverse_pochhammer({t, q, std::nullopt}, ctx);
}

} // namespace qrucible
