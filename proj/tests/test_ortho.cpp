#include <gtest/gtest.h>

#include <algorithm>

#include "qrucible/ortho.hpp"

using namespace qrucible;

namespace {

const Monomial q1 = Monomial::q(1);
Monomial qp(Frac e) { return Monomial::q(e); }
Monomial mono(CycRat c, Frac e) { return {std::move(c), e}; }

void expect_equal(const ZSeries& a, const ZSeries& b, std::int64_t n) {
    int lo = std::min(a.min_degree(), b.min_degree()), hi = std::max(a.max_degree(), b.max_degree());
    for (int d = lo; d <= hi; ++d) {
        QSeries x = a.coeff(d), y = b.coeff(d);
        ASSERT_GE(x.truncation(), n) << d;
        ASSERT_GE(y.truncation(), n) << d;
        auto m = first_mismatch(x, y, n);
        EXPECT_EQ(m, std::nullopt) << "z^" << d << " q^" << *m << "\n" << x.str(6) << "\n" << y.str(6);
    }
}

ZSeries mirror(const ZSeries& x) { return x.substitute(1, 0, -1); }

} // namespace

TEST(Rogers, LowDegrees) {
    SeriesContext ctx(1, 30);
    Monomial a = qp(3);
    expect_equal(rogers_poly(0, {a, q1}, ctx), ZSeries(QSeries::one(ctx)), 30);
    QSeries c1 = pochhammer({a, q1, 1}, ctx) * inverse_pochhammer({q1, q1, 1}, ctx);
    ZSeries expect(ctx);
    expect.set(1, c1);
    expect.set(-1, c1);
    expect_equal(rogers_poly(1, {a, q1}, ctx), expect, 30);
}

TEST(Rogers, MirrorSymmetry) {
    SeriesContext ctx(2, 40);
    for (long n = 0; n <= 6; ++n) {
        ZSeries c = rogers_poly(n, {mono(CycRat::omega(), Frac(1, 2)), q1}, ctx);
        expect_equal(c, mirror(c), 40);
        ZSeries p = aw_poly(n, {qp(Frac(1, 2)), mono(-1, 1), qp(2), mono(CycRat::omega(), Frac(3, 2)), q1}, ctx);
        expect_equal(p, mirror(p), 40);
    }
}

TEST(AskeyWilson, PermutationSymmetry) {
    SeriesContext ctx(2, 30);
    std::array<Monomial, 4> ps{qp(Frac(1, 2)), mono(-1, 1), qp(Frac(3, 2)), mono(CycRat::omega(), 2)};
    std::array<int, 4> idx{0, 1, 2, 3};
    for (long n = 0; n <= 3; ++n) {
        ZSeries base = aw_poly(n, {ps[0], ps[1], ps[2], ps[3], q1}, ctx);
        do {
            ZSeries other = aw_poly(n, {ps[static_cast<std::size_t>(idx[0])], ps[static_cast<std::size_t>(idx[1])],
                                        ps[static_cast<std::size_t>(idx[2])], ps[static_cast<std::size_t>(idx[3])], q1},
                                    ctx);
            expect_equal(base, other, 30);
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
}

TEST(AskeyWilson, RogersSpecializations) {
    SeriesContext ctx(2, 40);
    const Monomial h = qp(Frac(1, 2)), q2 = qp(2);
    Monomial a = qp(Frac(1, 2));
    for (long n = 0; n <= 4; ++n) {
        // C_n(x;a^2|q)
        ZSeries lhs = rogers_poly(n, {a * a, q1}, ctx);
        QSeries c = pochhammer({a.pow(4), q1, n}, ctx) *
                    inverse_pochhammer({q1, q1, n}, ctx) * inverse_pochhammer({-(a * a), q1, n}, ctx) *
                    inverse_pochhammer({a * a * h, q1, n}, ctx) * inverse_pochhammer({-(a * a * h), q1, n}, ctx);
        expect_equal(lhs, aw_poly(n, {a, -a, a * h, -(a * h), q1}, ctx) * ZSeries(c), 40);
        // C_n(x;a^2|q^2)
        ZSeries lhs2 = rogers_poly(n, {a * a, q2}, ctx);
        QSeries c2 = pochhammer({a * a, q1, n}, ctx) * inverse_pochhammer({q2, q2, n}, ctx) *
                     inverse_pochhammer({a * a * q1, q2, n}, ctx);
        expect_equal(lhs2, aw_poly(n, {a, -a, h, -h, q1}, ctx) * ZSeries(c2), 40);
        // C_{2n}(x;a|q) with p_n in z^2
        ZSeries lhs3 = rogers_poly(2 * n, {a, q1}, ctx);
        QSeries c3 = pochhammer({a * a, q2, n}, ctx) * inverse_pochhammer({q1, q1, 2 * n}, ctx) *
                     inverse_pochhammer({-a, q1, 2 * n}, ctx);
        ZSeries p3 = aw_poly(n, {a, a * q1, Monomial{-1, 0}, -q1, q2}, ctx).substitute(1, 0, 2);
        expect_equal(lhs3, p3 * ZSeries(c3), 40);
        // C_{2n+1}(x;a|q) = 2 (a^2;q^2)_{n+1}/(q,-a;q)_{2n+1} x p_n(2x^2-1;...)
        ZSeries lhs4 = rogers_poly(2 * n + 1, {a, q1}, ctx);
        QSeries c4 = pochhammer({a * a, q2, n + 1}, ctx) * inverse_pochhammer({q1, q1, 2 * n + 1}, ctx) *
                     inverse_pochhammer({-a, q1, 2 * n + 1}, ctx);
        ZSeries x2 = ZSeries::monomial(1, 0, 1, ctx) + ZSeries::monomial(1, 0, -1, ctx); // 2x
        ZSeries p4 = aw_poly(n, {a, a * q1, -q1, -q2, q2}, ctx).substitute(1, 0, 2);
        expect_equal(lhs4, p4 * x2 * ZSeries(c4), 40);
    }
}

TEST(Rogers, MinusHalf) {
    SeriesContext ctx(1, 30);
    for (Monomial a : {qp(1), qp(2), mono(CycRat::omega(), 1)}) {
        for (long n = 0; n <= 12; ++n) {
            QSeries lhs = rogers_at_minus_half(n, {a, q1}, ctx);
            QSeries rhs = rogers_minus_half_sum(n, {a, q1}, ctx);
            ASSERT_EQ(first_mismatch(lhs, rhs, 30), std::nullopt) << n;
        }
    }
    QSeries c1 = rogers_at_minus_half(1, {qp(2), q1}, ctx);
    QSeries expect = pochhammer({qp(2), q1, 1}, ctx) * inverse_pochhammer({q1, q1, 1}, ctx);
    EXPECT_EQ(first_mismatch(c1, -expect, 30), std::nullopt);
}

TEST(Rogers, MinusHalfBalancedForm) {
    SeriesContext ctx(2, 40);
    Monomial a = qp(Frac(1, 2));
    for (long n = 0; n <= 8; ++n)
        EXPECT_EQ(first_mismatch(rogers_minus_half_balanced(n, {a, q1}, ctx), rogers_minus_half_sum(n, {a, q1}, ctx), 40), std::nullopt)
            << n;
}

TEST(GeneratingFunctions, CoefficientsMatch) {
    struct Case {
        GenFun v;
        Monomial a;
        std::int64_t D;
    };
    for (Case c : {Case{GenFun::acg, qp(1), 1}, Case{GenFun::adg, qp(1), 1}, Case{GenFun::ncg, qp(1), 2},
                   Case{GenFun::acge, qp(1), 1}, Case{GenFun::acgm, qp(2), 1}}) {
        SeriesContext ctx(c.D, 20 * c.D);
        auto lhs = genfun_lhs(c.v, c.a, 4, ctx);
        for (long n = 0; n <= 4; ++n) {
            SCOPED_TRACE(to_string(c.v) + " n=" + std::to_string(n));
            expect_equal(lhs[static_cast<std::size_t>(n)], genfun_rhs(c.v, n, c.a, ctx), 20 * c.D);
        }
    }
}
