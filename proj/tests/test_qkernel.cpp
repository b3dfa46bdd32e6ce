#include <gtest/gtest.h>

#include "qrucible/qkernel.hpp"

using namespace qrucible;

namespace {

Monomial mono(CycRat c, Frac e) { return {std::move(c), e}; }

void expect_equal(const QSeries& a, const QSeries& b, std::int64_t n) {
    ASSERT_GE(a.truncation(), n);
    ASSERT_GE(b.truncation(), n);
    auto m = first_mismatch(a, b, n);
    EXPECT_EQ(m, std::nullopt) << "at " << *m << "\n" << a.str(8) << "\n" << b.str(8);
}

} // namespace

TEST(Pochhammer, Recurrence) {
    SeriesContext ctx(2, 60);
    Monomial a = mono(CycRat::omega(), Frac(-3, 2));
    Monomial b = Monomial::q(Frac(1, 2));
    for (long n = 0; n < 8; ++n) {
        QSeries lhs = pochhammer({a, b, n + 1}, ctx);
        QSeries rhs = pochhammer({a, b, n}, ctx);
        Monomial f = a * b.pow(n);
        rhs.mul_binomial(f.coeff, ctx.scaled(f.exp));
        expect_equal(lhs, rhs, 40);
    }
}

TEST(Pochhammer, Splitting) {
    SeriesContext ctx(1, 50);
    Monomial a = mono(-1, 2), b = Monomial::q(3);
    QSeries whole = pochhammer({a, b, 9}, ctx);
    QSeries split = pochhammer({a, b, 4}, ctx) * pochhammer({a * b.pow(4), b, 5}, ctx);
    expect_equal(whole, split, 50);
    QSeries inf = pochhammer({a, b, std::nullopt}, ctx);
    QSeries inf2 = pochhammer({a, b, 4}, ctx) * pochhammer({a * b.pow(4), b, std::nullopt}, ctx);
    expect_equal(inf, inf2, 50);
    expect_equal(inf * inverse_pochhammer({a, b, std::nullopt}, ctx), QSeries::one(ctx), 50);
}

TEST(Pochhammer, NegativeExponentsStayExact) {
    SeriesContext ctx(1, 30);
    QSeries p = pochhammer({Monomial::q(-5), Monomial::q(1), 3}, ctx);
    // (1-q^-5)(1-q^-4)(1-q^-3) = -q^-12 (1-q^3)(1-q^4)(1-q^5)
    QSeries expect = QSeries::monomial(-1, -12, ctx);
    expect.mul_binomial(1, 3);
    expect.mul_binomial(1, 4);
    expect.mul_binomial(1, 5);
    expect_equal(p, expect, 30);
    EXPECT_EQ(p.truncation(), 30);
    EXPECT_TRUE(pochhammer({Monomial::q(-2), Monomial::q(1), 5}, ctx).is_zero());
    EXPECT_THROW((void)pochhammer({Monomial::q(1), Monomial::q(0), std::nullopt}, ctx), Error);
}

TEST(Phi, EulerIdentities) {
    SeriesContext ctx(1, 60);
    Monomial z = mono(CycRat::omega(), 1);
    QSeries lhs = phi({{}, {}, Monomial::q(1), -z}, ctx);
    expect_equal(lhs, pochhammer({-z, Monomial::q(1), std::nullopt}, ctx), 60);
    QSeries lhs2 = phi({{Monomial{0, 0}}, {}, Monomial::q(1), z}, ctx);
    expect_equal(lhs2, inverse_pochhammer({z, Monomial::q(1), std::nullopt}, ctx), 60);
}

TEST(Phi, RogersRamanujan) {
    SeriesContext ctx(1, 60);
    QSeries g = phi({{}, {Monomial{0, 0}}, Monomial::q(1), Monomial::q(1)}, ctx);
    QSeries rhs = inverse_pochhammer({Monomial::q(1), Monomial::q(5), std::nullopt}, ctx) *
                  inverse_pochhammer({Monomial::q(4), Monomial::q(5), std::nullopt}, ctx);
    expect_equal(g, rhs, 60);
}

TEST(Phi, QBinomialTheorem) {
    SeriesContext ctx(4, 120);
    Monomial a = mono(CycRat::omega2(), Frac(-1, 4)), z = Monomial::q(Frac(1, 2));
    QSeries lhs = phi({{a}, {}, Monomial::q(1), z}, ctx);
    QSeries rhs = pochhammer({a * z, Monomial::q(1), std::nullopt}, ctx) *
                  inverse_pochhammer({z, Monomial::q(1), std::nullopt}, ctx);
    expect_equal(lhs, rhs, 120);
}

TEST(Phi, TerminatingAndErrors) {
    SeriesContext ctx(1, 40);
    // 2phi1(q^-3, a; c; q, q) terminates after four terms
    QSeries s = phi({{Monomial::q(-3), Monomial::q(2)}, {Monomial::q(5)}, Monomial::q(1), Monomial::q(1)}, ctx);
    EXPECT_EQ(s.truncation(), 40);
    // q-Chu-Vandermonde: (c/a;q)_n/(c;q)_n a^n
    QSeries rhs = pochhammer({Monomial::q(3), Monomial::q(1), 3}, ctx) * inverse_pochhammer({Monomial::q(5), Monomial::q(1), 3}, ctx);
    rhs.shift(6);
    expect_equal(s, rhs, 40);
    EXPECT_THROW((void)phi({{Monomial::q(2)}, {Monomial::q(-1)}, Monomial::q(1), Monomial::q(1)}, ctx), Error);
    try {
        (void)phi({{Monomial::q(1), Monomial::q(1), Monomial::q(1)}, {}, Monomial::q(1), Monomial::q(1)}, ctx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonSummable);
    }
}

TEST(MultiSum, CapparelliProduct) {
    SeriesContext ctx(1, 100);
    QSeries lhs = multisum(builtin::capparelli(), ctx);
    QSeries rhs = inverse_pochhammer({Monomial::q(3), Monomial::q(6), std::nullopt}, ctx) *
                  inverse_pochhammer({Monomial::q(2), Monomial::q(12), std::nullopt}, ctx) *
                  inverse_pochhammer({Monomial::q(10), Monomial::q(12), std::nullopt}, ctx);
    expect_equal(lhs, rhs, 100);
}

TEST(MultiSum, KanadeRussellFirst) {
    SeriesContext ctx(1, 50);
    QSeries lhs = multisum(builtin::kanade_russell_F(Monomial::q(1), Monomial::q(0), Monomial::q(3)), ctx);
    QSeries rhs = pochhammer({Monomial::q(3), Monomial::q(12), std::nullopt}, ctx) *
                  inverse_pochhammer({Monomial::q(1), Monomial::q(4), std::nullopt}, ctx) *
                  inverse_pochhammer({Monomial::q(2), Monomial::q(4), std::nullopt}, ctx);
    expect_equal(lhs, rhs, 50);
}

TEST(MultiSum, DivergentSpecRejected) {
    MultiSumSpec s = builtin::capparelli();
    s.quadratic[0][1] = s.quadratic[1][0] = Frac(-1);
    EXPECT_THROW((void)multisum(s, SeriesContext(1, 20)), Error);
}

TEST(Theta, TripleProduct) {
    SeriesContext ctx(2, 100);
    Monomial z = mono(CycRat::omega(), Frac(1, 2));
    QSeries lhs = pochhammer({Monomial::q(1), Monomial::q(1), std::nullopt}, ctx) *
                  pochhammer({z, Monomial::q(1), std::nullopt}, ctx) *
                  pochhammer({Monomial::q(1) / z, Monomial::q(1), std::nullopt}, ctx);
    expect_equal(lhs, jtp_sum(z, ctx), 100);
}
