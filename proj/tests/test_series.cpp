#include <gtest/gtest.h>

#include <random>

#include "qrucible/qkernel.hpp"

using namespace qrucible;

namespace {

// p(n) by the standard coin-change recurrence, independent of the series code.
std::vector<long long> partition_numbers(int n) {
    std::vector<long long> p(static_cast<std::size_t>(n), 0);
    p[0] = 1;
    for (int part = 1; part < n; ++part)
        for (int k = part; k < n; ++k) p[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k - part)];
    return p;
}

QSeries random_series(std::mt19937& rng, const SeriesContext& ctx) {
    std::uniform_int_distribution<long> c(-5, 5), v(-3, 3);
    std::int64_t val = v(rng);
    std::vector<CycRat> cs;
    for (std::int64_t e = val; e < ctx.order; ++e) cs.emplace_back(BigRat(c(rng)), BigRat(c(rng)));
    cs[0] = CycRat(1) + CycRat::omega();
    return QSeries::from_coeffs(val, cs, ctx.order, ctx);
}

} // namespace

TEST(Series, PartitionGeneratingFunction) {
    SeriesContext ctx(1, 80);
    QSeries inv = inverse_pochhammer({Monomial::q(1), Monomial::q(1), std::nullopt}, ctx);
    auto p = partition_numbers(80);
    ASSERT_EQ(inv.truncation(), 80);
    for (int n = 0; n < 80; ++n) EXPECT_EQ(inv.coeff(n), CycRat(static_cast<long>(p[static_cast<std::size_t>(n)]))) << n;
}

TEST(Series, PentagonalNumberTheorem) {
    SeriesContext ctx(1, 120);
    QSeries e = pochhammer({Monomial::q(1), Monomial::q(1), std::nullopt}, ctx);
    std::vector<long> expect(120, 0);
    for (long k = -10; k <= 10; ++k) {
        long g = k * (3 * k - 1) / 2;
        if (g < 120) expect[static_cast<std::size_t>(g)] += (k % 2 ? -1 : 1);
    }
    for (int n = 0; n < 120; ++n) EXPECT_EQ(e.coeff(n), CycRat(expect[static_cast<std::size_t>(n)])) << n;
    EXPECT_EQ(e.str(5), "1*q^(0) + (-1)*q^(1) + (-1)*q^(2) + 1*q^(5) + 1*q^(7) + ... + O(q^(120))");
}

TEST(Series, RingAxioms) {
    std::mt19937 rng(11);
    SeriesContext ctx(2, 24);
    for (int i = 0; i < 20; ++i) {
        QSeries a = random_series(rng, ctx), b = random_series(rng, ctx), c = random_series(rng, ctx);
        QSeries ab = a * b, ba = b * a;
        EXPECT_EQ(ab.truncation(), ba.truncation());
        EXPECT_TRUE(equal_to_order(ab, ba, ab.truncation()));
        QSeries l = (a * b) * c, r = a * (b * c);
        std::int64_t t = std::min(l.truncation(), r.truncation());
        EXPECT_TRUE(equal_to_order(l, r, t));
        QSeries d1 = a * (b + c), d2 = a * b + a * c;
        t = std::min(d1.truncation(), d2.truncation());
        EXPECT_TRUE(equal_to_order(d1, d2, t));
        QSeries one = a * a.inverse();
        EXPECT_TRUE(equal_to_order(one, QSeries::one(ctx), one.truncation()));
    }
}

TEST(Series, TruncationRules) {
    SeriesContext ctx(1, 20);
    QSeries x = QSeries::monomial(1, -3, ctx);
    x += QSeries::one(ctx);
    QSeries y = QSeries::monomial(2, 2, ctx);
    y.truncate_in_place(10);
    QSeries p = x * y;
    EXPECT_EQ(p.valuation(), -1);
    EXPECT_EQ(p.truncation(), 7); // min(20 + 2, 10 - 3)
    QSeries inv = x.inverse();
    EXPECT_EQ(inv.valuation(), 3);
    EXPECT_EQ(inv.truncation(), 20); // 23 - 0 capped at the order
    EXPECT_THROW((void)p.coeff(7), Error);
}

TEST(Series, BinomialRoundTrip) {
    std::mt19937 rng(3);
    SeriesContext ctx(1, 30);
    for (std::int64_t e : {-4, -1, 1, 3}) {
        QSeries a = random_series(rng, ctx);
        QSeries b = a;
        b.mul_binomial(CycRat::omega(), e);
        b.div_binomial(CycRat::omega(), e);
        std::int64_t t = std::min(a.truncation(), b.truncation());
        EXPECT_TRUE(equal_to_order(a, b, t)) << e;
        EXPECT_GE(t, 30 - 2 * std::max<std::int64_t>(0, -e) - 3);
    }
    QSeries one = QSeries::one(ctx);
    EXPECT_THROW(one.div_binomial(1, 0), Error);
}

TEST(Series, FirstMismatch) {
    SeriesContext ctx(1, 10);
    QSeries a = QSeries::one(ctx), b = QSeries::one(ctx);
    b += QSeries::monomial(CycRat::omega(), 6, ctx);
    EXPECT_EQ(first_mismatch(a, b, 10), 6);
    EXPECT_EQ(first_mismatch(a, b, 6), std::nullopt);
    QSeries c = a.truncated(5);
    EXPECT_THROW((void)equal_to_order(c, a, 8), Error);
    QSeries d = QSeries::one(SeriesContext(2, 10));
    EXPECT_THROW((void)equal_to_order(a, d, 5), Error);
}
