#include <gtest/gtest.h>

#include <random>

#include "qrucible/cyclotomic.hpp"
#include "qrucible/frac.hpp"

using qrucible::BigRat;
using qrucible::CycRat;
using qrucible::Frac;

namespace {

CycRat random_element(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
    return {BigRat(num(rng), den(rng)), BigRat(num(rng), den(rng))};
}

} // namespace

TEST(Cyclotomic, OmegaIsPrimitiveCubeRoot) {
    CycRat w = CycRat::omega();
    EXPECT_FALSE(w.is_one());
    EXPECT_EQ(w * w, CycRat::omega2());
    EXPECT_TRUE((w * w * w).is_one());
    EXPECT_TRUE((CycRat(1) + w + w * w).is_zero());
    EXPECT_EQ(CycRat::omega_pow(-1), CycRat::omega2());
    EXPECT_EQ(CycRat::omega_pow(7), w);
}

TEST(Cyclotomic, FieldAxioms) {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        CycRat a = random_element(rng), b = random_element(rng), c = random_element(rng);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b - b, a);
        if (!a.is_zero()) {
            EXPECT_TRUE((a * a.inv()).is_one());
            EXPECT_EQ(b / a * a, b);
        }
        EXPECT_EQ((a * b).norm(), a.norm() * b.norm());
        EXPECT_EQ(a * a.conj(), CycRat(a.norm()));
        CycRat acc = b;
        acc.add_mul(a, c);
        EXPECT_EQ(acc, b + a * c);
    }
}

TEST(Cyclotomic, Powers) {
    CycRat x{BigRat(2, 3), BigRat(-1, 5)};
    EXPECT_EQ(x.pow(3), x * x * x);
    EXPECT_EQ(x.pow(-2), (x * x).inv());
    EXPECT_TRUE(x.pow(0).is_one());
}

TEST(Cyclotomic, InverseOfZeroThrows) {
    try {
        (void)CycRat().inv();
        FAIL();
    } catch (const qrucible::Error& e) {
        EXPECT_EQ(e.kind(), qrucible::ErrorKind::DivisionByZero);
    }
}

TEST(Cyclotomic, Rendering) {
    EXPECT_EQ(CycRat::omega().str(), "w");
    EXPECT_EQ((-CycRat::omega()).str(), "-w");
    EXPECT_EQ(CycRat(BigRat(1, 2)).str(), "1/2");
}

TEST(FracTest, Arithmetic) {
    Frac a(3, 4), b(-1, 6);
    EXPECT_EQ(a + b, Frac(7, 12));
    EXPECT_EQ(a * b, Frac(-1, 8));
    EXPECT_EQ(Frac(-7, 2).floor(), -4);
    EXPECT_EQ(qrucible::scale_exponent(Frac(3, 4), 4), 3);
    EXPECT_THROW((void)qrucible::scale_exponent(Frac(1, 3), 4), qrucible::Error);
}
