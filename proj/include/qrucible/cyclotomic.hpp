#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>

#include "error.hpp"

namespace qrucible {

using BigRat = mpq_class;

/// An element re + om*w of Q(w), w a primitive cube root of unity.
///
/// The basis {1, w} is used with w^2 rewritten as -1 - w, so equality is
/// componentwise. Components are arbitrary-precision rationals kept in
/// canonical (reduced) form by GMP.
class CycRat {
public:
    CycRat() = default;
    CycRat(long v) : re_(v) {} // NOLINT: integers embed implicitly
    CycRat(BigRat re) : re_(std::move(re)) { re_.canonicalize(); } // NOLINT
    CycRat(BigRat re, BigRat om) : re_(std::move(re)), om_(std::move(om)) {
        re_.canonicalize();
        om_.canonicalize();
    }

    static CycRat omega() { return {0, 1}; }
    static CycRat omega2() { return {-1, -1}; }
    /// w^k for any integer k.
    static CycRat omega_pow(long k) {
        switch (((k % 3) + 3) % 3) {
        case 0: return 1;
        case 1: return omega();
        default: return omega2();
        }
    }

    const BigRat& re() const { return re_; }
    const BigRat& om() const { return om_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(om_) == 0; }
    bool is_one() const { return sgn(om_) == 0 && re_ == 1; }
    bool is_rational() const { return sgn(om_) == 0; }

    /// N(a + bw) = a^2 - ab + b^2.
    BigRat norm() const { return BigRat(re_ * re_ - re_ * om_ + om_ * om_); }

    /// Galois conjugate a + b w^2 = (a - b) - b w.
    CycRat conj() const { return {BigRat(re_ - om_), BigRat(-om_)}; }

    CycRat inv() const {
        if (is_zero()) raise(ErrorKind::DivisionByZero, "inverse of zero in Q(w)");
        if (is_rational()) return BigRat(1 / re_);
        BigRat n = norm();
        CycRat c = conj();
        return {BigRat(c.re_ / n), BigRat(c.om_ / n)};
    }

    CycRat operator-() const { return {BigRat(-re_), BigRat(-om_)}; }

    CycRat& operator+=(const CycRat& o) {
        re_ += o.re_;
        om_ += o.om_;
        return *this;
    }
    CycRat& operator-=(const CycRat& o) {
        re_ -= o.re_;
        om_ -= o.om_;
        return *this;
    }
    CycRat& operator*=(const CycRat& o) {
        if (o.is_rational()) {
            re_ *= o.re_;
            om_ *= o.re_;
        } else if (is_rational()) {
            om_ = re_ * o.om_;
            re_ *= o.re_;
        } else {
            // (a+bw)(c+dw) = (ac - bd) + (ad + bc - bd) w
            BigRat bd = om_ * o.om_;
            BigRat nre = re_ * o.re_ - bd;
            BigRat nom = re_ * o.om_ + om_ * o.re_ - bd;
            re_ = std::move(nre);
            om_ = std::move(nom);
        }
        return *this;
    }
    CycRat& operator/=(const CycRat& o) { return *this *= o.inv(); }

    /// this += a * b without materialising the product when possible.
    void add_mul(const CycRat& a, const CycRat& b) {
        if (a.is_rational() && b.is_rational()) {
            re_ += a.re_ * b.re_;
            return;
        }
        CycRat p = a;
        p *= b;
        *this += p;
    }

    friend CycRat operator+(CycRat a, const CycRat& b) { return a += b; }
    friend CycRat operator-(CycRat a, const CycRat& b) { return a -= b; }
    friend CycRat operator*(CycRat a, const CycRat& b) { return a *= b; }
    friend CycRat operator/(CycRat a, const CycRat& b) { return a /= b; }
    friend bool operator==(const CycRat& a, const CycRat& b) { return a.re_ == b.re_ && a.om_ == b.om_; }

    CycRat pow(long k) const {
        if (k < 0) return inv().pow(-k);
        CycRat r = 1, b = *this;
        while (k) {
            if (k & 1) r *= b;
            b *= b;
            k >>= 1;
        }
        return r;
    }

    /// Canonical text "a + b*w" (terms omitted when zero).
    std::string str() const {
        if (is_rational()) return re_.get_str();
        std::string om = (om_ == 1) ? "w" : (om_ == -1) ? "-w" : om_.get_str() + "*w";
        if (sgn(re_) == 0) return om;
        if (sgn(om_) < 0) {
            BigRat a = -om_;
            std::string pos = (a == 1) ? "w" : a.get_str() + "*w";
            return re_.get_str() + " - " + pos;
        }
        return re_.get_str() + " + " + om;
    }
    friend std::ostream& operator<<(std::ostream& os, const CycRat& c) { return os << c.str(); }

private:
    BigRat re_{0};
    BigRat om_{0};
};

} // namespace qrucible
