#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "error.hpp"

namespace qrucible {

/// Small exact rational used for exponents of q. Always reduced, den > 0.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Frac() = default;
    constexpr Frac(std::int64_t n) : num(n), den(1) {} // NOLINT: implicit from integers is intended
    Frac(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) raise(ErrorKind::DivisionByZero, "exponent with zero denominator");
        normalize();
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool is_integer() const { return den == 1; }

    /// Floor of the rational value.
    std::int64_t floor() const {
        auto q = num / den;
        if ((num % den != 0) && (num < 0)) --q;
        return q;
    }

    friend Frac operator+(Frac a, Frac b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Frac operator-(Frac a, Frac b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Frac operator*(Frac a, Frac b) { return {a.num * b.num, a.den * b.den}; }
    friend Frac operator/(Frac a, Frac b) {
        if (b.num == 0) raise(ErrorKind::DivisionByZero, "exponent division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    Frac operator-() const { return {-num, den}; }
    Frac& operator+=(Frac o) { return *this = *this + o; }
    Frac& operator-=(Frac o) { return *this = *this - o; }

    friend bool operator==(const Frac&, const Frac&) = default;
    friend auto operator<=>(Frac a, Frac b) { return a.num * b.den <=> b.num * a.den; }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    friend std::ostream& operator<<(std::ostream& os, const Frac& f) { return os << f.str(); }
};

/// Exponent in units of 1/denom; throws ExponentNotRepresentable otherwise.
inline std::int64_t scale_exponent(Frac e, std::int64_t denom) {
    if (denom % e.den != 0)
        raise(ErrorKind::ExponentNotRepresentable,
              "exponent " + e.str() + " not representable with denominator " + std::to_string(denom));
    return e.num * (denom / e.den);
}

} // namespace qrucible
