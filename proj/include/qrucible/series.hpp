#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "frac.hpp"

namespace qrucible {

/// Exponent grid and working order shared by the series of one computation.
/// Exponents are stored as integers in units of 1/denom; series are known
/// for scaled exponents below `order`.
struct SeriesContext {
    std::int64_t denom = 1;
    std::int64_t order = 1;

    SeriesContext() = default;
    SeriesContext(std::int64_t d, std::int64_t n) : denom(d), order(n) {
        if (denom < 1) raise(ErrorKind::ContextMismatch, "denominator must be >= 1");
        if (order < 1) raise(ErrorKind::ContextMismatch, "order must be > 0");
    }

    SeriesContext with_order(std::int64_t n) const { return {denom, std::max<std::int64_t>(n, 1)}; }
    std::int64_t scaled(Frac e) const { return scale_exponent(e, denom); }
    Frac unscaled(std::int64_t e) const { return {e, denom}; }
};

/// c * q^exp with a rational exponent.
struct Monomial {
    CycRat coeff = 1;
    Frac exp = 0;

    static Monomial q(Frac e) { return {1, e}; }
    bool is_zero() const { return coeff.is_zero(); }

    friend Monomial operator*(const Monomial& a, const Monomial& b) { return {a.coeff * b.coeff, a.exp + b.exp}; }
    friend Monomial operator/(const Monomial& a, const Monomial& b) { return {a.coeff / b.coeff, a.exp - b.exp}; }
    Monomial operator-() const { return {-coeff, exp}; }
    Monomial pow(long k) const { return {coeff.pow(k), exp * Frac(k)}; }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.coeff == b.coeff && a.exp == b.exp; }

    /// Square root; defined only for coefficient 1.
    Monomial sqrt() const {
        if (!coeff.is_one()) raise(ErrorKind::ExponentNotRepresentable, "square root of monomial with coefficient " + coeff.str());
        return {1, exp * Frac(1, 2)};
    }

    std::string str() const {
        if (exp == Frac(0)) return coeff.str();
        return "(" + coeff.str() + ")*q^(" + exp.str() + ")";
    }
};

/// A truncated Laurent-Puiseux series sum_{k} c_k q^{k/D}, known exactly for
/// scaled exponents k < truncation. Coefficients are stored densely from the
/// valuation up to the truncation; the leading stored coefficient is nonzero
/// unless the series is zero on its window, in which case val == trunc.
class QSeries {
public:
    QSeries() = default;

    static QSeries zero(const SeriesContext& ctx, std::int64_t trunc) {
        QSeries s;
        s.ctx_ = ctx;
        s.trunc_ = std::min(trunc, ctx.order);
        s.val_ = s.trunc_;
        return s;
    }
    static QSeries zero(const SeriesContext& ctx) { return zero(ctx, ctx.order); }

    /// c * q^{e/D}, exact up to the context order.
    static QSeries monomial(const CycRat& c, std::int64_t e, const SeriesContext& ctx) {
        QSeries s = zero(ctx);
        if (c.is_zero() || e >= s.trunc_) return s;
        s.val_ = e;
        s.c_.assign(static_cast<std::size_t>(s.trunc_ - e), CycRat());
        s.c_[0] = c;
        return s;
    }
    static QSeries constant(const CycRat& c, const SeriesContext& ctx) { return monomial(c, 0, ctx); }
    static QSeries one(const SeriesContext& ctx) { return constant(1, ctx); }

    /// Build from dense coefficients starting at scaled exponent `val`.
    static QSeries from_coeffs(std::int64_t val, std::vector<CycRat> coeffs, std::int64_t trunc, const SeriesContext& ctx) {
        QSeries s;
        s.ctx_ = ctx;
        s.val_ = val;
        s.trunc_ = trunc;
        s.c_ = std::move(coeffs);
        s.c_.resize(static_cast<std::size_t>(std::max<std::int64_t>(trunc - val, 0)));
        s.cap();
        return s;
    }

    const SeriesContext& context() const { return ctx_; }
    std::int64_t valuation() const { return val_; }
    std::int64_t truncation() const { return trunc_; }
    bool is_zero() const { return val_ >= trunc_; }
    const std::vector<CycRat>& coeffs() const { return c_; }

    /// Coefficient of q^{e/D}.
    CycRat coeff(std::int64_t e) const {
        if (e >= trunc_)
            raise(ErrorKind::InsufficientTruncation,
                  "coefficient at " + ctx_.unscaled(e).str() + " requested, series known below " + ctx_.unscaled(trunc_).str());
        if (e < val_) return {};
        return c_[static_cast<std::size_t>(e - val_)];
    }
    const CycRat& leading() const { return c_.front(); }

    /// Single nonzero term, if the series is exactly c*q^e on its window.
    std::optional<std::pair<CycRat, std::int64_t>> as_single_term() const {
        if (is_zero()) return std::nullopt;
        for (std::size_t k = 1; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return std::nullopt;
        return std::make_pair(c_.front(), val_);
    }

    /// Lower the truncation to `n` (no-op if already lower).
    QSeries truncated(std::int64_t n) const {
        QSeries s = *this;
        s.truncate_in_place(n);
        return s;
    }
    void truncate_in_place(std::int64_t n) {
        if (n >= trunc_) return;
        trunc_ = n;
        if (val_ >= n) {
            val_ = n;
            c_.clear();
            return;
        }
        c_.resize(static_cast<std::size_t>(n - val_));
        normalize();
    }

    /// Raise the context cap (used when a computation needs a working order).
    QSeries with_context(const SeriesContext& ctx) const {
        if (ctx.denom != ctx_.denom) raise(ErrorKind::ContextMismatch, "denominator mismatch");
        QSeries s = *this;
        s.ctx_ = ctx;
        s.cap();
        return s;
    }

    QSeries operator-() const {
        QSeries s = *this;
        for (auto& c : s.c_) c = -c;
        return s;
    }

    QSeries& operator+=(const QSeries& o) { return accumulate(o, false); }
    QSeries& operator-=(const QSeries& o) { return accumulate(o, true); }
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }

    friend QSeries operator*(const QSeries& x, const QSeries& y) {
        check_ctx(x, y);
        SeriesContext ctx = x.ctx_.order >= y.ctx_.order ? x.ctx_ : y.ctx_;
        std::int64_t trunc = std::min({x.trunc_ + y.val_, y.trunc_ + x.val_, ctx.order});
        std::int64_t val = x.val_ + y.val_;
        if (x.is_zero() || y.is_zero() || val >= trunc) return zero(ctx, trunc);
        auto n = static_cast<std::size_t>(trunc - val);
        std::vector<CycRat> out(n);
        std::size_t nx = std::min(n, x.c_.size());
        for (std::size_t i = 0; i < nx; ++i) {
            const CycRat& a = x.c_[i];
            if (a.is_zero()) continue;
            std::size_t ny = std::min(n - i, y.c_.size());
            for (std::size_t j = 0; j < ny; ++j) {
                const CycRat& b = y.c_[j];
                if (b.is_zero()) continue;
                out[i + j].add_mul(a, b);
            }
        }
        return from_coeffs(val, std::move(out), trunc, ctx);
    }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    /// Multiply by the scalar c.
    QSeries& scale(const CycRat& c) {
        if (c.is_zero()) {
            val_ = trunc_;
            c_.clear();
            return *this;
        }
        if (c.is_one()) return *this;
        for (auto& x : c_)
            if (!x.is_zero()) x *= c;
        return *this;
    }

    /// Multiply by q^{e/D}.
    QSeries& shift(std::int64_t e) {
        val_ += e;
        trunc_ += e;
        cap();
        return *this;
    }

    QSeries& mul_monomial(const CycRat& c, std::int64_t e) {
        shift(e);
        return scale(c);
    }

    /// Multiply by the exact binomial (1 - c q^{e/D}).
    QSeries& mul_binomial(const CycRat& c, std::int64_t e) {
        if (c.is_zero()) return *this;
        if (e > 0) {
            // in place, high to low
            for (std::size_t k = c_.size(); k-- > static_cast<std::size_t>(e);) {
                const CycRat& src = c_[k - static_cast<std::size_t>(e)];
                if (src.is_zero()) continue;
                CycRat t = src;
                t *= c;
                c_[k] -= t;
            }
            normalize();
            return *this;
        }
        if (e == 0) return scale(CycRat(1) - c);
        QSeries t = *this;
        t.mul_monomial(c, e);
        *this -= t;
        return *this;
    }

    /// Divide by the exact binomial (1 - c q^{e/D}).
    QSeries& div_binomial(const CycRat& c, std::int64_t e) {
        if (c.is_zero()) return *this;
        if (e > 0) {
            for (std::size_t k = static_cast<std::size_t>(e); k < c_.size(); ++k) {
                const CycRat& src = c_[k - static_cast<std::size_t>(e)];
                if (src.is_zero()) continue;
                CycRat t = src;
                t *= c;
                c_[k] += t;
            }
            return *this;
        }
        if (e == 0) {
            CycRat d = CycRat(1) - c;
            if (d.is_zero()) raise(ErrorKind::ZeroDenominator, "division by the zero factor (1 - 1)");
            return scale(d.inv());
        }
        // 1 - c q^e = -c q^e (1 - c^{-1} q^{-e})
        CycRat ci = c.inv();
        mul_monomial(-ci, -e);
        return div_binomial(ci, -e);
    }

    QSeries inverse() const {
        if (is_zero()) raise(ErrorKind::NotInvertible, "series is zero on its window (known below " + ctx_.unscaled(trunc_).str() + ")");
        std::int64_t rel = trunc_ - val_;
        std::int64_t trunc = std::min(-val_ + rel, ctx_.order);
        std::int64_t val = -val_;
        if (val >= trunc) return zero(ctx_, trunc);
        auto n = static_cast<std::size_t>(trunc - val);
        std::vector<CycRat> b(n);
        CycRat a0inv = c_[0].inv();
        b[0] = a0inv;
        for (std::size_t k = 1; k < n; ++k) {
            CycRat acc;
            std::size_t top = std::min(k, c_.size() - 1);
            for (std::size_t i = 1; i <= top; ++i) {
                if (c_[i].is_zero() || b[k - i].is_zero()) continue;
                acc.add_mul(c_[i], b[k - i]);
            }
            if (acc.is_zero()) continue;
            acc *= a0inv;
            b[k] = -acc;
        }
        return from_coeffs(val, std::move(b), trunc, ctx_);
    }

    /// Exact agreement of all coefficients with exponent < upTo.
    friend bool equal_to_order(const QSeries& x, const QSeries& y, std::int64_t upTo) {
        return first_mismatch(x, y, upTo) == std::nullopt;
    }
    /// Smallest scaled exponent below upTo where x and y differ.
    friend std::optional<std::int64_t> first_mismatch(const QSeries& x, const QSeries& y, std::int64_t upTo) {
        check_ctx(x, y);
        if (x.trunc_ < upTo || y.trunc_ < upTo)
            raise(ErrorKind::InsufficientTruncation,
                  "comparison to " + x.ctx_.unscaled(upTo).str() + " but series known below " +
                      x.ctx_.unscaled(std::min(x.trunc_, y.trunc_)).str());
        std::int64_t lo = std::min(x.val_, y.val_);
        for (std::int64_t e = lo; e < upTo; ++e)
            if (!(x.coeff(e) == y.coeff(e))) return e;
        return std::nullopt;
    }

    /// "c0*q^(e0) + c1*q^(e1) + ... + O(q^(N))".
    std::string str(std::size_t max_terms = std::numeric_limits<std::size_t>::max()) const {
        std::ostringstream os;
        std::size_t shown = 0;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            if (shown == max_terms) {
                os << "... + ";
                break;
            }
            const CycRat& c = c_[k];
            std::string cs = c.str();
            if (!c.is_rational() || sgn(c.re()) < 0) cs = "(" + cs + ")";
            os << cs << "*q^(" << ctx_.unscaled(val_ + static_cast<std::int64_t>(k)).str() << ") + ";
            ++shown;
        }
        os << "O(q^(" << ctx_.unscaled(trunc_).str() << "))";
        return os.str();
    }

private:
    static void check_ctx(const QSeries& x, const QSeries& y) {
        if (x.ctx_.denom != y.ctx_.denom)
            raise(ErrorKind::ContextMismatch,
                  "series with denominators " + std::to_string(x.ctx_.denom) + " and " + std::to_string(y.ctx_.denom));
    }

    QSeries& accumulate(const QSeries& o, bool negate) {
        check_ctx(*this, o);
        if (o.ctx_.order > ctx_.order) ctx_ = o.ctx_;
        std::int64_t trunc = std::min(trunc_, o.trunc_);
        if (o.is_zero()) {
            truncate_in_place(trunc);
            return *this;
        }
        if (is_zero()) {
            std::int64_t t = trunc;
            *this = negate ? -o : o;
            truncate_in_place(t);
            return *this;
        }
        std::int64_t val = std::min(val_, o.val_);
        if (val >= trunc) {
            val_ = trunc_ = trunc;
            c_.clear();
            return *this;
        }
        if (val < val_) {
            c_.insert(c_.begin(), static_cast<std::size_t>(val_ - val), CycRat());
            val_ = val;
        }
        trunc_ = trunc;
        c_.resize(static_cast<std::size_t>(trunc - val));
        std::int64_t end = std::min(o.val_ + static_cast<std::int64_t>(o.c_.size()), trunc);
        for (std::int64_t e = o.val_; e < end; ++e) {
            const CycRat& src = o.c_[static_cast<std::size_t>(e - o.val_)];
            if (src.is_zero()) continue;
            auto& dst = c_[static_cast<std::size_t>(e - val_)];
            if (negate) dst -= src;
            else dst += src;
        }
        normalize();
        return *this;
    }

    void cap() {
        if (trunc_ > ctx_.order) {
            trunc_ = ctx_.order;
            if (val_ >= trunc_) {
                val_ = trunc_;
                c_.clear();
                return;
            }
            c_.resize(static_cast<std::size_t>(trunc_ - val_));
        }
        normalize();
    }

    void normalize() {
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero()) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            val_ = trunc_;
            return;
        }
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            val_ += static_cast<std::int64_t>(lead);
        }
    }

    SeriesContext ctx_;
    std::int64_t val_ = 0;
    std::int64_t trunc_ = 0;
    std::vector<CycRat> c_;
};

inline QSeries monomial_to_series(const Monomial& m, const SeriesContext& ctx) {
    return QSeries::monomial(m.coeff, ctx.scaled(m.exp), ctx);
}

} // namespace qrucible
