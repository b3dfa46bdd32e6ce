#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "series.hpp"

namespace qrucible {

/// c * q^q * z^z * t^t.
struct LMonomial {
    CycRat coeff = 1;
    Frac q = 0;
    int z = 0;
    int t = 0;

    LMonomial() = default;
    LMonomial(CycRat c, Frac qe = 0, int zd = 0, int td = 0) : coeff(std::move(c)), q(qe), z(zd), t(td) {}
    LMonomial(const Monomial& m) : coeff(m.coeff), q(m.exp) {} // NOLINT

    bool is_zero() const { return coeff.is_zero(); }
    bool is_scalar() const { return z == 0 && t == 0; }
    Monomial as_monomial() const { return {coeff, q}; }

    friend LMonomial operator*(const LMonomial& a, const LMonomial& b) {
        return {a.coeff * b.coeff, a.q + b.q, a.z + b.z, a.t + b.t};
    }
    friend LMonomial operator/(const LMonomial& a, const LMonomial& b) {
        return {a.coeff / b.coeff, a.q - b.q, a.z - b.z, a.t - b.t};
    }
    LMonomial operator-() const { return {-coeff, q, z, t}; }
    LMonomial pow(long k) const { return {coeff.pow(k), q * Frac(k), static_cast<int>(z * k), static_cast<int>(t * k)}; }
    friend bool operator==(const LMonomial& a, const LMonomial& b) {
        return a.coeff == b.coeff && a.q == b.q && a.z == b.z && a.t == b.t;
    }

    std::string str() const {
        std::string s = "(" + coeff.str() + ")";
        if (q != Frac(0)) s += "*q^(" + q.str() + ")";
        if (z != 0) s += "*z^(" + std::to_string(z) + ")";
        if (t != 0) s += "*t^(" + std::to_string(t) + ")";
        return s;
    }
};

/// Largest z-degree span any ZSeries may occupy.
inline constexpr int kMaxZSpan = 1 << 14;

/// Truncation marker for coefficients known to be exactly zero.
inline constexpr std::int64_t kExact = std::int64_t{1} << 60;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a >= kExact || b >= kExact) return kExact;
    return std::min(a + b, kExact);
}

/// Laurent polynomial in z with QSeries coefficients. Degrees outside the
/// stored window are zero, known below `outer_truncation()`.
class ZSeries {
public:
    ZSeries() = default;
    explicit ZSeries(const SeriesContext& ctx) : ctx_(ctx), outer_(kExact) {}
    explicit ZSeries(const QSeries& s) : ctx_(s.context()), outer_(kExact) { set(0, s); }

    static ZSeries monomial(const CycRat& c, std::int64_t qe, int zd, const SeriesContext& ctx) {
        ZSeries z(ctx);
        z.set(zd, QSeries::monomial(c, qe, ctx));
        return z;
    }

    const SeriesContext& context() const { return ctx_; }
    bool empty() const { return c_.empty(); }
    int min_degree() const { return lo_; }
    int max_degree() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    std::int64_t outer_truncation() const { return outer_; }

    QSeries coeff(int d) const {
        if (d < lo_ || d > max_degree()) return QSeries::zero(ctx_, outer_);
        return c_[static_cast<std::size_t>(d - lo_)];
    }

    void set(int d, QSeries s) {
        if (c_.empty()) {
            lo_ = d;
            c_.push_back(std::move(s));
        } else {
            if (d < lo_) {
                c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - d), QSeries::zero(ctx_, outer_));
                lo_ = d;
            } else if (d > max_degree()) {
                c_.resize(static_cast<std::size_t>(d - lo_ + 1), QSeries::zero(ctx_, outer_));
            }
            c_[static_cast<std::size_t>(d - lo_)] = std::move(s);
        }
        check_span();
        trim();
    }

    /// Smallest truncation over every z-degree.
    std::int64_t min_truncation() const {
        std::int64_t t = outer_;
        for (const auto& c : c_) t = std::min(t, c.truncation());
        return t;
    }
    /// Smallest valuation over the nonzero coefficients (or outer truncation).
    std::int64_t min_valuation() const {
        std::int64_t v = outer_;
        for (const auto& c : c_)
            if (!c.is_zero()) v = std::min(v, c.valuation());
        return v;
    }
    bool is_zero() const { return c_.empty(); }

    /// Apply f to every stored coefficient.
    template <class F>
    ZSeries& each(F&& f) {
        for (auto& c : c_) f(c);
        trim();
        return *this;
    }

    ZSeries& operator+=(const ZSeries& o) { return accumulate(o, false); }
    ZSeries& operator-=(const ZSeries& o) { return accumulate(o, true); }
    friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
    friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a -= b; }
    ZSeries operator-() const {
        ZSeries r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    /// Laurent convolution.
    friend ZSeries zmul(const ZSeries& x, const ZSeries& y) {
        SeriesContext ctx = x.ctx_.order >= y.ctx_.order ? x.ctx_ : y.ctx_;
        ZSeries r(ctx);
        // out-of-window degrees are zero with the operands' outer truncations;
        // their products contribute truncation bounds only.
        r.outer_ = std::min(sat_add(x.outer_, y.min_valuation()), sat_add(y.outer_, x.min_valuation()));
        if (x.c_.empty() || y.c_.empty()) return r;
        int lo = x.lo_ + y.lo_;
        int hi = x.max_degree() + y.max_degree();
        if (hi - lo > kMaxZSpan) raise(ErrorKind::WindowOverflow, "z-degree span " + std::to_string(hi - lo));
        std::vector<QSeries> out(static_cast<std::size_t>(hi - lo + 1), QSeries::zero(ctx, r.outer_));
        std::vector<bool> touched(out.size(), false);
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            for (std::size_t j = 0; j < y.c_.size(); ++j) {
                QSeries p = x.c_[i] * y.c_[j];
                auto& dst = out[i + j];
                if (!touched[i + j]) {
                    p.truncate_in_place(r.outer_);
                    dst = std::move(p);
                    touched[i + j] = true;
                } else {
                    dst += p;
                }
            }
        }
        r.lo_ = lo;
        r.c_ = std::move(out);
        r.trim();
        return r;
    }
    friend ZSeries operator*(const ZSeries& x, const ZSeries& y) { return zmul(x, y); }

    ZSeries& scale(const CycRat& c) { return each([&](QSeries& s) { s.scale(c); }); }

    /// Multiply by c q^{qe/D} z^{zd}.
    ZSeries& mul_monomial(const CycRat& c, std::int64_t qe, int zd) {
        lo_ += zd;
        outer_ = sat_add(outer_, qe);
        return each([&](QSeries& s) { s.mul_monomial(c, qe); });
    }

    /// Multiply by (1 - c q^{qe/D} z^{zd}).
    ZSeries& mul_binomial(const CycRat& c, std::int64_t qe, int zd) {
        if (zd == 0) return each([&](QSeries& s) { s.mul_binomial(c, qe); });
        ZSeries t = *this;
        t.mul_monomial(c, qe, zd);
        return *this -= t;
    }

    /// Divide by (1 - c q^{qe/D} z^{zd}). With zd != 0 the factor is expanded
    /// geometrically in c q^qe z^zd, which terminates only for qe > 0.
    ZSeries& div_binomial(const CycRat& c, std::int64_t qe, int zd) {
        if (c.is_zero()) return *this;
        if (zd == 0) return each([&](QSeries& s) { s.div_binomial(c, qe); });
        if (qe <= 0)
            raise(ErrorKind::WindowOverflow,
                  "1/(1 - m z^k) with non-positive q-exponent has no finite z-expansion outside a constant-term integral");
        ZSeries term = *this;
        ZSeries acc = *this;
        for (;;) {
            term.mul_monomial(c, qe, zd);
            if (term.is_zero()) break;
            acc += term;
        }
        acc.outer_ = std::min(acc.outer_, term.outer_);
        return *this = std::move(acc);
    }

    /// Substitute z -> c q^{qe/D} z^{zd}.
    ZSeries substitute(const CycRat& c, std::int64_t qe, int zd) const {
        ZSeries r(ctx_);
        r.outer_ = outer_;
        CycRat cinv = c.is_zero() ? CycRat() : c.inv();
        for (std::size_t k = 0; k < c_.size(); ++k) {
            int d = lo_ + static_cast<int>(k);
            if (c_[k].is_zero() && c_[k].truncation() >= outer_) continue;
            QSeries s = c_[k];
            if (d != 0 && c.is_zero()) raise(ErrorKind::DivisionByZero, "substituting z = 0 into a Laurent polynomial");
            s.mul_monomial(d >= 0 ? c.pow(d) : cinv.pow(-d), qe * d);
            r.add_at(zd * d, s);
        }
        r.trim();
        return r;
    }

    /// Same values under another context (capping at its order).
    ZSeries with_context(const SeriesContext& ctx) const {
        ZSeries r = *this;
        r.ctx_ = ctx;
        for (auto& c : r.c_) c = c.with_context(ctx);
        r.trim();
        return r;
    }

    /// Lower every truncation to n.
    ZSeries& truncate_in_place(std::int64_t n) {
        outer_ = std::min(outer_, n);
        return each([&](QSeries& s) { s.truncate_in_place(n); });
    }

    /// Coefficients agree for every z-degree below upTo in q.
    friend bool equal_to_order(const ZSeries& x, const ZSeries& y, std::int64_t upTo) {
        int lo = std::min(x.empty() ? 0 : x.lo_, y.empty() ? 0 : y.lo_);
        int hi = std::max(x.empty() ? 0 : x.max_degree(), y.empty() ? 0 : y.max_degree());
        for (int d = lo; d <= hi; ++d)
            if (!equal_to_order(x.coeff(d), y.coeff(d), upTo)) return false;
        if (x.outer_ < upTo || y.outer_ < upTo) raise(ErrorKind::InsufficientTruncation, "z-window tail known below requested order");
        return true;
    }

    std::string str(std::size_t max_terms = 6) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "[" << c_[k].str(max_terms) << "]*z^(" << (lo_ + static_cast<int>(k)) << ")";
        }
        if (first) os << "O(q^(" << ctx_.unscaled(outer_).str() << "))";
        return os.str();
    }

    void add_at(int d, const QSeries& s) {
        if (d < lo_ || d > max_degree() || c_.empty()) {
            set(d, s.truncated(std::min(s.truncation(), outer_)));
            return;
        }
        c_[static_cast<std::size_t>(d - lo_)] += s;
    }

private:
    ZSeries& accumulate(const ZSeries& o, bool negate) {
        if (o.ctx_.order > ctx_.order) ctx_ = o.ctx_;
        std::int64_t new_outer = std::min(outer_, o.outer_);
        for (std::size_t k = 0; k < o.c_.size(); ++k) {
            int d = o.lo_ + static_cast<int>(k);
            const QSeries& s = o.c_[k];
            if (d < lo_ || d > max_degree() || c_.empty()) {
                QSeries v = negate ? -s : s;
                v.truncate_in_place(outer_);
                set(d, std::move(v));
            } else if (negate) {
                c_[static_cast<std::size_t>(d - lo_)] -= s;
            } else {
                c_[static_cast<std::size_t>(d - lo_)] += s;
            }
        }
        if (new_outer < outer_) {
            // degrees present here but absent in o inherit o's outer truncation
            for (std::size_t k = 0; k < c_.size(); ++k) {
                int d = lo_ + static_cast<int>(k);
                if (d < o.lo_ || d > o.max_degree() || o.c_.empty()) c_[k].truncate_in_place(o.outer_);
            }
        }
        outer_ = new_outer;
        trim();
        return *this;
    }

    void check_span() const {
        if (static_cast<int>(c_.size()) > kMaxZSpan) raise(ErrorKind::WindowOverflow, "z-degree span exceeds limit");
    }

    /// Drop zero coefficients at both ends; their truncation folds into outer_.
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) {
            outer_ = std::min(outer_, c_.back().truncation());
            c_.pop_back();
        }
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero()) {
            outer_ = std::min(outer_, c_[lead].truncation());
            ++lead;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            lo_ += static_cast<int>(lead);
        }
        if (c_.empty()) lo_ = 0;
    }

    SeriesContext ctx_;
    int lo_ = 0;
    std::vector<QSeries> c_;
    std::int64_t outer_ = 0;
};

/// Polynomial in an auxiliary variable t, truncated after degree tmax, with
/// ZSeries coefficients. With tmax = 0 this is just a ZSeries.
class TZSeries {
public:
    TZSeries() = default;
    TZSeries(const SeriesContext& ctx, int tmax) : ctx_(ctx), t_(static_cast<std::size_t>(tmax + 1), ZSeries(ctx)) {}
    explicit TZSeries(const ZSeries& z, int tmax = 0) : ctx_(z.context()), t_(static_cast<std::size_t>(tmax + 1), ZSeries(z.context())) {
        t_[0] = z;
    }
    explicit TZSeries(const QSeries& s, int tmax = 0) : TZSeries(ZSeries(s), tmax) {}

    static TZSeries monomial(const LMonomial& m, const SeriesContext& ctx, int tmax) {
        TZSeries r(ctx, tmax);
        if (m.t >= 0 && m.t <= tmax && !m.is_zero()) r.t_[static_cast<std::size_t>(m.t)] = ZSeries::monomial(m.coeff, ctx.scaled(m.q), m.z, ctx);
        if (m.t < 0) raise(ErrorKind::NotInvertible, "negative power of t");
        return r;
    }

    const SeriesContext& context() const { return ctx_; }
    int tmax() const { return static_cast<int>(t_.size()) - 1; }
    const ZSeries& tcoeff(int k) const { return t_.at(static_cast<std::size_t>(k)); }
    ZSeries& tcoeff(int k) { return t_.at(static_cast<std::size_t>(k)); }

    bool is_zero() const {
        return std::all_of(t_.begin(), t_.end(), [](const ZSeries& z) { return z.is_zero(); });
    }
    /// True if only t^0 z^0 can be nonzero.
    bool is_plain_series() const {
        for (std::size_t k = 1; k < t_.size(); ++k)
            if (!t_[k].is_zero()) return false;
        return t_[0].is_zero() || (t_[0].min_degree() == 0 && t_[0].max_degree() == 0);
    }
    QSeries as_series() const { return t_[0].coeff(0); }

    std::int64_t min_truncation() const {
        std::int64_t t = ctx_.order;
        for (const auto& z : t_) t = std::min(t, z.min_truncation());
        return t;
    }
    std::int64_t min_valuation() const {
        std::int64_t v = ctx_.order;
        for (const auto& z : t_) v = std::min(v, z.min_valuation());
        return v;
    }

    TZSeries& operator+=(const TZSeries& o) {
        align(o);
        for (std::size_t k = 0; k < t_.size(); ++k) t_[k] += o.t_[k];
        return *this;
    }
    TZSeries& operator-=(const TZSeries& o) {
        align(o);
        for (std::size_t k = 0; k < t_.size(); ++k) t_[k] -= o.t_[k];
        return *this;
    }
    friend TZSeries operator+(TZSeries a, const TZSeries& b) { return a += b; }
    friend TZSeries operator-(TZSeries a, const TZSeries& b) { return a -= b; }
    TZSeries operator-() const {
        TZSeries r = *this;
        for (auto& z : r.t_) z = -z;
        return r;
    }

    friend TZSeries operator*(const TZSeries& x, const TZSeries& y) {
        int tm = std::min(x.tmax(), y.tmax());
        SeriesContext ctx = x.ctx_.order >= y.ctx_.order ? x.ctx_ : y.ctx_;
        TZSeries r(ctx, tm);
        for (int i = 0; i <= tm; ++i) {
            if (x.t_[static_cast<std::size_t>(i)].is_zero() && x.t_[static_cast<std::size_t>(i)].outer_truncation() >= ctx.order) continue;
            for (int j = 0; i + j <= tm; ++j)
                r.t_[static_cast<std::size_t>(i + j)] += zmul(x.t_[static_cast<std::size_t>(i)], y.t_[static_cast<std::size_t>(j)]);
        }
        return r;
    }
    TZSeries& operator*=(const TZSeries& o) { return *this = *this * o; }

    TZSeries& scale(const CycRat& c) {
        for (auto& z : t_) z.scale(c);
        return *this;
    }

    TZSeries& mul_monomial(const LMonomial& m) {
        if (m.t < 0) raise(ErrorKind::NotInvertible, "negative power of t");
        std::int64_t qe = ctx_.scaled(m.q);
        if (m.coeff.is_zero()) {
            for (auto& z : t_) z = ZSeries(ctx_);
            return *this;
        }
        std::vector<ZSeries> out(t_.size(), ZSeries(ctx_));
        for (std::size_t k = 0; k + static_cast<std::size_t>(m.t) < t_.size(); ++k) {
            ZSeries z = t_[k];
            z.mul_monomial(m.coeff, qe, m.z);
            out[k + static_cast<std::size_t>(m.t)] = std::move(z);
        }
        t_ = std::move(out);
        return *this;
    }

    TZSeries& mul_binomial(const LMonomial& m) {
        if (m.is_zero()) return *this;
        if (m.t == 0) {
            std::int64_t qe = ctx_.scaled(m.q);
            for (auto& z : t_) z.mul_binomial(m.coeff, qe, m.z);
            return *this;
        }
        TZSeries s = *this;
        s.mul_monomial(m);
        return *this -= s;
    }

    TZSeries& div_binomial(const LMonomial& m) {
        if (m.is_zero()) return *this;
        if (m.t == 0) {
            std::int64_t qe = ctx_.scaled(m.q);
            for (auto& z : t_) z.div_binomial(m.coeff, qe, m.z);
            return *this;
        }
        if (m.t < 0) raise(ErrorKind::NotInvertible, "negative power of t");
        TZSeries term = *this, acc = *this;
        for (int k = 1; k * m.t <= tmax(); ++k) {
            term.mul_monomial(m);
            acc += term;
        }
        return *this = std::move(acc);
    }

    /// Inverse when the t^0 part is a single z-degree with an invertible
    /// coefficient; higher t-degrees are handled by the nilpotent geometric series.
    TZSeries inverse() const {
        const ZSeries& z0 = t_[0];
        if (z0.is_zero() || z0.min_degree() != z0.max_degree())
            raise(ErrorKind::NotInvertible, "t^0 part is not a single z-power times a unit series");
        int d = z0.min_degree();
        QSeries uinv = z0.coeff(d).inverse();
        TZSeries lead_inv(ctx_, tmax());
        ZSeries zi(ctx_);
        zi.set(-d, uinv);
        lead_inv.t_[0] = zi;
        if (tmax() == 0) return lead_inv;
        TZSeries r = *this * lead_inv; // 1 + nilpotent
        r.t_[0] = ZSeries(ctx_);
        TZSeries acc = lead_inv;
        TZSeries power = lead_inv;
        for (int k = 1; k <= tmax(); ++k) {
            power = power * r;
            power = -power;
            acc += power;
        }
        return acc;
    }

    TZSeries substitute_z(const CycRat& c, std::int64_t qe, int zd) const {
        TZSeries r = *this;
        for (auto& z : r.t_) z = z.substitute(c, qe, zd);
        return r;
    }

    TZSeries& truncate_in_place(std::int64_t n) {
        for (auto& z : t_) z.truncate_in_place(n);
        return *this;
    }

    TZSeries with_context(const SeriesContext& ctx) const {
        TZSeries r = *this;
        r.ctx_ = ctx;
        for (auto& z : r.t_) z = z.with_context(ctx);
        return r;
    }

    /// Reduce the t-truncation.
    TZSeries with_tmax(int tm) const {
        TZSeries r = *this;
        r.t_.resize(static_cast<std::size_t>(tm + 1), ZSeries(ctx_));
        return r;
    }

    std::string str(std::size_t max_terms = 6) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < t_.size(); ++k) {
            if (t_[k].is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "{" << t_[k].str(max_terms) << "}";
            if (k) os << "*t^(" << k << ")";
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void align(const TZSeries& o) {
        if (o.ctx_.order > ctx_.order) ctx_ = o.ctx_;
        if (o.t_.size() < t_.size()) t_.resize(o.t_.size());
        if (t_.empty()) t_.resize(o.t_.size(), ZSeries(ctx_));
    }

    SeriesContext ctx_;
    std::vector<ZSeries> t_;
};

} // namespace qrucible
