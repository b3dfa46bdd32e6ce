#pragma once

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsl/suite.hpp"

namespace qrucible {

enum class Status { Pass, Fail, Skip };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
    }
    return "?";
}

struct Mismatch {
    std::int64_t exponent = 0; // scaled
    Frac q;                    // exponent as a power of q
    int tdeg = 0;
    int zdeg = 0;
    std::string lhs, rhs;
};

struct VerifyReport {
    std::string name;
    std::string group;
    Status status = Status::Skip;
    std::string reason;
    std::int64_t proven_order = 0; // scaled
    std::int64_t requested_order = 0;
    long denom = 1;
    std::optional<Mismatch> first_mismatch;
    double elapsed_ms = 0;
    std::string paper_ref;
};

struct VerifyOptions {
    std::optional<long> order; // whole powers of q
    std::optional<long> denom;
};

/// Context a case is checked in once overrides are applied. A new
/// denominator rescales the order so the same power of q is reached.
inline SeriesContext case_context(const dsl::IdentityCase& c, const VerifyOptions& o = {}) {
    long d = o.denom.value_or(c.denom);
    if (d < 1) raise(ErrorKind::TypeError, "denominator must be positive");
    std::int64_t n = o.order ? *o.order * d : (c.order * d) / c.denom;
    return SeriesContext(d, n);
}

/// One side of a case, with samples and let-bindings in scope.
inline TZSeries evaluate_side(const dsl::IdentityCase& c, const dsl::Expr& side, const SeriesContext& ctx) {
    return with_working_order(ctx, [&](const SeriesContext& w) {
        dsl::Elaborator el(w, c.tmax);
        for (const auto& [n, e] : c.samples) el.bind_expr(n, *e);
        for (const auto& [n, e] : c.lets) el.bind_expr(n, *e);
        return el.eval_series(side);
    });
}

/// Smallest position (q-exponent, then t, then z) where two series differ
/// below `upTo`, looking only where both are known.
inline std::optional<Mismatch> compare(const TZSeries& a, const TZSeries& b, std::int64_t upTo) {
    std::optional<Mismatch> best;
    const SeriesContext& ctx = a.context();
    for (int k = 0; k <= std::max(a.tmax(), b.tmax()); ++k) {
        ZSeries x = k <= a.tmax() ? a.tcoeff(k) : ZSeries(ctx);
        ZSeries y = k <= b.tmax() ? b.tcoeff(k) : ZSeries(ctx);
        if (x.is_zero() && y.is_zero()) continue;
        int lo = x.is_zero() ? y.min_degree() : y.is_zero() ? x.min_degree() : std::min(x.min_degree(), y.min_degree());
        int hi = x.is_zero() ? y.max_degree() : y.is_zero() ? x.max_degree() : std::max(x.max_degree(), y.max_degree());
        for (int d = lo; d <= hi; ++d) {
            QSeries u = x.coeff(d), v = y.coeff(d);
            std::int64_t lim = std::min({upTo, u.truncation(), v.truncation()});
            if (best) lim = std::min(lim, best->exponent + 1);
            auto m = first_mismatch(u.truncated(lim), v.truncated(lim), lim);
            if (!m) continue;
            if (best && *m >= best->exponent) continue;
            best = Mismatch{*m, ctx.unscaled(*m), k, d, u.coeff(*m).str(), v.coeff(*m).str()};
        }
    }
    return best;
}

/// Verifies a case; `lhs_known` may supply an already evaluated LHS for the
/// same case context.
inline VerifyReport verify(const dsl::IdentityCase& c, const VerifyOptions& o = {}, const TZSeries* lhs_known = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport r;
    r.name = c.name;
    r.group = c.group;
    r.paper_ref = c.ref;
    try {
        SeriesContext ctx = case_context(c, o);
        r.denom = ctx.denom;
        r.requested_order = ctx.order;
        TZSeries lhs = lhs_known ? *lhs_known : evaluate_side(c, *c.lhs, ctx);
        TZSeries rhs = evaluate_side(c, *c.rhs, ctx);
        std::int64_t known = std::min({ctx.order, lhs.min_truncation(), rhs.min_truncation()});
        r.first_mismatch = compare(lhs, rhs, ctx.order);
        if (r.first_mismatch) {
            r.status = Status::Fail;
            r.proven_order = r.first_mismatch->exponent;
            r.reason = "coefficients differ at q^(" + r.first_mismatch->q.str() + ")";
        } else if (known >= ctx.order) {
            r.status = Status::Pass;
            r.proven_order = ctx.order;
        } else {
            r.status = Status::Skip;
            r.proven_order = known;
            r.reason = "InsufficientTruncation: agreement proven only below q^(" + ctx.unscaled(known).str() + ")";
        }
    } catch (const Error& e) {
        r.status = Status::Skip;
        r.reason = e.what();
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline bool glob_match(const std::string& pattern, const std::string& s) { return fnmatch(pattern.c_str(), s.c_str(), 0) == 0; }

/// A case is selected when any filter matches its name, base name or group.
inline bool selected(const dsl::IdentityCase& c, const std::vector<std::string>& filters) {
    if (filters.empty()) return true;
    return std::any_of(filters.begin(), filters.end(), [&](const std::string& f) {
        return glob_match(f, c.name) || glob_match(f, c.base) || glob_match(f, c.group);
    });
}

/// Verifies cases on up to `jobs` threads; reports come back in case order.
inline std::vector<VerifyReport> run_cases(const std::vector<dsl::IdentityCase>& cases, const VerifyOptions& o, unsigned jobs = 1) {
    std::vector<VerifyReport> out(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) out[i] = verify(cases[i], o);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cases.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

/// Tag marking a case whose SKIP is documented and tolerated outside strict mode.
inline constexpr const char* kMaySkipTag = "may-skip";

inline bool suite_ok(const std::vector<dsl::IdentityCase>& cases, const std::vector<VerifyReport>& reports, bool strict) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].status == Status::Pass) continue;
        if (reports[i].status == Status::Fail || strict) return false;
        const auto& tags = cases[i].tags;
        if (std::find(tags.begin(), tags.end(), kMaySkipTag) == tags.end()) return false;
    }
    return true;
}

inline nlohmann::ordered_json to_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["group"] = r.group;
    j["status"] = to_string(r.status);
    if (r.status == Status::Skip) j["reason"] = r.reason;
    j["provenOrder"] = r.proven_order;
    j["denom"] = r.denom;
    if (r.first_mismatch) {
        const Mismatch& m = *r.first_mismatch;
        j["firstMismatch"] = {{"exponent", m.exponent}, {"q", m.q.str()}, {"t", m.tdeg}, {"z", m.zdeg}, {"lhsCoeff", m.lhs}, {"rhsCoeff", m.rhs}};
    }
    j["elapsedMs"] = r.elapsed_ms;
    j["paperRef"] = r.paper_ref;
    return j;
}

inline nlohmann::ordered_json to_json(const std::vector<VerifyReport>& rs) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

/// Every single-exponent perturbation of a case's RHS: one power q^e
/// becomes q^(e+1), or one bare q becomes q^2. Sample values are first
/// substituted into the RHS so exponents held in samples are reached too.
inline std::vector<dsl::IdentityCase> rhs_exponent_mutations(const dsl::IdentityCase& c) {
    using namespace dsl;
    std::map<std::string, ExprPtr> inline_map;
    for (const auto& [n, e] : c.samples) inline_map[n] = e;
    for (const auto& [n, e] : c.lets) inline_map.erase(n);
    std::function<ExprPtr(const ExprPtr&)> subst = [&](const ExprPtr& e) -> ExprPtr {
        if (e->kind == Kind::Sym) {
            auto it = inline_map.find(e->name);
            return it == inline_map.end() ? e : it->second;
        }
        if (e->kind == Kind::Sum && inline_map.count(e->name)) return e;
        Expr copy = *e;
        for (auto& k : copy.kids) k = subst(k);
        for (auto& g : copy.groups)
            for (auto& k : g) k = subst(k);
        return std::make_shared<const Expr>(std::move(copy));
    };
    ExprPtr rhs = subst(c.rhs);

    // Rebuild the tree with the target-th q occurrence (preorder) perturbed.
    int seen = 0;
    int target = 0;
    std::function<ExprPtr(const ExprPtr&)> walk = [&](const ExprPtr& e) -> ExprPtr {
        if (e->kind == Kind::Pow && e->kids[0]->kind == Kind::Sym && e->kids[0]->name == "q") {
            const ExprPtr& x = e->kids[1];
            bool numeric = x->kind == Kind::Num || (x->kind == Kind::Neg && x->kids[0]->kind == Kind::Num);
            if (numeric) {
                if (seen++ != target) return e;
                BigRat v = x->kind == Kind::Num ? x->num : BigRat(-x->kids[0]->num);
                v += 1;
                ExprPtr nx = sgn(v) >= 0 ? make_num(v, x->span) : make_node(Kind::Neg, {make_num(BigRat(-v), x->span)}, x->span);
                return make_node(Kind::Pow, {e->kids[0], nx}, e->span);
            }
        }
        if (e->kind == Kind::Sym && e->name == "q") {
            if (seen++ != target) return e;
            return make_node(Kind::Pow, {e, make_num(BigRat(2), e->span)}, e->span);
        }
        Expr copy = *e;
        for (auto& k : copy.kids) k = walk(k);
        for (auto& g : copy.groups)
            for (auto& k : g) k = walk(k);
        return std::make_shared<const Expr>(std::move(copy));
    };
    std::vector<IdentityCase> out;
    for (target = 0;; ++target) {
        seen = 0;
        ExprPtr r = walk(rhs);
        if (seen <= target) break;
        IdentityCase m = c;
        m.rhs = r;
        m.name = c.name + "{rhs exponent " + std::to_string(target + 1) + "}";
        out.push_back(std::move(m));
    }
    return out;
}

/// Restrictions for partition_count. `modulus` 0 allows every part of size
/// at least `min_part`; consecutive parts (in weakly decreasing order)
/// differ by at least `min_difference`, so 1 means distinct parts.
struct PartitionRule {
    long modulus = 0;
    std::vector<long> residues;
    long min_difference = 0;
    long min_part = 1;
};

inline constexpr long kPartitionBound = 200;

/// Number of partitions of n obeying the rule, by direct enumeration.
inline mpz_class partition_count(long n, const PartitionRule& rule) {
    if (n < 0) return 0;
    if (n > kPartitionBound) raise(ErrorKind::BoundExceeded, "partition_count limited to n <= " + std::to_string(kPartitionBound));
    auto allowed = [&](long p) {
        if (p < rule.min_part) return false;
        if (rule.modulus <= 0) return true;
        long r = p % rule.modulus;
        return std::any_of(rule.residues.begin(), rule.residues.end(),
                           [&](long x) { return ((x % rule.modulus) + rule.modulus) % rule.modulus == r; });
    };
    std::map<std::pair<long, long>, mpz_class> memo;
    std::function<mpz_class(long, long)> count = [&](long rest, long maxpart) -> mpz_class {
        if (rest == 0) return 1;
        if (maxpart <= 0) return 0;
        auto key = std::make_pair(rest, maxpart);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        mpz_class total = 0;
        for (long p = std::min(rest, maxpart); p >= 1; --p)
            if (allowed(p)) total += count(rest - p, p - rule.min_difference);
        memo[key] = total;
        return total;
    };
    return count(n, n);
}

/// Base names the shipped registry must cover, each exactly once.
inline const std::vector<std::string>& required_identities() {
    static const std::vector<std::string> names = {
        "rr1", "rr2", "eqe1", "eqe2", "qbt", "aqbt", "bds", "qgs", "iht", "jtp", "quintuple", "wqa", "wqb", "wqc",
        "kca", "kcb", "kcc", "kcd", "kce", "fsa", "fsc", "fsb", "krx", "fra", "frc", "fre", "crl", "f32", "far", "bdi",
        "tsi", "capparelli", "tsf", "tsc", "tse", "ntss", "ksa", "ksb", "ksc", "ksd", "kse", "cpa", "cpb", "cpc", "cpd",
        "acg", "adg", "ncg", "acge", "acgm", "csv", "cta", "ctb", "ctam", "ctan", "djt", "jt", "gs-analytic1",
        "gs-analytic2", "nqt", "koornwinder1", "koornwinder2"};
    return names;
}

/// Problems with registry coverage: required names missing, names declared
/// by more than one identity block, and names not on the list.
inline std::vector<std::string> registry_problems(const std::vector<dsl::IdentityCase>& cases) {
    std::map<std::string, std::set<std::pair<std::string, std::string>>> decl; // base -> {(group, span)}
    for (const auto& c : cases) decl[c.base].insert({c.group, c.span.str()});
    std::vector<std::string> out;
    for (const auto& n : required_identities()) {
        auto it = decl.find(n);
        if (it == decl.end()) out.push_back("missing: " + n);
        else if (it->second.size() > 1) out.push_back("declared more than once: " + n);
    }
    for (const auto& [n, d] : decl)
        if (std::find(required_identities().begin(), required_identities().end(), n) == required_identities().end())
            out.push_back("not in the registry list: " + n);
    return out;
}

} // namespace qrucible
