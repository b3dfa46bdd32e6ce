#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elaborate.hpp"
#include "parser.hpp"

namespace qrucible::dsl {

using Binding = std::pair<std::string, ExprPtr>;

/// One sampled instance of an identity.
struct IdentityCase {
    std::string name;  // base name plus sample, e.g. "fra[u=q^2]"
    std::string base;  // name as written after `identity`
    std::string group; // suite file stem
    std::string ref;
    std::vector<std::string> tags;
    std::vector<Binding> samples;
    std::vector<Binding> lets;
    ExprPtr lhs, rhs;
    long denom = 1;
    long order = 0; // in units of q^(1/denom)
    int tmax = 0;
    Span span;
};

inline long default_order(long denom) { return denom == 1 ? 50 : 100; }

namespace detail {

inline long parse_long(const Token& t, Parser& p) {
    try {
        return std::stol(t.text);
    } catch (const std::exception&) {
        p.fail("integer out of range");
    }
}

struct WhereLine {
    std::vector<Binding> fixed;
    std::vector<std::pair<std::string, std::pair<long, long>>> ranges;
    std::vector<std::string> order; // names in written order
};

inline long eval_bound(const Expr& e) {
    Elaborator el(SeriesContext(1, 1), 0);
    Value v = el.eval(e);
    if (!v.is_mono || !v.m.is_scalar() || v.m.q != Frac(0) || !v.m.coeff.is_rational() || v.m.coeff.re().get_den() != 1)
        raise(ErrorKind::TypeError, "range bound must be an integer at " + e.span.str());
    return v.m.coeff.re().get_num().get_si();
}

inline std::vector<std::vector<Binding>> expand(const WhereLine& w) {
    std::vector<std::vector<Binding>> out{{}};
    for (const auto& name : w.order) {
        auto f = std::find_if(w.fixed.begin(), w.fixed.end(), [&](const Binding& b) { return b.first == name; });
        if (f != w.fixed.end()) {
            for (auto& s : out) s.push_back(*f);
            continue;
        }
        auto r = std::find_if(w.ranges.begin(), w.ranges.end(), [&](const auto& b) { return b.first == name; });
        std::vector<std::vector<Binding>> next;
        for (const auto& s : out)
            for (long k = r->second.first; k <= r->second.second; ++k) {
                auto s2 = s;
                s2.emplace_back(name, make_num(BigRat(k)));
                next.push_back(std::move(s2));
            }
        out = std::move(next);
    }
    return out;
}

inline std::string sample_label(const std::vector<Binding>& s) {
    std::string out;
    for (const auto& [n, e] : s) out += (out.empty() ? "" : ", ") + n + "=" + print(*e);
    return out;
}

} // namespace detail

/// Parses suite text. Each `where` line yields one case per point of its
/// ranges; an identity without `where` yields a single case.
inline std::vector<IdentityCase> parse_suite(std::string_view text, const std::string& group) {
    Parser p(text);
    std::vector<IdentityCase> out;
    while (!p.at_end()) {
        if (!p.peek_ident("identity")) p.fail("expected 'identity'");
        Span at = p.next().span;
        IdentityCase c;
        c.base = p.expect(Tok::String, "identity name in quotes").text;
        c.group = group;
        c.span = at;
        bool has_order = false;
        std::vector<detail::WhereLine> wheres;
        p.expect_punct("{");
        while (!p.peek_punct("}")) {
            Token key = p.expect(Tok::Ident, "field name");
            const std::string& k = key.text;
            if (k == "let") {
                std::string name = p.expect(Tok::Ident, "name").text;
                if (name == "q") p.fail("'q' cannot be rebound");
                p.expect_punct("=");
                c.lets.emplace_back(name, p.parse_expr());
            } else if (k == "where") {
                detail::WhereLine w;
                do {
                    if (!w.order.empty()) p.expect_punct(",");
                    std::string name = p.expect(Tok::Ident, "sample variable").text;
                    if (name == "q") p.fail("'q' cannot be rebound");
                    if (std::find(w.order.begin(), w.order.end(), name) != w.order.end()) p.fail("duplicate sample variable");
                    w.order.push_back(name);
                    if (p.peek_ident("in")) {
                        p.next();
                        long lo = detail::eval_bound(*p.parse_expr());
                        p.expect_punct("..");
                        long hi = detail::eval_bound(*p.parse_expr());
                        if (hi < lo || hi - lo > 1000) p.fail("bad sample range");
                        w.ranges.push_back({name, {lo, hi}});
                    } else {
                        p.expect_punct("=");
                        w.fixed.emplace_back(name, p.parse_expr());
                    }
                } while (p.peek_punct(","));
                wheres.push_back(std::move(w));
            } else if (k == "lhs" || k == "rhs") {
                p.expect_punct("=");
                (k == "lhs" ? c.lhs : c.rhs) = p.parse_expr();
            } else if (k == "D" || k == "order" || k == "T") {
                p.expect_punct("=");
                long v = detail::parse_long(p.expect(Tok::Int, "integer"), p);
                if (k == "D") {
                    if (v < 1 || v > 1000) p.fail("D must lie in 1..1000");
                    c.denom = v;
                } else if (k == "order") {
                    c.order = v;
                    has_order = true;
                } else {
                    if (v > 64) p.fail("T too large");
                    c.tmax = static_cast<int>(v);
                }
            } else if (k == "ref") {
                p.expect_punct("=");
                c.ref = p.expect(Tok::String, "string").text;
            } else if (k == "tags") {
                p.expect_punct("=");
                p.expect_punct("[");
                if (!p.peek_punct("]")) {
                    c.tags.push_back(p.expect(Tok::String, "string").text);
                    while (p.peek_punct(",")) {
                        p.next();
                        c.tags.push_back(p.expect(Tok::String, "string").text);
                    }
                }
                p.expect_punct("]");
            } else {
                raise(ErrorKind::SyntaxError, "unknown field '" + k + "' at " + key.span.str());
            }
            p.expect_punct(";");
        }
        p.next();
        if (!c.lhs || !c.rhs) raise(ErrorKind::SyntaxError, "identity \"" + c.base + "\" at " + at.str() + " needs both lhs and rhs");
        if (!has_order) c.order = default_order(c.denom);
        if (wheres.empty()) {
            c.name = c.base;
            out.push_back(c);
            continue;
        }
        for (const auto& w : wheres)
            for (auto& s : detail::expand(w)) {
                IdentityCase ci = c;
                ci.name = c.base + "[" + detail::sample_label(s) + "]";
                ci.samples = std::move(s);
                out.push_back(std::move(ci));
            }
    }
    return out;
}

inline std::vector<IdentityCase> load_suite_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::IoError, "cannot open suite file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_suite(ss.str(), path.stem().string());
    } catch (const Error& e) {
        throw e.at(path.string());
    }
}

/// All `*.qid` files of a directory, in file-name order.
inline std::vector<IdentityCase> load_suite_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) raise(ErrorKind::IoError, "suite directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".qid") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<IdentityCase> out;
    for (const auto& f : files) {
        auto v = load_suite_file(f);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

} // namespace qrucible::dsl
