#include <gtest/gtest.h>

#include <random>

#include "qrucible/dsl/suite.hpp"

using namespace qrucible;
using namespace qrucible::dsl;

namespace {

QSeries run(const std::string& src, const SeriesContext& ctx) {
    Elaborator el(ctx, 0);
    TZSeries s = el.eval_series(*parse(src));
    EXPECT_TRUE(s.is_plain_series());
    return s.as_series();
}

ErrorKind kind_of(const std::string& src, const SeriesContext& ctx, int tmax = 0) {
    try {
        Elaborator el(ctx, tmax);
        (void)el.eval_series(*parse(src));
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for " << src;
    return ErrorKind::IoError;
}

struct Gen {
    std::mt19937_64 rng{20240611};
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    std::string ident() {
        static const char* names[] = {"q", "z", "t", "a", "b1", "x_y", "inf", "w", "w2", "u"};
        return names[pick(10)];
    }
    ExprPtr num() {
        long p = pick(50);
        long d = 1 + pick(3) * pick(4);
        return make_num(BigRat(p, d));
    }
    ExprPtr expr(int depth) {
        if (depth == 0 || pick(5) == 0) return pick(2) ? num() : make_sym(ident());
        switch (pick(10)) {
        case 0: return make_node(Kind::Neg, {expr(depth - 1)});
        case 1: return make_node(Kind::Add, {expr(depth - 1), expr(depth - 1)});
        case 2: return make_node(Kind::Sub, {expr(depth - 1), expr(depth - 1)});
        case 3: return make_node(Kind::Mul, {expr(depth - 1), expr(depth - 1)});
        case 4: return make_node(Kind::Div, {expr(depth - 1), expr(depth - 1)});
        case 5: return make_node(Kind::Pow, {expr(depth - 1), expr(depth - 1)});
        case 6: {
            std::vector<std::vector<ExprPtr>> groups(static_cast<std::size_t>(pick(4)));
            for (auto& g : groups)
                for (int k = 0, n = 1 + pick(3); k < n; ++k) g.push_back(expr(depth - 1));
            static const char* heads[] = {"qp", "phi", "f", "rogersC", "g2"};
            return make_call(heads[pick(5)], std::move(groups));
        }
        case 7: {
            std::vector<ExprPtr> items;
            for (int k = 0, n = pick(4); k < n; ++k) items.push_back(expr(depth - 1));
            return make_node(Kind::List, std::move(items));
        }
        case 8: return make_sum(ident(), expr(depth - 1), expr(depth - 1), expr(depth - 1));
        default: return make_node(Kind::CT, {expr(depth - 1)});
        }
    }
};

} // namespace

TEST(Parse, Examples) {
    ExprPtr e = parse("qp(q;q;inf)");
    ASSERT_EQ(e->kind, Kind::Call);
    EXPECT_EQ(e->name, "qp");
    ASSERT_EQ(e->groups.size(), 3u);
    EXPECT_EQ(print(e), "qp(q; q; inf)");

    e = parse("q^(3/2)*w2");
    ASSERT_EQ(e->kind, Kind::Mul);
    EXPECT_EQ(e->kids[0]->kind, Kind::Pow);
    EXPECT_EQ(e->kids[0]->kids[1]->num, BigRat(3, 2));
    EXPECT_EQ(print(e), "q^(3/2)*w2");

    e = parse("sum(n = 0..10; q^(n^2) / qp(q;q;n))");
    ASSERT_EQ(e->kind, Kind::Sum);
    EXPECT_EQ(e->name, "n");

    e = parse("ct{qp(1/z, q^2*z; q^2; inf) / qp(-q*z; q; inf)}");
    ASSERT_EQ(e->kind, Kind::CT);
    EXPECT_EQ(e->kids[0]->kind, Kind::Div);

    EXPECT_EQ(print(parse("a - (b - c)")), "a - (b - c)");
    EXPECT_EQ(print(parse("-q^2")), "-q^2");
    EXPECT_EQ(print(parse("(-q)^2")), "(-q)^2");
    EXPECT_EQ(print(parse("q^-1")), "q^(-1)");
    EXPECT_EQ(print(parse("2^3^2")), "2^(3^2)");
}

TEST(Parse, SyntaxErrorsCarrySpans) {
    try {
        (void)parse("qp(q;\n  q;; inf)");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
        EXPECT_NE(std::string(e.what()).find("2:5"), std::string::npos) << e.what();
    }
    EXPECT_THROW((void)parse("q +"), Error);
    EXPECT_THROW((void)parse("(q"), Error);
    EXPECT_THROW((void)parse("q $ 2"), Error);
    EXPECT_THROW((void)parse("q q"), Error);
    EXPECT_THROW((void)parse("\"open"), Error);
}

TEST(Parse, RoundTripFuzz) {
    Gen g;
    for (int i = 0; i < 2000; ++i) {
        ExprPtr e = g.expr(6);
        std::string s = print(e);
        ExprPtr back;
        ASSERT_NO_THROW(back = parse(s)) << s;
        ASSERT_TRUE(same_tree(*e, *back)) << s << "\nreparsed as\n" << print(back);
        ASSERT_EQ(print(back), s);
    }
}

TEST(Elaborate, Arithmetic) {
    SeriesContext ctx(1, 10);
    EXPECT_TRUE(equal_to_order(run("2+3", ctx), QSeries::constant(5, ctx), 10));
    EXPECT_TRUE(equal_to_order(run("(1+q)^2 - 2*q", ctx), run("1 + q^2", ctx), 10));
    EXPECT_TRUE(equal_to_order(run("w^2 + w + 1", ctx), QSeries::zero(ctx), 10));
    EXPECT_TRUE(equal_to_order(run("w2 - w^2", ctx), QSeries::zero(ctx), 10));
    EXPECT_TRUE(equal_to_order(run("floor(7/2) + sum(k = 1..4; k)", ctx), QSeries::constant(13, ctx), 10));
    EXPECT_TRUE(equal_to_order(run("1/(1-q)", ctx), run("sum(k = 0..9; q^k)", ctx), 10));
}

TEST(Elaborate, ReciprocalProduct) {
    SeriesContext ctx(1, 7);
    QSeries s = run("1/qp(q,q^4;q^5;inf)", ctx);
    std::vector<long> want{1, 1, 1, 1, 2, 2, 3};
    for (std::size_t n = 0; n < want.size(); ++n) EXPECT_EQ(s.coeff(static_cast<std::int64_t>(n)), CycRat(want[n])) << n;
}

TEST(Elaborate, FractionalExponents) {
    SeriesContext ctx(4, 40);
    QSeries a = run("qp(q^(1/2); q^(3/4); 3)", ctx);
    QSeries b = run("(1 - q^(1/2))*(1 - q^(5/4))*(1 - q^2)", ctx);
    EXPECT_TRUE(equal_to_order(a, b, 40));
    EXPECT_TRUE(equal_to_order(run("(q^2)^(3/4)", ctx), run("q^(3/2)", ctx), 40));
}

TEST(Elaborate, BuiltinMultisum) {
    SeriesContext ctx(1, 40);
    QSeries lhs = run("F(q, 1, q^3)", ctx);
    QSeries rhs = run("qp(q^3; q^12; inf) / qp(q, q^2; q^4; inf)", ctx);
    EXPECT_EQ(first_mismatch(lhs, rhs, 40), std::nullopt);
}

TEST(Elaborate, ConstantTermMatchesMultisum) {
    SeriesContext ctx(1, 25);
    QSeries ct = run("qp(q^2; q^2; inf) * ct{qp(1/z, q^2*z; q^2; inf)*qp(-q^3*z^3; q^6; inf) / (qp(-q*z; q; inf)*qp(z^2; q^4; inf))}", ctx);
    QSeries f = run("F(q, 1, q^3)", ctx);
    EXPECT_EQ(first_mismatch(ct, f, 25), std::nullopt);
}

TEST(Elaborate, TSeriesAndSubstitution) {
    SeriesContext ctx(1, 20);
    Elaborator el(ctx, 3);
    TZSeries a = el.eval_series(*parse("1/(1 - t*q)"));
    TZSeries b = el.eval_series(*parse("1 + t*q + t^2*q^2 + t^3*q^3"));
    EXPECT_TRUE((a - b).is_zero());
    // C_1(x; a | q) = (1-a)/(1-q) * 2x, with z + 1/z = 2x; at z = w this is -1.
    QSeries c = run("rogersC(1; q^2; q; w) * (1 - q) / (1 - q^2)", ctx);
    EXPECT_TRUE(equal_to_order(c, QSeries::constant(-1, ctx), 20));
}

TEST(Elaborate, Errors) {
    SeriesContext ctx(1, 10);
    EXPECT_EQ(kind_of("foo", ctx), ErrorKind::UnknownSymbol);
    EXPECT_EQ(kind_of("bar(1)", ctx), ErrorKind::UnknownSymbol);
    EXPECT_EQ(kind_of("t", ctx), ErrorKind::TypeError);
    EXPECT_EQ(kind_of("1/(q - q)", ctx), ErrorKind::DivisionByZero);
    EXPECT_EQ(kind_of("(1+q)^(1/2)", ctx), ErrorKind::ExponentNotRepresentable);
    EXPECT_EQ(kind_of("q^q", ctx), ErrorKind::TypeError);
    EXPECT_EQ(kind_of("qp(q; q; -1)", ctx), ErrorKind::TypeError);
    EXPECT_EQ(kind_of("[q]", ctx), ErrorKind::TypeError);
    EXPECT_EQ(kind_of("ct{qp(z; q; inf)*(1 + z)^2 * t}", ctx, 2), ErrorKind::TypeError);
    try {
        Elaborator el(ctx, 0);
        (void)el.eval(*parse("1 +\n  2*nope"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("2:5"), std::string::npos) << e.what();
    }
}

TEST(Suite, ParseAndExpandSamples) {
    std::string text = R"(
        # comment
        identity "demo" {
            let s = 1 + u;
            where u = q, n in 0..2;
            where u = q^(3/4), n = 1;
            lhs = s*qp(q; q; n);
            rhs = (1 + u)*qp(q; q; n);
            D = 4;
            ref = "demo identity";
            tags = ["x", "y"];
        }
        identity "plain" { lhs = 1; rhs = 1; }
    )";
    auto cases = parse_suite(text, "g");
    ASSERT_EQ(cases.size(), 5u);
    EXPECT_EQ(cases[0].name, "demo[u=q, n=0]");
    EXPECT_EQ(cases[3].name, "demo[u=q^(3/4), n=1]");
    EXPECT_EQ(cases[3].denom, 4);
    EXPECT_EQ(cases[3].order, 100);
    EXPECT_EQ(cases[3].tags.size(), 2u);
    EXPECT_EQ(cases[4].name, "plain");
    EXPECT_EQ(cases[4].order, 50);
    EXPECT_EQ(cases[4].group, "g");
    EXPECT_THROW((void)parse_suite("identity \"x\" { lhs = 1; }", "g"), Error);
    EXPECT_THROW((void)parse_suite("identity \"x\" { lhs = 1; rhs = 1; color = 2; }", "g"), Error);
    EXPECT_THROW((void)parse_suite("identity \"x\" { let q = 2; lhs = 1; rhs = 1; }", "g"), Error);
}
