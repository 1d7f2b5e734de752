#include "gpzeta/normalize.hpp"
#include "gpzeta/serialize.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gpzeta;

namespace {

class Norm : public ::testing::Test {
protected:
    Norm() : num(30), ev(num) {}
    XiNumerics<Mp> num;
    Evaluator<Mp> ev;

    SymExpr centered(const std::string& g, const std::string& p) {
        auto rs = build_root_system(g);
        auto ir = iterated_residue(build_period(rs), rs, rs.parabolic(p));
        auto rec = clearing_factors(ir.result);
        auto xo = normalize_o(ir.result, rec);
        find_fe_constant(rec, xo, ev);
        EXPECT_TRUE(rec.c) << g << p;
        return rec.c ? center(xo, *rec.c) : xo;
    }
};

std::set<Rational> pole_set(const PoleReport& r) { return r.locations(); }

}  // namespace

TEST_F(Norm, A1Clearing) {
    auto a1 = simplify(substitute(build_period(build_root_system("A1")), {{"z1", LinForm::variable("z", Rational(1, 2))}}));
    auto rec = clearing_factors(a1, "z");
    ASSERT_EQ(rec.I_factors.size(), 1u);
    EXPECT_EQ(rec.I_factors[0], std::make_pair(Rational(1), Rational(1)));
    EXPECT_TRUE(rec.J_factors.empty());
    EXPECT_TRUE(structurally_equal(normalize_o(a1, rec), parse_expr("xi(z+1)/(z-1) - xi(z)/(z+1)")));
}

TEST_F(Norm, NothingToClear) {
    auto e = parse_expr("xi(2s)/(s-1) - xi(2s-1)/s");
    auto rec = clearing_factors(e);
    EXPECT_TRUE(rec.I_factors.empty());
    EXPECT_TRUE(rec.J_factors.empty());
    EXPECT_TRUE(structurally_equal(normalize_o(e, rec), e));
}

TEST_F(Norm, A2HasXi2InJ) {
    auto rs = build_root_system("SL3");
    auto ir = iterated_residue(build_period(rs), rs, rs.parabolic("P21"));
    auto rec = clearing_factors(ir.result);
    EXPECT_NE(std::find(rec.J_factors.begin(), rec.J_factors.end(), Rational(2)), rec.J_factors.end());
    auto xo = normalize_o(ir.result, rec);
    for (const auto& t : xo.terms)
        for (const auto& [a, e] : t.xi) EXPECT_GT(e, 0);
}

TEST_F(Norm, ToyFunctionalEquation) {
    auto e = parse_expr("xi(s) + xi(-s+3)");
    NormalizationRecord rec;
    find_fe_constant(rec, e, ev);
    ASSERT_TRUE(rec.c);
    EXPECT_EQ(*rec.c, 3);
    EXPECT_LT(rec.fe_residual, 1e-20);
    auto c = center(e, 3);
    NormalizationRecord again;
    find_fe_constant(again, c, ev);
    ASSERT_TRUE(again.c);
    EXPECT_EQ(*again.c, 1);
    EXPECT_TRUE(structurally_equal(center(e, 1), e));
}

TEST_F(Norm, NoCandidateIsRecordedNotFatal) {
    NormalizationRecord rec;
    find_fe_constant(rec, parse_expr("xi(2s) + 1/(s-3)"), ev);
    EXPECT_FALSE(rec.c);
    EXPECT_EQ(to_json(rec).at("c").get<std::string>(), "unverified");
}

TEST_F(Norm, CenteredGoldenZetasSatisfyFE) {
    for (auto [g, p] : {std::pair{"SL2", "B"}, {"SL3", "P21"}, {"Sp4", "P2e2"}, {"G2", "Plong"}}) {
        auto f = centered(g, p);
        EXPECT_LT(fe_residual(f, Rational(1), ev, 100, 7), 1e-20) << g << p;
    }
}

TEST_F(Norm, ConjugationSymmetry) {
    auto f = centered("G2", "Pshort");
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int k = 0; k < 50; ++k) {
        Cx<Mp> s(Mp(u(rng)), Mp(u(rng) + 0.3));
        auto a = ev.at(f, "s", s), b = ev.at(f, "s", Cx<Mp>(s.re, -s.im));
        EXPECT_LT(to_dbl(Mp(cabs(a - Cx<Mp>(b.re, -b.im)) / cabs(a))), 1e-10);
    }
}

TEST_F(Norm, PoleSets) {
    auto sl2 = pole_report(centered("SL2", "B"));
    EXPECT_EQ(pole_set(sl2), (std::set<Rational>{0, 1}));
    EXPECT_EQ(sl2.order_at(0), 1);
    EXPECT_EQ(sl2.order_at(1), 1);
    auto toy = pole_report(parse_expr("xi(s)*s*(s-1)"));
    EXPECT_TRUE(toy.poles.empty());
    EXPECT_FALSE(toy.cancelled.empty());
}

TEST_F(Norm, PoleSetsAreSymmetric) {
    for (auto [g, p] : {std::pair{"SL3", "P21"}, {"SL4", "P22"}, {"G2", "Plong"}, {"SL5", "P32"}}) {
        auto r = pole_report(centered(g, p));
        for (const auto& q : r.poles) EXPECT_EQ(r.order_at(1 - q.at), q.order) << g << p << " " << to_string(q.at);
    }
}

TEST_F(Norm, SL3PrincipalPartsCancelAtThirds) {
    auto r = pole_report(centered("SL3", "P21"));
    EXPECT_EQ(pole_set(r), (std::set<Rational>{0, 1}));
    std::set<Rational> cancelled(r.cancelled.begin(), r.cancelled.end());
    EXPECT_TRUE(cancelled.count(Rational(1, 3)));
    EXPECT_TRUE(cancelled.count(Rational(2, 3)));
}

TEST_F(Norm, ReflectArguments) {
    auto e = reflect_xi_arguments(parse_expr("xi(-3s+2)/(s-1)"));
    EXPECT_TRUE(structurally_equal(e, parse_expr("xi(3s-1)/(s-1)")));
}
