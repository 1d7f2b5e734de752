#include "gpzeta/residue.hpp"
#include "gpzeta/serialize.hpp"

#include <gtest/gtest.h>

using namespace gpzeta;

namespace {


Hyperplane line(const LinForm& f) { return Hyperplane::from_form(f); }

LinForm var(const std::string& v, const Rational& c = 1) { return LinForm::variable(v, c); }

}  // namespace

TEST(Residue, SimplePoleOfLinearFactor) {
    // Res_{u=0} g/u = g(0), with u = z and g = xi(w+2)/(w-3)
    auto e = parse_expr("xi(w+2)/(w-3)/z");
    auto r = residue(e, line(var("z")));
    EXPECT_TRUE(structurally_equal(r, parse_expr("xi(w+2)/(w-3)")));
}

TEST(Residue, XiPoleAtOneAndZero) {
    auto h = line(var("z"));
    EXPECT_TRUE(structurally_equal(residue(parse_expr("xi(z+1)/(w+z-3)"), h), parse_expr("1/(w-3)")));
    EXPECT_TRUE(structurally_equal(residue(parse_expr("xi(z)/(w+z-3)"), h), parse_expr("-1/(w-3)")));
    // scaled argument: xi(2z+1) has residue 1/2 in z
    EXPECT_TRUE(structurally_equal(residue(parse_expr("xi(2z+1)"), h), SymExpr::constant(Rational(1, 2))));
}

TEST(Residue, RegularTermsVanish) {
    auto h = line(var("z") - Rational(1));
    EXPECT_TRUE(residue(parse_expr("xi(z+3)/(z+2) + xi(w)/(w-z)"), h).empty());
}

TEST(Residue, DoublePoleUsesLaurentData) {
    // xi(z)xi(z+1) at z=0: (-1/z + a0 ...)(1/z + a0 + ...) has residue 0 (the a0 parts cancel)
    auto r = residue(parse_expr("xi(z)*xi(z+1)"), line(var("z")));
    EXPECT_TRUE(r.empty());
    // xi(z+1)^2 e^{z x}: residue 2 a0 + x, with a0 carried symbolically
    auto r2 = residue(parse_expr("xi(z+1)^2*exp(z*x)"), line(var("z")));
    EXPECT_TRUE(r2.has_auxiliary_atoms());
}

TEST(Residue, Linearity) {
    auto h = line(var("z1") - var("z2") - Rational(1));
    auto a = simplify(build_period(build_root_system("SL3")));
    auto b = parse_expr("xi(z1-z2)/(z1+z2)");
    auto lhs = residue(simplify(a + b), h);
    auto rhs = simplify(residue(a, h) + residue(b, h));
    EXPECT_TRUE(structurally_equal(lhs, rhs));
}

TEST(Residue, DepthLimit) {
    EXPECT_THROW(residue(parse_expr("1/z^5 + xi(z+1)/z^4"), line(var("z"))), ExpansionDepthError);
    LaurentLimits deep{6, 3};
    EXPECT_NO_THROW(residue(parse_expr("exp(z*x)/z^5"), line(var("z")), deep));
}

TEST(Hyperplanes, SelectionRule) {
    {
        auto rs = build_root_system("SL4");
        auto hs = hyperplanes_for(rs, rs.parabolic("P31"));
        ASSERT_EQ(hs.size(), 2u);
        EXPECT_EQ(hs[0].form, var("z1") - var("z2") - Rational(1));
    }
    {
        auto rs = build_root_system("SL5");
        auto P = rs.parabolic("P41");
        auto hs = hyperplanes_for(rs, P);
        ASSERT_EQ(hs.size(), 3u);
        // every form restricts z_i - z_{i+1} - 1 for i = 1..3
        auto acc = restriction_map(hs);
        for (int i = 0; i < 3; ++i) {
            LinForm f = rs.lambda[i] - rs.lambda[i + 1] - Rational(1);
            EXPECT_TRUE(f.substitute(acc).is_zero()) << i;
        }
    }
    {
        auto rs = build_root_system("Sp6");
        auto hs = hyperplanes_for(rs, rs.parabolic(2));
        auto acc = restriction_map(hs);
        ASSERT_EQ(hs.size(), 2u);
        for (int i = 0; i < 2; ++i) EXPECT_TRUE((rs.lambda[i] - rs.lambda[i + 1] - Rational(1)).substitute(acc).is_zero());
    }
    {
        auto rs = build_root_system("G2");
        auto hl = hyperplanes_for(rs, rs.parabolic("Plong"));
        auto hsh = hyperplanes_for(rs, rs.parabolic("Pshort"));
        EXPECT_EQ(hl.at(0).form, var("z1") - var("z2") - Rational(1));
        EXPECT_EQ(hsh.at(0).form, var("z2") - Rational(1));
    }
}

TEST(IteratedResidue, RankOnePassthrough) {
    auto rs = build_root_system("SL2");
    auto ir = iterated_residue(build_period(rs), rs, rs.parabolic("B"));
    EXPECT_TRUE(ir.hyperplanes.empty());
    EXPECT_EQ(ir.result.size(), 2u);
    EXPECT_EQ(ir.result.variables(), std::set<std::string>{"s"});
}

TEST(IteratedResidue, GoldenShapesAndPurity) {
    struct Case {
        const char* g;
        const char* p;
        std::size_t terms;
    };
    for (auto c : {Case{"SL3", "P21", 5}, Case{"SL4", "P31", 10}, Case{"Sp4", "Pe1-e2", 6}, Case{"G2", "Pshort", 8}}) {
        auto rs = build_root_system(c.g);
        auto ir = iterated_residue(build_period(rs), rs, rs.parabolic(c.p));
        EXPECT_FALSE(ir.auxiliary_atoms) << c.g << c.p;
        EXPECT_EQ(ir.result.variables(), std::set<std::string>{"s"});
        EXPECT_EQ(ir.stages.size(), ir.hyperplanes.size());
        EXPECT_EQ(ir.result.size(), c.terms) << c.g << c.p;
    }
}

TEST(IteratedResidue, SL3ArgumentsAreInThreeS) {
    auto rs = build_root_system("SL3");
    auto ir = iterated_residue(build_period(rs), rs, rs.parabolic("P21"));
    for (const auto& t : ir.result.terms)
        for (const auto& [a, e] : t.xi)
            if (a.is_form()) EXPECT_EQ(rat_abs(a.arg.coeff("s")), 3) << a.str();
}

TEST(IteratedResidue, PerTagCounts) {
    auto rs = build_root_system("SL5");
    auto per = build_period(rs);
    auto ir = iterated_residue(per, rs, rs.parabolic("P32"), {}, true);
    EXPECT_EQ(ir.result.size(), 37u);
    auto merged = iterated_residue(per, rs, rs.parabolic("P32"));
    EXPECT_EQ(merged.result.size(), 24u);
}
