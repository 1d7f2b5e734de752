#include "gpzeta/rootsys.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gpzeta;

namespace {

bool is_negative_root(const RootSystem& rs, const RVec& v) { return rs.is_root(v) && !rs.is_positive(v); }

}  // namespace

TEST(RootSystem, WeylGroupOrders) {
    EXPECT_EQ(weyl_group(build_root_system("A1")).size(), 2u);
    EXPECT_EQ(weyl_group(build_root_system("SL3")).size(), 6u);
    EXPECT_EQ(weyl_group(build_root_system("SL5")).size(), 120u);
    EXPECT_EQ(weyl_group(build_root_system("Sp4")).size(), 8u);
    EXPECT_EQ(weyl_group(build_root_system("G2")).size(), 12u);
    EXPECT_EQ(weyl_group(build_root_system("SO7")).size(), 48u);
    EXPECT_EQ(weyl_group(build_root_system("SO8")).size(), 192u);
}

TEST(RootSystem, PositiveRootCounts) {
    EXPECT_EQ(build_root_system("C2").positive_roots.size(), 4u);
    EXPECT_EQ(build_root_system("G2").positive_roots.size(), 6u);
    EXPECT_EQ(build_root_system("SL5").positive_roots.size(), 10u);
}

TEST(RootSystem, RhoIsHalfSumAndPairsToOne) {
    for (const char* g : {"A1", "SL4", "Sp4", "Sp6", "G2", "SO7", "SO8"}) {
        auto rs = build_root_system(g);
        RVec sum(rs.dim, Rational(0));
        for (const auto& a : rs.positive_roots) sum = vec_add(sum, a);
        for (int i = 0; i < rs.dim; ++i) EXPECT_EQ(sum[i], 2 * rs.rho[i]) << g;
        for (const auto& a : rs.simple_roots) EXPECT_EQ(dot(rs.rho, rs.coroot(a)), 1) << g;
    }
}

TEST(RootSystem, InversionSets) {
    auto rs = build_root_system("G2");
    auto W = weyl_group(rs);
    EXPECT_TRUE(inversion_set(rs, W.front()).empty());
    const auto& longest = *std::max_element(W.begin(), W.end(), [](auto& a, auto& b) { return a.length < b.length; });
    EXPECT_EQ(inversion_set(rs, longest).size(), rs.positive_roots.size());
    for (const auto& w : W) {
        auto inv = inversion_set(rs, w);
        EXPECT_EQ(static_cast<int>(inv.size()), w.length);
        for (const auto& a : rs.positive_roots) {
            bool neg = is_negative_root(rs, mat_apply(w.action, a));
            EXPECT_EQ(neg, std::find(inv.begin(), inv.end(), a) != inv.end());
        }
    }
    auto a1 = build_root_system("A1");
    auto W1 = weyl_group(a1);
    EXPECT_EQ(inversion_set(a1, W1[1]), a1.positive_roots);
}

TEST(RootSystem, WeylClosureAndLengthSubadditivity) {
    for (const char* g : {"SL3", "SL4", "Sp4", "G2", "SO7"}) {
        auto rs = build_root_system(g);
        auto W = weyl_group(rs);
        for (const auto& w : W)
            for (const auto& a : rs.roots) EXPECT_TRUE(rs.is_root(mat_apply(w.action, a))) << g;
        auto length_of = [&](const RMat& m) {
            for (const auto& w : W)
                if (w.action == m) return w.length;
            return -1;
        };
        for (const auto& x : W)
            for (const auto& y : W) {
                int l = length_of(mat_mul(x.action, y.action));
                ASSERT_GE(l, 0);
                EXPECT_LE(l, x.length + y.length);
            }
    }
}

TEST(RootSystem, Pairings) {
    auto a1 = build_root_system("A1");
    EXPECT_EQ(a1.pairing(a1.simple_roots[0]), LinForm::variable("z1", 2));  // z1 - z2 with z2 = -z1
    EXPECT_EQ(a1.pairing_ambient(a1.simple_roots[0]), LinForm::variable("z1") - LinForm::variable("z2"));

    auto g2 = build_root_system("G2");
    EXPECT_EQ(g2.pairing(g2.simple_roots[0]), LinForm::variable("z1") - LinForm::variable("z2"));
    EXPECT_EQ(g2.pairing(g2.simple_roots[1]), LinForm::variable("z2"));
}

TEST(RootSystem, EliminatedPairingsAgreeWithAmbient) {
    auto rs = build_root_system("SL4");
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
    for (int k = 0; k < 100; ++k) {
        std::map<std::string, Rational> free;
        for (const auto& v : rs.variables) free[v] = Rational(num(rng), den(rng));
        std::map<std::string, Rational> amb;
        for (int i = 0; i < rs.dim; ++i) amb["z" + std::to_string(i + 1)] = rs.lambda[i].evaluate(free);
        for (const auto& a : rs.positive_roots)
            EXPECT_EQ(rs.pairing(a).evaluate(free), rs.pairing_ambient(a).evaluate(amb));
    }
}

TEST(RootSystem, ParabolicLabels) {
    auto sl3 = build_root_system("SL3");
    EXPECT_EQ(sl3.parabolic("P21").removed, 1);
    EXPECT_EQ(sl3.parabolic("P12").removed, 0);
    EXPECT_EQ(build_root_system("SL2").parabolic("B").removed, 0);
    auto sp4 = build_root_system("Sp4");
    EXPECT_EQ(sp4.parabolic("Pe1-e2").name, sp4.parabolic("P1").name);
    EXPECT_EQ(sp4.parabolic("P2e2").name, sp4.parabolic("P2").name);
    auto g2 = build_root_system("G2");
    EXPECT_EQ(g2.parabolic("Plong").removed, 1);
    EXPECT_EQ(g2.parabolic("Pshort").removed, 0);
    EXPECT_THROW(g2.parabolic("P7"), std::invalid_argument);
    EXPECT_THROW(build_root_system("E8"), std::invalid_argument);
    EXPECT_THROW(build_root_system("Sp5"), std::invalid_argument);
}

TEST(RootSystem, JsonDump) {
    auto j = to_json(build_root_system("G2"), true);
    EXPECT_EQ(j.at("weyl_order").get<int>(), 12);
    EXPECT_EQ(j.at("positive_roots").size(), 6u);
}
