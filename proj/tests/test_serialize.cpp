#include "gpzeta/serialize.hpp"
#include "gpzeta/symexpr.hpp"

#include <gtest/gtest.h>

using namespace gpzeta;

namespace {

void expect_roundtrip(const SymExpr& e) {
    auto j = to_json(e);
    auto back = symexpr_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_TRUE(structurally_equal(back, e));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    EXPECT_TRUE(structurally_equal(parse_expr(to_plain(e)), e));
}

}  // namespace

TEST(Serialize, RoundTripA1Period) { expect_roundtrip(simplify(build_period(build_root_system("A1")))); }

TEST(Serialize, RoundTripG2Period) { expect_roundtrip(simplify(build_period(build_root_system("G2")))); }

TEST(Serialize, RoundTripTVersionTerm) {
    auto p = simplify(build_period_T(build_root_system("SL3"), ExponentAction::LowerIndex));
    SymExpr one = SymExpr::from_term(p.terms.back());
    expect_roundtrip(one);
    expect_roundtrip(p);
}

TEST(Serialize, ParserAcceptsDisplayedForms) {
    auto e = parse_expr("xi(2)*1/(3s-3)*xi(3s) - xi(2)*(1/(3s))*xi(3s-2) + 1/(3s-3)/(3s)*xi(3s-1)");
    EXPECT_EQ(e.size(), 3u);
    auto t = parse_expr("1/(3s)*xi(2)*xi(3s+3)*exp(3s*x+3s*y+4x+2y)");
    EXPECT_EQ(t.variables(), (std::set<std::string>{"s", "x", "y"}));
    EXPECT_THROW(parse_expr("xi(2s"), ParseError);
    EXPECT_THROW(parse_expr("1/(s-1) +"), ParseError);
}

TEST(Serialize, JsonSchemaFields) {
    auto j = to_json(parse_expr("-1/2/(3s-2)*xi(3s)"));
    ASSERT_EQ(j.at("terms").size(), 1u);
    const auto& t = j.at("terms")[0];
    EXPECT_TRUE(t.contains("scalar"));
    EXPECT_TRUE(t.contains("lin"));
    EXPECT_TRUE(t.contains("xi"));
    EXPECT_TRUE(t.contains("expfactor"));
}

TEST(Serialize, Latex) {
    auto s = to_latex(parse_expr("xi(2s)/(s-1) - xi(2s-1)/s"));
    EXPECT_NE(s.find("\\xi"), std::string::npos);
    EXPECT_NE(s.find("\\frac"), std::string::npos);
    EXPECT_EQ(parse_format("latex"), Format::Latex);
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}
