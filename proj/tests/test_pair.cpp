#include <catch2/catch_amalgamated.hpp>

#include <bailey/pair.hpp>

#include "test_helpers.hpp"

using namespace bailey;

TEST_CASE("unit pair basics")
{
    auto u = unit_pair(param_a_q(), Frac(30));
    REQUIRE(equal_mod(u.beta(0), RSeries::one(), Frac(30)));
    REQUIRE(u.beta(1).is_exact_zero());
    REQUIRE(equal_mod(u.alpha(0), RSeries::one(), Frac(30)));

    // alpha_1 = -(1 - a q^2)/(1 - q) = -1 - q - q^2 + a q^2 + O(q^3)
    auto a1 = u.alpha(1, Frac(3));
    RSeries expect = RSeries::monomial(-1, 0, 0) + RSeries::monomial(-1, 0, 1) +
                     RSeries::monomial(-1, 0, 2) + RSeries::monomial(1, 1, 2);
    REQUIRE(equal_mod(a1, expect, Frac(3)));
}

TEST_CASE("defining relation on unit pairs")
{
    for (auto param : {param_a_q(), param_aq_q()}) {
        auto u = unit_pair(param, Frac(30));
        auto v = defining_relation_check(u, 6, Frac(30));
        INFO(param.str() << ": " << v.str());
        REQUIRE(v.ok);
    }
    auto u1 = specialize_a(unit_pair(param_a_q(), Frac(30)), Rational(1), Frac(0));
    auto v1 = defining_relation_check(u1, 6, Frac(30));
    REQUIRE(v1.ok);
}

TEST_CASE("injected fault is detected")
{
    auto u = unit_pair(param_a_q(), Frac(20));
    std::vector<RSeries> at, bt;
    for (int n = 0; n <= 4; ++n) {
        at.push_back(u.alpha(n, Frac(20)));
        RSeries b = u.beta(n, Frac(20));
        if (n == 1) b = b + RSeries::monomial(1, 0, 1); // perturb beta_1 by q
        bt.push_back(b.truncated(Order(Frac(20))));
    }
    auto p = pair_from_tables(at, bt, param_a_q(), Frac(20));
    auto v = defining_relation_check(p, 4, Frac(20));
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.first_n == 1);
    REQUIRE(v.discrepancy.has_value());
    REQUIRE(v.discrepancy->q_exp == Frac(1));
}

TEST_CASE("tables reproduce the unit pair and guard their range")
{
    auto u = unit_pair(param_a_q(), Frac(16));
    std::vector<RSeries> at, bt;
    for (int n = 0; n <= 3; ++n) {
        at.push_back(u.alpha(n, Frac(16)));
        bt.push_back(u.beta(n, Frac(16)));
    }
    auto p = pair_from_tables(at, bt, param_a_q(), Frac(16));
    for (int n = 0; n <= 3; ++n) REQUIRE(equal_mod(p.beta(n, Frac(16)), u.beta(n, Frac(16)), Frac(16)));
    REQUIRE(defining_relation_check(p, 3, Frac(16)).ok);

    auto empty = pair_from_tables({}, {}, param_a_q(), Frac(16));
    REQUIRE_THROWS_MATCHES(empty.beta(0, Frac(16)), EngineError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("table")));
}

TEST_CASE("triangularity: beta from random alpha always satisfies the relation")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<RSeries> at;
        at.push_back(RSeries::one());
        for (int r = 1; r <= 3; ++r) at.push_back(testing::random_series(rng, false, 4, 48));
        auto p = pair_from_alpha_table(at, param_a_q(), Frac(20));
        REQUIRE(defining_relation_check(p, 5, Frac(20)).ok);
    }
}

TEST_CASE("memoization is observationally transparent")
{
    auto u = unit_pair(param_a_q(), Frac(24));
    auto x = u.alpha(3, Frac(10));
    auto y = u.alpha(3, Frac(24)); // upgrade
    auto z = u.alpha(3, Frac(10));
    REQUIRE(x.order() == z.order());
    REQUIRE(equal_mod(x, z, Frac(10)));
    REQUIRE(equal_mod(y, z, Frac(10)));
}

TEST_CASE("specialize a on pairs")
{
    auto u = unit_pair(param_a_q(), Frac(20));
    auto s = specialize_a(u, Rational(1), Frac(0));
    REQUIRE(s.parameter().A.a_exp == Frac(0));
    REQUIRE(s.parameter().A.q_exp == Frac(0));
    // alpha_1(1,q) = -(1 - q^2)/(1 - q) = -(1+q)
    auto a1 = s.alpha(1, Frac(10));
    REQUIRE(equal_mod(a1, RSeries::monomial(-1, 0, 0) + RSeries::monomial(-1, 0, 1), Frac(10)));

    // a -> 1/q on alpha_1 agrees with direct instantiation at A = q^{-1}
    auto sq = specialize_a(u, Rational(1), Frac(-1));
    ParameterMonomial direct_param(RMonomial(Rational(1), Frac(0), Frac(-1)), Frac(1));
    auto direct = unit_pair(direct_param, Frac(20));
    for (int n = 0; n <= 3; ++n) {
        auto l = sq.alpha(n, Frac(10));
        auto r = direct.alpha(n, Frac(10));
        REQUIRE(equal_mod(l, r, Frac(10)));
    }
}
