#include <catch2/catch_amalgamated.hpp>

#include <bailey/chain.hpp>

#include "test_helpers.hpp"

using namespace bailey;

namespace {

BaileyPair ubp(Frac order = Frac(20)) { return unit_pair(param_a_q(), order); }
BaileyPair ubp_aq(Frac order = Frac(20)) { return unit_pair(param_aq_q(), order); }
BaileyPair ubp1(Frac order = Frac(20))
{
    return specialize_a(unit_pair(param_a_q(), order), Rational(1), Frac(0));
}
BaileyPair ubp_q(Frac order = Frac(20))
{
    return specialize_a(unit_pair(param_a_q(), order), Rational(1), Frac(1));
}

void expect_sound(const BaileyPair& p, long long depth, Frac order, const std::string& what)
{
    auto v = defining_relation_check(p, depth, order);
    INFO(what << ": " << v.str());
    CHECK(v.ok);
}

RMonomial mono(Rational c, Frac a, Frac q) { return RMonomial(std::move(c), a, q); }

} // namespace

TEST_CASE("soundness of every named transform on the unit pair")
{
    const Frac N(18);
    auto u = ubp(N);

    for (auto k : {StepKind::S1, StepKind::S2, StepKind::S3, StepKind::S4, StepKind::S6,
                   StepKind::D1, StepKind::D2, StepKind::D3, StepKind::D4, StepKind::D5,
                   StepKind::D6, StepKind::T1, StepKind::T2}) {
        expect_sound(apply_step(TransformStep::named(k), u), 3, N, step_label(k));
    }
    // S5 at a -> q (symbolic beta denominator is not unit-leading)
    expect_sound(apply_step(TransformStep::named(StepKind::S5), ubp_q(N)), 3, N, "S5@a=q");

    // L-family needs a pair at (aq, q)
    auto w = ubp_aq(N);
    expect_sound(apply_step(TransformStep::named(StepKind::L1), w), 3, N, "L1");
    expect_sound(apply_step(TransformStep::named(StepKind::L2), w), 3, N, "L2");
    auto wq = specialize_a(ubp_aq(N), Rational(1), Frac(1));
    expect_sound(apply_step(TransformStep::named(StepKind::L3), wq), 3, N, "L3@a=q");
}

TEST_CASE("soundness of parameterized transforms")
{
    const Frac N(16);
    auto u = ubp(N);

    expect_sound(bailey_lemma(u, RhoParam::finite(mono(-1, 0, 1)), RhoParam::finite(mono(-1, 0, 1))),
                 3, N, "BL(-q,-q)");
    expect_sound(bailey_lemma(u, RhoParam::finite(mono(1, Frac(1, 2), 1)),
                              RhoParam::finite(mono(-1, 0, Frac(3, 2)))),
                 3, N, "BL(a^1/2 q, -q^3/2)");
    expect_sound(double_base(u, mono(1, 0, 2)), 3, N, "GD(q^2)");
    expect_sound(double_base(u, mono(-1, 0, Frac(3, 2))), 3, N, "GD(-q^3/2)");
    expect_sound(double_base_alt(u, mono(1, 0, 2)), 3, N, "GA(q^2)");
    expect_sound(quadruple_base(u, mono(-1, 0, 0)), 2, N, "GQ(-1)");
    expect_sound(quadruple_base(u, mono(1, 0, 1)), 2, N, "GQ(q)");
    auto w = ubp_aq(N);
    expect_sound(lower_parameter(w, RhoParam::finite(mono(-1, 0, 1)), RhoParam::finite(mono(1, 0, 3))),
                 3, N, "LP(-q,q^3)");
}

TEST_CASE("soundness on randomized finite-support pairs")
{
    std::mt19937 rng(99);
    const Frac N(14);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<RSeries> at;
        at.push_back(RSeries::one());
        for (int r = 1; r <= 2; ++r) at.push_back(testing::random_series(rng, false, 3, 120));
        auto p = pair_from_alpha_table(at, param_a_q(), N);
        expect_sound(apply_step(TransformStep::named(StepKind::S1), p), 3, N, "S1 random");
        expect_sound(apply_step(TransformStep::named(StepKind::D1), p), 3, N, "D1 random");
        expect_sound(apply_step(TransformStep::named(StepKind::T1), p), 2, N, "T1 random");
        expect_sound(apply_step(TransformStep::named(StepKind::T2), p), 2, N, "T2 random");
        auto paq = pair_from_alpha_table(at, param_aq_q(), N);
        expect_sound(apply_step(TransformStep::named(StepKind::L1), paq), 3, N, "L1 random");
    }
}

TEST_CASE("named limits agree with generic transforms")
{
    const Frac N(12);
    auto u = ubp(N);

    SECTION("D3 = GD at B = sqrt(AQ)")
    {
        auto closed = double_base_sqrt(u);
        auto generic = double_base(u, mono(1, Frac(1, 2), Frac(1, 2)));
        for (long long n = 0; n <= 3; ++n) {
            REQUIRE(!first_discrepancy(closed.alpha(n, N), generic.alpha(n, N), N));
            REQUIRE(!first_discrepancy(closed.beta(n, N), generic.beta(n, N), N));
        }
    }
    SECTION("D6 = GA at B = sqrt(AQ)")
    {
        auto closed = double_base_alt_sqrt(u);
        auto generic = double_base_alt(u, mono(1, Frac(1, 2), Frac(1, 2)));
        for (long long n = 0; n <= 3; ++n) {
            REQUIRE(!first_discrepancy(closed.alpha(n, N), generic.alpha(n, N), N));
            REQUIRE(!first_discrepancy(closed.beta(n, N), generic.beta(n, N), N));
        }
    }
    SECTION("D5 agrees with GA at the small-B probe B = q^8")
    {
        auto closed = double_base_alt_zero(u);
        auto generic = double_base_alt(u, mono(1, 0, 8));
        // weights differ by O(B) = O(q^8); compare to order 8
        for (long long n = 0; n <= 2; ++n) {
            auto ca = closed.alpha(n, Frac(8));
            auto ga = generic.alpha(n, Frac(8));
            Frac upto = frac_min(Frac(8), frac_min(ca.order().v, ga.order().v));
            REQUIRE(!first_discrepancy(ca.truncated(Order(upto)), ga.truncated(Order(upto)), upto));
        }
    }
    SECTION("S2..S6 displayed closed forms match the limit engine")
    {
        // S3 alpha'_r = (-q^{1/2};q)_r / (-a q^{1/2};q)_r a^r q^{r^2/2} alpha_r
        auto s3 = apply_step(TransformStep::named(StepKind::S3), u);
        RMonomial q1 = RMonomial::q_power(Frac(1));
        for (long long r = 0; r <= 3; ++r) {
            auto expect = product_to_order(
                {lz_mono(mono(1, Frac(r), Frac(r * r, 2))),
                 lz_poch(mono(-1, 0, Frac(1, 2)), q1, r),
                 lz_inv_poch(mono(-1, 1, Frac(1, 2)), q1, r), lz_alpha(u, r)},
                N);
            REQUIRE(!first_discrepancy(s3.alpha(r, N), expect, N));
        }
        // S5 beta'_n at a=q: sum (-a^{1/2}q;q)_k a^{k/2} q^{(k^2-k)/2} beta_k
        //                     / ((q;q)_{n-k} (-a^{1/2};q)_n) with a = q
        auto uq = ubp_q(N);
        auto s5 = apply_step(TransformStep::named(StepKind::S5), uq);
        for (long long n = 0; n <= 3; ++n) {
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                terms.push_back(product_to_order(
                    {lz_mono(mono(1, 0, Frac(k, 2) + Frac(k * k - k, 2))),
                     lz_poch(mono(-1, 0, Frac(3, 2)), q1, k), lz_inv_poch(q1, q1, n - k),
                     lz_inv_poch(mono(-1, 0, Frac(1, 2)), q1, n), lz_beta(uq, k)},
                    N));
            }
            RSeries expect{Order(N)};
            for (auto& t : terms) expect = expect + t;
            REQUIRE(!first_discrepancy(s5.beta(n, N), expect, N));
        }
    }
    SECTION("D1 on the unit pair has beta'_n = q^n/(q^2;q^2)_n")
    {
        auto d1 = double_base_inf(u);
        RMonomial q2 = RMonomial::q_power(Frac(2));
        for (long long n = 0; n <= 4; ++n) {
            auto expect = inv_pochhammer(q2, q2, n, Order(N)).scaled(Rational(1), Frac(0), Frac(n));
            REQUIRE(!first_discrepancy(d1.beta(n, N), expect, N));
        }
    }
}

TEST_CASE("alpha factors of the base-change family")
{
    const Frac N(14);
    auto u = ubp(N);
    // T1: alpha'_1 = A Q alpha_1
    auto t1 = triple_base(u);
    auto expect = u.alpha(1, N).scaled(Rational(1), Frac(1), Frac(1));
    REQUIRE(!first_discrepancy(t1.alpha(1, N), expect.truncated(Order(N)), N));

    // GQ: alpha'_0 = alpha_0
    auto gq = quadruple_base(u, mono(-1, 0, 0));
    REQUIRE(!first_discrepancy(gq.alpha(0, N), u.alpha(0, N), N));

    // T2: beta'_0 = beta_0
    auto t2 = untriple_base(u);
    REQUIRE(!first_discrepancy(t2.beta(0, N), u.beta(0, N), N));

    // D4: alpha'_0 = alpha_0
    auto d4 = double_base_alt_inf(u);
    REQUIRE(!first_discrepancy(d4.alpha(0, N), u.alpha(0, N), N));

    // iterated (S1) at a=1: alpha_r^{(2)} = q^{2r^2} alpha_r
    auto u1 = ubp1(N);
    auto s11 = apply_chain(parse_chain("(S1)(S1)"), u1);
    for (long long r = 0; r <= 3; ++r) {
        auto e = u1.alpha(r, N).scaled(Rational(1), Frac(0), Frac(2 * r * r));
        REQUIRE(!first_discrepancy(s11.alpha(r, N), e.truncated(Order(N)), N));
    }
}

TEST_CASE("linear insertion")
{
    const Frac N(20);
    auto u1 = ubp1(N);
    auto s1 = apply_step(TransformStep::named(StepKind::S1), u1);
    auto fwd = linear_insertion(s1, Frac(3, 2), true);
    expect_sound(fwd, 4, N, "P41 fwd");
    auto back = linear_insertion(fwd, Frac(3, 2), false);
    for (long long n = 0; n <= 4; ++n) {
        REQUIRE(!first_discrepancy(back.alpha(n, N), s1.alpha(n, N), N));
        REQUIRE(!first_discrepancy(back.beta(n, N), s1.beta(n, N), N));
    }
    // misuse: wrong A
    REQUIRE_THROWS_AS(linear_insertion(s1, Frac(2), true), EngineError);
    // raw unit pair has the A=1/2 form, so A=3/2 must be rejected
    REQUIRE_THROWS_AS(linear_insertion(ubp1(N), Frac(3, 2), true), EngineError);
    // but A=1/2 applies cleanly (the linear exponent is symmetric)
    auto ok = linear_insertion(ubp1(N), Frac(1, 2), true);
    expect_sound(ok, 3, N, "P41 1/2 fwd on ubp");
}

TEST_CASE("documented relations hold")
{
    const Frac N(16);
    for (const auto& rel : documented_relations()) {
        BaileyPair seed = rel.seed_aq ? ubp_aq(N) : ubp(N);
        if (rel.specialize_aq) seed = specialize_a(seed, Rational(1), Frac(1));
        auto v = relation_check(parse_chain(rel.lhs), parse_chain(rel.rhs), seed, 3, N);
        INFO(rel.name << " -> " << v.str());
        CHECK(v.ok);
    }
}

TEST_CASE("chain word DSL round-trips")
{
    for (std::string text :
         {"(S1)(S2)(D1)(T1)(L3)", "(BL:inf,-1*a^1/2*q^1/2)(P41:3/2,fwd)",
          "(GD:-1*q^2)(GA:1*q^1/2)(GQ:-1)", "(LP:inf,-1*q^1/2)(P41:2,rev)",
          "(BL:-1*q,2/3*a^1*q^3)"}) {
        auto w = parse_chain(text);
        REQUIRE(w.print() == text);
        auto w2 = parse_chain(w.print());
        REQUIRE(w2.print() == text);
    }
    REQUIRE(parse_chain("  ( S1 ) ( D2 )  ").print() == "(S1)(D2)");
    REQUIRE(parse_chain("").steps.empty());
    REQUIRE_THROWS_AS(parse_chain("(S7)"), EngineError);
    REQUIRE_THROWS_AS(parse_chain("(BL:inf)"), EngineError);
    REQUIRE_THROWS_AS(parse_chain("(S1"), EngineError);
    // lattice validation
    REQUIRE_THROWS_AS(parse_chain("(GD:q^1/3)", 2), EngineError);
    REQUIRE_NOTHROW(parse_chain("(GD:q^1/3)", 6));
}

TEST_CASE("empty chain leaves the seed unchanged")
{
    auto u = ubp(Frac(10));
    auto same = apply_chain(ChainWord{}, u);
    REQUIRE(!first_discrepancy(same.beta(2, Frac(10)), u.beta(2, Frac(10)), Frac(10)));
}
