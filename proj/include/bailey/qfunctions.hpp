#pragma once

#include <vector>

#include "series.hpp"

namespace bailey {

// c * a^{a_exp} * q^{q_exp}; the argument currency of Pochhammer symbols and
// transformation parameters.
template <class S>
struct Monomial {
    S coeff{};
    Frac a_exp{};
    Frac q_exp{};

    Monomial() = default;
    Monomial(S c, Frac a, Frac q) : coeff(std::move(c)), a_exp(a), q_exp(q) {}

    static Monomial unit() { return Monomial(S(1), Frac(0), Frac(0)); }
    static Monomial q_power(Frac e) { return Monomial(S(1), Frac(0), e); }
    static Monomial a_power(Frac e) { return Monomial(S(1), e, Frac(0)); }

    bool is_zero_mono() const { return is_zero(coeff); }
    bool pure_q() const { return a_exp == Frac(0); }

    friend Monomial operator*(const Monomial& x, const Monomial& y)
    {
        return Monomial(x.coeff * y.coeff, x.a_exp + y.a_exp, x.q_exp + y.q_exp);
    }
    friend Monomial operator/(const Monomial& x, const Monomial& y)
    {
        return Monomial(x.coeff * scalar_inverse(y.coeff), x.a_exp - y.a_exp, x.q_exp - y.q_exp);
    }
    friend Monomial operator-(const Monomial& x) { return Monomial(S{} - x.coeff, x.a_exp, x.q_exp); }

    Monomial pow(long long e) const
    {
        return Monomial(rat_pow(coeff, e), Frac(e) * a_exp, Frac(e) * q_exp);
    }
    Monomial inverse() const { return Monomial(scalar_inverse(coeff), -a_exp, -q_exp); }

    Series<S> series() const { return Series<S>::monomial(coeff, a_exp, q_exp); }

    std::string str() const
    {
        std::string vars;
        auto var = [&](const char* v, Frac e) {
            if (e == Frac(0)) return;
            if (!vars.empty()) vars += "*";
            vars += v;
            if (!(e == Frac(1))) vars += "^" + e.str();
        };
        var("a", a_exp);
        var("q", q_exp);
        if (vars.empty()) return to_string(coeff);
        if (is_one(coeff)) return vars;
        if (coeff == Rational(-1)) return "-" + vars;
        return to_string(coeff) + "*" + vars;
    }
};

using RMonomial = Monomial<Rational>;

template <class S>
Series<S> one_minus(const Monomial<S>& m)
{
    return Series<S>::one() - m.series();
}

namespace detail {
template <class S>
void check_poch_base(const Monomial<S>& base)
{
    if (!base.pure_q() || !(base.q_exp > Frac(0)) || !is_one(base.coeff))
        fail(ErrKind::InvalidParams, "Pochhammer base must be a positive pure q-power");
}
} // namespace detail

// (x; Q)_n = prod_{j=0}^{n-1} (1 - x Q^j), truncated at `order`. Negative n
// uses (x;Q)_{-m} = 1/(x Q^{-m}; Q)_m, which is an error when that product
// vanishes (the reciprocal-of-zero case); use inv_pochhammer for the
// vanishing convention.
template <class S>
Series<S> pochhammer(const Monomial<S>& arg, const Monomial<S>& base, long long n, Order order)
{
    detail::check_poch_base(base);
    if (n < 0) {
        Monomial<S> shifted = arg * base.pow(n);
        if (!order.finite) fail(ErrKind::InvalidParams, "negative Pochhammer index needs finite order");
        Series<S> p = pochhammer(shifted, base, -n, Order::inf());
        if (p.is_exact_zero())
            fail(ErrKind::NonUnitLeading, "Pochhammer with negative index is infinite here");
        return p.inverted(order.v);
    }
    Series<S> acc = Series<S>::one();
    Monomial<S> cur = arg;
    for (long long j = 0; j < n; ++j) {
        acc = acc * one_minus(cur);
        if (acc.is_exact_zero()) return acc;
        if (order.finite) acc = acc.truncated(order);
        cur = cur * base;
    }
    return acc;
}

// (x; Q)_inf truncated at `order`; requires the argument to carry a positive
// q-power so the product stabilizes.
template <class S>
Series<S> pochhammer_inf(const Monomial<S>& arg, const Monomial<S>& base, Order order)
{
    detail::check_poch_base(base);
    if (!order.finite) fail(ErrKind::InvalidParams, "infinite Pochhammer needs finite order");
    if (!(arg.q_exp > Frac(0)))
        fail(ErrKind::NonconvergentInfiniteProduct,
             "infinite Pochhammer argument " + arg.str() + " has no positive q-power");
    Series<S> acc = Series<S>::one();
    Monomial<S> cur = arg;
    while (cur.q_exp < order.v) {
        acc = (acc * one_minus(cur)).truncated(order);
        cur = cur * base;
    }
    ABound b = acc.a_bound();
    if (arg.a_exp > Frac(0)) b.hi = std::nullopt;
    if (arg.a_exp < Frac(0)) b.lo = std::nullopt;
    acc.set_a_bound(b);
    return acc;
}

// 1/(x;Q)_n with the vanishing convention: a negative index yields the zero
// series exactly, which is what makes multisum terms with reversed indices
// drop out.
template <class S>
Series<S> inv_pochhammer(const Monomial<S>& arg, const Monomial<S>& base, long long n, Order order)
{
    detail::check_poch_base(base);
    if (!order.finite) fail(ErrKind::InvalidParams, "inverse Pochhammer needs finite order");
    if (n < 0) return pochhammer(arg * base.pow(n), base, -n, order);
    Series<S> p = pochhammer(arg, base, n, order);
    return p.inverted(order.v);
}

template <class S>
Series<S> inv_pochhammer_inf(const Monomial<S>& arg, const Monomial<S>& base, Order order)
{
    return pochhammer_inf(arg, base, order).inverted(order.v);
}

enum class TripleMethod { Product, ThetaSum };

// Jacobi triple product (q^B, q^{A-B}, q^A; q^A)_inf, or with `positive` the
// sign-free variant (-q^B, -q^{A-B}, q^A; q^A)_inf. The theta route expands
// 1 + sum_{r>=1} (+-1)^r q^{A r^2/2} (q^{-(A/2-B)r} + q^{(A/2-B)r}).
inline RSeries triple_product(Frac modulus, Frac cls, Order order, TripleMethod method,
                              bool positive = false)
{
    if (!(Frac(0) < cls) || !(cls < modulus))
        fail(ErrKind::InvalidParams, "triple product class out of range");
    if (!order.finite) fail(ErrKind::InvalidParams, "triple product needs finite order");
    const Rational sign = positive ? 1 : -1;
    if (method == TripleMethod::Product) {
        const Rational argc = positive ? -1 : 1;
        RMonomial base = RMonomial::q_power(modulus);
        RSeries r = pochhammer_inf(RMonomial(argc, Frac(0), cls), base, order);
        r = r * pochhammer_inf(RMonomial(argc, Frac(0), modulus - cls), base, order);
        r = r * pochhammer_inf(RMonomial(Rational(1), Frac(0), modulus), base, order);
        return r.truncated(order);
    }
    RSeries acc = RSeries::one().truncated(order);
    Frac half = modulus / Frac(2);
    Frac lin = half - cls;
    Rational s(1);
    for (long long r = 1;; ++r) {
        Frac quad = Frac(r * r) * half;
        Frac lo = quad - Frac(r) * (lin < Frac(0) ? -lin : lin);
        if (!(lo < order.v)) break;
        s = s * sign;
        acc = acc + RSeries::monomial(s, Frac(0), quad - Frac(r) * lin) +
              RSeries::monomial(s, Frac(0), quad + Frac(r) * lin);
        acc = acc.truncated(order);
    }
    return acc;
}

// Gaussian binomial coefficient as an exact polynomial; out of range gives
// the zero polynomial (vanishing-term convention).
inline RSeries q_binomial(long long n, long long k)
{
    if (k < 0 || n < 0 || k > n) return RSeries();
    const long long deg = k * (n - k);
    RMonomial q = RMonomial::q_power(Frac(1));
    Order cut(Frac(deg + 1));
    RSeries num = pochhammer(q, q, n, cut);
    RSeries r = num * inv_pochhammer(q, q, k, cut) * inv_pochhammer(q, q, n - k, cut);
    // exact: the quotient is a polynomial of degree k(n-k)
    RSeries exact;
    for (const auto& [e, p] : r.terms()) {
        for (const auto& [ae, c] : p.terms()) exact = exact + RSeries::monomial(c, ae, e);
    }
    return exact;
}

} // namespace bailey
