#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace bailey {

// Exact rational scalar used throughout the series engine.
using Rational = mpq_class;

// long long -> Rational (gmpxx has no long long constructor; long is 64-bit
// on this platform).
inline Rational rat_of(long long n) { return Rational(static_cast<long>(n)); }

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_one(const Rational& x) { return x == 1; }

inline Rational scalar_inverse(const Rational& x)
{
    if (is_zero(x)) throw std::domain_error("rational division by zero");
    return Rational(1) / x;
}

inline Rational rat_pow(const Rational& base, long e)
{
    if (e == 0) return Rational(1);
    Rational b = e > 0 ? base : scalar_inverse(base);
    long n = e > 0 ? e : -e;
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

// Exact square root, if the rational is a perfect square.
inline std::optional<Rational> rat_sqrt(const Rational& x)
{
    if (sgn(x) < 0) return std::nullopt;
    mpz_class num = x.get_num(), den = x.get_den();
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational(rn, rd);
}

inline std::string to_string(const Rational& x)
{
    return x.get_str();
}

} // namespace bailey
