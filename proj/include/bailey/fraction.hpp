#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bailey {

// Exact exponent on the q- and a-lattices: a reduced fraction with small
// numerator/denominator. Exponents in this engine stay tiny (|num| well
// below 10^6), so int64 arithmetic is exact.
struct Frac {
    long long num = 0;
    long long den = 1;

    constexpr Frac() = default;
    constexpr Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize()
    {
        if (den == 0) throw std::domain_error("zero denominator exponent");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Frac operator+(Frac x, Frac y) { return Frac(x.num * y.den + y.num * x.den, x.den * y.den); }
    friend Frac operator-(Frac x, Frac y) { return Frac(x.num * y.den - y.num * x.den, x.den * y.den); }
    friend Frac operator-(Frac x) { return Frac(-x.num, x.den); }
    friend Frac operator*(Frac x, Frac y) { return Frac(x.num * y.num, x.den * y.den); }
    friend Frac operator*(long long k, Frac y) { return Frac(k * y.num, y.den); }
    friend Frac operator/(Frac x, Frac y)
    {
        if (y.num == 0) throw std::domain_error("exponent division by zero");
        return Frac(x.num * y.den, x.den * y.num);
    }

    friend bool operator==(const Frac& x, const Frac& y) { return x.num == y.num && x.den == y.den; }
    friend std::strong_ordering operator<=>(const Frac& x, const Frac& y)
    {
        long long l = x.num * y.den, r = y.num * x.den;
        return l <=> r;
    }

    bool is_integer() const { return den == 1; }
    bool on_lattice(long long d) const { return d % den == 0; }

    std::string str() const
    {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Smallest lattice point (multiple of 1/d) that is >= x.
inline Frac lattice_ceil(Frac x, long long d)
{
    long long n = x.num * d;
    long long q = n / x.den;
    if (q * x.den < n) ++q;
    return Frac(q, d);
}

inline Frac frac_min(Frac a, Frac b) { return a < b ? a : b; }
inline Frac frac_max(Frac a, Frac b) { return a < b ? b : a; }

// Truncation order of a series: exponent below which coefficients are
// certified, or infinite for exact polynomials.
struct Order {
    Frac v{};
    bool finite = true;

    Order() = default;
    Order(Frac f) : v(f), finite(true) {}
    Order(long long n) : v(Frac(n)), finite(true) {}
    static Order inf() { Order o; o.finite = false; return o; }

    friend Order operator+(Order o, Frac s)
    {
        if (!o.finite) return o;
        return Order(o.v + s);
    }
    friend Order min(Order a, Order b)
    {
        if (!a.finite) return b;
        if (!b.finite) return a;
        return Order(frac_min(a.v, b.v));
    }
    friend bool operator==(const Order& a, const Order& b)
    {
        if (a.finite != b.finite) return false;
        return !a.finite || a.v == b.v;
    }
    // true if exponent e is below this order (i.e. certified).
    bool covers(Frac e) const { return !finite || e < v; }
    bool at_least(Frac e) const { return !finite || v >= e; }

    std::string str() const { return finite ? v.str() : "inf"; }
};

} // namespace bailey
