#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fraction.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace bailey {

// Interval bound on the a-exponents occurring anywhere in a series,
// including the unknown tail beyond the truncation order. A missing side
// means unbounded. Needed to re-truncate honestly when a is specialized
// to a power of q.
struct ABound {
    std::optional<Frac> lo{Frac(0)};
    std::optional<Frac> hi{Frac(0)};

    static ABound unbounded() { return {std::nullopt, std::nullopt}; }
    static ABound interval(Frac l, Frac h) { return {l, h}; }

    friend ABound hull(const ABound& x, const ABound& y)
    {
        ABound r;
        r.lo = (x.lo && y.lo) ? std::optional<Frac>(frac_min(*x.lo, *y.lo)) : std::nullopt;
        r.hi = (x.hi && y.hi) ? std::optional<Frac>(frac_max(*x.hi, *y.hi)) : std::nullopt;
        return r;
    }
    friend ABound sum(const ABound& x, const ABound& y)
    {
        ABound r;
        r.lo = (x.lo && y.lo) ? std::optional<Frac>(*x.lo + *y.lo) : std::nullopt;
        r.hi = (x.hi && y.hi) ? std::optional<Frac>(*x.hi + *y.hi) : std::nullopt;
        return r;
    }
    ABound shifted(Frac s) const
    {
        ABound r;
        if (lo) r.lo = *lo + s;
        if (hi) r.hi = *hi + s;
        return r;
    }
    ABound stretched(long long k) const
    {
        ABound r;
        auto mul = [&](const std::optional<Frac>& f) -> std::optional<Frac> {
            return f ? std::optional<Frac>(Frac(k) * *f) : std::nullopt;
        };
        r.lo = mul(lo); r.hi = mul(hi);
        if (k < 0) std::swap(r.lo, r.hi);
        return r;
    }
};

struct Discrepancy {
    Frac q_exp;
    Frac a_exp;
    std::string lhs, rhs;
};

// Truncated Laurent series in q with Laurent-polynomial-in-a coefficients
// over an exact scalar ring. Immutable in spirit: all operations return new
// values. Terms with q-exponent >= order() are unknown; an infinite order
// marks an exact polynomial.
template <class S>
class Series {
public:
    using Coef = Poly<S>;
    using Map = std::map<Frac, Coef>;

    Series() : order_(Order::inf()) {}
    explicit Series(Order o) : order_(o) {}

    static Series zero() { return Series(); }
    static Series one() { return constant(S(1)); }
    static Series constant(S c)
    {
        Series r;
        r.set(Frac(0), Coef(std::move(c)));
        r.abound_ = ABound::interval(Frac(0), Frac(0));
        return r;
    }
    static Series monomial(S c, Frac a_exp, Frac q_exp)
    {
        Series r;
        if (!is_zero(c)) {
            r.set(q_exp, Coef(a_exp, std::move(c)));
            r.abound_ = ABound::interval(a_exp, a_exp);
        }
        return r;
    }

    const Map& terms() const { return terms_; }
    Order order() const { return order_; }
    const ABound& a_bound() const { return abound_; }
    void set_a_bound(ABound b) { abound_ = b; }

    bool is_exact() const { return !order_.finite; }
    bool is_exact_zero() const { return terms_.empty() && is_exact(); }
    bool no_terms() const { return terms_.empty(); }

    // Least stored q-exponent; the order itself when nothing is stored.
    Frac val() const
    {
        if (!terms_.empty()) return terms_.begin()->first;
        if (!order_.finite) fail(ErrKind::EmptySeries, "valuation of exact zero series");
        return order_.v;
    }

    Coef coefficient(Frac q_exp) const
    {
        auto it = terms_.find(q_exp);
        if (it != terms_.end()) return it->second;
        if (!order_.covers(q_exp))
            fail(ErrKind::InsufficientOrder,
                 "coefficient at q^" + q_exp.str() + " beyond order " + order_.str());
        return Coef{};
    }
    S coefficient(Frac q_exp, Frac a_exp) const
    {
        Coef c = coefficient(q_exp);
        for (const auto& [e, s] : c.terms())
            if (e == a_exp) return s;
        return S{};
    }

    Series truncated(Order o) const
    {
        Series r(min(order_, o));
        for (const auto& [e, c] : terms_) {
            if (!r.order_.covers(e)) break;
            r.terms_.emplace_hint(r.terms_.end(), e, c);
        }
        r.abound_ = abound_;
        return r;
    }

    friend Series operator+(const Series& x, const Series& y)
    {
        Series r(min(x.order_, y.order_));
        for (const auto& [e, c] : x.terms_)
            if (r.order_.covers(e)) r.set(e, c);
        for (const auto& [e, c] : y.terms_)
            if (r.order_.covers(e)) r.add(e, c);
        r.abound_ = hull(x.abound_, y.abound_);
        return r;
    }
    friend Series operator-(const Series& x)
    {
        Series r(x.order_);
        for (const auto& [e, c] : x.terms_) r.terms_.emplace_hint(r.terms_.end(), e, -c);
        r.abound_ = x.abound_;
        return r;
    }
    friend Series operator-(const Series& x, const Series& y) { return x + (-y); }

    friend Series operator*(const Series& x, const Series& y)
    {
        if (x.is_exact_zero() || y.is_exact_zero()) return Series();
        Series r(min(x.order_ + y.val(), y.order_ + x.val()));
        for (const auto& [ex, cx] : x.terms_) {
            if (!r.order_.covers(ex + y.val())) break;
            for (const auto& [ey, cy] : y.terms_) {
                Frac e = ex + ey;
                if (!r.order_.covers(e)) break;
                r.add(e, cx * cy);
            }
        }
        r.abound_ = sum(x.abound_, y.abound_);
        return r;
    }

    Series scaled(const S& c, Frac a_shift, Frac q_shift) const
    {
        if (is_zero(c)) return Series();
        Series r(order_ + q_shift);
        for (const auto& [e, p] : terms_) {
            Coef np = p.scaled(c, a_shift);
            if (!np.empty()) r.terms_.emplace_hint(r.terms_.end(), e + q_shift, std::move(np));
        }
        r.abound_ = abound_.shifted(a_shift);
        return r;
    }
    Series scaled(const S& c) const { return scaled(c, Frac(0), Frac(0)); }

    // Ring endomorphism a -> a^s, q -> q^t.
    Series substituted(long long s, long long t) const
    {
        if (t <= 0) fail(ErrKind::InvalidParams, "substitute needs positive q power");
        Series r(order_.finite ? Order(Frac(t) * order_.v) : Order::inf());
        for (const auto& [e, p] : terms_)
            r.terms_.emplace_hint(r.terms_.end(), Frac(t) * e, p.stretched(s));
        r.abound_ = abound_.stretched(s);
        return r;
    }

    // Multiplicative inverse to the requested order; the leading coefficient
    // polynomial must be a single a-monomial.
    Series inverted(Frac target) const
    {
        if (terms_.empty())
        {
            if (is_exact()) fail(ErrKind::EmptySeries, "inverse of zero series");
            fail(ErrKind::NonUnitLeading, "inverse of series with no known terms");
        }
        const Frac v = val();
        const Coef& m = terms_.begin()->second;
        if (!m.is_unit())
            fail(ErrKind::NonUnitLeading,
                 "leading coefficient " + m.str() + " is not an a-monomial unit");
        const Frac ma = m.terms()[0].first;
        Coef minv(-ma, scalar_inverse(m.terms()[0].second));

        Order ro = min(Order(target), order_ + (Frac(-2) * v));
        if (!ro.finite) fail(ErrKind::Internal, "inverse order must be finite");

        // Common exponent lattice for the convolution recurrence.
        long long L = v.den;
        for (const auto& [e, c] : terms_) L = std::lcm(L, e.den);
        L = std::lcm(L, ro.v.den);

        Series r(ro);
        r.set(-v, minv);
        const long long k_lo = -v.num * (L / v.den);
        const long long k_hi_num = ro.v.num * (L / ro.v.den);
        for (long long k = k_lo + 1; k < k_hi_num; ++k) {
            Frac e(k, L);
            Coef acc;
            for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
                Frac ref = e + v - it->first; // previously computed slot
                if (ref < -v) continue;
                auto jt = r.terms_.find(ref);
                if (jt == r.terms_.end()) continue;
                acc = acc + it->second * jt->second;
            }
            if (!acc.empty()) {
                Coef slot = -(minv * acc);
                if (!slot.empty()) r.set(e, std::move(slot));
            }
        }
        ABound b;
        if (abound_.lo && abound_.hi && *abound_.lo == *abound_.hi)
            b = ABound::interval(-*abound_.lo, -*abound_.lo);
        else
            b = ABound::unbounded();
        r.abound_ = b;
        return r;
    }

    // Specialize a^e -> (c q^f)^e termwise. Requires exact powers of the
    // coefficient and a finite a-bound when f shifts the tail downward.
    Series specialized_a(const S& c, Frac f) const
    {
        Order no = order_;
        if (order_.finite && !(f == Frac(0))) {
            std::optional<Frac> need = (f > Frac(0)) ? abound_.lo : abound_.hi;
            if (!need)
                fail(ErrKind::DegenerateSpecialization,
                     "specialization shifts an unbounded-in-a tail below the Laurent floor");
            Frac shift = f * *need;
            if (shift < Frac(0)) no = order_ + shift;
        }
        Series r(no);
        for (const auto& [e, p] : terms_) {
            for (const auto& [ae, s] : p.terms()) {
                S factor = scalar_a_power(c, ae);
                Frac ne = e + f * ae;
                if (r.order_.covers(ne)) r.add(ne, Coef(Frac(0), s * factor));
            }
        }
        r.abound_ = ABound::interval(Frac(0), Frac(0));
        return r;
    }

    friend bool equal_mod(const Series& x, const Series& y, Frac upto)
    {
        return !first_discrepancy(x, y, upto).has_value();
    }

    // First differing (q,a) slot below `upto`; both series must be certified
    // that far.
    friend std::optional<Discrepancy> first_discrepancy(const Series& x, const Series& y, Frac upto)
    {
        if (!x.order_.at_least(upto) || !y.order_.at_least(upto))
            fail(ErrKind::InsufficientOrder,
                 "comparison to q^" + upto.str() + " exceeds certified orders " + x.order_.str() +
                     ", " + y.order_.str());
        auto i = x.terms_.begin();
        auto j = y.terms_.begin();
        auto poly_diff = [](Frac q, const Poly<S>& a, const Poly<S>& b) -> std::optional<Discrepancy> {
            auto s = a.terms().begin();
            auto t = b.terms().begin();
            while (s != a.terms().end() || t != b.terms().end()) {
                if (t == b.terms().end() || (s != a.terms().end() && s->first < t->first)) {
                    return Discrepancy{q, s->first, to_string(s->second), "0"};
                } else if (s == a.terms().end() || t->first < s->first) {
                    return Discrepancy{q, t->first, "0", to_string(t->second)};
                } else {
                    if (!(s->second == t->second))
                        return Discrepancy{q, s->first, to_string(s->second), to_string(t->second)};
                    ++s; ++t;
                }
            }
            return std::nullopt;
        };
        while (true) {
            bool xe = (i == x.terms_.end() || !(i->first < upto));
            bool ye = (j == y.terms_.end() || !(j->first < upto));
            if (xe && ye) return std::nullopt;
            if (ye || (!xe && i->first < j->first)) {
                if (auto d = poly_diff(i->first, i->second, Poly<S>{})) return d;
                ++i;
            } else if (xe || j->first < i->first) {
                if (auto d = poly_diff(j->first, Poly<S>{}, j->second)) return d;
                ++j;
            } else {
                if (auto d = poly_diff(i->first, i->second, j->second)) return d;
                ++i; ++j;
            }
        }
    }

    // Lines "a-exp TAB q-exp TAB scalar", sorted by (q,a).
    std::vector<std::string> term_lines(std::optional<Frac> below = std::nullopt) const
    {
        std::vector<std::string> out;
        for (const auto& [e, p] : terms_) {
            if (below && !(e < *below)) break;
            for (const auto& [ae, c] : p.terms())
                out.push_back(ae.str() + "\t" + e.str() + "\t" + to_string(c));
        }
        return out;
    }

    std::string str(std::size_t max_terms = 12) const
    {
        std::ostringstream os;
        std::size_t n = 0;
        for (const auto& [e, p] : terms_) {
            if (n++ == max_terms) { os << "+ ... "; break; }
            os << "(" << p.str() << ")q^" << e.str() << " + ";
        }
        os << "O(q^" << order_.str() << ")";
        return os.str();
    }

    bool on_lattice(long long q_den, long long a_den = 2) const
    {
        for (const auto& [e, p] : terms_) {
            if (!e.on_lattice(q_den)) return false;
            for (const auto& [ae, c] : p.terms())
                if (!ae.on_lattice(a_den)) return false;
        }
        return true;
    }

private:
    static S scalar_a_power(const S& c, Frac e)
    {
        if (e.is_integer()) return rat_pow(c, e.num);
        if (e.den == 2) {
            auto r = rat_sqrt(c);
            if (!r) fail(ErrKind::DegenerateSpecialization,
                         "a-value " + to_string(c) + " has no exact square root for exponent " + e.str());
            return rat_pow(*r, e.num);
        }
        fail(ErrKind::DegenerateSpecialization, "unsupported fractional a-exponent " + e.str());
    }

    void set(Frac e, Coef c)
    {
        if (!c.empty()) terms_[e] = std::move(c);
    }
    void add(Frac e, const Coef& c)
    {
        if (c.empty()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.empty()) terms_.erase(it);
        }
    }

    Map terms_;
    Order order_;
    ABound abound_;
};

using RSeries = Series<Rational>;

} // namespace bailey
