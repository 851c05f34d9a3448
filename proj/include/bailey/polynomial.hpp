#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fraction.hpp"
#include "rational.hpp"

namespace bailey {

// Laurent polynomial in the symbol a over an exact scalar ring, used as the
// coefficient ring of the q-series. Terms are kept sorted by a-exponent with
// no stored zeros.
template <class S>
class Poly {
public:
    using Term = std::pair<Frac, S>;

    Poly() = default;
    explicit Poly(S c)
    {
        if (!is_zero(c)) terms_.emplace_back(Frac(0), std::move(c));
    }
    Poly(Frac a_exp, S c)
    {
        if (!is_zero(c)) terms_.emplace_back(a_exp, std::move(c));
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_monomial() const { return terms_.size() == 1; }
    // Unit in the coefficient ring = a single a-monomial with invertible scalar.
    bool is_unit() const { return is_monomial() && !is_zero(terms_[0].second); }

    Frac min_a_exp() const { return terms_.front().first; }
    Frac max_a_exp() const { return terms_.back().first; }

    void add_term(Frac e, const S& c)
    {
        if (is_zero(c)) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, const Frac& x) { return t.first < x; });
        if (it != terms_.end() && it->first == e) {
            it->second = it->second + c;
            if (is_zero(it->second)) terms_.erase(it);
        } else {
            terms_.insert(it, Term{e, c});
        }
    }

    friend Poly operator+(const Poly& x, const Poly& y)
    {
        Poly r;
        r.terms_.reserve(x.terms_.size() + y.terms_.size());
        auto i = x.terms_.begin();
        auto j = y.terms_.begin();
        while (i != x.terms_.end() && j != y.terms_.end()) {
            if (i->first < j->first) {
                r.terms_.push_back(*i++);
            } else if (j->first < i->first) {
                r.terms_.push_back(*j++);
            } else {
                S c = i->second + j->second;
                if (!is_zero(c)) r.terms_.emplace_back(i->first, std::move(c));
                ++i; ++j;
            }
        }
        r.terms_.insert(r.terms_.end(), i, x.terms_.end());
        r.terms_.insert(r.terms_.end(), j, y.terms_.end());
        return r;
    }

    friend Poly operator-(const Poly& x)
    {
        Poly r = x;
        for (auto& t : r.terms_) t.second = S{} - t.second;
        return r;
    }
    friend Poly operator-(const Poly& x, const Poly& y) { return x + (-y); }

    friend Poly operator*(const Poly& x, const Poly& y)
    {
        Poly r;
        for (const auto& [ex, cx] : x.terms_)
            for (const auto& [ey, cy] : y.terms_)
                r.add_term(ex + ey, cx * cy);
        return r;
    }

    Poly scaled(const S& c, Frac a_shift) const
    {
        Poly r;
        if (is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [e, v] : terms_) {
            S nv = v * c;
            if (!is_zero(nv)) r.terms_.emplace_back(e + a_shift, std::move(nv));
        }
        return r;
    }

    // a^e -> s*e on every term.
    Poly stretched(long long s) const
    {
        Poly r;
        r.terms_.reserve(terms_.size());
        for (const auto& [e, v] : terms_) r.terms_.emplace_back(Frac(s) * e, v);
        if (s < 0) std::reverse(r.terms_.begin(), r.terms_.end());
        return r;
    }

    friend bool operator==(const Poly& x, const Poly& y) { return x.terms_ == y.terms_; }

    std::string str(const std::string& var = "a") const
    {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += to_string(c);
            if (!(e == Frac(0))) out += "*" + var + "^" + e.str();
        }
        return out;
    }

private:
    std::vector<Term> terms_;
};

using RPoly = Poly<Rational>;

} // namespace bailey
