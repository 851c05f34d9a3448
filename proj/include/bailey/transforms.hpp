#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pair.hpp"

namespace bailey {

// c * a^e * q^f with an exact fractional power; coefficient roots must exist.
inline RMonomial mono_pow(const RMonomial& m, Frac e)
{
    Rational c;
    if (e.is_integer()) {
        c = rat_pow(m.coeff, e.num);
    } else if (e.den == 2) {
        auto s = rat_sqrt(m.coeff);
        if (!s)
            fail(ErrKind::DegenerateSpecialization,
                 "no exact square root of coefficient " + to_string(m.coeff));
        c = rat_pow(*s, e.num);
    } else {
        fail(ErrKind::DegenerateSpecialization, "unsupported monomial power " + e.str());
    }
    return RMonomial(c, m.a_exp * e, m.q_exp * e);
}

// ---------------------------------------------------------------------------
// lazy-series plumbing: formulas below assemble products of factors whose
// truncation orders depend on one another through their valuations; product_to_order
// measures the valuations on a first pass and tops up any factor that turns
// out to need more.

using Lazy = std::function<RSeries(Frac)>;

struct SeriesCache {
    std::map<std::pair<int, long long>, RSeries> store;
};

inline Lazy lz_series(RSeries s)
{
    return [s = std::move(s)](Frac) { return s; };
}
inline Lazy lz_mono(RMonomial m)
{
    return [m](Frac) { return m.series(); };
}
inline Lazy lz_poch(RMonomial arg, RMonomial base, long long n)
{
    return [=](Frac t) { return pochhammer(arg, base, n, Order(t)); };
}
inline Lazy lz_inv_poch(RMonomial arg, RMonomial base, long long n)
{
    return [=](Frac t) { return inv_pochhammer(arg, base, n, Order(t)); };
}
inline Lazy lz_cached(std::shared_ptr<SeriesCache> c, int tag, long long idx, Lazy build)
{
    return [c, tag, idx, build = std::move(build)](Frac t) {
        auto key = std::make_pair(tag, idx);
        auto it = c->store.find(key);
        if (it == c->store.end() || !it->second.order().at_least(t)) {
            c->store[key] = build(t);
            it = c->store.find(key);
        }
        return it->second;
    };
}

inline RSeries product_to_order(const std::vector<Lazy>& pieces, Frac target)
{
    if (pieces.empty()) return RSeries::one().truncated(Order(target));
    std::vector<RSeries> vals;
    vals.reserve(pieces.size());
    for (const auto& f : pieces) {
        vals.push_back(f(target));
        if (vals.back().is_exact_zero()) return RSeries();
    }
    std::vector<Frac> v(vals.size());
    Frac total(0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        v[i] = vals[i].val();
        total = total + v[i];
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
        Frac need = target - (total - v[i]);
        if (!vals[i].order().at_least(need)) {
            vals[i] = pieces[i](need);
            if (vals[i].is_exact_zero()) return RSeries();
        }
    }
    RSeries r = vals[0];
    for (std::size_t i = 1; i < vals.size(); ++i) r = r * vals[i];
    if (!r.order().at_least(target))
        fail(ErrKind::Internal, "product reached order " + r.order().str() + " < " + target.str());
    return r.truncated(Order(target));
}

// fetch of a pair sequence, optionally through the a->a^s, q->q^t endomorphism
inline Lazy lz_alpha(const BaileyPair& p, long long n, long long s = 1, long long t = 1)
{
    return [p, n, s, t](Frac tgt) {
        if (s == 1 && t == 1) return p.alpha(n, tgt);
        return p.alpha(n, tgt / Frac(t)).substituted(s, t);
    };
}
inline Lazy lz_beta(const BaileyPair& p, long long n, long long s = 1, long long t = 1)
{
    return [p, n, s, t](Frac tgt) {
        if (s == 1 && t == 1) return p.beta(n, tgt);
        return p.beta(n, tgt / Frac(t)).substituted(s, t);
    };
}

namespace detail {

inline RSeries sum_terms(std::vector<RSeries> terms, Frac order)
{
    RSeries acc{Order(order)};
    for (auto& t : terms) acc = acc + t.truncated(Order(order));
    return acc;
}

[[noreturn]] inline void ill_formed(const EngineError& e, const std::string& where)
{
    fail(ErrKind::PreconditionFailed, "ill-formed parameter in " + where + ": " + e.what());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Bailey's lemma at the pair's parameter (A,Q); infinite rhos take the
// closed limiting form, never a numeric limit.

struct RhoParam {
    bool infinite = false;
    RMonomial m = RMonomial::unit();

    static RhoParam inf()
    {
        RhoParam r;
        r.infinite = true;
        return r;
    }
    static RhoParam finite(RMonomial mm)
    {
        RhoParam r;
        r.m = std::move(mm);
        if (r.m.is_zero_mono()) fail(ErrKind::InvalidParams, "zero rho parameter");
        return r;
    }
    std::string str() const { return infinite ? "inf" : m.str(); }
};

inline BaileyPair bailey_lemma(const BaileyPair& p, RhoParam rho1, RhoParam rho2)
{
    if (rho2.infinite && !rho1.infinite) std::swap(rho1, rho2);
    const ParameterMonomial par = p.parameter();
    const RMonomial Q = par.Q();
    const RMonomial AQ = par.AQ();
    const Frac t = par.t;
    auto cache = std::make_shared<SeriesCache>();

    BaileyPair::Gen alpha, beta;
    if (rho1.infinite && rho2.infinite) {
        alpha = [p, par, t](long long n, Frac order) {
            RMonomial w = mono_pow(par.A, Frac(n)) * RMonomial::q_power(Frac(n * n) * t);
            return product_to_order({lz_mono(w), lz_alpha(p, n)}, order);
        };
        beta = [p, par, t](long long n, Frac order) {
            const RMonomial Q = par.Q();
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                RMonomial w = mono_pow(par.A, Frac(k)) * RMonomial::q_power(Frac(k * k) * t);
                terms.push_back(product_to_order(
                    {lz_mono(w), lz_inv_poch(Q, Q, n - k), lz_beta(p, k)}, order));
            }
            return detail::sum_terms(std::move(terms), order);
        };
    } else if (rho2.infinite) {
        fail(ErrKind::Internal, "unreachable");
    } else if (rho1.infinite) {
        const RMonomial rho = rho2.m;
        const RMonomial c = AQ / rho; // aq/rho2
        alpha = [p, rho, c, Q, t](long long n, Frac order) {
            try {
                Rational sg = n % 2 ? -1 : 1;
                RMonomial w = c.pow(n) * RMonomial(sg, Frac(0), Frac(n * (n - 1) / 2) * t);
                return product_to_order(
                    {lz_mono(w), lz_poch(rho, Q, n), lz_inv_poch(c, Q, n), lz_alpha(p, n)}, order);
            } catch (const EngineError& e) {
                if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "bailey_lemma alpha");
                throw;
            }
        };
        beta = [p, rho, c, Q, t, cache](long long n, Frac order) {
            try {
                std::vector<RSeries> terms;
                for (long long k = 0; k <= n; ++k) {
                    Rational sg = k % 2 ? -1 : 1;
                    RMonomial w = c.pow(k) * RMonomial(sg, Frac(0), Frac(k * (k - 1) / 2) * t);
                    terms.push_back(product_to_order({lz_mono(w),
                                                      lz_cached(cache, 1, k, lz_poch(rho, Q, k)),
                                                      lz_cached(cache, 2, n - k, lz_inv_poch(Q, Q, n - k)),
                                                      lz_cached(cache, 3, n, lz_inv_poch(c, Q, n)),
                                                      lz_beta(p, k)},
                                                     order));
                }
                return detail::sum_terms(std::move(terms), order);
            } catch (const EngineError& e) {
                if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "bailey_lemma beta");
                throw;
            }
        };
    } else {
        const RMonomial r1 = rho1.m, r2 = rho2.m;
        const RMonomial c1 = AQ / r1, c2 = AQ / r2, cc = AQ / (r1 * r2);
        alpha = [p, r1, r2, c1, c2, cc, Q](long long n, Frac order) {
            try {
                return product_to_order({lz_mono(cc.pow(n)), lz_poch(r1, Q, n), lz_poch(r2, Q, n),
                                         lz_inv_poch(c1, Q, n), lz_inv_poch(c2, Q, n), lz_alpha(p, n)},
                                        order);
            } catch (const EngineError& e) {
                if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "bailey_lemma alpha");
                throw;
            }
        };
        beta = [p, r1, r2, c1, c2, cc, Q, cache](long long n, Frac order) {
            try {
                std::vector<RSeries> terms;
                for (long long k = 0; k <= n; ++k) {
                    terms.push_back(product_to_order(
                        {lz_mono(cc.pow(k)), lz_cached(cache, 1, k, lz_poch(r1, Q, k)),
                         lz_cached(cache, 2, k, lz_poch(r2, Q, k)), lz_poch(cc, Q, n - k),
                         lz_cached(cache, 3, n - k, lz_inv_poch(Q, Q, n - k)),
                         lz_cached(cache, 4, n, lz_inv_poch(c1, Q, n)),
                         lz_cached(cache, 5, n, lz_inv_poch(c2, Q, n)), lz_beta(p, k)},
                        order));
                }
                return detail::sum_terms(std::move(terms), order);
            } catch (const EngineError& e) {
                if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "bailey_lemma beta");
                throw;
            }
        };
    }
    return BaileyPair(par, std::move(alpha), std::move(beta), p.work_order(),
                      p.provenance() + "(BL:" + rho1.str() + "," + rho2.str() + ")");
}

// ---------------------------------------------------------------------------
// base doubling (q -> q^2 seen from the input): consumes the input pair at
// (A^2,Q^2) via the substitution endomorphism, emits a pair at (A,Q).

inline BaileyPair double_base(const BaileyPair& p, const RMonomial& B)
{
    const ParameterMonomial par = p.parameter();
    const RMonomial Q = par.Q();
    const RMonomial Q2 = Q.pow(2);
    const RMonomial AQ = par.AQ();
    const RMonomial mB = -B;
    const RMonomial mAQB = -(AQ / B);
    const Frac t = par.t;
    auto cache = std::make_shared<SeriesCache>();

    auto alpha = [p, B, Q, mB, mAQB, t](long long r, Frac order) {
        try {
            RMonomial w = B.pow(-r) * RMonomial(Rational(1), Frac(0), Frac(-r * (r - 1) / 2) * t);
            return product_to_order(
                {lz_mono(w), lz_poch(mB, Q, r), lz_inv_poch(mAQB, Q, r), lz_alpha(p, r, 2, 2)}, order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "double_base alpha");
            throw;
        }
    };
    auto beta = [p, B, Q, Q2, AQ, mB, mAQB, t, cache](long long n, Frac order) {
        try {
            const RMonomial mAQ = -AQ;
            const RMonomial B2 = B.pow(2);
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                RMonomial w = B.pow(-k) * RMonomial(Rational(1), Frac(0), Frac(-k * (k - 1) / 2) * t);
                RMonomial arg1 = Q.pow(-k) / B;         // q^{-k}/B
                RMonomial arg2 = B * Q.pow(k + 1);      // B q^{k+1}
                terms.push_back(product_to_order(
                    {lz_mono(w), lz_cached(cache, 1, k, lz_poch(mAQ, Q, 2 * k)),
                     lz_cached(cache, 2, k, lz_poch(B2, Q2, k)), lz_poch(arg1, Q, n - k),
                     lz_poch(arg2, Q, n - k), lz_cached(cache, 3, n, lz_inv_poch(mAQB, Q, n)),
                     lz_cached(cache, 4, n, lz_inv_poch(B, Q, n)),
                     lz_cached(cache, 5, n - k, lz_inv_poch(Q2, Q2, n - k)), lz_beta(p, k, 2, 2)},
                    order));
            }
            return detail::sum_terms(std::move(terms), order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "double_base beta");
            throw;
        }
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(GD:" + B.str() + ")");
}

// B -> infinity limit of double_base
inline BaileyPair double_base_inf(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p](long long r, Frac order) { return lz_alpha(p, r, 2, 2)(order); };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mAQ = -par.AQ();
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            terms.push_back(product_to_order({lz_mono(Q.pow(n - k)),
                                              lz_cached(cache, 1, k, lz_poch(mAQ, Q, 2 * k)),
                                              lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)),
                                              lz_beta(p, k, 2, 2)},
                                             order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D1)");
}

// B -> 0 limit of double_base
inline BaileyPair double_base_zero(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(-r)) * RMonomial::q_power(Frac(-r * r) * par.t);
        return product_to_order({lz_mono(w), lz_alpha(p, r, 2, 2)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mAQ = -par.AQ();
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            Rational sg = (n - k) % 2 ? -1 : 1;
            RMonomial w = RMonomial(sg, Frac(0), Frac(k * k + k - 2 * k * n - n) * par.t) *
                          mono_pow(par.A, Frac(-n));
            terms.push_back(product_to_order({lz_mono(w),
                                              lz_cached(cache, 1, k, lz_poch(mAQ, Q, 2 * k)),
                                              lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)),
                                              lz_beta(p, k, 2, 2)},
                                             order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D2)");
}

// B = sqrt(AQ) instance in closed form (the generic route at B = sqrt(AQ)
// must agree; both are kept as a cross-check).
inline BaileyPair double_base_sqrt(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(-r, 2)) * RMonomial::q_power(Frac(-r * r, 2) * par.t);
        return product_to_order({lz_mono(w), lz_alpha(p, r, 2, 2)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mAQ = -par.AQ();
        const RMonomial sA = mono_pow(par.A, Frac(1, 2));
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            RMonomial w = mono_pow(par.AQ(), Frac(-k, 2)) *
                          RMonomial::q_power(Frac(-k * (k - 1) / 2) * par.t);
            RMonomial arg1 = sA.inverse() * Q.pow(-k) * mono_pow(Q, Frac(-1, 2)); // q^{-1/2-k}/sqrt(A)
            RMonomial arg2 = sA * Q.pow(k + 1) * mono_pow(Q, Frac(1, 2));         // sqrt(A) q^{k+3/2}
            RMonomial dn = par.A * Q.pow(2 * k + 1);                              // A q^{2k+1}
            terms.push_back(product_to_order(
                {lz_mono(w), lz_cached(cache, 1, k, lz_poch(mAQ, Q, 2 * k)), lz_poch(arg1, Q, n - k),
                 lz_poch(arg2, Q, n - k), lz_inv_poch(dn, Q2, n - k),
                 lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)), lz_beta(p, k, 2, 2)},
                order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D3)");
}

// ---------------------------------------------------------------------------
// base quadrupling: input consumed at (A^2,Q^2), output lives at (A^4,Q^4).

inline BaileyPair quadruple_base(const BaileyPair& p, const RMonomial& B)
{
    const ParameterMonomial par = p.parameter();
    const ParameterMonomial out = par.substituted(4, 4);
    const RMonomial Q = par.Q();
    const RMonomial A = par.A;
    auto cache = std::make_shared<SeriesCache>();

    const RMonomial Q2 = Q.pow(2), Q4 = Q.pow(4);
    const RMonomial mBQ = -(B * Q);                    // -BQ
    const RMonomial mQA2B = -(Q * A.pow(2) / B);       // -QA^2/B
    auto alpha = [p, B, A, Q, Q2, mBQ, mQA2B](long long r, Frac order) {
        try {
            RMonomial w = A.pow(2 * r) * B.pow(-r) * RMonomial::q_power(Frac(r * r) * Q.q_exp);
            return product_to_order(
                {lz_mono(w), lz_poch(mBQ, Q2, r), lz_inv_poch(mQA2B, Q2, r), lz_alpha(p, r, 2, 2)},
                order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "quadruple_base alpha");
            throw;
        }
    };
    auto beta = [p, B, A, Q, Q2, Q4, mBQ, mQA2B, cache](long long n, Frac order) {
        try {
            const RMonomial qa2b = Q * A.pow(2) / B;          // QA^2/B
            const RMonomial mq2a2 = -(Q.pow(2) * A.pow(2));   // -Q^2 A^2
            const RMonomial a4q2b2 = A.pow(4) * Q.pow(2) / B.pow(2);
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                RMonomial w = A.pow(2 * k) * B.pow(-k) * RMonomial::q_power(Frac(k * k) * Q.q_exp);
                terms.push_back(product_to_order(
                    {lz_mono(w), lz_poch(qa2b, Q2, 2 * n - k),
                     lz_cached(cache, 1, k, lz_poch(mBQ, Q2, k)),
                     lz_cached(cache, 2, n, lz_inv_poch(mq2a2, Q2, 2 * n)),
                     lz_cached(cache, 3, n, lz_inv_poch(a4q2b2, Q4, n)),
                     lz_cached(cache, 4, n - k, lz_inv_poch(Q4, Q4, n - k)), lz_beta(p, k, 2, 2)},
                    order));
            }
            return detail::sum_terms(std::move(terms), order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "quadruple_base beta");
            throw;
        }
    };
    return BaileyPair(out, alpha, beta, p.work_order(), p.provenance() + "(GQ:" + B.str() + ")");
}

// ---------------------------------------------------------------------------
// base tripling (T1): input consumed unsubstituted, output at (A^3,Q^3).

inline BaileyPair triple_base(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    const ParameterMonomial out = par.substituted(3, 3);
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(r)) * RMonomial::q_power(Frac(r * r) * par.t);
        return product_to_order({lz_mono(w), lz_alpha(p, r)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q3 = Q.pow(3);
        const RMonomial AQ = par.AQ();
        const RMonomial A3Q3 = par.A.pow(3) * Q3;
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            RMonomial w = mono_pow(par.A, Frac(k)) * RMonomial::q_power(Frac(k * k) * par.t);
            terms.push_back(product_to_order(
                {lz_mono(w), lz_poch(AQ, Q, 3 * n - k), lz_cached(cache, 1, n, lz_inv_poch(A3Q3, Q3, 2 * n)),
                 lz_cached(cache, 2, n - k, lz_inv_poch(Q3, Q3, n - k)), lz_beta(p, k)},
                order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(out, alpha, beta, p.work_order(), p.provenance() + "(T1)");
}

// inverse base tripling (T2): input consumed at (A^3,Q^3), output at (A,Q);
// the descending Pochhammer (x;q^{-1})_m is expanded as (x q^{1-m};q)_m.
inline BaileyPair untriple_base(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(-r)) * RMonomial::q_power(Frac(-r * r) * par.t);
        return product_to_order({lz_mono(w), lz_alpha(p, r, 3, 3)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q3 = Q.pow(3);
        const RMonomial AQ = par.AQ();
        const RMonomial A3Q3 = par.A.pow(3) * Q3;
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            Rational sg = k % 2 ? -1 : 1;
            RMonomial w = RMonomial(sg, Frac(0), Frac(3 * (k * (k - 1) / 2) - n * n) * par.t) *
                          mono_pow(par.A, Frac(-n));
            RMonomial desc = par.A * Q.pow(2 * n - 3 * k + 2); // (A q^{2n+1}; q^{-1})_{3k} reversed
            terms.push_back(product_to_order(
                {lz_mono(w), lz_poch(desc, Q, 3 * k), lz_poch(A3Q3, Q3, 2 * (n - k)),
                 lz_cached(cache, 1, n, lz_inv_poch(AQ, Q, 2 * n)),
                 lz_cached(cache, 2, k, lz_inv_poch(Q3, Q3, k)), lz_beta(p, n - k, 3, 3)},
                order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(T2)");
}

// ---------------------------------------------------------------------------
// the second base-doubling family ((-a;q)_{2k} weights, (1+a)/(1+aq^{2r})
// correction); shares the doubling substitution with double_base.

namespace detail {
// (1+A)/(1+AQ^{2r}), with the r=0 cancellation applied symbolically
inline Lazy half_factor(const ParameterMonomial& par, long long r)
{
    if (r == 0) return lz_series(RSeries::one());
    RSeries onepA = RSeries::one() + par.A.series();
    RMonomial dn = par.A * par.Q().pow(2 * r);
    return [onepA, dn](Frac t) { return onepA * one_minus(-dn).inverted(t); };
}
} // namespace detail

inline BaileyPair double_base_alt(const BaileyPair& p, const RMonomial& B)
{
    const ParameterMonomial par = p.parameter();
    const RMonomial Q = par.Q();
    const RMonomial Q2 = Q.pow(2);
    const RMonomial mB = -B;
    const RMonomial mAQB = -(par.AQ() / B);
    const Frac t = par.t;
    auto cache = std::make_shared<SeriesCache>();

    auto alpha = [p, par, B, Q, mB, mAQB, t](long long r, Frac order) {
        try {
            RMonomial w = B.pow(-r) * RMonomial(Rational(1), Frac(0), Frac(r - r * (r - 1) / 2) * t);
            return product_to_order({lz_mono(w), lz_poch(mB, Q, r), lz_inv_poch(mAQB, Q, r),
                                     detail::half_factor(par, r), lz_alpha(p, r, 2, 2)},
                                    order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "double_base_alt alpha");
            throw;
        }
    };
    auto beta = [p, par, B, Q, Q2, mB, mAQB, t, cache](long long n, Frac order) {
        try {
            const RMonomial mA = -par.A;
            const RMonomial B2 = B.pow(2);
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                RMonomial w = B.pow(-k) * RMonomial(Rational(1), Frac(0), Frac(k - k * (k - 1) / 2) * t);
                RMonomial arg1 = Q.pow(-k + 1) / B; // q^{-k+1}/B
                RMonomial arg2 = B * Q.pow(k);      // B q^k
                terms.push_back(product_to_order(
                    {lz_mono(w), lz_cached(cache, 1, k, lz_poch(mA, Q, 2 * k)),
                     lz_cached(cache, 2, k, lz_poch(B2, Q2, k)), lz_poch(arg1, Q, n - k),
                     lz_poch(arg2, Q, n - k), lz_cached(cache, 3, n, lz_inv_poch(mAQB, Q, n)),
                     lz_cached(cache, 4, n, lz_inv_poch(B, Q, n)),
                     lz_cached(cache, 5, n - k, lz_inv_poch(Q2, Q2, n - k)), lz_beta(p, k, 2, 2)},
                    order));
            }
            return detail::sum_terms(std::move(terms), order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "double_base_alt beta");
            throw;
        }
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(GA:" + B.str() + ")");
}

// B -> infinity limit of double_base_alt
inline BaileyPair double_base_alt_inf(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = RMonomial::q_power(Frac(r) * par.t);
        return product_to_order({lz_mono(w), detail::half_factor(par, r), lz_alpha(p, r, 2, 2)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mA = -par.A;
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            terms.push_back(product_to_order({lz_mono(Q.pow(k)),
                                              lz_cached(cache, 1, k, lz_poch(mA, Q, 2 * k)),
                                              lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)),
                                              lz_beta(p, k, 2, 2)},
                                             order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D4)");
}

// B -> 0 limit of double_base_alt, derived by taking the limit of the
// generic weights (validated against small-B probes in the tests)
inline BaileyPair double_base_alt_zero(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(-r)) * RMonomial::q_power(Frac(r - r * r) * par.t);
        return product_to_order({lz_mono(w), detail::half_factor(par, r), lz_alpha(p, r, 2, 2)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mA = -par.A;
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            Rational sg = (n - k) % 2 ? -1 : 1;
            RMonomial w = RMonomial(sg, Frac(0), Frac(k * k + k - 2 * k * n) * par.t) *
                          mono_pow(par.A, Frac(-n));
            terms.push_back(product_to_order({lz_mono(w),
                                              lz_cached(cache, 1, k, lz_poch(mA, Q, 2 * k)),
                                              lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)),
                                              lz_beta(p, k, 2, 2)},
                                             order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D5)");
}

// B = sqrt(AQ) instance of double_base_alt in closed form
inline BaileyPair double_base_alt_sqrt(const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    auto cache = std::make_shared<SeriesCache>();
    auto alpha = [p, par](long long r, Frac order) {
        RMonomial w = mono_pow(par.A, Frac(-r, 2)) *
                      RMonomial::q_power((Frac(r) - Frac(r * r, 2)) * par.t);
        return product_to_order({lz_mono(w), detail::half_factor(par, r), lz_alpha(p, r, 2, 2)}, order);
    };
    auto beta = [p, par, cache](long long n, Frac order) {
        const RMonomial Q = par.Q();
        const RMonomial Q2 = Q.pow(2);
        const RMonomial mA = -par.A;
        const RMonomial sA = mono_pow(par.A, Frac(1, 2));
        std::vector<RSeries> terms;
        for (long long k = 0; k <= n; ++k) {
            RMonomial w = mono_pow(par.AQ(), Frac(-k, 2)) *
                          RMonomial::q_power((Frac(k) - Frac(k * (k - 1) / 2)) * par.t);
            RMonomial arg1 = sA.inverse() * Q.pow(-k) * mono_pow(Q, Frac(1, 2)); // q^{1/2-k}/sqrt(A)
            RMonomial arg2 = sA * Q.pow(k) * mono_pow(Q, Frac(1, 2));            // sqrt(A) q^{k+1/2}
            RMonomial dn = par.A * Q.pow(2 * k + 1);
            terms.push_back(product_to_order(
                {lz_mono(w), lz_cached(cache, 1, k, lz_poch(mA, Q, 2 * k)), lz_poch(arg1, Q, n - k),
                 lz_poch(arg2, Q, n - k), lz_inv_poch(dn, Q2, n - k),
                 lz_cached(cache, 2, n - k, lz_inv_poch(Q2, Q2, n - k)), lz_beta(p, k, 2, 2)},
                order));
        }
        return detail::sum_terms(std::move(terms), order);
    };
    return BaileyPair(par, alpha, beta, p.work_order(), p.provenance() + "(D6)");
}

// ---------------------------------------------------------------------------
// parameter lowering (A -> A/Q): requires the input parameter to factor as
// A'Q; the n=0 and n=1 alpha cases carry the symbolic (1-A) cancellation.

inline BaileyPair lower_parameter(const BaileyPair& p, RhoParam rho1, RhoParam rho2)
{
    if (rho2.infinite && !rho1.infinite) std::swap(rho1, rho2);
    const ParameterMonomial par = p.parameter();
    const RMonomial Q = par.Q();
    const RMonomial A = par.A;              // plays "aq" in the source formulas
    const RMonomial Ap = A / Q;             // the lowered parameter A' = A/Q
    const ParameterMonomial out(Ap, par.t);
    const Frac t = par.t;
    auto cache = std::make_shared<SeriesCache>();

    // weight w(n) excluding the (1-A)*bracket part
    auto weight = [=](long long n) -> std::vector<Lazy> {
        if (rho1.infinite && rho2.infinite) {
            return {lz_mono(mono_pow(Ap, Frac(n)) * RMonomial::q_power(Frac(n * n) * t))};
        }
        if (rho1.infinite) {
            const RMonomial rho = rho2.m;
            const RMonomial c = A / rho;
            Rational sg = n % 2 ? -1 : 1;
            RMonomial w = c.pow(n) * RMonomial(sg, Frac(0), Frac(n * (n - 1) / 2) * t);
            return {lz_mono(w), lz_poch(rho, Q, n), lz_inv_poch(c, Q, n)};
        }
        const RMonomial r1 = rho1.m, r2 = rho2.m;
        RMonomial cc = A / (r1 * r2);
        return {lz_mono(cc.pow(n)), lz_poch(r1, Q, n), lz_poch(r2, Q, n),
                lz_inv_poch(A / r1, Q, n), lz_inv_poch(A / r2, Q, n)};
    };

    auto alpha = [p, par, A, Ap, Q, t, weight](long long n, Frac order) {
        try {
            if (n == 0) return p.alpha(0, order);
            RSeries oneMinusA = one_minus(A);
            // first piece: (1-A) w(n) alpha_n / (1 - A Q^{2n})
            std::vector<Lazy> pieces = weight(n);
            pieces.push_back(lz_series(oneMinusA));
            pieces.push_back(lz_alpha(p, n));
            pieces.push_back([A, Q, n](Frac tt) { return one_minus(A * Q.pow(2 * n)).inverted(tt); });
            RSeries first = product_to_order(pieces, order);
            // second piece: w(n) A' Q^{2n-1} alpha_{n-1} (1-A)/(1 - A Q^{2n-2});
            // at n=1 the (1-A) ratio cancels exactly.
            std::vector<Lazy> pieces2 = weight(n);
            pieces2.push_back(lz_mono(Ap * Q.pow(2 * n - 1)));
            pieces2.push_back(lz_alpha(p, n - 1));
            if (n > 1) {
                pieces2.push_back(lz_series(one_minus(A)));
                pieces2.push_back(
                    [A, Q, n](Frac tt) { return one_minus(A * Q.pow(2 * n - 2)).inverted(tt); });
            }
            RSeries second = product_to_order(pieces2, order);
            return (first - second).truncated(Order(order));
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "lower_parameter alpha");
            throw;
        }
    };

    auto beta = [p, par, A, Ap, Q, t, rho1, rho2, cache](long long n, Frac order) {
        try {
            std::vector<RSeries> terms;
            for (long long k = 0; k <= n; ++k) {
                std::vector<Lazy> pieces;
                if (rho1.infinite && rho2.infinite) {
                    pieces.push_back(lz_mono(mono_pow(Ap, Frac(k)) * RMonomial::q_power(Frac(k * k) * t)));
                } else if (rho1.infinite) {
                    const RMonomial rho = rho2.m;
                    const RMonomial c = A / rho;
                    Rational sg = k % 2 ? -1 : 1;
                    pieces.push_back(
                        lz_mono(c.pow(k) * RMonomial(sg, Frac(0), Frac(k * (k - 1) / 2) * t)));
                    pieces.push_back(lz_cached(cache, 1, k, lz_poch(rho, Q, k)));
                    pieces.push_back(lz_cached(cache, 2, n, lz_inv_poch(c, Q, n)));
                } else {
                    const RMonomial r1 = rho1.m, r2 = rho2.m;
                    const RMonomial cc = A / (r1 * r2);
                    pieces.push_back(lz_mono(cc.pow(k)));
                    pieces.push_back(lz_cached(cache, 1, k, lz_poch(r1, Q, k)));
                    pieces.push_back(lz_cached(cache, 2, k, lz_poch(r2, Q, k)));
                    pieces.push_back(lz_poch(cc, Q, n - k));
                    pieces.push_back(lz_cached(cache, 3, n, lz_inv_poch(A / r1, Q, n)));
                    pieces.push_back(lz_cached(cache, 4, n, lz_inv_poch(A / r2, Q, n)));
                }
                pieces.push_back(lz_cached(cache, 5, n - k, lz_inv_poch(Q, Q, n - k)));
                pieces.push_back(lz_beta(p, k));
                terms.push_back(product_to_order(pieces, order));
            }
            return detail::sum_terms(std::move(terms), order);
        } catch (const EngineError& e) {
            if (e.kind() == ErrKind::NonUnitLeading) detail::ill_formed(e, "lower_parameter beta");
            throw;
        }
    };

    return BaileyPair(out, alpha, beta, p.work_order(),
                      p.provenance() + "(LP:" + rho1.str() + "," + rho2.str() + ")");
}

// ---------------------------------------------------------------------------
// linear insertion at parameter 1 (theta-form alpha): forward multiplies
// beta_n by Q^n and moves the linear exponent from lambda-1 to lambda;
// reverse is the exact inverse. The theta precondition is verified
// numerically before anything is built.

inline RSeries theta_alpha(const ParameterMonomial& par, Frac quad, Frac lin, long long n)
{
    if (n == 0) return RSeries::one();
    Rational sg = n % 2 ? -1 : 1;
    Frac base = Frac(n * n) * quad * par.t;
    Frac off = Frac(n) * lin * par.t;
    return RSeries::monomial(sg, Frac(0), base + off) + RSeries::monomial(sg, Frac(0), base - off);
}

inline BaileyPair linear_insertion(const BaileyPair& p, Frac A_param, bool forward,
                                   long long check_depth = 8)
{
    const ParameterMonomial par = p.parameter();
    if (!(par.A.a_exp == Frac(0)) || !(par.A.q_exp == Frac(0)) || !is_one(par.A.coeff))
        fail(ErrKind::PreconditionFailed, "linear insertion requires parameter 1, have " + par.str());
    const Frac pre_lin = forward ? A_param - Frac(1) : A_param;
    const Frac post_lin = forward ? A_param : A_param - Frac(1);
    const Frac check_order = p.work_order();
    for (long long n = 0; n <= check_depth; ++n) {
        RSeries expect = theta_alpha(par, A_param, pre_lin, n).truncated(Order(check_order));
        RSeries got = p.alpha(n, check_order);
        if (first_discrepancy(got, expect, check_order))
            fail(ErrKind::PreconditionFailed,
                 "alpha_" + std::to_string(n) + " does not match the theta form q^{" +
                     A_param.str() + " n^2 +- " + pre_lin.str() + " n}");
    }
    auto alpha = [par, A_param, post_lin](long long n, Frac order) {
        return theta_alpha(par, A_param, post_lin, n).truncated(Order(order));
    };
    Frac shift = forward ? par.t : -par.t;
    auto beta = [p, shift](long long n, Frac order) {
        return p.beta(n, order - Frac(n) * shift).scaled(Rational(1), Frac(0), Frac(n) * shift);
    };
    return BaileyPair(par, alpha, beta, p.work_order(),
                      p.provenance() + "(P41:" + A_param.str() + (forward ? ",fwd)" : ",rev)"));
}

// ---------------------------------------------------------------------------
// named steps

enum class StepKind {
    BL, GD, GQ, GA, LP, // parameterized kinds
    S1, S2, S3, S4, S5, S6,
    D1, D2, D3, D4, D5, D6,
    T1, T2,
    L1, L2, L3,
    P41,
};

struct TransformStep {
    StepKind kind{};
    RhoParam rho1, rho2; // BL/LP rhos; B sits in rho1 for GD/GQ/GA
    Frac p41_A{};
    bool p41_forward = true;

    static TransformStep named(StepKind k) { return TransformStep{k, {}, {}, Frac(0), true}; }
    static TransformStep bl(RhoParam a, RhoParam b) { return TransformStep{StepKind::BL, a, b, Frac(0), true}; }
    static TransformStep lp(RhoParam a, RhoParam b) { return TransformStep{StepKind::LP, a, b, Frac(0), true}; }
    static TransformStep generic_b(StepKind k, RMonomial B)
    {
        return TransformStep{k, RhoParam::finite(std::move(B)), {}, Frac(0), true};
    }
    static TransformStep p41(Frac A, bool fwd) { return TransformStep{StepKind::P41, {}, {}, A, fwd}; }

    std::string print() const;
};

inline BaileyPair apply_step(const TransformStep& s, const BaileyPair& p)
{
    const ParameterMonomial par = p.parameter();
    const RMonomial Q = par.Q();
    auto sqrtAQ = [&] { return mono_pow(par.AQ(), Frac(1, 2)); };
    switch (s.kind) {
        case StepKind::BL: return bailey_lemma(p, s.rho1, s.rho2);
        case StepKind::S1: return bailey_lemma(p, RhoParam::inf(), RhoParam::inf());
        case StepKind::S2: return bailey_lemma(p, RhoParam::inf(), RhoParam::finite(-sqrtAQ()));
        case StepKind::S3:
            return bailey_lemma(p, RhoParam::inf(), RhoParam::finite(-mono_pow(Q, Frac(1, 2))));
        case StepKind::S4:
            return bailey_lemma(p, RhoParam::inf(), RhoParam::finite(-(par.A * mono_pow(Q, Frac(1, 2)))));
        case StepKind::S5:
            return bailey_lemma(p, RhoParam::inf(), RhoParam::finite(-(mono_pow(par.A, Frac(1, 2)) * Q)));
        case StepKind::S6:
            return bailey_lemma(p, RhoParam::inf(), RhoParam::finite(-mono_pow(par.A, Frac(1, 2))));
        case StepKind::GD: return double_base(p, s.rho1.m);
        case StepKind::D1: return double_base_inf(p);
        case StepKind::D2: return double_base_zero(p);
        case StepKind::D3: return double_base_sqrt(p);
        case StepKind::GA: return double_base_alt(p, s.rho1.m);
        case StepKind::D4: return double_base_alt_inf(p);
        case StepKind::D5: return double_base_alt_zero(p);
        case StepKind::D6: return double_base_alt_sqrt(p);
        case StepKind::GQ: return quadruple_base(p, s.rho1.m);
        case StepKind::T1: return triple_base(p);
        case StepKind::T2: return untriple_base(p);
        case StepKind::LP: return lower_parameter(p, s.rho1, s.rho2);
        case StepKind::L1: return lower_parameter(p, RhoParam::inf(), RhoParam::inf());
        case StepKind::L2:
            return lower_parameter(p, RhoParam::inf(), RhoParam::finite(-mono_pow(Q, Frac(1, 2))));
        case StepKind::L3:
            return lower_parameter(
                p, RhoParam::inf(),
                RhoParam::finite(-(mono_pow(par.A / Q, Frac(1, 2)) * Q)));
        case StepKind::P41: return linear_insertion(p, s.p41_A, s.p41_forward);
    }
    fail(ErrKind::Internal, "unhandled step kind");
}

} // namespace bailey
