#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qfunctions.hpp"

namespace bailey {

// Pair parameter: A = coeff * a^{a_exp} * q^{q_exp} together with the base
// Q = q^t. Seeds in practice use A in {a, aq, a^2, ...} and integer t, but
// nothing here assumes that.
struct ParameterMonomial {
    RMonomial A = RMonomial::a_power(Frac(1));
    Frac t{1};

    ParameterMonomial() = default;
    ParameterMonomial(RMonomial a, Frac base_exp) : A(std::move(a)), t(base_exp)
    {
        if (!(t > Frac(0))) fail(ErrKind::InvalidParams, "pair base must have positive exponent");
    }

    RMonomial Q() const { return RMonomial::q_power(t); }
    RMonomial AQ() const { return A * Q(); }

    // endomorphism a->a^s, q->q^t applied to the parameter
    ParameterMonomial substituted(long long s, long long tt) const
    {
        RMonomial na(A.coeff, Frac(s) * A.a_exp, Frac(tt) * A.q_exp);
        return ParameterMonomial(na, Frac(tt) * t);
    }

    std::string str() const { return "(" + A.str() + "; q^" + t.str() + ")"; }

    friend bool operator==(const ParameterMonomial& x, const ParameterMonomial& y)
    {
        return x.t == y.t && x.A.a_exp == y.A.a_exp && x.A.q_exp == y.A.q_exp &&
               x.A.coeff == y.A.coeff;
    }
};

inline ParameterMonomial param_a_q() { return ParameterMonomial(); }
inline ParameterMonomial param_aq_q()
{
    return ParameterMonomial(RMonomial(Rational(1), Frac(1), Frac(1)), Frac(1));
}

// A Bailey pair: two lazily memoized sequences of truncated series plus the
// parameter they live at. Copies share the underlying memo; a pair is meant
// to be driven from a single thread of control.
class BaileyPair {
public:
    using Gen = std::function<RSeries(long long, Frac)>;

    BaileyPair() = default;
    BaileyPair(ParameterMonomial param, Gen alpha, Gen beta, Frac work_order,
               std::string provenance = "")
        : impl_(std::make_shared<Impl>())
    {
        impl_->param = std::move(param);
        impl_->a.fn = std::move(alpha);
        impl_->b.fn = std::move(beta);
        impl_->work = work_order;
        impl_->prov = std::move(provenance);
    }

    bool valid() const { return impl_ != nullptr; }
    const ParameterMonomial& parameter() const { return impl_->param; }
    Frac work_order() const { return impl_->work; }
    const std::string& provenance() const { return impl_->prov; }

    RSeries alpha(long long n, Frac order) const { return impl_->a.get(n, order, "alpha"); }
    RSeries beta(long long n, Frac order) const { return impl_->b.get(n, order, "beta"); }
    RSeries alpha(long long n) const { return alpha(n, impl_->work); }
    RSeries beta(long long n) const { return beta(n, impl_->work); }

    void set_provenance(std::string p) { impl_->prov = std::move(p); }

private:
    struct MemoSeq {
        Gen fn;
        std::map<long long, RSeries> cache;

        RSeries get(long long n, Frac order, const char* what)
        {
            if (n < 0) fail(ErrKind::InvalidParams, "negative sequence index");
            auto it = cache.find(n);
            if (it == cache.end() || !it->second.order().at_least(order)) {
                RSeries s = fn(n, order);
                if (!s.order().at_least(order))
                    fail(ErrKind::Internal, std::string(what) + " generator returned order " +
                                                s.order().str() + " below requested " + order.str());
                cache[n] = std::move(s);
                it = cache.find(n);
            }
            const RSeries& s = it->second;
            return s.is_exact() ? s : s.truncated(Order(order));
        }
    };
    struct Impl {
        ParameterMonomial param;
        MemoSeq a, b;
        Frac work{24};
        std::string prov;
    };
    std::shared_ptr<Impl> impl_;
};

// The unit seed: beta_n = [n=0], alpha written with the (1-A) cancellation
// already applied so every division stays unit-leading.
inline BaileyPair unit_pair(const ParameterMonomial& param, Frac work_order)
{
    auto alpha = [param](long long n, Frac order) -> RSeries {
        if (n == 0) return RSeries::one();
        const RMonomial Q = param.Q();
        const RMonomial AQ = param.AQ();
        Order cut{order};
        RSeries r = pochhammer(AQ, Q, n - 1, cut);
        r = r * one_minus(param.A * Q.pow(2 * n));
        Rational sign = (n % 2 == 0) ? 1 : -1;
        r = r.scaled(sign, Frac(0), Frac(n * (n - 1) / 2) * param.t);
        r = r * inv_pochhammer(Q, Q, n, cut);
        return r.truncated(cut);
    };
    auto beta = [](long long n, Frac) -> RSeries {
        return n == 0 ? RSeries::one() : RSeries();
    };
    return BaileyPair(param, alpha, beta, work_order, "ubp" + param.str());
}

// Table-backed pair; access past the table is an error.
inline BaileyPair pair_from_tables(std::vector<RSeries> alpha_table, std::vector<RSeries> beta_table,
                                   const ParameterMonomial& param, Frac work_order)
{
    auto mk = [](std::vector<RSeries> tab, const char* what) {
        return [tab = std::move(tab), what](long long n, Frac order) -> RSeries {
            if (n >= (long long)tab.size())
                fail(ErrKind::IndexBeyondTable,
                     std::string(what) + " table has no index " + std::to_string(n));
            const RSeries& s = tab[(std::size_t)n];
            if (!s.order().at_least(order))
                fail(ErrKind::InsufficientOrder,
                     std::string(what) + " table entry " + std::to_string(n) + " certified only to " +
                         s.order().str());
            return s;
        };
    };
    return BaileyPair(param, mk(std::move(alpha_table), "alpha"), mk(std::move(beta_table), "beta"),
                      work_order, "tables");
}

namespace detail {

// Inverse denominator pieces of the defining relation at a parameter.
inline void check_relation_parameter(const ParameterMonomial& p)
{
    if (!(p.AQ().q_exp > Frac(0)))
        fail(ErrKind::InvalidParams,
             "defining relation degenerate: AQ = " + p.AQ().str() + " has no positive q-power");
}

} // namespace detail

// beta_n computed from alpha by the triangular defining relation.
inline RSeries relation_rhs(const BaileyPair& p, long long n, Frac order)
{
    detail::check_relation_parameter(p.parameter());
    const RMonomial Q = p.parameter().Q();
    const RMonomial AQ = p.parameter().AQ();
    RSeries acc{Order(order)};
    for (long long r = 0; r <= n; ++r) {
        RSeries a = p.alpha(r, order);
        if (a.no_terms() && !a.is_exact()) continue;
        if (a.is_exact_zero()) continue;
        Frac v = a.val();
        Frac need = order - frac_min(v, Frac(0));
        RSeries term = a * inv_pochhammer(Q, Q, n - r, Order(need)) *
                       inv_pochhammer(AQ, Q, n + r, Order(need));
        acc = acc + term.truncated(Order(order));
    }
    return acc;
}

struct RelationVerdict {
    bool ok = true;
    long long first_n = -1;
    std::optional<Discrepancy> discrepancy;

    std::string str() const
    {
        if (ok) return "ok";
        std::string s = "mismatch at n=" + std::to_string(first_n);
        if (discrepancy)
            s += " q^" + discrepancy->q_exp.str() + " a^" + discrepancy->a_exp.str() + ": " +
                 discrepancy->lhs + " vs " + discrepancy->rhs;
        return s;
    }
};

// Executable form of the defining relation: compare beta_n with the
// triangular sum over alpha for every n <= max_n.
inline RelationVerdict defining_relation_check(const BaileyPair& p, long long max_n, Frac order)
{
    for (long long n = 0; n <= max_n; ++n) {
        RSeries lhs = p.beta(n, order);
        RSeries rhs = relation_rhs(p, n, order);
        if (auto d = first_discrepancy(lhs, rhs, order))
            return RelationVerdict{false, n, d};
    }
    return RelationVerdict{};
}

// Pair with alpha given by tables and beta defined by the relation.
inline BaileyPair pair_from_alpha_table(std::vector<RSeries> alpha_table,
                                        const ParameterMonomial& param, Frac work_order)
{
    auto alpha = [tab = std::move(alpha_table)](long long n, Frac order) -> RSeries {
        if (n >= (long long)tab.size()) return RSeries(); // zero beyond support
        const RSeries& s = tab[(std::size_t)n];
        if (!s.order().at_least(order))
            fail(ErrKind::InsufficientOrder, "alpha table entry certified only to " + s.order().str());
        return s;
    };
    BaileyPair tmp(param, alpha, [](long long, Frac) { return RSeries(); }, work_order);
    auto beta = [tmp](long long n, Frac order) -> RSeries { return relation_rhs(tmp, n, order); };
    return BaileyPair(param, alpha, beta, work_order, "alpha-table");
}

// Specialize the symbol a to c*q^f in both sequences and in the parameter.
inline BaileyPair specialize_a(const BaileyPair& p, const Rational& c, Frac f)
{
    if (!p.parameter().A.a_exp.is_integer())
        fail(ErrKind::DegenerateSpecialization, "fractional a-exponent in parameter");
    ParameterMonomial np(RMonomial(p.parameter().A.coeff * rat_pow(c, p.parameter().A.a_exp.num),
                                   Frac(0), p.parameter().A.q_exp + f * p.parameter().A.a_exp),
                         p.parameter().t);
    auto wrap = [c, f](auto fetch) {
        return [c, f, fetch](long long n, Frac order) -> RSeries {
            Frac ask = order;
            for (int pass = 0; pass < 4; ++pass) {
                RSeries s = fetch(n, ask).specialized_a(c, f);
                if (s.order().at_least(order)) return s;
                ask = ask + (order - s.order().v);
            }
            fail(ErrKind::Internal, "specialization failed to reach requested order");
        };
    };
    auto a = wrap([p](long long n, Frac o) { return p.alpha(n, o); });
    auto b = wrap([p](long long n, Frac o) { return p.beta(n, o); });
    return BaileyPair(np, a, b, p.work_order(), p.provenance() + "|a->" + to_string(c) + "q^" + f.str());
}

} // namespace bailey
