#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "transforms.hpp"

namespace bailey {

inline const char* step_label(StepKind k)
{
    switch (k) {
        case StepKind::BL: return "BL";
        case StepKind::GD: return "GD";
        case StepKind::GQ: return "GQ";
        case StepKind::GA: return "GA";
        case StepKind::LP: return "LP";
        case StepKind::S1: return "S1";
        case StepKind::S2: return "S2";
        case StepKind::S3: return "S3";
        case StepKind::S4: return "S4";
        case StepKind::S5: return "S5";
        case StepKind::S6: return "S6";
        case StepKind::D1: return "D1";
        case StepKind::D2: return "D2";
        case StepKind::D3: return "D3";
        case StepKind::D4: return "D4";
        case StepKind::D5: return "D5";
        case StepKind::D6: return "D6";
        case StepKind::T1: return "T1";
        case StepKind::T2: return "T2";
        case StepKind::L1: return "L1";
        case StepKind::L2: return "L2";
        case StepKind::L3: return "L3";
        case StepKind::P41: return "P41";
    }
    return "?";
}

inline std::string TransformStep::print() const
{
    std::string s = "(";
    s += step_label(kind);
    if (kind == StepKind::BL || kind == StepKind::LP)
        s += ":" + rho1.str() + "," + rho2.str();
    else if (kind == StepKind::GD || kind == StepKind::GA || kind == StepKind::GQ)
        s += ":" + rho1.m.str();
    else if (kind == StepKind::P41)
        s += ":" + p41_A.str() + (p41_forward ? ",fwd" : ",rev");
    s += ")";
    return s;
}

// Ordered list of steps applied left-to-right (leftmost first).
struct ChainWord {
    std::vector<TransformStep> steps;

    std::string print() const
    {
        std::string s;
        for (const auto& st : steps) s += st.print();
        return s;
    }
};

namespace dsl {

struct Cursor {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws()
    {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool done()
    {
        skip_ws();
        return i >= s.size();
    }
    char peek()
    {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    char take()
    {
        skip_ws();
        if (i >= s.size()) fail(ErrKind::Parse, "unexpected end of chain word");
        return s[i++];
    }
    void expect(char c)
    {
        char g = take();
        if (g != c)
            fail(ErrKind::Parse, std::string("expected '") + c + "' got '" + g + "' at position " +
                                     std::to_string(i));
    }
};

inline long long parse_int(Cursor& c)
{
    c.skip_ws();
    std::size_t start = c.i;
    if (c.i < c.s.size() && (c.s[c.i] == '-' || c.s[c.i] == '+')) ++c.i;
    while (c.i < c.s.size() && std::isdigit((unsigned char)c.s[c.i])) ++c.i;
    if (c.i == start || (c.i == start + 1 && !std::isdigit((unsigned char)c.s[start])))
        fail(ErrKind::Parse, "expected integer at position " + std::to_string(start));
    return std::stoll(std::string(c.s.substr(start, c.i - start)));
}

inline Frac parse_frac(Cursor& c)
{
    long long num = parse_int(c);
    if (c.peek() == '/') {
        c.take();
        long long den = parse_int(c);
        return Frac(num, den);
    }
    return Frac(num);
}

// monomial token: [coefficient] ['*'] ['a' ['^' frac]] ['*'] ['q' ['^' frac]]
inline RMonomial parse_monomial(Cursor& c)
{
    Rational coeff(1);
    Frac ae(0), qe(0);
    bool saw = false;
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '-') { c.take(); neg = true; }
    if (std::isdigit((unsigned char)c.peek())) {
        long long num = parse_int(c);
        long long den = 1;
        if (c.peek() == '/') { c.take(); den = parse_int(c); }
        coeff = Rational(rat_of(num) / rat_of(den));
        saw = true;
    }
    auto maybe_var = [&](char v, Frac& e) {
        if (c.peek() == '*') {
            std::size_t save = c.i;
            c.take();
            if (c.peek() != 'a' && c.peek() != 'q') { c.i = save; return false; }
        }
        if (c.peek() == v) {
            c.take();
            if (c.peek() == '^') {
                c.take();
                e = parse_frac(c);
            } else {
                e = Frac(1);
            }
            saw = true;
            return true;
        }
        return false;
    };
    maybe_var('a', ae);
    maybe_var('q', qe);
    if (!saw) fail(ErrKind::Parse, "expected monomial at position " + std::to_string(c.i));
    if (neg) coeff = -coeff;
    return RMonomial(coeff, ae, qe);
}

inline RhoParam parse_rho(Cursor& c)
{
    c.skip_ws();
    if (c.s.substr(c.i, 3) == "inf") {
        c.i += 3;
        return RhoParam::inf();
    }
    return RhoParam::finite(parse_monomial(c));
}

} // namespace dsl

inline ChainWord parse_chain(std::string_view text, long long lattice_den = 2)
{
    dsl::Cursor c{text};
    ChainWord w;
    while (!c.done()) {
        c.expect('(');
        c.skip_ws();
        std::size_t start = c.i;
        while (c.i < c.s.size() && (std::isalnum((unsigned char)c.s[c.i]))) ++c.i;
        std::string label(c.s.substr(start, c.i - start));
        TransformStep st;
        static const std::array<StepKind, 23> kinds = {
            StepKind::BL, StepKind::GD, StepKind::GQ, StepKind::GA, StepKind::LP,
            StepKind::S1, StepKind::S2, StepKind::S3, StepKind::S4, StepKind::S5, StepKind::S6,
            StepKind::D1, StepKind::D2, StepKind::D3, StepKind::D4, StepKind::D5, StepKind::D6,
            StepKind::T1, StepKind::T2, StepKind::L1, StepKind::L2, StepKind::L3, StepKind::P41};
        bool found = false;
        for (StepKind k : kinds)
            if (label == step_label(k)) {
                st.kind = k;
                found = true;
                break;
            }
        if (!found) fail(ErrKind::Parse, "unknown step label '" + label + "'");
        if (st.kind == StepKind::BL || st.kind == StepKind::LP) {
            c.expect(':');
            st.rho1 = dsl::parse_rho(c);
            c.expect(',');
            st.rho2 = dsl::parse_rho(c);
        } else if (st.kind == StepKind::GD || st.kind == StepKind::GA || st.kind == StepKind::GQ) {
            c.expect(':');
            st.rho1 = RhoParam::finite(dsl::parse_monomial(c));
        } else if (st.kind == StepKind::P41) {
            c.expect(':');
            st.p41_A = dsl::parse_frac(c);
            c.expect(',');
            c.skip_ws();
            if (c.s.substr(c.i, 3) == "fwd") {
                st.p41_forward = true;
            } else if (c.s.substr(c.i, 3) == "rev") {
                st.p41_forward = false;
            } else {
                fail(ErrKind::Parse, "expected fwd|rev in P41 step");
            }
            c.i += 3;
        }
        c.expect(')');
        for (const RhoParam* r : {&st.rho1, &st.rho2}) {
            if (!r->infinite) {
                if (!r->m.q_exp.on_lattice(lattice_den) || !r->m.a_exp.on_lattice(2))
                    fail(ErrKind::LatticeViolation,
                         "monomial " + r->m.str() + " off the 1/" + std::to_string(lattice_den) +
                             " lattice");
            }
        }
        w.steps.push_back(st);
    }
    return w;
}

// Apply a chain word left-to-right; step errors are annotated with their
// position in the word.
inline BaileyPair apply_chain(const ChainWord& word, const BaileyPair& seed)
{
    BaileyPair cur = seed;
    for (std::size_t i = 0; i < word.steps.size(); ++i) {
        try {
            cur = apply_step(word.steps[i], cur);
        } catch (const EngineError& e) {
            fail(e.kind(), "step " + std::to_string(i + 1) + " " + word.steps[i].print() + ": " +
                               e.what());
        }
    }
    return cur;
}

struct ChainComparison {
    bool ok = true;
    bool alpha_side = true;
    long long n = -1;
    std::optional<Discrepancy> disc;

    std::string str() const
    {
        if (ok) return "equal";
        std::string s = std::string(alpha_side ? "alpha" : "beta") + "_" + std::to_string(n) +
                        " differs";
        if (disc)
            s += " at q^" + disc->q_exp.str() + " a^" + disc->a_exp.str() + ": " + disc->lhs +
                 " vs " + disc->rhs;
        return s;
    }
};

// Compare the pairs produced by two chain words on the same seed.
inline ChainComparison relation_check(const ChainWord& lhs, const ChainWord& rhs,
                                      const BaileyPair& seed, long long depth, Frac order)
{
    BaileyPair L = apply_chain(lhs, seed);
    BaileyPair R = apply_chain(rhs, seed);
    for (long long n = 0; n <= depth; ++n) {
        if (auto d = first_discrepancy(L.alpha(n, order), R.alpha(n, order), order))
            return ChainComparison{false, true, n, d};
        if (auto d = first_discrepancy(L.beta(n, order), R.beta(n, order), order))
            return ChainComparison{false, false, n, d};
    }
    return ChainComparison{};
}

// The documented composition relations, with the seed each is tested on.
// S5/L3 rows run at a -> q: their beta denominators are not unit-leading at
// fully symbolic a (see series-core inversion contract). The D-family rows
// are printed in the source in function-composition order; the leftmost-first
// words below are the orientation that actually holds (the printed one fails
// numerically).
struct DocumentedRelation {
    std::string name;
    std::string lhs, rhs;
    bool seed_aq;       // seed ubp at (aq,q) instead of (a,q)
    bool specialize_aq; // run at a -> q
};

inline const std::vector<DocumentedRelation>& documented_relations()
{
    static const std::vector<DocumentedRelation> rels = {
        {"(S2)(S2)=(S1)", "(S2)(S2)", "(S1)", false, false},
        {"(S3)(S4)=(S1)", "(S3)(S4)", "(S1)", false, false},
        {"(S4)(S3)=(S1)", "(S4)(S3)", "(S1)", false, false},
        {"(S5)(S6)=(S1)", "(S5)(S6)", "(S1)", false, true},
        {"(S6)(S5)=(S1)", "(S6)(S5)", "(S1)", false, true},
        {"(L1)=(L2)(S4)", "(L1)", "(L2)(S4)", true, false},
        {"(L1)=(L3)(S6)", "(L1)", "(L3)(S6)", true, true},
        {"(D1)=(S2)(D2)  [printed (D2)(S2)]", "(D1)", "(S2)(D2)", false, false},
        {"(D3)=(D2)(S2)  [printed (S2)(D2)]", "(D3)", "(D2)(S2)", false, false},
        {"(S2)(D2)=(D2)(S2)(S2)  [printed reversed]", "(S2)(D2)", "(D2)(S2)(S2)", false, false},
    };
    return rels;
}

} // namespace bailey
