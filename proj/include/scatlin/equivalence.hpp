#pragma once

// GL(2, q^{2t}) and ΓL(2, q^{2t}) equivalence of U_f and U_g, and the necessary
// conditions for two members of the psi family to be GL-equivalent.

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "mrdcodes.hpp"
#include "parallel.hpp"
#include "psifamily.hpp"

namespace scatlin {

struct EquivOptions {
    /// Largest field order the beta sweep may visit.
    std::uint64_t budget = 531441;  // 3^12
    unsigned workers = 1;
};

/// An invertible M with g∘(alpha X + beta f) = gamma X + delta f, i.e. M U_f = U_g.
/// Steps may differ; both maps are rewritten in the q-slot convention first.
/// The witness with the smallest beta index (then the first in enumeration
/// order) is returned, independent of the worker count.
inline std::optional<Mat2> gl_equivalent(const LinPoly& f, const LinPoly& g, const EquivOptions& opt = {}) {
    if (f.field() != g.field())
        throw Error("equivalence test across different field contexts");
    const Field& F = f.F();
    if (F.order() > opt.budget)
        throw Error("field order " + std::to_string(F.order()) + " exceeds the equivalence budget " +
                    std::to_string(opt.budget));
    const LinPoly f1 = f.to_step(1), g1 = g.to_step(1);
    const ResidualMatcher rm(f1, g1);
    const unsigned workers = std::max(1u, opt.workers);
    std::vector<std::optional<Mat2>> found(workers);
    std::atomic<std::uint64_t> best{UINT64_MAX};
    parallel_for(F.order(), workers, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        for (std::uint64_t b = lo; b < hi && b < best.load(); ++b) {
            rm.for_beta(Elem{static_cast<std::uint32_t>(b)}, [&](const Mat2& M) {
                if (mat_det(F, M).index == 0)
                    return true;
                found[w] = M;
                return false;
            });
            if (found[w]) {
                std::uint64_t cur = best.load();
                while (b < cur && !best.compare_exchange_weak(cur, b)) {
                }
                break;
            }
        }
    });
    for (auto& m : found)
        if (m) {
            if (!maps_subspace(f1, g1, *m))
                throw Error("equivalence witness failed verification");
            return m;
        }
    return std::nullopt;
}

struct GammaLWitness {
    /// f is first mapped by x -> x^{p^automorphism} on its coefficients.
    unsigned automorphism = 0;
    Mat2 matrix;
};

inline std::optional<GammaLWitness> gammal_equivalent(const LinPoly& f, const LinPoly& g, const EquivOptions& opt = {}) {
    const Field& F = f.F();
    for (unsigned j = 0; j < F.degree(); ++j)
        if (auto M = gl_equivalent(f.frob_coeffs_p(j), g, opt))
            return GammaLWitness{j, *M};
    return std::nullopt;
}

// ---- necessary conditions for psi vs psi ---------------------------------------------

struct ConditionAlternative {
    std::string relation;  // human-readable form of the pair of conditions
    bool holds = false;
    std::optional<Elem> z;
};

struct PairConditions {
    /// 'a' .. 'e' by the class of l modulo 2t relative to s.
    char case_tag = 'a';
    /// The element tested for subfield membership (kh, h/k or hk); absent in case a.
    std::optional<Elem> subfield_element;
    unsigned subfield_degree_short = 0;  // gcd(t-2, 2t)
    unsigned subfield_degree_long = 0;   // gcd(s(t-2), 2t)
    bool subfield_short = false;
    bool subfield_long = false;
    std::vector<ConditionAlternative> alternatives;
    /// Case a: false (no equivalence possible). Otherwise subfield membership and
    /// at least one alternative.
    bool conditions_hold = false;
};

inline char classify_step_pair(unsigned t, unsigned s, unsigned l) {
    const unsigned n = 2 * t;
    const unsigned ls = l % n, ss = s % n;
    if (ls == (n - ss) % n)
        return 'b';
    if (ls == ss)
        return 'c';
    if (ls == (t + n - ss) % n)
        return 'd';
    if (ls == (t + ss) % n)
        return 'e';
    return 'a';
}

namespace detail {

// Some z != 0 with z^{q^{st}} = rel * x^{q^{3s}-1} * z and lhs = zsign * z^{q^{s(t-2)}-1}.
// All z satisfying the first equation form z0 * F_{q^t}^*, which is scanned.
inline std::optional<Elem> find_z(const Field& F, unsigned s, Elem x, int rel, Elem lhs, int zsign) {
    const unsigned t = F.t();
    Elem c = F.div(F.frob(x, 3 * std::int64_t{s}), x);
    if (rel < 0)
        c = F.neg(c);
    const auto z0 = F.solve_semilinear(c, std::int64_t{s} * t);
    if (!z0)
        return std::nullopt;
    for (Elem w : F.subfield_elements(t)) {
        if (w.index == 0)
            continue;
        const Elem z = F.mul(*z0, w);
        Elem rhs = F.div(F.frob(z, std::int64_t{s} * (t - 2)), z);
        if (zsign < 0)
            rhs = F.neg(rhs);
        if (rhs == lhs)
            return z;
    }
    return std::nullopt;
}

}  // namespace detail

/// Evaluates the printed conditions without the t >= 5 guard.
inline PairConditions evaluate_pair_conditions(const PsiParams& p1, const PsiParams& p2) {
    validate(p1);
    validate(p2);
    if (p1.field != p2.field)
        throw Error("parameters over different field contexts");
    const Field& F = *p1.field;
    const unsigned t = F.t(), n = F.n(), s = p1.s % n;
    const Elem m = p1.m, h = p1.h, mu = p2.m, k = p2.h;
    PairConditions r;
    r.case_tag = classify_step_pair(t, s, p2.s);
    r.subfield_degree_short = std::gcd(t - 2, n);
    r.subfield_degree_long = std::gcd(s * (t - 2), n);
    if (r.subfield_degree_short != r.subfield_degree_long)
        throw Error("subfield degrees gcd(t-2,2t) and gcd(s(t-2),2t) disagree");
    if (r.case_tag == 'a')
        return r;

    Elem x;
    switch (r.case_tag) {
        case 'b': x = F.mul(k, h); break;
        case 'c':
        case 'd': x = F.div(h, k); break;
        default: x = F.mul(h, k); break;
    }
    r.subfield_element = x;
    r.subfield_short = F.in_subfield(x, r.subfield_degree_short);
    r.subfield_long = F.in_subfield(x, r.subfield_degree_long);

    const Elem mu_qs = F.frob(mu, s);
    const Elem mu_neg_qst1 = F.inv(F.frob(mu, std::int64_t{s} * (t - 1)));
    struct Alternative {
        const char* text;
        int rel;
        Elem lhs;
        int zsign;
    };
    std::vector<Alternative> specs;
    switch (r.case_tag) {
        case 'b':
            specs = {{"z^{q^{st}} = x^{q^{3s}-1} z, m mu^{q^s} = z^{q^{s(t-2)}-1}", 1, F.mul(m, mu_qs), 1},
                     {"z^{q^{st}} = -x^{q^{3s}-1} z, m mu = -z^{q^{s(t-2)}-1}", -1, F.mul(m, mu), -1}};
            break;
        case 'c':
            specs = {{"z^{q^{st}} = -x^{q^{3s}-1} z, m mu^{-q^{s(t-1)}} = -z^{q^{s(t-2)}-1}", -1, F.mul(m, mu_neg_qst1), -1},
                     {"z^{q^{st}} = x^{q^{3s}-1} z, m/mu = z^{q^{s(t-2)}-1}", 1, F.div(m, mu), 1}};
            break;
        case 'd':
            specs = {{"z^{q^{st}} = x^{q^{3s}-1} z, m mu^{q^s} = -z^{q^{s(t-2)}-1}", 1, F.mul(m, mu_qs), -1},
                     {"z^{q^{st}} = -x^{q^{3s}-1} z, m mu = z^{q^{s(t-2)}-1}", -1, F.mul(m, mu), 1}};
            break;
        default:
            specs = {{"z^{q^{st}} = -x^{q^{3s}-1} z, m mu^{-q^{s(t-1)}} = z^{q^{s(t-2)}-1}", -1, F.mul(m, mu_neg_qst1), 1},
                     {"z^{q^{st}} = x^{q^{3s}-1} z, m/mu = -z^{q^{s(t-2)}-1}", 1, F.div(m, mu), -1}};
            break;
    }
    bool any = false;
    for (const auto& sp : specs) {
        ConditionAlternative alt;
        alt.relation = sp.text;
        alt.z = detail::find_z(F, s, x, sp.rel, sp.lhs, sp.zsign);
        alt.holds = alt.z.has_value();
        any = any || alt.holds;
        r.alternatives.push_back(std::move(alt));
    }
    r.conditions_hold = r.subfield_short && any;
    return r;
}

/// The guarded form: the conditions are only claimed for t >= 5.
inline PairConditions pair_equivalence_conditions(const PsiParams& p1, const PsiParams& p2) {
    if (p1.field && p1.field->t() < 5)
        throw Error("pair conditions are stated for t >= 5");
    return evaluate_pair_conditions(p1, p2);
}

// ---- a family member outside the earlier constructions ---------------------------------

/// Whether y is a (q-1)-th power lying in F_{q^t}^*.
inline bool in_q_minus_one_class(const Field& F, Elem y) {
    if (y.index == 0)
        return false;
    const std::uint64_t m = F.order() - 1;
    const std::uint64_t a = F.q() - 1, b = F.q_pow(F.t()) + 1;
    const std::uint64_t l = a / std::gcd(a, b) * b;
    const std::uint64_t size = m / l;  // |<g^l>|
    return F.pow_u(y, m / size) == F.one();
}

/// The first (m, h) in canonical order satisfying the main theorem with h outside
/// F_{q^{gcd(t-2,2t)}} and m outside the (q-1)-th power class set.
inline std::optional<PsiParams> find_new_family_member(const FieldPtr& field, unsigned s) {
    const Field& F = *field;
    const unsigned t = F.t();
    const bool ok = (t % 2 == 1 && F.q() >= 7) || (t % 2 == 0 && F.q() >= 5);
    if (!ok)
        throw Error("search needs t odd with q >= 7, or t even with q >= 5");
    const PSets sets = psets(F, s);
    const unsigned d = std::gcd(t - 2, F.n());
    std::vector<Elem> hs;
    for (std::uint64_t i = 1; i < F.order(); ++i) {
        const Elem h{static_cast<std::uint32_t>(i)};
        if (norm_sign(F, h) != 0 && !F.in_subfield(h, d))
            hs.push_back(h);
    }
    for (Elem m : F.subfield_elements(t)) {
        if (m.index == 0 || in_q_minus_one_class(F, m))
            continue;
        for (Elem h : hs) {
            PsiParams P{field, s, m, h};
            if (theorem_main_predicate(P, sets).applies)
                return P;
        }
    }
    return std::nullopt;
}

}  // namespace scatlin
