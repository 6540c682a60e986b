#pragma once

// The quadrinomial family
//   psi_{m,h,s} = m(X^{q^s} - h^{1-q^{s(t+1)}} X^{q^{s(t+1)}}) + X^{q^{s(t-1)}} + h^{1-q^{s(2t-1)}} X^{q^{s(2t-1)}}
// over F_{q^{2t}}, m in F_{q^t}, h != 0, together with the sets
//   P+_s = { w^{q^s+1} : w in ker Tr },  P-_s = { w^{q^s-1} : w in ker Tr }
// and the conditions under which psi is scattered.

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "linpoly.hpp"
#include "scattered.hpp"

namespace scatlin {

struct PsiParams {
    FieldPtr field;
    unsigned s = 1;
    Elem m;
    Elem h;
};

inline void validate(const PsiParams& P) {
    if (!P.field)
        throw Error("psi parameters need a field");
    const Field& F = *P.field;
    if (std::gcd(P.s % F.n(), F.n()) != 1)
        throw Error("step s must be coprime to 2t");
    if (P.m.index >= F.order() || P.h.index >= F.order())
        throw Error("psi parameter outside the field");
    if (!F.in_subfield(P.m, F.t()))
        throw Error("m must lie in F_{q^t}");
    if (P.h.index == 0)
        throw Error("h must be non-zero");
}

/// h^{1 - q^k}.
inline Elem h_one_minus(const Field& F, Elem h, std::int64_t k) { return F.div(h, F.frob(h, k)); }

inline LinPoly build_psi(const PsiParams& P) {
    validate(P);
    const Field& F = *P.field;
    const unsigned t = F.t(), s = P.s;
    std::vector<Elem> c(F.n());
    c[1] = P.m;
    c[t + 1] = F.neg(F.mul(P.m, h_one_minus(F, P.h, std::int64_t{s} * (t + 1))));
    c[t - 1] = F.one();
    c[2 * t - 1] = h_one_minus(F, P.h, std::int64_t{s} * (2 * t - 1));
    return LinPoly(P.field, s, std::move(c));
}

/// The ordering with the middle exponents q^{s(t-1)} and q^{s(t+1)} exchanged.
inline LinPoly build_psi_swapped(const PsiParams& P) {
    validate(P);
    const Field& F = *P.field;
    const unsigned t = F.t(), s = P.s;
    std::vector<Elem> c(F.n());
    c[1] = P.m;
    c[t - 1] = F.neg(F.mul(P.m, h_one_minus(F, P.h, std::int64_t{s} * (t - 1))));
    c[t + 1] = F.one();
    c[2 * t - 1] = h_one_minus(F, P.h, std::int64_t{s} * (2 * t - 1));
    return LinPoly(P.field, s, std::move(c));
}

// ---- P+ / P- -----------------------------------------------------------------

/// Sorted index vectors; both contain 0.
struct PSets {
    std::vector<Elem> plus, minus;

    static bool contains(const std::vector<Elem>& set, Elem x) { return std::binary_search(set.begin(), set.end(), x); }
    bool in_plus(Elem x) const { return contains(plus, x); }
    bool in_minus(Elem x) const { return contains(minus, x); }
    bool in_either(Elem x) const { return in_plus(x) || in_minus(x); }
};

inline std::vector<Elem> pset(const Field& F, unsigned s, int sign) {
    std::vector<Elem> out;
    for (Elem w : F.ker_trace()) {
        const Elem ws = F.frob(w, s);
        out.push_back(sign > 0 ? F.mul(ws, w) : (w.index == 0 ? w : F.div(ws, w)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (Elem x : out)
        if (!F.in_subfield(x, F.t()))
            throw Error("P-set element outside F_{q^t}");
    return out;
}

inline PSets psets(const Field& F, unsigned s) { return PSets{pset(F, s, +1), pset(F, s, -1)}; }

inline bool pset_s_independence(const Field& F, unsigned s) {
    const PSets a = psets(F, 1), b = psets(F, s);
    return a.plus == b.plus && a.minus == b.minus;
}

// ---- theorem predicates --------------------------------------------------------

struct TheoremVerdict {
    bool applies = false;
    std::string case_tag = "none";  // I, IIa, IIb or none
    std::vector<std::pair<std::string, bool>> reasons;
};

/// Norm of h down to F_{q^t}: +1, -1 or 0 for anything else.
inline int norm_sign(const Field& F, Elem h) {
    const Elem nh = F.norm_rel(h, F.t());
    if (nh == F.one())
        return 1;
    if (nh == F.neg(F.one()))
        return -1;
    return 0;
}

inline TheoremVerdict theorem_main_predicate(const PsiParams& P, const PSets& sets) {
    validate(P);
    const Field& F = *P.field;
    const bool t_even = F.t() % 2 == 0;
    const bool q1 = F.q() % 4 == 1;
    const bool m_nonzero = P.m.index != 0;
    const bool m_plus = sets.in_plus(P.m);
    const bool m_outside = !sets.in_either(P.m);
    const int ns = norm_sign(F, P.h);
    const bool h_sq_minus_one = F.mul(P.h, P.h) == F.neg(F.one());

    TheoremVerdict v;
    v.reasons = {{"m_nonzero", m_nonzero},
                 {"t_even_or_q_1_mod_4", t_even || q1},
                 {"m_in_P_plus", m_plus},
                 {"m_outside_P_plus_minus", m_outside},
                 {"norm_h_is_1", ns == 1},
                 {"norm_h_is_minus_1", ns == -1},
                 {"h_squared_not_minus_1", !h_sq_minus_one}};
    if (!m_nonzero)
        return v;
    if ((t_even || q1) && m_outside && ns != 0)
        v.case_tag = "I";
    else if (!t_even && !q1 && m_plus && ns == -1)
        v.case_tag = "IIa";
    else if (!t_even && !q1 && m_outside && ns == 1 && !h_sq_minus_one)
        v.case_tag = "IIb";
    v.applies = v.case_tag != "none";
    return v;
}

inline TheoremVerdict theorem_main_predicate(const PsiParams& P) { return theorem_main_predicate(P, psets(*P.field, P.s)); }

/// Which earlier sufficient condition (if any) covers (m, h).
inline std::string prior_work_predicate(const PsiParams& P, const PSets& sets) {
    validate(P);
    const Field& F = *P.field;
    const bool h_in_t = F.in_subfield(P.h, F.t());
    if (P.m == F.one() && h_in_t && F.mul(P.h, P.h) == F.neg(F.one()))
        return "LZ-ZZ";
    if (P.m == F.one() && !h_in_t && norm_sign(F, P.h) == -1)
        return "LMTZ";
    if (F.in_subfield(P.h, 1) && P.m.index != 0 && !sets.in_either(P.m))
        return "SZZ";
    return "none";
}

inline std::string prior_work_predicate(const PsiParams& P) { return prior_work_predicate(P, psets(*P.field, P.s)); }

// ---- structural maps ---------------------------------------------------------

struct StructuralMaps {
    LinPoly Lm, L, M, R, T;
    /// h^{q^{s(t-1)} - q^s}, the constant term of R.
    Elem c;
};

inline StructuralMaps structural_maps(const PsiParams& P) {
    validate(P);
    const FieldPtr& Fp = P.field;
    const Field& F = *Fp;
    const unsigned t = F.t(), s = P.s, n = F.n();
    auto make_L = [&](Elem m) {
        std::vector<Elem> c(n);
        c[1] = m;
        c[t + 1] = F.neg(F.mul(m, h_one_minus(F, P.h, std::int64_t{s} * (t + 1))));
        return LinPoly(Fp, s, std::move(c));
    };
    std::vector<Elem> mc(n);
    mc[t - 1] = F.one();
    mc[2 * t - 1] = h_one_minus(F, P.h, std::int64_t{s} * (2 * t - 1));
    const Elem c = F.div(F.frob(P.h, std::int64_t{s} * (t - 1)), F.frob(P.h, s));
    std::vector<Elem> rc(n), tc(n);
    rc[t] = F.one();
    rc[0] = c;
    tc[t] = F.one();
    tc[0] = F.inv(c);
    return StructuralMaps{make_L(P.m), make_L(F.one()), LinPoly(Fp, s, std::move(mc)), LinPoly(Fp, s, std::move(rc)),
                          LinPoly(Fp, s, std::move(tc)), c};
}

/// Splits F_{q^{2t}} as ker L_m ⊕ ker M.
class KernelSplit {
public:
    explicit KernelSplit(const PsiParams& P) : field_(P.field) {
        const auto maps = structural_maps(P);
        k1_ = maps.Lm.kernel_basis_fp();
        k2_ = maps.M.kernel_basis_fp();
        const Field& F = *field_;
        const unsigned D = F.degree();
        if (k1_.size() + k2_.size() != D)
            throw Error("ker L_m and ker M do not span F_{q^{2t}} as a direct sum");
        FpMatrix b(D, D, F.p());
        for (unsigned j = 0; j < D; ++j) {
            const auto col = F.digits(j < k1_.size() ? k1_[j] : k2_[j - k1_.size()]);
            for (unsigned r = 0; r < D; ++r)
                b(r, j) = col[r];
        }
        solver_ = AffineSolver(b);
        if (solver_.rank() != D)
            throw Error("ker L_m and ker M intersect non-trivially");
    }

    /// (x1, x2) with x = x1 + x2, x1 in ker L_m, x2 in ker M.
    std::pair<Elem, Elem> split(Elem x) const {
        const Field& F = *field_;
        const auto coords = *solver_.particular(F.digits(x));
        Elem x1 = F.zero(), x2 = F.zero();
        for (std::size_t j = 0; j < coords.size(); ++j) {
            if (!coords[j])
                continue;
            const Elem term = F.mul(F.from_int(coords[j]), j < k1_.size() ? k1_[j] : k2_[j - k1_.size()]);
            if (j < k1_.size())
                x1 = F.add(x1, term);
            else
                x2 = F.add(x2, term);
        }
        return {x1, x2};
    }

    const std::vector<Elem>& ker_Lm_basis() const { return k1_; }
    const std::vector<Elem>& ker_M_basis() const { return k2_; }

private:
    FieldPtr field_;
    std::vector<Elem> k1_, k2_;
    AffineSolver solver_;
};

inline std::pair<Elem, Elem> decompose(Elem x, const PsiParams& P) { return KernelSplit(P).split(x); }

/// Every element of the F_p-span of `basis`, sorted.
inline std::vector<Elem> span_elements(const Field& F, const std::vector<Elem>& basis) {
    std::vector<Elem> out{F.zero()};
    for (Elem b : basis) {
        const std::size_t base = out.size();
        for (std::uint32_t c = 1; c < F.p(); ++c) {
            const Elem cb = F.mul(F.from_int(c), b);
            for (std::size_t k = 0; k < base; ++k)
                out.push_back(F.add(out[k], cb));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct BasisComponents {
    Elem lambda1, mu1;  // gamma = lambda1 + mu1 * rho
    Elem lambda2, mu2;  // gamma = lambda2 + mu2 * tau
    Elem tau;
    /// lambda2 = lambda1 + mu1 rho (1 - c) and mu2 = mu1.
    bool transfer_holds = false;
};

/// Components of gamma over F_{q^t} in the bases {1, rho} and {1, tau},
/// tau = c rho with c = h^{q^{s(t-1)} - q^s}.
inline BasisComponents basis_components(const PsiParams& P, Elem gamma, Elem rho) {
    const Field& F = *P.field;
    const auto maps = structural_maps(P);
    if (rho.index == 0 || maps.R.eval(rho).index != 0)
        throw Error("rho must be a non-zero element of ker R");
    const unsigned t = F.t();
    auto comps = [&](Elem basis) {
        const Elem den = F.sub(basis, F.frob(basis, t));
        if (den.index == 0)
            throw Error("{1, rho} is not an F_{q^t}-basis");
        const Elem mu = F.div(F.sub(gamma, F.frob(gamma, t)), den);
        return std::make_pair(F.sub(gamma, F.mul(mu, basis)), mu);
    };
    BasisComponents bc;
    bc.tau = F.mul(maps.c, rho);
    std::tie(bc.lambda1, bc.mu1) = comps(rho);
    std::tie(bc.lambda2, bc.mu2) = comps(bc.tau);
    const Elem shift = F.mul(F.mul(bc.mu1, rho), F.sub(F.one(), maps.c));
    bc.transfer_holds = bc.mu1 == bc.mu2 && bc.lambda2 == F.add(bc.lambda1, shift) && F.in_subfield(bc.lambda1, t) &&
                        F.in_subfield(bc.mu1, t);
    return bc;
}

// ---- property checks -----------------------------------------------------------

/// For fixed non-zero u in ker L_m and v in ker M, checks over every a and b:
///   a in ker R  <=>  a v in ker L_m  <=>  a M(u) in im L_m
///   b in ker T  <=>  b u in ker M    <=>  b L(v) in im M
struct ProductChecker {
    explicit ProductChecker(const PsiParams& P) : params(P), maps(structural_maps(P)) {
        im_Lm = maps.Lm.image_set();
        im_M = maps.M.image_set();
    }

    bool a_equiv(Elem a, Elem u, Elem v) const {
        const Field& F = *params.field;
        const bool i = maps.R.eval(a).index == 0;
        const bool ii = maps.Lm.eval(F.mul(a, v)).index == 0;
        const bool iii = PSets::contains(im_Lm, F.mul(a, maps.M.eval(u)));
        return i == ii && ii == iii;
    }

    bool b_equiv(Elem b, Elem u, Elem v) const {
        const Field& F = *params.field;
        const bool i = maps.T.eval(b).index == 0;
        const bool ii = maps.M.eval(F.mul(b, u)).index == 0;
        const bool iii = PSets::contains(im_M, F.mul(b, maps.L.eval(v)));
        return i == ii && ii == iii;
    }

    bool all_for(Elem u, Elem v) const {
        const Field& F = *params.field;
        for (std::uint64_t idx = 0; idx < F.order(); ++idx) {
            const Elem a{static_cast<std::uint32_t>(idx)};
            if (!a_equiv(a, u, v) || !b_equiv(a, u, v))
                return false;
        }
        return true;
    }

    PsiParams params;
    StructuralMaps maps;
    std::vector<Elem> im_Lm, im_M;
};

/// Exhaustive over a, b and every non-zero u in ker L_m, v in ker M.
inline bool prod_equiv_checks(const PsiParams& P) {
    const ProductChecker pc(P);
    const Field& F = *P.field;
    const auto us = span_elements(F, pc.maps.Lm.kernel_basis_fp());
    const auto vs = span_elements(F, pc.maps.M.kernel_basis_fp());
    for (Elem u : us)
        for (Elem v : vs)
            if (u.index && v.index && !pc.all_for(u, v))
                return false;
    return true;
}

/// M(x1) / (x2 (h^{q^s} + h^{q^{s(t-1)}})) lies in ker Tr_{q^{2t}/q^t}.
inline bool product_property_check(const PsiParams& P, Elem x1, Elem x2) {
    const Field& F = *P.field;
    const auto maps = structural_maps(P);
    if (x2.index == 0)
        throw Error("x2 must be non-zero");
    const Elem den = F.add(F.frob(P.h, P.s), F.frob(P.h, std::int64_t{P.s} * (F.t() - 1)));
    if (den.index == 0)
        throw Error("h^{q^s} + h^{q^{s(t-1)}} vanishes, which the h-conditions exclude");
    const Elem w = F.div(maps.M.eval(x1), F.mul(x2, den));
    return F.trace_rel(w, F.t()).index == 0;
}

struct HConditionReport {
    int norm_sign = 0;
    bool h_squared_minus_one = false;
    /// N(h) = -1  =>  h^{q^{2s}+1} != 1
    bool minus_one_implication = true;
    /// N(h) = 1, h^2 != -1  =>  h^{q^{2s}+1} != -1
    bool plus_one_implication = true;
    /// Under either premise, h^{q^{s(t-2)}} != -h.
    bool not_minus_h = true;

    bool all() const { return minus_one_implication && plus_one_implication && not_minus_h; }
};

inline HConditionReport h_condition_checks(const PsiParams& P) {
    const Field& F = *P.field;
    HConditionReport r;
    r.norm_sign = norm_sign(F, P.h);
    r.h_squared_minus_one = F.mul(P.h, P.h) == F.neg(F.one());
    const Elem w = F.mul(F.frob(P.h, 2 * std::int64_t{P.s}), P.h);
    const bool premise_minus = r.norm_sign == -1;
    const bool premise_plus = r.norm_sign == 1 && !r.h_squared_minus_one;
    if (premise_minus)
        r.minus_one_implication = w != F.one();
    if (premise_plus)
        r.plus_one_implication = w != F.neg(F.one());
    if (premise_minus || premise_plus)
        r.not_minus_h = F.frob(P.h, std::int64_t{P.s} * (F.t() - 2)) != F.neg(P.h);
    return r;
}

/// gcd(q^{2s} + 1, q^{2t} - 1), computed modulo q^{2t} - 1.
inline std::uint64_t gcd_q2s_plus_one(const Field& F, unsigned s) {
    const std::uint64_t m = F.order() - 1;
    return std::gcd((num::powmod(F.q(), 2 * std::uint64_t{s}, m) + 1) % m, m);
}

// ---- non-scatteredness witness for m in P- ---------------------------------------

struct PsiWitness {
    Elem x, y;
    /// "constructive" when built from the ker-Tr preimage of m, "fiber-scan" otherwise.
    std::string method;
    Elem gamma;
    Elem xi;
};

/// For m in P-_s and h in F_{q^t} with N(h) = ±1, two F_q-independent elements
/// with the same ratio psi(x)/x. Returns nullopt when m is not in P-_s.
inline std::optional<PsiWitness> pminus_witness(const PsiParams& P, const PSets& sets) {
    validate(P);
    const Field& F = *P.field;
    if (!sets.in_minus(P.m))
        return std::nullopt;
    if (!F.in_subfield(P.h, F.t()) || norm_sign(F, P.h) == 0)
        throw Error("witness construction needs h in F_{q^t} with N(h) = ±1");
    const LinPoly psi = build_psi(P);
    auto same_ratio = [&](Elem x, Elem y) {
        return x.index && y.index && F.div(psi.eval(x), x) == F.div(psi.eval(y), y) && !F.in_subfield(F.div(x, y), 1);
    };

    // psi coincides with the h = 1 form whenever h^{1-q^k} = 1 on both slots.
    const LinPoly reduced = build_psi(PsiParams{P.field, P.s, P.m, F.one()});
    if (psi == reduced && P.m.index != 0) {
        std::optional<Elem> gamma;
        for (Elem w : F.ker_trace())
            if (w.index && F.div(F.frob(w, P.s), w) == P.m) {
                gamma = w;
                break;
            }
        Elem xi{};
        for (Elem c : F.subfield_elements(1))
            if (c.index > 1) {
                xi = c;
                break;
            }
        if (gamma) {
            const Elem x0 = F.one();
            const Elem x1 = F.mul(F.inv(*gamma), F.inv(F.frob(x0, std::int64_t{P.s} * (2 * F.t() - 1))));
            const Elem x = F.add(x0, x1), y = F.add(x0, F.mul(xi, x1));
            if (same_ratio(x, y))
                return PsiWitness{x, y, "constructive", *gamma, xi};
        }
    }
    if (auto v = fiber_violation(psi))
        return PsiWitness{v->first, v->second, "fiber-scan", F.zero(), F.zero()};
    return std::nullopt;
}

}  // namespace scatlin
