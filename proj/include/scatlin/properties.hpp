#pragma once

// Statement-level checks of the structural facts behind the psi family:
// the ker-trace decomposition, the P± sets, the h-conditions, the maps
// L_m, M, R, T and the product equivalences. Each check either runs over every
// instance of a small field or over seeded random instances.

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psifamily.hpp"

namespace scatlin {

struct PropertyResult {
    PropertyResult() = default;
    PropertyResult(std::string n, std::string st) : name(std::move(n)), statement(std::move(st)) {}

    std::string name;
    std::string statement;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::string first_failure;

    bool passed() const { return failed == 0 && checked > 0; }
};

struct PropertyOptions {
    bool exhaustive = true;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
};

namespace detail {

class PropertyRun {
public:
    PropertyRun(const FieldPtr& field, unsigned s, const PropertyOptions& opt)
        : Fp(field), F(*field), s(s), opt(opt), rng(opt.seed) {
        t = F.t();
        // Independent of Field::ker_trace, which is built from the generator.
        for (std::uint64_t i = 0; i < F.order(); ++i) {
            const Elem x{static_cast<std::uint32_t>(i)};
            if (F.add(x, F.frob(x, t)).index == 0)
                ker.push_back(x);
            if (F.in_subfield(x, t))
                sub.push_back(x);
        }
        for (std::uint64_t i = 1; i < F.order(); ++i) {
            const Elem h{static_cast<std::uint32_t>(i)};
            if (premise(h))
                good_h.push_back(h);
        }
    }

    // N(h) = -1, or N(h) = 1 with h^2 != -1.
    bool premise(Elem h) const {
        const int ns = norm_sign(F, h);
        return ns == -1 || (ns == 1 && F.mul(h, h) != F.neg(F.one()));
    }

    Elem random_elem() { return Elem{static_cast<std::uint32_t>(std::uniform_int_distribution<std::uint64_t>(0, F.order() - 1)(rng))}; }
    template <class V>
    auto pick(const V& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    }
    Elem random_nonzero_sub() {
        Elem m;
        do
            m = pick(sub);
        while (m.index == 0);
        return m;
    }

    // Calls body(m, h) over every premise pair, or over `samples` random ones.
    void for_params(const std::function<void(Elem, Elem)>& body) {
        if (opt.exhaustive) {
            for (Elem m : sub)
                if (m.index)
                    for (Elem h : good_h)
                        body(m, h);
        } else {
            for (std::uint64_t i = 0; i < opt.samples; ++i) {
                const Elem m = random_nonzero_sub();
                body(m, pick(good_h));
            }
        }
    }

    void for_elements(const std::function<void(Elem)>& body) {
        if (opt.exhaustive)
            for (std::uint64_t i = 0; i < F.order(); ++i)
                body(Elem{static_cast<std::uint32_t>(i)});
        else
            for (std::uint64_t i = 0; i < opt.samples; ++i)
                body(random_elem());
    }

    static void note(PropertyResult& r, bool ok, const std::function<std::string()>& what) {
        ++r.checked;
        if (ok)
            return;
        if (r.failed++ == 0)
            r.first_failure = what();
    }

    std::string params_text(Elem m, Elem h) const {
        std::ostringstream os;
        os << "m=" << m.index << " h=" << h.index;
        return os.str();
    }

    FieldPtr Fp;
    const Field& F;
    unsigned s, t;
    PropertyOptions opt;
    std::mt19937_64 rng;
    std::vector<Elem> ker, sub, good_h;
};

}  // namespace detail

inline std::vector<PropertyResult> run_property_suite(const FieldPtr& field, unsigned s, const PropertyOptions& opt = {}) {
    const Field& F = *field;
    if (F.p() == 2)
        throw Error("property suite needs odd characteristic");
    if (std::gcd(s, F.n()) != 1)
        throw Error("step must be coprime to 2t");
    detail::PropertyRun run(field, s, opt);
    const unsigned t = F.t();
    using detail::PropertyRun;
    std::vector<PropertyResult> out;

    {
        PropertyResult r{"trace_direct_sum", "F_{q^2t} = F_{q^t} + ker Tr as a direct sum"};
        PropertyRun::note(r, run.ker.size() == F.q_pow(t), [&] { return "|ker Tr| != q^t"; });
        std::uint64_t meet = 0;
        for (Elem w : run.ker)
            meet += F.in_subfield(w, t) && w.index != 0;
        PropertyRun::note(r, meet == 0, [&] { return "F_{q^t} meets ker Tr outside 0"; });
        run.for_elements([&](Elem x) {
            const auto [x0, x1] = F.split_trace(x);
            const bool ok = F.add(x0, x1) == x && F.in_subfield(x0, t) && F.trace_rel(x1, t).index == 0;
            PropertyRun::note(r, ok, [&] { return "split fails at x=" + std::to_string(x.index); });
        });
        out.push_back(std::move(r));
    }
    {
        PropertyResult r{"trace_kernel_products", "w, w' in ker Tr => w w' in F_{q^t}"};
        auto check = [&](Elem a, Elem b) {
            PropertyRun::note(r, F.in_subfield(F.mul(a, b), t),
                              [&] { return "w=" + std::to_string(a.index) + " w'=" + std::to_string(b.index); });
        };
        if (opt.exhaustive)
            for (Elem a : run.ker)
                for (Elem b : run.ker)
                    check(a, b);
        else
            for (std::uint64_t i = 0; i < opt.samples; ++i)
                check(run.pick(run.ker), run.pick(run.ker));
        out.push_back(std::move(r));
    }
    {
        PropertyResult r{"trace_kernel_powers", "w in ker Tr: w^l in ker Tr for odd l, in F_{q^t} for even l"};
        // w^{2(q^t-1)} = 1 on ker Tr, so exponents modulo 2(q^t-1) cover everything.
        const std::uint64_t period = 2 * (F.q_pow(t) - 1);
        auto check = [&](Elem w, std::uint64_t l) {
            const Elem y = F.pow_u(w, l);
            const bool ok = (l % 2) ? F.trace_rel(y, t).index == 0 : F.in_subfield(y, t);
            PropertyRun::note(r, ok, [&] { return "w=" + std::to_string(w.index) + " l=" + std::to_string(l); });
        };
        if (opt.exhaustive)
            for (Elem w : run.ker)
                for (std::uint64_t l = 0; l < period; ++l)
                    check(w, l);
        else
            for (std::uint64_t i = 0; i < opt.samples; ++i)
                check(run.pick(run.ker), std::uniform_int_distribution<std::uint64_t>(0, 4 * period)(run.rng));
        out.push_back(std::move(r));
    }
    const PSets sets = psets(F, s);
    {
        PropertyResult r{"pset_step_independence", "P+_s = P+_1 and P-_s = P-_1 for every step s"};
        const PSets base = psets(F, 1);
        for (unsigned s2 = 1; s2 < F.n(); ++s2)
            if (std::gcd(s2, F.n()) == 1) {
                const PSets other = psets(F, s2);
                PropertyRun::note(r, other.plus == base.plus && other.minus == base.minus,
                                  [&] { return "differs at s=" + std::to_string(s2); });
            }
        out.push_back(std::move(r));
    }
    {
        PropertyResult r{"pset_intersection", "P+ and P- lie in F_{q^t} and meet only in 0"};
        for (Elem x : sets.plus)
            PropertyRun::note(r, F.in_subfield(x, t) && (x.index == 0 || !sets.in_minus(x)),
                              [&] { return "x=" + std::to_string(x.index); });
        for (Elem x : sets.minus)
            PropertyRun::note(r, F.in_subfield(x, t), [&] { return "x=" + std::to_string(x.index); });
        PropertyRun::note(r, sets.in_plus(F.zero()) && sets.in_minus(F.zero()), [&] { return "0 missing"; });
        out.push_back(std::move(r));
    }
    {
        PropertyResult r{"h_conditions",
                         "N(h)=-1 => h^{q^2s+1} != 1; N(h)=1, h^2 != -1 => h^{q^2s+1} != -1; both => h^{q^{s(t-2)}} != -h"};
        if (t % 2 == 1 && F.q() % 4 == 3)
            PropertyRun::note(r, gcd_q2s_plus_one(F, s) == 2, [&] { return "gcd(q^2s+1, q^2t-1) != 2"; });
        auto check = [&](Elem h) {
            if (h.index == 0)
                return;
            PropertyRun::note(r, h_condition_checks(PsiParams{field, s, F.one(), h}).all(),
                              [&] { return "h=" + std::to_string(h.index); });
        };
        run.for_elements(check);
        out.push_back(std::move(r));
    }

    // Everything below assumes m in F_{q^t}^* and the h premise.
    PropertyResult ker_eq{"kernel_image_independent_of_m", "ker L_m = ker L and im L_m = im L for m != 0"};
    PropertyResult images{"image_equations", "im L and im M are the solution sets of their semilinear equations"};
    PropertyResult dsum{"kernel_image_direct_sums", "F_{q^2t} = ker L_m + ker M = im L_m + im M, both direct"};
    PropertyResult rt{"r_t_kernels", "ker R, ker T are F_{q^t}-lines and ker T = h^{q^{s(t-1)}-q^s} ker R"};
    PropertyResult bases{"basis_components", "{1,rho}, {1,tau} are F_{q^t}-bases with the stated change of components"};
    PropertyResult prod_a{"product_equivalence_a", "a in ker R <=> a v in ker L_m <=> a M(u) in im L_m"};
    PropertyResult prod_b{"product_equivalence_b", "b in ker T <=> b u in ker M <=> b L(v) in im M"};
    PropertyResult trace_w{"trace_membership", "M(x1) / (x2 (h^{q^s} + h^{q^{s(t-1)}})) lies in ker Tr"};

    const std::int64_t st = std::int64_t{s} * t;
    run.for_params([&](Elem m, Elem h) {
        const PsiParams P{field, s, m, h};
        const auto maps = structural_maps(P);
        const auto what = [&] { return run.params_text(m, h); };
        const FpMatrix mat_Lm = maps.Lm.matrix(), mat_L = maps.L.matrix(), mat_M = maps.M.matrix();
        const AffineSolver im_Lm(mat_Lm), im_M(mat_M);
        const auto kLm = maps.Lm.kernel_basis_fp(), kM = maps.M.kernel_basis_fp();
        const unsigned D = F.degree();

        {
            const auto kL = maps.L.kernel_basis_fp();
            bool ok = kL.size() == kLm.size();
            for (Elem x : kLm)
                ok = ok && maps.L.eval(x).index == 0;
            // Equal column spaces: stacking does not raise the rank.
            FpMatrix both(D, 2 * D, F.p());
            for (unsigned r = 0; r < D; ++r)
                for (unsigned c = 0; c < D; ++c) {
                    both(r, c) = mat_Lm(r, c);
                    both(r, D + c) = mat_L(r, c);
                }
            ok = ok && rank(both) == rank(mat_Lm) && rank(mat_Lm) == rank(mat_L);
            PropertyRun::note(ker_eq, ok, what);
        }
        {
            // im L: z^{q^st} + h^{q^st - q^s} z = 0; im M: z^{q^st} - h^{q^st - q^{s(t-1)}} z = 0.
            const Elem cL = F.div(F.frob(h, st), F.frob(h, s));
            const Elem cM = F.div(F.frob(h, st), F.frob(h, std::int64_t{s} * (t - 1)));
            auto in_L = [&](Elem z) { return F.add(F.frob(z, st), F.mul(cL, z)).index == 0; };
            auto in_M = [&](Elem z) { return F.sub(F.frob(z, st), F.mul(cM, z)).index == 0; };
            if (opt.exhaustive) {
                bool ok = true;
                for (std::uint64_t i = 0; i < F.order() && ok; ++i) {
                    const Elem z{static_cast<std::uint32_t>(i)};
                    const auto d = F.digits(z);
                    ok = im_Lm.consistent(d) == in_L(z) && im_M.consistent(d) == in_M(z);
                }
                PropertyRun::note(images, ok, what);
            } else {
                // One image point and one arbitrary point of each kind.
                const Elem x = run.random_elem(), z = run.random_elem();
                const bool ok = in_L(maps.L.eval(x)) && in_M(maps.M.eval(x)) &&
                                im_Lm.consistent(F.digits(z)) == in_L(z) && im_M.consistent(F.digits(z)) == in_M(z);
                PropertyRun::note(images, ok, what);
            }
        }
        {
            FpMatrix kb(D, D, F.p()), ib(D, 2 * D, F.p());
            bool ok = kLm.size() + kM.size() == D;
            if (ok) {
                for (unsigned j = 0; j < D; ++j) {
                    const auto col = F.digits(j < kLm.size() ? kLm[j] : kM[j - kLm.size()]);
                    for (unsigned r = 0; r < D; ++r)
                        kb(r, j) = col[r];
                }
                ok = rank(kb) == D;
            }
            for (unsigned r = 0; r < D; ++r)
                for (unsigned c = 0; c < D; ++c) {
                    ib(r, c) = mat_Lm(r, c);
                    ib(r, D + c) = mat_M(r, c);
                }
            ok = ok && rank(mat_Lm) + rank(mat_M) == D && rank(ib) == D;
            // Both summands are F_{q^t}-subspaces: closed under F_{q^t} scaling.
            const Elem lam = run.opt.exhaustive ? run.sub[std::min<std::size_t>(2, run.sub.size() - 1)] : run.pick(run.sub);
            for (Elem x : kLm)
                ok = ok && maps.Lm.eval(F.mul(lam, x)).index == 0;
            for (Elem x : kM)
                ok = ok && maps.M.eval(F.mul(lam, x)).index == 0;
            PropertyRun::note(dsum, ok, what);
        }
        const auto kR = maps.R.kernel_basis_fp(), kT = maps.T.kernel_basis_fp();
        {
            bool ok = kR.size() == D / 2 && kT.size() == D / 2;
            for (Elem x : kR)
                ok = ok && maps.T.eval(F.mul(maps.c, x)).index == 0;
            PropertyRun::note(rt, ok, what);
        }
        if (kR.empty() || kM.empty() || kLm.empty())
            return;
        const Elem rho = kR[0];
        {
            const Elem tau = F.mul(maps.c, rho);
            bool ok = !F.in_subfield(rho, t) && !F.in_subfield(tau, t) && maps.T.eval(tau).index == 0;
            auto one = [&](Elem gamma) {
                if (!ok)
                    return;
                const auto bc = basis_components(P, gamma, rho);
                ok = bc.transfer_holds && F.add(bc.lambda1, F.mul(bc.mu1, rho)) == gamma &&
                     F.add(bc.lambda2, F.mul(bc.mu2, bc.tau)) == gamma;
            };
            if (opt.exhaustive)
                for (std::uint64_t i = 0; i < F.order(); ++i)
                    one(Elem{static_cast<std::uint32_t>(i)});
            else
                one(run.random_elem());
            PropertyRun::note(bases, ok, what);
        }
        {
            // In exhaustive mode membership tables make each statement a single lookup.
            const std::uint64_t Q = F.order();
            std::vector<char> kerLm_set, kerM_set, imLm_set, imM_set, kerR_set, kerT_set;
            if (opt.exhaustive) {
                for (auto* v : {&kerLm_set, &kerM_set, &imLm_set, &imM_set, &kerR_set, &kerT_set})
                    v->assign(Q, 0);
                for (std::uint64_t i = 0; i < Q; ++i) {
                    const Elem x{static_cast<std::uint32_t>(i)};
                    kerLm_set[i] = maps.Lm.eval(x).index == 0;
                    kerM_set[i] = maps.M.eval(x).index == 0;
                    kerR_set[i] = maps.R.eval(x).index == 0;
                    kerT_set[i] = maps.T.eval(x).index == 0;
                    imLm_set[maps.Lm.eval(x).index] = 1;
                    imM_set[maps.M.eval(x).index] = 1;
                }
            }
            auto zero_of = [&](const std::vector<char>& tab, const LinPoly& f, Elem x) {
                return opt.exhaustive ? bool(tab[x.index]) : f.eval(x).index == 0;
            };
            auto image_of = [&](const std::vector<char>& tab, const AffineSolver& sol, Elem y) {
                return opt.exhaustive ? bool(tab[y.index]) : sol.consistent(F.digits(y));
            };
            bool ok_a = true, ok_b = true;
            auto check_uv = [&](Elem u, Elem v, Elem a) {
                const Elem Mu = maps.M.eval(u), Lv = maps.L.eval(v);
                const bool ai = zero_of(kerR_set, maps.R, a);
                ok_a = ok_a && ai == zero_of(kerLm_set, maps.Lm, F.mul(a, v)) &&
                       ai == image_of(imLm_set, im_Lm, F.mul(a, Mu));
                const bool bi = zero_of(kerT_set, maps.T, a);
                ok_b = ok_b && bi == zero_of(kerM_set, maps.M, F.mul(a, u)) &&
                       bi == image_of(imM_set, im_M, F.mul(a, Lv));
            };
            if (opt.exhaustive) {
                // (i) depends on a only, (ii) on a and v, (iii) on a and u; checking each
                // of (ii), (iii) against (i) for every u, v covers every triple.
                const auto us = span_elements(F, kLm), vs = span_elements(F, kM);
                const Elem u0 = us.back(), v0 = vs.back();
                for (std::uint64_t i = 0; i < Q; ++i) {
                    const Elem a{static_cast<std::uint32_t>(i)};
                    for (Elem v : vs)
                        if (v.index)
                            check_uv(u0, v, a);
                    for (Elem u : us)
                        if (u.index)
                            check_uv(u, v0, a);
                }
            } else {
                // Half of the draws come from the kernels so the "true" side is exercised.
                const Elem u = F.mul(run.random_nonzero_sub(), kLm[0]), v = F.mul(run.random_nonzero_sub(), kM[0]);
                Elem a = run.random_elem();
                if (run.rng() & 1)
                    a = F.mul(run.pick(run.sub), rho);
                check_uv(u, v, a);
                Elem b = run.random_elem();
                if (run.rng() & 1)
                    b = F.mul(run.pick(run.sub), F.mul(maps.c, rho));
                check_uv(u, v, b);
            }
            PropertyRun::note(prod_a, ok_a, what);
            PropertyRun::note(prod_b, ok_b, what);
        }
        if (!F.in_subfield(h, t)) {
            bool ok = true;
            if (opt.exhaustive) {
                const auto x1s = span_elements(F, kLm), x2s = span_elements(F, kM);
                for (Elem x1 : x1s)
                    for (Elem x2 : x2s)
                        if (x2.index)
                            ok = ok && product_property_check(P, x1, x2);
            } else {
                const Elem x1 = F.mul(run.pick(run.sub), kLm[0]);
                const Elem x2 = F.mul(run.random_nonzero_sub(), kM[0]);
                ok = product_property_check(P, x1, x2);
            }
            PropertyRun::note(trace_w, ok, what);
        }
    });
    for (auto* r : {&ker_eq, &images, &dsum, &rt, &bases, &prod_a, &prod_b, &trace_w})
        out.push_back(std::move(*r));
    return out;
}

inline bool all_passed(const std::vector<PropertyResult>& rs) {
    for (const auto& r : rs)
        if (!r.passed())
            return false;
    return true;
}

}  // namespace scatlin
