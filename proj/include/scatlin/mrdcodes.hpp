#pragma once

// Rank-metric codes C_f = { aX + bf }, their idealizers, and the stabilizer of
// U_f = { (x, f(x)) } in GL(2, q^{2t}).

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "linpoly.hpp"
#include "parallel.hpp"
#include "psifamily.hpp"

namespace scatlin {

/// (alpha beta; gamma delta) over F_{q^{2t}}.
struct Mat2 {
    Elem alpha, beta, gamma, delta;

    friend bool operator==(const Mat2&, const Mat2&) = default;
    friend auto operator<=>(const Mat2&, const Mat2&) = default;
};

inline Mat2 mat_add(const Field& F, const Mat2& a, const Mat2& b) {
    return {F.add(a.alpha, b.alpha), F.add(a.beta, b.beta), F.add(a.gamma, b.gamma), F.add(a.delta, b.delta)};
}

inline Mat2 mat_mul(const Field& F, const Mat2& a, const Mat2& b) {
    return {F.add(F.mul(a.alpha, b.alpha), F.mul(a.beta, b.gamma)), F.add(F.mul(a.alpha, b.beta), F.mul(a.beta, b.delta)),
            F.add(F.mul(a.gamma, b.alpha), F.mul(a.delta, b.gamma)), F.add(F.mul(a.gamma, b.beta), F.mul(a.delta, b.delta))};
}

inline Elem mat_det(const Field& F, const Mat2& a) { return F.sub(F.mul(a.alpha, a.delta), F.mul(a.beta, a.gamma)); }

inline Mat2 mat_inv(const Field& F, const Mat2& a) {
    const Elem d = mat_det(F, a);
    if (d.index == 0)
        throw Error("singular matrix");
    const Elem di = F.inv(d);
    return {F.mul(a.delta, di), F.neg(F.mul(a.beta, di)), F.neg(F.mul(a.gamma, di)), F.mul(a.alpha, di)};
}

inline Mat2 mat_identity(const Field& F) { return {F.one(), F.zero(), F.zero(), F.one()}; }

/// Checks g∘(alpha X + beta f) = gamma X + delta f as reduced polynomials.
inline bool maps_subspace(const LinPoly& f, const LinPoly& g, const Mat2& M) {
    const FieldPtr& Fp = f.field();
    const LinPoly inner = LinPoly::identity(Fp, f.step()).scaled(M.alpha) + f.scaled(M.beta);
    const LinPoly outer = LinPoly::identity(Fp, f.step()).scaled(M.gamma) + f.scaled(M.delta);
    return g.compose(inner) == outer;
}

/// Membership of g in span{X, f}: returns (gamma, delta) with g = gamma X + delta f.
inline std::optional<std::pair<Elem, Elem>> span_coords(const LinPoly& f, const LinPoly& g) {
    const Field& F = f.F();
    const unsigned n = f.n();
    std::optional<Elem> delta;
    for (unsigned i = 1; i < n; ++i) {
        if (f.coeffs()[i].index == 0) {
            if (g.coeffs()[i].index != 0)
                return std::nullopt;
            continue;
        }
        const Elem d = F.div(g.coeffs()[i], f.coeffs()[i]);
        if (delta && *delta != d)
            return std::nullopt;
        delta = d;
    }
    if (!delta)
        throw Error("f lies in F·X");
    const Elem gamma = F.sub(g.coeffs()[0], F.mul(*delta, f.coeffs()[0]));
    return std::make_pair(gamma, *delta);
}

// ---- codes ---------------------------------------------------------------------

class RankCode {
public:
    explicit RankCode(LinPoly f) : f_(std::move(f)) {
        const auto sup = f_.support();
        if (sup.empty() || (sup.size() == 1 && sup[0] == 0))
            throw Error("C_f degenerates: f must not lie in F·X");
    }

    const LinPoly& f() const { return f_; }
    const Field& F() const { return f_.F(); }

    /// Minimum rank over the classes (1, b) and (0, 1).
    unsigned min_distance(unsigned workers = 1) const {
        if (cached_distance_)
            return *cached_distance_;
        const Field& F = f_.F();
        const unsigned D = F.degree();
        std::vector<Elem> basis(D), fimg(D);
        std::uint64_t b = 1;
        for (unsigned j = 0; j < D; ++j, b *= F.p()) {
            basis[j] = Elem{static_cast<std::uint32_t>(b)};
            fimg[j] = f_.eval(basis[j]);
        }
        auto rank_of = [&](Elem a, Elem c) {
            FpMatrix m(D, D, F.p());
            for (unsigned j = 0; j < D; ++j) {
                const auto col = F.digits(F.add(F.mul(a, basis[j]), F.mul(c, fimg[j])));
                for (unsigned r = 0; r < D; ++r)
                    m(r, j) = col[r];
            }
            return static_cast<unsigned>(scatlin::rank(std::move(m)) / F.e());
        };
        std::vector<unsigned> best(std::max(1u, workers), f_.rank());
        parallel_for(F.order(), workers, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
            for (std::uint64_t i = lo; i < hi; ++i)
                best[w] = std::min(best[w], rank_of(F.one(), Elem{static_cast<std::uint32_t>(i)}));
        });
        cached_distance_ = *std::min_element(best.begin(), best.end());
        return *cached_distance_;
    }

    /// Singleton-like bound |C| = q^{n(n-d+1)} with |C| = q^{2n}, i.e. d = n - 1.
    bool is_mrd(unsigned workers = 1) const { return min_distance(workers) + 1 == f_.n(); }

private:
    LinPoly f_;
    mutable std::optional<unsigned> cached_distance_;
};

inline constexpr std::uint64_t kIdealizerBound = 531441;  // 3^12

/// Elements aX + bf of the right idealizer, as (a, b) pairs ordered by (b, a).
inline std::vector<std::pair<Elem, Elem>> right_idealizer_pairs(const RankCode& C, std::uint64_t bound = kIdealizerBound) {
    const LinPoly& f = C.f();
    const Field& F = f.F();
    if (F.order() * F.order() > bound)
        throw Error("right idealizer enumeration exceeds the size bound; use the stabilizer solver instead");
    const FieldPtr& Fp = f.field();
    const unsigned n = f.n();
    std::vector<std::vector<Elem>> A(F.order()), B(F.order());
    for (std::uint64_t i = 0; i < F.order(); ++i) {
        const Elem a{static_cast<std::uint32_t>(i)};
        A[i] = f.compose(LinPoly::identity(Fp, f.step()).scaled(a)).coeffs();
        B[i] = f.compose(f.scaled(a)).coeffs();
    }
    std::vector<std::pair<Elem, Elem>> out;
    std::vector<Elem> sum(n);
    for (std::uint64_t bi = 0; bi < F.order(); ++bi)
        for (std::uint64_t ai = 0; ai < F.order(); ++ai) {
            for (unsigned k = 0; k < n; ++k)
                sum[k] = F.add(A[ai][k], B[bi][k]);
            if (span_coords(f, LinPoly(Fp, f.step(), sum)))
                out.emplace_back(Elem{static_cast<std::uint32_t>(ai)}, Elem{static_cast<std::uint32_t>(bi)});
        }
    return out;
}

/// Elements aX + bf of the left idealizer: (aX + bf)∘f lies in C.
inline std::vector<std::pair<Elem, Elem>> left_idealizer_pairs(const RankCode& C, std::uint64_t bound = kIdealizerBound) {
    const LinPoly& f = C.f();
    const Field& F = f.F();
    if (F.order() * F.order() > bound)
        throw Error("left idealizer enumeration exceeds the size bound; use the stabilizer solver instead");
    const LinPoly ff = f.compose(f);
    std::vector<std::pair<Elem, Elem>> out;
    for (std::uint64_t bi = 0; bi < F.order(); ++bi)
        for (std::uint64_t ai = 0; ai < F.order(); ++ai) {
            const Elem a{static_cast<std::uint32_t>(ai)}, b{static_cast<std::uint32_t>(bi)};
            if (span_coords(f, f.scaled(a) + ff.scaled(b)))
                out.emplace_back(a, b);
        }
    return out;
}

inline std::vector<LinPoly> to_polys(const LinPoly& f, const std::vector<std::pair<Elem, Elem>>& pairs) {
    std::vector<LinPoly> out;
    for (auto [a, b] : pairs)
        out.push_back(LinPoly::identity(f.field(), f.step()).scaled(a) + f.scaled(b));
    return out;
}

inline std::vector<LinPoly> right_idealizer(const RankCode& C, std::uint64_t bound = kIdealizerBound) {
    return to_polys(C.f(), right_idealizer_pairs(C, bound));
}
inline std::vector<LinPoly> left_idealizer(const RankCode& C, std::uint64_t bound = kIdealizerBound) {
    return to_polys(C.f(), left_idealizer_pairs(C, bound));
}

// ---- residual matching -------------------------------------------------------------

/// Solves g∘(alpha X + beta f) = gamma X + delta f over all (alpha, beta, gamma, delta).
///
/// For fixed beta, slot i != 0 reads g_i alpha^{q^{si}} - delta f_i = -A_beta[i] with
/// A_beta = g∘(beta f), an F_p-linear system in (alpha, delta) whose matrix does not
/// depend on beta. Slot 0 then gives gamma = g_0 alpha + A_beta[0] - delta f_0.
class ResidualMatcher {
public:
    ResidualMatcher(LinPoly f, LinPoly g) : f_(std::move(f)), g_(std::move(g)) {
        if (f_.field() != g_.field() || f_.step() != g_.step())
            throw Error("residual matching needs a common field and step");
        const Field& F = f_.F();
        const unsigned D = F.degree(), n = f_.n();
        FpMatrix phi((n - 1) * D, 2 * D, F.p());
        std::uint64_t b = 1;
        for (unsigned j = 0; j < D; ++j, b *= F.p()) {
            const Elem x{static_cast<std::uint32_t>(b)};
            for (unsigned i = 1; i < n; ++i) {
                const auto ca = F.digits(F.mul(g_.coeffs()[i], F.frob(x, g_.exponent_of_slot(i))));
                const auto cd = F.digits(F.neg(F.mul(x, f_.coeffs()[i])));
                for (unsigned r = 0; r < D; ++r) {
                    phi((i - 1) * D + r, j) = ca[r];
                    phi((i - 1) * D + r, D + j) = cd[r];
                }
            }
        }
        solver_ = AffineSolver(phi);
        const auto& ker = solver_.kernel();
        kernel_elems_.reserve(ker.size());
        for (const auto& v : ker)
            kernel_elems_.push_back(split(v));
    }

    /// F_p-dimension of the solution space for each consistent beta.
    std::size_t kernel_dim() const { return kernel_elems_.size(); }

    /// Calls visit(M) for every solution with the given beta, in a fixed order.
    /// Stops early and returns false when visit returns false.
    template <class Visit>
    bool for_beta(Elem beta, Visit&& visit) const {
        const Field& F = f_.F();
        const unsigned D = F.degree(), n = f_.n();
        const LinPoly A = g_.compose(f_.scaled(beta));
        std::vector<std::uint32_t> rhs((n - 1) * D);
        for (unsigned i = 1; i < n; ++i) {
            const auto d = F.digits(F.neg(A.coeffs()[i]));
            std::copy(d.begin(), d.end(), rhs.begin() + (i - 1) * D);
        }
        const auto part = solver_.particular(rhs);
        if (!part)
            return true;
        const auto [a0, d0] = split(*part);
        // Enumerate particular + span of the kernel, mixed-radix over F_p.
        const std::size_t k = kernel_elems_.size();
        std::vector<std::uint32_t> coef(k, 0);
        while (true) {
            Elem alpha = a0, delta = d0;
            for (std::size_t j = 0; j < k; ++j) {
                if (!coef[j])
                    continue;
                const Elem c = F.from_int(coef[j]);
                alpha = F.add(alpha, F.mul(c, kernel_elems_[j].first));
                delta = F.add(delta, F.mul(c, kernel_elems_[j].second));
            }
            const Elem gamma =
                F.sub(F.add(F.mul(g_.coeffs()[0], alpha), A.coeffs()[0]), F.mul(delta, f_.coeffs()[0]));
            if (!visit(Mat2{alpha, beta, gamma, delta}))
                return false;
            std::size_t j = 0;
            while (j < k && ++coef[j] == F.p())
                coef[j++] = 0;
            if (j == k)
                break;
        }
        return true;
    }

    const LinPoly& f() const { return f_; }
    const LinPoly& g() const { return g_; }

private:
    std::pair<Elem, Elem> split(const std::vector<std::uint32_t>& v) const {
        const Field& F = f_.F();
        const unsigned D = F.degree();
        return {F.from_digits(std::span(v).subspan(0, D)), F.from_digits(std::span(v).subspan(D, D))};
    }

    LinPoly f_, g_;
    AffineSolver solver_;
    std::vector<std::pair<Elem, Elem>> kernel_elems_;
};

// ---- stabilizer ------------------------------------------------------------------

struct StabilizerSet {
    /// Invertible elements of the stabilizer, sorted.
    std::vector<Mat2> elements;
    bool additive_closed = false;
    bool multiplicative_closed = false;
    bool closure_exhaustive = false;
    bool diagonal_only = false;

    /// |G°| counts the zero matrix as well.
    std::uint64_t order_with_zero() const { return elements.size() + 1; }
    bool is_field() const { return additive_closed && multiplicative_closed; }
};

inline constexpr std::size_t kExhaustiveClosureLimit = 1024;

inline void check_closure(const Field& F, StabilizerSet& S, std::uint64_t samples = 100000, std::uint64_t seed = 1) {
    std::vector<Mat2> all = S.elements;
    const Mat2 zero{F.zero(), F.zero(), F.zero(), F.zero()};
    all.push_back(zero);
    std::sort(all.begin(), all.end());
    auto member = [&](const Mat2& m) { return std::binary_search(all.begin(), all.end(), m); };
    S.additive_closed = S.multiplicative_closed = true;
    auto test = [&](const Mat2& a, const Mat2& b) {
        if (S.additive_closed && !member(mat_add(F, a, b)))
            S.additive_closed = false;
        if (S.multiplicative_closed && !member(mat_mul(F, a, b)))
            S.multiplicative_closed = false;
    };
    if (all.size() <= kExhaustiveClosureLimit) {
        S.closure_exhaustive = true;
        for (const auto& a : all)
            for (const auto& b : all)
                test(a, b);
        return;
    }
    S.closure_exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (std::uint64_t i = 0; i < samples; ++i)
        test(all[pick(rng)], all[pick(rng)]);
}

/// All invertible (alpha beta; gamma delta) with f∘(alpha X + beta f) = gamma X + delta f.
inline StabilizerSet stabilizer(const LinPoly& f, unsigned workers = 1) {
    if (f.is_zero())
        throw Error("stabilizer of the zero polynomial");
    const Field& F = f.F();
    const ResidualMatcher rm(f, f);
    std::vector<std::vector<Mat2>> found(std::max(1u, workers));
    parallel_for(F.order(), workers, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        for (std::uint64_t b = lo; b < hi; ++b)
            rm.for_beta(Elem{static_cast<std::uint32_t>(b)}, [&](const Mat2& M) {
                if (mat_det(F, M).index != 0)
                    found[w].push_back(M);
                return true;
            });
    });
    StabilizerSet S;
    for (auto& v : found)
        S.elements.insert(S.elements.end(), v.begin(), v.end());
    std::sort(S.elements.begin(), S.elements.end());
    S.diagonal_only = std::all_of(S.elements.begin(), S.elements.end(),
                                  [](const Mat2& M) { return M.beta.index == 0 && M.gamma.index == 0; });
    check_closure(F, S);
    return S;
}

/// R = -(q^{s(t+1)} - 1)/(q^{2s} - 1) reduced modulo q^{2t} - 1 (t odd).
inline std::uint64_t stabilizer_exponent_R(const Field& F, unsigned s) {
    if (F.t() % 2 == 0)
        throw Error("the exponent R is defined for t odd");
    const std::uint64_t m = F.order() - 1;
    const std::uint64_t q2s = num::powmod(F.q(), 2 * std::uint64_t{s}, m);
    std::uint64_t sum = 0, term = 1 % m;
    for (unsigned j = 0; j < (F.t() + 1) / 2; ++j) {
        sum = (sum + term) % m;
        term = num::mulmod(term, q2s, m);
    }
    return (m - sum) % m;
}

/// The closed-form G° for psi at t odd: alpha in F_q and xi in F_{q^2} with
/// xi^{q^s} = -xi. Includes the zero matrix.
inline std::vector<Mat2> closed_form_stabilizer_t_odd(const PsiParams& P) {
    validate(P);
    const Field& F = *P.field;
    const unsigned t = F.t(), s = P.s;
    if (t % 2 == 0)
        throw Error("closed form stabilizer applies to t odd");
    const std::uint64_t R = stabilizer_exponent_R(F, s);
    const std::uint64_t mod = F.order() - 1;
    const Elem h = P.h, m = P.m;
    const Elem hs = F.frob(h, s), ht1 = F.frob(h, std::int64_t{s} * (t - 1));
    const Elem den = F.add(hs, ht1);
    if (den.index == 0)
        throw Error("h^{q^s} + h^{q^{s(t-1)}} vanishes");
    const Elem z = F.inv(den);
    const Elem mR = F.pow_u(m, R);
    const Elem N = F.norm_rel(h, t);
    // m^{R q^s + 1} h^{q^s} + m^{q^{s(t-1)}(R+1)} h^{q^{s(t-1)}}
    const Elem e1 = F.mul(F.mul(F.pow_u(m, num::mulmod(R, F.q_pow_mod(s), mod)), m), hs);
    const Elem e2 = F.mul(F.pow_u(F.frob(m, std::int64_t{s} * (t - 1)), (R + 1) % mod), ht1);
    const Elem tail = F.neg(F.mul(N, F.add(e1, e2)));
    std::vector<Mat2> out;
    const auto fq = F.subfield_elements(1);
    for (Elem xi : F.subfield_elements(2)) {
        if (F.frob(xi, s) != F.neg(xi))
            continue;
        for (Elem alpha : fq)
            out.push_back(Mat2{alpha, F.mul(F.mul(xi, z), mR), F.mul(xi, tail), alpha});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- standard form ---------------------------------------------------------------

struct StandardFormReport {
    std::vector<unsigned> delta_set;
    unsigned r = 0;
    bool is_standard = false;
    /// Every support slot is congruent to one residue coprime to r.
    bool shape_ok = false;
    unsigned residue = 0;
};

inline StandardFormReport standard_form(const LinPoly& f) {
    if (f.is_zero())
        throw Error("standard form of the zero polynomial");
    const unsigned n = f.n();
    const auto sup = f.support();
    StandardFormReport rep;
    std::vector<unsigned> d{n};
    for (unsigned i : sup)
        for (unsigned j : sup)
            if (i != j)
                d.push_back((i + n - j) % n);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    rep.delta_set = d;
    rep.r = 0;
    for (unsigned x : d)
        rep.r = std::gcd(rep.r, x);
    rep.is_standard = rep.r > 1;
    rep.residue = sup.front() % rep.r;
    rep.shape_ok = std::all_of(sup.begin(), sup.end(), [&](unsigned i) { return i % rep.r == rep.residue; }) &&
                   std::gcd(rep.residue, rep.r) == 1;
    return rep;
}

}  // namespace scatlin
