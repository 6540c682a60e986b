#pragma once

// Subspaces of PG(2t-1, q^{2t}) given by linear equations, the collineation
// sigma fixing the canonical subgeometry { <(x^{q^e})_e> }, and intersection
// numbers of projection vertices.
//
// Coordinates are labelled by q-exponent: X_e pairs with x^{q^e}, e in Z_{2t}.

#include <optional>
#include <vector>

#include "linpoly.hpp"

namespace scatlin {

class ProjSubspace {
public:
    ProjSubspace(FieldPtr field, std::vector<std::vector<Elem>> equations)
        : field_(std::move(field)), eqs_(std::move(equations)) {
        for (const auto& row : eqs_)
            if (row.size() != field_->n())
                throw Error("equation length must be 2t");
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<std::vector<Elem>>& equations() const { return eqs_; }

    /// Rank of the equation matrix over F_{q^{2t}}.
    unsigned rank() const { return rank_of(*field_, eqs_); }

    /// Projective dimension; -1 for the empty subspace.
    int dim() const { return static_cast<int>(field_->n()) - static_cast<int>(rank()) - 1; }

    bool contains(const std::vector<Elem>& point) const {
        const Field& F = *field_;
        for (const auto& row : eqs_) {
            Elem acc = F.zero();
            for (unsigned e = 0; e < row.size(); ++e)
                acc = F.add(acc, F.mul(row[e], point[e]));
            if (acc.index != 0)
                return false;
        }
        return true;
    }

    static unsigned rank_of(const Field& F, std::vector<std::vector<Elem>> m) {
        unsigned r = 0;
        const std::size_t cols = m.empty() ? 0 : m[0].size();
        for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
            std::size_t piv = r;
            while (piv < m.size() && m[piv][c].index == 0)
                ++piv;
            if (piv == m.size())
                continue;
            std::swap(m[piv], m[r]);
            const Elem inv = F.inv(m[r][c]);
            for (auto& x : m[r])
                x = F.mul(x, inv);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i == r || m[i][c].index == 0)
                    continue;
                const Elem fct = m[i][c];
                for (std::size_t k = 0; k < cols; ++k)
                    m[i][k] = F.sub(m[i][k], F.mul(fct, m[r][k]));
            }
            ++r;
        }
        return r;
    }

private:
    FieldPtr field_;
    std::vector<std::vector<Elem>> eqs_;
};

/// The point <(x^{q^e})_e> of the canonical subgeometry.
inline std::vector<Elem> subgeometry_point(const Field& F, Elem x) {
    std::vector<Elem> p(F.n());
    for (unsigned e = 0; e < F.n(); ++e)
        p[e] = F.frob(x, e);
    return p;
}

/// sigma: y_{e+s} = x_e^{q^s}. Applied to a point.
inline std::vector<Elem> sigma_point(const Field& F, unsigned s, const std::vector<Elem>& x, int power = 1) {
    const unsigned n = F.n();
    std::vector<Elem> cur = x;
    const unsigned reps = static_cast<unsigned>(num::mod(power, n));
    for (unsigned r = 0; r < reps; ++r) {
        std::vector<Elem> nxt(n);
        for (unsigned e = 0; e < n; ++e)
            nxt[(e + s) % n] = F.frob(cur[e], s);
        cur = std::move(nxt);
    }
    return cur;
}

/// Image of S under sigma^power. An equation sum c_e X_e = 0 maps to the equation
/// with coefficient c_e^{q^s} on X_{e+s}.
inline ProjSubspace sigma_image(const ProjSubspace& S, unsigned s, int power = 1) {
    const Field& F = *S.field();
    const unsigned n = F.n();
    auto eqs = S.equations();
    const unsigned reps = static_cast<unsigned>(num::mod(power, n));
    for (unsigned r = 0; r < reps; ++r)
        for (auto& row : eqs) {
            std::vector<Elem> nxt(n);
            for (unsigned e = 0; e < n; ++e)
                nxt[(e + s) % n] = F.frob(row[e], s);
            row = std::move(nxt);
        }
    return ProjSubspace(S.field(), std::move(eqs));
}

inline ProjSubspace intersect(const std::vector<ProjSubspace>& list) {
    if (list.empty())
        throw Error("intersection of an empty list");
    std::vector<std::vector<Elem>> eqs;
    for (const auto& S : list) {
        if (S.field() != list[0].field())
            throw Error("subspaces over different fields");
        eqs.insert(eqs.end(), S.equations().begin(), S.equations().end());
    }
    return ProjSubspace(list[0].field(), std::move(eqs));
}

inline int intersect_dim(const std::vector<ProjSubspace>& list) { return intersect(list).dim(); }

/// Least gamma >= 1 with dim(Γ ∩ Γ^σ ∩ ... ∩ Γ^{σ^γ}) > dim Γ - 2γ.
inline unsigned intersection_number(const ProjSubspace& Gamma, unsigned s) {
    const int k = Gamma.dim();
    const unsigned n = Gamma.field()->n();
    std::vector<ProjSubspace> chain{Gamma};
    for (unsigned g = 1; g <= n; ++g) {
        chain.push_back(sigma_image(Gamma, s, static_cast<int>(g)));
        if (intersect_dim(chain) > k - 2 * static_cast<int>(g))
            return g;
    }
    throw Error("intersection number undefined for this subspace");
}

/// Vertex of the projection realising L_f: X_0 = 0 and sum_i f_i X_{si} = 0.
inline ProjSubspace vertex_of(const LinPoly& f) {
    const Field& F = f.F();
    const unsigned n = f.n();
    std::vector<Elem> x0(n), fe(n);
    x0[0] = F.one();
    for (unsigned i = 0; i < n; ++i)
        fe[f.exponent_of_slot(i)] = f.coeffs()[i];
    return ProjSubspace(f.field(), {x0, fe});
}

/// A line disjoint from the vertex: every X_e vanishes except X_0 and X_{e*},
/// e* the smallest q-exponent in the support of f other than 0.
inline ProjSubspace axis_of(const LinPoly& f) {
    const Field& F = f.F();
    const unsigned n = f.n();
    std::optional<unsigned> star;
    for (unsigned e = 1; e < n && !star; ++e)
        if (f.coeffs()[f.slot_of_exponent(e)].index != 0)
            star = e;
    if (!star)
        throw Error("f has no term outside X");
    std::vector<std::vector<Elem>> eqs;
    for (unsigned e = 1; e < n; ++e) {
        if (e == *star)
            continue;
        std::vector<Elem> row(n);
        row[e] = F.one();
        eqs.push_back(std::move(row));
    }
    return ProjSubspace(f.field(), std::move(eqs));
}

/// Image under the collineation X_e -> a^{q^e} X_e, which commutes with sigma.
inline ProjSubspace scale_coordinates(const ProjSubspace& S, Elem a) {
    const Field& F = *S.field();
    auto eqs = S.equations();
    for (auto& row : eqs)
        for (unsigned e = 0; e < row.size(); ++e)
            row[e] = F.div(row[e], F.frob(a, e));
    return ProjSubspace(S.field(), std::move(eqs));
}

/// Image under the coordinate-wise automorphism x -> x^{p^j}.
inline ProjSubspace frobenius_coordinates(const ProjSubspace& S, unsigned j) {
    const Field& F = *S.field();
    auto eqs = S.equations();
    for (auto& row : eqs)
        for (auto& c : row)
            c = F.frob_p(c, j);
    return ProjSubspace(S.field(), std::move(eqs));
}

}  // namespace scatlin
