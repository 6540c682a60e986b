#pragma once

// q^s-linearized polynomials over F_{q^{2t}}, reduced modulo X^{q^{s·2t}} - X.
// Slot i of the coefficient vector multiplies X^{q^{si}}.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fieldcore.hpp"
#include "linalg.hpp"

namespace scatlin {

class LinPoly {
public:
    LinPoly() = default;

    LinPoly(FieldPtr field, unsigned s, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (!field_)
            throw Error("LinPoly needs a field");
        const unsigned n = field_->n();
        s_ = s % n;
        if (std::gcd(s_, n) != 1)
            throw Error("step s must be coprime to 2t, got " + std::to_string(s));
        if (coeffs_.size() != n)
            throw Error("LinPoly needs exactly 2t coefficients");
        for (Elem c : coeffs_)
            if (c.index >= field_->order())
                throw Error("coefficient outside the field");
    }

    static LinPoly zero(FieldPtr field, unsigned s) {
        const unsigned n = field->n();
        return LinPoly(std::move(field), s, std::vector<Elem>(n));
    }

    static LinPoly identity(FieldPtr field, unsigned s) { return monomial(std::move(field), s, 0, Elem{1}); }

    /// c·X^{q^{s·slot}}.
    static LinPoly monomial(FieldPtr field, unsigned s, unsigned slot, Elem c) {
        LinPoly f = zero(std::move(field), s);
        f.coeffs_.at(slot % f.n()) = c;
        return f;
    }

    /// c·X^{q^k}, placed in the slot of the given step whose q-exponent is k.
    static LinPoly q_monomial(FieldPtr field, unsigned s, unsigned k, Elem c) {
        LinPoly f = zero(std::move(field), s);
        f.coeffs_[f.slot_of_exponent(k)] = c;
        return f;
    }

    const FieldPtr& field() const { return field_; }
    const Field& F() const { return *field_; }
    unsigned step() const { return s_; }
    unsigned n() const { return field_->n(); }
    const std::vector<Elem>& coeffs() const { return coeffs_; }
    Elem coeff(unsigned slot) const { return coeffs_.at(slot % n()); }

    /// q-exponent of slot i, that is s·i mod 2t.
    unsigned exponent_of_slot(unsigned i) const { return static_cast<unsigned>((std::uint64_t{s_} * i) % n()); }

    unsigned slot_of_exponent(unsigned k) const {
        const unsigned nn = n();
        const auto inv = static_cast<unsigned>(*num::inverse_mod(s_, nn));
        return static_cast<unsigned>((std::uint64_t{k % nn} * inv) % nn);
    }

    std::vector<unsigned> support() const {
        std::vector<unsigned> out;
        for (unsigned i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i].index != 0)
                out.push_back(i);
        return out;
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c.index == 0; });
    }

    Elem eval(Elem x) const {
        const Field& F = *field_;
        Elem acc = F.zero();
        for (unsigned i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i].index != 0)
                acc = F.add(acc, F.mul(coeffs_[i], F.frob(x, exponent_of_slot(i))));
        return acc;
    }

    LinPoly operator+(const LinPoly& g) const {
        check_compatible(g);
        LinPoly r = *this;
        for (unsigned i = 0; i < n(); ++i)
            r.coeffs_[i] = F().add(coeffs_[i], g.coeffs_[i]);
        return r;
    }

    LinPoly operator-(const LinPoly& g) const {
        check_compatible(g);
        LinPoly r = *this;
        for (unsigned i = 0; i < n(); ++i)
            r.coeffs_[i] = F().sub(coeffs_[i], g.coeffs_[i]);
        return r;
    }

    /// c·f.
    LinPoly scaled(Elem c) const {
        LinPoly r = *this;
        for (auto& a : r.coeffs_)
            a = F().mul(c, a);
        return r;
    }

    /// f ∘ g: slot k collects f_i · g_j^{q^{si}} over i + j ≡ k.
    LinPoly compose(const LinPoly& g) const {
        check_compatible(g);
        const Field& F = *field_;
        const unsigned nn = n();
        LinPoly r = zero(field_, s_);
        for (unsigned i = 0; i < nn; ++i) {
            if (coeffs_[i].index == 0)
                continue;
            const unsigned ei = exponent_of_slot(i);
            for (unsigned j = 0; j < nn; ++j) {
                if (g.coeffs_[j].index == 0)
                    continue;
                Elem& dst = r.coeffs_[(i + j) % nn];
                dst = F.add(dst, F.mul(coeffs_[i], F.frob(g.coeffs_[j], ei)));
            }
        }
        return r;
    }

    /// Slot (n-i) mod n receives a_i^{q^{s(n-i)}}.
    LinPoly adjoint() const {
        const unsigned nn = n();
        LinPoly r = zero(field_, s_);
        for (unsigned i = 0; i < nn; ++i) {
            const unsigned j = (nn - i) % nn;
            r.coeffs_[j] = F().frob(coeffs_[i], exponent_of_slot(j));
        }
        return r;
    }

    /// The same map written in the q^{s2}-slot convention.
    LinPoly to_step(unsigned s2) const {
        LinPoly r = zero(field_, s2);
        for (unsigned i = 0; i < n(); ++i)
            r.coeffs_[r.slot_of_exponent(exponent_of_slot(i))] = coeffs_[i];
        return r;
    }

    /// Applies a field automorphism x -> x^{p^j} to every coefficient.
    LinPoly frob_coeffs_p(unsigned j) const {
        LinPoly r = *this;
        for (auto& c : r.coeffs_)
            c = F().frob_p(c, j);
        return r;
    }

    /// Matrix over F_p whose column j holds the digits of f(x^j).
    FpMatrix matrix() const {
        const Field& F = *field_;
        const unsigned D = F.degree();
        FpMatrix m(D, D, F.p());
        std::uint64_t basis = 1;
        for (unsigned j = 0; j < D; ++j, basis *= F.p()) {
            const auto col = F.digits(eval(Elem{static_cast<std::uint32_t>(basis)}));
            for (unsigned r = 0; r < D; ++r)
                m(r, j) = col[r];
        }
        return m;
    }

    /// Basis of the kernel over the prime field.
    std::vector<Elem> kernel_basis_fp() const {
        std::vector<Elem> out;
        for (const auto& v : null_space(matrix()))
            out.push_back(F().from_digits(v));
        return out;
    }

    /// Basis of the kernel over F_q.
    std::vector<Elem> kernel_basis() const {
        const Field& F = *field_;
        const auto fp = kernel_basis_fp();
        if (F.e() == 1)
            return fp;
        // F_p-basis of F_q: powers of a generator of F_q*.
        const Elem zeta = F.pow_u(F.generator(), (F.order() - 1) / (F.q() - 1));
        std::vector<Elem> fq_basis{F.one()};
        for (unsigned i = 1; i < F.e(); ++i)
            fq_basis.push_back(F.mul(fq_basis.back(), zeta));
        std::vector<Elem> chosen;
        std::vector<std::vector<std::uint32_t>> span_rows;
        for (Elem b : fp) {
            auto trial = span_rows;
            trial.push_back(F.digits(b));
            if (rank_of(trial) == span_rows.size())
                continue;
            chosen.push_back(b);
            for (Elem z : fq_basis)
                span_rows.push_back(F.digits(F.mul(z, b)));
        }
        return chosen;
    }

    /// dim over F_p of the kernel.
    unsigned kernel_dim_fp() const { return static_cast<unsigned>(F().degree() - scatlin::rank(matrix())); }
    /// dim over F_q of the kernel.
    unsigned kernel_dim() const { return kernel_dim_fp() / F().e(); }
    /// Rank over F_q, so kernel_dim() + rank() = 2t.
    unsigned rank() const { return n() - kernel_dim(); }

    bool image_contains(Elem y) const { return solve(matrix(), F().digits(y)).has_value(); }

    /// The image as a sorted set of elements. Enumerates the F_p-span of the
    /// column images, so cost is |image|.
    std::vector<Elem> image_set() const {
        const Field& F = *field_;
        FpMatrix m = matrix();
        // Column space basis: transpose, row-reduce, keep non-zero rows.
        const unsigned D = F.degree();
        FpMatrix tr(D, D, F.p());
        for (unsigned r = 0; r < D; ++r)
            for (unsigned c = 0; c < D; ++c)
                tr(c, r) = m(r, c);
        const auto piv = detail::rref_inplace(tr, D);
        std::vector<Elem> gens;
        for (std::size_t r = 0; r < piv.size(); ++r) {
            std::vector<std::uint32_t> v(tr.row(r).begin(), tr.row(r).end());
            gens.push_back(F.from_digits(v));
        }
        std::vector<Elem> out{F.zero()};
        for (Elem g : gens) {
            const std::size_t base = out.size();
            for (std::uint32_t c = 1; c < F.p(); ++c) {
                const Elem cg = F.mul(F.from_int(c), g);
                for (std::size_t k = 0; k < base; ++k)
                    out.push_back(F.add(out[k], cg));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// ASCII rendering such as "2*X^q + X^q^4"; coefficients by element index.
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        // Order terms by q-exponent so the same map prints the same for every step.
        for (unsigned k = 0; k < n(); ++k) {
            const Elem c = coeffs_[slot_of_exponent(k)];
            if (c.index == 0)
                continue;
            if (!first)
                os << " + ";
            first = false;
            if (c.index != 1)
                os << c.index << "*";
            os << "X";
            if (k == 1)
                os << "^q";
            else if (k > 1)
                os << "^q^" << k;
        }
        return first ? "0" : os.str();
    }

    friend bool operator==(const LinPoly& a, const LinPoly& b) {
        return a.field_ == b.field_ && a.s_ == b.s_ && a.coeffs_ == b.coeffs_;
    }

private:
    void check_compatible(const LinPoly& g) const {
        if (field_ != g.field_)
            throw Error("linearized polynomials over different field contexts");
        if (s_ != g.s_)
            throw Error("linearized polynomials with different steps");
    }

    std::size_t rank_of(const std::vector<std::vector<std::uint32_t>>& rows) const {
        if (rows.empty())
            return 0;
        FpMatrix m(rows.size(), rows[0].size(), F().p());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                m(r, c) = rows[r][c];
        return scatlin::rank(m);
    }

    FieldPtr field_;
    unsigned s_ = 1;
    std::vector<Elem> coeffs_;
};

}  // namespace scatlin
