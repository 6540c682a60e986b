#pragma once

// Arithmetic in the tower F_p ⊆ F_q ⊆ F_{q^t} ⊆ F_{q^{2t}}, q = p^e.
//
// Elements of F_{q^{2t}} = F_p[x]/(modulus) are identified by their canonical
// index: the little-endian base-p encoding of the residue polynomial's
// coefficients. Index 0 is zero and index 1 is one.
//
// Two arithmetic paths exist. The polynomial path works for every field that
// fits in 32-bit indices. When the field order is below
// FieldOptions::log_table_limit, discrete log / antilog / Zech tables are built
// eagerly and all operations go through them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "numeric.hpp"

namespace scatlin {

struct Elem {
    std::uint32_t index = 0;

    friend constexpr bool operator==(Elem, Elem) = default;
    friend constexpr auto operator<=>(Elem, Elem) = default;
};

struct FieldOptions {
    std::uint64_t log_table_limit = std::uint64_t{1} << 24;
    /// Full per-power Frobenius tables are kept when order * 2t stays below this.
    std::uint64_t frob_table_limit = std::uint64_t{1} << 23;
};

namespace detail::poly {

using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i])
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
    trim(r);
    return r;
}

// Remainder modulo an arbitrary non-zero polynomial.
inline Poly rem(Poly a, const Poly& m, std::uint32_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t lead_inv = *num::inverse_mod(m.back(), p);
    while (a.size() >= m.size()) {
        const std::size_t shift = a.size() - m.size();
        const std::uint64_t f = a.back() * lead_inv % p;
        for (std::size_t i = 0; i <= dm; ++i)
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - f) * m[i]) % p);
        trim(a);
    }
    return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) { return rem(mul(a, b, p), m, p); }

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
    Poly r{1};
    base = rem(std::move(base), m, p);
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline Poly sub(Poly a, const Poly& b, std::uint32_t p) {
    if (a.size() < b.size())
        a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Poly gcd(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// X^{p^d} - X mod m has trivial gcd with m for every proper divisor d of deg m,
/// and X^{p^deg} ≡ X mod m.
inline bool is_irreducible(const Poly& m, std::uint32_t p) {
    const unsigned deg = static_cast<unsigned>(m.size() - 1);
    if (deg == 0)
        return false;
    Poly frob = rem(Poly{0, 1}, m, p);
    std::vector<Poly> powers;  // powers[d] = X^{p^d} mod m
    powers.push_back(frob);
    for (unsigned d = 1; d <= deg; ++d) {
        frob = powmod(frob, p, m, p);
        powers.push_back(frob);
    }
    if (sub(powers[deg], powers[0], p) != Poly{})
        return false;
    for (unsigned d : num::divisors(deg)) {
        if (d == deg)
            continue;
        Poly g = gcd(m, sub(powers[d], powers[0], p), p);
        if (g.size() != 1)
            return false;
    }
    return true;
}

}  // namespace detail::poly

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Immutable description of F_{q^{2t}} together with its subfield structure.
class Field {
public:
    static constexpr std::uint32_t kNoZech = UINT32_MAX;

    /// Builds the field with the lexicographically smallest monic irreducible
    /// modulus of degree e*2t over F_p (coefficient tuples compared constant
    /// term first), or with `modulus` when given.
    Field(std::uint32_t p, std::uint32_t e, std::uint32_t t, FieldOptions opts = {},
          std::optional<std::vector<std::uint32_t>> modulus = std::nullopt)
        : p_(p), e_(e), t_(t), opts_(opts) {
        if (!num::is_prime(p))
            throw Error("p must be prime, got " + std::to_string(p));
        if (p == 2)
            throw Error("p must be odd");
        if (e < 1)
            throw Error("e must be at least 1");
        if (t < 3)
            throw Error("t must be at least 3, got " + std::to_string(t));
        n_ = 2 * t;
        degree_ = e * n_;
        q_ = num::ipow(p, e);
        const long double approx = std::pow(static_cast<long double>(p), static_cast<long double>(degree_));
        if (approx >= 4294967295.0L)
            throw Error("field order p^(2et) must be below 2^32");
        order_ = num::ipow(p, degree_);
        pow_p_.resize(degree_ + 1);
        pow_p_[0] = 1;
        for (unsigned i = 1; i <= degree_; ++i)
            pow_p_[i] = pow_p_[i - 1] * p;

        if (modulus) {
            if (modulus->size() != degree_ + 1 || modulus->back() != 1)
                throw Error("modulus must be monic of degree e*2t");
            for (auto c : *modulus)
                if (c >= p)
                    throw Error("modulus coefficient out of range");
            if (!detail::poly::is_irreducible(*modulus, p))
                throw Error("modulus is not irreducible over F_p");
            modulus_ = *modulus;
        } else {
            modulus_ = smallest_irreducible();
        }

        build_frobenius();
        inv2_ = static_cast<std::uint32_t>(*num::inverse_mod(2, p));
        qpow_mod_.resize(n_);
        for (unsigned i = 0; i < n_; ++i)
            qpow_mod_[i] = num::powmod(q_, i, order_ - 1);
        find_generator();
        if (order_ <= opts_.log_table_limit)
            build_tables();
        if (tables_ && order_ * n_ <= opts_.frob_table_limit)
            build_frob_tables();
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t e() const { return e_; }
    std::uint32_t t() const { return t_; }
    /// Extension degree of F_{q^{2t}} over F_q.
    std::uint32_t n() const { return n_; }
    /// Extension degree over the prime field, e * 2t.
    std::uint32_t degree() const { return degree_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t order() const { return order_; }
    std::uint64_t q_pow(unsigned d) const { return num::ipow(q_, d); }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    Elem generator() const { return generator_; }
    bool has_tables() const { return tables_; }
    const FieldOptions& options() const { return opts_; }

    Elem zero() const { return Elem{0}; }
    Elem one() const { return Elem{1}; }

    Elem element(std::uint64_t index) const {
        if (index >= order_)
            throw Error("element index " + std::to_string(index) + " out of range");
        return Elem{static_cast<std::uint32_t>(index)};
    }

    /// The prime-field element c mod p.
    Elem from_int(std::int64_t c) const { return Elem{static_cast<std::uint32_t>(num::mod(c, p_))}; }

    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> d(degree_);
        std::uint32_t v = a.index;
        for (unsigned i = 0; i < degree_; ++i) {
            d[i] = v % p_;
            v /= p_;
        }
        return d;
    }

    Elem from_digits(std::span<const std::uint32_t> d) const {
        std::uint64_t v = 0;
        for (unsigned i = degree_; i-- > 0;)
            v = v * p_ + (d[i] % p_);
        return Elem{static_cast<std::uint32_t>(v)};
    }

    // ---- arithmetic -------------------------------------------------------

    Elem add(Elem a, Elem b) const {
        if (a.index == 0)
            return b;
        if (b.index == 0)
            return a;
        if (tables_) {
            const std::uint32_t la = log_[a.index], lb = log_[b.index];
            const std::uint32_t d = lb >= la ? lb - la : static_cast<std::uint32_t>(lb + (order_ - 1) - la);
            const std::uint32_t z = zech_[d];
            if (z == kNoZech)
                return Elem{0};
            return Elem{exp_[la + z]};
        }
        return add_digits(a, b, 1);
    }

    Elem neg(Elem a) const {
        if (a.index == 0)
            return a;
        if (tables_)
            return Elem{exp_[log_[a.index] + half_]};
        return add_digits(Elem{0}, a, p_ - 1);
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        if (a.index == 0 || b.index == 0)
            return Elem{0};
        if (tables_)
            return Elem{exp_[log_[a.index] + log_[b.index]]};
        return mul_poly(a, b);
    }

    Elem inv(Elem a) const {
        if (a.index == 0)
            throw Error("inverse of zero");
        if (tables_)
            return Elem{exp_[(order_ - 1) - log_[a.index]]};
        return pow(a, order_ - 2);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    /// a^k for any integer k; negative exponents require a != 0.
    Elem pow(Elem a, std::int64_t k) const {
        const std::uint64_t m = order_ - 1;
        if (a.index == 0) {
            if (k < 0)
                throw Error("negative power of zero");
            return k == 0 ? one() : zero();
        }
        const std::uint64_t ek = static_cast<std::uint64_t>(num::mod(k, static_cast<std::int64_t>(m)));
        return pow_u(a, ek);
    }

    /// a^k with the exponent already reduced modulo order - 1.
    Elem pow_u(Elem a, std::uint64_t k) const {
        if (a.index == 0)
            return k == 0 ? one() : zero();
        if (tables_)
            return Elem{exp_[num::mulmod(log_[a.index], k, order_ - 1)]};
        Elem r = one(), b = a;
        while (k) {
            if (k & 1)
                r = mul_poly(r, b);
            b = mul_poly(b, b);
            k >>= 1;
        }
        return r;
    }

    /// x^{q^i}, i taken modulo 2t.
    Elem frob(Elem x, std::int64_t i) const {
        const auto k = static_cast<unsigned>(num::mod(i, n_));
        if (k == 0 || x.index <= 1)
            return x;
        if (!frob_tab_.empty())
            return Elem{frob_tab_[k][x.index]};
        if (tables_)
            return Elem{exp_[num::mulmod(log_[x.index], qpow_mod_[k], order_ - 1)]};
        return apply_matrix(frob_mats_[k], x);
    }

    /// x^{p^j}, j taken modulo e*2t; generates Aut(F_{q^{2t}}).
    Elem frob_p(Elem x, std::int64_t j) const {
        const auto k = static_cast<unsigned>(num::mod(j, degree_));
        Elem r = x;
        for (unsigned i = 0; i < k; ++i)
            r = apply_matrix(p_frob_, r);
        return r;
    }

    bool divides_n(unsigned d) const { return d > 0 && n_ % d == 0; }

    /// Tr_{q^{2t}/q^d}(x) = sum_{i < 2t/d} x^{q^{di}}.
    Elem trace_rel(Elem x, unsigned d) const {
        if (!divides_n(d))
            throw Error("trace degree must divide 2t");
        Elem acc = zero();
        for (unsigned i = 0; i < n_ / d; ++i)
            acc = add(acc, frob(x, static_cast<std::int64_t>(d) * i));
        return acc;
    }

    /// N_{q^{2t}/q^d}(x) = x^{(q^{2t}-1)/(q^d-1)}.
    Elem norm_rel(Elem x, unsigned d) const {
        if (!divides_n(d))
            throw Error("norm degree must divide 2t");
        return pow_u(x, (order_ - 1) / (q_pow(d) - 1));
    }

    bool in_subfield(Elem x, unsigned d) const {
        if (!divides_n(d))
            throw Error("subfield degree must divide 2t");
        return frob(x, d) == x;
    }

    /// Membership in F_{p^k} for any k dividing e*2t.
    bool in_prime_power_subfield(Elem x, unsigned k) const {
        if (k == 0 || degree_ % k != 0)
            throw Error("subfield degree must divide e*2t");
        return frob_p(x, k) == x;
    }

    /// Elements of F_{q^d}, sorted by index.
    std::vector<Elem> subfield_elements(unsigned d) const {
        if (!divides_n(d))
            throw Error("subfield degree must divide 2t");
        const std::uint64_t sub_order = q_pow(d);
        const Elem g = pow_u(generator_, (order_ - 1) / (sub_order - 1));
        std::vector<Elem> out{zero()};
        Elem cur = one();
        for (std::uint64_t i = 0; i + 1 < sub_order; ++i) {
            out.push_back(cur);
            cur = mul(cur, g);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// ker Tr_{q^{2t}/q^t}: the q^t elements w with w^{q^t} = -w, sorted.
    std::vector<Elem> ker_trace() const {
        const Elem w0 = pow_u(generator_, (q_pow(t_) + 1) / 2);
        std::vector<Elem> out{zero()};
        for (Elem a : subfield_elements(t_))
            if (a.index != 0)
                out.push_back(mul(w0, a));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// The unique x = x0 + x1 with x0 in F_{q^t} and x1 in ker Tr_{q^{2t}/q^t}.
    std::pair<Elem, Elem> split_trace(Elem x) const {
        const Elem xt = frob(x, t_);
        const Elem half{inv2_};
        return {mul(add(x, xt), half), mul(sub(x, xt), half)};
    }

    /// Some z != 0 with z^{q^k} = c z, or nullopt when none exists.
    std::optional<Elem> solve_semilinear(Elem c, std::int64_t k) const {
        if (c.index == 0)
            throw Error("solve_semilinear: c must be non-zero");
        const std::uint64_t m = order_ - 1;
        const auto kk = static_cast<unsigned>(num::mod(k, n_));
        const std::uint64_t a = (qpow_mod_[kk] + m - 1) % m;  // q^k - 1 mod (q^{2t} - 1)
        const std::uint64_t d = std::gcd(a, m);                // gcd(0, m) = m
        if (pow_u(c, m / d) != one())
            return std::nullopt;
        if (tables_) {
            const std::uint64_t L = log_[c.index];
            if (a == 0)
                return one();
            const std::uint64_t md = m / d;
            const std::uint64_t j = num::mulmod((L / d) % md, *num::inverse_mod((a / d) % md, md), md);
            return Elem{exp_[j]};
        }
        for (std::uint64_t idx = 1; idx < order_; ++idx) {
            const Elem z{static_cast<std::uint32_t>(idx)};
            if (frob(z, kk) == mul(c, z))
                return z;
        }
        return std::nullopt;
    }

    // ---- table access for hot loops -------------------------------------

    std::uint32_t log(Elem a) const {
        if (a.index == 0)
            throw Error("log of zero");
        if (tables_)
            return log_[a.index];
        throw Error("discrete log table not available for this field");
    }
    Elem exp(std::uint64_t k) const {
        if (tables_)
            return Elem{exp_[k % (order_ - 1)]};
        return pow_u(generator_, k % (order_ - 1));
    }
    const std::uint32_t* log_table() const { return log_.data(); }
    const std::uint32_t* exp_table() const { return exp_.data(); }
    const std::uint32_t* zech_table() const { return zech_.data(); }
    /// q^i mod (order - 1), i < 2t.
    std::uint64_t q_pow_mod(unsigned i) const { return qpow_mod_[i % n_]; }

    /// Matrix of x -> x^{q^i} on the power basis.
    const FpMatrix& frobenius_matrix(unsigned i) const { return frob_mats_[i % n_]; }

    /// Reference multiplication through the polynomial basis, independent of
    /// the tables.
    Elem mul_poly(Elem a, Elem b) const {
        auto da = digits(a), db = digits(b);
        detail::poly::trim(da);
        detail::poly::trim(db);
        auto r = detail::poly::rem(detail::poly::mul(da, db, p_), modulus_, p_);
        r.resize(degree_, 0);
        return from_digits(r);
    }

    Elem add_digits(Elem a, Elem b, std::uint32_t b_scale) const {
        std::uint32_t va = a.index, vb = b.index;
        std::uint64_t out = 0, mult = 1;
        for (unsigned i = 0; i < degree_; ++i) {
            const std::uint32_t da = va % p_, db = vb % p_;
            va /= p_;
            vb /= p_;
            out += ((da + std::uint64_t{db} * b_scale) % p_) * mult;
            mult *= p_;
        }
        return Elem{static_cast<std::uint32_t>(out)};
    }

    Elem apply_matrix(const FpMatrix& m, Elem x) const {
        const auto d = digits(x);
        const auto r = m.apply(d);
        return from_digits(r);
    }

private:
    std::vector<std::uint32_t> smallest_irreducible() const {
        // Lexicographic over (c_0, ..., c_{D-1}) with c_0 most significant.
        const std::uint64_t count = order_;
        for (std::uint64_t k = 0; k < count; ++k) {
            detail::poly::Poly m(degree_ + 1, 0);
            std::uint64_t v = k;
            for (unsigned i = degree_; i-- > 0;) {
                m[i] = static_cast<std::uint32_t>(v % p_);
                v /= p_;
            }
            if (m[0] == 0)
                continue;
            m[degree_] = 1;
            if (detail::poly::is_irreducible(m, p_))
                return m;
        }
        throw Error("no irreducible polynomial found");
    }

    void build_frobenius() {
        // Column j holds the digits of (x^j)^p = x^{pj} mod modulus.
        p_frob_ = FpMatrix(degree_, degree_, p_);
        for (unsigned j = 0; j < degree_; ++j) {
            detail::poly::Poly xj(j + 1, 0);
            xj[j] = 1;
            auto img = detail::poly::powmod(xj, p_, modulus_, p_);
            img.resize(degree_, 0);
            for (unsigned r = 0; r < degree_; ++r)
                p_frob_(r, j) = img[r];
        }
        FpMatrix q_frob = FpMatrix::identity(degree_, p_);
        for (unsigned i = 0; i < e_; ++i)
            q_frob = p_frob_ * q_frob;
        frob_mats_.clear();
        FpMatrix acc = FpMatrix::identity(degree_, p_);
        for (unsigned i = 0; i < n_; ++i) {
            frob_mats_.push_back(acc);
            acc = q_frob * acc;
        }
        if (acc != FpMatrix::identity(degree_, p_))
            throw Error("Frobenius of order 2t expected");
    }

    void find_generator() {
        const std::uint64_t m = order_ - 1;
        const auto primes = num::prime_factors(m);
        for (std::uint64_t idx = 2; idx < order_; ++idx) {
            const Elem g{static_cast<std::uint32_t>(idx)};
            bool primitive = true;
            for (auto r : primes) {
                if (pow_u_slow(g, m / r) == one()) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                generator_ = g;
                return;
            }
        }
        throw Error("no primitive element found");
    }

    Elem pow_u_slow(Elem a, std::uint64_t k) const {
        Elem r = one(), b = a;
        while (k) {
            if (k & 1)
                r = mul_poly(r, b);
            b = mul_poly(b, b);
            k >>= 1;
        }
        return r;
    }

    void build_tables() {
        const std::uint64_t m = order_ - 1;
        log_.assign(order_, 0);
        exp_.assign(2 * m + 1, 0);
        // Multiplication by g as an F_p-linear map on digit vectors.
        FpMatrix mul_g(degree_, degree_, p_);
        for (unsigned j = 0; j < degree_; ++j) {
            const auto col = digits(mul_poly(generator_, Elem{static_cast<std::uint32_t>(pow_p_[j])}));
            for (unsigned r = 0; r < degree_; ++r)
                mul_g(r, j) = col[r];
        }
        std::vector<std::uint32_t> cur(degree_, 0);
        cur[0] = 1;
        for (std::uint64_t k = 0; k < m; ++k) {
            const Elem x = from_digits(cur);
            exp_[k] = x.index;
            log_[x.index] = static_cast<std::uint32_t>(k);
            cur = mul_g.apply(cur);
        }
        if (from_digits(cur) != one())
            throw Error("generator order mismatch while building tables");
        for (std::uint64_t k = m; k < 2 * m + 1; ++k)
            exp_[k] = exp_[k - m];
        zech_.assign(m, kNoZech);
        for (std::uint64_t k = 0; k < m; ++k) {
            const std::uint32_t v = exp_[k];
            const std::uint32_t d0 = v % p_;
            const std::uint32_t w = v - d0 + (d0 + 1) % p_;
            zech_[k] = w == 0 ? kNoZech : log_[w];
        }
        half_ = static_cast<std::uint32_t>(m / 2);
        tables_ = true;
    }

    void build_frob_tables() {
        frob_tab_.assign(n_, {});
        for (unsigned i = 1; i < n_; ++i) {
            auto& tab = frob_tab_[i];
            tab.assign(order_, 0);
            tab[1] = 1;
            for (std::uint64_t x = 2; x < order_; ++x)
                tab[x] = exp_[num::mulmod(log_[x], qpow_mod_[i], order_ - 1)];
        }
    }

    std::uint32_t p_, e_, t_;
    FieldOptions opts_;
    std::uint32_t n_ = 0, degree_ = 0;
    std::uint64_t q_ = 0, order_ = 0;
    std::vector<std::uint64_t> pow_p_;
    std::vector<std::uint32_t> modulus_;
    FpMatrix p_frob_;
    std::vector<FpMatrix> frob_mats_;
    std::vector<std::uint64_t> qpow_mod_;
    std::uint32_t inv2_ = 0;
    Elem generator_{};
    bool tables_ = false;
    std::uint32_t half_ = 0;
    std::vector<std::uint32_t> log_, exp_, zech_;
    std::vector<std::vector<std::uint32_t>> frob_tab_;
};

inline FieldPtr make_field(std::uint32_t p, std::uint32_t e, std::uint32_t t, FieldOptions opts = {}) {
    return std::make_shared<const Field>(p, e, t, opts);
}

/// Splits a prime power q into (p, e).
inline std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint64_t q) {
    if (q < 2)
        throw Error("q must be a prime power");
    const auto primes = num::prime_factors(q);
    if (primes.size() != 1)
        throw Error("q must be a prime power, got " + std::to_string(q));
    std::uint32_t e = 0;
    while (q > 1) {
        q /= primes[0];
        ++e;
    }
    return {static_cast<std::uint32_t>(primes[0]), e};
}

}  // namespace scatlin

template <>
struct std::hash<scatlin::Elem> {
    std::size_t operator()(scatlin::Elem a) const noexcept { return std::hash<std::uint32_t>{}(a.index); }
};
