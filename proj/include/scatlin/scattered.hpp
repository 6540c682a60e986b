#pragma once

// Scatteredness of a linearized polynomial f: every fiber of x -> f(x)/x,
// x != 0, lies in a single one-dimensional F_q-subspace.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linpoly.hpp"

namespace scatlin {

/// Reusable buffers for repeated fiber passes over the same field. One scanner
/// per worker thread.
class FiberScanner {
public:
    explicit FiberScanner(FieldPtr field) : field_(std::move(field)) {
        if (field_->has_tables()) {
            const std::uint64_t m = field_->order() - 1;
            // Bucket m holds the ratio 0 (zeros of f).
            stamp_.assign(m + 1, 0);
            first_.assign(m + 1, 0);
        }
    }

    bool scattered(const LinPoly& f) { return scan(f, true) == 0; }

    /// Number of distinct values f(x)/x over x != 0.
    std::uint64_t linear_set_size(const LinPoly& f) { return scan(f, false); }

private:
    // Early-exit mode returns 1 on the first violation and 0 otherwise;
    // counting mode returns the number of distinct ratios.
    std::uint64_t scan(const LinPoly& f, bool early_exit) {
        if (f.field() != field_)
            throw Error("polynomial over a different field context");
        if (!field_->has_tables())
            return scan_generic(f, early_exit);

        const Field& F = *field_;
        const std::uint32_t m = static_cast<std::uint32_t>(F.order() - 1);
        const std::uint32_t line = m / static_cast<std::uint32_t>(F.q() - 1);
        const std::uint32_t* lg = F.log_table();
        const std::uint32_t* zech = F.zech_table();

        // Terms c_i x^{q^{e_i}} in log form for x = g^k: log c_i + k q^{e_i}.
        std::vector<std::uint32_t> tlog, step;
        for (unsigned i : f.support()) {
            tlog.push_back(lg[f.coeffs()[i].index]);
            step.push_back(static_cast<std::uint32_t>(F.q_pow_mod(f.exponent_of_slot(i))));
        }
        const std::size_t nt = tlog.size();

        if (++gen_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            gen_ = 1;
        }
        std::uint64_t distinct = 0;
        for (std::uint32_t k = 0; k < m; ++k) {
            std::uint32_t acc = 0;
            bool acc_zero = true;
            for (std::size_t i = 0; i < nt; ++i) {
                const std::uint32_t tl = tlog[i];
                if (acc_zero) {
                    acc = tl;
                    acc_zero = false;
                } else {
                    const std::uint32_t d = tl >= acc ? tl - acc : tl + (m - acc);
                    const std::uint32_t z = zech[d];
                    if (z == Field::kNoZech) {
                        acc_zero = true;
                    } else {
                        acc += z;
                        if (acc >= m)
                            acc -= m;
                    }
                }
                std::uint32_t nx = tl + step[i];
                if (nx >= m || nx < tl)
                    nx = static_cast<std::uint32_t>((std::uint64_t{tl} + step[i]) % m);
                tlog[i] = nx;
            }
            std::uint32_t bucket;
            if (acc_zero)
                bucket = m;
            else
                bucket = acc >= k ? acc - k : acc + (m - k);
            const std::uint32_t cls = k % line;
            if (stamp_[bucket] != gen_) {
                stamp_[bucket] = gen_;
                first_[bucket] = cls;
                ++distinct;
            } else if (first_[bucket] != cls && early_exit) {
                return 1;
            }
        }
        return early_exit ? 0 : distinct;
    }

    std::uint64_t scan_generic(const LinPoly& f, bool early_exit) {
        const Field& F = *field_;
        std::unordered_map<std::uint32_t, Elem> first;
        for (std::uint64_t idx = 1; idx < F.order(); ++idx) {
            const Elem x{static_cast<std::uint32_t>(idx)};
            const Elem r = F.div(f.eval(x), x);
            auto [it, fresh] = first.emplace(r.index, x);
            if (!fresh && early_exit && !F.in_subfield(F.div(x, it->second), 1))
                return 1;
        }
        return early_exit ? 0 : first.size();
    }

    FieldPtr field_;
    std::vector<std::uint32_t> stamp_, first_;
    std::uint32_t gen_ = 0;
};

inline bool is_scattered_fiber(const LinPoly& f) {
    FiberScanner sc(f.field());
    return sc.scattered(f);
}

inline std::uint64_t linear_set_size(const LinPoly& f) {
    FiberScanner sc(f.field());
    return sc.linear_set_size(f);
}

/// (q^{2t} - 1)/(q - 1), the size of a scattered linear set of rank 2t.
inline std::uint64_t scattered_set_size(const Field& F) { return (F.order() - 1) / (F.q() - 1); }

/// Cross-check oracle: f + mX has at most q roots for every m. Refuses fields
/// above `max_order` since the cost is |F| rank computations.
inline bool is_scattered_roots(const LinPoly& f, std::uint64_t max_order = 59049) {
    const Field& F = f.F();
    if (F.order() > max_order)
        throw Error("field too large for the root-count oracle (order " + std::to_string(F.order()) +
                    "); use is_scattered_fiber");
    const unsigned D = F.degree();
    const FpMatrix base = f.matrix();
    // Multiplication by m is additive in m: precompute the images of the basis
    // x^j under multiplication by each basis element of F.
    std::vector<FpMatrix> mul_basis;
    std::uint64_t bj = 1;
    for (unsigned j = 0; j < D; ++j, bj *= F.p()) {
        FpMatrix mm(D, D, F.p());
        std::uint64_t bc = 1;
        for (unsigned c = 0; c < D; ++c, bc *= F.p()) {
            const auto col = F.digits(F.mul(Elem{static_cast<std::uint32_t>(bj)}, Elem{static_cast<std::uint32_t>(bc)}));
            for (unsigned r = 0; r < D; ++r)
                mm(r, c) = col[r];
        }
        mul_basis.push_back(std::move(mm));
    }
    for (std::uint64_t idx = 0; idx < F.order(); ++idx) {
        const auto md = F.digits(Elem{static_cast<std::uint32_t>(idx)});
        FpMatrix a = base;
        for (unsigned j = 0; j < D; ++j) {
            if (!md[j])
                continue;
            for (unsigned r = 0; r < D; ++r)
                for (unsigned c = 0; c < D; ++c)
                    a(r, c) = static_cast<std::uint32_t>((a(r, c) + std::uint64_t{md[j]} * mul_basis[j](r, c)) % F.p());
        }
        if (D - rank(std::move(a)) > F.e())
            return false;
    }
    return true;
}

/// Two elements x, y with f(x)/x = f(y)/y and x/y outside F_q, if any exist.
/// Scans x in index order, so the pair returned is the first collision found.
inline std::optional<std::pair<Elem, Elem>> fiber_violation(const LinPoly& f) {
    const Field& F = f.F();
    std::unordered_map<std::uint32_t, Elem> first;
    for (std::uint64_t idx = 1; idx < F.order(); ++idx) {
        const Elem x{static_cast<std::uint32_t>(idx)};
        const Elem r = F.div(f.eval(x), x);
        auto [it, fresh] = first.emplace(r.index, x);
        if (!fresh && !F.in_subfield(F.div(x, it->second), 1))
            return std::make_pair(it->second, x);
    }
    return std::nullopt;
}

}  // namespace scatlin
