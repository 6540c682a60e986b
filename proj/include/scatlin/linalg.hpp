#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "numeric.hpp"

namespace scatlin {

/// Dense matrix over the prime field F_p, row-major.
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
        : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

    static FpMatrix identity(std::size_t n, std::uint32_t p) {
        FpMatrix m(n, n, p);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t prime() const { return p_; }

    std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<std::uint32_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const std::uint32_t> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<std::uint32_t> apply(std::span<const std::uint32_t> v) const {
        std::vector<std::uint32_t> out(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                acc += static_cast<std::uint64_t>((*this)(r, c)) * v[c];
            out[r] = static_cast<std::uint32_t>(acc % p_);
        }
        return out;
    }

    FpMatrix operator*(const FpMatrix& o) const {
        FpMatrix out(rows_, o.cols_, p_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint64_t a = (*this)(r, k);
                if (!a)
                    continue;
                for (std::size_t c = 0; c < o.cols_; ++c)
                    out(r, c) = static_cast<std::uint32_t>((out(r, c) + a * o(k, c)) % p_);
            }
        return out;
    }

    bool operator==(const FpMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::uint32_t> data_;
};

namespace detail {

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
    return static_cast<std::uint32_t>(*num::inverse_mod(a, p));
}

// In-place reduced row echelon form; returns pivot columns. Columns >= limit are
// carried along but never chosen as pivots.
inline std::vector<std::size_t> rref_inplace(FpMatrix& m, std::size_t limit) {
    const std::uint32_t p = m.prime();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0)
            ++piv;
        if (piv == m.rows())
            continue;
        if (piv != r)
            for (std::size_t k = 0; k < m.cols(); ++k)
                std::swap(m(r, k), m(piv, k));
        std::uint64_t inv = inv_mod_p(m(r, c), p);
        for (std::size_t k = 0; k < m.cols(); ++k)
            m(r, k) = static_cast<std::uint32_t>(m(r, k) * inv % p);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0)
                continue;
            std::uint64_t f = p - m(i, c);
            for (std::size_t k = 0; k < m.cols(); ++k)
                m(i, k) = static_cast<std::uint32_t>((m(i, k) + f * m(r, k)) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(FpMatrix m) { return detail::rref_inplace(m, m.cols()).size(); }

/// Basis of {x : m x = 0}.
inline std::vector<std::vector<std::uint32_t>> null_space(FpMatrix m) {
    const auto pivots = detail::rref_inplace(m, m.cols());
    const std::uint32_t p = m.prime();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        std::vector<std::uint32_t> v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = (p - m(i, free)) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m x = rhs, if one exists.
inline std::optional<std::vector<std::uint32_t>> solve(const FpMatrix& m, std::span<const std::uint32_t> rhs) {
    FpMatrix aug(m.rows(), m.cols() + 1, m.prime());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols()) = rhs[r] % m.prime();
    }
    const auto pivots = detail::rref_inplace(aug, m.cols());
    for (std::size_t r = pivots.size(); r < aug.rows(); ++r)
        if (aug(r, m.cols()) != 0)
            return std::nullopt;
    std::vector<std::uint32_t> x(m.cols(), 0);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        x[pivots[i]] = aug(i, m.cols());
    return x;
}

/// Solver for a fixed matrix A against many right-hand sides. Row reduction of
/// [A | I] is done once; each query is a consistency check on the left-null rows
/// followed by reading the particular solution off the pivot rows.
class AffineSolver {
public:
    AffineSolver() = default;
    explicit AffineSolver(const FpMatrix& a) : m_(a.rows()), n_(a.cols()), p_(a.prime()) {
        FpMatrix aug(m_, n_ + m_, p_);
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < n_; ++c)
                aug(r, c) = a(r, c);
            aug(r, n_ + r) = 1;
        }
        pivots_ = detail::rref_inplace(aug, n_);
        transform_ = FpMatrix(m_, m_, p_);
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t c = 0; c < m_; ++c)
                transform_(r, c) = aug(r, n_ + c);
        kernel_ = null_space(a);
    }

    std::size_t rank() const { return pivots_.size(); }
    const std::vector<std::vector<std::uint32_t>>& kernel() const { return kernel_; }

    bool consistent(std::span<const std::uint32_t> rhs) const {
        for (std::size_t r = pivots_.size(); r < m_; ++r)
            if (row_dot(r, rhs) != 0)
                return false;
        return true;
    }

    std::optional<std::vector<std::uint32_t>> particular(std::span<const std::uint32_t> rhs) const {
        if (!consistent(rhs))
            return std::nullopt;
        std::vector<std::uint32_t> x(n_, 0);
        for (std::size_t i = 0; i < pivots_.size(); ++i)
            x[pivots_[i]] = row_dot(i, rhs);
        return x;
    }

private:
    std::uint32_t row_dot(std::size_t r, std::span<const std::uint32_t> rhs) const {
        std::uint64_t acc = 0;
        auto row = transform_.row(r);
        for (std::size_t c = 0; c < m_; ++c)
            acc += static_cast<std::uint64_t>(row[c]) * rhs[c];
        return static_cast<std::uint32_t>(acc % p_);
    }

    std::size_t m_ = 0, n_ = 0;
    std::uint32_t p_ = 2;
    std::vector<std::size_t> pivots_;
    FpMatrix transform_;
    std::vector<std::vector<std::uint32_t>> kernel_;
};

}  // namespace scatlin
