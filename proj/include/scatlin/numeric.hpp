#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatlin {

/// Raised for every violated precondition in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace num {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// b^e, throwing on 64-bit overflow.
inline u64 ipow(u64 b, unsigned e) {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (b != 0 && r > UINT64_MAX / b)
            throw Error("integer power overflows 64 bits");
        r *= b;
    }
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
    if (m == 1)
        return 0;
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Least non-negative residue of a mod m (m > 0).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline bool is_prime(u64 n) {
    if (n < 2)
        return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Distinct prime divisors in increasing order.
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

inline std::vector<unsigned> divisors(unsigned n) {
    std::vector<unsigned> out;
    for (unsigned d = 1; d <= n; ++d)
        if (n % d == 0)
            out.push_back(d);
    return out;
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
inline std::optional<u64> inverse_mod(u64 a, u64 m) {
    std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t quot = old_r / r;
        std::int64_t tmp = old_r - quot * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quot * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1)
        return std::nullopt;
    return static_cast<u64>(mod(old_s, static_cast<std::int64_t>(m)));
}

/// (b^k - 1) mod m, computed without forming b^k.
inline u64 pow_minus_one_mod(u64 b, u64 k, u64 m) { return (powmod(b, k, m) + m - 1 % m) % m; }

}  // namespace num
}  // namespace scatlin
