// Arithmetic in F_p, p = 2^61 - 1, used for fast probabilistic checks.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dclunie/poly.hpp"

namespace dclunie::modp {

using u64 = std::uint64_t;
constexpr u64 P = (u64{1} << 61) - 1;

inline u64 mul(u64 a, u64 b) {
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    u64 lo = static_cast<u64>(r & P) + static_cast<u64>(r >> 61);
    return lo >= P ? lo - P : lo;
}
inline u64 add(u64 a, u64 b) {
    u64 r = a + b;
    return r >= P ? r - P : r;
}
inline u64 sub(u64 a, u64 b) {
    return a >= b ? a - b : a + P - b;
}
inline u64 power(u64 a, u64 e) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}
inline u64 inv(u64 a) {
    return power(a, P - 2);
}

inline std::optional<u64> reduce(const mpz_class& z) {
    mpz_class r = z % mpz_class(static_cast<unsigned long>(P));
    if (r < 0) r += mpz_class(static_cast<unsigned long>(P));
    return static_cast<u64>(r.get_ui());
}

inline std::optional<u64> reduce(const Rational& q) {
    auto n = reduce(q.get_num());
    auto d = reduce(q.get_den());
    if (*d == 0) return std::nullopt;
    return mul(*n, inv(*d));
}

// Deterministic point value for a key; `salt` selects independent points.
inline u64 point_value(const std::string& key, u64 salt = 0) {
    u64 h = 1469598103934665603ULL ^ (salt * 0x9E3779B97F4A7C15ULL);
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return h % (P - 3) + 2;
}

inline u64 point_value(Var v, u64 salt = 0) {
    return point_value(v.info().key, salt);
}

}  // namespace dclunie::modp
