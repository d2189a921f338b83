#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace dclunie {

enum class VarKind : std::uint8_t {
    z = 0,       // the independent variable
    anchor = 1,  // generic lattice anchor zhat
    symbol = 2,  // declared symbol instance, e.g. gamma(z+1), or a constant symbol
    jet = 3,     // Taylor coefficient f^(j)(zhat+n)/j! of an opaque function symbol
    fresh = 4,   // series seed symbol
    aux = 5,     // internal placeholder (w atoms, projective coordinates, ...)
};

// Position in the key order; spaced so that most insertions need no renumbering.
struct VarRank {
    std::atomic<std::uint64_t> v{0};
    VarRank() = default;
    VarRank(const VarRank& o) : v(o.v.load(std::memory_order_relaxed)) {}
    VarRank& operator=(const VarRank& o) {
        v.store(o.v.load(std::memory_order_relaxed), std::memory_order_relaxed);
        return *this;
    }
};

struct VarInfo {
    VarKind kind;
    std::string base;
    int shift = 0;   // instance shift (symbol) or site offset (jet)
    int deriv = 0;   // derivative order (jet)
    int period = 0;  // 0 = aperiodic
    bool constant = false;
    bool nonzero = false;
    std::string key;  // defines the variable order; unique per variable
    VarRank rank;
};

// Interned variable handle. Equality is identity; ordering follows the fixed variable
// order (z first, then zhat, then symbols by name and shift, then jets, fresh, aux).
// A smaller Var is more significant in the lexicographic monomial order.
class Var {
public:
    static Var z();
    static Var anchor();
    // `shift` is reduced modulo `period` when period > 0.
    static Var function_instance(const std::string& name, int shift, int period);
    static Var constant_symbol(const std::string& name);
    static Var jet(const std::string& name, int site, int deriv, int period);
    static Var fresh(const std::string& name, bool nonzero);
    static Var aux(const std::string& name);

    const VarInfo& info() const { return *p_; }
    VarKind kind() const { return p_->kind; }
    bool is_z() const { return p_->kind == VarKind::z; }

    std::string display() const;

    friend bool operator==(Var a, Var b) { return a.p_ == b.p_; }
    friend std::strong_ordering operator<=>(Var a, Var b) {
        if (a.p_ == b.p_) return std::strong_ordering::equal;
        return a.p_->rank.v.load(std::memory_order_relaxed) <=> b.p_->rank.v.load(std::memory_order_relaxed);
    }

    std::size_t hash() const { return std::hash<const void*>{}(p_); }

private:
    explicit Var(const VarInfo* p) : p_(p) {}
    static Var intern(VarInfo info);

    const VarInfo* p_;
};

// Period reduction used by shift semantics: ((n % p) + p) % p, identity when p == 0.
int reduce_shift(int n, int period);

}  // namespace dclunie

template <>
struct std::hash<dclunie::Var> {
    std::size_t operator()(dclunie::Var v) const noexcept { return v.hash(); }
};
