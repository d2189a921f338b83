#include "dclunie/var.hpp"

#include <cstdio>
#include <deque>
#include <iterator>
#include <map>
#include <mutex>
#include <unordered_map>

namespace dclunie {

namespace {

struct Registry {
    std::mutex mu;
    std::deque<VarInfo> store;
    std::unordered_map<std::string, const VarInfo*> by_key;
    std::map<std::string, VarInfo*> ordered;
};

constexpr std::uint64_t kRankStep = std::uint64_t{1} << 32;

void renumber(Registry& r) {
    std::uint64_t next = kRankStep;
    for (auto& [k, p] : r.ordered) {
        p->rank.v.store(next, std::memory_order_relaxed);
        next += kRankStep;
    }
}

void assign_rank(Registry& r, std::map<std::string, VarInfo*>::iterator it) {
    std::uint64_t lo = it == r.ordered.begin() ? 0 : std::prev(it)->second->rank.v.load();
    auto nx = std::next(it);
    std::uint64_t hi = nx == r.ordered.end() ? lo + 2 * kRankStep : nx->second->rank.v.load();
    if (hi - lo < 2 || hi < lo) {
        renumber(r);
        return;
    }
    it->second->rank.v.store(nx == r.ordered.end() ? lo + kRankStep : lo + (hi - lo) / 2);
}

Registry& registry() {
    static Registry r;
    return r;
}

// Fixed-width so that string order equals numeric order for |n| < 10^8.
std::string encode_int(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%09d", n + 100000000);
    return buf;
}

std::string offset_text(const std::string& base, int n) {
    if (n == 0) return base;
    return base + (n > 0 ? "+" : "-") + std::to_string(n > 0 ? n : -n);
}

}  // namespace

int reduce_shift(int n, int period) {
    if (period <= 0) return n;
    return ((n % period) + period) % period;
}

Var Var::intern(VarInfo info) {
    auto& r = registry();
    std::lock_guard<std::mutex> lock(r.mu);
    auto it = r.by_key.find(info.key);
    if (it != r.by_key.end()) return Var(it->second);
    r.store.push_back(std::move(info));
    VarInfo* p = &r.store.back();
    r.by_key.emplace(p->key, p);
    assign_rank(r, r.ordered.emplace(p->key, p).first);
    return Var(p);
}

Var Var::z() {
    static const Var v = intern(VarInfo{VarKind::z, "z", 0, 0, 0, false, false, "0"});
    return v;
}

Var Var::anchor() {
    static const Var v = intern(VarInfo{VarKind::anchor, "zhat", 0, 0, 0, true, false, "1"});
    return v;
}

Var Var::function_instance(const std::string& name, int shift, int period) {
    int s = reduce_shift(shift, period);
    std::string key = "2" + name + "|f" + encode_int(s) + "|p" + std::to_string(period);
    return intern(VarInfo{VarKind::symbol, name, s, 0, period, false, false, std::move(key)});
}

Var Var::constant_symbol(const std::string& name) {
    std::string key = "2" + name + "|c";
    return intern(VarInfo{VarKind::symbol, name, 0, 0, 0, true, false, std::move(key)});
}

Var Var::jet(const std::string& name, int site, int deriv, int period) {
    int s = reduce_shift(site, period);
    std::string key = "3" + name + "|" + encode_int(s) + "|" + encode_int(deriv) + "|p" +
                      std::to_string(period);
    return intern(VarInfo{VarKind::jet, name, s, deriv, period, true, false, std::move(key)});
}

Var Var::fresh(const std::string& name, bool nonzero) {
    std::string key = "4" + name + (nonzero ? "|nz" : "|g");
    return intern(VarInfo{VarKind::fresh, name, 0, 0, 0, true, nonzero, std::move(key)});
}

Var Var::aux(const std::string& name) {
    std::string key = "5" + name;
    return intern(VarInfo{VarKind::aux, name, 0, 0, 0, false, false, std::move(key)});
}

std::string Var::display() const {
    const VarInfo& i = *p_;
    switch (i.kind) {
        case VarKind::z:
            return "z";
        case VarKind::anchor:
            return "zhat";
        case VarKind::symbol:
            if (i.constant || i.shift == 0) return i.base;
            return i.base + "(" + offset_text("z", i.shift) + ")";
        case VarKind::jet: {
            std::string head = i.deriv == 0 ? i.base : i.base + "[" + std::to_string(i.deriv) + "]";
            return head + "(" + offset_text("zhat", i.shift) + ")";
        }
        case VarKind::fresh:
        case VarKind::aux:
            return i.base;
    }
    return i.base;
}

}  // namespace dclunie
