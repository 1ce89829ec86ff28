#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "charsum/common.hpp"

namespace charsum {

using json = nlohmann::json;

/// Maximum extension degree this library supports (desk scale).
inline constexpr u32 kMaxDeg = 8;

/// Element of F_{p^d} as a coefficient vector on the basis 1, w, ..., w^{d-1},
/// where w is the root of the context's minimal polynomial. Coefficients are
/// reduced mod p; entries at positions >= d stay zero, so equality is plain
/// array comparison. Elements are context-scoped and carry no p or d.
struct FieldElem {
    std::array<u32, kMaxDeg> c{};

    bool operator==(const FieldElem&) const = default;

    bool is_zero() const {
        for (u32 x : c)
            if (x) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Dense polynomials over F_p (coefficient index = degree). Used for the
// irreducible-modulus search and for reduction-row setup; weil_verify has its
// own polynomial layer over extension-field coefficients.

namespace ppoly {

using Poly = std::vector<u64>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + mul_ov(a[i], b[j])) % p;
    trim(r);
    return r;
}

/// Remainder of a modulo monic f.
inline Poly mod(Poly a, const Poly& f, u64 p) {
    trim(a);
    int df = deg(f);
    while (deg(a) >= df) {
        u64 lead = a.back();
        int shift = deg(a) - df;
        for (int i = 0; i <= df; ++i)
            a[i + shift] = submod(a[i + shift], mulmod(lead, f[i], p), p);
        trim(a);
    }
    return a;
}

/// x^(p^reps) mod monic f, by repeated p-th powering.
inline Poly frob_power_x(u32 reps, const Poly& f, u64 p) {
    Poly cur = mod(Poly{0, 1}, f, p);
    for (u32 i = 0; i < reps; ++i) {
        Poly acc{1};
        Poly base = cur;
        u64 e = p;
        while (e) {
            if (e & 1) acc = mod(mul(acc, base, p), f, p);
            base = mod(mul(base, base, p), f, p);
            e >>= 1;
        }
        cur = acc;
    }
    return cur;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic for stable reduction
        u64 inv = invmod(b.back(), p);
        Poly bm = b;
        for (u64& x : bm) x = mulmod(x, inv, p);
        Poly r = mod(a, bm, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        u64 inv = invmod(a.back(), p);
        for (u64& x : a) x = mulmod(x, inv, p);
    }
    return a;
}

/// Deterministic irreducibility test for monic f of degree d over F_p:
/// x^(p^d) == x (mod f) and gcd(x^(p^(d/l)) - x, f) = 1 for every prime l | d.
inline bool is_irreducible(const Poly& f, u64 p) {
    int d = deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    Poly x = mod(Poly{0, 1}, f, p);
    if (frob_power_x(static_cast<u32>(d), f, p) != x) return false;
    for (u64 l : prime_factors(static_cast<u64>(d))) {
        Poly diff = frob_power_x(static_cast<u32>(d / l), f, p);
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = submod(diff[1], 1, p);
        trim(diff);
        if (diff.empty()) return false;  // x^(p^(d/l)) = x: f splits over a subfield
        if (deg(gcd(diff, f, p)) >= 1) return false;
    }
    return true;
}

}  // namespace ppoly

// ---------------------------------------------------------------------------

/// Immutable context for F_{p^d}: modulus polynomial, canonical generator of
/// the unit group, and (when the field fits the enumeration budget) full
/// dlog/exp tables. Construct via make_field; treat as read-only afterwards.
class FieldCtx {
public:
    u64 p = 0;
    u32 d = 1;
    std::vector<u64> min_poly;   // length d+1, monic
    FieldElem omega;             // root of min_poly (the basis element w)
    FieldElem generator;
    std::vector<i64> dlog;       // elem index -> dlog, -1 for zero; empty if not built
    std::vector<u64> exp_table;  // dlog -> elem index; empty if not built

    u64 size() const { return size_; }              // p^d
    u64 unit_count() const { return size_ - 1; }    // p^d - 1

    bool has_dlog() const { return !dlog.empty(); }

    /// Canonical element encoding: mixed-radix index sum c_i p^i.
    u64 index_of(const FieldElem& a) const {
        u64 idx = 0;
        for (u32 i = d; i-- > 0;) idx = idx * p + a.c[i];
        return idx;
    }

    FieldElem elem_at(u64 idx) const {
        FieldElem a;
        for (u32 i = 0; i < d; ++i) {
            a.c[i] = static_cast<u32>(idx % p);
            idx /= p;
        }
        if (idx) fail_invalid("element index out of range");
        return a;
    }

    FieldElem zero() const { return FieldElem{}; }

    FieldElem one() const {
        FieldElem a;
        a.c[0] = 1;
        return a;
    }

    /// Embed a base-field scalar.
    FieldElem scalar(u64 v) const {
        FieldElem a;
        a.c[0] = static_cast<u32>(v % p);
        return a;
    }

    FieldElem add(const FieldElem& a, const FieldElem& b) const {
        FieldElem r;
        for (u32 i = 0; i < d; ++i) r.c[i] = static_cast<u32>(addmod(a.c[i], b.c[i], p));
        return r;
    }

    FieldElem sub(const FieldElem& a, const FieldElem& b) const {
        FieldElem r;
        for (u32 i = 0; i < d; ++i) r.c[i] = static_cast<u32>(submod(a.c[i], b.c[i], p));
        return r;
    }

    FieldElem neg(const FieldElem& a) const { return sub(zero(), a); }

    FieldElem smul(u64 s, const FieldElem& a) const {
        FieldElem r;
        s %= p;
        for (u32 i = 0; i < d; ++i) r.c[i] = static_cast<u32>(mulmod(s, a.c[i], p));
        return r;
    }

    FieldElem mul(const FieldElem& a, const FieldElem& b) const {
        // schoolbook product then reduction via the precomputed rows for w^(d+j)
        std::array<u64, 2 * kMaxDeg> conv{};
        for (u32 i = 0; i < d; ++i) {
            if (!a.c[i]) continue;
            u64 ai = a.c[i];
            for (u32 j = 0; j < d; ++j)
                conv[i + j] = (conv[i + j] + mul_ov(ai, b.c[j])) % p;
        }
        if (d >= 2) {
            for (u32 j = d; j <= 2 * d - 2; ++j) {
                u64 t = conv[j];
                if (!t) continue;
                const auto& row = red_rows_[j - d];
                for (u32 i = 0; i < d; ++i)
                    conv[i] = (conv[i] + mul_ov(t, row[i])) % p;
            }
        }
        FieldElem r;
        for (u32 i = 0; i < d; ++i) r.c[i] = static_cast<u32>(conv[i]);
        return r;
    }

    FieldElem pow(FieldElem a, u64 e) const {
        FieldElem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    FieldElem inv(const FieldElem& a) const {
        if (a.is_zero()) fail_invalid("division by zero in F_{p^d}");
        return pow(a, unit_count() - 1);
    }

    /// Frobenius x -> x^p applied i times.
    FieldElem frob(const FieldElem& a, u32 i = 1) const {
        FieldElem r = a;
        for (u32 k = 0; k < i; ++k) r = pow(r, p);
        return r;
    }

    /// Norm to F_p: product of the d Frobenius conjugates. Returns the scalar.
    u64 norm(const FieldElem& a) const {
        FieldElem prod = one();
        FieldElem conj = a;
        for (u32 i = 0; i < d; ++i) {
            prod = mul(prod, conj);
            conj = frob(conj);
        }
        for (u32 i = 1; i < d; ++i)
            if (prod.c[i]) fail_numeric("norm left the base field");
        return prod.c[0];
    }

    /// Degree of the minimal polynomial of a over F_p (smallest k | d with
    /// a^(p^k) = a).
    u32 min_poly_degree(const FieldElem& a) const {
        for (u32 k = 1; k <= d; ++k) {
            if (d % k) continue;
            if (frob(a, k) == a) return k;
        }
        return d;  // unreachable
    }

    bool in_base_field(const FieldElem& a) const {
        for (u32 i = 1; i < d; ++i)
            if (a.c[i]) return false;
        return true;
    }

    i64 dlog_of(const FieldElem& a) const {
        if (!has_dlog()) fail_state("dlog table not built for this field");
        return dlog[index_of(a)];
    }

    /// Multiplicative order of a nonzero element.
    u64 order_of(const FieldElem& a) const {
        if (a.is_zero()) fail_invalid("order of zero");
        u64 n = unit_count();
        u64 ord = n;
        for (u64 q : prime_factors(n)) {
            while (ord % q == 0 && pow(a, ord / q) == one()) ord /= q;
        }
        return ord;
    }

    json to_json() const {
        return json{{"p", p},
                    {"d", d},
                    {"min_poly", min_poly},
                    {"generator", std::vector<u32>(generator.c.begin(), generator.c.begin() + d)}};
    }

    std::string elem_hex(const FieldElem& a) const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(index_of(a)));
        return buf;
    }

    FieldElem elem_from_hex(const std::string& s) const {
        char* end = nullptr;
        u64 idx = std::strtoull(s.c_str(), &end, 16);
        if (!end || *end != '\0') fail_invalid("bad element hex: " + s);
        if (idx >= size_) fail_invalid("element index out of range: " + s);
        return elem_at(idx);
    }

private:
    friend std::shared_ptr<const FieldCtx> make_field(u64, u32, u64, bool, const Budget&);
    friend std::shared_ptr<const FieldCtx> make_field_with_poly(u64, u32, const std::vector<u64>&,
                                                                bool, const Budget&);

    u64 size_ = 0;
    std::vector<std::array<u64, kMaxDeg>> red_rows_;  // w^(d+j) for j in [0, d-2]

    void finish_setup() {
        size_ = 1;
        for (u32 i = 0; i < d; ++i) {
            if (size_ > (1ull << 62) / p) fail_invalid("field too large");
            size_ *= p;
        }
        if (d < 2) return;
        // row j represents w^(d+j); w^d = -(low part of min_poly)
        red_rows_.resize(d - 1);
        std::array<u64, kMaxDeg> row{};
        for (u32 i = 0; i < d; ++i) row[i] = submod(0, min_poly[i], p);
        red_rows_[0] = row;
        for (u32 j = 1; j < d - 1; ++j) {
            std::array<u64, kMaxDeg> nxt{};
            u64 carry = row[d - 1];
            for (u32 i = d - 1; i >= 1; --i) nxt[i] = row[i - 1];
            nxt[0] = 0;
            if (carry)
                for (u32 i = 0; i < d; ++i)
                    nxt[i] = (nxt[i] + mul_ov(carry, red_rows_[0][i])) % p;
            row = nxt;
            red_rows_[j] = row;
        }
    }
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

/// Deterministic irreducible-modulus search. Candidates are monic degree-d
/// polynomials enumerated by the mixed-radix index of their low coefficient
/// vector; seed 0 starts at the lexicographically smallest candidate, other
/// seeds start at an LCG-derived offset and wrap.
inline std::vector<u64> find_irreducible(u64 p, u32 d, u64 seed) {
    require_prime(p);
    if (d < 1 || d > kMaxDeg) fail_invalid("extension degree out of range");
    u64 count = 1;
    for (u32 i = 0; i < d; ++i) {
        if (count > (1ull << 62) / p) fail_invalid("field too large");
        count *= p;
    }
    u64 start = 0;
    if (seed != 0) start = Lcg64(seed).below(count);
    for (u64 t = 0; t < count; ++t) {
        u64 m = start + t;
        if (m >= count) m -= count;
        ppoly::Poly f(d + 1, 0);
        u64 mm = m;
        for (u32 i = 0; i < d; ++i) {
            f[i] = mm % p;
            mm /= p;
        }
        f[d] = 1;
        if (ppoly::is_irreducible(f, p)) return f;
    }
    fail_numeric("no irreducible polynomial found");  // cannot happen
}

/// Full dlog table by power enumeration. Budgeted.
inline std::pair<std::vector<i64>, std::vector<u64>> build_dlog(const FieldCtx& ctx,
                                                                u64 max_enumeration) {
    u64 n = ctx.unit_count();
    if (n > max_enumeration)
        fail_budget("dlog table for " + std::to_string(n) +
                    " units exceeds enumeration budget " + std::to_string(max_enumeration));
    std::vector<i64> table(ctx.size(), -1);
    std::vector<u64> exp_table(n, 0);
    FieldElem cur = ctx.one();
    for (u64 k = 0; k < n; ++k) {
        u64 idx = ctx.index_of(cur);
        if (table[idx] != -1) fail_numeric("generator order check failed while building dlog");
        table[idx] = static_cast<i64>(k);
        exp_table[k] = idx;
        cur = ctx.mul(cur, ctx.generator);
    }
    if (!(cur == ctx.one())) fail_numeric("generator does not have full order");
    return {std::move(table), std::move(exp_table)};
}

/// Smallest unit (by canonical element index) of full multiplicative order.
inline FieldElem find_generator(const FieldCtx& ctx) {
    u64 n = ctx.unit_count();
    if (n == 1) return ctx.one();
    auto factors = prime_factors(n);
    for (u64 idx = 2; idx < ctx.size(); ++idx) {
        FieldElem a = ctx.elem_at(idx);
        bool full = true;
        for (u64 q : factors) {
            if (ctx.pow(a, n / q) == ctx.one()) {
                full = false;
                break;
            }
        }
        if (full) return a;
    }
    fail_numeric("no generator found");  // cannot happen for a field
}

inline std::shared_ptr<const FieldCtx> make_field_with_poly(u64 p, u32 d,
                                                            const std::vector<u64>& min_poly,
                                                            bool with_dlog, const Budget& budget) {
    require_prime(p);
    if (d < 1 || d > kMaxDeg) fail_invalid("extension degree out of range");
    if (min_poly.size() != d + 1 || min_poly[d] != 1)
        fail_invalid("modulus polynomial must be monic of degree d");
    if (!ppoly::is_irreducible(min_poly, p)) fail_invalid("modulus polynomial is reducible");
    auto ctx = std::make_shared<FieldCtx>();
    ctx->p = p;
    ctx->d = d;
    ctx->min_poly = min_poly;
    for (auto& c : ctx->min_poly) c %= p;
    ctx->finish_setup();
    if (d >= 2) ctx->omega.c[1] = 1;  // w itself; for d = 1 omega is 0 (root of x)
    ctx->generator = find_generator(*ctx);
    if (with_dlog) {
        auto [t, e] = build_dlog(*ctx, budget.max_enumeration);
        ctx->dlog = std::move(t);
        ctx->exp_table = std::move(e);
    }
    return ctx;
}

/// Factory: deterministic modulus via find_irreducible, canonical generator,
/// dlog tables when requested (default) and within budget.
inline std::shared_ptr<const FieldCtx> make_field(u64 p, u32 d, u64 seed = 0,
                                                  bool with_dlog = true,
                                                  const Budget& budget = default_budget()) {
    return make_field_with_poly(p, d, find_irreducible(p, d, seed), with_dlog, budget);
}

inline std::shared_ptr<const FieldCtx> field_from_json(const json& j, bool with_dlog = true,
                                                       const Budget& budget = default_budget()) {
    auto ctx = make_field_with_poly(j.at("p").get<u64>(), j.at("d").get<u32>(),
                                    j.at("min_poly").get<std::vector<u64>>(), with_dlog, budget);
    auto gen = j.at("generator").get<std::vector<u32>>();
    FieldElem g;
    std::copy(gen.begin(), gen.end(), g.c.begin());
    if (!(g == ctx->generator)) fail_invalid("generator in JSON is not the canonical generator");
    return ctx;
}

}  // namespace charsum
