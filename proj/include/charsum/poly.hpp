#pragma once

#include <utility>
#include <vector>

#include "charsum/field.hpp"

namespace charsum {

/// Dense polynomial over a field context, ascending coefficients, trailing
/// zeros trimmed (the zero polynomial is the empty vector).
struct FPoly {
    std::vector<FieldElem> c;

    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; }
};

namespace fpoly {

inline void trim(FPoly& f) {
    while (!f.c.empty() && f.c.back().is_zero()) f.c.pop_back();
}

/// Polynomial from base-field scalar coefficients (ascending).
inline FPoly from_scalars(const FieldCtx& ctx, const std::vector<u64>& coeffs) {
    FPoly f;
    for (u64 v : coeffs) f.c.push_back(ctx.scalar(v));
    trim(f);
    return f;
}

inline FPoly monomial(const FieldCtx& ctx, u32 degree, const FieldElem& lead) {
    FPoly f;
    f.c.assign(degree + 1, ctx.zero());
    f.c[degree] = lead;
    trim(f);
    return f;
}

inline FieldElem eval(const FPoly& f, const FieldElem& x, const FieldCtx& ctx) {
    FieldElem v = ctx.zero();
    for (size_t i = f.c.size(); i-- > 0;) v = ctx.add(ctx.mul(v, x), f.c[i]);
    return v;
}

inline FPoly mul(const FPoly& a, const FPoly& b, const FieldCtx& ctx) {
    if (a.is_zero() || b.is_zero()) return {};
    FPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, ctx.zero());
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = ctx.add(r.c[i + j], ctx.mul(a.c[i], b.c[j]));
    trim(r);
    return r;
}

inline FPoly scale(const FPoly& f, const FieldElem& s, const FieldCtx& ctx) {
    FPoly r = f;
    for (auto& x : r.c) x = ctx.mul(x, s);
    trim(r);
    return r;
}

inline FPoly make_monic(const FPoly& f, const FieldCtx& ctx) {
    if (f.is_zero()) return f;
    return scale(f, ctx.inv(f.c.back()), ctx);
}

/// Quotient and remainder with the divisor made monic internally.
inline std::pair<FPoly, FPoly> divmod(const FPoly& a, const FPoly& b, const FieldCtx& ctx) {
    if (b.is_zero()) fail_invalid("polynomial division by zero");
    FPoly rem = a;
    trim(rem);
    FPoly quot;
    FieldElem lead_inv = ctx.inv(b.c.back());
    if (rem.deg() >= b.deg()) quot.c.assign(rem.deg() - b.deg() + 1, ctx.zero());
    while (rem.deg() >= b.deg()) {
        int shift = rem.deg() - b.deg();
        FieldElem q = ctx.mul(rem.c.back(), lead_inv);
        quot.c[shift] = ctx.add(quot.c[shift], q);
        for (int i = 0; i <= b.deg(); ++i)
            rem.c[i + shift] = ctx.sub(rem.c[i + shift], ctx.mul(q, b.c[i]));
        trim(rem);
    }
    trim(quot);
    return {quot, rem};
}

inline FPoly gcd(FPoly a, FPoly b, const FieldCtx& ctx) {
    trim(a);
    trim(b);
    while (!b.is_zero()) {
        FPoly r = divmod(a, b, ctx).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, ctx);
}

inline FPoly derivative(const FPoly& f, const FieldCtx& ctx) {
    FPoly r;
    for (size_t i = 1; i < f.c.size(); ++i) r.c.push_back(ctx.smul(i % ctx.p, f.c[i]));
    trim(r);
    return r;
}

/// For f with f' = 0 (so f(x) = g(x^p)): the unique g with g(x)^p ... = f via
/// coefficient p-th roots a -> a^(p^(d-1)).
inline FPoly pth_root_decompose(const FPoly& f, const FieldCtx& ctx) {
    FPoly g;
    u64 root_exp = 1;
    for (u32 i = 0; i + 1 < ctx.d; ++i) root_exp *= ctx.p;  // p^(d-1)
    for (size_t i = 0; i < f.c.size(); i += ctx.p) {
        g.c.push_back(ctx.pow(f.c[i], root_exp));
    }
    trim(g);
    return g;
}

/// Squarefree decomposition in characteristic p: monic pairwise-coprime g_i
/// with f = lc * prod g_i^{e_i}. Works for any degree; exercised here up to
/// the small degrees the Weil suites need.
inline std::vector<std::pair<FPoly, u32>> squarefree_decompose(const FPoly& f_in,
                                                               const FieldCtx& ctx) {
    std::vector<std::pair<FPoly, u32>> out;
    FPoly f = make_monic(f_in, ctx);
    if (f.deg() < 1) return out;
    FPoly df = derivative(f, ctx);
    if (df.is_zero()) {
        FPoly g = pth_root_decompose(f, ctx);
        for (auto& [h, e] : squarefree_decompose(g, ctx)) out.emplace_back(h, e * ctx.p);
        return out;
    }
    FPoly c = gcd(f, df, ctx);
    FPoly w = divmod(f, c, ctx).first;
    u32 i = 1;
    while (w.deg() > 0) {
        FPoly y = gcd(w, c, ctx);
        FPoly z = divmod(w, y, ctx).first;
        if (z.deg() > 0) out.emplace_back(z, i);
        w = std::move(y);
        c = divmod(c, w, ctx).first;
        ++i;
    }
    if (c.deg() > 0) {
        FPoly g = pth_root_decompose(c, ctx);
        for (auto& [h, e] : squarefree_decompose(g, ctx)) out.emplace_back(h, e * ctx.p);
    }
    return out;
}

/// Number of distinct roots of f in the algebraic closure: the degree of the
/// radical, read off the squarefree decomposition.
inline u32 distinct_root_count(const FPoly& f, const FieldCtx& ctx) {
    u32 m = 0;
    for (const auto& [g, e] : squarefree_decompose(f, ctx)) m += static_cast<u32>(g.deg());
    return m;
}

/// f is a dd-th power in the closure's polynomial ring iff every squarefree
/// multiplicity is divisible by dd (constants are dd-th powers there).
inline bool is_power_in_closure(const FPoly& f, u32 dd, const FieldCtx& ctx) {
    if (f.deg() < 1) return true;
    for (const auto& [g, e] : squarefree_decompose(f, ctx))
        if (e % dd != 0) return false;
    return true;
}

inline json to_json(const FPoly& f, const FieldCtx& ctx) {
    json coeffs = json::array();
    for (const auto& x : f.c) coeffs.push_back(ctx.elem_hex(x));
    return json{{"coeffs", coeffs}, {"deg", f.deg()}};
}

}  // namespace fpoly

}  // namespace charsum
