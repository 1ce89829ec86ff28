#pragma once

// Independent brute-force oracles used only by tests. These deliberately avoid
// the library's fast paths: discrete logs are found by scanning powers of the
// generator, transforms are O(N^2) direct sums, energies are full nested tuple
// loops, and polynomial facts come from trial division.

#include <complex>
#include <map>
#include <vector>

#include "charsum/common.hpp"
#include "charsum/field.hpp"

namespace oracle {

using charsum::cd;
using charsum::i64;
using charsum::u32;
using charsum::u64;
using charsum::FieldCtx;
using charsum::FieldElem;

/// Discrete log by scanning generator powers; never touches ctx.dlog.
inline i64 dlog_scan(const FieldCtx& ctx, const FieldElem& a) {
    if (a.is_zero()) return -1;
    FieldElem cur = ctx.one();
    for (u64 k = 0; k < ctx.unit_count(); ++k) {
        if (cur == a) return static_cast<i64>(k);
        cur = ctx.mul(cur, ctx.generator);
    }
    charsum::fail_numeric("dlog_scan: element not in the cyclic group");
}

/// chi_k(a) for a single-field character, via dlog_scan.
inline cd char_eval_scan(const FieldCtx& ctx, u64 k, const FieldElem& a) {
    i64 j = dlog_scan(ctx, a);
    if (j < 0) return {0.0, 0.0};
    u64 n = ctx.unit_count();
    double ang = 2.0 * std::acos(-1.0) * static_cast<double>((k % n) * static_cast<u64>(j) % n) /
                 static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

/// Irreducibility by trial division against every monic polynomial of lower
/// degree.
inline bool irreducible_by_trial_division(const std::vector<u64>& f, u64 p) {
    using namespace charsum::ppoly;
    int d = deg(f);
    if (d < 1) return false;
    for (int k = 1; k < d; ++k) {
        u64 count = 1;
        for (int i = 0; i < k; ++i) count *= p;
        for (u64 m = 0; m < count; ++m) {
            Poly g(static_cast<size_t>(k) + 1, 0);
            u64 mm = m;
            for (int i = 0; i < k; ++i) {
                g[i] = mm % p;
                mm /= p;
            }
            g[static_cast<size_t>(k)] = 1;
            if (mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

/// Extended gcd in F_p[x]; returns g and u with u*a == g (mod f). Used as an
/// independent route to inverses in F_p[x]/(f).
inline charsum::ppoly::Poly inv_by_egcd(const charsum::ppoly::Poly& a,
                                        const charsum::ppoly::Poly& f, u64 p) {
    using namespace charsum::ppoly;
    Poly r0 = f, r1 = mod(a, f, p);
    Poly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        // quotient of r0 by r1 (r1 made monic on the fly)
        u64 lead_inv = charsum::invmod(r1.back(), p);
        Poly q;
        Poly rem = r0;
        trim(rem);
        while (deg(rem) >= deg(r1)) {
            int shift = deg(rem) - deg(r1);
            u64 cq = charsum::mulmod(rem.back(), lead_inv, p);
            if (static_cast<int>(q.size()) <= shift) q.resize(shift + 1, 0);
            q[shift] = charsum::addmod(q[shift], cq, p);
            for (int i = 0; i <= deg(r1); ++i)
                rem[i + shift] = charsum::submod(rem[i + shift], charsum::mulmod(cq, r1[i], p), p);
            trim(rem);
        }
        Poly s2 = s0;
        Poly qs1 = mul(q, s1, p);
        if (s2.size() < qs1.size()) s2.resize(qs1.size(), 0);
        for (size_t i = 0; i < qs1.size(); ++i) s2[i] = charsum::submod(s2[i], qs1[i], p);
        trim(s2);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd (nonzero scalar when a invertible)
    if (deg(r0) != 0) charsum::fail_numeric("inv_by_egcd: not invertible");
    u64 ginv = charsum::invmod(r0[0], p);
    Poly res = s0;
    for (u64& c : res) c = charsum::mulmod(c, ginv, p);
    return mod(res, f, p);
}

/// Direct O(N^2) discrete Fourier transform, X_k = sum_j a_j e^(sign*2*pi*i*jk/N).
inline std::vector<cd> dft_direct(const std::vector<cd>& a, int sign) {
    size_t n = a.size();
    std::vector<cd> out(n);
    double tau = 2.0 * std::acos(-1.0);
    for (size_t k = 0; k < n; ++k) {
        cd s{0, 0};
        for (size_t j = 0; j < n; ++j) {
            double ang = sign * tau * static_cast<double>((j * k) % n) / static_cast<double>(n);
            s += a[j] * cd{std::cos(ang), std::sin(ang)};
        }
        out[k] = s;
    }
    return out;
}

}  // namespace oracle
