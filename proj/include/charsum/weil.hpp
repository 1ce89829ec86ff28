#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/poly.hpp"
#include "charsum/sets.hpp"

namespace charsum {

/// One verified instance of a Weil-type bound.
struct WeilCheck {
    u64 q = 0;          // size of the summation field
    u64 chi_index = 0;  // exponent against the canonical generator (of the base field)
    u64 chi_order = 0;  // dd
    json f;
    u32 m = 0;          // distinct roots of f in the closure
    cd sum{0, 0};
    double sum_mag = 0;
    double bound = 0;
    bool admissible = false;  // f is not a dd-th power in the closure
    bool holds = true;        // admissible => sum_mag <= bound + 1e-9

    json to_json() const {
        return json{{"q", q},           {"chi", chi_index},     {"chi_order", chi_order},
                    {"f", f},           {"m", m},               {"re", sum.real()},
                    {"im", sum.imag()}, {"magnitude", sum_mag}, {"bound", bound},
                    {"admissible", admissible}, {"holds", holds}};
    }
};

inline constexpr double kWeilTol = 1e-9;

/// |sum_{x in F_q} chi(f(x))| <= (m-1) sqrt(q) for nontrivial chi of order dd
/// and admissible f (not a dd-th power in the closure).
inline WeilCheck weil_field_check(const FieldCtx& ctx, u64 chi_k, const FPoly& f,
                                  const Budget& budget = default_budget()) {
    u64 n = ctx.unit_count();
    if (chi_k % n == 0) fail_invalid("weil_field_check needs a nontrivial character");
    if (f.deg() < 1) fail_invalid("weil_field_check needs deg f >= 1");
    if (ctx.size() > budget.max_enumeration) fail_budget("field scan exceeds budget");
    WeilCheck out;
    out.q = ctx.size();
    out.chi_index = chi_k % n;
    out.chi_order = n / std::gcd(n, chi_k % n);
    out.f = fpoly::to_json(f, ctx);
    out.m = fpoly::distinct_root_count(f, ctx);
    out.admissible = !fpoly::is_power_in_closure(f, static_cast<u32>(out.chi_order), ctx);
    auto table = char_table(ctx, chi_k);
    KahanSum s;
    for (u64 idx = 0; idx < ctx.size(); ++idx)
        s.add(table[ctx.index_of(fpoly::eval(f, ctx.elem_at(idx), ctx))]);
    out.sum = s.sum;
    out.sum_mag = std::abs(s.sum);
    out.bound = (static_cast<double>(out.m) - 1.0) * std::sqrt(static_cast<double>(out.q));
    out.holds = !out.admissible || out.sum_mag <= out.bound + kWeilTol;
    return out;
}

/// Norm-composed variant: |sum_{x in F_{q^n}} chi(N(f(x)))| <= (m-1) q^{n/2},
/// chi a nontrivial character of the base field F_q, f over F_q, N the norm
/// from the degree-n extension down to F_q.
inline WeilCheck weil_norm_check(const FieldCtx& base, u32 n, u64 chi_k, const FPoly& f,
                                 const Budget& budget = default_budget()) {
    u64 nb = base.unit_count();
    if (chi_k % nb == 0) fail_invalid("weil_norm_check needs a nontrivial base character");
    if (f.deg() < 1) fail_invalid("weil_norm_check needs deg f >= 1");
    if (n < 1) fail_invalid("extension degree must be >= 1");
    auto big = make_field(base.p, base.d * n, 0, true, budget);
    if (big->size() > budget.max_enumeration) fail_budget("extension scan exceeds budget");

    // Embed F_q into F_{q^n}: send the base root to a root of base.min_poly in
    // the big field (smallest in canonical order), then map coefficientwise.
    FieldElem root = big->zero();
    bool found = false;
    FPoly base_min;  // base.min_poly lifted to the big field as scalars
    for (u64 c : base.min_poly) base_min.c.push_back(big->scalar(c));
    fpoly::trim(base_min);
    for (u64 idx = 0; idx < big->size(); ++idx) {
        FieldElem cand = big->elem_at(idx);
        if (fpoly::eval(base_min, cand, *big).is_zero()) {
            root = cand;
            found = true;
            break;
        }
    }
    if (!found) fail_numeric("base minimal polynomial has no root in the extension");
    auto embed = [&](const FieldElem& a) {
        FieldElem acc = big->zero();
        FieldElem pw = big->one();
        for (u32 i = 0; i < base.d; ++i) {
            acc = big->add(acc, big->smul(a.c[i], pw));
            pw = big->mul(pw, root);
        }
        return acc;
    };
    // reverse lookup for norm values (they land in the embedded base field)
    std::unordered_map<u64, u64> down;  // big elem index -> base elem index
    for (u64 idx = 0; idx < base.size(); ++idx)
        down[big->index_of(embed(base.elem_at(idx)))] = idx;

    WeilCheck out;
    out.q = base.size();
    out.chi_index = chi_k % nb;
    out.chi_order = nb / std::gcd(nb, chi_k % nb);
    out.f = fpoly::to_json(f, base);
    out.m = fpoly::distinct_root_count(f, base);
    out.admissible = !fpoly::is_power_in_closure(f, static_cast<u32>(out.chi_order), base);

    FPoly fbig;
    for (const auto& c : f.c) fbig.c.push_back(embed(c));
    fpoly::trim(fbig);
    u64 norm_exp = (big->unit_count()) / nb;  // (q^n - 1)/(q - 1)
    auto table = char_table(base, chi_k);
    KahanSum s;
    for (u64 idx = 0; idx < big->size(); ++idx) {
        FieldElem v = fpoly::eval(fbig, big->elem_at(idx), *big);
        if (v.is_zero()) continue;  // chi(N(0)) = chi(0) = 0
        FieldElem nv = big->pow(v, norm_exp);
        auto it = down.find(big->index_of(nv));
        if (it == down.end()) fail_numeric("norm value missing from the embedded base field");
        s.add(table[it->second]);
    }
    out.sum = s.sum;
    out.sum_mag = std::abs(s.sum);
    out.bound = (static_cast<double>(out.m) - 1.0) *
                std::pow(static_cast<double>(out.q), static_cast<double>(n) / 2.0);
    out.holds = !out.admissible || out.sum_mag <= out.bound + kWeilTol;
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive suites.

struct WeilSuiteResult {
    u64 cells = 0;        // (chi, f) pairs examined
    u64 admissible = 0;
    u64 violations = 0;
    std::vector<json> violation_records;  // expected empty
    json to_json() const {
        return json{{"cells", cells},
                    {"admissible", admissible},
                    {"violations", violations},
                    {"records", violation_records}};
    }
};

/// Every prime p <= pmax, every nontrivial chi mod p, every monic f of degree
/// 1..max_deg: the field bound must hold on every admissible cell.
inline WeilSuiteResult weil_prime_suite(u64 pmax, u32 max_deg = 3,
                                        const Budget& budget = default_budget()) {
    WeilSuiteResult res;
    for (u64 p = 3; p <= pmax; ++p) {  // F_2^* is trivial: no nontrivial characters
        if (!is_prime(p)) continue;
        auto ctx = make_field(p, 1, 0, true, budget);
        for (u32 deg = 1; deg <= max_deg; ++deg) {
            u64 count = 1;
            for (u32 i = 0; i < deg; ++i) count *= p;
            for (u64 mcode = 0; mcode < count; ++mcode) {
                std::vector<u64> coeffs(deg + 1, 0);
                u64 mm = mcode;
                for (u32 i = 0; i < deg; ++i) {
                    coeffs[i] = mm % p;
                    mm /= p;
                }
                coeffs[deg] = 1;
                FPoly f = fpoly::from_scalars(*ctx, coeffs);
                for (u64 k = 1; k < p - 1; ++k) {
                    auto check = weil_field_check(*ctx, k, f, budget);
                    ++res.cells;
                    if (check.admissible) ++res.admissible;
                    if (!check.holds) {
                        ++res.violations;
                        res.violation_records.push_back(check.to_json());
                    }
                }
            }
        }
    }
    return res;
}

/// q in {3, 5, 7}, n = 2, all nontrivial base characters, all monic f over F_q
/// of degree 1..max_deg.
inline WeilSuiteResult weil_extension_suite(u32 max_deg = 2,
                                            const Budget& budget = default_budget()) {
    WeilSuiteResult res;
    for (u64 q : {3ull, 5ull, 7ull}) {
        auto base = make_field(q, 1, 0, true, budget);
        for (u32 deg = 1; deg <= max_deg; ++deg) {
            u64 count = 1;
            for (u32 i = 0; i < deg; ++i) count *= q;
            for (u64 mcode = 0; mcode < count; ++mcode) {
                std::vector<u64> coeffs(deg + 1, 0);
                u64 mm = mcode;
                for (u32 i = 0; i < deg; ++i) {
                    coeffs[i] = mm % q;
                    mm /= q;
                }
                coeffs[deg] = 1;
                FPoly f = fpoly::from_scalars(*base, coeffs);
                for (u64 k = 1; k < q - 1; ++k) {
                    auto check = weil_norm_check(*base, 2, k, f, budget);
                    ++res.cells;
                    if (check.admissible) ++res.admissible;
                    if (!check.holds) {
                        ++res.violations;
                        res.violation_records.push_back(check.to_json());
                    }
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// The averaged moment of the appendix lemma.

struct WlmResult {
    double moment_root = 0;  // (sum_{a,b,c} |inner|^{2r})^(1/2r)
    double bound = 0;        // r |K|^(1/2) p^(3/(2r)) + |K| p^(3/(4r)), constant 1
    u64 terms = 0;

    json to_json() const {
        return json{{"moment_root", moment_root}, {"bound", bound}, {"terms", terms}};
    }
};

/// (sum_{a,b,c in F_p} |sum_{t in K} chi((t+a)(t^2+bt+c))|^{2r})^(1/2r),
/// by direct enumeration, with the lemma's bound at implied constant 1.
inline WlmResult wlm_moment(u64 p, u64 chi_k, const IntervalSpec& K, u32 r,
                            const Budget& budget = default_budget()) {
    require_prime(p);
    if (r < 1) fail_invalid("moment order r must be >= 1");
    auto ctx = make_field(p, 1, 0, true, budget);
    if (chi_k % ctx->unit_count() == 0) fail_invalid("wlm_moment needs a nontrivial character");
    auto ts = interval_residues(K, p);
    if (mul_ov(mul_ov(p, p), mul_ov(p, ts.size())) > budget.max_work)
        fail_budget("wlm enumeration p^3 |K| exceeds budget");
    auto table = char_table(*ctx, chi_k);
    KahanReal total;
    for (u64 a = 0; a < p; ++a)
        for (u64 b = 0; b < p; ++b)
            for (u64 c = 0; c < p; ++c) {
                cd inner{0, 0};
                for (u64 t : ts) {
                    u64 lin = addmod(t, a, p);
                    u64 quad = addmod(mulmod(t, addmod(t, b, p), p), c, p);
                    inner += table[mulmod(lin, quad, p)];
                }
                double n2 = std::norm(inner);
                double pw = 1.0;
                for (u32 i = 0; i < r; ++i) pw *= n2;
                total.add(pw);
            }
    WlmResult out;
    out.terms = p * p * p;
    out.moment_root = std::pow(total.sum, 1.0 / (2.0 * static_cast<double>(r)));
    double kk = static_cast<double>(ts.size());
    double pd = static_cast<double>(p);
    out.bound = static_cast<double>(r) * std::sqrt(kk) * std::pow(pd, 3.0 / (2.0 * r)) +
                kk * std::pow(pd, 3.0 / (4.0 * r));
    return out;
}

/// Exact count of the lemma's "bad" tuples (t_1..t_{2r}) in K^{2r}: those whose
/// character polynomial prod_{i<=r}(X+t_i) prod_{i>r}(X+t_i)^(p-2) is a dd-th
/// power in the closure, i.e. dd divides every root multiplicity
/// n1(v) + (p-2) n2(v). Reported against the claimed |K|^r.
struct WlmBadTuples {
    u64 bad = 0;
    u64 total = 0;
    double claimed_bound = 0;  // |K|^r
    bool within_claim = false;

    json to_json() const {
        return json{{"bad", bad}, {"total", total}, {"claimed_bound", claimed_bound},
                    {"within_claim", within_claim}};
    }
};

inline WlmBadTuples wlm_bad_tuples(u64 p, u64 chi_order, const IntervalSpec& K, u32 r,
                                   const Budget& budget = default_budget()) {
    require_prime(p);
    if (chi_order < 2) fail_invalid("character order must exceed 1");
    auto ts = interval_residues(K, p);
    u64 total = 1;
    for (u32 i = 0; i < 2 * r; ++i) total = mul_ov(total, ts.size());
    if (total > budget.max_enumeration) fail_budget("bad-tuple enumeration exceeds budget");
    WlmBadTuples out;
    out.total = total;
    std::vector<u32> idx(2 * r, 0);
    std::unordered_map<u64, u64> mult;
    for (u64 step = 0; step < total; ++step) {
        mult.clear();
        for (u32 i = 0; i < 2 * r; ++i) {
            u64 v = ts[idx[i]];
            mult[v] += i < r ? 1 : p - 2;
        }
        bool bad = true;
        for (const auto& [v, m] : mult)
            if (m % chi_order != 0) {
                bad = false;
                break;
            }
        if (bad) ++out.bad;
        for (u32 ax = 2 * r; ax-- > 0;) {
            if (++idx[ax] < ts.size()) break;
            idx[ax] = 0;
        }
    }
    out.claimed_bound = std::pow(static_cast<double>(ts.size()), static_cast<double>(r));
    out.within_claim = static_cast<double>(out.bad) <= out.claimed_bound;
    return out;
}

}  // namespace charsum
