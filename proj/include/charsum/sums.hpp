#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/cubic.hpp"
#include "charsum/energy.hpp"
#include "charsum/sets.hpp"

namespace charsum {

/// One evaluated character sum with its trivial bound and full provenance.
struct SumRecord {
    cd value{0, 0};
    double magnitude = 0;
    double trivial_bound = 0;
    double ratio = 0;
    u64 zero_args = 0;  // grid points where chi(0) = 0 entered the sum
    json params;

    json to_json() const {
        json j = params;
        j["re"] = value.real();
        j["im"] = value.imag();
        j["magnitude"] = magnitude;
        j["trivial_bound"] = trivial_bound;
        j["ratio"] = ratio;
        j["zero_args"] = zero_args;
        return j;
    }
};

namespace detail {

inline SumRecord finish_record(cd sum, u64 zeros, double bound, json params) {
    SumRecord r;
    r.value = sum;
    r.magnitude = std::abs(sum);
    r.trivial_bound = bound;
    r.ratio = bound > 0 ? r.magnitude / bound : 0.0;
    r.zero_args = zeros;
    r.params = std::move(params);
    return r;
}

/// sum over x in xs, y in ys of table[index(x + omega y)], exploiting the fact
/// that adding the scalar x only moves coefficient 0.
inline std::pair<cd, u64> grid_eval(const FieldCtx& ctx, const std::vector<cd>& table,
                                    const FieldElem& omega, const std::vector<u64>& xs,
                                    const std::vector<u64>& ys) {
    cd s{0, 0};
    u64 zeros = 0;
    for (u64 y : ys) {
        FieldElem wy = ctx.smul(y, omega);
        u64 base = ctx.index_of(wy);
        u64 c0 = wy.c[0];
        for (u64 x : xs) {
            u64 nc0 = c0 + x;
            if (nc0 >= ctx.p) nc0 -= ctx.p;
            u64 idx = base - c0 + nc0;
            if (idx == 0) ++zeros;
            s += table[idx];
        }
    }
    return {s, zeros};
}

}  // namespace detail

/// Theorem-level grid sum sum_{x in I} sum_{y in J} chi(x + omega y) with
/// omega outside the base field. The trivial character is admitted for
/// calibration and flagged in the record.
inline SumRecord grid_sum(const FieldCtx& ctx, const FieldElem& omega, const IntervalSpec& I,
                          const IntervalSpec& J, u64 chi_k) {
    if (ctx.d < 2) fail_invalid("grid_sum needs an extension field");
    if (ctx.in_base_field(omega))
        fail_invalid("omega lies in the base field; the theorem needs omega outside F_p");
    auto xs = interval_residues(I, ctx.p);
    auto ys = interval_residues(J, ctx.p);
    auto table = char_table(ctx, chi_k);
    auto [sum, zeros] = detail::grid_eval(ctx, table, omega, xs, ys);
    json params{{"kind", "grid"},
                {"p", ctx.p},
                {"d", ctx.d},
                {"omega", ctx.elem_hex(omega)},
                {"I", I.to_json()},
                {"J", J.to_json()},
                {"chi", chi_k % ctx.unit_count()},
                {"trivial_chi", chi_k % ctx.unit_count() == 0},
                {"restriction_trivial", is_restriction_trivial(chi_k, ctx)}};
    return detail::finish_record(sum, zeros,
                                 static_cast<double>(xs.size()) * static_cast<double>(ys.size()),
                                 std::move(params));
}

/// Codimension-one sublattice sum over d-1 interval coordinates:
/// sum chi(x_0 + x_1 w + ... + x_{d-2} w^{d-2}). omega defaults to the
/// context's basis root and must generate the field over F_p.
inline SumRecord sublattice_sum(const FieldCtx& ctx, std::span<const IntervalSpec> boxes,
                                u64 chi_k, std::optional<FieldElem> omega = std::nullopt,
                                const Budget& budget = default_budget()) {
    if (ctx.d < 2) fail_invalid("sublattice_sum needs an extension field");
    if (boxes.size() != static_cast<size_t>(ctx.d) - 1)
        fail_invalid("expected exactly d-1 = " + std::to_string(ctx.d - 1) + " boxes, got " +
                     std::to_string(boxes.size()));
    FieldElem w = omega.value_or(ctx.omega);
    if (ctx.min_poly_degree(w) != ctx.d)
        fail_invalid("omega does not generate F_{p^d} over F_p (minimal degree " +
                     std::to_string(ctx.min_poly_degree(w)) + ")");
    LatticeBox box;
    box.intervals.assign(boxes.begin(), boxes.end());
    auto elems = box_elements(box, ctx, omega, budget);
    auto table = char_table(ctx, chi_k);
    KahanSum s;
    u64 zeros = 0;
    for (const auto& e : elems) {
        u64 idx = ctx.index_of(e);
        if (idx == 0) ++zeros;
        s.add(table[idx]);
    }
    json jboxes = json::array();
    for (const auto& b : boxes) jboxes.push_back(b.to_json());
    json params{{"kind", "sublattice"},
                {"p", ctx.p},
                {"d", ctx.d},
                {"omega", ctx.elem_hex(w)},
                {"boxes", jboxes},
                {"chi", chi_k % ctx.unit_count()},
                {"trivial_chi", chi_k % ctx.unit_count() == 0},
                {"restriction_trivial", is_restriction_trivial(chi_k, ctx)}};
    return detail::finish_record(s.sum, zeros, static_cast<double>(elems.size()),
                                 std::move(params));
}

/// Interval-length threshold of the sublattice theorem:
/// rho''_d = (1460 - 1000 d + sqrt(10^6 d^2 - 1.96*10^6 d + 4.9*10^5)) / 960.
inline double rho_threshold(u32 d) {
    if (d < 3) fail_invalid("rho threshold is defined for d >= 3");
    double dd = static_cast<double>(d);
    double disc = 1000000.0 * dd * dd - 1960000.0 * dd + 490000.0;
    return (1460.0 - 1000.0 * dd + std::sqrt(disc)) / 960.0;
}

/// Character sum of a non-degenerate binary cubic form over an interval grid,
/// tagged with the form's factorization case. chi must be non-principal.
inline SumRecord cubic_form_sum(u64 p, const CubicForm& f, const IntervalSpec& I,
                                const IntervalSpec& J, u64 chi_k,
                                const Budget& budget = default_budget()) {
    require_prime(p);
    if (chi_k % (p - 1) == 0) fail_invalid("cubic_form_sum needs a non-principal character");
    auto cls = classify(f, p, nullptr, budget);  // rejects degenerate forms
    auto ctx = make_field(p, 1, 0, true, budget);
    auto xs = interval_residues(I, p);
    auto ys = interval_residues(J, p);
    auto table = char_table(*ctx, chi_k);
    KahanSum s;
    u64 zeros = 0;
    for (u64 x : xs)
        for (u64 y : ys) {
            u64 v = eval_form(f, x, y, p);
            if (v == 0) ++zeros;
            s.add(table[v]);
        }
    double sqrt_p = std::sqrt(static_cast<double>(p));
    json params{{"kind", "cubic-form"},
                {"p", p},
                {"form", f.to_json(p)},
                {"case", to_string(cls.kind)},
                {"I", I.to_json()},
                {"J", J.to_json()},
                {"chi", chi_k % (p - 1)},
                {"trivial_chi", false},
                // the Case 2 machinery assumes |I|,|J| < p^(1/2); flagged, not enforced here
                {"sqrt_range_ok", static_cast<double>(xs.size()) < sqrt_p &&
                                      static_cast<double>(ys.size()) < sqrt_p}};
    return detail::finish_record(s.sum, zeros,
                                 static_cast<double>(xs.size()) * static_cast<double>(ys.size()),
                                 std::move(params));
}

// ---------------------------------------------------------------------------
// Uniformity scans over omega.

enum class OmegaMode { All, Sample };

struct ChiSelector {
    enum class Kind { Index, Order, RestrictionTrivial, Trivial } kind = Kind::Index;
    u64 value = 0;

    /// "trivial" | "order=M" | "restriction-trivial" | a bare exponent.
    static ChiSelector parse(const std::string& s) {
        ChiSelector sel;
        if (s == "trivial") {
            sel.kind = Kind::Trivial;
        } else if (s == "restriction-trivial") {
            sel.kind = Kind::RestrictionTrivial;
        } else if (s.rfind("order=", 0) == 0) {
            sel.kind = Kind::Order;
            sel.value = std::stoull(s.substr(6));
            if (sel.value < 2) fail_invalid("character order selector needs order >= 2");
        } else {
            char* end = nullptr;
            sel.kind = Kind::Index;
            sel.value = std::strtoull(s.c_str(), &end, 10);
            if (!end || *end != '\0') fail_invalid("bad chi selector: " + s);
        }
        return sel;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::Trivial: return "trivial";
            case Kind::RestrictionTrivial: return "restriction-trivial";
            case Kind::Order: return "order=" + std::to_string(value);
            case Kind::Index: return "index=" + std::to_string(value);
        }
        return "?";
    }

    /// Smallest exponent realizing the selector in the given field.
    u64 resolve(const FieldCtx& ctx) const {
        u64 n = ctx.unit_count();
        switch (kind) {
            case Kind::Trivial: return 0;
            case Kind::Index:
                if (value >= n) fail_invalid("chi index out of range");
                return value;
            case Kind::Order:
                if (n % value != 0)
                    fail_invalid("no character of order " + std::to_string(value) + " in a group of size " +
                                 std::to_string(n));
                return n / value;
            case Kind::RestrictionTrivial:
                if (ctx.d < 2) fail_invalid("restriction-trivial selector needs d >= 2");
                return ctx.p - 1;  // smallest nontrivial multiple of p-1
        }
        fail_invalid("unreachable selector kind");
    }
};

struct ScanStats {
    u64 chi_k = 0;
    bool restriction_trivial = false;
    u64 count = 0;
    double max_ratio = 0;
    double median_ratio = 0;
    u64 argmax_omega = 0;  // canonical element index
};

struct ScanReport {
    json params;
    std::vector<ScanStats> per_chi;
    // magnitude rows kept only when requested (ALL scans at large p are bulky)
    std::vector<std::pair<u64, double>> rows;  // (omega index, ratio) for the first chi
};

/// Per-omega grid-sum ratios for omega ranging over F_{p^d} \ F_p (ALL) or a
/// seeded LCG sample. Deterministic: omega order is canonical index order and
/// sampling replays bit-exactly for equal seeds.
inline ScanReport omega_uniformity_scan(const FieldCtx& ctx, const IntervalSpec& I,
                                        const IntervalSpec& J,
                                        const std::vector<ChiSelector>& selectors, OmegaMode mode,
                                        u64 sample_size = 0, u64 seed = 0, bool keep_rows = false,
                                        const Budget& budget = default_budget()) {
    if (ctx.d < 2) fail_invalid("omega scan needs an extension field");
    u64 total_omega = ctx.size() - ctx.p;
    std::vector<u64> omegas;
    if (mode == OmegaMode::All) {
        if (total_omega > budget.max_enumeration)
            fail_budget("ALL-omega scan over " + std::to_string(total_omega) +
                        " elements exceeds budget " + std::to_string(budget.max_enumeration));
        omegas.reserve(total_omega);
        for (u64 idx = ctx.p; idx < ctx.size(); ++idx) omegas.push_back(idx);
    } else {
        if (sample_size == 0) fail_invalid("sample mode needs a positive sample size");
        Lcg64 rng(seed);
        omegas.reserve(sample_size);
        for (u64 i = 0; i < sample_size; ++i) omegas.push_back(ctx.p + rng.below(total_omega));
    }
    auto xs = interval_residues(I, ctx.p);
    auto ys = interval_residues(J, ctx.p);
    double bound = static_cast<double>(xs.size()) * static_cast<double>(ys.size());

    ScanReport report;
    report.params = json{{"p", ctx.p},
                         {"d", ctx.d},
                         {"I", I.to_json()},
                         {"J", J.to_json()},
                         {"mode", mode == OmegaMode::All ? "all" : "sample"},
                         {"sample_size", sample_size},
                         {"seed", seed},
                         {"n_omega", omegas.size()}};
    bool first_chi = true;
    for (const auto& sel : selectors) {
        u64 k = sel.resolve(ctx);
        auto table = char_table(ctx, k);
        ScanStats st;
        st.chi_k = k;
        st.restriction_trivial = is_restriction_trivial(k, ctx);
        std::vector<double> ratios;
        ratios.reserve(omegas.size());
        for (u64 widx : omegas) {
            FieldElem w = ctx.elem_at(widx);
            auto [sum, zeros] = detail::grid_eval(ctx, table, w, xs, ys);
            (void)zeros;
            double ratio = bound > 0 ? std::abs(sum) / bound : 0.0;
            if (ratio > st.max_ratio) {
                st.max_ratio = ratio;
                st.argmax_omega = widx;
            }
            ratios.push_back(ratio);
            if (first_chi && keep_rows) report.rows.emplace_back(widx, ratio);
        }
        st.count = ratios.size();
        if (!ratios.empty()) {
            auto mid = ratios.begin() + (ratios.size() - 1) / 2;  // lower median
            std::nth_element(ratios.begin(), mid, ratios.end());
            st.median_ratio = *mid;
        }
        report.per_chi.push_back(st);
        first_chi = false;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Burgess amplification decomposition.

struct BurgessDecomp {
    std::vector<u64> phi;  // histogram over F_{p^d} by canonical element index
    u64 alpha_mass = 0;    // sum Phi
    u64 beta_sq = 0;       // sum Phi^2
    double gamma_moment = 0;
    std::vector<u32> k_s;
    double ks_sum = 0;
    bool window_vacuous = false;
    u64 skipped_nonunit = 0;  // tuples dropped for a non-unit denominator
    double claim_lhs = 0, claim_rhs = 0;
    bool claim_holds = false;
    json params;

    json to_json() const {
        json sparse = json::array();
        for (u64 idx = 0; idx < phi.size(); ++idx)
            if (phi[idx]) sparse.push_back(json{{"mu", idx}, {"count", phi[idx]}});
        json j = params;
        j["alpha_mass"] = alpha_mass;
        j["beta_sq"] = beta_sq;
        j["gamma_moment"] = gamma_moment;
        j["k_s"] = k_s;
        j["ks_sum"] = ks_sum;
        j["window_vacuous"] = window_vacuous;
        j["skipped_nonunit"] = skipped_nonunit;
        j["claim"] = json{{"lhs", claim_lhs}, {"rhs", claim_rhs}, {"holds", claim_holds}};
        j["phi"] = sparse;
        return j;
    }
};

/// Greedy descending harmonic fill of the k_s window
/// (6/5 rho - 9/20 - 2 eps, 6/5 rho - 9/20 - eps): repeatedly add the largest
/// 1/k (k >= 2) that keeps the sum below the upper edge, until it clears the
/// lower edge. Empty (vacuous) when the window sits at or below zero.
inline std::pair<std::vector<u32>, bool> select_ks(double rho, double eps) {
    if (eps <= 0) fail_invalid("eps must be positive");
    double lo = 1.2 * rho - 0.45 - 2.0 * eps;
    double hi = 1.2 * rho - 0.45 - eps;
    if (hi <= 0) return {{}, true};
    std::vector<u32> ks;
    double sum = 0;
    for (u64 k = 2; k <= (1u << 20) && sum <= lo; ++k) {
        while (sum + 1.0 / static_cast<double>(k) < hi) {
            sum += 1.0 / static_cast<double>(k);
            ks.push_back(static_cast<u32>(k));
            if (sum > lo) break;
        }
    }
    if (sum <= lo || sum >= hi) fail_invalid("no k_s multiset found in the window");
    if (sum >= 1.0) fail_invalid("k_s harmonic sum must stay below 1");
    return {ks, false};
}

/// The amplification bookkeeping: Phi(mu) counts tuples
/// (x-tuple in Q, s-tuple in prod I_s, q in Q_0) with
/// mu = (sum x_i w^i) / (prod s_j * q); alpha, beta^2 and the gamma moment are
/// computed exactly, and the proof's beta-vs-trivial comparison is evaluated
/// numerically at tau = 0 (informational).
inline BurgessDecomp burgess_decompose(const FieldPtr& ctx, double rho, double eps,
                                       std::vector<IntervalSpec> jboxes, u64 chi_k, u32 k,
                                       ExponentRule rule = ExponentRule::SetDef,
                                       const Budget& budget = default_budget()) {
    if (!(rho > 0 && rho < 1)) fail_invalid("rho must lie in (0, 1)");
    if (k < 1) fail_invalid("Holder exponent k must be >= 1");
    const FieldCtx& F = *ctx;
    if (F.d < 3) fail_invalid("burgess decomposition needs d >= 3");
    if (jboxes.empty()) jboxes.assign(F.d - 1, IntervalSpec{1, floor_pow(F.p, rho)});
    if (jboxes.size() != static_cast<size_t>(F.d) - 1)
        fail_invalid("expected d-1 J boxes");

    BurgessDecomp out;
    auto [ks, vacuous] = select_ks(rho, eps);
    out.k_s = ks;
    out.window_vacuous = vacuous;
    for (u32 kv : ks) out.ks_sum += 1.0 / static_cast<double>(kv);

    LatticeBox qbox;
    qbox.intervals = jboxes;
    auto q_elems = box_elements(qbox, F, std::nullopt, budget);
    auto q0 = q0_box(F, rho, rule);
    auto q0_elems = box_elements(q0, F, std::nullopt, budget);
    IntervalSpec I{1, floor_pow(F.p, eps / 2.0)};

    // s-tuple denominators as scalar products over the I_s intervals
    std::vector<u64> s_products{1 % F.p};
    for (u32 kv : ks) {
        IntervalSpec is{1, floor_pow(F.p, 1.0 / static_cast<double>(kv))};
        auto rs = interval_residues(is, F.p);
        std::vector<u64> next;
        next.reserve(mul_ov(s_products.size(), rs.size()));
        for (u64 sp : s_products)
            for (u64 r : rs) next.push_back(mulmod(sp, r, F.p));
        s_products = std::move(next);
    }

    u64 work = mul_ov(mul_ov(q_elems.size(), q0_elems.size()), s_products.size());
    if (work > budget.max_work) fail_budget("burgess enumeration exceeds budget");

    u64 n = F.unit_count();
    out.phi.assign(F.size(), 0);
    // numerator dlogs (or zero marker)
    std::vector<i64> num_dlogs;
    num_dlogs.reserve(q_elems.size());
    for (const auto& e : q_elems) num_dlogs.push_back(F.dlog_of(e));
    for (const auto& q0e : q0_elems) {
        i64 dq = F.dlog_of(q0e);
        for (u64 sp : s_products) {
            if (sp == 0 || dq < 0) {
                out.skipped_nonunit += num_dlogs.size();
                continue;
            }
            i64 ds = F.dlog_of(F.scalar(sp));
            u64 den = (static_cast<u64>(dq) + static_cast<u64>(ds)) % n;
            for (i64 dn : num_dlogs) {
                if (dn < 0) {
                    ++out.phi[0];  // zero numerator: mu = 0
                } else {
                    u64 mu = (static_cast<u64>(dn) + n - den) % n;
                    ++out.phi[F.exp_table[mu]];
                }
            }
        }
    }
    for (u64 m : out.phi) {
        out.alpha_mass += m;
        out.beta_sq += m * m;
    }

    // gamma moment: sum over all mu of |sum_{t in I} chi(mu + t)|^{2k}
    auto table = char_table(F, chi_k);
    auto ts = interval_residues(I, F.p);
    KahanReal gamma;
    for (u64 mu = 0; mu < F.size(); ++mu) {
        u64 c0 = mu % F.p;
        cd inner{0, 0};
        for (u64 t : ts) {
            u64 nc0 = c0 + t;
            if (nc0 >= F.p) nc0 -= F.p;
            inner += table[mu - c0 + nc0];
        }
        double n2 = std::norm(inner);
        double pw = 1.0;
        for (u32 i = 0; i < k; ++i) pw *= n2;
        gamma.add(pw);
    }
    out.gamma_moment = gamma.sum;

    double p = static_cast<double>(F.p);
    double qsz = static_cast<double>(q_elems.size());
    double q0sz = static_cast<double>(q0_elems.size());
    out.claim_lhs = qsz * q0sz * std::pow(p, (19.0 - 4.0 * rho) / 10.0 * out.ks_sum);
    out.claim_rhs = qsz * qsz * q0sz * q0sz *
                    std::pow(p, 2.0 * out.ks_sum - static_cast<double>(F.d) / 2.0);
    out.claim_holds = out.claim_lhs < out.claim_rhs;

    json jb = json::array();
    for (const auto& b : jboxes) jb.push_back(b.to_json());
    out.params = json{{"kind", "burgess"},
                      {"p", F.p},
                      {"d", F.d},
                      {"rho", rho},
                      {"eps", eps},
                      {"k", k},
                      {"chi", chi_k % n},
                      {"rule", to_string(rule)},
                      {"J_boxes", jb},
                      {"Q", q_elems.size()},
                      {"Q0", q0_elems.size()},
                      {"I", I.to_json()},
                      {"s_tuples", s_products.size()}};
    return out;
}

}  // namespace charsum
