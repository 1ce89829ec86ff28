#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/sets.hpp"

namespace charsum {

enum class EnergyMethod { Brute, Spectral };

inline std::string to_string(EnergyMethod m) {
    return m == EnergyMethod::Brute ? "brute" : "spectral";
}

/// Exact multiplicative-energy count with provenance.
struct EnergyCount {
    u64 value = 0;
    EnergyMethod method = EnergyMethod::Brute;
    json ring;
    json sets;

    json to_json() const {
        return json{{"value", value}, {"method", to_string(method)}, {"ring", ring}, {"sets", sets}};
    }
};

struct RepCountResult {
    u64 max_count = 0;
    RingElem argmax;
    u64 argmax_key = 0;
    u64 unit_pairs = 0;  // histogram mass
    std::optional<std::map<u64, u64>> histogram;  // elem_key -> count
};

namespace detail {

inline json ring_desc(const RingCtx& ring) {
    json comps = json::array();
    for (size_t i = 0; i < ring.arity(); ++i)
        comps.push_back(json{{"p", ring.comp(i).p}, {"d", ring.comp(i).d}});
    return json{{"components", comps}, {"units", ring.unit_count()}};
}

/// Unit flat-index product (dlog addition componentwise).
inline u64 flat_mul(const RingCtx& ring, u64 fa, u64 fb) {
    auto ta = ring.tuple_of(fa);
    auto tb = ring.tuple_of(fb);
    for (size_t i = 0; i < ta.size(); ++i) ta[i] = (ta[i] + tb[i]) % ring.unit_sizes()[i];
    return ring.flat_of(ta);
}

/// Multiplicity vector over unit flat indices of the n-fold product multiset
/// of the given sets (unit factors only). Budgeted by total pairwise work.
inline std::vector<u64> product_multiset(const std::vector<const std::vector<RingElem>*>& sets,
                                         const RingCtx& ring, const Budget& budget) {
    u64 n = ring.unit_count();
    if (n > budget.max_enumeration)
        fail_budget("unit histogram of size " + std::to_string(n) + " exceeds budget " +
                    std::to_string(budget.max_enumeration));
    std::vector<u64> counts(n, 0);
    if (sets.empty()) return counts;
    u64 work = 0;
    bool first = true;
    for (const auto* A : sets) {
        // unit flat indices of this factor set
        std::vector<u64> flats;
        flats.reserve(A->size());
        for (const auto& a : *A) {
            auto dl = ring.unit_dlogs(a);
            if (dl) flats.push_back(ring.flat_of(*dl));
        }
        if (first) {
            for (u64 f : flats) ++counts[f];
            work += flats.size();
            first = false;
            continue;
        }
        std::vector<u64> next(n, 0);
        for (u64 j = 0; j < n; ++j) {
            u64 m = counts[j];
            if (!m) continue;
            work += flats.size();
            if (work > budget.max_work)
                fail_budget("product-multiset work exceeds budget " + std::to_string(budget.max_work));
            for (u64 f : flats) next[flat_mul(ring, j, f)] += m;
        }
        counts = std::move(next);
    }
    return counts;
}

inline json sets_desc(const std::vector<const std::vector<RingElem>*>& sets) {
    json out = json::array();
    for (const auto* A : sets) out.push_back(json{{"size", A->size()}});
    return out;
}

}  // namespace detail

/// E(A_1, ..., A_n) as the exact collision count of the product multiset:
/// sum_eta m(eta)^2 with m(eta) = #{(a_1..a_n) : prod a_i = eta, a_i units}.
inline EnergyCount energy_brute_views(const std::vector<const std::vector<RingElem>*>& sets,
                                      const RingCtx& ring,
                                      const Budget& budget = default_budget()) {
    EnergyCount out;
    out.method = EnergyMethod::Brute;
    out.ring = detail::ring_desc(ring);
    out.sets = detail::sets_desc(sets);
    if (sets.empty()) return out;
    auto counts = detail::product_multiset(sets, ring, budget);
    u64 e = 0;
    for (u64 m : counts) e += m * m;
    out.value = e;
    return out;
}

inline EnergyCount energy_brute(const std::vector<std::vector<RingElem>>& sets, const RingCtx& ring,
                                const Budget& budget = default_budget()) {
    std::vector<const std::vector<RingElem>*> ptrs;
    for (const auto& s : sets) ptrs.push_back(&s);
    return energy_brute_views(ptrs, ring, budget);
}

/// Character-side energy: (1/|R^*|) sum_chi prod_i |S_{A_i}(chi)|^2, rounded to
/// the nearest integer. The pre-rounding residual must stay below 1e-6; it is
/// a numerical-integrity failure otherwise.
inline EnergyCount energy_spectral_views(const std::vector<const std::vector<RingElem>*>& sets,
                                         const RingCtx& ring,
                                         const Budget& budget = default_budget()) {
    EnergyCount out;
    out.method = EnergyMethod::Spectral;
    out.ring = detail::ring_desc(ring);
    out.sets = detail::sets_desc(sets);
    if (sets.empty()) return out;
    u64 n = ring.unit_count();
    std::vector<std::vector<cd>> sums;
    sums.reserve(sets.size());
    for (const auto* A : sets) sums.push_back(all_char_sums(*A, ring, budget));
    KahanReal acc;
    for (u64 flat = 0; flat < n; ++flat) {
        double prod = 1.0;
        for (const auto& s : sums) prod *= std::norm(s[flat]);
        acc.add(prod);
    }
    double e = acc.sum / static_cast<double>(n);
    double rounded = std::round(e);
    if (std::abs(e - rounded) >= 1e-6)
        fail_numeric("spectral energy residual " + std::to_string(std::abs(e - rounded)) +
                     " exceeds 1e-6");
    out.value = static_cast<u64>(rounded);
    return out;
}

inline EnergyCount energy_spectral(const std::vector<std::vector<RingElem>>& sets,
                                   const RingCtx& ring, const Budget& budget = default_budget()) {
    std::vector<const std::vector<RingElem>*> ptrs;
    for (const auto& s : sets) ptrs.push_back(&s);
    return energy_spectral_views(ptrs, ring, budget);
}

/// Histogram of products over unit pairs of A x B with deterministic argmax
/// (smallest canonical element key among ties).
inline RepCountResult rep_count_max(const std::vector<RingElem>& A, const std::vector<RingElem>& B,
                                    const RingCtx& ring, bool with_histogram = false,
                                    const Budget& budget = default_budget()) {
    u64 n = ring.unit_count();
    if (n > budget.max_enumeration) fail_budget("rep-count histogram exceeds budget");
    if (mul_ov(A.size(), B.size()) > budget.max_work) fail_budget("rep-count work exceeds budget");
    std::vector<u64> counts(n, 0);
    std::vector<u64> fa, fb;
    for (const auto& a : A)
        if (auto dl = ring.unit_dlogs(a)) fa.push_back(ring.flat_of(*dl));
    for (const auto& b : B)
        if (auto dl = ring.unit_dlogs(b)) fb.push_back(ring.flat_of(*dl));
    for (u64 x : fa)
        for (u64 y : fb) ++counts[detail::flat_mul(ring, x, y)];

    RepCountResult out;
    out.unit_pairs = static_cast<u64>(fa.size()) * static_cast<u64>(fb.size());
    bool found = false;
    for (u64 flat = 0; flat < n; ++flat) {
        u64 m = counts[flat];
        if (!m) continue;
        RingElem e = ring.unit_from_dlogs(ring.tuple_of(flat));
        u64 key = ring.elem_key(e);
        if (!found || m > out.max_count || (m == out.max_count && key < out.argmax_key)) {
            out.max_count = m;
            out.argmax = e;
            out.argmax_key = key;
            found = true;
        }
    }
    if (with_histogram) {
        out.histogram.emplace();
        for (u64 flat = 0; flat < n; ++flat)
            if (counts[flat])
                (*out.histogram)[ring.elem_key(ring.unit_from_dlogs(ring.tuple_of(flat)))] =
                    counts[flat];
    }
    return out;
}

/// d(n) against the classical bound exp(log n / log log n).
struct DivisorBoundResult {
    u64 divisors = 0;
    double bound = 0;
    bool pass = false;
};

inline DivisorBoundResult divisor_bound_check(u64 n) {
    if (n < 3) fail_invalid("divisor bound needs n >= 3");
    DivisorBoundResult r;
    r.divisors = divisor_count(n);
    r.bound = std::exp(std::log(static_cast<double>(n)) / std::log(std::log(static_cast<double>(n))));
    r.pass = static_cast<double>(r.divisors) <= r.bound;
    return r;
}

/// E(F_p, Q) for the sigma-box Q, with the reported bound d p^(1+s(d-1)) log p
/// (natural log; informational, the inequality is asymptotic).
struct EnergyVsBound {
    EnergyCount count;
    double paper_bound = 0;
    double ratio = 0;

    json to_json() const {
        json j = count.to_json();
        j["paper_bound"] = paper_bound;
        j["ratio"] = ratio;
        return j;
    }
};

inline EnergyVsBound energy_fp_q(const FieldPtr& ctx, double sigma,
                                 const Budget& budget = default_budget()) {
    auto ring = make_ring({ctx});
    std::vector<RingElem> fp;
    for (u64 t = 0; t < ctx->p; ++t) fp.push_back({ctx->scalar(t)});
    std::vector<RingElem> q;
    for (const auto& e : box_elements(q_box(*ctx, sigma), *ctx, std::nullopt, budget))
        q.push_back({e});
    EnergyVsBound out;
    out.count = energy_brute_views({&fp, &q}, *ring, budget);
    double p = static_cast<double>(ctx->p);
    out.paper_bound = static_cast<double>(ctx->d) *
                      std::pow(p, 1.0 + sigma * (static_cast<double>(ctx->d) - 1.0)) * std::log(p);
    out.ratio = out.paper_bound > 0 ? static_cast<double>(out.count.value) / out.paper_bound : 0;
    out.count.sets = json{{"Fp", fp.size()}, {"Q", q.size()}, {"sigma", sigma}};
    return out;
}

/// E(R, Delta), the solution count of the coordinatewise system
/// r * (t,t,t) = r' * (t',t',t'), with the reporting bound p log p |I||J|.
inline EnergyVsBound energy_r_delta(const TupleSet& R, const TupleSet& Delta,
                                    const Budget& budget = default_budget()) {
    if (R.ring.get() != Delta.ring.get()) fail_invalid("R and Delta live in different rings");
    EnergyVsBound out;
    out.count = energy_brute_views({&R.elems, &Delta.elems}, *R.ring, budget);
    double p = static_cast<double>(R.ring->comp(0).p);
    double isz = R.params.at("X").at("length").get<double>();
    double jsz = R.params.at("Y").at("length").get<double>();
    out.paper_bound = p * std::log(p) * isz * jsz;
    out.ratio = out.paper_bound > 0 ? static_cast<double>(out.count.value) / out.paper_bound : 0;
    out.count.sets = json{{"R", R.elems.size()}, {"Delta", Delta.elems.size()}};
    return out;
}

/// Translate a tuple set coordinatewise.
inline std::vector<RingElem> translate(const std::vector<RingElem>& T, const RingElem& zeta,
                                       const RingCtx& ring) {
    std::vector<RingElem> out;
    out.reserve(T.size());
    for (const auto& t : T) {
        RingElem e(ring.arity());
        for (size_t i = 0; i < ring.arity(); ++i) e[i] = ring.comp(i).add(t[i], zeta[i]);
        out.push_back(std::move(e));
    }
    return out;
}

/// max_rho #{(z1 + zeta, z2) in (T + zeta) x T : rho = (z1 + zeta) z2}.
inline RepCountResult tmax_repcount(const TupleSet& T, const RingElem& zeta,
                                    bool with_histogram = false,
                                    const Budget& budget = default_budget()) {
    auto shifted = translate(T.elems, zeta, *T.ring);
    return rep_count_max(shifted, T.elems, *T.ring, with_histogram, budget);
}

}  // namespace charsum
