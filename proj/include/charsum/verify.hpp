#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "charsum/energy.hpp"
#include "charsum/report.hpp"
#include "charsum/weil.hpp"

namespace charsum {

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::vector<std::string> lines;  // one per sub-check or counterexample
    json details;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            lines.push_back("FAIL: " + what);
        }
    }
};

/// Threshold table: rho''_d against the reference values .375/.417/.438/.447
/// for d = 3..6 (tolerance 1e-3), plus monotonicity and the < 1/2 bound up to
/// d = 12. Note: the d = 6 reference entry is inconsistent with the closed
/// form itself (which gives 0.450965); that sub-check fails by design rather
/// than bending the formula.
inline SuiteResult verify_thresholds() {
    SuiteResult r;
    r.name = "thresholds";
    const std::map<u32, double> reference{{3, 0.375}, {4, 0.417}, {5, 0.438}, {6, 0.447}};
    for (const auto& [d, expected] : reference) {
        double got = rho_threshold(d);
        std::ostringstream os;
        os << "rho(" << d << ") = " << got << " vs reference " << expected;
        r.lines.push_back(os.str());
        r.check(std::abs(got - expected) <= 1e-3,
                "rho(" + std::to_string(d) + ") = " + fmt_double(got) + " differs from " +
                    fmt_double(expected) + " by more than 1e-3");
        r.details["rho_" + std::to_string(d)] = got;
    }
    double prev = 0;
    for (u32 d = 3; d <= 12; ++d) {
        double v = rho_threshold(d);
        r.check(v < 0.5, "rho(" + std::to_string(d) + ") not below 1/2");
        r.check(v > prev, "rho not increasing at d=" + std::to_string(d));
        prev = v;
    }
    return r;
}

namespace detail {

inline std::vector<std::pair<std::string, RingPtr>> verification_rings() {
    std::vector<std::pair<std::string, RingPtr>> rings;
    for (u64 p : {5ull, 7ull, 11ull, 13ull})
        rings.emplace_back("F" + std::to_string(p), make_ring({make_field(p, 1)}));
    for (u64 p : {3ull, 5ull})
        rings.emplace_back("F" + std::to_string(p * p), make_ring({make_field(p, 2)}));
    rings.emplace_back("F3xF5", make_ring({make_field(3, 1), make_field(5, 1)}));
    return rings;
}

inline std::vector<RingElem> random_subset(const RingCtx& ring, size_t size, Lcg64& rng) {
    std::vector<RingElem> out;
    for (size_t i = 0; i < size; ++i) {
        RingElem e(ring.arity());
        for (size_t c = 0; c < ring.arity(); ++c)
            e[c] = ring.comp(c).elem_at(rng.below(ring.comp(c).size()));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace detail

/// Parseval and orthogonality: 100 random subsets per ring context with the
/// exact mass identity (1e-6), and every nontrivial character summing to zero
/// over the full unit group (1e-9).
inline SuiteResult verify_parseval() {
    SuiteResult r;
    r.name = "parseval";
    u64 subsets_checked = 0;
    for (const auto& [name, ring] : detail::verification_rings()) {
        u64 n = ring->unit_count();
        for (u64 flat = 1; flat < n; ++flat) {
            CharIndex chi{ring->tuple_of(flat)};
            KahanSum s;
            for (u64 u = 0; u < n; ++u)
                s.add(char_eval(chi, ring->unit_from_dlogs(ring->tuple_of(u)), *ring));
            r.check(std::abs(s.sum) < 1e-9, name + ": orthogonality broken at chi flat index " +
                                                std::to_string(flat));
        }
        Lcg64 rng(0xC0FFEEull + n);
        for (int rep = 0; rep < 100; ++rep) {
            auto A = detail::random_subset(*ring, 1 + rng.below(24), rng);
            auto sums = all_char_sums(A, *ring);
            std::vector<u64> mult(n, 0);
            for (const auto& a : A)
                if (auto dl = ring->unit_dlogs(a)) ++mult[ring->flat_of(*dl)];
            double rhs = 0;
            for (u64 m : mult) rhs += static_cast<double>(m) * static_cast<double>(m);
            rhs *= static_cast<double>(n);
            double lhs = 0;
            for (const auto& v : sums) lhs += std::norm(v);
            r.check(std::abs(lhs - rhs) <= 1e-6,
                    name + " rep " + std::to_string(rep) + ": Parseval off by " +
                        fmt_double(std::abs(lhs - rhs)));
            ++subsets_checked;
        }
    }
    r.details["subsets"] = subsets_checked;
    return r;
}

/// Energy identity: randomized set tuples across the verification rings;
/// energy_spectral must equal energy_brute exactly after rounding (the
/// sub-1e-6 residual requirement is enforced inside energy_spectral).
inline SuiteResult verify_energy_identity(u64 min_cases = 200) {
    SuiteResult r;
    r.name = "energy-identity";
    u64 cases = 0;
    auto rings = detail::verification_rings();
    Lcg64 rng(0xE4E26Full);
    while (cases < min_cases) {
        for (const auto& [name, ring] : rings) {
            size_t nsets = 1 + rng.below(3);
            std::vector<std::vector<RingElem>> sets;
            for (size_t i = 0; i < nsets; ++i)
                sets.push_back(detail::random_subset(*ring, 1 + rng.below(8), rng));
            u64 brute = energy_brute(sets, *ring).value;
            u64 spectral = energy_spectral(sets, *ring).value;
            r.check(brute == spectral, name + " case " + std::to_string(cases) + ": brute " +
                                           std::to_string(brute) + " != spectral " +
                                           std::to_string(spectral));
            ++cases;
        }
    }
    r.details["cases"] = cases;
    return r;
}

/// Weil exhaustive: primes to 31 with monic f up to degree 3, plus the
/// extension suite; zero violations allowed.
inline SuiteResult verify_weil() {
    SuiteResult r;
    r.name = "weil";
    auto prime = weil_prime_suite(31);
    r.details["prime_suite"] = prime.to_json();
    r.check(prime.violations == 0,
            "prime suite reported " + std::to_string(prime.violations) + " violations");
    auto ext = weil_extension_suite();
    r.details["extension_suite"] = ext.to_json();
    r.check(ext.violations == 0,
            "extension suite reported " + std::to_string(ext.violations) + " violations");
    r.lines.push_back("prime cells: " + std::to_string(prime.cells) +
                      ", admissible: " + std::to_string(prime.admissible));
    r.lines.push_back("extension cells: " + std::to_string(ext.cells) +
                      ", admissible: " + std::to_string(ext.admissible));
    return r;
}

/// Cubic classification: exhaustive over p in {5,7,11,13}; reconstruction must
/// be exact and the case partition total and disjoint.
inline SuiteResult verify_forms() {
    SuiteResult r;
    r.name = "forms";
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        u64 nondeg = 0;
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b)
                for (u64 c = 0; c < p; ++c)
                    if (discriminant({a, b, c}, p) != 0) ++nondeg;
        auto forms = enumerate_nondegenerate(p);
        r.check(forms.size() == nondeg, "p=" + std::to_string(p) + ": enumeration count mismatch");
        std::map<FormCase, u64> counts;
        for (const auto& cls : forms) {
            ++counts[cls.kind];
            CubicForm back = reconstruct(cls);
            bool same = back.a == cls.form.a && back.b == cls.form.b && back.c == cls.form.c;
            r.check(same, "p=" + std::to_string(p) + ": reconstruction mismatch at (a,b,c)=(" +
                              std::to_string(cls.form.a) + "," + std::to_string(cls.form.b) + "," +
                              std::to_string(cls.form.c) + ")");
            if (!same) break;
        }
        u64 total = 0;
        for (const auto& [k, v] : counts) total += v;
        r.check(total == nondeg, "p=" + std::to_string(p) + ": case partition not total");
        r.details["p" + std::to_string(p)] =
            json{{"nondegenerate", nondeg},
                 {"irreducible", counts[FormCase::Irreducible]},
                 {"linear_times_quadratic", counts[FormCase::LinearTimesQuadratic]},
                 {"split", counts[FormCase::Split]}};
    }
    return r;
}

/// Representation counts: rep_count_max(Q, Q0) at p in {11,13}, d=3, s=0.4,
/// both exponent rules, against a direct product-enumeration oracle that
/// avoids the dlog path; the histogram mass must equal |Q| |Q0|.
inline SuiteResult verify_repcount() {
    SuiteResult r;
    r.name = "repcount";
    for (u64 p : {11ull, 13ull}) {
        auto ctx = make_field(p, 3);
        auto ring = make_ring({ctx});
        for (auto rule : {ExponentRule::SetDef, ExponentRule::ProofCard}) {
            std::vector<RingElem> Q, Q0;
            for (const auto& e : box_elements(q_box(*ctx, 0.4), *ctx)) Q.push_back({e});
            for (const auto& e : box_elements(q0_box(*ctx, 0.4, rule), *ctx)) Q0.push_back({e});
            auto got = rep_count_max(Q, Q0, *ring, true);
            // direct oracle: multiply through the field, key by element index
            std::map<u64, u64> oracle;
            for (const auto& a : Q)
                for (const auto& b : Q0) {
                    if (a[0].is_zero() || b[0].is_zero()) continue;
                    ++oracle[ctx->index_of(ctx->mul(a[0], b[0]))];
                }
            u64 expect_max = 0;
            for (const auto& [key, m] : oracle) expect_max = std::max(expect_max, m);
            std::string tag = "p=" + std::to_string(p) + " rule=" + to_string(rule);
            r.check(got.max_count == expect_max, tag + ": max mismatch");
            u64 mass = 0;
            for (const auto& [key, m] : *got.histogram) mass += m;
            r.check(mass == static_cast<u64>(Q.size()) * Q0.size(), tag + ": histogram mass");
            r.check(got.histogram->size() == oracle.size(), tag + ": support size");
            r.details[tag] = json{{"Q", Q.size()},
                                  {"Q0", Q0.size()},
                                  {"max_count", got.max_count},
                                  {"argmax", ctx->elem_hex(got.argmax[0])}};
        }
    }
    return r;
}

inline SuiteResult run_suite(const std::string& name) {
    if (name == "thresholds") return verify_thresholds();
    if (name == "parseval") return verify_parseval();
    if (name == "energy-identity") return verify_energy_identity();
    if (name == "weil") return verify_weil();
    if (name == "forms") return verify_forms();
    if (name == "repcount") return verify_repcount();
    fail_invalid("unknown suite '" + name +
                 "'; expected one of energy-identity, weil, parseval, forms, repcount, thresholds");
}

}  // namespace charsum
