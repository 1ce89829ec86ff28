#include <gtest/gtest.h>

#include "charsum/character.hpp"
#include "oracles.hpp"

using namespace charsum;

namespace {

std::vector<RingElem> random_multiset(const RingCtx& ring, size_t size, Lcg64& rng) {
    std::vector<RingElem> A;
    for (size_t i = 0; i < size; ++i) {
        RingElem e(ring.arity());
        for (size_t c = 0; c < ring.arity(); ++c)
            e[c] = ring.comp(c).elem_at(rng.below(ring.comp(c).size()));
        A.push_back(std::move(e));
    }
    return A;
}

TEST(DftAny, MatchesDirectOracle) {
    Lcg64 rng(5);
    for (size_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 12u, 16u, 17u, 31u, 48u, 64u, 65u, 97u, 128u,
                     342u, 1000u, 1024u}) {
        std::vector<cd> a(n);
        for (auto& x : a)
            x = cd{static_cast<double>(rng.below(2001)) / 1000.0 - 1.0,
                   static_cast<double>(rng.below(2001)) / 1000.0 - 1.0};
        for (int sign : {+1, -1}) {
            auto fast = dft_any(a, sign);
            auto slow = oracle::dft_direct(a, sign);
            double worst = 0;
            for (size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
            EXPECT_LT(worst, 1e-9 * static_cast<double>(n) + 1e-12) << "n=" << n;
        }
    }
}

TEST(DftAny, BudgetError) {
    std::vector<cd> a(100);
    EXPECT_THROW(dft_any(a, +1, 50), Error);
}

TEST(DftMulti, MatchesNestedDirect) {
    Lcg64 rng(9);
    std::vector<u64> dims{3, 4, 5};
    std::vector<cd> data(60);
    for (auto& x : data) x = cd{static_cast<double>(rng.below(100)) / 10.0, 0.0};
    auto expect = data;
    // direct triple DFT
    std::vector<cd> out(60);
    const double tau = 2.0 * std::acos(-1.0);
    for (u64 k0 = 0; k0 < 3; ++k0)
        for (u64 k1 = 0; k1 < 4; ++k1)
            for (u64 k2 = 0; k2 < 5; ++k2) {
                cd s{0, 0};
                for (u64 j0 = 0; j0 < 3; ++j0)
                    for (u64 j1 = 0; j1 < 4; ++j1)
                        for (u64 j2 = 0; j2 < 5; ++j2) {
                            double ang = tau * (static_cast<double>(j0 * k0) / 3.0 +
                                                static_cast<double>(j1 * k1) / 4.0 +
                                                static_cast<double>(j2 * k2) / 5.0);
                            s += expect[(j0 * 4 + j1) * 5 + j2] * cd{std::cos(ang), std::sin(ang)};
                        }
                out[(k0 * 4 + k1) * 5 + k2] = s;
            }
    dft_multi(data, dims, +1);
    for (size_t i = 0; i < 60; ++i) EXPECT_LT(std::abs(data[i] - out[i]), 1e-9);
}

TEST(CharEval, QuadraticCharacterMod7) {
    auto f7 = make_field(7, 1);
    auto ring = make_ring({f7});
    CharIndex quad{{3}};  // order 6/gcd(6,3) = 2
    EXPECT_EQ(ring->char_order(quad), 2u);
    // Euler's criterion: chi(a) = a^((p-1)/2) as +-1
    for (u64 a = 1; a < 7; ++a) {
        double expect = powmod(a, 3, 7) == 1 ? 1.0 : -1.0;
        cd got = char_eval(quad, {f7->scalar(a)}, *ring);
        EXPECT_NEAR(got.real(), expect, 1e-12) << "a=" << a;
        EXPECT_NEAR(got.imag(), 0.0, 1e-12);
    }
    EXPECT_NEAR(char_eval(quad, {f7->scalar(2)}, *ring).real(), 1.0, 1e-12);
    // trivial character: 1 on units
    CharIndex triv{{0}};
    EXPECT_NEAR(char_eval(triv, {f7->scalar(5)}, *ring).real(), 1.0, 1e-12);
    // chi(0) = 0 for every character
    for (u64 k = 0; k < 6; ++k)
        EXPECT_EQ(char_eval(CharIndex{{k}}, {f7->zero()}, *ring), (cd{0.0, 0.0}));
}

TEST(CharEval, Multiplicativity) {
    auto ctx = make_field(11, 2);
    auto ring = make_ring({ctx});
    Lcg64 rng(31);
    u64 n = ctx->unit_count();
    for (int i = 0; i < 1000; ++i) {
        u64 k = rng.below(n);
        FieldElem a = ctx->elem_at(ctx->exp_table[rng.below(n)]);
        FieldElem b = ctx->elem_at(ctx->exp_table[rng.below(n)]);
        cd lhs = char_eval(CharIndex{{k}}, {ctx->mul(a, b)}, *ring);
        cd rhs = char_eval(CharIndex{{k}}, {a}, *ring) * char_eval(CharIndex{{k}}, {b}, *ring);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12);
    }
}

TEST(CharEval, AgreesWithScanOracle) {
    auto ctx = make_field(5, 2);
    Lcg64 rng(41);
    for (int i = 0; i < 200; ++i) {
        u64 k = rng.below(ctx->unit_count());
        FieldElem a = ctx->elem_at(rng.below(ctx->size()));
        EXPECT_LT(std::abs(char_eval_field(*ctx, k, a) - oracle::char_eval_scan(*ctx, k, a)),
                  1e-12);
    }
}

TEST(CharTable, MatchesPointwiseEval) {
    auto ctx = make_field(7, 2);
    for (u64 k : {0ull, 1ull, 5ull, 24ull}) {
        auto table = char_table(*ctx, k);
        for (u64 idx = 0; idx < ctx->size(); ++idx)
            EXPECT_LT(std::abs(table[idx] - char_eval_field(*ctx, k, ctx->elem_at(idx))), 1e-12);
    }
}

TEST(RestrictionTrivial, ClosedFormMatchesDirectEvaluation) {
    auto ctx = make_field(3, 2);  // N = 8
    EXPECT_TRUE(is_restriction_trivial(0, *ctx));
    EXPECT_TRUE(is_restriction_trivial(2, *ctx));
    EXPECT_FALSE(is_restriction_trivial(1, *ctx));
    // direct evaluation over F_3^* = {1, 2}
    for (u64 k = 0; k < 8; ++k) {
        bool all_one = true;
        for (u64 a = 1; a < 3; ++a) {
            cd v = char_eval_field(*ctx, k, ctx->scalar(a));
            if (std::abs(v - cd{1.0, 0.0}) > 1e-9) all_one = false;
        }
        EXPECT_EQ(is_restriction_trivial(k, *ctx), all_one) << "k=" << k;
    }
}

TEST(AllCharSums, Fixtures) {
    auto f7 = make_field(7, 1);
    auto ring = make_ring({f7});

    // A = {1}: every character sums to 1
    auto s1 = all_char_sums({{f7->one()}}, *ring);
    for (const auto& v : s1) EXPECT_LT(std::abs(v - cd{1.0, 0.0}), 1e-9);

    // A = F_7^*: orthogonality concentrates everything on the trivial entry
    std::vector<RingElem> units;
    for (u64 a = 1; a < 7; ++a) units.push_back({f7->scalar(a)});
    auto s2 = all_char_sums(units, *ring);
    EXPECT_LT(std::abs(s2[0] - cd{6.0, 0.0}), 1e-9);
    for (u64 k = 1; k < 6; ++k) EXPECT_LT(std::abs(s2[k]), 1e-9);

    // A = {1, 2}: Parseval mass N*|A| = 12
    auto s3 = all_char_sums({{f7->one()}, {f7->scalar(2)}}, *ring);
    double mass = 0;
    for (const auto& v : s3) mass += std::norm(v);
    EXPECT_NEAR(mass, 12.0, 1e-9);
}

TEST(AllCharSums, ZeroCoordinatesDropAndStateErrors) {
    auto f7 = make_field(7, 1);
    auto ring = make_ring({f7});
    auto s = all_char_sums({{f7->zero()}, {f7->one()}}, *ring);
    for (const auto& v : s) EXPECT_LT(std::abs(v - cd{1.0, 0.0}), 1e-9);

    auto nodlog = make_field(7, 1, 0, false);
    EXPECT_THROW(make_ring({nodlog}), Error);
}

struct RingFixture {
    std::string name;
    RingPtr ring;
};

std::vector<RingFixture> test_rings() {
    std::vector<RingFixture> out;
    out.push_back({"F13", make_ring({make_field(13, 1)})});
    out.push_back({"F25", make_ring({make_field(5, 2)})});
    auto f3 = make_field(3, 1);
    auto f5 = make_field(5, 1);
    out.push_back({"F3xF5", make_ring({f3, f5})});
    return out;
}

TEST(AllCharSums, TransformAgreesWithDirectEvaluation) {
    for (const auto& [name, ring] : test_rings()) {
        Lcg64 rng(std::hash<std::string>{}(name));
        for (int rep = 0; rep < 100; ++rep) {
            auto A = random_multiset(*ring, 1 + rng.below(12), rng);
            auto sums = all_char_sums(A, *ring);
            double tol = 1e-9 * static_cast<double>(A.size()) + 1e-12;
            for (u64 flat = 0; flat < ring->unit_count(); ++flat) {
                CharIndex chi{ring->tuple_of(flat)};
                KahanSum s;
                for (const auto& a : A) s.add(char_eval(chi, a, *ring));
                ASSERT_LT(std::abs(sums[flat] - s.sum), tol) << name << " rep=" << rep;
            }
        }
    }
}

TEST(AllCharSums, ParsevalAndOrthogonality) {
    for (const auto& [name, ring] : test_rings()) {
        Lcg64 rng(1234 + ring->unit_count());
        // orthogonality of each nontrivial character over all units
        u64 n = ring->unit_count();
        for (u64 flat = 1; flat < n; ++flat) {
            CharIndex chi{ring->tuple_of(flat)};
            KahanSum s;
            for (u64 u = 0; u < n; ++u) s.add(char_eval(chi, ring->unit_from_dlogs(ring->tuple_of(u)), *ring));
            ASSERT_LT(std::abs(s.sum), 1e-9) << name;
        }
        // Parseval on random multisets
        for (int rep = 0; rep < 25; ++rep) {
            auto A = random_multiset(*ring, 1 + rng.below(20), rng);
            auto sums = all_char_sums(A, *ring);
            std::vector<u64> mult(n, 0);
            for (const auto& a : A) {
                auto dl = ring->unit_dlogs(a);
                if (dl) ++mult[ring->flat_of(*dl)];
            }
            double rhs = 0;
            for (u64 m : mult) rhs += static_cast<double>(m) * static_cast<double>(m);
            rhs *= static_cast<double>(n);
            double lhs = 0;
            for (const auto& v : sums) lhs += std::norm(v);
            ASSERT_NEAR(lhs, rhs, 1e-6) << name;
        }
    }
}

TEST(CharSumsCsv, Format) {
    auto f3 = make_field(3, 1);
    auto f5 = make_field(5, 1);
    auto ring = make_ring({f3, f5});
    auto sums = all_char_sums({ring->one()}, *ring);
    auto csv = char_sums_csv(sums, *ring);
    EXPECT_EQ(csv.substr(0, 20), "chi,re,im,magnitude\n");
    EXPECT_NE(csv.find("0:0,1"), std::string::npos);
    // 8 characters + header
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

}  // namespace
