#pragma once

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using cd  = std::complex<double>;

/// Error categories; the CLI maps them to exit codes (invalid_input -> 2,
/// budget_exceeded -> 3, everything else -> 1).
enum class errc {
    invalid_input,
    budget_exceeded,
    state,
    numeric,
};

class Error : public std::runtime_error {
public:
    Error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(errc::invalid_input, msg); }
[[noreturn]] inline void fail_budget(const std::string& msg)  { throw Error(errc::budget_exceeded, msg); }
[[noreturn]] inline void fail_state(const std::string& msg)   { throw Error(errc::state, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(errc::numeric, msg); }

/// Enumeration budgets. Hard errors, never silent truncation.
struct Budget {
    u64 max_enumeration  = 1ull << 24;  // dlog tables, histograms, brute scans
    u64 max_transform_len = 1ull << 22; // single-axis DFT length
    u64 max_work = 100'000'000;         // pairwise work in brute-force counting
};

/// Default budget, honoring the CHARSUM_BUDGET env override for enumeration.
inline Budget default_budget() {
    Budget b;
    if (const char* env = std::getenv("CHARSUM_BUDGET")) {
        char* end = nullptr;
        u64 v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) b.max_enumeration = v;
    }
    return b;
}

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic, overflow-checked. All moduli are < 2^31 so a
// product of two reduced residues fits in 64 bits; mul_ov still verifies.

inline u64 mul_ov(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) fail_numeric("64-bit multiply overflow");
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 p) { return mul_ov(a % p, b % p) % p; }

inline u64 addmod(u64 a, u64 b, u64 p) { return (a % p + b % p) % p; }

inline u64 submod(u64 a, u64 b, u64 p) { return (a % p + p - b % p) % p; }

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

/// Inverse mod prime p via Fermat.
inline u64 invmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) fail_invalid("division by zero mod " + std::to_string(p));
    return powmod(a, p - 2, p);
}

/// Reduce a possibly negative integer into [0, p).
inline u64 reduce_mod(i64 a, u64 p) {
    i64 m = a % static_cast<i64>(p);
    if (m < 0) m += static_cast<i64>(p);
    return static_cast<u64>(m);
}

/// Deterministic primality by trial division; moduli here are < 2^31.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    for (u64 f = 11; f * f <= n; f += 2)
        if (n % f == 0) return false;
    return true;
}

inline void require_prime(u64 p) {
    if (p >= (1ull << 31)) fail_invalid("modulus " + std::to_string(p) + " exceeds 2^31");
    if (!is_prime(p)) fail_invalid(std::to_string(p) + " is not prime");
}

/// Trial-division factorization (distinct prime factors). Desk scale: n < 2^48.
inline std::vector<u64> prime_factors(u64 n) {
    if (n >= (1ull << 48)) fail_invalid("factorization target too large: " + std::to_string(n));
    std::vector<u64> fs;
    for (u64 f = 2; f * f <= n; f == 2 ? f = 3 : f += 2) {
        if (n % f == 0) {
            fs.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

/// Number of divisors by trial division.
inline u64 divisor_count(u64 n) {
    u64 d = 1;
    for (u64 f = 2; f * f <= n; f == 2 ? f = 3 : f += 2) {
        if (n % f == 0) {
            u64 e = 0;
            while (n % f == 0) { n /= f; ++e; }
            d *= e + 1;
        }
    }
    if (n > 1) d *= 2;
    return d;
}

/// floor(p^rho), the interval-length convention for exponent-derived grids.
inline u64 floor_pow(u64 p, double rho) {
    if (rho < 0) fail_invalid("negative exponent in floor_pow");
    long double v = std::pow(static_cast<long double>(p), static_cast<long double>(rho));
    return static_cast<u64>(std::floor(v));
}

// ---------------------------------------------------------------------------
// Seeded PRNG: 64-bit linear congruential generator with Knuth's MMIX
// constants a = 6364136223846793005, c = 1442695040888963407. Runs replay
// bit-exactly for equal seeds.

class Lcg64 {
public:
    explicit Lcg64(u64 seed) : state_(seed) {}

    u64 next() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        return state_;
    }

    /// Uniform draw in [0, n) by 128-bit multiply-shift.
    u64 below(u64 n) {
        return static_cast<u64>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    u64 state_;
};

/// Compensated (Kahan) accumulator for long complex sums.
struct KahanSum {
    cd sum{0.0, 0.0};
    cd comp{0.0, 0.0};

    void add(cd x) {
        cd y = x - comp;
        cd t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct KahanReal {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace charsum
