#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "charsum/common.hpp"

namespace charsum {

namespace detail {

inline void fft_pow2(std::vector<cd>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double tau = 2.0 * std::acos(-1.0);
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * tau / static_cast<double>(len);
        cd wl{std::cos(ang), std::sin(ang)};
        for (size_t i = 0; i < n; i += len) {
            cd w{1.0, 0.0};
            for (size_t j = 0; j < len / 2; ++j) {
                cd u = a[i + j];
                cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace detail

/// DFT of arbitrary length: X_k = sum_j a_j e^(sign*2*pi*i*jk/n). Radix-2 for
/// powers of two, direct evaluation for tiny n, Bluestein's chirp algorithm
/// otherwise (correct at every length, including large primes).
inline std::vector<cd> dft_any(const std::vector<cd>& a, int sign,
                               u64 max_transform_len = default_budget().max_transform_len) {
    const size_t n = a.size();
    if (n > max_transform_len)
        fail_budget("transform length " + std::to_string(n) + " exceeds budget " +
                    std::to_string(max_transform_len));
    if (n <= 1) return a;
    const double tau = 2.0 * std::acos(-1.0);
    if (std::has_single_bit(n)) {
        std::vector<cd> out = a;
        detail::fft_pow2(out, sign);
        return out;
    }
    if (n <= 64) {
        std::vector<cd> out(n);
        for (size_t k = 0; k < n; ++k) {
            KahanSum s;
            for (size_t j = 0; j < n; ++j) {
                double ang = sign * tau * static_cast<double>((j * k) % n) / static_cast<double>(n);
                s.add(a[j] * cd{std::cos(ang), std::sin(ang)});
            }
            out[k] = s.sum;
        }
        return out;
    }
    // Bluestein: jk = (j^2 + k^2 - (k-j)^2) / 2, so the DFT is a convolution
    // against the chirp e^(sign*pi*i*t^2/n). Squares are reduced mod 2n to keep
    // the angle argument small.
    size_t m = std::bit_ceil(2 * n - 1);
    std::vector<cd> chirp(n);
    for (size_t j = 0; j < n; ++j) {
        u64 t = (static_cast<u64>(j) * j) % (2 * n);
        double ang = sign * tau * static_cast<double>(t) / (2.0 * static_cast<double>(n));
        chirp[j] = cd{std::cos(ang), std::sin(ang)};
    }
    std::vector<cd> fa(m, cd{0, 0}), fb(m, cd{0, 0});
    for (size_t j = 0; j < n; ++j) fa[j] = a[j] * chirp[j];
    fb[0] = std::conj(chirp[0]);
    for (size_t j = 1; j < n; ++j) fb[j] = fb[m - j] = std::conj(chirp[j]);
    detail::fft_pow2(fa, -1);
    detail::fft_pow2(fb, -1);
    for (size_t i = 0; i < m; ++i) fa[i] *= fb[i];
    detail::fft_pow2(fa, +1);
    double inv_m = 1.0 / static_cast<double>(m);
    std::vector<cd> out(n);
    for (size_t k = 0; k < n; ++k) out[k] = fa[k] * inv_m * chirp[k];
    return out;
}

/// In-place multidimensional DFT over Z_{dims[0]} x ... x Z_{dims[m-1]}, data
/// in row-major order with the last dimension contiguous.
inline void dft_multi(std::vector<cd>& data, const std::vector<u64>& dims, int sign,
                      u64 max_transform_len = default_budget().max_transform_len) {
    u64 total = 1;
    for (u64 d : dims) total *= d;
    if (total != data.size()) fail_invalid("dft_multi: shape mismatch");
    u64 stride = 1;
    for (size_t ax = dims.size(); ax-- > 0;) {
        const u64 n = dims[ax];
        const u64 lines = total / n;
        std::vector<cd> line(n);
        for (u64 l = 0; l < lines; ++l) {
            // base offset of this line: l split around the axis
            u64 outer = l / stride;
            u64 inner = l % stride;
            u64 base = outer * stride * n + inner;
            for (u64 j = 0; j < n; ++j) line[j] = data[base + j * stride];
            auto out = dft_any(line, sign, max_transform_len);
            for (u64 j = 0; j < n; ++j) data[base + j * stride] = out[j];
        }
        stride *= n;
    }
}

}  // namespace charsum
