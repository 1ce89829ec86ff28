#pragma once

#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "charsum/field.hpp"
#include "charsum/transform.hpp"

namespace charsum {

/// Multiplicative character of a product-ring unit group, encoded as one
/// exponent per component against that component's canonical generator.
struct CharIndex {
    std::vector<u64> k;

    bool is_trivial() const {
        for (u64 x : k)
            if (x) return false;
        return true;
    }
};

/// Product of field contexts with coordinatewise multiplication. A single
/// component models F_{p^d} itself. Components must carry dlog tables.
class RingCtx {
public:
    using Elem = std::vector<FieldElem>;

    explicit RingCtx(std::vector<FieldPtr> comps) : comps_(std::move(comps)) {
        if (comps_.empty()) fail_invalid("ring needs at least one component");
        unit_count_ = 1;
        for (const auto& c : comps_) {
            if (!c->has_dlog()) fail_state("ring component lacks a dlog table");
            unit_sizes_.push_back(c->unit_count());
            full_sizes_.push_back(c->size());
            unit_count_ = mul_ov(unit_count_, c->unit_count());
        }
        const double tau = 2.0 * std::acos(-1.0);
        roots_.resize(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) {
            u64 n = unit_sizes_[i];
            roots_[i].resize(n);
            for (u64 j = 0; j < n; ++j) {
                double ang = tau * static_cast<double>(j) / static_cast<double>(n);
                roots_[i][j] = cd{std::cos(ang), std::sin(ang)};
            }
        }
    }

    size_t arity() const { return comps_.size(); }
    const FieldCtx& comp(size_t i) const { return *comps_[i]; }
    const FieldPtr& comp_ptr(size_t i) const { return comps_[i]; }
    const std::vector<u64>& unit_sizes() const { return unit_sizes_; }
    u64 unit_count() const { return unit_count_; }

    /// e^(2*pi*i*j/N_i) lookup for component i.
    cd root(size_t i, u64 j) const { return roots_[i][j % unit_sizes_[i]]; }

    bool is_unit(const Elem& a) const {
        for (size_t i = 0; i < comps_.size(); ++i)
            if (a[i].is_zero()) return false;
        return true;
    }

    /// Component dlogs of a unit; nullopt when any coordinate is zero.
    std::optional<std::vector<u64>> unit_dlogs(const Elem& a) const {
        std::vector<u64> out(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) {
            i64 l = comps_[i]->dlog_of(a[i]);
            if (l < 0) return std::nullopt;
            out[i] = static_cast<u64>(l);
        }
        return out;
    }

    /// Flat index over Z_{N_0} x ... x Z_{N_{m-1}}, last component contiguous.
    u64 flat_of(const std::vector<u64>& tuple) const {
        u64 idx = 0;
        for (size_t i = 0; i < tuple.size(); ++i) idx = idx * unit_sizes_[i] + tuple[i] % unit_sizes_[i];
        return idx;
    }

    std::vector<u64> tuple_of(u64 flat) const {
        std::vector<u64> t(comps_.size());
        for (size_t i = comps_.size(); i-- > 0;) {
            t[i] = flat % unit_sizes_[i];
            flat /= unit_sizes_[i];
        }
        return t;
    }

    /// Canonical element key: concatenated coefficient vectors, i.e. the
    /// mixed-radix index over full component sizes. Defines argmax tie order.
    u64 elem_key(const Elem& a) const {
        u64 key = 0;
        for (size_t i = comps_.size(); i-- > 0;) key = mul_ov(key, full_sizes_[i]) + comps_[i]->index_of(a[i]);
        return key;
    }

    /// Unit from its dlog tuple.
    Elem unit_from_dlogs(const std::vector<u64>& dl) const {
        Elem e(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i)
            e[i] = comps_[i]->elem_at(comps_[i]->exp_table[dl[i] % unit_sizes_[i]]);
        return e;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        Elem r(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) r[i] = comps_[i]->mul(a[i], b[i]);
        return r;
    }

    Elem one() const {
        Elem r(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) r[i] = comps_[i]->one();
        return r;
    }

    /// Diagonal embedding of a base-field scalar (components must share p).
    Elem diag_scalar(u64 v) const {
        Elem r(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) r[i] = comps_[i]->scalar(v);
        return r;
    }

    u64 char_order(const CharIndex& chi) const {
        u64 ord = 1;
        for (size_t i = 0; i < comps_.size(); ++i) {
            u64 n = unit_sizes_[i];
            u64 o = n / std::gcd(n, chi.k[i] % n);
            ord = std::lcm(ord, o);
        }
        return ord;
    }

    void check_char(const CharIndex& chi) const {
        if (chi.k.size() != comps_.size()) fail_invalid("character arity mismatch");
    }

private:
    std::vector<FieldPtr> comps_;
    std::vector<u64> unit_sizes_;
    std::vector<u64> full_sizes_;
    u64 unit_count_ = 1;
    std::vector<std::vector<cd>> roots_;
};

using RingPtr = std::shared_ptr<const RingCtx>;
using RingElem = RingCtx::Elem;

inline RingPtr make_ring(std::vector<FieldPtr> comps) {
    return std::make_shared<RingCtx>(std::move(comps));
}

/// chi(a): product over components of e^(2*pi*i*k_i*dlog_i(a_i)/N_i); zero if
/// any coordinate is zero.
inline cd char_eval(const CharIndex& chi, const RingElem& a, const RingCtx& ring) {
    ring.check_char(chi);
    auto dl = ring.unit_dlogs(a);
    if (!dl) return {0.0, 0.0};
    cd v{1.0, 0.0};
    for (size_t i = 0; i < ring.arity(); ++i) {
        u64 n = ring.unit_sizes()[i];
        v *= ring.root(i, (chi.k[i] % n) * ((*dl)[i] % n) % n);
    }
    return v;
}

/// Single-field convenience: chi_k(a) in F_{p^d}.
inline cd char_eval_field(const FieldCtx& ctx, u64 k, const FieldElem& a) {
    i64 l = ctx.dlog_of(a);
    if (l < 0) return {0.0, 0.0};
    u64 n = ctx.unit_count();
    const double tau = 2.0 * std::acos(-1.0);
    double ang = tau * static_cast<double>((k % n) * (static_cast<u64>(l) % n) % n) /
                 static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

/// chi_k over the whole field as a table indexed by canonical element index
/// (zero maps to 0). The workhorse for grid scans.
inline std::vector<cd> char_table(const FieldCtx& ctx, u64 k) {
    if (!ctx.has_dlog()) fail_state("char_table requires a dlog table");
    u64 n = ctx.unit_count();
    const double tau = 2.0 * std::acos(-1.0);
    std::vector<cd> roots(n);
    for (u64 j = 0; j < n; ++j) {
        double ang = tau * static_cast<double>(j) / static_cast<double>(n);
        roots[j] = cd{std::cos(ang), std::sin(ang)};
    }
    std::vector<cd> table(ctx.size(), cd{0.0, 0.0});
    u64 km = k % n;
    for (u64 j = 0; j < n; ++j) table[ctx.exp_table[j]] = roots[km * j % n];
    return table;
}

/// True iff chi_k restricted to the base field F_p^* is identically 1.
/// Closed form: the base subgroup is generated by g^((p^d-1)/(p-1)), so the
/// restriction is trivial exactly when (p-1) | k.
inline bool is_restriction_trivial(u64 k, const FieldCtx& ctx) {
    return k % (ctx.p - 1) == 0;
}

/// Character sums of a multiset at every character of the ring at once:
/// out[flat(chi)] = sum_{a in A} chi(a). Elements with a zero coordinate
/// contribute nothing and are dropped. Computed as a multidimensional DFT of
/// the dlog-multiplicity array.
inline std::vector<cd> all_char_sums(const std::vector<RingElem>& A, const RingCtx& ring,
                                     const Budget& budget = default_budget()) {
    u64 n = ring.unit_count();
    if (n > budget.max_enumeration)
        fail_budget("character group of size " + std::to_string(n) +
                    " exceeds enumeration budget " + std::to_string(budget.max_enumeration));
    std::vector<cd> data(n, cd{0.0, 0.0});
    for (const auto& a : A) {
        auto dl = ring.unit_dlogs(a);
        if (!dl) continue;
        data[ring.flat_of(*dl)] += 1.0;
    }
    dft_multi(data, ring.unit_sizes(), +1, budget.max_transform_len);
    return data;
}

/// CSV view of a character-sum vector: index tuple, real, imag, magnitude.
inline std::string char_sums_csv(const std::vector<cd>& sums, const RingCtx& ring) {
    std::ostringstream os;
    os.precision(17);
    os << "chi,re,im,magnitude\n";
    for (u64 flat = 0; flat < sums.size(); ++flat) {
        auto t = ring.tuple_of(flat);
        for (size_t i = 0; i < t.size(); ++i) os << (i ? ":" : "") << t[i];
        os << "," << sums[flat].real() << "," << sums[flat].imag() << "," << std::abs(sums[flat])
           << "\n";
    }
    return os.str();
}

}  // namespace charsum
