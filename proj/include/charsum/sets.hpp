#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "charsum/character.hpp"
#include "charsum/cubic.hpp"
#include "charsum/field.hpp"

namespace charsum {

/// Integer interval [start, start+length-1], reduced into F_p on demand.
struct IntervalSpec {
    i64 start = 1;
    u64 length = 1;

    json to_json() const { return json{{"start", start}, {"length", length}}; }

    static IntervalSpec from_json(const json& j) {
        return {j.at("start").get<i64>(), j.at("length").get<u64>()};
    }
};

/// Residues of the interval in F_p. Lengths above p would duplicate residues,
/// so they are rejected.
inline std::vector<u64> interval_residues(const IntervalSpec& iv, u64 p) {
    if (iv.length == 0) return {};
    if (iv.length > p)
        fail_invalid("interval of length " + std::to_string(iv.length) +
                     " wraps around mod " + std::to_string(p));
    std::vector<u64> out;
    out.reserve(iv.length);
    u64 cur = reduce_mod(iv.start, p);
    for (u64 i = 0; i < iv.length; ++i) {
        out.push_back(cur);
        cur = cur + 1 == p ? 0 : cur + 1;
    }
    return out;
}

/// Which printed exponent drives the Q_0 box: the set definition's
/// per-coordinate (9-4s)/20, or the proof's cardinality reading (9-4s)/10
/// applied per coordinate. Both are recorded in provenance.
enum class ExponentRule { SetDef, ProofCard };

inline std::string to_string(ExponentRule r) {
    return r == ExponentRule::SetDef ? "set-def" : "proof-card";
}

/// Coordinate box inside the codimension-one sublattice: at most d-1 interval
/// coordinates mapped through x -> sum x_i w^i.
struct LatticeBox {
    std::vector<IntervalSpec> intervals;
    std::optional<double> sigma;           // provenance for exponent-derived boxes
    std::optional<ExponentRule> rule;

    u64 cardinality() const {
        u64 n = 1;
        for (const auto& iv : intervals) n = mul_ov(n, iv.length);
        return n;
    }

    json to_json() const {
        json j;
        j["intervals"] = json::array();
        for (const auto& iv : intervals) j["intervals"].push_back(iv.to_json());
        if (sigma) j["sigma"] = *sigma;
        if (rule) j["exponent_rule"] = to_string(*rule);
        return j;
    }
};

/// Enumerate the box image { sum_i x_i w^i }. With every length < p the map is
/// injective, so the list has exactly prod(lengths) distinct elements. An
/// explicit omega (any generator of the field over F_p) replaces the canonical
/// basis root.
inline std::vector<FieldElem> box_elements(const LatticeBox& box, const FieldCtx& ctx,
                                           std::optional<FieldElem> omega = std::nullopt,
                                           const Budget& budget = default_budget()) {
    if (box.intervals.empty()) fail_invalid("box has no coordinates");
    if (box.intervals.size() > static_cast<size_t>(ctx.d) - 1 && !(ctx.d == 1))
        fail_invalid("box has " + std::to_string(box.intervals.size()) +
                     " coordinates; field degree " + std::to_string(ctx.d) + " allows at most " +
                     std::to_string(ctx.d - 1));
    if (ctx.d == 1) fail_invalid("box enumeration needs an extension field");
    u64 total = 1;
    std::vector<std::vector<u64>> coords;
    for (const auto& iv : box.intervals) {
        if (iv.length >= ctx.p) fail_invalid("box interval length must be < p");
        coords.push_back(interval_residues(iv, ctx.p));
        total = mul_ov(total, iv.length);
    }
    if (total > budget.max_enumeration) fail_budget("box enumeration exceeds budget");

    // powers of omega for the coordinate map
    std::vector<FieldElem> pw(coords.size());
    FieldElem w = omega.value_or(ctx.omega);
    pw[0] = ctx.one();
    for (size_t i = 1; i < coords.size(); ++i) pw[i] = ctx.mul(pw[i - 1], w);
    bool canonical = !omega || *omega == ctx.omega;

    std::vector<FieldElem> out;
    out.reserve(total);
    std::vector<size_t> idx(coords.size(), 0);
    while (true) {
        FieldElem e = ctx.zero();
        if (canonical) {
            for (size_t i = 0; i < coords.size(); ++i) e.c[i] = static_cast<u32>(coords[i][idx[i]]);
        } else {
            for (size_t i = 0; i < coords.size(); ++i)
                e = ctx.add(e, ctx.smul(coords[i][idx[i]], pw[i]));
        }
        out.push_back(e);
        size_t ax = coords.size();
        while (ax > 0) {
            --ax;
            if (++idx[ax] < coords[ax].size()) break;
            idx[ax] = 0;
            if (ax == 0) return out;
        }
        if (ax == 0 && idx[0] == 0) return out;
    }
}

/// The lemma's Q box: d-1 coordinates, each [1, floor(p^sigma)].
inline LatticeBox q_box(const FieldCtx& ctx, double sigma) {
    if (ctx.d < 2) fail_invalid("Q box needs extension degree >= 2");
    u64 len = floor_pow(ctx.p, sigma);
    if (len >= ctx.p) fail_invalid("Q box coordinate reaches p; shrink sigma");
    LatticeBox box;
    box.intervals.assign(ctx.d - 1, IntervalSpec{1, len});
    box.sigma = sigma;
    return box;
}

/// The lemma's Q_0 box: two coordinates y_0 + y_1 w with per-coordinate length
/// floor(p^((9-4s)/20)) under SetDef or floor(p^((9-4s)/10)) under ProofCard.
inline LatticeBox q0_box(const FieldCtx& ctx, double sigma, ExponentRule rule) {
    if (!(sigma > 0.0 && sigma < 11.0 / 16.0))
        fail_invalid("sigma must lie in (0, 11/16), got " + std::to_string(sigma));
    if (ctx.d < 3) fail_invalid("Q_0 box needs extension degree >= 3");
    double expo = rule == ExponentRule::SetDef ? (9.0 - 4.0 * sigma) / 20.0
                                               : (9.0 - 4.0 * sigma) / 10.0;
    u64 len = floor_pow(ctx.p, expo);
    if (len >= ctx.p) fail_invalid("Q_0 coordinate reaches p");
    LatticeBox box;
    box.intervals.assign(2, IntervalSpec{1, len});
    box.sigma = sigma;
    box.rule = rule;
    return box;
}

/// Exponent used by q0_box before flooring (exposed for reporting).
inline double q0_exponent(double sigma, ExponentRule rule) {
    return rule == ExponentRule::SetDef ? (9.0 - 4.0 * sigma) / 20.0 : (9.0 - 4.0 * sigma) / 10.0;
}

// ---------------------------------------------------------------------------
// Product-ring tuple sets R, T, S, Delta for the cubic-form argument.

enum class TupleLabel { R, T, S, Delta };

inline std::string to_string(TupleLabel l) {
    switch (l) {
        case TupleLabel::R: return "R";
        case TupleLabel::T: return "T";
        case TupleLabel::S: return "S";
        case TupleLabel::Delta: return "Delta";
    }
    return "?";
}

struct TupleSet {
    TupleLabel label;
    RingPtr ring;
    std::vector<RingElem> elems;
    json params;
};

struct TupleSets {
    TupleSet R, T, S, Delta;
    RingPtr ring;
};

namespace detail {

/// (x - r1 y, x - r2 y, x - r3 y) where the roots live per component.
inline RingElem linear_triple(const RingCtx& ring, const std::vector<FieldElem>& roots, u64 x,
                              u64 y) {
    RingElem e(ring.arity());
    for (size_t i = 0; i < ring.arity(); ++i) {
        const FieldCtx& c = ring.comp(i);
        e[i] = c.sub(c.scalar(x), c.mul(roots[i], c.scalar(y)));
    }
    return e;
}

}  // namespace detail

/// Build the Case 2/3 sets: R over I x J, T over I0 x I0, S the diagonal over
/// K, Delta the diagonal over F_p^*. Case 2 works in F_p x F_p2 x F_p2 with
/// the quadratic roots realized in the classifier's F_p2 context; Case 3 in
/// F_p x F_p x F_p. Duplicate tuples are dropped (the linear forms of a
/// non-degenerate cubic make the map injective, so none occur in practice).
inline TupleSets build_tuple_sets(u64 p, const FormClass& cls, const IntervalSpec& I,
                                  const IntervalSpec& J, const IntervalSpec& I0,
                                  const IntervalSpec& K, const Budget& budget = default_budget()) {
    RingPtr ring;
    std::vector<FieldElem> roots;
    json root_params;
    if (cls.kind == FormCase::Split) {
        auto fp = make_field(p, 1, 0, true, budget);
        ring = make_ring({fp, fp, fp});
        for (u64 l : cls.lambdas) roots.push_back(fp->scalar(l));
        root_params["lambdas"] = cls.lambdas;
    } else if (cls.kind == FormCase::LinearTimesQuadratic) {
        auto fp = make_field(p, 1, 0, true, budget);
        if (!cls.quad_ctx) fail_invalid("Case 2 classification lacks its quadratic context");
        ring = make_ring({fp, cls.quad_ctx, cls.quad_ctx});
        roots.push_back(fp->scalar(cls.lambdas.at(0)));
        roots.push_back(cls.omega2);
        roots.push_back(cls.omega3);
        root_params["lambda1"] = cls.lambdas.at(0);
        root_params["omega2"] = cls.quad_ctx->elem_hex(cls.omega2);
        root_params["omega3"] = cls.quad_ctx->elem_hex(cls.omega3);
    } else {
        fail_invalid("tuple sets need a reducible (Case 2 or Case 3) form");
    }

    // Case 2's second and third coordinates are conjugate linear forms; the
    // middle root ctx differs per coordinate, handled by linear_triple.
    auto build_pairs = [&](TupleLabel label, const IntervalSpec& X, const IntervalSpec& Y) {
        TupleSet out{label, ring, {}, {}};
        auto xs = interval_residues(X, p);
        auto ys = interval_residues(Y, p);
        if (mul_ov(xs.size(), ys.size()) > budget.max_enumeration)
            fail_budget("tuple set enumeration exceeds budget");
        std::unordered_set<u64> seen;
        for (u64 x : xs)
            for (u64 y : ys) {
                RingElem e = detail::linear_triple(*ring, roots, x, y);
                if (seen.insert(ring->elem_key(e)).second) out.elems.push_back(std::move(e));
            }
        out.params = json{{"label", to_string(label)}, {"p", p},
                          {"X", X.to_json()},          {"Y", Y.to_json()},
                          {"roots", root_params}};
        return out;
    };

    auto build_diag = [&](TupleLabel label, const std::vector<u64>& values, const json& src) {
        TupleSet out{label, ring, {}, {}};
        std::unordered_set<u64> seen;
        for (u64 v : values) {
            RingElem e = ring->diag_scalar(v);
            if (seen.insert(ring->elem_key(e)).second) out.elems.push_back(std::move(e));
        }
        out.params = json{{"label", to_string(label)}, {"p", p}, {"source", src}};
        return out;
    };

    TupleSets sets;
    sets.ring = ring;
    sets.R = build_pairs(TupleLabel::R, I, J);
    sets.T = build_pairs(TupleLabel::T, I0, I0);
    sets.S = build_diag(TupleLabel::S, interval_residues(K, p), K.to_json());
    std::vector<u64> units;
    for (u64 t = 1; t < p; ++t) units.push_back(t);
    sets.Delta = build_diag(TupleLabel::Delta, units, json{{"units_of", p}});
    return sets;
}

}  // namespace charsum
