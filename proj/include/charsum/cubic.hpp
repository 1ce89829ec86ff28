#pragma once

#include <vector>

#include "charsum/field.hpp"

namespace charsum {

/// Binary cubic form f(x,y) = x^3 + a x^2 y + b x y^2 + c y^3 over F_p (the
/// monic normal form; dehomogenization g(t) = f(t,1) = t^3 + a t^2 + b t + c).
struct CubicForm {
    u64 a = 0, b = 0, c = 0;

    json to_json(u64 p) const { return json{{"p", p}, {"a", a}, {"b", b}, {"c", c}}; }
};

inline u64 eval_form(const CubicForm& f, u64 x, u64 y, u64 p) {
    x %= p;
    y %= p;
    u64 v = powmod(x, 3, p);
    v = addmod(v, mulmod(f.a, mulmod(mulmod(x, x, p), y, p), p), p);
    v = addmod(v, mulmod(f.b, mulmod(x, mulmod(y, y, p), p), p), p);
    v = addmod(v, mulmod(f.c, powmod(y, 3, p), p), p);
    return v;
}

/// Discriminant of the dehomogenized cubic:
/// 18abc - 4a^3 c + a^2 b^2 - 4b^3 - 27c^2 (mod p). Nonzero iff the roots in
/// the closure are distinct. Characteristics 2 and 3 are rejected.
inline u64 discriminant(const CubicForm& f, u64 p) {
    require_prime(p);
    if (p <= 3) fail_invalid("discriminant criterion needs p > 3");
    u64 a = f.a % p, b = f.b % p, c = f.c % p;
    u64 t1 = mulmod(18, mulmod(a, mulmod(b, c, p), p), p);
    u64 t2 = mulmod(4, mulmod(powmod(a, 3, p), c, p), p);
    u64 t3 = mulmod(mulmod(a, a, p), mulmod(b, b, p), p);
    u64 t4 = mulmod(4, powmod(b, 3, p), p);
    u64 t5 = mulmod(27, mulmod(c, c, p), p);
    return submod(addmod(t1, t3, p), addmod(t2, addmod(t4, t5, p), p), p);
}

enum class FormCase { Irreducible, LinearTimesQuadratic, Split };

inline std::string to_string(FormCase c) {
    switch (c) {
        case FormCase::Irreducible: return "irreducible";
        case FormCase::LinearTimesQuadratic: return "linear-times-quadratic";
        case FormCase::Split: return "split";
    }
    return "?";
}

/// Factorization data of a non-degenerate form. Case 3 carries the three
/// roots in F_p (ascending); Case 2 carries lambda_1 plus the conjugate
/// quadratic roots in an F_{p^2} context; Case 1 carries no roots.
struct FormClass {
    CubicForm form;
    u64 p = 0;
    FormCase kind = FormCase::Irreducible;
    std::vector<u64> lambdas;
    FieldPtr quad_ctx;
    FieldElem omega2, omega3;

    json to_json() const {
        json j = form.to_json(p);
        j["case"] = to_string(kind);
        if (!lambdas.empty()) j["lambdas"] = lambdas;
        if (quad_ctx) {
            j["omega2"] = quad_ctx->elem_hex(omega2);
            j["omega3"] = quad_ctx->elem_hex(omega3);
        }
        return j;
    }
};

/// Classify a non-degenerate form by exhaustive root scan of g(t) = f(t,1):
/// no root -> Case 1, one root -> Case 2 (quadratic factor split in F_{p^2}),
/// three roots -> Case 3. Roots are verified by back-substitution. A shared
/// F_{p^2} context may be supplied to avoid rebuilding it per form.
inline FormClass classify(const CubicForm& f, u64 p, FieldPtr quad_ctx = nullptr,
                          const Budget& budget = default_budget()) {
    if (discriminant(f, p) == 0) fail_invalid("degenerate form: repeated root in the closure");
    FormClass cls;
    cls.form = f;
    cls.p = p;
    std::vector<u64> roots;
    for (u64 t = 0; t < p; ++t) {
        u64 g = addmod(powmod(t, 3, p), mulmod(f.a, mulmod(t, t, p), p), p);
        g = addmod(g, addmod(mulmod(f.b, t, p), f.c % p, p), p);
        if (g == 0) roots.push_back(t);
    }
    if (roots.size() == 3) {
        cls.kind = FormCase::Split;
        cls.lambdas = roots;  // ascending from the scan
        return cls;
    }
    if (roots.empty()) {
        cls.kind = FormCase::Irreducible;
        return cls;
    }
    if (roots.size() != 1) fail_numeric("non-degenerate cubic with two roots cannot happen");
    cls.kind = FormCase::LinearTimesQuadratic;
    cls.lambdas = roots;
    u64 lam = roots[0];
    // deflate: g = (t - lam)(t^2 + u t + v)
    u64 u = addmod(f.a, lam, p);
    u64 v = addmod(f.b, mulmod(lam, u, p), p);
    if (submod(0, mulmod(lam, v, p), p) != f.c % p) fail_numeric("deflation mismatch");
    cls.quad_ctx = quad_ctx ? quad_ctx : make_field(p, 2, 0, true, budget);
    const FieldCtx& q = *cls.quad_ctx;
    FieldElem ue = q.scalar(u), ve = q.scalar(v);
    std::vector<FieldElem> qroots;
    for (u64 idx = 0; idx < q.size(); ++idx) {
        FieldElem t = q.elem_at(idx);
        FieldElem val = q.add(q.add(q.mul(t, t), q.mul(ue, t)), ve);
        if (val.is_zero()) {
            qroots.push_back(t);
            if (qroots.size() == 2) break;  // scan order is canonical, roots ascending
        }
    }
    if (qroots.size() != 2) fail_numeric("quadratic factor did not split in F_{p^2}");
    cls.omega2 = qroots[0];
    cls.omega3 = qroots[1];
    if (!(q.frob(cls.omega2) == cls.omega3)) fail_numeric("quadratic roots are not conjugate");
    return cls;
}

/// Expand the classified factorization back into (a, b, c). Case 1 has no
/// root data and returns the stored form.
inline CubicForm reconstruct(const FormClass& cls) {
    u64 p = cls.p;
    if (cls.kind == FormCase::Irreducible) return cls.form;
    if (cls.kind == FormCase::Split) {
        u64 l1 = cls.lambdas[0], l2 = cls.lambdas[1], l3 = cls.lambdas[2];
        CubicForm f;
        f.a = submod(0, addmod(l1, addmod(l2, l3, p), p), p);
        f.b = addmod(mulmod(l1, l2, p), addmod(mulmod(l1, l3, p), mulmod(l2, l3, p), p), p);
        f.c = submod(0, mulmod(l1, mulmod(l2, l3, p), p), p);
        return f;
    }
    const FieldCtx& q = *cls.quad_ctx;
    // (t - lam)(t - w2)(t - w3) expanded in F_{p^2}; coefficients must land in F_p
    FieldElem lam = q.scalar(cls.lambdas[0]);
    FieldElem sum = q.add(lam, q.add(cls.omega2, cls.omega3));
    FieldElem pair = q.add(q.mul(lam, cls.omega2),
                           q.add(q.mul(lam, cls.omega3), q.mul(cls.omega2, cls.omega3)));
    FieldElem triple = q.mul(lam, q.mul(cls.omega2, cls.omega3));
    if (!q.in_base_field(sum) || !q.in_base_field(pair) || !q.in_base_field(triple))
        fail_numeric("reconstruction left the base field");
    CubicForm f;
    f.a = submod(0, sum.c[0], p);
    f.b = pair.c[0];
    f.c = submod(0, triple.c[0], p);
    return f;
}

/// All non-degenerate forms mod p, tagged with their case. Budgeted at p <= 31
/// (p^3 scans).
inline std::vector<FormClass> enumerate_nondegenerate(u64 p, const Budget& budget = default_budget()) {
    require_prime(p);
    if (p > 31) fail_budget("form enumeration is budgeted at p <= 31");
    FieldPtr quad = make_field(p, 2, 0, true, budget);
    std::vector<FormClass> out;
    for (u64 a = 0; a < p; ++a)
        for (u64 b = 0; b < p; ++b)
            for (u64 c = 0; c < p; ++c) {
                CubicForm f{a, b, c};
                if (discriminant(f, p) == 0) continue;
                out.push_back(classify(f, p, quad, budget));
            }
    return out;
}

}  // namespace charsum
