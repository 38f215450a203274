"""Rectifying automorphisms for residual x-variables p = f u + g.

Every witness produced here is checked exactly before it is returned:
alpha(coordinate) == p and alpha o alpha^-1 == id.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .autom import (Affine, AutomError, Explicit, PolyMap, Triangular, Twisted, compose, gamma_k,
                    maps_ideal_onto, verify_witness)
from .ideal import intersection_index, is_empty
from .poly import (P, Polynomial, PolyError, RingSpec, bezout_mod, divides, exquo, factor_list,
                   gcd, mod_tests, poly_gcd_list, random_poly, rational_roots, reduce_mod,
                   sqf_part)

X, Y, Z, U = (Polynomial.var(v) for v in "xyzu")
SPACE = ("y", "z", "u")


class RectifyError(PolyError):
    """A precondition of a rectification routine is violated."""


class _Fail(Exception):
    pass


class Kind(str, enum.Enum):
    XVARIABLE = "XVariable"
    VARIABLE = "Variable"
    ONESTABLE = "OneStable"
    UNKNOWN = "Unknown"


@dataclass
class RectifyResult:
    kind: Kind
    target: Polynomial
    witness: PolyMap = None
    coordinate: str = "y"
    p_n: Polynomial = None
    p_n_witness: PolyMap = None
    reason: str = None
    trace: list = field(default_factory=list)

    def to_json(self):
        out = {"kind": self.kind.value, "target": str(self.target), "coordinate": self.coordinate,
               "trace": list(self.trace)}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.p_n is not None:
            out["p_n"] = str(self.p_n)
            out["p_n_witness"] = self.p_n_witness.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


def _swap(a, b):
    return Affine((a, b), ((0, 1), (1, 0)), (0, 0))


def _scale(v, other, c):
    return Affine((v, other), ((c, 0), (0, 1)), (0, 0))


def _check(W, target, coordinate):
    if W.apply(Polynomial.var(coordinate)) != P(target):
        raise AssertionError(f"witness does not map {coordinate} to {target}")
    return W


# ---------------------------------------------------------------- RuVe(a)

def ruve_a(B, f, b0, b1, q, z="z", u="u"):
    """B-automorphism alpha of B[z, u] with alpha(z) = f u + b0 + b1 z + q(z).

    B is a RingSpec (or None to infer from the coefficients).  The tail q
    must be nilpotent and b1 invertible modulo f.
    """
    f, b0, b1, q = P(f), P(b0), P(b1), P(q)
    for name, c in (("f", f), ("b0", b0), ("b1", b1)):
        if z in c.vars or u in c.vars:
            raise RectifyError(f"{name} must lie in the coefficient ring")
    if u in q.vars:
        raise RectifyError("q must not involve u")
    if not f:
        raise RectifyError("f must be nonzero")
    coeff_vars = sorted({v for c in (f, b0, b1, q) for v in c.vars} - {z, u})
    if B is None:
        B = RingSpec.UNIVARIATE_Q if len(coeff_vars) <= 1 else RingSpec.BIVARIATE_Q
    B = RingSpec(B)
    if B is RingSpec.UNIVARIATE_QX:
        raise RectifyError("witnesses need a polynomial coefficient ring")
    if len(coeff_vars) > {RingSpec.UNIVARIATE_Q: 1, RingSpec.BIVARIATE_Q: 2}[B]:
        raise RectifyError(f"coefficients leave the ring {B.value}")
    var = coeff_vars[0] if coeff_vars else "y"
    if not f.is_constant():
        if mod_tests(b1, f, B, var).invertible_mod_f.value != "Yes":
            raise RectifyError("b1 is not invertible modulo f")
        if not mod_tests(q, f, B, var).nilpotent_mod_f:
            raise RectifyError("q is not nilpotent modulo f")
    Zp, Up = Polynomial.var(z), Polynomial.var(u)
    L = b0 + b1 * Zp + q
    p = f * Up + L
    fixed = tuple(coeff_vars)
    if f.is_constant():
        c = f.constant()
        factors = (Triangular(u, L / c), _scale(u, z, c), _swap(z, u))
        alpha = PolyMap((z, u), factors=factors, fixed=fixed)
        return _check(alpha, p, z)
    if not q and b1.is_constant() and b1:
        c = b1.constant()
        alpha = PolyMap((z, u), factors=(Triangular(z, (f * Up + b0) / c), _scale(z, u, c)), fixed=fixed)
        return _check(alpha, p, z)
    c = bezout_mod(b1, f)
    if c is None:
        raise RectifyError("no Bezout inverse of b1 modulo f found")
    mult = max(m for _, m in factor_list(f)[1])
    fred = sqf_part(f)
    # s inverts w -> L(w) modulo f; round k is exact modulo f^red^(k+1),
    # so reducing there keeps the iterates small
    s = reduce_mod(c * (Zp - b0), f)
    for k in range(1, mult + 2):
        if divides(f, L.subs({z: s}) - Zp):
            break
        s = reduce_mod(c * (Zp - b0 - q.subs({z: s})), gcd(f, fred ** (k + 1)))
    else:
        raise AutomError("nilpotent tail iteration did not terminate")
    s = reduce_mod(s, f)
    fwd_u = exquo(Zp - s.subs({z: p}), f)
    back_z = s + f * Up
    back_u = exquo(Zp - L.subs({z: back_z}), f)
    alpha = PolyMap((z, u), factors=(Explicit((z, u), (p, fwd_u), (back_z, back_u)),), fixed=fixed)
    return _check(alpha, p, z)


# ---------------------------------------------------------------- plane witnesses over B

def _split_linear(Q0, lin, other):
    """Q0 = F*lin + R(other) with F free of lin and other, or None."""
    if Q0.degree(lin) > 1:
        return None
    F = Q0.coeff(lin, 1)
    if lin in F.vars or other in F.vars:
        return None
    return F, Q0.coeff(lin, 0)


def plane_witness(Q0, t, o, fixed):
    """Map delta on (t, o), fixing the other variables, with delta(t) = Q0."""
    Q0 = P(Q0)
    for lin, oth in ((t, o), (o, t)):
        split = _split_linear(Q0, lin, oth)
        if split is None:
            continue
        F, R = split
        if F.is_constant() and F:
            c = F.constant()
            if lin == t:
                delta = PolyMap((t, o), factors=(Triangular(t, R / c), _scale(t, o, c)), fixed=fixed)
            else:
                delta = PolyMap((t, o), factors=(Triangular(o, R / c), _scale(o, t, c), _swap(t, o)),
                                fixed=fixed)
            return _check(delta, Q0, t)
    for lin, oth in ((o, t), (t, o)):
        split = _split_linear(Q0, lin, oth)
        if split is None or not split[0]:
            continue
        F, R = split
        b0, b1 = R.coeff(oth, 0), R.coeff(oth, 1)
        if oth in b1.vars or oth in b0.vars:
            continue
        q = R - b0 - b1 * Polynomial.var(oth)
        try:
            alpha = ruve_a(None, F, b0, b1, q, z=oth, u=lin)
        except (RectifyError, AutomError):
            continue
        alpha = PolyMap(alpha.vars, factors=alpha.factors, fixed=fixed)
        if oth == t:
            return _check(alpha, Q0, t)
        return _check(compose(alpha, PolyMap((t, o), factors=(_swap(t, o),), fixed=fixed)), Q0, t)
    return None


# ---------------------------------------------------------------- twisting a coordinate by a(x)

def _conj_root(W, var, lam, coordinate):
    lin = X - lam
    inv = W.inverse()
    Q0 = inv.apply(Polynomial.var(var)).subs({"x": Polynomial.const(lam)})
    others = [v for v in W.vars if v not in (coordinate, var)]
    if len(others) != 1:
        raise _Fail("twisting needs exactly one free companion variable")
    fixed = tuple(v for v in ("x",) + W.vars if v not in (var, others[0]))
    delta = plane_witness(Q0, var, others[0], fixed)
    if delta is None:
        raise _Fail(f"no plane witness for the fiber coordinate {Q0} at x = {lam}")
    W1 = compose(W, delta)
    try:
        E = Twisted(W1, var, lin)
    except AutomError as exc:
        raise _Fail(str(exc))
    return PolyMap(W1.vars, factors=(E,), fixed=W.fixed)


def conjugate_scaling(W, var, a, coordinate="y"):
    """From W(coordinate) = P, a witness for P with var replaced by a(x)*var."""
    a = P(a)
    if not a:
        raise RectifyError("scaling factor must be nonzero")
    target = W.apply(Polynomial.var(coordinate)).subs({var: Polynomial.var(var) * a})
    if a.is_constant():
        roots, unit = [], a.constant()
    else:
        unit, facs = factor_list(a)
        if any(g.degree() != 1 or g.vars != ("x",) for g, _ in facs):
            raise _Fail(f"{a} has non-rational roots")
        roots = []
        for g, m in facs:
            lc = g.coeff("x", 1).constant()
            unit *= lc**m
            roots += [-g.coeff("x", 0).constant_term() / lc] * m
    for lam in roots:
        W = _conj_root(W, var, lam, coordinate)
    if unit != 1:
        other = next(v for v in W.vars if v != var)
        S = PolyMap(W.vars, factors=(_scale(var, other, unit),), fixed=W.fixed)
        W = compose(S, W, S.inverse())
    return _check(W, target, coordinate)


# ---------------------------------------------------------------- SL2 over a univariate ring

def _divmod(a, b):
    a, b = P(a), P(b)
    if b.is_constant():
        return a / b.constant(), Polynomial.const(0)
    (w,) = b.vars
    quo = Polynomial.const(0)
    rem = a
    lc, d = b.coeff(w, b.degree(w)), b.degree(w)
    while rem and rem.degree(w) >= d:
        k = rem.degree(w)
        t = rem.coeff(w, k) / lc * Polynomial.var(w) ** (k - d)
        quo, rem = quo + t, rem - t * b
    return quo, rem


def sl2_map(M, v1, v2, fixed=()):
    """Tracked map with v1 -> M00 v1 + M01 v2, v2 -> M10 v1 + M11 v2.

    Entries lie in a univariate polynomial ring; det M must be a nonzero
    constant.  Right composition with a triangular map is a row operation.
    """
    M = [[P(c) for c in row] for row in M]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if not det.is_constant() or not det:
        raise RectifyError("matrix is not invertible over the coefficient ring")
    V1, V2 = Polynomial.var(v1), Polynomial.var(v2)
    target = {v1: M[0][0] * V1 + M[0][1] * V2, v2: M[1][0] * V1 + M[1][1] * V2}
    rows = [list(M[0]), list(M[1])]
    steps = []

    def op(i, k):
        # row_i += k * row_j
        j = 1 - i
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
        steps.append(Triangular((v1, v2)[i], (V2, V1)[i] * k))

    for _ in range(200):
        a, c = rows[0][0], rows[1][0]
        if not c:
            break
        if not a:
            op(0, Polynomial.const(1) / c.constant() if c.is_constant() else Polynomial.const(1))
        elif a.degree() <= c.degree():
            op(1, -_divmod(c, a)[0])
        else:
            op(0, -_divmod(a, c)[0])
    if rows[1][0] or not rows[0][0].is_constant():
        raise RectifyError("Euclidean reduction failed")
    if rows[0][1]:
        op(0, -rows[0][1] / rows[1][1].constant())
    d1, d2 = rows[0][0].constant(), rows[1][1].constant()
    diag = Affine((v1, v2), ((d1, 0), (0, d2)), (0, 0))
    factors = [diag] + [s.inverse() for s in reversed(steps)]
    out = PolyMap((v1, v2), factors=factors, fixed=fixed)
    if out.images != target:
        raise AssertionError("SL2 recomposition mismatch")
    return out


# ---------------------------------------------------------------- (pform)

@dataclass
class PformDecomposition:
    q: Polynomial
    r: Polynomial
    a0: Polynomial
    a1: Polynomial
    f_tilde: Polynomial
    g0: Polynomial
    g1: Polynomial
    g2: Polynomial

    def expand(self):
        ft = self.f_tilde
        inner = self.r * ft * U + self.g0 * Y**2 + self.g1 * Z + sqf_part(ft) * self.g2 * Z**2
        return self.q * inner + self.a0 + self.a1 * Y

    def to_json(self):
        return {k: str(getattr(self, k)) for k in ("q", "r", "a0", "a1", "f_tilde", "g0", "g1", "g2")}


def _x_only(p):
    return all(v == "x" for v in p.vars)


def pform_decompose(f, g):
    """Normal form p = q[r f~ u + g0 y^2 + g1 z + f~red g2 z^2] + a0 + a1 y."""
    f, g = P(f), P(g)
    if _x_only(f):
        raise RectifyError("pform needs f outside Q[x]")
    if "u" in g.vars:
        raise RectifyError("g must not involve u")
    p = f * U + g
    a0, a1, rest = {}, {}, {}
    for e, c in p.terms.items():
        mono = dict(zip(p.vars, e))
        key = tuple(mono.get(v, 0) for v in SPACE)
        xpart = Polynomial({(mono.get("x", 0),): c}, ("x",))
        if key == (0, 0, 0):
            a0[key] = a0.get(key, Polynomial.const(0)) + xpart
        elif key == (1, 0, 0):
            a1[key] = a1.get(key, Polynomial.const(0)) + xpart
        else:
            rest[key] = rest.get(key, Polynomial.const(0)) + xpart
    A0 = a0.get((0, 0, 0), Polynomial.const(0))
    A1 = a1.get((1, 0, 0), Polynomial.const(0))
    q = poly_gcd_list(rest.values())
    q = q.monic() if not q.is_constant() else Polynomial.const(1)
    pbar = exquo(p - A0 - A1 * Y, q)
    fbar = pbar.coeff("u", 1)
    g_rest = pbar.coeff("u", 0)
    g1 = g_rest.coeff("z", 1)
    g0y2 = g_rest.coeff("z", 0)
    g0 = exquo(g0y2, Y**2) if g0y2 else Polynomial.const(0)
    g2bar = exquo(g_rest - g0y2 - g1 * Z, Z**2) if g_rest - g0y2 - g1 * Z else Polynomial.const(0)
    r = poly_gcd_list([c for c in fbar.coeffs("y") if c])
    r = r.monic() if not r.is_constant() else Polynomial.const(1)
    ft = exquo(fbar, r)
    try:
        g2 = exquo(g2bar, sqf_part(ft))
    except PolyError:
        raise RectifyError("the z^2 block is not divisible by f~red: p is not a residual x-variable")
    dec = PformDecomposition(q, r, A0, A1, ft, g0, g1, g2)
    assert dec.expand() == p
    if not is_empty([ft, g1], nonzero=q):
        raise RectifyError("V(f~) and V(g1) meet outside q = 0: p is not a residual x-variable")
    return dec


# ---------------------------------------------------------------- the dispatch

def _assemble(q, ft, g0, g1, a0, a1, g2=None):
    inner = ft * U + g0 * Y**2 + g1 * Z
    if g2 is not None:
        inner = inner + sqf_part(ft) * g2 * Z**2
    return q * inner + a0 + a1 * Y


def _plane_case(g, trace):
    # f = 0: g must be an x-variable of Q[x][y, z]
    for v, o in (("y", "z"), ("z", "y")):
        if g.degree(v) == 1 and g.coeff(v, 1).is_constant():
            c = g.coeff(v, 1).constant()
            m = g.coeff(v, 0)
            factors = [Triangular(v, m / c), _scale(v, o, c)]
            if v == "z":
                factors.append(_swap("y", "z"))
            trace.append(f"f = 0: {g} is linear in {v}")
            return PolyMap(("y", "z", "u"), factors=factors, fixed=("x",))
    raise _Fail("f = 0 and g is not visibly a coordinate")


def _specase(f, g, trace):
    trace.append("specase: f in Q[x], start from u + g and twist u by f")
    W0 = PolyMap(("y", "z", "u"), factors=(Triangular("u", g), _swap("y", "u")), fixed=("x",))
    _check(W0, U + g, "y")
    return conjugate_scaling(W0, "u", f)


def _var1(dec, trace, g2=True):
    ft, g1 = dec.f_tilde, dec.g1
    tail = sqf_part(ft) * dec.g2 * Z**2 if g2 else Polynomial.const(0)
    alpha = ruve_a(RingSpec.BIVARIATE_Q, ft, dec.g0 * Y**2, g1, tail)
    alpha = PolyMap(alpha.vars, factors=alpha.factors, fixed=("x", "y"))
    a1, q = dec.a1, dec.q
    if q.is_constant() and a1.is_constant():
        M = [[a1, q], [Polynomial.const(0), Polynomial.const(1) / a1.constant()]] if a1 else \
            [[a1, q], [-1 / q.constant(), Polynomial.const(0)]]
    else:
        s = bezout_mod(a1, q) if not q.is_constant() else Polynomial.const(0)
        if s is None:
            raise _Fail("gcd(q, a1) != 1")
        t = exquo(1 - s * a1, q)
        M = [[a1, q], [-t, s]]
    beta = compose(sl2_map(M, "y", "z", fixed=("x",)),
                   PolyMap(("y", "z"), factors=(Triangular("y", dec.a0),), fixed=("x",)))
    trace.append("var1: RuVe(a) over Q[x,y] for the bracket, affine beta for q, a0, a1")
    return compose(alpha, beta)


def _intersections(dec):
    """Rational x0 (roots of q) over which V(f~) and V(g1) meet."""
    out = []
    for x0, _ in rational_roots(dec.q) if not dec.q.is_constant() else []:
        if not is_empty([dec.f_tilde, dec.g1, X - x0]):
            out.append(x0)
    return out


def _deg1(dec, trace, depth):
    ft, g1 = dec.f_tilde, dec.g1
    pts = _intersections(dec)
    if not pts:
        raise _Fail("V(f~) and V(g1) meet over non-rational roots of q")
    x0 = pts[0]
    lam = Polynomial.const(x0)
    fx, gx = ft.subs({"x": lam}), g1.subs({"x": lam})
    d = gcd(fx, gx)
    a, b = exquo(gx, d), exquo(fx, d)
    if not a:
        s, t = Polynomial.const(0), Polynomial.const(1) / b.constant()
    else:
        s = bezout_mod(a, b) if not b.is_constant() else Polynomial.const(0)
        if s is None:
            raise _Fail("no Bezout relation in the fiber")
        t = exquo(1 - s * a, b) if b else Polynomial.const(0)
        if not b:
            s = Polynomial.const(1) / a.constant()
    gamma = sl2_map([[s, -b], [t, a]], "z", "u", fixed=("x", "y"))
    g1_new = s * g1 + t * ft
    f_new = exquo(a * ft - b * g1, X - lam)
    before = intersection_index([ft, g1])
    after = intersection_index([f_new, g1_new])
    assert before is not None and after is not None and after < before, "intersection index must drop"
    p = _assemble(dec.q, ft, dec.g0, g1, dec.a0, dec.a1)
    p_hat = _assemble(dec.q, f_new, dec.g0, g1_new, dec.a0, dec.a1)
    assert gamma.apply(p) == p_hat.subs({"u": U * (X - lam)})
    trace.append(f"deg1: linear gamma at x = {x0}, intersection index {before} -> {after}")
    W = _rect(p_hat, trace, depth + 1)
    W = conjugate_scaling(W, "u", X - lam)
    return compose(gamma.inverse(), W)


def _adpr(dec, trace, depth):
    g1 = dec.g1
    p = dec.expand()
    coeffs = p.coeffs("z")
    new = []
    for j, c in enumerate(coeffs):
        if not c:
            new.append(c)
            continue
        if not divides(g1**j, c):
            raise _Fail("z^2 block is not a polynomial in g1 z")
        new.append(exquo(c, g1**j))
    pbar = sum((c * Z**j for j, c in enumerate(new)), Polynomial.const(0))
    trace.append(f"adpr: rectify p(x, y, z/({g1}), u) and twist z by {g1}")
    W = _rect(pbar, trace, depth + 1)
    return conjugate_scaling(W, "z", g1)


def _rect(p, trace, depth=0):
    """Witness W on (y, z, u) over Q[x] with W(y) = p, or raise _Fail."""
    if depth > 12:
        raise _Fail("recursion bound reached")
    if p.degree("u") > 1:
        raise _Fail("p is not linear in u")
    f, g = p.coeff("u", 1), p.coeff("u", 0)
    if not f:
        return _check(_plane_case(g, trace), p, "y")
    if _x_only(f):
        return _check(_specase(f, g, trace), p, "y")
    dec = pform_decompose(f, g)
    if not dec.r.is_constant():
        trace.append(f"remark r(x): rectify with r = 1, then twist u by {dec.r}")
        inner = _assemble(dec.q, dec.f_tilde, dec.g0, dec.g1, dec.a0, dec.a1, dec.g2)
        W = _rect(inner, trace, depth + 1)
        return _check(conjugate_scaling(W, "u", dec.r), p, "y")
    if dec.r != 1:
        dec.f_tilde = dec.f_tilde * dec.r
        dec.g2 = dec.g2 * exquo(sqf_part(dec.f_tilde / dec.r), sqf_part(dec.f_tilde))
        dec.r = Polynomial.const(1)
    if is_empty([dec.f_tilde, dec.g1]):
        return _check(_var1(dec, trace), p, "y")
    ft = dec.f_tilde
    block = sqf_part(ft) * dec.g2
    if block and divides(ft, block):
        h = exquo(block, ft) * Z**2
        trace.append("partialres(d): u -> u - z^2 g2 lowers the z-degree to 1")
        W = _rect(p.subs({"u": U - h}), trace, depth + 1)
        return _check(compose(PolyMap(SPACE, factors=(Triangular("u", h),), fixed=("x",)), W), p, "y")
    if not block:
        return _check(_deg1(dec, trace, depth), p, "y")
    if _x_only(dec.g1):
        return _check(_adpr(dec, trace, depth), p, "y")
    raise _Fail("none of var1, partialres(b)-(d), adpr applies")


def rectify(f, g, one_stable=True):
    """Rectify p = f u + g; falls back to a 1-stable rectification in C^5."""
    f, g = P(f), P(g)
    p = f * U + g
    trace = []
    try:
        W = _rect(p, trace)
        if not verify_witness(W, p, "y"):
            raise AssertionError("witness failed verification")
        return RectifyResult(Kind.XVARIABLE, p, witness=W, trace=trace)
    except (_Fail, RectifyError) as exc:
        trace.append(f"direct rectification stopped: {exc}")
        reason = str(exc)
    if one_stable and f:
        try:
            gamma, p_n, W_n = one_stable_rectify(f, g)
            trace.append("1-stable rectification in C^5 succeeded")
            return RectifyResult(Kind.ONESTABLE, p, witness=gamma, p_n=p_n, p_n_witness=W_n, trace=trace)
        except (_Fail, RectifyError, AutomError) as exc:
            trace.append(f"1-stable rectification stopped: {exc}")
    from .classify import residual_x_variable
    res = residual_x_variable(f, g)
    if res.outcome.value == "No":
        reason = f"not a residual x-variable: {res.reason}"
    return RectifyResult(Kind.UNKNOWN, p, reason=reason, trace=trace)


# ---------------------------------------------------------------- 1-stable rectification

def _L_roots(p):
    """Rational roots of q for p; raises if q has non-rational roots."""
    rest = []
    for e, c in p.terms.items():
        mono = dict(zip(p.vars, e))
        key = tuple(mono.get(v, 0) for v in SPACE)
        if key not in ((0, 0, 0), (1, 0, 0)):
            rest.append(Polynomial({(mono.get("x", 0),): c}, ("x",)))
    if not rest:
        raise RectifyError("p lies in Q[x, y]")
    q = poly_gcd_list(rest)
    if q.is_constant():
        return []
    roots = rational_roots(q)
    if sum(m for _, m in roots) != q.degree():
        raise _Fail("L(p) contains non-rational points")
    return [r for r, _ in roots]


def _x_order(c):
    if not c:
        return None
    return min(dict(zip(c.vars, e)).get("x", 0) for e in c.terms)


def one_stable_rectify(f, g, max_steps=20):
    """gamma on C^5 with gamma((p, v)) = (p_n, v), p_n an x-variable, plus its witness."""
    f, g = P(f), P(g)
    if not f:
        raise RectifyError("f = 0: use the plane case instead")
    p = f * U + g
    gamma = PolyMap(("y", "v"), factors=(), fixed=("x", "z", "u"))
    zero = Polynomial.const(0)
    for _ in range(max_steps):
        roots = _L_roots(p)
        if not roots:
            break
        x0 = roots[0]
        pt = p.subs({"x": X + x0})
        base = pt.subs({"x": zero})
        A1 = base.coeff("y", 1).constant_term()
        A0 = base.coeff("y", 0).constant_term()
        if not A1 or base != A0 + A1 * Y:
            raise RectifyError("p is not a residual x-plane")
        tau = PolyMap(("y", "v"), factors=(Affine(("y", "v"), ((1 / A1, 0), (0, 1)), (-A0 / A1, 0)),),
                      fixed=("x", "z", "u"))
        cur = tau.apply(pt)
        for _ in range(max_steps):
            ph = exquo(cur - Y, X)
            at0 = ph.subs({"y": zero})
            c0 = at0.subs({"z": zero, "u": zero})
            rest_order = _x_order(at0 - c0)
            if not c0 or (rest_order is not None and _x_order(c0) > rest_order):
                break
            shift = PolyMap(("y", "v"), factors=(Triangular("y", -X * c0),), fixed=("x", "z", "u"))
            tau = compose(shift, tau)
            cur = shift.apply(cur)
        ph = exquo(cur - Y, X)
        at0 = ph.subs({"y": zero})
        k = _x_order(at0)
        if k is None:
            raise RectifyError("p is not a residual x-plane")
        gk, source, target = gamma_k(ph, X, k, "y", "v", fixed=("x", "z", "u"))
        assert source == cur
        step = compose(gk, tau).transform(subs={"x": X - x0})
        p_next = target.subs({"x": X - x0})
        if not maps_ideal_onto(step, p, p_next):
            raise AssertionError("1-stable step does not map the ideals")
        assert len(_L_roots(p_next)) < len(roots), "card L(p) must drop"
        gamma = compose(step, gamma)
        p = p_next
    else:
        raise _Fail("1-stable induction bound reached")
    try:
        W = _rect(p, [])
    except _Fail as exc:
        raise RectifyError(f"not a residual x-plane: {exc}") from None
    if not verify_witness(W, p, "y"):
        raise AssertionError("final witness failed verification")
    return gamma, p, W


# ---------------------------------------------------------------- Wright's case f u^n + g

@dataclass
class IconForm:
    Phi: Polynomial   # in Q[x, t]
    a: Polynomial     # in Q[x]
    Q: Polynomial     # in Q[x, z]

    def expand(self):
        return self.Phi.subs({"t": self.a * Y + Z * self.Q})


def _antiderivative(p, t="t"):
    out = Polynomial.const(0)
    T = Polynomial.var(t)
    for j, c in enumerate(p.coeffs(t)):
        if c:
            out = out + c * T ** (j + 1) / (j + 1)
    return out


def _normalize_icon(form):
    # make the argument monic in x so that the decomposition is canonical
    lc = form.a.leading_coefficient() if form.a else Fraction(1)
    if lc != 1 and lc:
        T = Polynomial.var("t")
        return IconForm(form.Phi.subs({"t": T * lc}), form.a / lc, form.Q / lc)
    return form


def icon_decompose(f):
    """f = Phi(x, a(x) y + z Q(x, z)), or None when no such form exists."""
    f = P(f)
    if not f:
        raise RectifyError("f must be nonzero")
    form = _icon(f)
    if form is None:
        return None
    form = _normalize_icon(form)
    return form if form.expand() == f else None


def _icon(f):
    if f.degree("y") <= 0:
        if _x_only(f):
            return IconForm(f, Polynomial.const(1), Polynomial.const(0))
        return None
    inner = _icon(f.diff("y"))
    if inner is None:
        return None
    at, Qt = inner.a, inner.Q
    T = at * Y + Z * Qt
    Psi = _antiderivative(inner.Phi)
    rem = at * f - Psi.subs({"t": T})
    if "y" in rem.vars:
        return None
    rx = rem.subs({"z": Polynomial.const(0)})
    Psi = Psi + rx
    zR = rem - rx
    if f.degree("y") == 1:
        psi0, psi1 = Psi.coeff("t", 0), Psi.coeff("t", 1)
        N = psi0 + psi1 * Z * Qt + zR
        if not divides(at, N):
            return None
        N = exquo(N, at)
        phi0 = N.subs({"z": Polynomial.const(0)})
        Q = exquo(N - phi0, Z) if N - phi0 else Polynomial.const(0)
        return IconForm(Polynomial.var("t") + phi0, psi1, Q)
    if zR:
        return None
    if not Qt:
        Phi = Psi.subs({"t": Polynomial.var("t") * at})
        return IconForm(exquo(Phi, at), Polynomial.const(1), Polynomial.const(0)) if divides(at, Phi) else None
    g0 = gcd(at, poly_gcd_list(Qt.coeffs("z")))
    if not g0.is_constant():
        Psi = Psi.subs({"t": Polynomial.var("t") * g0})
        at, Qt = exquo(at, g0), exquo(Qt, g0)
    if not divides(at, Psi):
        return None
    return IconForm(exquo(Psi, at), at, Qt)


def wright_rectify(f, g, n):
    """x-variable witness for p = f u^n + g (n >= 2), with coordinate z."""
    f, g = P(f), P(g)
    if n < 2:
        raise RectifyError("n must be at least 2")
    if "u" in f.vars or "u" in g.vars:
        raise RectifyError("f and g must lie in Q[x, y, z]")
    p = f * U**n + g
    trace = []
    theta = None
    for v, o in (("z", "y"), ("y", "z")):
        if g.degree(v) == 1 and g.coeff(v, 1).is_constant():
            c = g.coeff(v, 1).constant()
            m = g.coeff(v, 0)
            factors = [Triangular(v, m / c), _scale(v, o, c)]
            if v == "y":
                factors.append(_swap("y", "z"))
            theta = PolyMap(("y", "z"), factors=factors, fixed=("x",))
            break
    if theta is None:
        raise RectifyError("g is not visibly an x-variable of Q[x][y, z]")
    _check(theta, g, "z")
    f1 = theta.inverse().apply(f)
    form = icon_decompose(f1)
    if form is None:
        return RectifyResult(Kind.UNKNOWN, p, coordinate="z", reason="no (icon) form for f", trace=trace)
    trace.append(f"icon: Phi = {form.Phi}, a = {form.a}, Q = {form.Q}")
    Pmap = PolyMap(SPACE, factors=(Triangular("y", Z * form.Q),
                                   Triangular("z", form.Phi.subs({"t": Y}) * U**n)), fixed=("x",))
    try:
        W = conjugate_scaling(Pmap, "y", form.a, coordinate="z") if form.a != 1 else Pmap
    except _Fail as exc:
        return RectifyResult(Kind.UNKNOWN, p, coordinate="z", reason=str(exc), trace=trace)
    W = compose(PolyMap(SPACE, factors=theta.factors, fixed=("x",)), W)
    if not verify_witness(W, p, "z"):
        return RectifyResult(Kind.UNKNOWN, p, coordinate="z", reason="witness verification failed", trace=trace)
    return RectifyResult(Kind.XVARIABLE, p, witness=W, coordinate="z", trace=trace)


# ---------------------------------------------------------------- scrambling known x-variables

KNOWN_X_VARIABLES = (
    "x*y^2*u + y + x*z",
    "y^2*u + z",
    "x*u + y",
    "y + x*(y*u + z)",
    "(x + 1)*y*u + z + y^2",
    "x^2*y*u + y + x*z + x^2*y^2",
    "y + x*(y*u + (x + y)*z)",
)


def scramble(p, seed, steps=5, max_degree=2):
    """Apply up to `steps` random elementary maps fixing x that keep p = f u + g."""
    rng = random.Random(seed)
    p = P(p)
    factors = []
    for _ in range(rng.randint(1, steps)):
        kind = rng.choice(("u", "z", "y", "scale"))
        if kind == "u":
            h = random_poly(rng, ("x", "y", "z"), max_degree, terms=2, coeff=2)
            factors.append(Triangular("u", h))
        elif kind == "z":
            factors.append(Triangular("z", random_poly(rng, ("x", "y"), max_degree, terms=2, coeff=2)))
        elif kind == "y":
            factors.append(Triangular("y", random_poly(rng, ("x",), max_degree, terms=2, coeff=2)))
        else:
            v = rng.choice(SPACE)
            o = next(w for w in SPACE if w != v)
            factors.append(_scale(v, o, rng.choice((-2, -1, 2, 3))))
    S = PolyMap(SPACE, factors=factors, fixed=("x",))
    return S.apply(p), S
