"""Locally nilpotent derivations, weight enumerations and exoticity certificates."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import (P, Polynomial, PolyError, Tri, WeightValue, det_poly, divides,
                   monomial_weight, principal_part, sort_vars)

VARS4 = ("x", "y", "z", "u")


class DependentError(PolyError):
    pass


@dataclass
class Derivation:
    vars: tuple
    images: dict
    modulus: Polynomial = None

    def __post_init__(self):
        self.vars = tuple(self.vars)
        self.images = {v: P(self.images.get(v, 0)) for v in self.vars}
        if self.modulus is not None:
            self.modulus = P(self.modulus)
            if not divides(self.modulus, self(self.modulus)):
                raise PolyError("derivation does not preserve the ideal of the modulus")

    def __call__(self, p):
        p = P(p)
        out = Polynomial.const(0)
        for v in self.vars:
            if v in p.vars and self.images[v]:
                out = out + self.images[v] * p.diff(v)
        return out

    def to_json(self):
        return {"variables": list(self.vars),
                "images": {v: str(self.images[v]) for v in self.vars},
                "modulus": str(self.modulus) if self.modulus is not None else None}


def _rank(rows):
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def jacobian_derivation(fixed, vars=None, seed=0, trials=5):
    """d(q) = det of the Jacobian of (fixed..., q)."""
    fixed = [P(p) for p in fixed]
    if vars is None:
        vars = sort_vars(v for p in fixed for v in p.vars)
    vars = tuple(vars)
    n = len(vars)
    if len(fixed) != n - 1:
        raise PolyError(f"need {n - 1} polynomials for {n} variables")
    jac = [[p.diff(v) for v in vars] for p in fixed]
    rng = random.Random(seed)
    independent = False
    for _ in range(trials):
        pt = {v: Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for v in vars}
        rows = [[e.evaluate(pt) for e in row] for row in jac]
        if _rank(rows) == n - 1:
            independent = True
            break
    if not independent:
        raise DependentError("the fixed polynomials look algebraically dependent")
    images = {}
    for i, v in enumerate(vars):
        last = [Polynomial.const(int(j == i)) for j in range(n)]
        images[v] = det_poly(jac + [last])
    return Derivation(vars, images)


@dataclass
class LndCheck:
    kind: str  # "LocallyNilpotentUpTo" | "NotLND" | "Inconclusive"
    bound: int
    degrees: dict = field(default_factory=dict)
    witness: str = ""

    def to_json(self):
        return {"kind": self.kind, "bound": self.bound, "degrees": self.degrees, "witness": self.witness}


def _in_span(target, basis):
    """Solve target = sum c_i basis_i over Q; None when impossible."""
    monos = sorted({e for p in [target] + basis for e in _keys(p)})
    if not basis:
        return None
    rows = [[_coef(b, m) for b in basis] + [_coef(target, m)] for m in monos]
    n = len(basis)
    if _rank([r[:n] for r in rows]) != _rank(rows):
        return None
    return True


def _keys(p):
    return [tuple(sorted(m.items())) for m, _ in p.monomials()]


def _coef(p, key):
    mono = dict(key)
    for m, c in p.monomials():
        if m == mono:
            return c
    return Fraction(0)


def bounded_lnd_check(d, bound=32):
    """Iterate d on every generator; NotLND on a linear recurrence with a_k != 0."""
    degrees = {}
    for v in d.vars:
        seq = [Polynomial.var(v)]
        for k in range(1, bound + 1):
            nxt = d(seq[-1])
            if not nxt:
                degrees[v] = k - 1
                break
            if d.modulus is None and _in_span(nxt, seq):
                return LndCheck("NotLND", bound, witness=v)
            seq.append(nxt)
        else:
            return LndCheck("Inconclusive", bound, degrees)
    return LndCheck("LocallyNilpotentUpTo", bound, degrees)


# ---------------------------------------------------------------- weights

def paper_weights(k, l, m, e, N):
    """d_x = -lN, d_y = -kN, d_z = sqrt2, d_u = klmN + e sqrt2."""
    return {"x": WeightValue(-l * N), "y": WeightValue(-k * N),
            "z": WeightValue(0, 1), "u": WeightValue(k * l * m * N, e)}


@dataclass(frozen=True)
class HomogShape:
    monomials: tuple

    def __str__(self):
        if len(self.monomials) == 1:
            return str(self.monomials[0])
        names = ["λ", "μ", "ν", "ξ"]
        return " + ".join(f"{names[i]}*{m}" for i, m in enumerate(self.monomials))


def _monomial(exps, vars):
    out = Polynomial.const(1)
    for v, k in zip(vars, exps):
        out = out * Polynomial.var(v) ** k
    return out


def homog_enumerate(weights, e, D, vars=VARS4):
    """Irreducible homogeneous shapes of degree <= D with deg_z < e."""
    if all(weights[v].irr == 0 for v in vars):
        raise PolyError("commensurable weights: the enumeration needs an irrational weight")
    iz = vars.index("z") if "z" in vars else None
    classes = {}
    n = len(vars)

    def gen(prefix, left):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in range(left + 1):
            yield from gen(prefix + [k], left - k)

    for exps in gen([], D):
        if not any(exps):
            continue
        if iz is not None and exps[iz] >= e:
            continue
        w = monomial_weight(dict(zip(vars, exps)), weights)
        classes.setdefault(w, []).append(exps)
    shapes = []
    for w, members in classes.items():
        if len(members) == 1:
            (ex,) = members
            if sum(ex) == 1:
                shapes.append(HomogShape((_monomial(ex, vars),)))
            continue
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                ea, eb = members[a], members[b]
                common = [min(i, j) for i, j in zip(ea, eb)]
                diff = [i - j for i, j in zip(ea, eb)]
                if any(common) or math.gcd(*diff) != 1:
                    continue
                pair = sorted([_monomial(ea, vars), _monomial(eb, vars)], key=lambda p: (p.degree(), str(p)))
                shapes.append(HomogShape(tuple(pair)))
    shapes.sort(key=lambda s: (len(s.monomials), [m.degree() for m in s.monomials], str(s)))
    return shapes


# ---------------------------------------------------------------- certificates

@dataclass
class ExoticityCertificate:
    kind: str  # "Forme" | "Pres3"
    params: dict
    parts: dict
    parameter_checks: list
    obstruction: dict

    def to_json(self):
        return {"normal_form": self.kind, "params": self.params, "parts": self.parts,
                "parameter_checks": [[c, ok] for c, ok in self.parameter_checks],
                "obstruction": self.obstruction}


@dataclass
class NotApplicable:
    reason: str

    def to_json(self):
        return {"not_applicable": self.reason}


def obstruction_record(l, m, e):
    """[(1 - 1/(lm)) e - 1] t = -1 has no solution t >= 0; checked for t <= e."""
    c = (1 - Fraction(1, l * m)) * e - 1
    checked = [t for t in range(e + 1)]
    ok = c >= 0 and all(c * t != -1 for t in checked)
    return {"coefficient": str(c), "equation": f"({c})*t = -1", "checked_t": checked,
            "no_solution": ok}


def _params_ok(checks):
    return all(ok for _, ok in checks)


def exoticity_certificate(f, g, reports=None):
    """Normal-form certificate for an exotic structure, or NotApplicable."""
    from .geometry import Cls, canonical_factorization, homeo_line, plane_curve_smooth

    f, g = P(f), P(g)
    if reports is None:
        _, _, _, reports = canonical_factorization(f, g)
    nonhoriz = [r for r in reports if r.cls is not Cls.HORIZONTAL]
    if len(nonhoriz) != 1:
        return NotApplicable("expected a single non-horizontal component")
    rep = nonhoriz[0]
    F, m = rep.factor, rep.multiplicity
    if not plane_curve_smooth(F):
        return _forme(f, g, F, m)
    if rep.cls is Cls.SLANTED and rep.c_smooth is Tri.NO:
        return _pres3(f, g, F, m, homeo_line)
    return NotApplicable("C_non-horiz and Gamma_non-horiz are smooth")


def _forme(f, g, F, m):
    from .autom import Affine, PolyMap, compose
    from .geometry import homeo_line

    res = homeo_line(F)
    if res.verdict is not Tri.YES or res.cusp_model is None:
        return NotApplicable("no Lin-Zaidenberg model x^k - y^l for Gamma_non-horiz")
    G, phi, a, b = res.cusp_model
    cx, cy = G.coeff("x", a).constant_term(), G.coeff("y", b).constant_term()
    sx, sy = _root_rational(1 / cx, a), _root_rational(-1 / cy, b)
    if sx is None or sy is None:
        return NotApplicable("model scaling is not rational")
    scale = PolyMap(("x", "y"), factors=(Affine(("x", "y"), ((sx, 0), (0, sy)), (0, 0)),))
    phi = compose(scale, phi)
    k, l = a, b
    model = Polynomial.var("x") ** k - Polynomial.var("y") ** l
    if phi.apply(F) != model:
        return NotApplicable("normalization mismatch")
    fn, gn = phi.apply(f), phi.apply(g)
    e = gn.degree("z")
    if e < 2:
        return NotApplicable("z-degree of g below 2")
    lead = gn.coeff("z", e)
    c0 = _constant_mod(lead, model)
    if c0 is None:
        return NotApplicable("leading z-coefficient is not constant modulo the model")
    horiz = fn / model**m
    if not horiz.is_constant():
        return NotApplicable("horizontal part present; not handled")
    U = Polynomial.var("u")
    p = (fn * U + gn) / c0
    N = 100
    weights = {"x": WeightValue(-l * N), "y": WeightValue(-k * N), "z": WeightValue(0, 1),
               "u": WeightValue(k * l * m * N, e)}
    pp = principal_part(p, weights)
    expect = model**m * U * (horiz.constant() / c0) + Polynomial.var("z") ** e
    checks = [
        ("k >= 2", k >= 2), ("l >= 2", l >= 2), ("e >= 2", e >= 2), ("m >= 1", m >= 1),
        ("gcd(k, l) = 1", math.gcd(k, l) == 1),
        ("principal part is (x^k - y^l)^m u + z^e", pp == expect),
        ("relation z^e + (x^k - y^l)^m u = 0 in the graded model", (pp - expect).is_zero()),
    ]
    obs = obstruction_record(l, m, e)
    checks.append(("obstruction has no solution", obs["no_solution"]))
    if not _params_ok(checks):
        return NotApplicable("parameter checks failed: " + ", ".join(c for c, ok in checks if not ok))
    parts = {"normalized_p": str(p), "principal_part": str(pp), "coordinate_change": {
        v: str(phi.images[v]) for v in ("x", "y")}, "weights_N": N}
    return ExoticityCertificate("Forme", {"k": k, "l": l, "m": m, "e": e}, parts, checks, obs)


def _pres3(f, g, F, m, homeo_line):
    from .autom import Affine, PolyMap, compose

    if F.degree() != 1:
        return NotApplicable("Gamma_non-horiz is not a line")
    # make F = x
    res = homeo_line(F)
    psi = res.coordinate_map
    fn, gn = psi.apply(f), psi.apply(g)
    X = Polynomial.var("x")
    if fn != X**m * fn.coeff("x", m) or not fn.coeff("x", m).is_constant():
        return NotApplicable("f is not a monomial x^m after normalization")
    g0 = gn.subs({"x": Polynomial.const(0)})
    plane = g0.subs({"y": Polynomial.var("x"), "z": Polynomial.var("y")})
    r = homeo_line(plane)
    if r.cusp_model is None:
        return NotApplicable("no Lin-Zaidenberg model for the special fibre")
    G, phi, a, b = r.cusp_model
    cx, cy = G.coeff("x", a).constant_term(), G.coeff("y", b).constant_term()
    sx, sy = _root_rational(1 / cx, a), _root_rational(1 / cy, b)
    if sx is None or sy is None:
        return NotApplicable("model scaling is not rational")
    phi = compose(PolyMap(("x", "y"), factors=(Affine(("x", "y"), ((sx, 0), (0, sy)), (0, 0)),)), phi)
    # back to (y, z) names
    ren = {"x": Polynomial.var("y"), "y": Polynomial.var("z")}
    yz = {"y": phi.images["x"].subs(ren), "z": phi.images["y"].subs(ren)}
    fn2, gn2 = fn.subs(yz), gn.subs(yz)
    k, l = a, b
    c = fn2.coeff("x", m).constant()
    U = Polynomial.var("u")
    p = fn2 * U + gn2
    weights = {"x": WeightValue(-1), "y": WeightValue(0), "z": WeightValue(0), "u": WeightValue(m)}
    pp = principal_part(p, weights)
    expect = X**m * U * c + Polynomial.var("y") ** k + Polynomial.var("z") ** l
    hat = {"x": k * l, "y": l * m, "z": k * m}
    yk_zl = Polynomial.var("y") ** k + Polynomial.var("z") ** l
    homog = len({monomial_weight(mo, {v: WeightValue(w) for v, w in hat.items()}) for mo, _ in yk_zl.monomials()}) == 1
    checks = [
        ("k >= 2", k >= 2), ("l >= 2", l >= 2), ("m >= 2", m >= 2),
        ("gcd(k, l) = 1", math.gcd(k, l) == 1),
        ("principal part is x^m u + y^k + z^l", pp == expect),
        ("y^k + z^l homogeneous for (kl, lm, km)", homog),
    ]
    obs = obstruction_record(l, m, l)
    checks.append(("obstruction has no solution", obs["no_solution"]))
    if not _params_ok(checks):
        return NotApplicable("parameter checks failed: " + ", ".join(c for c, ok in checks if not ok))
    parts = {"normalized_p": str(p), "principal_part": str(pp), "weights_hat": hat}
    return ExoticityCertificate("Pres3", {"m": m, "k": k, "l": l}, parts, checks, obs)


def _root_rational(c, n):
    """A rational s with s^n = c, or None."""
    c = Fraction(c)
    if c < 0 and n % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    num, den = abs(c.numerator), c.denominator
    rn, rd = round(num ** (1 / n)), round(den ** (1 / n))
    for a in (rn - 1, rn, rn + 1):
        for b in (rd - 1, rd, rd + 1):
            if a > 0 and b > 0 and a**n == num and b**n == den:
                return sign * Fraction(a, b)
    return None


def _constant_mod(p, model):
    """Constant c with p - c divisible by model, else None."""
    c = p.subs({v: Polynomial.const(0) for v in p.vars}).constant() if p.vars else p.constant()
    if c and divides(model, p - c):
        return c
    return None
