"""Polynomial maps with tracked elementary factorizations.

A map is stored by the images of its moving variables.  ``alpha.apply(p)``
substitutes those images into ``p``; ``compose(a, b)`` is the map with
``compose(a, b).apply(p) == a.apply(b.apply(p))``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .poly import P, Polynomial, PolyError, det_poly, divides, exquo, parse, sort_vars


class AutomError(PolyError):
    pass


def _fmt(c):
    return str(Fraction(c))


# ---------------------------------------------------------------- elementary maps

@dataclass(frozen=True)
class Affine:
    """vars[i] -> sum_j matrix[i][j] * vars[j] + shift[i]."""

    vars: tuple
    matrix: tuple
    shift: tuple

    def __post_init__(self):
        n = len(self.vars)
        m = tuple(tuple(Fraction(c) for c in row) for row in self.matrix)
        s = tuple(Fraction(c) for c in self.shift)
        if len(m) != n or any(len(r) != n for r in m) or len(s) != n:
            raise AutomError("affine map has inconsistent shape")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", s)
        if _det(m) == 0:
            raise AutomError("affine map is singular")

    kind = "affine"

    def images(self):
        out = {}
        for v, row, s in zip(self.vars, self.matrix, self.shift):
            img = Polynomial.const(s)
            for c, w in zip(row, self.vars):
                if c:
                    img = img + Polynomial.var(w) * c
            out[v] = img
        return out

    def inverse(self):
        inv = _inverse(self.matrix)
        n = len(self.vars)
        shift = tuple(-sum(inv[i][j] * self.shift[j] for j in range(n)) for i in range(n))
        return Affine(self.vars, inv, shift)

    def to_json(self):
        return {"kind": "affine", "variables": list(self.vars),
                "matrix": [[_fmt(c) for c in row] for row in self.matrix],
                "shift": [_fmt(c) for c in self.shift]}


@dataclass(frozen=True)
class Triangular:
    """var -> var + addend, with addend free of var."""

    var: str
    addend: Polynomial

    kind = "triangular"

    def __post_init__(self):
        if self.var in self.addend.vars:
            raise AutomError(f"triangular addend may not contain {self.var}")

    def images(self):
        return {self.var: Polynomial.var(self.var) + self.addend}

    def inverse(self):
        return Triangular(self.var, -self.addend)

    def to_json(self):
        return {"kind": "triangular", "variable": self.var, "addend": str(self.addend)}


@dataclass(frozen=True)
class Explicit:
    """An automorphism given by the images of itself and of its inverse.

    On construction the backward images are substituted into the forward
    map and must return the variables.  That makes the map surjective, and a
    surjective endomorphism of a Noetherian ring is injective, so the
    backward map is the two-sided inverse.
    """

    vars: tuple
    forward: tuple
    backward: tuple

    kind = "explicit"

    def __post_init__(self):
        fw = tuple(P(p) for p in self.forward)
        bw = tuple(P(p) for p in self.backward)
        if len(fw) != len(self.vars) or len(bw) != len(self.vars):
            raise AutomError("explicit map has inconsistent shape")
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "forward", fw)
        object.__setattr__(self, "backward", bw)
        f, b = dict(zip(self.vars, fw)), dict(zip(self.vars, bw))
        for v in self.vars:
            if b[v].subs(f) != Polynomial.var(v):
                raise AutomError("explicit images are not mutually inverse")

    def images(self):
        return dict(zip(self.vars, self.forward))

    def inverse(self):
        # the construction check is symmetric, so the swapped pair needs no recheck
        inv = object.__new__(Explicit)
        for k, v in (("vars", self.vars), ("forward", self.backward), ("backward", self.forward)):
            object.__setattr__(inv, k, v)
        return inv

    def to_json(self):
        return {"kind": "explicit", "variables": list(self.vars),
                "forward": [str(p) for p in self.forward],
                "backward": [str(p) for p in self.backward]}


class Twisted:
    """sigma o inner o sigma^-1 for sigma: var -> lin * var.

    The images are polynomial only when the division by lin is exact,
    which is checked here; the inverse is the twist of inner's inverse.
    """

    kind = "twisted"

    def __init__(self, inner, var, lin):
        if inner.factors is None:
            raise AutomError("twisting needs a tracked inner map")
        self.inner, self.var, self.lin = inner, var, P(lin)
        if not self.lin or var in self.lin.vars or any(v in self.lin.vars for v in inner.vars):
            raise AutomError("twisting factor must be a nonzero coefficient")
        self.vars = inner.vars
        self._fwd = self._twist(inner.images)
        self._twist(inner.inverse().images)

    def _twist(self, images):
        sub = {self.var: Polynomial.var(self.var) * self.lin}
        out = {}
        for v in self.vars:
            img = images[v].subs(sub)
            if v == self.var:
                try:
                    img = exquo(img, self.lin)
                except PolyError:
                    raise AutomError("twisted map is not polynomial")
            out[v] = img
        return out

    def images(self):
        return dict(self._fwd)

    def inverse(self):
        return Twisted(self.inner.inverse(), self.var, self.lin)

    def verify(self):
        return self.inner.check_inverse()

    def __eq__(self, other):
        return isinstance(other, Twisted) and (self.var, self.lin) == (other.var, other.lin) \
            and self.inner == other.inner

    def __repr__(self):
        return f"Twisted({self.var} -> ({self.lin})*{self.var}, {self.inner!r})"

    def to_json(self):
        return {"kind": "twisted", "variable": self.var, "factor": str(self.lin),
                "inner": self.inner.to_json()}


def transform_factor(f, rename=None, subs=None):
    """Rename moving variables and substitute into coefficients of a factor."""
    rename = rename or {}
    sub = {a: Polynomial.var(b) for a, b in rename.items()}
    sub.update(subs or {})
    fix = lambda p: P(p).subs(sub) if sub else P(p)
    if isinstance(f, Affine):
        return Affine(tuple(rename.get(v, v) for v in f.vars), f.matrix, f.shift)
    if isinstance(f, Triangular):
        return Triangular(rename.get(f.var, f.var), fix(f.addend))
    if isinstance(f, Twisted):
        return Twisted(f.inner.transform(rename, subs), rename.get(f.var, f.var), fix(f.lin))
    return Explicit(tuple(rename.get(v, v) for v in f.vars),
                    tuple(fix(p) for p in f.forward), tuple(fix(p) for p in f.backward))


def _det(m):
    n = len(m)
    a = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return det


def _inverse(m):
    n = len(m)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def elementary_from_json(rec):
    if rec["kind"] == "affine":
        return Affine(tuple(rec["variables"]),
                      tuple(tuple(Fraction(c) for c in row) for row in rec["matrix"]),
                      tuple(Fraction(c) for c in rec["shift"]))
    if rec["kind"] == "triangular":
        return Triangular(rec["variable"], parse(rec["addend"], None))
    if rec["kind"] == "twisted":
        return Twisted(PolyMap.from_json(rec["inner"]), rec["variable"], parse(rec["factor"], None))
    if rec["kind"] == "explicit":
        return Explicit(tuple(rec["variables"]),
                        tuple(parse(p, None) for p in rec["forward"]),
                        tuple(parse(p, None) for p in rec["backward"]))
    raise AutomError(f"unknown factor kind {rec['kind']!r}")


# ---------------------------------------------------------------- maps

class PolyMap:
    """Endomorphism of Q[fixed][vars] fixing the coefficient variables."""

    def __init__(self, vars, images=None, factors=None, fixed=()):
        self.vars = tuple(vars)
        self.fixed = tuple(fixed)
        if factors is not None:
            factors = tuple(factors)
            built = _images_from_factors(self.vars, factors)
            if images is not None:
                images = {v: P(images.get(v, Polynomial.var(v))) for v in self.vars}
                if images != built:
                    raise AutomError("images do not match the tracked factors")
            images = built
        elif images is None:
            images = {}
        self.images = {v: P(images.get(v, Polynomial.var(v))) for v in self.vars}
        self.factors = factors

    @classmethod
    def identity(cls, vars, fixed=()):
        return cls(vars, factors=(), fixed=fixed)

    @classmethod
    def from_factors(cls, vars, factors, fixed=()):
        return cls(vars, factors=factors, fixed=fixed)

    @property
    def dim(self):
        return len(self.vars) + len(self.fixed)

    @property
    def tracked(self):
        return self.factors is not None

    def __call__(self, p):
        return self.apply(p)

    def apply(self, p):
        return P(p).subs(self.images)

    def is_identity(self):
        return all(self.images[v] == Polynomial.var(v) for v in self.vars)

    def inverse(self):
        if self.factors is None:
            raise AutomError("untracked maps cannot be inverted")
        inv = tuple(f.inverse() for f in reversed(self.factors))
        return PolyMap(self.vars, factors=inv, fixed=self.fixed)

    def check_inverse(self):
        """alpha o alpha^-1 is the identity.

        One side suffices: it makes alpha surjective, hence injective on a
        Noetherian ring, so alpha^-1 is also a left inverse.  The other
        composite can be far larger to expand.

        Maps containing twisted factors are checked factor by factor: the
        factor list of alpha^-1 is the reversed list of factor inverses, so
        the composite cancels pairwise once every factor is verified.  The
        expanded composite would be far too large to form.
        """
        inv = self.inverse()
        if any(isinstance(f, Twisted) for f in self.factors):
            return all(f.verify() for f in self.factors if isinstance(f, Twisted))
        return compose(self, inv).is_identity()

    def jacobian_det(self):
        rows = [[self.images[v].diff(w) for w in self.vars] for v in self.vars]
        return det_poly(rows)

    def extend(self, vars):
        """Same map on a larger variable list (new variables fixed)."""
        new = tuple(v for v in vars if v not in self.vars)
        return PolyMap(self.vars + new,
                       images=None if self.factors is not None else self.images,
                       factors=self.factors,
                       fixed=tuple(v for v in self.fixed if v not in new))

    def __eq__(self, other):
        return isinstance(other, PolyMap) and _same_images(self, other)

    def transform(self, rename=None, subs=None, fixed=None):
        """Rename variables and substitute into the coefficients of every factor."""
        rename = rename or {}
        vars = tuple(rename.get(v, v) for v in self.vars)
        fixed = self.fixed if fixed is None else tuple(fixed)
        if self.factors is None:
            sub = {a: Polynomial.var(b) for a, b in rename.items()}
            sub.update(subs or {})
            images = {rename.get(v, v): img.subs(sub) for v, img in self.images.items()}
            return PolyMap(vars, images=images, fixed=fixed)
        factors = tuple(transform_factor(f, rename, subs) for f in self.factors)
        return PolyMap(vars, factors=factors, fixed=fixed)

    def __repr__(self):
        body = ", ".join(f"{v} -> {self.images[v]}" for v in self.vars)
        return f"PolyMap({body})"

    def to_json(self):
        if self.factors is None:
            raise AutomError("only tracked maps serialize")
        return {"schema": 1, "dimension": self.dim, "variables": list(self.vars),
                "fixed": list(self.fixed), "factors": [f.to_json() for f in self.factors]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("schema") != 1:
            raise AutomError("unsupported witness schema")
        factors = [elementary_from_json(r) for r in data["factors"]]
        return cls(tuple(data["variables"]), factors=factors, fixed=tuple(data["fixed"]))


def _same_images(a, b):
    vars = sort_vars(a.vars + b.vars)
    return all(a.images.get(v, Polynomial.var(v)) == b.images.get(v, Polynomial.var(v)) for v in vars)


def _images_from_factors(vars, factors):
    images = {v: Polynomial.var(v) for v in vars}
    for f in reversed(factors):
        sub = f.images()
        images = {v: img.subs(sub) for v, img in images.items()}
    return images


def compose(*maps):
    """compose(a, b).apply(p) == a.apply(b.apply(p))."""
    vars = []
    fixed = []
    for m in maps:
        vars += [v for v in m.vars if v not in vars]
    for m in maps:
        fixed += [v for v in m.fixed if v not in fixed and v not in vars]
    vars = tuple(vars)
    if all(m.factors is not None for m in maps):
        factors = tuple(f for m in maps for f in m.factors)
        return PolyMap(vars, factors=factors, fixed=tuple(fixed))
    images = {v: Polynomial.var(v) for v in vars}
    for m in reversed(maps):
        images = {v: img.subs(m.images) for v, img in images.items()}
    return PolyMap(vars, images=images, fixed=tuple(fixed))


def verify_witness(alpha, target, coordinate):
    """alpha(coordinate) == target exactly and alpha o alpha^-1 == id."""
    if not alpha.tracked:
        raise AutomError("verify_witness needs a tracked map")
    if alpha.apply(Polynomial.var(coordinate)) != P(target):
        return False
    return alpha.check_inverse()


# ---------------------------------------------------------------- isom maps

def gamma_pq(p, q, y="y", v="v", fixed=()):
    """gamma(y) = v + q(y), gamma(v) = y - p(v + q(y)), with tracked inverse."""
    p, q = P(p), P(q)
    Y, V = Polynomial.var(y), Polynomial.var(v)
    if v in p.vars or v in q.vars:
        raise AutomError(f"p and q must not involve {v}")
    add_q = Triangular(v, q)
    swap = Affine((y, v), ((0, 1), (1, 0)), (0, 0))
    sub_p = Triangular(v, -p)
    gamma = PolyMap((y, v), factors=(add_q, swap, sub_p), fixed=fixed)
    assert gamma.images[y] == V + q
    assert gamma.images[v] == Y - p.subs({y: V + q})
    return gamma


def in_line_ideal(poly, h, y="y", v="v"):
    """poly lies in the ideal (h(y), v) of B[y, v]."""
    rest = P(poly).subs({v: Polynomial.const(0)})
    return not rest or divides(h, rest)


def maps_ideal_onto(gamma, h1, h2, y="y", v="v"):
    """gamma((h1, v)) == (h2, v), checked by both divisibility reductions."""
    inv = gamma.inverse()
    forward = all(in_line_ideal(gamma.apply(g), h2, y, v) for g in (h1, Polynomial.var(v)))
    backward = all(in_line_ideal(inv.apply(g), h1, y, v) for g in (h2, Polynomial.var(v)))
    return forward and backward


def gamma_pq_ideals(p, q, y="y"):
    """(y - q(p(y)), y - p(q(y))): the source and target ideal generators."""
    p, q = P(p), P(q)
    Y = Polynomial.var(y)
    return Y - q.subs({y: p}), Y - p.subs({y: q})


def gamma_k(p, a, k, y="y", v="v", fixed=()):
    """Tracked map sending (y + a p(y), v) onto (y + p(a^(k+1) y)/a^k, v).

    Built from k+1 maps gamma_pq(-p_j, a y) with p_j(y) = p(a^j y)/a^j.
    Returns (gamma, source_generator, target_generator).
    """
    p, a = P(p), P(a)
    Y = Polynomial.var(y)
    p0 = p.subs({y: Polynomial.const(0)})
    if not divides(a**k, p0) and p0:
        raise AutomError(f"precondition a^k | p(0) fails for a={a}, k={k}")
    maps = []
    for j in range(k + 1):
        pj = p.subs({y: a**j * Y}) / a**j if j else p
        maps.append(gamma_pq(-pj, a * Y, y, v, fixed))
    gamma = compose(*reversed(maps))
    source = Y + a * p
    target = Y + p.subs({y: a ** (k + 1) * Y}) / a**k
    return gamma, source, target


# ---------------------------------------------------------------- plane maps

def _top_form(p):
    d = p.degree()
    return Polynomial({e: c for e, c in p.terms.items() if sum(e) == d}, p.vars)


def jvdk_decompose(alpha, max_steps=200):
    """Elementary factors of a plane automorphism, by leading-form reduction."""
    if len(alpha.vars) != 2:
        raise AutomError("jvdk_decompose expects a plane map")
    a, b = alpha.vars
    jac = alpha.jacobian_det()
    if not jac.is_constant() or not jac:
        raise AutomError("Jacobian determinant is not a nonzero constant")
    F, G = alpha.images[a], alpha.images[b]
    steps = []
    for _ in range(max_steps):
        dF, dG = F.degree(), G.degree()
        if max(dF, dG) <= 1:
            break
        if dF >= dG:
            big, small, target = F, G, a
        else:
            big, small, target = G, F, b
        db, ds = big.degree(), small.degree()
        if ds <= 0 or db % ds:
            raise AutomError("degree reduction stalls: not an automorphism")
        k = db // ds
        tb, ts = _top_form(big), _top_form(small) ** k
        c = tb.leading_coefficient() / ts.leading_coefficient()
        if tb != ts * c:
            raise AutomError("leading forms are not proportional: not an automorphism")
        other = b if target == a else a
        # alpha = alpha' o T^-1 where T(target) = target - c * other^k
        step = Triangular(target, -(Polynomial.var(other) ** k) * c)
        steps.append(step)
        if target == a:
            F = F - G**k * c
        else:
            G = G - F**k * c
    else:
        raise AutomError("degree reduction did not terminate")
    if max(F.degree(), G.degree()) > 1 or F.is_constant() or G.is_constant():
        raise AutomError("degree reduction stalls: not an automorphism")
    lin = []
    shift = []
    for img in (F, G):
        lin.append([img.coeff(a, 1).constant_term() if a in img.vars else 0,
                    img.coeff(b, 1).constant_term() if b in img.vars else 0])
        shift.append(img.constant_term())
    factors = []
    aff = Affine((a, b), tuple(tuple(r) for r in lin), tuple(shift))
    if aff.images() != {a: Polynomial.var(a), b: Polynomial.var(b)}:
        factors.append(aff)
    factors += [s.inverse() for s in reversed(steps)]
    check = PolyMap((a, b), factors=factors, fixed=alpha.fixed)
    if not _same_images(check, alpha):
        raise AutomError("recomposition mismatch")
    return factors


def _transvections(matrix, vars):
    """Triangular linear maps whose composition has the given SL2 matrix."""
    a, b = vars
    m = [[Fraction(c) for c in row] for row in matrix]
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1:
        raise AutomError("linear part must have determinant 1")
    A, B = Polynomial.var(a), Polynomial.var(b)
    target = PolyMap((a, b), images={a: A * m[0][0] + B * m[0][1], b: A * m[1][0] + B * m[1][1]})
    cur = target
    steps = []

    def row(mp):
        fa, fb = mp.images[a], mp.images[b]
        coef = lambda p, w: p.coeff(w, 1).constant_term() if w in p.vars else Fraction(0)
        return [[coef(fa, a), coef(fa, b)], [coef(fb, a), coef(fb, b)]]

    # right composition with a triangular map is a row operation
    for _ in range(6):
        r = row(cur)
        if r == [[1, 0], [0, 1]]:
            break
        if r[0][0] != 1 and r[1][0] == 0:
            t = Triangular(b, A)
        elif r[0][0] != 1:
            t = Triangular(a, B * ((1 - r[0][0]) / r[1][0]))
        elif r[1][0] != 0:
            t = Triangular(b, A * (-r[1][0]))
        else:
            t = Triangular(a, B * (-r[0][1]))
        steps.append(t)
        cur = compose(cur, PolyMap((a, b), factors=(t,)))
    if not cur.is_identity():
        raise AutomError("SL2 reduction failed")
    out = [s.inverse() for s in reversed(steps)]
    if not _same_images(PolyMap((a, b), factors=out), target):
        raise AutomError("transvection recomposition mismatch")
    return out


def interpolate_multispec(points, targets, x="x"):
    """C[x]-automorphism specializing to targets[i] at x = points[i]."""
    points = [Fraction(p) for p in points]
    if len(set(points)) != len(points):
        raise AutomError("points must be distinct")
    if len(points) != len(targets):
        raise AutomError("one target per point")
    X = Polynomial.var(x)
    vars = targets[0].vars if targets else ("y", "z")
    factors = []
    for i, (lam, tgt) in enumerate(zip(points, targets)):
        if tgt.jacobian_det() != Polynomial.const(1):
            raise AutomError("targets must have Jacobian determinant 1")
        phi = Polynomial.const(1)
        for j, mu in enumerate(points):
            if j != i:
                phi = phi * (X - mu) / (lam - mu)
        for f in _sl2_factors(jvdk_decompose(tgt), vars):
            factors.append(Triangular(f.var, f.addend * phi))
    gamma = PolyMap(vars, factors=factors, fixed=(x,))
    for lam, tgt in zip(points, targets):
        spec = {v: img.subs({x: Polynomial.const(lam)}) for v, img in gamma.images.items()}
        if any(spec[v] != tgt.images[v] for v in vars):
            raise AutomError("specialization check failed")
    return gamma


def _sl2_factors(factors, vars):
    # rewrite affine factors as translations and transvections
    out = []
    for f in factors:
        if isinstance(f, Triangular):
            out.append(f)
            continue
        lin = [[c for c in row] for row in f.matrix]
        trans = _transvections(lin, f.vars)
        shifts = [Triangular(v, Polynomial.const(s)) for v, s in zip(f.vars, f.shift) if s]
        out += trans + shifts
        check = PolyMap(f.vars, factors=trans + shifts)
        if not _same_images(check, PolyMap(f.vars, factors=(f,))):
            raise AutomError("affine factor rewrite mismatch")
    return out
