"""Components of the divisor {f = 0} and of the center curve {f = g = 0}."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .autom import Affine, PolyMap, Triangular, compose
from .ideal import count_points, is_empty
from .poly import (P, Polynomial, PolyError, Tri, abs_irreducible, divides,
                   factor_list, gcd, sqf_part)

X, Y, Z, T, S = (Polynomial.var(v) for v in ("x", "y", "z", "t", "s"))


class Cls(str, enum.Enum):
    HORIZONTAL = "horizontal"
    SLANTED = "slanted"
    VERTICAL = "vertical"


class ReducibleInput(PolyError):
    pass


@dataclass
class HomeoResult:
    verdict: Tri
    witness: tuple = None
    certificate: str = ""
    coordinate_map: PolyMap = None
    # cusp case: (G, phi, a, b) with phi(F) = G = c_y y^b + c_x x^a
    cusp_model: tuple = None

    def to_json(self):
        out = {"verdict": self.verdict.value}
        if self.witness:
            out["witness"] = [str(p) for p in self.witness]
        if self.certificate:
            out["certificate"] = self.certificate
        return out


@dataclass
class ComponentReport:
    factor: Polynomial
    multiplicity: int
    z_degree: int
    cls: Cls
    abs_irreducible: Tri = Tri.UNKNOWN
    gamma_smooth: Tri = Tri.UNKNOWN
    c_smooth: Tri = Tri.UNKNOWN
    isolated: Tri = Tri.UNKNOWN
    homeo_line: HomeoResult = None
    c_homeo_line: HomeoResult = None

    def to_json(self):
        return {
            "factor": str(self.factor), "multiplicity": self.multiplicity,
            "z_degree": self.z_degree, "class": self.cls.value,
            "abs_irreducible": self.abs_irreducible.value,
            "gamma_smooth": self.gamma_smooth.value, "c_smooth": self.c_smooth.value,
            "isolated": self.isolated.value,
            "homeo_line": self.homeo_line.to_json() if self.homeo_line else None,
            "c_homeo_line": self.c_homeo_line.to_json() if self.c_homeo_line else None,
        }


def _class_of(d):
    if d == 0:
        return Cls.VERTICAL
    return Cls.HORIZONTAL if d == 1 else Cls.SLANTED


# ---------------------------------------------------------------- z-degree

def z_degree_mod(g, fi, z="z"):
    """Largest j whose z-coefficient of g is not divisible by fi."""
    g, fi = P(g), P(fi)
    if divides(fi, g):
        raise ReducibleInput(f"{fi} divides g: fu+g is reducible")
    coeffs = g.coeffs(z)
    for j in range(len(coeffs) - 1, 0, -1):
        if not divides(fi, coeffs[j]):
            return j
    return 0


def canonical_factorization(f, g, analyze=True, degree_bound=12):
    """(f_horiz, f_slant, f_vert, reports); the unit goes into f_horiz."""
    f, g = P(f), P(g)
    if not f:
        raise PolyError("f must be nonzero")
    unit, facs = factor_list(f)
    parts = {c: Polynomial.const(1) for c in Cls}
    reports = []
    for fi, m in facs:
        d = z_degree_mod(g, fi)
        cls = _class_of(d)
        parts[cls] = parts[cls] * fi**m
        reports.append(ComponentReport(fi, m, d, cls, abs_irreducible(fi)))
    parts[Cls.HORIZONTAL] = parts[Cls.HORIZONTAL] * unit
    fh, fs, fv = parts[Cls.HORIZONTAL], parts[Cls.SLANTED], parts[Cls.VERTICAL]
    assert fh * fs * fv == f
    if analyze:
        for rep in reports:
            analyze_component(rep, g, [r.factor for r in reports if r is not rep], degree_bound)
    return fh, fs, fv, reports


def analyze_component(rep, g, others, degree_bound=12):
    fi = rep.factor
    rep.gamma_smooth = Tri.of(plane_curve_smooth(fi))
    rep.isolated = Tri.of(all(is_empty([fi, fj]) for fj in others))
    rep.homeo_line = homeo_line(fi, degree_bound)
    if rep.cls is not Cls.VERTICAL:
        rep.c_smooth = Tri.of(space_curve_smooth(fi, g, rep.z_degree))
        if rep.homeo_line.verdict is Tri.YES:
            rep.c_homeo_line = center_homeo_line(fi, g, rep.homeo_line, degree_bound)
    else:
        rep.c_smooth = Tri.YES  # vertical lines {P} x C
    return rep


# ---------------------------------------------------------------- smoothness

def plane_curve_smooth(F):
    F = P(F)
    return is_empty([F, F.diff("x"), F.diff("y")])


def minors(fi, g):
    rows = [[fi.diff(v) for v in ("x", "y", "z")], [g.diff(v) for v in ("x", "y", "z")]]
    out = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        out.append(rows[0][a] * rows[1][b] - rows[0][b] * rows[1][a])
    return out


def space_curve_smooth(fi, g, d=None):
    """The non-vertical part of V(fi, g) is smooth (rank-2 Jacobian)."""
    fi, g = P(fi), P(g)
    nonzero = g.coeff("z", d) if d else None
    return is_empty([fi, g] + minors(fi, g), nonzero=nonzero)


def hypersurface_smooth(f, g):
    """Jacobian criterion for X = {f u + g = 0} in C^4.

    Returns (Tri, witness system); the system is empty-or-not exactly.
    """
    f, g = P(f), P(g)
    if f and not gcd(f, g).is_constant():
        raise ReducibleInput("gcd(f, g) is not constant")
    if f.is_constant() and f:
        return Tri.YES, []
    U = Polynomial.var("u")
    if not f:
        system = [g, g.diff("x"), g.diff("y"), g.diff("z")]
    else:
        system = [f, g, f.diff("x") * U + g.diff("x"), f.diff("y") * U + g.diff("y"), g.diff("z")]
    if is_empty(system):
        return Tri.YES, []
    return Tri.NO, system


# ---------------------------------------------------------------- homeomorphic to C

def _top_form(p):
    d = p.degree()
    return Polynomial({e: c for e, c in p.terms.items() if sum(e) == d}, p.vars)


def _exps(p):
    """Monomials as (i, j, c) with i = deg_x, j = deg_y."""
    out = []
    for mono, c in p.monomials():
        out.append((mono.get("x", 0), mono.get("y", 0), c))
    return out


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def _injective(xt, yt):
    xs, ys = xt.subs({"t": S}), yt.subs({"t": S})
    return is_empty([xt - xs, yt - ys], nonzero=T - S)


def _line_map(G):
    """For G = c*w + b(other): map psi with psi(G) = x, and a parametrization."""
    for w, o in (("y", "x"), ("x", "y")):
        if G.degree(w) == 1:
            c = G.coeff(w, 1)
            if c.is_constant():
                b = G.coeff(w, 0)
                c = c.constant()
                tau = [Triangular(w, -b), Affine(("x", "y"), _scale(w, 1 / c), (0, 0))]
                swap = [Affine(("x", "y"), ((0, 1), (1, 0)), (0, 0))] if w == "y" else []
                maps = swap + tau
                psi = PolyMap(("x", "y"), factors=maps)
                param = {o: T, w: -b.subs({o: T}) / c}
                return psi, (param["x"], param["y"])
    return None, None


def _scale(w, c):
    return ((c, 0), (0, 1)) if w == "x" else ((1, 0), (0, c))


def homeo_line(F, degree_bound=12):
    """Decide whether {F = 0} in C^2 is homeomorphic to C.

    Runs a reduction loop on G = phi(F): normalize the point at infinity,
    read the leading quasi-homogeneous form, and either lower the degree by
    a triangular substitution or recognize the cusp y^b = c x^a.
    """
    F = P(F)
    if F.is_constant():
        raise PolyError("constant curve")
    ai = abs_irreducible(F)
    if ai is Tri.NO:
        return HomeoResult(Tri.NO, certificate="reducible over C")
    phi = PolyMap.identity(("x", "y"))
    G = F
    for _ in range(4 * max(F.degree(), 1) + 4):
        psi, param = _line_map(G)
        if psi is not None:
            coord = compose(psi, phi)
            return _finish(F, phi, param, degree_bound, coord)
        n = G.degree()
        L = sqf_part(_top_form(G))
        if L.degree() >= 2:
            return HomeoResult(Tri.NO, certificate="at least two points at infinity")
        alpha, beta = L.coeff("x", 1).constant_term(), L.coeff("y", 1).constant_term()
        if beta:
            A = Affine(("x", "y"), ((1, 0), (-alpha / beta, 1 / beta)), (0, 0))
        else:
            A = Affine(("x", "y"), ((0, 1), (1, 0)), (0, 0))
        Amap = PolyMap(("x", "y"), factors=(A,))
        G = Amap.apply(G)
        phi = compose(Amap, phi)
        mons = [(i, j, c) for i, j, c in _exps(G) if i > 0]
        if not mons:
            if n == 1:
                continue
            return HomeoResult(Tri.NO, certificate="several parallel lines")
        rho = max(Fraction(i, n - j) for i, j, _ in mons)
        a, b = rho.numerator, rho.denominator
        edge = {}
        for i, j, c in _exps(G):
            if i * b == (n - j) * a:
                edge[i // a] = c
        H = Polynomial.from_coeffs([edge.get(m, 0) for m in range(max(edge) + 1)], "t")
        M = H.degree()
        if sqf_part(H).degree() != 1 or b * M != n:
            return HomeoResult(Tri.NO, certificate="at least two branches at infinity")
        root = -H.monic().coeff("t", 0).constant_term() if M == 1 else _single_root(H)
        kappa = 1 / root
        if a == 1:
            step = PolyMap(("x", "y"), factors=(Triangular("x", Y**b / kappa),))
            G2 = step.apply(G)
            if G2.degree() >= n:
                return HomeoResult(Tri.UNKNOWN, certificate="degree did not drop")
            G, phi = G2, compose(step, phi)
            continue
        if M != 1:
            return HomeoResult(Tri.UNKNOWN, certificate="higher Puiseux level needed")
        return _cusp(F, G, phi, a, b, degree_bound)
    return HomeoResult(Tri.UNKNOWN, certificate="reduction loop bound reached")


def _single_root(H):
    # H = c (t - r)^M over Q; r = -coeff(t^(M-1)) / (M * lc)
    M = H.degree()
    lc = H.coeff("t", M).constant_term()
    return -H.coeff("t", M - 1).constant_term() / (M * lc)


def _cusp(F, G, phi, a, b, degree_bound):
    cy = G.coeff("y", b).constant_term()
    shift_y = G.coeff("y", b - 1).subs({"x": Polynomial.const(0)}).constant_term()
    cx = G.coeff("x", a).constant_term()
    shift_x = G.coeff("x", a - 1).subs({"y": Polynomial.const(0)}).constant_term()
    tr = Affine(("x", "y"), ((1, 0), (0, 1)), (-shift_x / (a * cx), -shift_y / (b * cy)))
    trmap = PolyMap(("x", "y"), factors=(tr,))
    G = trmap.apply(G)
    phi = compose(trmap, phi)
    if len(G) != 2 or G.coeff("y", b).constant_term() != cy or G.coeff("x", a).constant_term() != cx:
        return HomeoResult(Tri.UNKNOWN, certificate="no Lin-Zaidenberg model found")
    c = -cy / cx  # x^a = c y^b
    _, sigma, tau = _ext_gcd(a, b)  # sigma a + tau b = 1
    xt = T**b * c**sigma
    yt = T**a * c ** (-tau)
    assert G.subs({"x": xt, "y": yt}).is_zero()
    res = _finish(F, phi, (xt, yt), degree_bound, None)
    res.cusp_model = (G, phi, a, b)
    return res


def _finish(F, phi, param, degree_bound, coord):
    xt, yt = param
    sub = {"x": xt, "y": yt}
    fx = phi.images["x"].subs(sub)
    fy = phi.images["y"].subs(sub)
    if max(fx.degree(), fy.degree()) > degree_bound:
        return HomeoResult(Tri.UNKNOWN, certificate="parametrization exceeds degree bound")
    if not F.subs({"x": fx, "y": fy}).is_zero() or not _injective(fx, fy):
        raise AssertionError("homeomorphism witness failed verification")
    if coord is not None:
        assert coord.apply(F) == X
    return HomeoResult(Tri.YES, witness=(fx, fy), coordinate_map=coord)


def center_homeo_line(fi, g, gamma_result, degree_bound=12):
    """C_i = {fi = g = 0} via G(t, z) = sqf g(x(t), y(t), z), renamed to (x, y)."""
    xt, yt = gamma_result.witness
    G = sqf_part(P(g).subs({"x": xt, "y": yt}))
    G = G.subs({"t": X, "z": Y}) if "x" not in G.vars else None
    if G is None:
        return HomeoResult(Tri.UNKNOWN, certificate="unexpected variables")
    unit, facs = factor_list(G)
    if len(facs) > 1:
        return HomeoResult(Tri.NO, certificate="center curve is reducible")
    return homeo_line(G, degree_bound)


# ---------------------------------------------------------------- multiplicity structure

@dataclass
class MultiplicityStructure:
    rows: list
    columns: list
    incidence: list
    transversal: list
    matches_delta_form: Tri
    reasons: list = field(default_factory=list)

    def to_json(self):
        return {
            "rows": self.rows, "columns": self.columns,
            "incidence": [[bool(v) for v in r] for r in self.incidence],
            "transversal": [t.value for t in self.transversal],
            "matches_delta_form": self.matches_delta_form.value,
            "reasons": self.reasons,
        }


def vertical_points(f, g):
    """Equations of the points P with {P} x C inside C."""
    return [sqf_part(f)] + [b for b in P(g).coeffs("z") if b]


def _components_of(fj):
    """Number of components over C of a Q-irreducible plane curve, or None."""
    ai = abs_irreducible(fj)
    if ai is Tri.YES:
        return 1
    if len(fj.vars) == 1:
        return fj.degree()
    return None


def multiplicity_structure(f, g, reports):
    f, g = P(f), P(g)
    rows = [str(r.factor) for r in reports]
    columns = []
    incidence = []
    transversal = []
    reasons = []
    verdicts = []
    nonvert = [r for r in reports if r.cls is not Cls.VERTICAL]
    vert = [r for r in reports if r.cls is Cls.VERTICAL]
    slanted = [r for r in reports if r.cls is Cls.SLANTED]
    for r in nonvert:
        columns.append(f"C[{r.factor}]")
        incidence.append([rr is r for rr in reports])
        lead = g.coeff("z", r.z_degree)
        ok = any(not is_empty([r.factor, g], nonzero=m * lead) for m in minors(r.factor, g) if m)
        t = Tri.of(ok)
        transversal.append(t)
        if not ok:
            reasons.append(f"C over {r.factor} is not transversal")
        verdicts.append(t)
        if r.cls is Cls.SLANTED and r.isolated is not Tri.YES:
            verdicts.append(r.isolated)
            reasons.append(f"slanted component {r.factor} is not isolated")
    vp = vertical_points(f, g)
    for r in vert:
        fj = r.factor
        columns.append(f"vertical points on {fj}")
        incidence.append([rr is r or _shares_vertical_points(vp, fj, rr.factor) for rr in reports])
        sub = [fj] + vp[1:]
        count = count_points(sub)
        need = _components_of(fj)
        if need is None or count is None:
            t = Tri.UNKNOWN
            reasons.append(f"cannot count vertical points on {fj}")
        elif count != need:
            t = Tri.NO
            reasons.append(f"{count} vertical points on {fj}, expected {need}")
        else:
            t = Tri.YES
        if t is Tri.YES:
            for rr in vert + slanted:
                if rr is not r and not is_empty(sub + [rr.factor]):
                    t = Tri.NO
                    reasons.append(f"vertical point of {fj} lies on {rr.factor}")
        if t is Tri.YES:
            cross = fj.diff("x") * g.diff("y") - fj.diff("y") * g.diff("x")
            grad = [fj.diff("x"), fj.diff("y")]
            if not is_empty(sub + grad) or is_empty(sub, nonzero=cross):
                t = Tri.NO
                reasons.append(f"{fj} not transversal to g at its vertical points")
        transversal.append(t)
        verdicts.append(t)
    fvert = Polynomial.const(1)
    for r in vert:
        fvert = fvert * r.factor
    if not is_empty(vp, nonzero=fvert):
        columns.append("stray vertical points")
        incidence.append([not is_empty(vp + [rr.factor], nonzero=fvert) for rr in reports])
        transversal.append(Tri.NO)
        verdicts.append(Tri.NO)
        reasons.append("vertical points outside the vertical components")
    if Tri.NO in verdicts:
        match = Tri.NO
    elif Tri.UNKNOWN in verdicts:
        match = Tri.UNKNOWN
    else:
        match = Tri.YES
    return MultiplicityStructure(rows, columns, incidence, transversal, match, reasons)


def _shares_vertical_points(vp, fj, other):
    return not is_empty(vp + [fj, other])
