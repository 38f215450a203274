"""Verdicts for X = {f u + g = 0}: acyclicity, exoticity, residual x-variables."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .autom import PolyMap, verify_witness
from .geometry import (Cls, ReducibleInput, canonical_factorization, homeo_line,
                       hypersurface_smooth, multiplicity_structure, plane_curve_smooth)
from .ideal import is_empty
from .poly import (P, Polynomial, PolyError, Tri, divides, exquo, factor_list, gcd,
                   poly_gcd_list, rational_roots, reduce_mod, resultant, solve_linear,
                   sqf_part)

X, Y, Z, U, V = (Polynomial.var(v) for v in "xyzuv")
CONDITIONS = ("alpha", "beta", "gamma", "delta", "epsilon")
_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Outcome(str, enum.Enum):
    REDUCIBLE = "Reducible"
    SINGULAR = "Singular"
    NOT_ACYCLIC = "NotAcyclic"
    EXOTIC = "ExoticC3"
    ISOMORPHIC = "IsomorphicC3"
    UNKNOWN = "Unknown"


@dataclass
class Evidence:
    condition: str
    result: Tri
    data: dict = field(default_factory=dict)

    def to_json(self):
        return {"condition": self.condition, "result": self.result.value, "data": self.data}


@dataclass
class Verdict:
    outcome: Outcome
    evidence: list = field(default_factory=list)
    coordinate_change: PolyMap = None
    # failed condition for NotAcyclic, blocking subdecision for Unknown
    detail: str = None
    certificate: object = None

    def to_json(self):
        out = {"outcome": self.outcome.value, "evidence": [e.to_json() for e in self.evidence]}
        if self.detail:
            out["detail"] = self.detail
        if self.coordinate_change is not None:
            out["coordinate_change"] = {v: str(self.coordinate_change.images[v])
                                        for v in self.coordinate_change.vars}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def compact(p):
    """Short display form with terms by ascending degree: z^3 + y^2 -> y²+z³."""
    p = P(p)
    terms = sorted(p.monomials(), key=lambda mc: (sum(mc[0].values()), sorted(mc[0].items())))
    out = ""
    for mono, c in terms:
        body = str(Polynomial({tuple(mono.get(v, 0) for v in p.vars): abs(c)}, p.vars))
        sign = "-" if c < 0 else "+"
        out += (sign if out or sign == "-" else "") + body
    out = (out or "0").replace(" ", "").replace("*", "")
    return re.sub(r"\^(\d+)", lambda m: m.group(1).translate(_SUP), out)


def _tri_all(values):
    values = list(values)
    if Tri.NO in values:
        return Tri.NO
    if Tri.UNKNOWN in values:
        return Tri.UNKNOWN
    return Tri.YES


def _x_only(p):
    return set(P(p).vars) <= {"x"}


def _product(polys):
    out = Polynomial.const(1)
    for p in polys:
        out = out * p
    return out


# ---------------------------------------------------------------- conditions

def polynomial_in(target, F):
    """Coefficients c_0..c_n with target = sum c_i F^i, or None."""
    target, F = P(target), P(F)
    if F.is_constant():
        return None
    n, r = divmod(target.degree(), F.degree())
    if r:
        return None
    powers = [Polynomial.const(1)]
    for _ in range(n):
        powers.append(powers[-1] * F)
    monos = sorted({tuple(sorted(m.items())) for p in powers + [target] for m, _ in p.monomials()})

    def coef(p, key):
        d = dict(key)
        return next((c for m, c in p.monomials() if m == d), 0)

    rows = [[coef(p, k) for p in powers] for k in monos]
    sol = solve_linear(rows, [coef(target, k) for k in monos])
    return None if sol is None else list(sol)


def check_alpha(f_h, f_nh, g):
    """b1 has no zero on Gamma_horiz minus Gamma_nonhoriz."""
    if f_h.is_constant():
        return Tri.YES, {"reason": "no horizontal component"}
    red = sqf_part(f_h)
    b1 = g.coeff("z", 1)
    ok = is_empty([red, b1], nonzero=f_nh)
    data = {"f_horiz_red": str(red), "b1": str(b1)}
    if not ok:
        data["reason"] = "b1 vanishes on Gamma_horiz outside Gamma_nonhoriz"
    return Tri.of(ok), data


def check_beta(reports):
    slanted = [r for r in reports if r.cls is Cls.SLANTED]
    rows, vals = [], []
    for r in slanted:
        gam = r.homeo_line.verdict if r.homeo_line else Tri.UNKNOWN
        cen = r.c_homeo_line.verdict if r.c_homeo_line else (Tri.NO if gam is Tri.NO else Tri.UNKNOWN)
        t = _tri_all([r.isolated, gam, cen])
        rows.append({"factor": str(r.factor), "isolated": r.isolated.value,
                     "gamma_homeo_line": gam.value, "c_homeo_line": cen.value})
        vals.append(t)
    return _tri_all(vals), {"slanted": rows}


def check_gamma(reports, f_nh):
    nonh = [r for r in reports if r.cls is not Cls.HORIZONTAL]
    if not nonh:
        return Tri.YES, {"reason": "f_nonhoriz is constant"}
    F = nonh[0].factor
    coeffs = polynomial_in(f_nh, F)
    data = {"f_first": str(F)}
    if coeffs is None:
        data["reason"] = "f_nonhoriz is not a polynomial in f_first"
        return Tri.NO, data
    data["p"] = str(sum((Polynomial.const(c) * Polynomial.var("t") ** i for i, c in enumerate(coeffs)),
                        Polynomial.const(0)))
    vals = []
    for r in nonh:
        if r.factor.degree() > F.degree():
            # a Q-factor made of several conjugate level sets
            vals.append(Tri.UNKNOWN)
            data.setdefault("unknown", []).append(str(r.factor))
            continue
        vals.append(r.homeo_line.verdict)
    t = _tri_all(vals)
    if t is Tri.NO:
        data["reason"] = "a non-horizontal component is not homeomorphic to C"
    return t, data


def check_epsilon(reports, f_nh):
    nonh = [r for r in reports if r.cls is not Cls.HORIZONTAL]
    if not nonh:
        return Tri.YES, {"reason": "no non-horizontal component"}
    gamma_ok = plane_curve_smooth(sqf_part(f_nh))
    c_vals = [r.c_smooth for r in nonh]
    data = {"gamma_nonhoriz_smooth": Tri.of(gamma_ok).value,
            "c_smooth": {str(r.factor): r.c_smooth.value for r in nonh}}
    return _tri_all([Tri.of(gamma_ok)] + c_vals), data


def normalize_coordinates(reports, f_nh):
    """Plane map psi with psi(f_nonhoriz) in Q[x]; identity when already so."""
    ident = PolyMap.identity(("x", "y"))
    if _x_only(f_nh):
        return ident
    nonh = [r for r in reports if r.cls is not Cls.HORIZONTAL]
    res = nonh[0].homeo_line or homeo_line(nonh[0].factor)
    psi = res.coordinate_map
    if psi is None or not _x_only(psi.apply(f_nh)):
        return None
    return psi


# ---------------------------------------------------------------- classify

def classify(f, g, degree_bound=12):
    f, g = P(f), P(g)
    if not f:
        raise PolyError("f must be nonzero")
    ev = []
    if f.is_constant():
        ev.append(Evidence("f_constant", Tri.YES, {"reason": "u = -g/f parametrizes X"}))
        return Verdict(Outcome.ISOMORPHIC, ev, PolyMap.identity(("x", "y")))
    common = gcd(f, g)
    if not common.is_constant():
        ev.append(Evidence("irreducible", Tri.NO, {"gcd": str(common)}))
        return Verdict(Outcome.REDUCIBLE, ev)
    ev.append(Evidence("irreducible", Tri.YES, {"gcd": "1"}))
    try:
        smooth, _ = hypersurface_smooth(f, g)
    except ReducibleInput:
        return Verdict(Outcome.REDUCIBLE, ev)
    ev.append(Evidence("smooth", smooth, {}))
    if smooth is Tri.NO:
        return Verdict(Outcome.SINGULAR, ev)
    fh, fs, fv, reports = canonical_factorization(f, g, analyze=True, degree_bound=degree_bound)
    f_nh = fs * fv
    ev.append(Evidence("factorization", Tri.YES, {
        "f_horiz": str(fh), "f_slant": str(fs), "f_vert": str(fv),
        "components": [r.to_json() for r in reports]}))
    psi = normalize_coordinates(reports, f_nh)
    ev.append(Evidence("normalization", Tri.of(psi is not None),
                       {"images": {v: str(psi.images[v]) for v in psi.vars}} if psi else {}))
    results = {}
    results["alpha"] = check_alpha(fh, f_nh, g)
    results["beta"] = check_beta(reports)
    results["gamma"] = check_gamma(reports, f_nh)
    ms = multiplicity_structure(f, g, reports)
    results["delta"] = (ms.matches_delta_form, ms.to_json())
    results["epsilon"] = check_epsilon(reports, f_nh)
    for c in CONDITIONS:
        t, data = results[c]
        ev.append(Evidence(c, t, data))
    first_four = [results[c][0] for c in CONDITIONS[:4]]
    for c, t in zip(CONDITIONS, first_four):
        if t is Tri.NO:
            return Verdict(Outcome.NOT_ACYCLIC, ev, psi, detail=c)
    for c, t in zip(CONDITIONS, first_four):
        if t is Tri.UNKNOWN:
            return Verdict(Outcome.UNKNOWN, ev, psi, detail=c)
    eps = results["epsilon"][0]
    if eps is Tri.UNKNOWN:
        return Verdict(Outcome.UNKNOWN, ev, psi, detail="epsilon")
    if eps is Tri.NO:
        from .lnd import exoticity_certificate
        cert = exoticity_certificate(f, g, reports)
        if not hasattr(cert, "kind"):
            cert = None
        return Verdict(Outcome.EXOTIC, ev, psi, certificate=cert)
    if psi is None:
        return Verdict(Outcome.UNKNOWN, ev, None, detail="normalization")
    return Verdict(Outcome.ISOMORPHIC, ev, psi)


# ---------------------------------------------------------------- residual x-variables

@dataclass
class Residual:
    outcome: Tri
    lam: object = None
    reason: str = ""
    checks: list = field(default_factory=list)
    coordinate_change: PolyMap = None

    def to_json(self):
        out = {"outcome": self.outcome.value, "checks": self.checks}
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        if self.reason:
            out["reason"] = self.reason
        return out


def plane_variable(G):
    """Is G(y, z) a variable of C[y, z]?  Returns (Tri, reason)."""
    G = P(G)
    if G.is_constant():
        return Tri.NO, f"specialization {compact(G)} is constant"
    H = G.subs({"y": X, "z": Y})
    _, facs = factor_list(H)
    if len(facs) > 1 or facs[0][1] > 1:
        return Tri.NO, f"specialization {compact(G)} is reducible"
    if not plane_curve_smooth(H):
        return Tri.NO, f"specialization {compact(G)} singular zero set"
    res = homeo_line(H)
    if res.verdict is Tri.NO:
        return Tri.NO, f"specialization {compact(G)} zero set not homeomorphic to C"
    if res.verdict is Tri.YES and res.coordinate_map is not None:
        return Tri.YES, f"specialization {compact(G)} is a coordinate"
    return Tri.UNKNOWN, f"specialization {compact(G)}: {res.certificate or 'undecided'}"


def specialization_variable(f, g, lam):
    """Is p_lam = f(lam, y) u + g(lam, y, z) a variable of C[y, z, u]?"""
    at = {"x": Polynomial.const(lam)}
    fl, gl = P(f).subs(at), P(g).subs(at)
    if not fl:
        return plane_variable(gl)
    if fl.is_constant():
        return Tri.YES, "f_lambda is a unit"
    g1 = gl.coeff("z", 1)
    red = sqf_part(fl)
    if not gcd(fl, g1).is_constant():
        return Tri.NO, f"gcd(f_lambda, g1) = {gcd(fl, g1)} is not 1"
    for j in range(2, gl.degree("z") + 1):
        if not divides(red, gl.coeff("z", j)):
            return Tri.NO, f"z^{j} coefficient not divisible by f_lambda^red"
    return Tri.YES, "RuVe form over C[y]"


def _x_content(f):
    return poly_gcd_list([c for c in P(f).coeffs("y") if c])


def residual_x_variable(f, g, degree_bound=12):
    f, g = P(f), P(g)
    checks = []
    if not f:
        return _residual_plane(g, checks)
    psi = PolyMap.identity(("x", "y"))
    if not f.is_constant() and gcd(f, g).is_constant():
        _, fs, fv, reports = canonical_factorization(f, g, analyze=False)
        f_nh = fs * fv
        if not _x_only(f_nh):
            F = next(r.factor for r in reports if r.cls is not Cls.HORIZONTAL)
            res = homeo_line(F, degree_bound)
            psi = res.coordinate_map
            if psi is None or not _x_only(psi.apply(f_nh)):
                return Residual(Tri.UNKNOWN, reason="coordinate normalization unavailable")
            f, g = psi.apply(f), psi.apply(g)
    content = _x_content(f)
    special = []
    if not content.is_constant():
        roots = rational_roots(content)
        special = [r for r, _ in roots]
        if sum(m for _, m in roots) != content.degree():
            checks.append({"lambda": "irrational roots", "result": "Unknown"})
    pending = None
    for lam in special:
        t, why = specialization_variable(f, g, lam)
        checks.append({"lambda": str(lam), "result": t.value, "reason": why})
        if t is Tri.NO:
            return Residual(Tri.NO, lam, why, checks, psi)
        if t is Tri.UNKNOWN and pending is None:
            pending = (lam, why)
    t, why, bad = _generic(f, g, content, special)
    checks.append({"lambda": "generic", "result": t.value, "reason": why})
    if t is Tri.NO:
        return Residual(Tri.NO, bad, why, checks, psi)
    if pending is not None:
        return Residual(Tri.UNKNOWN, pending[0], pending[1], checks, psi)
    if t is Tri.UNKNOWN or any(c["result"] == "Unknown" for c in checks):
        return Residual(Tri.UNKNOWN, None, why, checks, psi)
    return Residual(Tri.YES, None, "every specialization is a variable", checks, psi)


def _generic(f, g, content, special):
    """Decide p_lam for lam outside the roots of the x-content of f."""
    fy = exquo(f, content)
    red = sqf_part(fy)
    if fy.is_constant():
        return Tri.YES, "f_lambda is a unit", None
    b1 = g.coeff("z", 1)
    tail_ok = all(divides(red, g.coeff("z", j)) for j in range(2, g.degree("z") + 1))
    if tail_ok and is_empty([red, b1], nonzero=content):
        return Tri.YES, "RuVe form with b1 invertible and nilpotent tail", None
    # find a rational lambda where the lemma form fails
    cands = []
    if b1:
        r = resultant(red, b1, "y") if "y" in red.vars or "y" in b1.vars else Polynomial.const(0)
        if r and not r.is_constant():
            cands += [c for c, _ in rational_roots(r)]
    cands += list(range(-3, 8))
    for lam in cands:
        if lam in special or content.subs({"x": Polynomial.const(lam)}).is_zero():
            continue
        t, why = specialization_variable(f, g, lam)
        if t is Tri.NO:
            return Tri.NO, why, lam
    return Tri.UNKNOWN, "generic specialization undecided", None


def _residual_plane(g, checks):
    from .rectify import plane_witness
    try:
        W = plane_witness(g, "y", "z", ("x",))
    except PolyError:
        W = None
    if W is not None and verify_witness(W, g, "y"):
        checks.append({"lambda": "all", "result": "Yes", "reason": "g is an x-variable"})
        return Residual(Tri.YES, None, "g is an x-variable", checks)
    for lam in range(-3, 8):
        t, why = plane_variable(g.subs({"x": Polynomial.const(lam)}))
        checks.append({"lambda": str(lam), "result": t.value, "reason": why})
        if t is Tri.NO:
            return Residual(Tri.NO, lam, why, checks)
    return Residual(Tri.UNKNOWN, None, "plane specializations undecided", checks)


# ---------------------------------------------------------------- p = d(a u + b v) + c

class Linear2Kind(str, enum.Enum):
    XVARIABLE = "XVariable"
    NOT_C3 = "NotC3"
    UNKNOWN = "Unknown"


@dataclass
class Linear2Result:
    kind: Linear2Kind
    target: Polynomial
    witness: PolyMap = None
    failed: str = None
    reason: str = ""
    coordinate_change: PolyMap = None
    clauses: list = field(default_factory=list)

    def to_json(self):
        out = {"kind": self.kind.value, "target": str(self.target), "clauses": self.clauses}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.failed:
            out["failed"] = self.failed
        if self.reason:
            out["reason"] = self.reason
        return out


def _fpl(c, m):
    """c(x_i, y) in C^* y + C for every root x_i of the irreducible m(x)."""
    c = reduce_mod(P(c), m) if m.degree() > 0 else P(c)
    if c.degree("y") != 1:
        return False
    return not divides(m, c.coeff("y", 1))


def classify_linear2(a, b, c, d):
    """Decide p = d (a u + b v) + c; witnesses act on (y, v, u) over Q[x]."""
    a, b, c, d = P(a), P(b), P(c), P(d)
    if not d:
        raise PolyError("d must be nonzero")
    if not a and not b:
        raise PolyError("(a, b) must not be (0, 0)")
    if not gcd(a, b).is_constant():
        raise PolyError("gcd(a, b) must be 1")
    for name, poly in (("a", a), ("b", b), ("c", c), ("d", d)):
        if not set(poly.vars) <= {"x", "y"}:
            raise PolyError(f"{name} must lie in Q[x, y]")
    p = d * (a * U + b * V) + c
    clauses = []

    def fail(name, why):
        clauses.append({"clause": name, "result": "No", "reason": why})
        return Linear2Result(Linear2Kind.NOT_C3, p, failed=name, reason=why, clauses=clauses)

    psi = PolyMap.identity(("x", "y"))
    if not _x_only(d):
        F = next(g for g, _ in factor_list(d)[1] if not _x_only(g))
        res = homeo_line(F)
        if res.verdict is Tri.NO:
            return fail("d in C[x]", f"{F} = 0 is not homeomorphic to C")
        psi = res.coordinate_map
        if psi is None:
            clauses.append({"clause": "d in C[x]", "result": "Unknown"})
            return Linear2Result(Linear2Kind.UNKNOWN, p, failed="d in C[x]",
                                 reason="coordinate normalization unavailable", clauses=clauses)
        if not _x_only(psi.apply(d)):
            return fail("d in C[x]", "the components of d = 0 are not parallel lines")
        a, b, c, d = (psi.apply(t) for t in (a, b, c, d))
    clauses.append({"clause": "d in C[x]", "result": "Yes", "d": str(d)})
    if not gcd(c, d).is_constant():
        return fail("gcd(c, d) = 1", f"gcd = {gcd(c, d)}")
    clauses.append({"clause": "gcd(c, d) = 1", "result": "Yes"})
    if not is_empty([a, b], nonzero=d):
        return fail("Gamma_a ∩ Gamma_b ⊆ Gamma_d", "a and b have a common zero off d = 0")
    clauses.append({"clause": "Gamma_a ∩ Gamma_b ⊆ Gamma_d", "result": "Yes"})
    for m, _ in (factor_list(d)[1] if not d.is_constant() else []):
        if not _fpl(c, m):
            return fail("fpl", f"c is not of the form C^* y + C at the roots of {m}")
    clauses.append({"clause": "fpl", "result": "Yes"})
    witness, reason = _linear2_witness(a, b, c, d)
    if witness is None:
        return Linear2Result(Linear2Kind.UNKNOWN, p, failed="witness", reason=reason,
                             coordinate_change=psi, clauses=clauses)
    return Linear2Result(Linear2Kind.XVARIABLE, p, witness, coordinate_change=psi, clauses=clauses)


def _linear2_witness(a, b, c, d):
    from .rectify import Kind, rectify
    if a:
        f, g, ren = d * a, (d * b * V + c).subs({"v": Z}), {"z": "v"}
    else:
        f, g, ren = d * b, c, {"u": "v", "z": "u"}
    res = rectify(f, g, one_stable=False)
    if res.kind is not Kind.XVARIABLE:
        return None, res.reason or "rectification failed"
    W = res.witness.transform(rename=ren)
    target = d * (a * U + b * V) + c
    if not verify_witness(W, target, "y"):
        raise AssertionError("linear witness failed verification")
    return W, ""
