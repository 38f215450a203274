"""Emptiness and point counts for affine varieties over C, via Groebner bases."""
from __future__ import annotations

import random
from functools import lru_cache

from sympy import QQ
from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyRing

from .poly import Polynomial, P, _embed_into, sort_vars, sqf_part, from_ring

_AUX = "_r"


@lru_cache(maxsize=None)
def _ring(vars, order):
    return PolyRing(vars, QQ, {"lex": lex, "grevlex": grevlex}[order])


def _elements(polys, vars, order):
    R = _ring(tuple(vars), order)
    out = []
    for p in polys:
        if p:
            terms = _embed_into(p, tuple(vars))
            out.append(R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in terms.items()}))
    return R, out


def _system(polys, nonzero):
    polys = [P(p) for p in polys]
    if nonzero is not None:
        nonzero = P(nonzero)
        polys = polys + [Polynomial.const(1) - Polynomial.var(_AUX) * nonzero]
    return polys


def is_empty(polys, nonzero=None):
    """True iff V(polys) minus V(nonzero) is empty over C."""
    polys = _system(polys, nonzero)
    polys = [p for p in polys if p]
    if any(p.is_constant() for p in polys):
        return True
    if not polys:
        return False
    vars = sort_vars(v for p in polys for v in p.vars)
    R, elems = _elements(polys, vars, "grevlex")
    gb = groebner(elems, R)
    return len(gb) == 1 and gb[0].is_ground and bool(gb[0])


def contained(sub_polys, sup_polys):
    """V(sub_polys) is contained in V(sup_polys)."""
    return all(is_empty(sub_polys, nonzero=h) for h in sup_polys if h)


def count_points(polys, nonzero=None, seed=0):
    """Number of points of a zero-dimensional variety; None if not finite."""
    polys = [p for p in _system(polys, nonzero) if p]
    if any(p.is_constant() for p in polys):
        return 0
    vars = sort_vars(v for p in polys for v in p.vars)
    if not vars:
        return 1
    rng = random.Random(seed)
    best = 0
    for _ in range(2):
        coeffs = [rng.randint(1, 97) for _ in vars[1:]]
        # shear: the last lex variable becomes a generic linear form
        last = vars[-1]
        sub = {last: Polynomial.var(last) - sum((c * Polynomial.var(v) for c, v in zip(coeffs, vars[:-1])), Polynomial.const(0))}
        sheared = [p.subs(sub) for p in polys]
        R, elems = _elements(sheared, vars, "lex")
        gb = groebner(elems, R)
        if len(gb) == 1 and gb[0].is_ground:
            return 0
        if not _zero_dimensional(gb, len(vars)):
            return None
        uni = [g for g in gb if all(e[:-1] == (0,) * (len(vars) - 1) for e in g.monoms())]
        if not uni:
            return None
        elim = from_ring(uni[0])
        best = max(best, sqf_part(elim).degree())
    return best


def _zero_dimensional(gb, n):
    # every variable has a pure power among the leading monomials
    lead = [g.LM for g in gb]
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lead):
            return False
    return True


def intersection_index(polys):
    """dim_Q of Q[vars]/(polys); None if the quotient is infinite-dimensional."""
    polys = [P(p) for p in polys if P(p)]
    if any(p.is_constant() for p in polys):
        return 0
    vars = sort_vars(v for p in polys for v in p.vars)
    R, elems = _elements(polys, vars, "grevlex")
    gb = groebner(elems, R)
    if len(gb) == 1 and gb[0].is_ground:
        return 0
    if not _zero_dimensional(gb, len(vars)):
        return None
    lead = [g.LM for g in gb]
    bound = [min(m[i] for m in lead if m[i] > 0 and sum(m) == m[i]) for i in range(len(vars))]
    count = 0
    stack = [tuple([0] * len(vars))]
    seen = set(stack)
    # standard monomials form an order ideal: walk it from 1
    while stack:
        m = stack.pop()
        if any(all(a >= b for a, b in zip(m, l)) for l in lead):
            continue
        count += 1
        for i in range(len(vars)):
            n = m[:i] + (m[i] + 1,) + m[i + 1:]
            if n[i] < bound[i] and n not in seen:
                seen.add(n)
                stack.append(n)
    return count
