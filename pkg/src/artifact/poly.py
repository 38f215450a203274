"""Exact sparse multivariate polynomials over Q.

Arithmetic, substitution, printing and parsing live here.  Factorization,
gcd, exact division and resultants go through sympy's sparse rings.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering

import flint
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

VAR_ORDER = ("x", "y", "z", "u", "v", "t", "s", "w")
DEFAULT_VARS = ("x", "y", "z", "u", "v", "t")


class Tri(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    @staticmethod
    def of(flag):
        return Tri.YES if flag else Tri.NO


class PolyError(ValueError):
    pass


class NotDivisible(PolyError):
    pass


def var_key(name):
    if name in VAR_ORDER:
        return (VAR_ORDER.index(name), "")
    return (len(VAR_ORDER), name)


def sort_vars(names):
    return tuple(sorted(set(names), key=var_key))


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return Fraction(int(c.numerator), int(c.denominator))
    raise TypeError(f"not a rational: {c!r}")


class Polynomial:
    """Immutable polynomial: exponent tuples over ``vars`` mapped to Fractions.

    Variables that do not occur are dropped and the rest are kept in the
    canonical order, so structurally equal polynomials compare equal.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms=None, vars=()):
        terms = terms or {}
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise PolyError(f"duplicate variables in {vars}")
        clean = {}
        for e, c in terms.items():
            if len(e) != len(vars):
                raise PolyError("exponent length does not match varset")
            c = _frac(c)
            if c:
                clean[tuple(e)] = clean.get(tuple(e), 0) + c
        clean = {e: c for e, c in clean.items() if c}
        used = [i for i in range(len(vars)) if any(e[i] for e in clean)]
        order = sorted(used, key=lambda i: var_key(vars[i]))
        if order != list(range(len(vars))):
            clean = {tuple(e[i] for i in order): c for e, c in clean.items()}
            vars = tuple(vars[i] for i in order)
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms, vars):
        # trusted constructor: canonical vars, no zero coefficients
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        c = _frac(c)
        return cls._raw({(): c} if c else {}, ())

    @classmethod
    def var(cls, name):
        return cls._raw({(1,): Fraction(1)}, (name,))

    @classmethod
    def coerce(cls, obj):
        if isinstance(obj, Polynomial):
            return obj
        if isinstance(obj, str):
            return parse(obj, None)
        return cls.const(obj)

    @classmethod
    def from_coeffs(cls, coeffs, var):
        """Sum of coeffs[j] * var^j."""
        v = cls.var(var)
        out = cls.const(0)
        for j, c in enumerate(coeffs):
            c = cls.coerce(c)
            if c:
                out = out + c * v**j
        return out

    # basic queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.vars

    def constant(self):
        """Value of a constant polynomial."""
        if self.vars:
            raise PolyError(f"not a constant: {self}")
        return self.terms.get((), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def __len__(self):
        return len(self.terms)

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    total_degree = degree

    def monomials(self):
        """Yield (dict var->exp, coefficient)."""
        for e, c in self.terms.items():
            yield {v: k for v, k in zip(self.vars, e) if k}, c

    def coeffs(self, var):
        """[b_0, ..., b_d] with self = sum b_j var^j."""
        if var not in self.vars:
            return [self]
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        d = max(buckets)
        return [Polynomial(buckets.get(j, {}), rest) for j in range(d + 1)]

    def coeff(self, var, j):
        cs = self.coeffs(var)
        return cs[j] if j < len(cs) else Polynomial.const(0)

    def lc(self, var):
        return self.coeffs(var)[-1]

    # arithmetic
    def _align(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        vars = sort_vars(self.vars + other.vars)
        return vars, self._embed(vars), other._embed(vars)

    def _embed(self, vars):
        if self.vars == vars:
            return self.terms
        idx = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for e, c in self.terms.items():
            f = [0] * n
            for i, k in zip(idx, e):
                f[i] = k
            out[tuple(f)] = c
        return out

    def _finish(self, terms, vars):
        terms = {e: c for e, c in terms.items() if c}
        if any(all(e[i] == 0 for e in terms) for i in range(len(vars))):
            return Polynomial(terms, vars)
        return Polynomial._raw(terms, vars)

    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        vars, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return self._finish(out, vars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Polynomial.const(0)
        vars, a, b = self._align(other)
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._finish(out, vars)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        # division by a nonzero rational or an exact polynomial divisor
        if isinstance(other, Polynomial) and not other.is_constant():
            return exquo(self, other)
        c = Polynomial.coerce(other).constant()
        if not c:
            raise ZeroDivisionError("division by zero polynomial")
        return Polynomial._raw({e: v / c for e, v in self.terms.items()}, self.vars)

    def scale(self, c):
        return self * Polynomial.const(c)

    def __eq__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return False
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution
    def diff(self, var):
        if var not in self.vars:
            return Polynomial.const(0)
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[f] = c * e[i]
        return Polynomial(out, self.vars)

    def subs(self, mapping):
        """Simultaneous substitution var -> Polynomial (or number)."""
        mapping = {k: Polynomial.coerce(v) for k, v in mapping.items() if k in self.vars}
        if not mapping:
            return self
        # composition is done by flint over every variable involved
        vars = _common_vars(self, *mapping.values())
        ctx = _flint_ctx(vars)
        gens = ctx.gens()
        args = [_to_flint(mapping[v], vars) if v in mapping else gens[vars.index(v)] for v in self.vars]
        src = _to_flint(self, self.vars)
        return _from_flint(src.compose(*args, ctx=ctx), vars)

    def evaluate(self, point):
        """Exact value at a full point (dict var -> rational)."""
        total = Fraction(0)
        vals = [_frac(point[v]) for v in self.vars]
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x**k
            total += t
        return total

    def content(self):
        """Positive rational g with self/g having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = Fraction(math.gcd(*nums), math.lcm(*dens))
        return g

    def primitive(self):
        """Integer-coefficient primitive part with positive leading term."""
        if not self.terms:
            return self
        p = self / self.content()
        if p.leading_coefficient() < 0:
            p = -p
        return p

    def monic(self):
        if not self.terms:
            return self
        return self / self.leading_coefficient()

    def sorted_terms(self):
        def key(item):
            e = item[0]
            full = tuple(e)
            return (sum(e), full)
        return sorted(self.terms.items(), key=key, reverse=True)

    def leading_coefficient(self):
        return self.sorted_terms()[0][1]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _maybe(obj):
    if isinstance(obj, Polynomial):
        return obj
    if isinstance(obj, (int, Fraction)):
        return Polynomial.const(obj)
    return NotImplemented


def P(obj):
    """Shorthand: coerce a string, number or Polynomial."""
    return Polynomial.coerce(obj)


def var(name):
    return Polynomial.var(name)


# ---------------------------------------------------------------- parser

class ParseError(PolyError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif text.startswith("**", i):
            tokens.append(("^", "^", i))
            i += 2
        elif ch in "+-*^()/":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, varset):
        self.tokens = _tokenize(text)
        self.i = 0
        self.varset = varset

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        out = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek()[0] == "*":
            self.take()
            out = out * self.factor()
        return out

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] == "-":
                raise ParseError("negative exponent", self.peek()[2])
            tok = self.take("num")
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.take("num")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                value /= int(den[1])
            return Polynomial.const(value)
        if tok[0] == "name":
            self.take()
            if self.varset is not None and tok[1] not in self.varset:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
            return Polynomial.var(tok[1])
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if tok[0] == "-":
            self.take()
            return -self.atom()
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2])


def parse(text, varset=DEFAULT_VARS):
    """Parse ``text`` into a Polynomial; ``varset=None`` allows any name."""
    parser = _Parser(text, None if varset is None else tuple(varset))
    out = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return out


def det_poly(rows):
    """Determinant of a square matrix of Polynomials by cofactor expansion."""
    n = len(rows)
    if n == 0:
        return Polynomial.const(1)
    if n == 1:
        return P(rows[0][0])
    total = Polynomial.const(0)
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = P(rows[0][j]) * det_poly(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------- flint bridge

@lru_cache(maxsize=None)
def _flint_ctx(vars):
    return flint.fmpq_mpoly_ctx.get(tuple(vars), "lex")


def _to_flint(p, vars):
    ctx = _flint_ctx(tuple(vars))
    return ctx.from_dict({e: flint.fmpq(c.numerator, c.denominator) for e, c in _embed_into(p, vars).items()})


def _from_flint(elem, vars):
    # vars are canonical and flint terms distinct and nonzero: only drop unused variables
    raw = elem.to_dict()
    used = [i for i in range(len(vars)) if any(e[i] for e in raw)]
    terms = {tuple(int(e[i]) for i in used): Fraction(int(c.p), int(c.q)) for e, c in raw.items()}
    return Polynomial._raw(terms, tuple(vars[i] for i in used))


# ---------------------------------------------------------------- sympy bridge

@lru_cache(maxsize=None)
def _ring(vars):
    return PolyRing(vars, QQ, lex)


def _embed_into(p, vars):
    idx = [vars.index(v) for v in p.vars]
    out = {}
    for e, c in p.terms.items():
        f = [0] * len(vars)
        for i, k in zip(idx, e):
            f[i] = k
        out[tuple(f)] = c
    return out


def _to_ring(p, vars):
    R = _ring(tuple(vars))
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in _embed_into(p, vars).items()})


def from_ring(elem, vars=None):
    if not hasattr(elem, "ring"):
        # univariate resultants come back as bare scalars
        return Polynomial.const(_frac(elem))
    vars = tuple(str(g) for g in elem.ring.symbols)
    if list(vars) != list(sort_vars(vars)):
        return Polynomial({tuple(e): _frac(c) for e, c in elem.items()}, vars)
    # ring terms are distinct and nonzero: only unused variables need dropping
    used = [i for i in range(len(vars)) if any(e[i] for e in elem.keys())]
    terms = {tuple(e[i] for i in used): Fraction(int(c.numerator), int(c.denominator))
             for e, c in elem.items()}
    return Polynomial._raw(terms, tuple(vars[i] for i in used))


def _common_vars(*polys, first=None):
    vars = sort_vars(itertools.chain.from_iterable(p.vars for p in polys))
    if first is not None:
        vars = (first,) + tuple(v for v in vars if v != first)
    return vars


def gcd(p, q):
    """Monic-normalized gcd (primitive, positive leading coefficient)."""
    p, q = P(p), P(q)
    if not p:
        return q.primitive()
    if not q:
        return p.primitive()
    vars = _common_vars(p, q)
    if not vars:
        return Polynomial.const(1)
    g = from_ring(_to_ring(p, vars).gcd(_to_ring(q, vars)), vars)
    return g.primitive()


def poly_gcd_list(polys):
    out = Polynomial.const(0)
    for p in polys:
        out = gcd(out, p)
    return out


def exquo(p, q):
    """Exact quotient p/q; raises NotDivisible."""
    p, q = P(p), P(q)
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    if not p:
        return p
    vars = _common_vars(p, q)
    if not vars:
        return Polynomial.const(p.constant() / q.constant())
    a, b = _to_ring(p, vars), _to_ring(q, vars)
    quo, rem = a.div(b)
    if rem:
        raise NotDivisible(f"{q} does not divide {p}")
    return from_ring(quo, vars)


def divides(q, p):
    try:
        exquo(p, q)
    except NotDivisible:
        return False
    return True


def sqf_part(p):
    p = P(p)
    if p.is_constant():
        return Polynomial.const(1) if p else p
    vars = p.vars
    return from_ring(_to_ring(p, vars).sqf_part(), vars).primitive()


def factor_list(p):
    """(unit, [(factor, multiplicity)]) over Q with primitive factors."""
    p = P(p)
    if not p:
        raise PolyError("cannot factor the zero polynomial")
    if p.is_constant():
        return p.constant(), []
    vars = p.vars
    unit, facs = _to_ring(p, vars).factor_list()
    out = []
    unit = _frac(unit)
    for f, m in facs:
        fp = from_ring(f, vars)
        prim = fp.primitive()
        unit *= (fp.leading_coefficient() / prim.leading_coefficient()) ** m
        out.append((prim, m))
    out.sort(key=lambda fm: (fm[0].degree(), str(fm[0])))
    return unit, out


def resultant(p, q, v):
    """Sylvester resultant of p and q with respect to v."""
    p, q = P(p), P(q)
    if p.degree(v) <= 0 and q.degree(v) <= 0:
        raise PolyError(f"both polynomials have degree 0 in {v}")
    vars = _common_vars(p, q, Polynomial.var(v), first=v)
    r = _to_ring(p, vars).resultant(_to_ring(q, vars))
    return from_ring(r, vars)


def reduce_mod(p, f):
    """A remainder of p on division by f (congruent to p modulo f)."""
    p, f = P(p), P(f)
    if not f:
        raise ZeroDivisionError("reduction modulo zero")
    if f.is_constant() or not p:
        return Polynomial.const(0)
    vars = _common_vars(p, f)
    return from_ring(_to_ring(p, vars).rem(_to_ring(f, vars)), vars)


def solve_linear(rows, rhs):
    """One rational solution of rows * x = rhs, or None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [[QQ(Fraction(c).numerator, Fraction(c).denominator) for c in row] + [QQ(Fraction(b).numerator, Fraction(b).denominator)]
           for row, b in zip(rows, rhs)]
    M = DomainMatrix(aug, (len(aug), n + 1), QQ)
    R, pivots = M.rref()
    if n in pivots:
        return None
    R = R.to_list()
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = _frac(R[i][n])
    return sol


def _monomials_upto(vars, d):
    out = []
    for e in itertools.product(range(d + 1), repeat=len(vars)):
        if sum(e) <= d:
            out.append(e)
    return out


def bezout_mod(b, f, max_degree=10):
    """c with c*b = 1 modulo f, or None.

    Univariate inputs use the extended Euclidean algorithm; otherwise an
    ansatz c*b + h*f = 1 of growing degree is solved as a linear system.
    """
    b, f = P(b), P(f)
    if f.is_constant():
        return Polynomial.const(0) if f else None
    vars = _common_vars(b, f)
    if len(vars) == 1:
        s, t, g = _to_ring(b, vars).gcdex(_to_ring(f, vars))
        if not g.is_ground:
            return None
        return from_ring(s, vars) / from_ring(g, vars).constant()
    from .ideal import is_empty
    if not is_empty([b, f]):
        return None
    for d in range(max_degree + 1):
        mc = _monomials_upto(vars, d)
        mh = _monomials_upto(vars, d + max(b.degree() - f.degree(), 0))
        unknowns = [("c", e) for e in mc] + [("h", e) for e in mh]
        eqs = {}
        for k, (which, e) in enumerate(unknowns):
            mono = Polynomial({e: 1}, vars)
            prod = mono * (b if which == "c" else f)
            for m, c in _embed_into(prod, vars).items():
                eqs.setdefault(m, {})[k] = c
        zero = tuple([0] * len(vars))
        eqs.setdefault(zero, {})
        keys = sorted(eqs)
        rows = [[eqs[m].get(k, 0) for k in range(len(unknowns))] for m in keys]
        rhs = [1 if m == zero else 0 for m in keys]
        sol = solve_linear(rows, rhs)
        if sol is not None:
            c = Polynomial({e: s for (w, e), s in zip(unknowns, sol) if w == "c" and s}, vars)
            assert divides(f, c * b - 1)
            return c
    return None


def rational_roots(p):
    """Rational roots of a univariate polynomial with multiplicities."""
    p = P(p)
    if p.is_constant():
        return []
    _, facs = factor_list(p)
    out = []
    for g, m in facs:
        if g.degree() == 1:
            (v,) = g.vars
            out.append((-g.coeff(v, 0).constant_term() / g.coeff(v, 1).constant(), m))
    return sorted(out)


def discriminant_free(p, v):
    """True iff p is squarefree as a polynomial in v over the other variables."""
    return gcd(p, p.diff(v)).degree(v) <= 0


# ---------------------------------------------------------------- factorization

@dataclass(frozen=True)
class Factorization:
    unit: Fraction
    factors: tuple
    abs_irreducible: tuple

    def expand(self):
        out = Polynomial.const(self.unit)
        for f, m in self.factors:
            out = out * f**m
        return out


def factor(p):
    p = P(p)
    unit, facs = factor_list(p)
    flags = tuple(abs_irreducible(f) for f, _ in facs)
    return Factorization(unit, tuple(facs), flags)


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def newton_polygon_indecomposable(points, limit=200000):
    """Gao's test: True if the lattice polygon is integrally indecomposable.

    Returns None when the subset enumeration would exceed ``limit``.
    """
    hull = _hull(points)
    if len(hull) == 1:
        return False
    if len(hull) == 2:
        hull = [hull[0], hull[1]]
        cyc = [(hull[1][0] - hull[0][0], hull[1][1] - hull[0][1]),
               (hull[0][0] - hull[1][0], hull[0][1] - hull[1][1])]
    else:
        cyc = [(hull[(i + 1) % len(hull)][0] - hull[i][0],
                hull[(i + 1) % len(hull)][1] - hull[i][1]) for i in range(len(hull))]
    edges = []
    for dx, dy in cyc:
        g = math.gcd(dx, dy)
        edges.append(((dx // g, dy // g), g))
    total = math.prod(g + 1 for _, g in edges)
    if total > limit:
        return None
    # a proper nonzero sub-multiset of edge vectors summing to zero
    # means the polygon decomposes
    full = sum(g for _, g in edges)
    reach = {(0, 0): {0}}
    for (a, b), g in edges:
        nxt = {}
        for (sx, sy), counts in reach.items():
            for c in range(g + 1):
                key = (sx + c * a, sy + c * b)
                nxt.setdefault(key, set()).update(n + c for n in counts)
        reach = nxt
    zero_counts = reach.get((0, 0), set())
    return not any(0 < n < full for n in zero_counts)


def _rational_roots(poly1):
    """Rational roots of a univariate Polynomial."""
    if poly1.is_constant():
        return []
    _, facs = factor_list(poly1)
    roots = []
    for f, _ in facs:
        if f.degree() == 1:
            (v,) = f.vars
            c1, c0 = f.coeff(v, 1).constant(), f.coeff(v, 0).constant()
            roots.append(-c0 / c1)
    return roots


def smooth_rational_point(f, radius=4):
    """Search a small box for a rational point of f=0 with nonzero gradient."""
    vars = f.vars
    if not vars:
        return None
    grads = [f.diff(v) for v in vars]
    last = vars[-1]
    others = vars[:-1]
    rng = range(-radius, radius + 1)
    for vals in itertools.product(rng, repeat=len(others)):
        pt = dict(zip(others, vals))
        uni = f.subs({k: Polynomial.const(v) for k, v in pt.items()})
        if uni.is_zero():
            continue
        for r in _rational_roots(uni):
            full = dict(pt)
            full[last] = r
            if any(g.evaluate(full) for g in grads):
                return full
    return None


_QUAD_EXTENSIONS = (-1, 2, -2, 3, -3, 5, -7)


def splits_over_quadratic(f):
    import sympy
    syms = sympy.symbols(f.vars)
    expr = to_sympy_expr(f, syms)
    for d in _QUAD_EXTENSIONS:
        _, facs = sympy.factor_list(expr, *syms, extension=sympy.sqrt(d))
        if sum(m for _, m in facs) > 1:
            return d
    return None


def to_sympy_expr(p, syms=None):
    import sympy
    if syms is None:
        syms = sympy.symbols(p.vars) if p.vars else ()
    smap = dict(zip(p.vars, syms))
    out = sympy.Integer(0)
    for mono, c in p.monomials():
        t = sympy.Rational(c.numerator, c.denominator)
        for v, k in mono.items():
            t *= smap[v] ** k
        out += t
    return out


def abs_irreducible(f):
    """Absolute irreducibility of a Q-irreducible polynomial: Tri."""
    f = P(f)
    if f.is_constant():
        return Tri.NO
    if f.degree() == 1:
        return Tri.YES
    if len(f.vars) == 1:
        return Tri.NO
    for v in f.vars:
        if f.degree(v) == 1:
            a, b = f.coeff(v, 1), f.coeff(v, 0)
            if gcd(a, b).is_constant():
                return Tri.YES
    if len(f.vars) == 2:
        pts = [e for e in f.terms]
        if newton_polygon_indecomposable(pts):
            return Tri.YES
    if smooth_rational_point(f) is not None:
        return Tri.YES
    if splits_over_quadratic(f) is not None:
        return Tri.NO
    return Tri.UNKNOWN


# ---------------------------------------------------------------- weights

@total_ordering
@dataclass(frozen=True)
class WeightValue:
    """Exact real number rat + irr*sqrt(2)."""

    rat: Fraction = Fraction(0)
    irr: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rat", _frac(self.rat))
        object.__setattr__(self, "irr", _frac(self.irr))

    def __add__(self, other):
        other = _wv(other)
        return WeightValue(self.rat + other.rat, self.irr + other.irr)

    __radd__ = __add__

    def __neg__(self):
        return WeightValue(-self.rat, -self.irr)

    def __sub__(self, other):
        return self + (-_wv(other))

    def __mul__(self, k):
        k = _frac(k)
        return WeightValue(self.rat * k, self.irr * k)

    __rmul__ = __mul__

    def sign(self):
        a, b = self.rat, self.irr
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        # signs disagree: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __eq__(self, other):
        if not isinstance(other, (WeightValue, int, Fraction)):
            return NotImplemented
        other = _wv(other)
        return self.rat == other.rat and self.irr == other.irr

    def __hash__(self):
        return hash((self.rat, self.irr))

    def __lt__(self, other):
        return (self - _wv(other)).sign() < 0

    def __float__(self):
        return float(self.rat) + float(self.irr) * math.sqrt(2)

    def __str__(self):
        if not self.irr:
            return str(self.rat)
        return f"{self.rat} + {self.irr}*sqrt2"


def _wv(obj):
    if isinstance(obj, WeightValue):
        return obj
    return WeightValue(_frac(obj), Fraction(0))


def monomial_weight(mono, weights):
    total = WeightValue()
    for v, k in mono.items():
        total = total + _wv(weights.get(v, 0)) * k
    return total


def weight_degree(p, weights):
    p = P(p)
    if not p:
        raise PolyError("weight degree of the zero polynomial is -infinity")
    return max(monomial_weight(m, weights) for m, _ in p.monomials())


def principal_part(p, weights):
    p = P(p)
    top = weight_degree(p, weights)
    keep = {e: c for e, c in p.terms.items()
            if monomial_weight(dict(zip(p.vars, e)), weights) == top}
    return Polynomial(keep, p.vars)


# ---------------------------------------------------------------- mod tests

class RingSpec(str, enum.Enum):
    UNIVARIATE_Q = "univariate_Q"
    UNIVARIATE_QX = "univariate_Qx"
    BIVARIATE_Q = "bivariate_Q"


@dataclass(frozen=True)
class ModResult:
    invertible_mod_f: object
    nilpotent_mod_f: bool


def mod_tests(b, f, spec, var="y"):
    """Invertibility and nilpotency of b modulo f.

    ``var`` names the ring variable in the univariate specs; over Q(x)
    every other variable is treated as part of the coefficient field.
    """
    b, f = P(b), P(f)
    spec = RingSpec(spec)
    if not f:
        raise PolyError("modulus f must be nonzero")
    if spec is RingSpec.UNIVARIATE_QX:
        nil = _nilpotent_over_field(b, f, var)
        if f.degree(var) <= 0:
            return ModResult(Tri.YES, True)
        if b.degree(var) < 0:
            return ModResult(Tri.NO, True)
        if b.degree(var) == 0:
            return ModResult(Tri.YES, nil)
        r = resultant(b, f, var)
        return ModResult(Tri.of(not r.is_zero()), nil)
    nil = divides(sqf_part(f), b)
    if spec is RingSpec.UNIVARIATE_Q:
        if f.is_constant():
            return ModResult(Tri.YES, True)
        return ModResult(Tri.of(gcd(b, f).is_constant() and bool(b)), nil)
    from .ideal import is_empty
    if f.is_constant():
        return ModResult(Tri.YES, True)
    return ModResult(Tri.of(is_empty([b, f])), nil)


def _nilpotent_over_field(b, f, var):
    # f^red over Q(x): strip the part of f free of var, then divide in Q(x)[var]
    if f.degree(var) <= 0:
        return True
    fred = sqf_part(f)
    cont = poly_gcd_list([c for c in fred.coeffs(var) if c])
    core = exquo(fred, cont) if not cont.is_constant() else fred
    _, rem = pseudo_rem(b, core, var)
    return rem.is_zero()


def pseudo_rem(a, b, v):
    """Pseudo-division a * lc(b)^k = q b + r in (coeff ring)[v]."""
    vars = _common_vars(a, b, Polynomial.var(v), first=v)
    ra, rb = _to_ring(a, vars), _to_ring(b, vars)
    r = ra.prem(rb)
    return None, from_ring(r, vars)


def random_poly(rng, vars, degree, terms=4, coeff=3):
    """Small random polynomial for property tests and scramblers."""
    out = Polynomial.const(0)
    for _ in range(terms):
        exps = [0] * len(vars)
        d = rng.randint(0, degree)
        for _ in range(d):
            exps[rng.randrange(len(vars))] += 1
        c = rng.randint(-coeff, coeff)
        mono = Polynomial.const(c)
        for v, k in zip(vars, exps):
            mono = mono * Polynomial.var(v) ** k
        out = out + mono
    return out


__all__ = [
    "Polynomial", "P", "var", "parse", "ParseError", "PolyError", "NotDivisible",
    "Tri", "gcd", "exquo", "divides", "sqf_part", "factor_list", "factor",
    "Factorization", "resultant", "abs_irreducible", "WeightValue",
    "weight_degree", "principal_part", "mod_tests", "RingSpec", "random_poly",
    "reduce_mod", "solve_linear", "bezout_mod", "rational_roots",
]
