import random

import pytest

from artifact.autom import Explicit, maps_ideal_onto, verify_witness
from artifact.poly import P, Polynomial, random_poly, sqf_part
from artifact.rectify import (KNOWN_X_VARIABLES, Kind, RectifyError, icon_decompose,
                              one_stable_rectify, pform_decompose, rectify, ruve_a, scramble,
                              wright_rectify)

Y, Z, U = (Polynomial.var(v) for v in "yzu")
P1 = (P("x*y^2"), P("y + x*z + x*y*z^2"))
P2 = (P("x*y^2"), P("y + x^2*z + x*y*z^2"))
P3 = (P("x*y^2"), P("y + x^2*z + x^3*y*z^2"))


def _p(fg):
    return fg[0] * U + fg[1]


# ---------------------------------------------------------------- RuVe(a)

def test_ruve_a_nilpotent_tail():
    a = ruve_a(None, P("y^2"), P(0), P(1), P("y*z^2"))
    assert a.images["z"] == P("y^2*u + z + y*z^2")
    assert isinstance(a.factors[0], Explicit)
    assert verify_witness(a, P("y^2*u + z + y*z^2"), "z")


def test_ruve_a_unit_f():
    a = ruve_a(None, P(1), P("y"), P(1), P(0))
    assert a.images["z"] == P("u + y + z")
    assert verify_witness(a, P("u + y + z"), "z")


def test_ruve_a_no_tail_is_triangular():
    a = ruve_a(None, P("y^2"), P("y"), P(2), P(0))
    assert [type(f).__name__ for f in a.factors] == ["Triangular", "Affine"]
    assert verify_witness(a, P("y^2*u + y + 2*z"), "z")


def test_ruve_a_preconditions():
    with pytest.raises(RectifyError):
        ruve_a(None, P("y^2"), P(0), P("y"), P(0))
    with pytest.raises(RectifyError):
        ruve_a(None, P("y^2"), P(0), P(1), P("z^2"))
    with pytest.raises(RectifyError):
        ruve_a(None, P(0), P(0), P(1), P(0))


def ruve_instance(rng):
    # f splits over Q with distinct roots; b1 = unit + f_red*h is invertible and q = f_red*(...) is nilpotent mod f
    f = Polynomial.const(rng.choice([1, 2, -3]))
    for r in rng.sample(range(-3, 4), rng.randint(1, 2)):
        f = f * (Y - r) ** rng.randint(1, 2)
    fr = sqf_part(f)
    b0 = random_poly(rng, ("y",), 2)
    b1 = Polynomial.const(rng.choice([1, -1, 2, 5])) + fr * random_poly(rng, ("y",), 1, terms=2)
    q = fr * random_poly(rng, ("y", "z"), 1, terms=2) * Z**2
    return f, b0, b1, q


@pytest.mark.parametrize("f,q", [("(y - 1)^3", "(y - 1)*z^2"), ("y^4", "y*z^2"),
                                 ("(y - 1)^3", "(y - 1)*z^3")])
def test_ruve_a_higher_multiplicity(f, q):
    p = P(f) * U + Y + P("2 + y") * Z + P(q)
    assert verify_witness(ruve_a(None, P(f), Y, P("2 + y"), P(q)), p, "z")


def test_ruve_a_random_small():
    rng = random.Random(77)
    for _ in range(40):
        f, b0, b1, q = ruve_instance(rng)
        assert verify_witness(ruve_a(None, f, b0, b1, q), f * U + b0 + b1 * Z + q, "z")


# ---------------------------------------------------------------- pform

@pytest.mark.parametrize("fg,g1,g2", [(P1, "1", "1"), (P2, "x", "1"), (P3, "x", "x^2")])
def test_pform_examples(fg, g1, g2):
    d = pform_decompose(*fg)
    assert (d.q, d.r, d.a0, d.a1, d.f_tilde, d.g0) == (P("x"), P(1), P(0), P(1), P("y^2"), P(0))
    assert (d.g1, d.g2) == (P(g1), P(g2))
    assert d.expand() == _p(fg)


def test_pform_needs_f_outside_qx():
    with pytest.raises(RectifyError):
        pform_decompose(P("x"), P("y"))


# ---------------------------------------------------------------- rectify

@pytest.mark.parametrize("fg", [P1, P3])
def test_rectify_x_variable_witness(fg):
    r = rectify(*fg)
    assert r.kind is Kind.XVARIABLE
    assert r.witness.apply(Y) == _p(fg)
    assert r.witness.check_inverse()


def test_rectify_p3_uses_adpr():
    assert any(t.startswith("adpr") for t in rectify(*P3).trace)


def test_rectify_p2_is_one_stable():
    r = rectify(*P2)
    assert r.kind is Kind.ONESTABLE
    assert r.p_n == P("y + z + x^3*y^2*u + x*y*z^2")
    assert verify_witness(r.p_n_witness, r.p_n, "y")
    assert maps_ideal_onto(r.witness, _p(P2), r.p_n)


@pytest.mark.parametrize("text,step", [
    ("y + x*(y*u + x*z)", "deg1"), ("y + x*(y^2*u + x^2*z)", "deg1"),
    ("x*u + y + z^2", "specase"), ("y + z", "f = 0"), ("y^2*u + z", "var1"),
])
def test_rectify_dispatch(text, step):
    p = P(text)
    r = rectify(p.coeff("u", 1), p.coeff("u", 0))
    assert r.kind is Kind.XVARIABLE and r.trace[0].startswith(step)
    assert verify_witness(r.witness, p, "y")


def test_rectify_russell_unknown_with_reason():
    r = rectify(P("x^2"), P("x + y^2 + z^3"))
    assert r.kind is Kind.UNKNOWN and "singular" in r.reason


def test_scramble_round_trip():
    for seed in range(30):
        p0 = P(KNOWN_X_VARIABLES[seed % len(KNOWN_X_VARIABLES)])
        p, S = scramble(p0, seed)
        assert S.apply(p0) == p and S.apply(P("x")) == P("x")
        r = rectify(p.coeff("u", 1), p.coeff("u", 0))
        assert r.kind is Kind.XVARIABLE and verify_witness(r.witness, p, "y")


# ---------------------------------------------------------------- 1-stable

def test_one_stable_empty_induction():
    # no x0 with y^2 u + z in C* y + C
    gamma, p_n, W = one_stable_rectify(P("y^2"), Z)
    assert gamma.is_identity() and p_n == P("y^2*u + z")
    assert verify_witness(W, p_n, "y")


def test_one_stable_p1_single_step():
    gamma, p_n, W = one_stable_rectify(*P1)
    assert maps_ideal_onto(gamma, _p(P1), p_n) and verify_witness(W, p_n, "y")


def test_one_stable_russell_fails():
    with pytest.raises(RectifyError):
        one_stable_rectify(P("x^2"), P("x + y^2 + z^3"))


# ---------------------------------------------------------------- icon / Wright

def test_icon_examples():
    form = icon_decompose(P("(y + z^2)^2"))
    assert (form.Phi, form.a, form.Q) == (P("t^2"), P(1), Z)
    form = icon_decompose(P("x^2 + 1"))
    assert (form.Phi, form.a, form.Q) == (P("x^2 + 1"), P(1), P(0))
    assert icon_decompose(P("y*z")) is None


def test_icon_reconstructs():
    rng = random.Random(12)
    for _ in range(20):
        phi = random_poly(rng, ("x", "t"), 3) + P("t^2")
        a = random_poly(rng, ("x",), 1, terms=2) or P(1)
        Q = random_poly(rng, ("x", "z"), 2)
        f = phi.subs({"t": a * Y + Z * Q})
        form = icon_decompose(f)
        assert form is None or form.expand() == f


@pytest.mark.parametrize("f", ["(y + z^2)^2", "x"])
def test_wright_x_variable(f):
    r = wright_rectify(P(f), Z, 2)
    assert r.kind is Kind.XVARIABLE and r.coordinate == "z"
    assert verify_witness(r.witness, P(f) * U**2 + Z, "z")


def test_wright_no_icon_form():
    r = wright_rectify(P("y*z"), Z, 2)
    assert r.kind is Kind.UNKNOWN and r.reason == "no (icon) form for f"


def test_wright_preconditions():
    with pytest.raises(RectifyError):
        wright_rectify(P("y"), Z, 1)
