import json
import random

import pytest

from artifact.autom import (Affine, AutomError, PolyMap, Triangular, compose, gamma_k, gamma_pq,
                            gamma_pq_ideals, interpolate_multispec, jvdk_decompose,
                            maps_ideal_onto, verify_witness)
from artifact.poly import P, Polynomial, divides, random_poly

Y, V, Z = (Polynomial.var(v) for v in "yvz")


def _in_ideal(poly, h):
    # oracle: poly mod v, then exact divisibility by h(y)
    rest = poly.subs({"v": Polynomial.const(0)})
    return rest.is_zero() or divides(h, rest)


def _ideal_check(gamma, src, tgt):
    inv = gamma.inverse()
    return (_in_ideal(gamma.apply(src), tgt) and _in_ideal(gamma.apply(V), tgt)
            and _in_ideal(inv.apply(tgt), src) and _in_ideal(inv.apply(V), src))


# ---------------------------------------------------------------- gamma_pq

def test_gamma_pq_images():
    g = gamma_pq(P("y^2 + 1"), P("y + 1"))
    assert g.images["y"] == P("v + y + 1")
    assert g.images["v"] == P("y - (v + y + 1)^2 - 1")
    assert g.check_inverse()


def test_gamma_pq_q_zero():
    p = P("y^3 - 2*y + 5")
    g = gamma_pq(p, P(0))
    assert g.images["y"] == V and g.images["v"] == Y - p.subs({"y": V})
    assert _ideal_check(g, Y, Y - p.subs({"y": Polynomial.const(0)}))


def test_gamma_pq_isom_b_case_a2():
    # ideal (y + 2 y^2, v) onto (y + 4 y^2, v); realized with p -> -p, q = a y
    g = gamma_pq(P("-y^2"), P("2*y"))
    src, tgt = gamma_pq_ideals(P("-y^2"), P("2*y"))
    assert src == P("y + 2*y^2") and tgt == P("y + 4*y^2")
    assert _ideal_check(g, src, tgt)


def test_gamma_pq_example_oracle():
    p, q = P("y^2 + 1"), P("y + 1")
    src, tgt = gamma_pq_ideals(p, q)
    g = gamma_pq(p, q)
    assert _ideal_check(g, src, tgt)
    assert maps_ideal_onto(g, src, tgt)


@pytest.mark.parametrize("ring", ["Q", "Q[x]"])
def test_gamma_pq_random_property(ring):
    rng = random.Random(2024 if ring == "Q" else 2025)
    vars = ("y",) if ring == "Q" else ("x", "y")
    fixed = () if ring == "Q" else ("x",)
    for _ in range(200):
        p = random_poly(rng, vars, 4)
        q = random_poly(rng, vars, 4)
        g = gamma_pq(p, q, fixed=fixed)
        src, tgt = gamma_pq_ideals(p, q)
        assert _ideal_check(g, src, tgt)
        assert maps_ideal_onto(g, src, tgt)


# ---------------------------------------------------------------- gamma_k

def test_gamma_k_base_case():
    p = P("y^2 + 3*y")
    gk, src, tgt = gamma_k(p, Polynomial.const(2), 0)
    g0 = gamma_pq(-p, 2 * Y)
    assert gk == g0
    assert _ideal_check(gk, src, tgt)


def test_gamma_k_p2_step():
    hp = P("y*(y*u + z^2) + x*z")
    gk, src, tgt = gamma_k(hp, P("x"), 1, fixed=("x", "z", "u"))
    assert src == Y + P("x") * hp
    assert tgt == P("y + x*y*(x^2*y*u + z^2) + z")
    assert maps_ideal_onto(gk, src, tgt)


def test_gamma_k_a_one_is_identity_on_ideal():
    p = P("y^2 - y + 1")
    gk, src, tgt = gamma_k(p, Polynomial.const(1), 2)
    assert src == tgt
    assert _ideal_check(gk, src, tgt)


def test_gamma_k_precondition():
    with pytest.raises(AutomError):
        gamma_k(P("y + 1"), P("x"), 1, fixed=("x",))


# ---------------------------------------------------------------- jvdk

def test_jvdk_identity():
    assert jvdk_decompose(PolyMap.identity(("y", "z"))) == []


def test_jvdk_triangular():
    alpha = PolyMap(("y", "z"), images={"y": P("y + z^2"), "z": Z})
    fs = jvdk_decompose(alpha)
    assert len(fs) == 1 and isinstance(fs[0], Triangular)


def test_jvdk_swap_then_triangular():
    alpha = PolyMap(("y", "z"), images={"y": Z, "z": P("-y - z^3")})
    fs = jvdk_decompose(alpha)
    assert [type(f) for f in fs] == [Affine, Triangular]
    assert PolyMap(("y", "z"), factors=fs) == alpha


def test_jvdk_not_automorphism():
    with pytest.raises(AutomError):
        jvdk_decompose(PolyMap(("y", "z"), images={"y": P("y^2"), "z": Z}))


def _random_plane_map(rng, n):
    factors = []
    for _ in range(n):
        if rng.random() < 0.5:
            v = rng.choice("yz")
            o = "z" if v == "y" else "y"
            factors.append(Triangular(v, random_poly(rng, (o,), 3)))
        else:
            a, b, c = (rng.randint(-3, 3) for _ in range(3))
            factors.append(Affine(("y", "z"), ((1, a), (0, 1)) if rng.random() < 0.5 else ((0, 1), (1, b)), (c, 0)))
    return PolyMap(("y", "z"), factors=factors)


def test_jvdk_recompose_random():
    rng = random.Random(8)
    for _ in range(200):
        alpha = _random_plane_map(rng, rng.randint(1, 5))
        alpha = PolyMap(("y", "z"), images=alpha.images)
        fs = jvdk_decompose(alpha)
        assert PolyMap(("y", "z"), factors=fs) == alpha


# ---------------------------------------------------------------- multi-specialization

def test_interpolate_two_points():
    tgt = PolyMap(("y", "z"), factors=(Triangular("y", P("z^2")),))
    g = interpolate_multispec([0, 1], [PolyMap.identity(("y", "z")), tgt])
    assert g.images["y"] == P("y + x*z^2") and g.images["z"] == Z


def test_interpolate_single_identity():
    g = interpolate_multispec([3], [PolyMap.identity(("y", "z"))])
    assert g.is_identity()


def test_interpolate_three_points():
    tgt = PolyMap(("y", "z"), factors=(Triangular("z", P("y^3")),))
    ident = PolyMap.identity(("y", "z"))
    g = interpolate_multispec([0, 1, 2], [ident, tgt, ident])
    assert g.images["z"] == P("z - x*(x - 2)*y^3")
    for lam, t in zip([0, 1, 2], [ident, tgt, ident]):
        spec = {v: g.images[v].subs({"x": Polynomial.const(lam)}) for v in ("y", "z")}
        assert spec == t.images


# ---------------------------------------------------------------- PolyMap basics

def test_compose_apply_law():
    rng = random.Random(4)
    for _ in range(30):
        a = _random_plane_map(rng, 3)
        b = _random_plane_map(rng, 3)
        p = random_poly(rng, ("y", "z"), 3)
        assert compose(a, b).apply(p) == a.apply(b.apply(p))


def test_tracked_maps_have_constant_jacobian():
    rng = random.Random(6)
    for _ in range(30):
        a = _random_plane_map(rng, 4)
        j = a.jacobian_det()
        assert j.is_constant() and j
        assert a.check_inverse()


def test_verify_witness_examples():
    ident = PolyMap.identity(("y", "z"))
    assert verify_witness(ident, Y, "y")
    a = PolyMap(("y", "z"), factors=(Triangular("y", P("z^2")),))
    assert not verify_witness(a, a.apply(Y) + 1, "y")
    with pytest.raises(AutomError):
        verify_witness(PolyMap(("y", "z"), images={"y": Z, "z": Y}), Z, "y")


def test_untracked_maps_do_not_invert():
    with pytest.raises(AutomError):
        PolyMap(("y", "z"), images={"y": Z, "z": Y}).inverse()


def test_json_roundtrip():
    rng = random.Random(9)
    a = compose(_random_plane_map(rng, 4), PolyMap(("y", "z"), factors=(Triangular("z", P("x*y^2")),), fixed=("x",)))
    data = json.loads(json.dumps(a.to_json()))
    b = PolyMap.from_json(data)
    assert b == a and b.to_json() == a.to_json()
