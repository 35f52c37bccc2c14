from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filtcone import catalog
from filtcone.invariants import betti
from filtcone.model import (
    ModelError,
    make_ce_model,
    make_ring_model,
    power,
    psi,
    tensor,
    validate,
    wedge,
)

TORUS4_OMEGA = {"e1^e2": 1, "e3^e4": 1}


def test_abelian_ce_model():
    m = make_ce_model("T4", ["e1", "e2", "e3", "e4"], {}, TORUS4_OMEGA)
    assert m.size == 16
    assert m.top_degree == 4
    assert betti(m) == [1, 4, 6, 4, 1]


def test_kodaira_thurston_ce_model():
    m = make_ce_model("kt", ["e1", "e2", "e3", "e4"], {"e4": {"e2^e3": 1}}, TORUS4_OMEGA)
    assert m.d(m.element({"e4": 1})) == m.element({"e2^e3": 1})
    # e4 is the only generator that is not closed
    assert betti(m)[1] == 3
    assert validate(m).passed


def test_t6_dimensions_are_binomial():
    m = catalog.torus(3)
    assert m.size == 64
    assert [m.dim(k) for k in range(7)] == [comb(6, k) for k in range(7)]
    assert betti(m) == [comb(6, k) for k in range(7)]


def test_monomial_sign_normalisation():
    m = make_ce_model("T4", ["e1", "e2", "e3", "e4"], {}, {"e2^e1": -1, "e3^e4": 1})
    assert m.omega == m.element({"e1^e2": 1, "e3^e4": 1})


def test_ce_rejects_nonzero_d_squared():
    gens = ["e1", "e2", "e3", "e4", "e5"]
    with pytest.raises(ModelError) as info:
        make_ce_model("bad", gens, {"e3": {"e1^e2": 1}, "e4": {"e3^e5": 1}}, {})
    assert info.value.witness == "e4"


def test_ce_rejects_open_omega():
    with pytest.raises(ModelError, match="not closed"):
        make_ce_model("kt", ["e1", "e2", "e3", "e4"], {"e4": {"e2^e3": 1}}, {"e1^e4": 1})


def test_ce_rejects_wrong_degree_differential():
    with pytest.raises(ModelError) as info:
        make_ce_model("bad", ["e1", "e2"], {"e1": {"e2": 1}}, {})
    assert info.value.witness == "e1"


def test_ring_models():
    s2 = catalog.sphere2()
    assert betti(s2) == [1, 0, 1]
    pt = catalog.point()
    assert pt.size == 1 and pt.top_degree == 0 and validate(pt).passed
    sg = catalog.surface(3)
    assert betti(sg) == [1, 6, 1]
    assert wedge(sg.element({"a2": 1}), sg.element({"b2": 1})) == sg.element({"vol": 1})
    assert wedge(sg.element({"b2": 1}), sg.element({"a2": 1})) == sg.element({"vol": -1})
    assert wedge(sg.element({"a1": 1}), sg.element({"b2": 1})).is_zero()


def test_ring_rejects_noncommutative_products():
    with pytest.raises(ModelError, match="commutativity"):
        make_ring_model("bad", [("a", 1), ("b", 1), ("v", 2)], {("a", "b"): {"v": 1}}, {"v": 1})


def test_ring_rejects_nonassociative_products():
    basis = [("x", 2), ("y", 2), ("u", 4), ("v", 4), ("w", 6)]
    products = {
        ("x", "y"): {"u": 1}, ("y", "x"): {"u": 1},
        ("x", "x"): {"v": 1},
        ("x", "u"): {"w": 1}, ("u", "x"): {"w": 1},
    }
    with pytest.raises(ModelError, match="associativity") as info:
        make_ring_model("bad", basis, products, {"x": 1})
    assert set(info.value.witness) <= {"x", "y", "u", "v"}


def test_tensor_examples():
    s2 = catalog.sphere2()
    m = tensor(tensor(s2, s2), s2)
    assert m.size == 8
    assert betti(m) == [1, 0, 3, 0, 3, 0, 1]

    kt = catalog.kodaira_thurston()
    assert betti(tensor(kt, catalog.point())) == betti(kt)
    kts2 = tensor(kt, s2)
    assert kts2.size == 32
    assert betti(kts2) == [1, 3, 5, 6, 5, 3, 1]
    assert validate(kts2).passed


def test_tensor_koszul_sign():
    t1 = catalog.torus(1)
    m = tensor(t1, t1)
    a = m.element({"e1|1": 1})
    b = m.element({"1|e1": 1})
    assert wedge(a, b) == -wedge(b, a)
    assert not wedge(a, b).is_zero()


def test_wedge_examples():
    t6 = catalog.torus(3)
    x = t6.element({"e3^e5": 2})
    assert wedge(t6.unit(), x) == x
    e1 = t6.element({"e1": 1})
    assert wedge(e1, e1).is_zero()
    expected = t6.element({"e1^e2^e3^e4": 2, "e1^e2^e5^e6": 2, "e3^e4^e5^e6": 2})
    assert wedge(t6.omega, t6.omega) == expected
    with pytest.raises(ModelError):
        wedge(e1, catalog.torus(3).unit())


def test_psi_examples():
    assert psi(catalog.surface(2)).is_zero()
    t6 = catalog.torus(3)
    assert psi(t6) == 2 * t6.element({"e1^e2^e3^e4": 1, "e1^e2^e5^e6": 1, "e3^e4^e5^e6": 1})
    m = catalog.get("s2xs2xs2")
    assert psi(m) == m.element({"x|x|1": 2, "x|1|x": 2, "1|x|x": 2})


def test_validate_examples():
    assert validate(catalog.torus(3)).passed
    assert validate(catalog.kodaira_thurston()).passed
    bad = make_ce_model("nonnilpotent", ["e1", "e2"], {"e1": {"e1^e2": 1}}, {"e1^e2": 1})
    rep = validate(bad)
    assert not rep.passed
    assert any(f.witness == "e1" for f in rep.failures)


def test_validate_reports_degenerate_omega():
    m = make_ce_model("T4", ["e1", "e2", "e3", "e4"], {}, {"e1^e2": 1})
    rep = validate(m)
    assert [f.invariant for f in rep.failures] == ["omega_nondegenerate"]


@pytest.mark.parametrize("name", catalog.names())
def test_catalog_models_are_valid_and_symplectic(name):
    m = catalog.get(name)
    assert validate(m).passed
    assert m.d(m.omega).is_zero()
    if m.top_degree >= 2:
        assert not power(m.omega, m.top_degree // 2).is_zero()


SMALL = ["point", "sphere2", "surface_g1", "surface_g2", "torus1", "torus2", "kodaira_thurston"]


@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
@settings(max_examples=30, deadline=None)
def test_kunneth_convolution(a, b):
    ma, mb = catalog.get(a), catalog.get(b)
    ba, bb = betti(ma), betti(mb)
    expected = [
        sum(ba[j] * bb[i - j] for j in range(len(ba)) if 0 <= i - j < len(bb))
        for i in range(len(ba) + len(bb) - 1)
    ]
    assert betti(tensor(ma, mb)) == expected


@given(st.integers(1, 6))
@settings(max_examples=6, deadline=None)
def test_ce_slice_dims(g):
    gens = [f"e{i}" for i in range(1, g + 1)]
    m = make_ce_model("free", gens, {}, {})
    assert [m.dim(k) for k in range(g + 1)] == [comb(g, k) for k in range(g + 1)]


def test_rational_coefficients():
    m = make_ce_model("T2", ["e1", "e2"], {}, {"e1^e2": Fraction(1, 3)})
    assert m.omega.coeffs == {m.index("e1^e2"): Fraction(1, 3)}
    assert validate(m).passed
