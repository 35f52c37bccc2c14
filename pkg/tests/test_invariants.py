import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from filtcone import catalog
from filtcone.cone import build_cone
from filtcone.invariants import (
    betti,
    cohomology_quotient,
    cohomology_table,
    filtered_betti_direct,
    filtered_betti_formula,
    lefschetz_ranks,
    semicharacteristics,
    verify_vanishing,
)
from filtcone.linalg import induced_on_quotient, rank
from filtcone.model import psi, with_omega
from filtcone.operators import build_bundle, hodge_even_kernel_dim

NAMES = catalog.names()


def test_betti_examples():
    assert betti(catalog.get("s2xs2xs2")) == [1, 0, 3, 0, 3, 0, 1]
    assert betti(catalog.get("kt_x_s2")) == [1, 3, 5, 6, 5, 3, 1]
    for g in range(4):
        assert betti(catalog.surface(g)) == [1, 2 * g, 1]


def test_psi_on_h2_of_s2_cubed():
    m = catalog.get("s2xs2xs2")
    h2, h6 = cohomology_quotient(m, 2), cohomology_quotient(m, 6)
    f = m.left_mult_matrix(psi(m), 2)
    induced = induced_on_quotient(f, h2, h6)
    assert rank(induced) == 1
    # each omega_j goes to 2 omega_1 omega_2 omega_3
    assert induced.to_dense() == [[2, 2, 2]]


def test_lefschetz_examples():
    assert lefschetz_ranks(catalog.get("s2xs2xs2"), 2) == [1, 0, 1, 0, 0, 0, 0]
    assert lefschetz_ranks(catalog.get("kt_x_s2"), 2) == [1, 2, 1, 0, 0, 0, 0]
    assert lefschetz_ranks(catalog.surface(3), 2) == [0, 0, 0]


def test_formula_examples():
    s3 = filtered_betti_formula(catalog.get("s2xs2xs2"), 1)
    assert s3[0::2] == [1, 3, 2, 0, 0]
    kt = filtered_betti_formula(catalog.get("kt_x_s2"), 1)
    assert kt[0::2] == [1, 5, 5, 6, 3]
    for g in range(4):
        sg = filtered_betti_formula(catalog.surface(g), 0)
        assert sg[1] == 2 * g and sg[2] == 2 * g
        assert sg[0] + sg[2] == 1 + 2 * g


def test_semicharacteristic_examples():
    sc = semicharacteristics(catalog.surface(2))
    assert (sc.k_char, sc.ell) == (1, 0)
    sc = semicharacteristics(catalog.get("s2xs2xs2"))
    assert (sc.ell, sc.p1_even_sum) == (0, 6)
    sc = semicharacteristics(catalog.get("kt_x_s2"))
    assert (sc.ell, sc.p1_even_sum) == (0, 20)
    assert semicharacteristics(catalog.torus(2)).ell is None


def test_verify_examples():
    rep = verify_vanishing(catalog.get("s2xs2xs2"))
    assert rep.applicable and rep.passed and rep.ell_direct == 0
    rep = verify_vanishing(catalog.torus(3))
    assert rep.passed and rep.table.even_sum == 56
    rep = verify_vanishing(catalog.torus(2))
    assert not rep.applicable and rep.passed
    assert rep.table.b_phi_direct == [1, 4, 6, 4, 4, 6, 4, 1]
    assert any("not 2 mod 4" in f for f in rep.findings)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("p", [0, 1, 2])
def test_formula_matches_cone(name, p):
    m = catalog.get(name)
    assert filtered_betti_formula(m, p) == filtered_betti_direct(m, p)


@pytest.mark.parametrize("name", NAMES)
def test_rank_bounds_and_duality(name):
    m = catalog.get(name)
    b = betti(m)
    assert b == b[::-1]
    for q in (1, 2, 3):
        r = lefschetz_ranks(m, q)
        for i, ri in enumerate(r):
            target = b[i + 2 * q] if i + 2 * q < len(b) else 0
            assert ri <= min(b[i], target)


@pytest.mark.parametrize("name", NAMES)
def test_even_sum_parity_matches_hodge_kernel(name):
    m = catalog.get(name)
    if m.top_degree % 2:
        pytest.skip("odd top degree")
    table = cohomology_table(m, 1)
    hodge = hodge_even_kernel_dim(build_bundle(build_cone(m, 1)))
    assert table.even_sum % 2 == hodge.kernel_dim % 2


@given(st.sampled_from(["kt_x_s2", "s2xs2xs2", "torus2", "surface_g1", "torus3"]),
       st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
@settings(max_examples=20, deadline=None)
def test_scaling_omega_changes_nothing(name, c):
    m = catalog.get(name)
    scaled = with_omega(m, c * m.omega)
    for p in (0, 1):
        a, b = cohomology_table(m, p), cohomology_table(scaled, p)
        assert (a.r, a.b_phi_direct) == (b.r, b.b_phi_direct)
    assert semicharacteristics(m) == semicharacteristics(scaled)


FACTORS = ["point", "sphere2", "surface_g1", "surface_g2", "torus1", "torus2", "kodaira_thurston", "s2xs2"]


@st.composite
def products_2_mod_4(draw):
    models = [catalog.get(n) for n in draw(st.lists(st.sampled_from(FACTORS), min_size=1, max_size=4))]
    if sum(m.top_degree for m in models) % 4 == 0:
        models.append(catalog.sphere2())
    size = 1
    for m in models:
        size *= m.size
    assume(sum(m.top_degree for m in models) <= 10 and size <= 256)
    return catalog.product(models)


@given(products_2_mod_4())
@settings(max_examples=15, deadline=None)
def test_vanishing_on_random_products(model):
    rep = verify_vanishing(model)
    assert rep.applicable
    assert rep.table.paths_agree
    assert rep.ell_direct == rep.ell_formula == 0
