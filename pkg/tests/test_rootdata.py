import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdk.catalog import catalog, general_linear, simply_connected
from rdk.classify import isomorphic
from rdk.rootdata import (
    RootDatum,
    RootDatumError,
    based,
    cartan_matrix,
    centre_invariants,
    check,
    coinduced_datum,
    coroot_saturation,
    derived_datum,
    direct_sum,
    dual,
    induced_datum,
    radical,
    reflection,
    root_annihilator,
    root_saturation,
    simple_roots,
    torus,
    torus_part,
    validate,
)
from rdk.zlattice import IntMatrix, finite_quotient, quotient
from strategies import catalog_data, reductive_data, unimodular

A1 = RootDatum.make(1, [(2,), (-2,)], [(1,), (-1,)], "A1 sc")


def test_torus_is_valid():
    assert validate(torus(2)) is None
    assert torus(2).is_torus()


def test_a1_sc_is_valid():
    assert validate(A1) is None
    assert A1 == catalog("A1", "sc")


def test_bad_pairing_is_reported():
    bad = RootDatum.make(1, [(2,), (-2,)], [(2,), (-2,)])
    v = validate(bad)
    assert v is not None and v.axiom == "pairing"
    assert "4" in v.message
    with pytest.raises(RootDatumError):
        check(bad)


def test_other_axioms():
    not_symmetric = RootDatum.make(1, [(2,)], [(1,)])
    assert validate(not_symmetric).axiom == "symmetric"
    not_reduced = RootDatum.make(1, [(1,), (-1,), (2,), (-2,)], [(2,), (-2,), (1,), (-1,)])
    assert validate(not_reduced).axiom == "reduced"
    # two orthogonal root pairs with coroots that are not mutually compatible
    broken = RootDatum.make(2, [(2, 0), (-2, 0), (0, 2), (0, -2)], [(1, 0), (-1, 0), (1, 1), (-1, -1)])
    assert validate(broken) is not None


def test_dual_examples():
    assert isomorphic(dual(A1), catalog("A1", "ad")) is not None
    for n in (2, 3, 4):
        G = general_linear(n)
        assert isomorphic(dual(G), G) is not None


@given(reductive_data())
def test_dual_is_an_involution(R):
    assert dual(dual(R)) == R
    assert validate(dual(R)) is None


def test_direct_sum_examples():
    assert direct_sum(A1, torus(0)) == A1
    S = direct_sum(A1, A1)
    assert S.rank == 2 and len(S.roots) == 4
    assert centre_invariants(S).torsion == (2, 2)
    assert direct_sum(torus(2), torus(3)) == torus(5)


@given(reductive_data())
def test_torus_part_keeps_rank(R):
    assert torus_part(R).rank == R.rank
    assert torus_part(R).is_torus()


def test_induced_examples():
    D, B = induced_datum(A1, IntMatrix.identity(1))
    assert D == A1
    G = general_linear(2)
    sub = IntMatrix.from_columns([(1, -1), (1, 1)], 2)
    D, B = induced_datum(G, sub)
    assert validate(D) is None and D.rank == 2
    assert finite_quotient(sub, 2).invariant_factors == (2,)


def test_induced_requires_roots():
    with pytest.raises(RootDatumError):
        induced_datum(general_linear(2), IntMatrix.from_columns([(1, 1)], 2))


def test_coinduced_examples():
    D, _ = coinduced_datum(A1, IntMatrix.identity(1))
    assert D == A1
    # coinduced over the saturated coroot lattice gives the derived datum
    G = general_linear(3)
    D1, _ = coinduced_datum(G, coroot_saturation(G))
    D2, _ = derived_datum(G)
    assert D1 == D2


@given(catalog_data())
def test_induced_and_coinduced_are_dual(R):
    sat = root_saturation(R)
    D, _ = induced_datum(R, sat)
    E, _ = coinduced_datum(dual(R), sat)
    assert isomorphic(dual(D), E) is not None


def test_radical_and_derived():
    R = simply_connected("B2")
    T, _ = radical(R)
    assert T.rank == 0
    D, _ = derived_datum(R)
    assert isomorphic(D, R) is not None
    for n in (2, 3, 4):
        G = general_linear(n)
        T, pr = radical(G)
        assert T.rank == 1
        D, _ = derived_datum(G)
        assert isomorphic(D, catalog(f"A{n-1}", "sc")) is not None
    T, _ = radical(torus(3))
    D, _ = derived_datum(torus(3))
    assert T.rank == 3 and D.rank == 0


@given(reductive_data())
def test_radical_kills_roots(R):
    _, pr = radical(R)
    for a in R.roots:
        assert not any(pr.apply(a))
    assert pr.rows == R.rank - R.semisimple_rank
    C = root_annihilator(R)
    assert C.cols == R.rank - R.semisimple_rank
    for a in R.roots:
        assert not any(C.T.apply(a))


def test_simple_roots_and_cartan():
    R = simply_connected("C2")
    s = simple_roots(R)
    assert len(s) == 2
    C = cartan_matrix(R, s)
    assert sorted(C[0][1:] + C[1][:1]) == [-2, -1]
    assert based(R).is_base()


@given(catalog_data())
def test_reflections_permute_roots(R):
    for i in range(len(R.roots)):
        s = reflection(R, i)
        assert s @ s == IntMatrix.identity(R.rank)
        assert {s.apply(a) for a in R.roots} == set(R.roots)


@given(catalog_data(), st.data())
def test_transform_preserves_validity(R, data):
    U = data.draw(unimodular(R.rank))
    S = R.transform(U)
    assert validate(S) is None
    assert isomorphic(R, S) is not None


def test_centre_invariants_examples():
    # SL_p at p: torsion Z/p, all of it p-part
    for p, label in ((2, "A1"), (3, "A2"), (5, "A4")):
        ci = centre_invariants(catalog(label, "sc"), p)
        assert ci.torsion == (p,) and ci.p_part == (p,) and ci.p_prime_part == ()
        assert ci.connected_centre and not ci.smooth_centre
    for n in (2, 3, 5):
        ci = centre_invariants(general_linear(n))
        assert ci.torsion == () and ci.smooth_centre and ci.free_rank == 1
    assert centre_invariants(catalog("C2", "sc"), 2).p_part == (2,)
    ci = centre_invariants(catalog("A5", "sc"), 2)
    assert ci.p_part == (2,) and ci.p_prime_part == (3,)


@given(reductive_data())
def test_free_rank_of_centre(R):
    q = quotient(R.root_matrix if R.roots else IntMatrix.zeros(R.rank, 0), R.rank)
    assert centre_invariants(R).free_rank == q.free_rank == R.rank - R.semisimple_rank
