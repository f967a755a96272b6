import itertools

import pytest

from rdk.catalog import (
    cartan_type_matrix,
    catalog,
    conformal_symplectic4,
    general_linear,
    intermediate_lattices,
    simple_labels,
    simply_connected,
)
from rdk.classify import isomorphic
from rdk.embed import (
    EmbeddingError,
    classify_embedding,
    is_simple,
    minimal_torus_rank,
    optimal_embedding,
    smooth_regular_embedding,
    steinberg_obstruction_check,
)
from rdk.morphism import (
    FrobeniusWitness,
    NotSteinberg,
    SteinbergWitness,
    identity,
    infer,
    scalar,
    suzuki_map,
    validate_p_morphism,
)
from rdk.rootdata import centre_invariants, direct_sum, torus, validate
from rdk.zlattice import IntMatrix, is_surjective


def diagram_automorphism(label, order):
    """A permutation of the weight coordinates induced by a Dynkin symmetry of the given order."""
    C = cartan_type_matrix(label)
    n = len(C)
    for perm in itertools.permutations(range(n)):
        if all(C[perm[i]][perm[j]] == C[i][j] for i in range(n) for j in range(n)):
            P = IntMatrix.from_rows([[int(perm[j] == i) for j in range(n)] for i in range(n)], n)
            k, Q = 1, P
            while Q != IntMatrix.identity(n):
                Q, k = Q @ P, k + 1
            if k == order:
                return P
    raise AssertionError(f"{label} has no diagram automorphism of order {order}")


def assert_smooth(emb, R):
    Rp = emb.datum
    assert validate(Rp) is None
    assert centre_invariants(Rp).torsion == ()
    assert validate_p_morphism(emb.p1, Rp, R, allow_partial=True) is None
    assert is_surjective(emb.p1.f)


# --- smooth regular embeddings ------------------------------------------------


def test_c2_split_frobenius():
    R = simply_connected("C2")
    F = scalar(R, 2)
    emb = smooth_regular_embedding(R, F)
    assert emb.datum.rank == 4
    assert emb.group_moduli == (2,)
    assert isomorphic(emb.datum, direct_sum(conformal_symplectic4(), torus(1))) is not None
    assert emb.certificates["commutes"]
    assert emb.certificates["steinberg"] == SteinbergWitness(1, 1)
    assert emb.certificates["torsion"] == ()
    assert_smooth(emb, R)


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "E6", "E7", "A1xA1"])
def test_simply_connected_types_become_smooth(label):
    R = simply_connected(label)
    emb = smooth_regular_embedding(R)
    assert_smooth(emb, R)
    # the added torus has the rank of X: R° is the torus part of R
    expected = 2 * R.rank if centre_invariants(R).torsion else R.rank
    assert emb.datum.rank == expected


@pytest.mark.parametrize("label", ["A3", "D4", "A5"])
def test_intermediate_lattices(label):
    for X in intermediate_lattices(label):
        R = catalog(label, [X.column(j) for j in range(X.cols)])
        assert_smooth(smooth_regular_embedding(R), R)


def test_smooth_data_are_returned_unchanged():
    for R in (general_linear(3), torus(2), simply_connected("G2"), catalog("A2", "ad")):
        emb = smooth_regular_embedding(R)
        assert emb.datum == R and emb.certificates == {"already_smooth": True}
        assert emb.p1 == identity(R)
    forced = smooth_regular_embedding(general_linear(2), force_construction=True)
    assert_smooth(forced, general_linear(2))
    # A = X/ZΦ ≅ Z is free here, so the fiber product over it has rank 2 + 2 - 1
    assert forced.group_moduli == (0,) and forced.datum.rank == 3


def test_reductive_non_smooth_input():
    R = direct_sum(simply_connected("A1"), torus(1))
    emb = smooth_regular_embedding(R)
    assert_smooth(emb, R)
    assert emb.group_moduli == (2,)


def test_non_steinberg_frobenius_is_rejected():
    R = simply_connected("A1")
    with pytest.raises(EmbeddingError):
        smooth_regular_embedding(R, identity(R, 2))


# --- classifying embeddings -----------------------------------------------------


def test_classify_embedding_kinds():
    for p, label in ((2, "A1"), (3, "A2"), (5, "A4")):
        R = simply_connected(label)
        src = direct_sum(R, torus(1))
        proj = IntMatrix.identity(R.rank).hstack(IntMatrix.zeros(R.rank, 1))
        m = infer(proj, 0, src, R)
        rep = classify_embedding(m, src, R, p)
        assert rep.kind == "p-regular" and rep.is_regular and not rep.is_smooth
        assert rep.p_part == (p,)
        other = 7
        assert classify_embedding(m, src, R, other).kind == "derived"
    R = simply_connected("A2")
    emb = smooth_regular_embedding(R)
    assert classify_embedding(emb.p1, emb.datum, R).kind == "smooth"
    assert classify_embedding(scalar(R, 2), R, R, 2).kind == "none"


def test_classify_embedding_with_frobenius():
    R = simply_connected("C2")
    emb = smooth_regular_embedding(R)
    rep = classify_embedding(emb.p1, emb.datum, R, 2, F=scalar(R, 2))
    assert rep.is_smooth
    assert rep.frobenius_lift is not None and rep.lift_commutes


# --- optimal embeddings ---------------------------------------------------------


def test_a4_twisted_frobenius():
    R = simply_connected("A4")
    tau = diagram_automorphism("A4", 2)
    F = infer(tau.scale(3), 3, R, R)
    opt = optimal_embedding(R, F)
    assert opt.torus_lift == IntMatrix.from_rows([[-1]], 1)
    assert opt.datum.rank == 5
    assert centre_invariants(opt.datum).torsion == ()
    assert opt.commutes
    assert isinstance(opt.frobenius, FrobeniusWitness) and opt.frobenius.order == 2


def test_d4_triality():
    R = simply_connected("D4")
    tau = diagram_automorphism("D4", 3)
    F = infer(tau.scale(2), 2, R, R)
    opt = optimal_embedding(R, F)
    L = opt.torus_lift
    assert L.rows == 2
    assert L != IntMatrix.identity(2) and L @ L @ L == IntMatrix.identity(2)
    assert opt.datum.rank == 6 and minimal_torus_rank(R) == 2
    assert centre_invariants(opt.datum).torsion == ()
    assert opt.commutes and opt.frobenius.order == 3


def test_c2_split_optimal():
    R = simply_connected("C2")
    opt = optimal_embedding(R, scalar(R, 2))
    assert opt.torus_lift == IntMatrix.identity(1)
    assert opt.psi.f == IntMatrix.identity(3).scale(2)
    assert opt.datum.rank == 3
    assert isomorphic(opt.datum, conformal_symplectic4()) is not None
    assert opt.commutes


def test_optimal_rejects_bad_input():
    R = simply_connected("C2")
    with pytest.raises(EmbeddingError, match="Frobenius"):
        optimal_embedding(R, infer(suzuki_map(1), 2, R, R))
    with pytest.raises(EmbeddingError, match="simple"):
        optimal_embedding(simply_connected("A1xA1"), scalar(simply_connected("A1xA1"), 2))
    assert not is_simple(torus(1))


# --- the Suzuki obstruction -------------------------------------------------------


@pytest.mark.parametrize("r", [1, 2, 3])
def test_suzuki_obstruction(r):
    rep = steinberg_obstruction_check(r)
    assert rep.witness == SteinbergWitness(2, 2 * r + 1)
    assert len(rep.cases) == 11
    assert rep.holds
    for c in rep.cases:
        assert isinstance(c.verdict, NotSteinberg)
        assert c.e2_exponent == 2 * r + 1 and c.e3_exponent == 2 * c.s
    assert not rep.cases[0].preserves_lattice


def test_split_contrast():
    rep = steinberg_obstruction_check(1, s_values=range(5), frobenius_matrix=IntMatrix.identity(2).scale(8))
    assert rep.witness == SteinbergWitness(1, 3)
    by_s = {c.s: c for c in rep.cases}
    assert by_s[3].verdict == SteinbergWitness(1, 3)
    assert by_s[3].preserves_lattice
    assert not rep.holds
    assert all(isinstance(by_s[s].verdict, NotSteinberg) for s in (0, 1, 2, 4))


def test_all_small_catalog_data_embed_smoothly():
    for label in simple_labels(3):
        for X in intermediate_lattices(label):
            R = catalog(label, [X.column(j) for j in range(X.cols)])
            assert_smooth(smooth_regular_embedding(R), R)
