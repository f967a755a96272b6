from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from rdk.central import group_from_factors
from rdk.zlattice import (
    IntMatrix,
    LatticeError,
    adapted_basis,
    annihilator,
    block_diag,
    complete_to_unimodular,
    contains,
    coordinates,
    fiber_product,
    finite_quotient,
    hermite_basis,
    integer_kernel,
    invariant_factors,
    is_sublattice,
    lattice_equal,
    lattice_index,
    lattice_intersection,
    lattice_sum,
    map_is_surjective,
    map_kernel,
    quotient,
    rational_solve_matrix,
    right_inverse,
    saturation,
    section,
    smith_normal_form,
    solve,
)
from strategies import int_matrices, unimodular


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


def C(columns, rows):
    return IntMatrix.from_columns(columns, rows)


# --- IntMatrix basics ------------------------------------------------------


def test_shapes_and_products():
    A = M([[1, 2], [3, 4], [5, 6]])
    assert (A.rows, A.cols) == (3, 2)
    assert A.T.tolist() == [[1, 3, 5], [2, 4, 6]]
    assert (A.T @ A).tolist() == [[35, 44], [44, 56]]
    assert A.apply((1, -1)) == (-1, -1, -1)
    with pytest.raises(LatticeError):
        A @ A


def test_empty_matrices_compose():
    Z = IntMatrix.zeros(0, 3)
    assert (IntMatrix.zeros(2, 0) @ Z).tolist() == [[0, 0, 0], [0, 0, 0]]
    assert Z.rank() == 0


def test_det_inverse_power():
    A = M([[2, 1], [1, 1]])
    assert A.det() == 1
    assert (A @ A.inverse()) == IntMatrix.identity(2)
    assert A**-2 == (A.inverse() @ A.inverse())
    with pytest.raises(LatticeError):
        M([[2, 0], [0, 1]]).inverse()


@given(int_matrices(rows=3, cols=3))
def test_bareiss_det_matches_fraction_det(A):
    assert A.det() == oracles.det(A.tolist())


# --- Smith normal form -----------------------------------------------------


def test_snf_identity():
    d = smith_normal_form(IntMatrix.identity(2))
    assert d.S == IntMatrix.identity(2)
    assert d.U == IntMatrix.identity(2) and d.V == IntMatrix.identity(2)


def test_snf_two_by_two():
    d = smith_normal_form(M([[2, 4], [6, 8]]))
    assert d.diagonal == (2, 4)
    # d1 is the gcd of the entries and d1·d2 = |det|
    assert d.diagonal[0] == 2 and d.diagonal[0] * d.diagonal[1] == 8


def test_snf_zero():
    assert smith_normal_form(M([[0]])).S.tolist() == [[0]]


@given(int_matrices())
def test_snf_certificate(A):
    d = smith_normal_form(A)
    assert d.U.is_unimodular() and d.V.is_unimodular()
    assert d.U @ A @ d.V == d.S
    diag = [x for x in d.diagonal if x]
    assert all(x > 0 for x in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
    for i in range(d.S.rows):
        for j in range(d.S.cols):
            if i != j:
                assert d.S[i, j] == 0


@given(int_matrices(max_dim=3, lo=-4, hi=4))
def test_snf_matches_determinantal_divisors(A):
    diag = [x for x in smith_normal_form(A).diagonal if x]
    assert diag == oracles.smith_diagonal(A.tolist())


# --- Adapted bases and quotients -------------------------------------------


def test_adapted_basis_example():
    ab = adapted_basis(C([(2, 2), (0, 4)], 2), 2)
    assert ab.divisors == (4, 2)
    assert finite_quotient(C([(2, 2), (0, 4)], 2), 2).invariant_factors == (4, 2)
    # oracle: enumerate the eight cosets
    assert oracles.group_structure([(2, 2), (0, 4)], 2) == (4, 2)


def test_adapted_basis_trivial_and_rank_one():
    assert adapted_basis(IntMatrix.identity(3), 3).divisors == (1, 1, 1)
    assert finite_quotient(IntMatrix.identity(3), 3).invariant_factors == ()
    assert finite_quotient(M([[2]]), 1).invariant_factors == (2,)


@given(int_matrices(rows=3, cols=3, lo=-5, hi=5))
def test_adapted_basis_spans_the_sublattice(K):
    ab = adapted_basis(K, 3)
    assert ab.basis.is_unimodular()
    scaled = C([tuple(d * x for x in ab.basis.column(i)) for i, d in enumerate(ab.divisors)], 3)
    assert lattice_equal(hermite_basis(scaled), hermite_basis(K))
    nz = [d for d in ab.divisors if d]
    assert all(nz[i] % nz[i + 1] == 0 for i in range(len(nz) - 1))


@given(int_matrices(rows=2, cols=2, lo=-4, hi=4))
def test_quotient_matches_coset_enumeration(K):
    assume(K.det() != 0 and abs(K.det()) <= 40)
    cols = [c for c in K.columns()]
    assert finite_quotient(K, 2).invariant_factors == oracles.group_structure(cols, 2)


def test_quotient_with_free_part():
    Q = quotient(C([(2, 0, 0)], 3), 3)
    assert Q.free_rank == 2 and Q.torsion == (2,)
    assert not Q.is_finite
    with pytest.raises(LatticeError):
        Q.order
    assert lattice_equal(Q.kernel(), C([(2, 0, 0)], 3))


@given(int_matrices(rows=3, cols=2, lo=-4, hi=4))
def test_quotient_kernel_is_the_sublattice(K):
    Q = quotient(K, 3)
    assert lattice_equal(Q.kernel(), hermite_basis(K))
    assert map_is_surjective(Q.projection, Q.moduli)


# --- Saturation, annihilator, kernels ---------------------------------------


def test_saturation_examples():
    assert lattice_equal(saturation(C([(2, 0)], 2), 2), C([(1, 0)], 2))
    assert lattice_equal(saturation(C([(2, 2), (0, 4)], 2), 2), IntMatrix.identity(2))
    assert saturation(IntMatrix.zeros(2, 0), 2).cols == 0


def test_annihilator_examples():
    assert lattice_equal(annihilator(C([(1, 0)], 2), 2), C([(0, 1)], 2))
    assert annihilator(IntMatrix.identity(2), 2).cols == 0
    assert lattice_equal(annihilator(C([(2, 4)], 2), 2), C([(2, -1)], 2))


@given(int_matrices(rows=4, cols=2, lo=-3, hi=3))
def test_annihilator_is_saturated_complement(A):
    assume(A.rank() > 0)
    ann = annihilator(A, 4)
    assert ann.cols == 4 - A.rank()
    assert (A.T @ ann).is_zero()
    assert lattice_equal(saturation(ann, 4), hermite_basis(ann))
    assert lattice_equal(annihilator(ann, 4), saturation(A, 4))


@given(int_matrices(max_dim=4, lo=-4, hi=4))
def test_integer_kernel(A):
    K = integer_kernel(A)
    assert K.cols == A.cols - A.rank()
    if K.cols:
        assert (A @ K).is_zero()
        assert lattice_equal(saturation(K, A.cols), hermite_basis(K))


@given(int_matrices(rows=2, cols=3, lo=-3, hi=3), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_finds_preimages(A, x):
    b = A.apply(x)
    y = solve(A, b)
    assert y is not None and A.apply(y) == b


def test_right_inverse_and_completion():
    A = M([[2, 3, 5]])
    R = right_inverse(A)
    assert A @ R == IntMatrix.identity(1)
    U = complete_to_unimodular(A)
    assert U.is_unimodular() and U.row(0) == (2, 3, 5)


def test_rational_solve_matrix():
    A = C([(1, 0, 1), (0, 2, 0)], 3)
    X = M([[3], [1]])
    assert rational_solve_matrix(A, A @ X) == X
    assert rational_solve_matrix(A, M([[0], [1], [0]])) is None


def test_membership_and_index():
    L = C([(2, 0), (1, 3)], 2)
    assert contains(L, (3, 3)) and not contains(L, (1, 0))
    assert coordinates(L, (3, 3)) == (1, 1)
    assert lattice_index(L, 2) == 6
    assert lattice_index(C([(1, 0)], 2), 2) == 0
    assert is_sublattice(C([(4, 0)], 2), L)


@given(int_matrices(rows=2, cols=2, lo=-4, hi=4), int_matrices(rows=2, cols=2, lo=-4, hi=4))
def test_sum_and_intersection(a, b):
    assume(a.det() != 0 and b.det() != 0)
    s = lattice_sum(a, b)
    i = lattice_intersection(a, b)
    assert is_sublattice(a, s) and is_sublattice(b, s)
    assert is_sublattice(i, a) and is_sublattice(i, b)
    # [Z^2 : a] [Z^2 : b] = [Z^2 : a + b] [Z^2 : a ∩ b]
    assert lattice_index(a, 2) * lattice_index(b, 2) == lattice_index(s, 2) * lattice_index(i, 2)


# --- Maps to finite groups and fiber products -------------------------------


def test_map_kernel_and_section():
    d = (4, 2)
    h = M([[1, 2, 0], [0, 1, 1]])
    assert map_is_surjective(h, d)
    K = map_kernel(h, d)
    assert lattice_index(K, 3) == 8
    S = section(h, d)
    for i in range(len(d)):
        img = h.apply(S.column(i))
        assert [x % m for x, m in zip(img, d)] == [int(k == i) for k in range(len(d))]


def test_fiber_product_trivial_group_is_direct_sum():
    A = group_from_factors(())
    fp = fiber_product(IntMatrix.zeros(0, 2), IntMatrix.zeros(0, 1), A)
    assert lattice_equal(fp.basis, IntMatrix.identity(3))


def test_fiber_product_mod_two():
    A = group_from_factors((2,))
    fp = fiber_product(M([[1]]), M([[1]]), A)
    assert lattice_equal(fp.basis, C([(1, 1), (0, 2)], 2))
    # brute force over residues in a box
    for v in oracles.fiber_points([[1]], [[1]], (2,), 1, 1, 3):
        assert contains(fp.basis, v)


@given(st.sampled_from([(2,), (3,), (4,), (6,), (2, 2), (4, 2)]), st.data())
def test_fiber_product_matches_brute_force(d, data):
    A = group_from_factors(d)
    s = len(d)
    h1 = IntMatrix.from_rows([[data.draw(st.integers(0, m - 1)) for _ in range(2)] for m in d], 2)
    assume(map_is_surjective(h1, d))
    h2 = IntMatrix.identity(s)
    fp = fiber_product(h1, h2, A)
    pts = set(oracles.fiber_points(h1.tolist(), h2.tolist(), d, 2, s, 2))
    for v in pts:
        assert contains(fp.basis, v)
    for c in fp.basis.columns():
        x1, x2 = c[:2], c[2:]
        assert all((a - b) % m == 0 for a, b, m in zip(h1.apply(x1), h2.apply(x2), d))
    order = 1
    for m in d:
        order *= m
    assert lattice_index(fp.basis, 2 + s) == order


@given(st.sampled_from([(2,), (5,), (4, 2)]), st.data())
def test_fiber_index_invariant_under_automorphisms(d, data):
    import rdk.abelian as ab

    A = group_from_factors(d)
    s = len(d)
    P = data.draw(st.sampled_from(ab.enumerate_automorphisms(d)))
    base = fiber_product(IntMatrix.identity(s), IntMatrix.identity(s), A)
    twisted = fiber_product(IntMatrix.identity(s), P, A)
    assert lattice_index(base.basis, 2 * s) == lattice_index(twisted.basis, 2 * s)


def test_block_diag():
    B = block_diag(M([[1]]), M([[2, 3]]))
    assert B.tolist() == [[1, 0, 0], [0, 2, 3]]


@given(unimodular(3))
def test_unimodular_strategy(U):
    assert abs(U.det()) == 1
    assert gcd(*U.row(0)) == 1
    assert invariant_factors(U) == ()
