"""Isomorphism testing and the double-coset classification of root data.

Every root datum is a central product of its derived datum and its radical
over A = X/(Φ^⊤ + Φ̌^⊥).  Two data are isomorphic exactly when some
isomorphism δ of derived data carries Ker(h1) to Ker(h2) and the map it
induces on A lifts along the torus surjections; the lift is decided by
:func:`rdk.abelian.lift_along`.  Isomorphisms of semisimple data are found
by matching bases with equal Cartan matrices.  The Weyl group acts trivially
on X/ZΦ, so base bijections are enough.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import abelian
from .central import (
    CentralProductSpec,
    Decomposition,
    central_product,
    decompose_as_central_product,
)
from .rootdata import (
    RootDatum,
    RootDatumError,
    cartan_matrix,
    centre_invariants,
    derived_datum,
    root_saturation,
    simple_roots,
    torus,
)
from .zlattice import (
    IntMatrix,
    block_diag,
    finite_quotient,
    hermite_basis,
    quotient,
    rational_inverse,
    reduce_mod,
    section,
)


class ClassificationError(ValueError):
    """Raised for invalid triples or undecided tameness."""


# ---------------------------------------------------------------------------
# Semisimple isomorphisms
# ---------------------------------------------------------------------------


def _cartan_bijections(C1: list[list[int]], C2: list[list[int]]) -> Iterator[list[int]]:
    """Permutations σ with C2[σi][σj] = C1[i][j], by backtracking."""
    n = len(C1)
    if len(C2) != n:
        return
    used = [False] * n
    sigma: list[int] = []

    def rec(i: int) -> Iterator[list[int]]:
        if i == n:
            yield sigma[:]
            return
        for c in range(n):
            if used[c] or C2[c][c] != C1[i][i]:
                continue
            if all(C2[sigma[k]][c] == C1[k][i] and C2[c][sigma[k]] == C1[i][k] for k in range(i)):
                used[c] = True
                sigma.append(c)
                yield from rec(i + 1)
                sigma.pop()
                used[c] = False

    yield from rec(0)


def _integral_solution(S1: IntMatrix, S2: IntMatrix) -> IntMatrix | None:
    """δ with δ·S1 = S2 for square invertible S1, if integral."""
    inv = rational_inverse(S1)
    if inv is None:
        return None
    rows = []
    for i in range(S2.rows):
        row = []
        for j in range(S1.rows):
            v = sum(S2[i, k] * inv[k][j] for k in range(S1.rows))
            if v.denominator != 1:
                return None
            row.append(int(v))
        rows.append(row)
    return IntMatrix.from_rows(rows, S1.rows)


def semisimple_isomorphisms(R1: RootDatum, R2: RootDatum) -> Iterator[IntMatrix]:
    """Lattice isomorphisms X1 -> X2 carrying a base of R1 onto a base of R2.

    Each yielded δ maps roots to roots and coroots to coroots (verified).
    Every isomorphism equals one of these composed with a Weyl group element.
    """
    if R1.rank != R2.rank or len(R1.roots) != len(R2.roots):
        return
    if not (R1.is_semisimple() and R2.is_semisimple()):
        raise RootDatumError("semisimple data expected")
    n = R1.rank
    if n == 0:
        yield IntMatrix.zeros(0, 0)
        return
    b1, b2 = simple_roots(R1), simple_roots(R2)
    C1, C2 = cartan_matrix(R1, b1), cartan_matrix(R2, b2)
    S1 = IntMatrix.from_columns([R1.roots[i] for i in b1], n)
    pairs2 = set(zip(R2.roots, R2.coroots))
    for sigma in _cartan_bijections(C1, C2):
        S2 = IntMatrix.from_columns([R2.roots[b2[sigma[i]]] for i in range(n)], n)
        delta = _integral_solution(S1, S2)
        if delta is None or not delta.is_unimodular():
            continue
        moved = R1.transform(delta)
        if set(zip(moved.roots, moved.coroots)) == pairs2:
            yield delta


def automorphisms_modulo_weyl(R: RootDatum) -> list[IntMatrix]:
    """Diagram automorphisms of a semisimple datum that stabilize X."""
    return list(semisimple_isomorphisms(R, R))


# ---------------------------------------------------------------------------
# General isomorphisms
# ---------------------------------------------------------------------------


def _quick_invariants(R: RootDatum) -> tuple:
    ci = centre_invariants(R)
    co = quotient(R.coroot_matrix if R.coroots else IntMatrix.zeros(R.rank, 0), R.rank)
    C = cartan_matrix(R)
    diag = sorted(C[i][i] for i in range(len(C)))
    return (R.rank, len(R.roots), R.semisimple_rank, ci.torsion, ci.free_rank, co.torsion, diag)


def _reduce_rows(M: IntMatrix, d: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) for r, m in zip(M.data, d)], M.cols)


def _kernel(h: IntMatrix, d: Sequence[int], n: int) -> IntMatrix:
    from .zlattice import map_kernel

    if not d:
        return IntMatrix.identity(n)
    return map_kernel(h, d)


def _iso_from_decompositions(dec1: Decomposition, dec2: Decomposition) -> IntMatrix | None:
    s1, s2 = dec1.spec, dec2.spec
    D1, D2 = s1.R1, s2.R1
    d = tuple(s1.A.moduli)
    if d != tuple(s2.A.moduli) or s1.R2.rank != s2.R2.rank:
        return None
    K1 = _kernel(s1.h1, d, D1.rank)
    K2 = hermite_basis(_kernel(s2.h1, d, D2.rank))
    sect = section(s1.h1, d) if d else IntMatrix.zeros(D1.rank, 0)
    seen_zeta: set[IntMatrix] = set()
    for delta in semisimple_isomorphisms(D1, D2):
        if hermite_basis(delta @ K1) != K2:
            continue
        zeta = _reduce_rows(s2.h1 @ delta @ sect, d) if d else IntMatrix.zeros(0, 0)
        if zeta in seen_zeta:
            continue
        seen_zeta.add(zeta)
        lam = abelian.lift_along(s1.h2, s2.h2, zeta, d)
        if lam is None:
            continue
        big = block_diag(delta, lam)
        E1, E2 = dec1.product.embed, dec2.product.embed
        Y = _left_solve(E2, big @ E1)
        if Y is None:  # pragma: no cover - the fiber condition holds by construction
            continue
        g = _left_solve(dec2.iso, Y @ dec1.iso)
        if g is None or not g.is_unimodular():  # pragma: no cover
            continue
        return g
    return None


def _left_solve(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Y with A·Y = B for square invertible A, if integral."""
    inv = rational_inverse(A)
    if inv is None:
        return None
    rows = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            v = sum(inv[i][k] * B[k, j] for k in range(A.rows))
            if v.denominator != 1:
                return None
            row.append(int(v))
        rows.append(row)
    return IntMatrix.from_rows(rows, B.cols)


def isomorphic(R1: RootDatum, R2: RootDatum) -> IntMatrix | None:
    """An isomorphism g: X1 -> X2 of root data, or None when none exists.

    The returned g maps the set of (root, coroot) pairs of R1 onto that of
    R2, with coroots transported by the inverse transpose.
    """
    if _quick_invariants(R1) != _quick_invariants(R2):
        return None
    dec1 = decompose_as_central_product(R1)
    dec2 = decompose_as_central_product(R2)
    g = _iso_from_decompositions(dec1, dec2)
    if g is None:
        return None
    moved = R1.transform(g)
    if set(zip(moved.roots, moved.coroots)) != set(zip(R2.roots, R2.coroots)):  # pragma: no cover
        raise AssertionError("isomorphism failed verification")
    return g


def is_isomorphism(g: IntMatrix, R1: RootDatum, R2: RootDatum) -> bool:
    if g.rows != R2.rank or g.cols != R1.rank or not g.is_unimodular():
        return False
    moved = R1.transform(g)
    return set(zip(moved.roots, moved.coroots)) == set(zip(R2.roots, R2.coroots))


# ---------------------------------------------------------------------------
# Triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassTriple:
    """(semisimple datum, torus rank, K) with Φ ⊆ K ⊆ X."""

    semisimple: RootDatum
    torus_rank: int
    K: IntMatrix

    def validate(self) -> str | None:
        R = self.semisimple
        if not R.is_semisimple():
            return "first entry is not semisimple"
        if self.K.rows != R.rank:
            return "K does not live in X"
        if self.torus_rank < 0:
            return "negative torus rank"
        from .zlattice import is_sublattice, lattice_index

        if R.roots and not is_sublattice(R.root_matrix, self.K):
            return "K does not contain every root"
        if lattice_index(self.K, R.rank) == 0:
            return "K does not have finite index"
        s = len(finite_quotient(self.K, R.rank).invariant_factors)
        if s > self.torus_rank:
            return f"X/K needs {s} generators but the torus has rank {self.torus_rank}"
        return None

    @property
    def group(self):
        return finite_quotient(self.K, self.semisimple.rank)


def triple_of(R: RootDatum) -> ClassTriple:
    """(R_der, rank of the radical, image of Φ^⊤ in X/Φ̌^⊥)."""
    D, pd = derived_datum(R)
    sat = root_saturation(R)
    K = hermite_basis(pd @ sat) if sat.cols else IntMatrix.zeros(D.rank, 0)
    if D.rank == 0:
        K = IntMatrix.zeros(0, 0)
    return ClassTriple(D, R.rank - R.semisimple_rank, K)


def triples_equivalent(t1: ClassTriple, t2: ClassTriple) -> bool:
    if t1.torus_rank != t2.torus_rank:
        return False
    K2 = hermite_basis(t2.K)
    for delta in semisimple_isomorphisms(t1.semisimple, t2.semisimple):
        if hermite_basis(delta @ t1.K) == K2:
            return True
    return False


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def tame_semisimple(R: RootDatum, K: IntMatrix) -> list[IntMatrix]:
    """The image of Aut(R, K) in Aut(X/K), without repetition, in discovery order."""
    A = finite_quotient(K, R.rank)
    d = A.invariant_factors
    if not d:
        return [IntMatrix.zeros(0, 0)]
    Kh = hermite_basis(K)
    sect = section(A.projection, d)
    out: list[IntMatrix] = []
    for delta in automorphisms_modulo_weyl(R):
        if hermite_basis(delta @ Kh) != Kh:
            continue
        z = _reduce_rows(A.projection @ delta @ sect, d)
        if z not in out:
            out.append(z)
    return out


@dataclass(frozen=True)
class ClassEntry:
    """One double coset and the central product it labels."""

    representative: IntMatrix
    coset: tuple[IntMatrix, ...]
    datum: RootDatum


@dataclass(frozen=True)
class Classification:
    triple: ClassTriple
    moduli: tuple[int, ...]
    aut_size: int
    semisimple_image: tuple[IntMatrix, ...]
    tame_torus: tuple[IntMatrix, ...]
    classes: tuple[ClassEntry, ...]

    def __len__(self) -> int:
        return len(self.classes)


def double_cosets(
    elements: Sequence[IntMatrix], left: Sequence[IntMatrix], right: Sequence[IntMatrix], d: Sequence[int]
) -> list[list[IntMatrix]]:
    """Partition ``elements`` into left·ψ·right orbits, preserving order."""
    index = {e: i for i, e in enumerate(elements)}
    seen = [False] * len(elements)
    out = []
    for i, psi in enumerate(elements):
        if seen[i]:
            continue
        orbit = set()
        for a in left:
            ap = abelian.compose(a, psi, d)
            for b in right:
                orbit.add(abelian.compose(ap, b, d))
        members = sorted(orbit, key=lambda e: index[e])
        for e in members:
            seen[index[e]] = True
        out.append(members)
    return out


def _build(args: tuple) -> RootDatum:
    R, r, A, h, g = args
    return central_product(CentralProductSpec(R, torus(r), A, h, g)).datum


def classify_products(t: ClassTriple, *, budget: int | None = None, workers: int = 1) -> Classification:
    """One central product per double coset of Aut(A).

    Raises ClassificationError for triples whose torus cannot surject onto
    X/K and BudgetExceeded when Aut(A) is too large to enumerate.
    """
    problem = t.validate()
    if problem is not None:
        raise ClassificationError(problem)
    R, r = t.semisimple, t.torus_rank
    A = finite_quotient(t.K, R.rank)
    d = A.invariant_factors
    f = abelian.adapted_surjection(d, r)
    elements = abelian.enumerate_automorphisms(d, budget)
    left = tame_semisimple(R, t.K)
    verdicts = [abelian.lift_automorphism(P, d, r) for P in elements]
    if any(isinstance(v, abelian.Unknown) for v in verdicts):  # pragma: no cover
        raise ClassificationError("tameness undecided for some automorphism")
    right = [P for P, v in zip(elements, verdicts) if isinstance(v, abelian.Tame)]
    cosets = double_cosets(elements, left, right, d)
    h = A.projection
    jobs = [(R, r, A, h, _reduce_rows(c[0] @ f, d) if d else IntMatrix.zeros(0, r)) for c in cosets]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            data = list(pool.map(_build, jobs))
    else:
        data = [_build(j) for j in jobs]
    classes = tuple(ClassEntry(c[0], tuple(c), D) for c, D in zip(cosets, data))
    return Classification(t, d, len(elements), tuple(left), tuple(right), classes)


__all__ = [
    "ClassEntry",
    "ClassTriple",
    "Classification",
    "ClassificationError",
    "automorphisms_modulo_weyl",
    "classify_products",
    "double_cosets",
    "is_isomorphism",
    "isomorphic",
    "semisimple_isomorphisms",
    "tame_semisimple",
    "triple_of",
    "triples_equivalent",
]
