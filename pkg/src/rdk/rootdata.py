"""Root data and their canonical constructions.

A root datum of rank n lives in X = Z^n with the dual lattice X̌ = Z^n paired
by the dot product.  Roots and coroots are stored as index-aligned tuples, so
``coroots[i]`` is the coroot of ``roots[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .zlattice import (
    IntMatrix,
    LatticeError,
    Vector,
    annihilator,
    coordinates,
    hermite_basis,
    is_sublattice,
    quotient,
    saturation,
)


class RootDatumError(ValueError):
    """Raised when a construction receives an invalid root datum or lattice."""


def pair(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


@dataclass(frozen=True)
class RootDatum:
    """The quadruple (X, Φ, X̌, Φ̌) in standard coordinates.

    Attributes:
        rank: Rank n of the character lattice X = Z^n.
        roots: Root vectors in X.
        coroots: Coroot vectors in X̌; ``coroots[i]`` belongs to ``roots[i]``.
        name: Optional label, ignored by equality.
    """

    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    name: str | None = field(default=None, compare=False)

    @classmethod
    def make(
        cls,
        rank: int,
        roots: Sequence[Sequence[int]],
        coroots: Sequence[Sequence[int]],
        name: str | None = None,
    ) -> "RootDatum":
        return cls(
            rank,
            tuple(tuple(int(x) for x in r) for r in roots),
            tuple(tuple(int(x) for x in c) for c in coroots),
            name,
        )

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def root_matrix(self) -> IntMatrix:
        """The roots as the columns of an n × |Φ| matrix."""
        return IntMatrix.from_columns(self.roots, self.rank)

    @property
    def coroot_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.coroots, self.rank)

    def root_index(self, v: Sequence[int]) -> int:
        return self._root_lookup()[tuple(v)]

    def coroot_index(self, v: Sequence[int]) -> int:
        return self._coroot_lookup()[tuple(v)]

    def _root_lookup(self) -> dict[Vector, int]:
        cached = self.__dict__.get("_rl")
        if cached is None:
            cached = {r: i for i, r in enumerate(self.roots)}
            object.__setattr__(self, "_rl", cached)
        return cached

    def _coroot_lookup(self) -> dict[Vector, int]:
        cached = self.__dict__.get("_cl")
        if cached is None:
            cached = {r: i for i, r in enumerate(self.coroots)}
            object.__setattr__(self, "_cl", cached)
        return cached

    @property
    def semisimple_rank(self) -> int:
        return self.root_matrix.rank() if self.roots else 0

    def is_semisimple(self) -> bool:
        return self.semisimple_rank == self.rank

    def is_torus(self) -> bool:
        return not self.roots

    def with_name(self, name: str | None) -> "RootDatum":
        return RootDatum(self.rank, self.roots, self.coroots, name)

    def transform(self, g: IntMatrix) -> "RootDatum":
        """Image under a unimodular change of coordinates g: X -> X.

        Roots map by g, coroots by the inverse transpose.
        """
        if not g.is_unimodular() or g.rows != self.rank:
            raise RootDatumError("change of coordinates must be unimodular of the datum's rank")
        ginv_t = g.inverse().T
        return RootDatum(
            self.rank,
            tuple(g.apply(r) for r in self.roots),
            tuple(ginv_t.apply(c) for c in self.coroots),
            self.name,
        )


@dataclass(frozen=True)
class Violation:
    """First failed axiom of a root datum, with the offending indices."""

    axiom: str
    message: str
    witnesses: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.axiom}: {self.message}"


def validate(R: RootDatum) -> Violation | None:
    """Check the root datum axioms; None means the datum is valid."""
    n = R.rank
    if n < 0:
        return Violation("shape", "negative rank")
    if len(R.roots) != len(R.coroots):
        return Violation("shape", f"{len(R.roots)} roots but {len(R.coroots)} coroots")
    for i, (a, c) in enumerate(zip(R.roots, R.coroots)):
        if len(a) != n or len(c) != n:
            return Violation("shape", f"root or coroot {i} does not have length {n}", (i,))
    for i, (a, c) in enumerate(zip(R.roots, R.coroots)):
        v = pair(a, c)
        if v != 2:
            return Violation("pairing", f"<alpha_{i}, coroot_{i}> = {v} != 2", (i,))
    roots = R._root_lookup()
    if len(roots) != len(R.roots):
        dup = next(i for i, r in enumerate(R.roots) if roots[r] != i)
        return Violation("distinct", f"root {dup} is repeated", (dup,))
    coroots = R._coroot_lookup()
    if len(coroots) != len(R.coroots):
        dup = next(i for i, r in enumerate(R.coroots) if coroots[r] != i)
        return Violation("distinct", f"coroot {dup} is repeated", (dup,))
    for i, a in enumerate(R.roots):
        neg = tuple(-x for x in a)
        j = roots.get(neg)
        if j is None:
            return Violation("symmetric", f"-alpha_{i} is not a root", (i,))
        if R.coroots[j] != tuple(-x for x in R.coroots[i]):
            return Violation("symmetric", f"coroot of -alpha_{i} is not -coroot_{i}", (i, j))
        for k in (2, -2):
            if tuple(k * x for x in a) in roots:
                return Violation("reduced", f"{k}*alpha_{i} is a root", (i,))
    for i, (a, ca) in enumerate(zip(R.roots, R.coroots)):
        for j, (b, cb) in enumerate(zip(R.roots, R.coroots)):
            k = pair(b, ca)
            image = tuple(x - k * y for x, y in zip(b, a))
            target = roots.get(image)
            if target is None:
                return Violation("reflection", f"s_{i}(alpha_{j}) is not a root", (i, j))
            m = pair(a, cb)
            cimage = tuple(x - m * y for x, y in zip(cb, ca))
            if R.coroots[target] != cimage:
                return Violation(
                    "reflection", f"s_{i} does not carry coroot_{j} to the coroot of s_{i}(alpha_{j})", (i, j)
                )
    return None


def check(R: RootDatum) -> RootDatum:
    """Return R unchanged, raising RootDatumError when it is invalid."""
    v = validate(R)
    if v is not None:
        raise RootDatumError(str(v))
    return R


def torus(n: int) -> RootDatum:
    return RootDatum(n, (), (), f"T{n}")


def torus_part(R: RootDatum) -> RootDatum:
    return RootDatum(R.rank, (), (), None)


def dual(R: RootDatum) -> RootDatum:
    return RootDatum(R.rank, R.coroots, R.roots, None if R.name is None else f"dual({R.name})")


def direct_sum(R1: RootDatum, R2: RootDatum) -> RootDatum:
    """The datum on X1 ⊕ X2 with Φ1 and Φ2 placed in their own blocks."""
    z1, z2 = (0,) * R1.rank, (0,) * R2.rank
    roots = tuple(r + z2 for r in R1.roots) + tuple(z1 + r for r in R2.roots)
    coroots = tuple(c + z2 for c in R1.coroots) + tuple(z1 + c for c in R2.coroots)
    name = None
    if R1.name and R2.name:
        name = f"{R1.name}+{R2.name}"
    return RootDatum(R1.rank + R2.rank, roots, coroots, name)


def induced_datum(R: RootDatum, A: IntMatrix) -> tuple[RootDatum, IntMatrix]:
    """The datum induced on a sublattice A with ZΦ ⊆ A ⊆ X.

    Returns the datum in coordinates of the Hermite basis of A, together with
    that basis (the inclusion A -> X).  Coroots restrict to A by transposition.
    """
    if A.rows != R.rank:
        raise RootDatumError(f"sublattice lives in Z^{A.rows}, datum has rank {R.rank}")
    basis = hermite_basis(A)
    roots = []
    for i, a in enumerate(R.roots):
        c = coordinates(basis, a)
        if c is None:
            raise RootDatumError(f"root {i} does not lie in the sublattice")
        roots.append(c)
    bt = basis.T
    coroots = [bt.apply(c) for c in R.coroots]
    return RootDatum.make(basis.cols, roots, coroots), basis


def coinduced_datum(R: RootDatum, B: IntMatrix) -> tuple[RootDatum, IntMatrix]:
    """The datum co-induced by B with ZΦ̌ ⊆ B ⊆ X̌.

    Computed as the dual of the datum induced by B on the dual datum.  The
    returned matrix is the projection X -> X/B^⊥ (transpose of the basis of B).
    """
    D, basis = induced_datum(dual(R), B)
    return dual(D).with_name(None), basis.T


def root_lattice(R: RootDatum) -> IntMatrix:
    if not R.roots:
        return IntMatrix.zeros(R.rank, 0)
    return hermite_basis(R.root_matrix)


def coroot_lattice(R: RootDatum) -> IntMatrix:
    if not R.coroots:
        return IntMatrix.zeros(R.rank, 0)
    return hermite_basis(R.coroot_matrix)


def root_saturation(R: RootDatum) -> IntMatrix:
    """Φ^⊤, the saturation of ZΦ in X."""
    return saturation(R.root_matrix, R.rank) if R.roots else IntMatrix.zeros(R.rank, 0)


def coroot_saturation(R: RootDatum) -> IntMatrix:
    return saturation(R.coroot_matrix, R.rank) if R.coroots else IntMatrix.zeros(R.rank, 0)


def root_annihilator(R: RootDatum) -> IntMatrix:
    """Φ^⊥ inside X̌."""
    return annihilator(R.root_matrix, R.rank) if R.roots else IntMatrix.identity(R.rank)


def coroot_annihilator(R: RootDatum) -> IntMatrix:
    """Φ̌^⊥ inside X."""
    return annihilator(R.coroot_matrix, R.rank) if R.coroots else IntMatrix.identity(R.rank)


def radical(R: RootDatum) -> tuple[RootDatum, IntMatrix]:
    """The torus (X/Φ^⊤, ∅, Φ^⊥, ∅) and the projection X -> X/Φ^⊤.

    The dual lattice of X/Φ^⊤ is the annihilator of Φ in X̌; with C a basis of
    it, the projection is x -> C^T x.
    """
    C = root_annihilator(R)
    return torus(C.cols), C.T


def derived_datum(R: RootDatum) -> tuple[RootDatum, IntMatrix]:
    """The semisimple datum (X/Φ̌^⊥, Φ, Φ̌^⊤, Φ̌) and the projection onto it."""
    D, proj = coinduced_datum(R, coroot_saturation(R))
    return D, proj


# ---------------------------------------------------------------------------
# Bases, Cartan matrices, reflections
# ---------------------------------------------------------------------------


def generic_functional(R: RootDatum) -> Vector:
    """A vector of X̌ ⊗ Q pairing nonzero with every root."""
    bound = max((abs(x) for r in R.roots for x in r), default=0)
    M = 2 * bound + 1
    return tuple(M**i for i in range(R.rank))


def positive_roots(R: RootDatum, functional: Sequence[int] | None = None) -> list[int]:
    v = functional or generic_functional(R)
    return [i for i, a in enumerate(R.roots) if pair(a, v) > 0]


def simple_roots(R: RootDatum, functional: Sequence[int] | None = None) -> list[int]:
    """Indices of the base determined by a generic functional.

    The simple roots are the positive roots that are not a sum of two
    positive roots.
    """
    pos = positive_roots(R, functional)
    posset = {R.roots[i] for i in pos}
    simple = []
    for i in pos:
        a = R.roots[i]
        decomposable = any(
            tuple(x - y for x, y in zip(a, R.roots[j])) in posset for j in pos if j != i
        )
        if not decomposable:
            simple.append(i)
    v = functional or generic_functional(R)
    simple.sort(key=lambda i: (pair(R.roots[i], v), R.roots[i]))
    return simple


@dataclass(frozen=True)
class BasedRootDatum:
    datum: RootDatum
    simple_indices: tuple[int, ...]

    def is_base(self) -> bool:
        basis = IntMatrix.from_columns([self.datum.roots[i] for i in self.simple_indices], self.datum.rank)
        for a in self.datum.roots:
            c = _rational_coords(basis, a)
            if c is None:
                return False
            if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
                return False
            if any(x.denominator != 1 for x in c):
                return False
        return True


def _rational_coords(basis: IntMatrix, v: Sequence[int]):
    from fractions import Fraction

    n, k = basis.rows, basis.cols
    a = [[Fraction(basis[i, j]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    r = 0
    where = []
    for c in range(k):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        where.append(r)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    return [a[where[c]][k] for c in range(k)]


def based(R: RootDatum) -> BasedRootDatum:
    return BasedRootDatum(R, tuple(simple_roots(R)))


def cartan_matrix(R: RootDatum, simple: Sequence[int] | None = None) -> list[list[int]]:
    """Entries <α_i, α̌_j> over a base."""
    idx = list(simple) if simple is not None else simple_roots(R)
    return [[pair(R.roots[i], R.coroots[j]) for j in idx] for i in idx]


def reflection(R: RootDatum, i: int) -> IntMatrix:
    """The matrix of s_i(x) = x - <x, α̌_i> α_i on X."""
    a, c = R.roots[i], R.coroots[i]
    n = R.rank
    return IntMatrix.from_rows([[int(r == s) - a[r] * c[s] for s in range(n)] for r in range(n)], n)


# ---------------------------------------------------------------------------
# Centre invariants
# ---------------------------------------------------------------------------


def _p_part(d: int, p: int) -> int:
    out = 1
    while p > 1 and d % p == 0:
        d //= p
        out *= p
    return out


@dataclass(frozen=True)
class CentreInvariants:
    """Torsion of X/ZΦ split into p and p' parts, plus the free rank."""

    torsion: tuple[int, ...]
    p_part: tuple[int, ...]
    p_prime_part: tuple[int, ...]
    free_rank: int

    @property
    def connected_centre(self) -> bool:
        return not self.p_prime_part

    @property
    def smooth_centre(self) -> bool:
        return not self.torsion


def _normalize(factors: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a product of cyclic groups, descending."""
    gens = IntMatrix.diagonal([f for f in factors]) if factors else None
    if gens is None:
        return ()
    return quotient(gens, len(factors)).torsion


def centre_invariants(R: RootDatum, p: int = 0) -> CentreInvariants:
    """Torsion invariants of X/ZΦ, optionally split at a prime p (0 = no split)."""
    q = quotient(R.root_matrix if R.roots else IntMatrix.zeros(R.rank, 0), R.rank)
    tor = q.torsion
    if p > 1:
        pp = _normalize([_p_part(d, p) for d in tor if _p_part(d, p) > 1])
        pq = _normalize([d // _p_part(d, p) for d in tor if d // _p_part(d, p) > 1])
    else:
        pp, pq = (), tor
    return CentreInvariants(tor, pp, pq, q.free_rank)


def lattice_contains_roots(R: RootDatum, A: IntMatrix) -> bool:
    return not R.roots or is_sublattice(R.root_matrix, A)


__all__ = [
    "BasedRootDatum",
    "CentreInvariants",
    "LatticeError",
    "RootDatum",
    "RootDatumError",
    "Violation",
    "based",
    "cartan_matrix",
    "centre_invariants",
    "check",
    "coinduced_datum",
    "coroot_annihilator",
    "coroot_lattice",
    "coroot_saturation",
    "derived_datum",
    "direct_sum",
    "dual",
    "generic_functional",
    "induced_datum",
    "pair",
    "positive_roots",
    "radical",
    "reflection",
    "root_annihilator",
    "root_lattice",
    "root_saturation",
    "simple_roots",
    "torus",
    "torus_part",
    "validate",
]
