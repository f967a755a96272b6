"""Automorphisms of finite abelian groups and their lifts to lattices.

A group A = Z/d1 ⊕ ... ⊕ Z/ds (d1 divisible by d2, and so on) is given by its
moduli.  An endomorphism ψ of A is an s × s integer matrix P acting on
coordinate vectors, with row i read modulo d_i.  Well-definedness forces
P[i][j] to be a multiple of d_i / gcd(d_i, d_j).

A lift of ψ to a lattice Z^r along the surjection f = [I_s | 0] is a matrix
M ∈ GL_r(Z) with f∘M = ψ∘f; in other words row i of M agrees with
(P[i] | 0) modulo d_i.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

from .zlattice import (
    IntMatrix,
    adapted_basis,
    block_diag,
    complete_to_unimodular,
    map_is_surjective,
    map_kernel,
    reduce_mod,
    section,
)

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """Raised instead of silently truncating an enumeration."""


def default_budget() -> int:
    raw = os.environ.get("RDK_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _check_moduli(d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if any(x <= 1 for x in d) or any(d[i] % d[i + 1] for i in range(len(d) - 1)):
        raise ValueError(f"{d} is not a descending chain of invariant factors")
    return d


def normalize(P: IntMatrix, d: Sequence[int]) -> IntMatrix:
    """Reduce row i modulo d_i."""
    return IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) for r, m in zip(P.data, d)], len(d))


def is_endomorphism(P: IntMatrix, d: Sequence[int]) -> bool:
    s = len(d)
    if P.rows != s or P.cols != s:
        return False
    return all((P[i, j] * d[j]) % d[i] == 0 for i in range(s) for j in range(s))


def is_automorphism(P: IntMatrix, d: Sequence[int]) -> bool:
    """A well-defined endomorphism of a finite group is bijective iff onto."""
    return is_endomorphism(P, d) and map_is_surjective(P, d)


def compose(P2: IntMatrix, P1: IntMatrix, d: Sequence[int]) -> IntMatrix:
    """ψ2 ∘ ψ1."""
    return normalize(P2 @ P1, d) if d else P1


def inverse(P: IntMatrix, d: Sequence[int]) -> IntMatrix:
    if not d:
        return P
    return normalize(section(P, d), d)


def identity(d: Sequence[int]) -> IntMatrix:
    return IntMatrix.identity(len(d))


def multiplication(k: int, d: Sequence[int]) -> IntMatrix:
    """ψ_k: a -> k·a."""
    return normalize(IntMatrix.identity(len(d)).scale(k), d)


def aut_size_bound(d: Sequence[int]) -> int:
    out = 1
    for a in d:
        for b in d:
            out *= gcd(a, b)
    return out


def enumerate_automorphisms(d: Sequence[int], budget: int | None = None) -> list[IntMatrix]:
    """Every automorphism of A, identity first, then in lexicographic order.

    Raises BudgetExceeded when the candidate count exceeds ``budget``.
    """
    d = _check_moduli(d)
    budget = default_budget() if budget is None else budget
    s = len(d)
    if s == 0:
        return [IntMatrix.zeros(0, 0)]
    size = aut_size_bound(d)
    if size > budget:
        raise BudgetExceeded(f"Aut(A) has {size} candidate matrices, budget is {budget}")
    ranges = []
    for i in range(s):
        for j in range(s):
            step = d[i] // gcd(d[i], d[j])
            ranges.append(range(0, d[i], step))
    out = []
    ident = identity(d)
    for entries in itertools.product(*ranges):
        P = IntMatrix.from_rows([entries[i * s:(i + 1) * s] for i in range(s)], s)
        if P == ident:
            continue
        if map_is_surjective(P, d):
            out.append(P)
    return [ident] + out


# ---------------------------------------------------------------------------
# Lifting to GL_r(Z)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tame:
    """ψ lifts; ``lift`` satisfies f∘lift = ψ∘f and det(lift) = ±1."""

    lift: IntMatrix


@dataclass(frozen=True)
class NotTame:
    """No lift exists.

    Every lift M has rows congruent to those of P modulo d_s, so
    det(M) ≡ det(P) (mod d_s); ``det_mod`` is not ±1 modulo d_s.
    """

    det_mod: int
    modulus: int

    @property
    def reason(self) -> str:
        return f"det(P) = {self.det_mod} mod {self.modulus} is not ±1, so no lift has determinant ±1"


@dataclass(frozen=True)
class Unknown:
    """Kept for interface completeness; the decision procedure never returns it."""

    bound: int


Verdict = Tame | NotTame | Unknown


def adapted_surjection(d: Sequence[int], r: int) -> IntMatrix:
    """f = [I_s | 0]: Z^r -> A."""
    s = len(d)
    if r < s:
        raise ValueError(f"no surjection from Z^{r} onto a group with {s} invariant factors")
    return IntMatrix.identity(s).hstack(IntMatrix.zeros(s, r - s)) if s else IntMatrix.zeros(0, r)


def verify_lift(M: IntMatrix, P: IntMatrix, d: Sequence[int], f: IntMatrix | None = None) -> bool:
    r = M.rows
    f = adapted_surjection(d, r) if f is None else f
    if not M.is_unimodular():
        return False
    if not d:
        return True
    lhs = _reduce(f @ M, d)
    rhs = _reduce(P @ f, d)
    return lhs == rhs


def _reduce(M: IntMatrix, d: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) for r, m in zip(M.data, d)], M.cols)


def _bezout(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _bezout(b, a % b)
    return g, y, x - (a // b) * y


def bezout_lift(k: int, n: int, r: int = 2) -> IntMatrix:
    """The lift [[k, -n], [b, a]] of ψ_k on Z/n, where k·a + n·b = 1."""
    g, a, b = _bezout(k, n)
    if g != 1:
        raise ValueError(f"{k} is not a unit modulo {n}")
    M = IntMatrix.from_rows([[k, -n], [b, a]])
    return block_diag(M, IntMatrix.identity(r - 2)) if r > 2 else M


def _make_primitive(b: list[int], d: int) -> list[int]:
    """Add a multiple of d to b so that gcd(b) = 1, given gcd(b, d) = 1 and len(b) ≥ 2."""
    b = b[:]
    if all(x == 0 for x in b[1:]):
        b[1] += d
        return b
    g = 0
    for x in b[1:]:
        g = gcd(g, x)
    for t in range(g + 1):
        if gcd(b[0] + d * t, g) == 1:
            b[0] += d * t
            return b
    raise AssertionError("no primitive adjustment found although gcd(b, d) = 1")  # pragma: no cover


def lift_automorphism(P: IntMatrix, d: Sequence[int], r: int) -> Verdict:
    """Decide whether ψ lifts to GL_r(Z) along [I_s | 0], constructing the lift.

    Rows are chosen one at a time.  With U unimodular whose first i rows are
    the rows already chosen, the candidates for row i are (P_i | 0) + d_i·t;
    in U-coordinates their tails are b + d_i·u for arbitrary u, and the rows
    extend to a basis exactly when that tail is primitive.  Because ψ is an
    automorphism, gcd(b, d_i) = 1, so a primitive tail exists as long as at
    least two coordinates remain.  Only the last row when r = s is
    constrained, and there the tail is a single integer congruent to
    ±det(P) modulo d_s.
    """
    d = tuple(d)
    s = len(d)
    if r < s:
        raise ValueError("torus rank below the number of invariant factors")
    if s == 0:
        return Tame(IntMatrix.identity(r))
    if not is_automorphism(P, d):
        raise ValueError("matrix is not an automorphism of A")
    if s == 1 and r >= 2:
        M = bezout_lift(P[0, 0] % d[0], d[0], r)
        return Tame(M)
    if r == s:
        det = P.det() % d[-1]
        if det not in (1 % d[-1], (-1) % d[-1]):
            return NotTame(det, d[-1])
    rows: list[list[int]] = []
    U = IntMatrix.identity(r)
    for i in range(s):
        target = IntMatrix.from_rows([list(P.row(i)) + [0] * (r - s)], r)
        c = list((target @ U.inverse()).row(0))
        head, tail = c[:i], c[i:]
        if r - i >= 2:
            tail = _make_primitive(tail, d[i])
        else:
            # one coordinate left: it must become ±1 inside its class mod d_i
            x = tail[0] % d[i]
            if x == 1 % d[i]:
                tail = [1]
            elif x == (-1) % d[i]:
                tail = [-1]
            else:  # pragma: no cover - excluded by the determinant test
                return NotTame(x, d[i])
        v = IntMatrix.from_rows([head + tail], r) @ U
        rows.append(list(v.row(0)))
        U = complete_to_unimodular(IntMatrix.from_rows(rows, r))
    M = U
    if not verify_lift(M, P, d):  # pragma: no cover - guaranteed by construction
        raise AssertionError("constructed lift failed verification")
    return Tame(M)


def is_tame(P: IntMatrix, d: Sequence[int], r: int) -> bool:
    return isinstance(lift_automorphism(P, d, r), Tame)


@dataclass(frozen=True)
class TameTorusResult:
    """Verdict for every automorphism of A, in enumeration order."""

    moduli: tuple[int, ...]
    torus_rank: int
    elements: tuple[IntMatrix, ...]
    verdicts: tuple[Verdict, ...]

    @property
    def tame(self) -> list[IntMatrix]:
        return [P for P, v in zip(self.elements, self.verdicts) if isinstance(v, Tame)]

    @property
    def is_full(self) -> bool:
        return all(isinstance(v, Tame) for v in self.verdicts)


def tame_torus(d: Sequence[int], r: int, budget: int | None = None) -> TameTorusResult:
    """Aut_(T,f)(A) for a torus of rank r and f = [I_s | 0]."""
    d = _check_moduli(d)
    elems = enumerate_automorphisms(d, budget)
    verdicts = tuple(lift_automorphism(P, d, r) for P in elems)
    return TameTorusResult(d, r, tuple(elems), verdicts)


# ---------------------------------------------------------------------------
# General surjections and finite-order lifts
# ---------------------------------------------------------------------------


def normal_form_of_surjection(f: IntMatrix, d: Sequence[int]) -> tuple[IntMatrix, IntMatrix]:
    """Write a surjection f: Z^r -> A as f·X = [α | 0] with X unimodular.

    Returns (X, α) where α ∈ Aut(A).  X is an adapted basis of Z^r for the
    kernel of f.
    """
    d = tuple(d)
    r = f.cols
    if not d:
        return IntMatrix.identity(r), IntMatrix.zeros(0, 0)
    K = map_kernel(f, d)
    ab = adapted_basis(K, r)
    X = ab.basis
    s = len(d)
    if tuple(ab.divisors[:s]) != d or any(x != 1 for x in ab.divisors[s:]):
        raise ValueError("f is not surjective onto the given group")
    alpha = _reduce(f @ X.submatrix(range(r), range(s)), d)
    return X, alpha


def lift_along(
    f_src: IntMatrix, f_tgt: IntMatrix, zeta: IntMatrix, d: Sequence[int]
) -> IntMatrix | None:
    """A unimodular λ with f_tgt∘λ = ζ∘f_src, or None when none exists."""
    d = tuple(d)
    if f_src.cols != f_tgt.cols:
        return None
    r = f_src.cols
    if not d:
        return IntMatrix.identity(r)
    X1, a1 = normal_form_of_surjection(f_src, d)
    X2, a2 = normal_form_of_surjection(f_tgt, d)
    psi = compose(inverse(a2, d), compose(zeta, a1, d), d)
    v = lift_automorphism(psi, d, r)
    if not isinstance(v, Tame):
        return None
    lam = X2 @ v.lift @ X1.inverse()
    return lam


def finite_order_lift(
    P: IntMatrix, d: Sequence[int], r: int, *, entry_bound: int = 1, max_order: int = 12
) -> IntMatrix | None:
    """Search GL_r(Z) with entries in [-entry_bound, entry_bound] for a finite-order lift.

    A lift has order divisible by the order of ψ, so the search stops at the
    first lift of exactly that order and otherwise returns the lift of least
    order it met.
    """
    d = tuple(d)
    rng = range(-entry_bound, entry_bound + 1)
    ident = IntMatrix.identity(r)
    target = _order(P, d)
    best: tuple[int, IntMatrix] | None = None
    for entries in _candidates(r, rng):
        M = IntMatrix.from_rows([entries[i * r:(i + 1) * r] for i in range(r)], r)
        if not verify_lift(M, P, d):
            continue
        power = M
        for k in range(1, max_order + 1):
            if power == ident:
                if k == target:
                    return M
                if best is None or k < best[0]:
                    best = (k, M)
                break
            power = power @ M
    return None if best is None else best[1]


def _order(P: IntMatrix, d: tuple[int, ...]) -> int:
    ident = identity(d)
    Q, k = normalize(P, d), 1
    while Q != ident:
        Q, k = compose(P, Q, d), k + 1
    return k


def _candidates(r: int, rng: range) -> Iterator[tuple[int, ...]]:
    # favour sparse matrices: order by number of nonzero entries, then small
    # positive values, so the identity is tried before -1
    cells = r * r
    vals = sorted((v for v in rng if v != 0), key=lambda v: (abs(v), v < 0))
    for nz in range(cells + 1):
        for pos in itertools.combinations(range(cells), nz):
            for choice in itertools.product(vals, repeat=nz):
                entries = [0] * cells
                for p_, c in zip(pos, choice):
                    entries[p_] = c
                yield tuple(entries)


__all__ = [
    "BudgetExceeded",
    "NotTame",
    "Tame",
    "TameTorusResult",
    "Unknown",
    "adapted_surjection",
    "bezout_lift",
    "compose",
    "default_budget",
    "enumerate_automorphisms",
    "finite_order_lift",
    "identity",
    "inverse",
    "is_automorphism",
    "is_tame",
    "lift_along",
    "lift_automorphism",
    "multiplication",
    "normal_form_of_surjection",
    "normalize",
    "tame_torus",
    "verify_lift",
]
