"""p-morphisms of root data and the Steinberg / Frobenius decision procedures.

Direction convention: a morphism of root data R' -> R is stored through its
map on character lattices ``f: X' -> X`` (a ``rank(R) x rank(R')`` matrix),
while ``tau`` runs backwards on roots, sending an index of a root of R to an
index of a root of R'.  The defining identities are

    f(τ(α)) = q(α)·α        and        fᵀ(α̌) = q(α)·τ(α)̌

for every root α of the target R.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import TYPE_CHECKING

from .rootdata import RootDatum, Violation
from .zlattice import IntMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .central import CentralDecomposition


class MorphismError(ValueError):
    """Raised for shape mismatches and invalid arguments."""


def is_p_power(q: int, p: int) -> bool:
    if q < 1:
        return False
    if p == 0:
        return q == 1
    while q % p == 0:
        q //= p
    return q == 1


def p_adic_exponent(q: int, p: int) -> int | None:
    """The e with q = p^e, or None."""
    if q < 1 or p < 2:
        return None
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return e if q == 1 else None


@dataclass(frozen=True)
class PMorphism:
    """A p-morphism R' -> R.

    Attributes:
        f: Map X' -> X on character lattices.
        p: A prime, or 0 for ordinary homomorphisms.
        q: p-power weights, aligned with the roots of the target R.
        tau: For each root index of R, the index of the matching root of R'.
    """

    f: IntMatrix
    p: int
    q: tuple[int, ...]
    tau: tuple[int, ...]

    @property
    def source_rank(self) -> int:
        return self.f.cols

    @property
    def target_rank(self) -> int:
        return self.f.rows

    def is_endomorphism(self) -> bool:
        return self.f.rows == self.f.cols


def identity(R: RootDatum, p: int = 0) -> PMorphism:
    n = len(R.roots)
    return PMorphism(IntMatrix.identity(R.rank), p, (1,) * n, tuple(range(n)))


def scalar(R: RootDatum, p: int, k: int = 1) -> PMorphism:
    """The map x -> p^k x with q ≡ p^k and τ the identity."""
    n = len(R.roots)
    return PMorphism(IntMatrix.identity(R.rank).scale(p**k), p, (p**k,) * n, tuple(range(n)))


def infer(f: IntMatrix, p: int, source: RootDatum, target: RootDatum) -> PMorphism:
    """Recover q and τ from f, raising MorphismError when none fit.

    For each target root α the source roots β with f(β) a positive p-power
    multiple of α are tried in index order; the first whose coroot condition
    also holds is taken.
    """
    if f.rows != target.rank or f.cols != source.rank:
        raise MorphismError(f"f has shape {f.rows}x{f.cols}, expected {target.rank}x{source.rank}")
    images = [f.apply(b) for b in source.roots]
    ft = f.T
    coimages = [ft.apply(c) for c in target.coroots]
    q_out, tau_out = [], []
    for i, a in enumerate(target.roots):
        found = None
        k_ref = next(k for k, x in enumerate(a) if x)
        for j, img in enumerate(images):
            if img[k_ref] % a[k_ref]:
                continue
            qv = img[k_ref] // a[k_ref]
            if qv < 1 or tuple(qv * x for x in a) != img:
                continue
            if not is_p_power(qv, p):
                continue
            if coimages[i] != tuple(qv * x for x in source.coroots[j]):
                continue
            found = (qv, j)
            break
        if found is None:
            raise MorphismError(f"no source root matches target root {i}")
        q_out.append(found[0])
        tau_out.append(found[1])
    return PMorphism(f, p, tuple(q_out), tuple(tau_out))


def validate_p_morphism(
    m: PMorphism, source: RootDatum, target: RootDatum, *, allow_partial: bool = False
) -> Violation | None:
    """Check the p-morphism identities; None means valid.

    ``allow_partial`` drops the requirement that τ be a bijection, which is
    needed for the projections out of a central product whose other factor
    has roots.
    """
    if m.f.rows != target.rank or m.f.cols != source.rank:
        return Violation("shape", f"f is {m.f.rows}x{m.f.cols}, expected {target.rank}x{source.rank}")
    if len(m.q) != len(target.roots) or len(m.tau) != len(target.roots):
        return Violation("shape", "q and tau must be aligned with the target roots")
    if m.p != 0 and m.p < 2:
        return Violation("prime", f"p = {m.p} is neither 0 nor a prime")
    if any(not 0 <= t < len(source.roots) for t in m.tau):
        return Violation("tau", "tau refers to a root index outside the source")
    if not allow_partial and (len(set(m.tau)) != len(m.tau) or len(m.tau) != len(source.roots)):
        return Violation("tau", "tau is not a bijection of roots")
    ft = m.f.T
    for i, (a, c) in enumerate(zip(target.roots, target.coroots)):
        qv = m.q[i]
        if not is_p_power(qv, m.p):
            return Violation("q", f"q({i}) = {qv} is not a power of p = {m.p}", (i,))
        j = m.tau[i]
        if m.f.apply(source.roots[j]) != tuple(qv * x for x in a):
            return Violation("roots", f"f(tau(alpha_{i})) != q(alpha_{i}) alpha_{i}", (i,))
        if ft.apply(c) != tuple(qv * x for x in source.coroots[j]):
            return Violation("coroots", f"f^T(coroot_{i}) != q(alpha_{i}) tau(alpha_{i})^vee", (i,))
    return None


def is_p_isogeny(m: PMorphism) -> bool:
    """Whether f and its transpose are both injective."""
    r = m.f.rank()
    return r == m.f.cols and r == m.f.rows


def compose(m2: PMorphism, m1: PMorphism) -> PMorphism:
    """The composite m2 ∘ m1 for m1: R'' -> R' and m2: R' -> R."""
    if m2.f.cols != m1.f.rows:
        raise MorphismError("morphisms are not composable")
    if m1.p and m2.p and m1.p != m2.p:
        raise MorphismError("morphisms for different primes")
    p = m1.p or m2.p
    tau = tuple(m1.tau[t] for t in m2.tau)
    q = tuple(q2 * m1.q[t] for q2, t in zip(m2.q, m2.tau))
    return PMorphism(m2.f @ m1.f, p, q, tau)


def dualize(m: PMorphism) -> PMorphism:
    """The dual morphism Ř -> Ř' given by the transpose of f.

    Requires τ to be a bijection; the dual τ is its inverse and the dual
    weights are q ∘ τ⁻¹.
    """
    n = len(m.tau)
    if sorted(m.tau) != list(range(n)):
        raise MorphismError("dualize needs tau to be a bijection")
    inv = [0] * n
    for i, t in enumerate(m.tau):
        inv[t] = i
    return PMorphism(m.f.T, m.p, tuple(m.q[inv[j]] for j in range(n)), tuple(inv))


def power(m: PMorphism, k: int) -> PMorphism:
    if k < 1:
        raise MorphismError("only positive powers are supported")
    out = m
    for _ in range(k - 1):
        out = compose(m, out)
    return out


# ---------------------------------------------------------------------------
# Steinberg and Frobenius
# ---------------------------------------------------------------------------


def _totient(k: int) -> int:
    out, n, d = k, k, 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            out -= out // d
        d += 1
    if n > 1:
        out -= out // n
    return out


def order_bound(rank: int) -> int:
    """lcm of all k with φ(k) ≤ rank.

    A rational matrix of finite order and size ``rank`` has an order dividing
    this number: each eigenvalue is a primitive k-th root of unity whose
    minimal polynomial has degree φ(k) ≤ rank.
    """
    ks = [k for k in range(1, 2 * rank * rank + 3) if _totient(k) <= max(rank, 1)]
    return reduce(lambda a, b: a * b // gcd(a, b), ks, 1)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _is_scalar(M: IntMatrix, c: int) -> bool:
    return all(M[i, j] == (c if i == j else 0) for i in range(M.rows) for j in range(M.cols))


@dataclass(frozen=True)
class SteinbergWitness:
    """f^n = p^m · I."""

    n: int
    m: int


@dataclass(frozen=True)
class NotSteinberg:
    """Certificate that no power of f is a positive p-power scalar."""

    reason: str
    det: int


@dataclass(frozen=True)
class FrobeniusWitness:
    """f = p^a · φ0 with φ0 unimodular of finite order ``order``."""

    a: int
    finite_order_part: IntMatrix
    order: int


@dataclass(frozen=True)
class NotFrobenius:
    reason: str


def _finite_order(g: IntMatrix, scale: int, bound: int) -> int | None:
    """Least k | bound with g^k = scale^k · I, or None."""
    if not _is_scalar(g**bound, scale**bound):
        return None
    for k in _divisors(bound):
        if _is_scalar(g**k, scale**k):
            return k
    return None  # pragma: no cover - bound itself succeeded


def _matrix_of(m: PMorphism | IntMatrix) -> tuple[IntMatrix, int | None]:
    if isinstance(m, PMorphism):
        return m.f, m.p
    return m, None


def is_p_steinberg(
    m: PMorphism | IntMatrix, p: int | None = None, *, max_order: int | None = None
) -> SteinbergWitness | NotSteinberg:
    """Decide whether f^n = p^m·I for some n ≥ 1, m ≥ 1; return the least n.

    With |det f| = p^e, the rational matrix g = f^rank / p^e has finite
    order k whenever a witness exists, and k divides :func:`order_bound`.
    The least n then divides rank·k, so finitely many candidates suffice.
    ``max_order`` replaces the order bound.
    """
    f, mp = _matrix_of(m)
    p = p if p is not None else mp
    if not p or p < 2:
        raise MorphismError("p-Steinberg test needs a prime p")
    if f.rows != f.cols:
        raise MorphismError("endomorphism expected")
    n = f.rows
    if n == 0:
        return SteinbergWitness(1, 1)
    det = f.det()
    e = p_adic_exponent(abs(det), p)
    if e is None:
        return NotSteinberg(f"|det f| = {abs(det)} is not a power of {p}", det)
    if e == 0:
        return NotSteinberg("f is unimodular, so every power has unit determinant", det)
    bound = max_order or order_bound(n)
    g = f**n
    k = _finite_order(g, p**e, bound)
    if k is None:
        return NotSteinberg(
            f"f^{n} / {p}^{e} has no finite order dividing {bound}; no power of f is scalar", det
        )
    for cand in _divisors(n * k):
        if (e * cand) % n:
            continue
        mm = e * cand // n
        if _is_scalar(f**cand, p**mm):
            return SteinbergWitness(cand, mm)
    # f^{n k} = p^{e k} I always holds here, so this is unreachable.
    raise AssertionError("Steinberg search failed after a finite-order certificate")  # pragma: no cover


def is_p_frobenius(
    m: PMorphism | IntMatrix, p: int | None = None, *, max_order: int | None = None
) -> FrobeniusWitness | NotFrobenius:
    """Decide f = p^a·φ0 with a ≥ 1 and φ0 an integral matrix of finite order."""
    f, mp = _matrix_of(m)
    p = p if p is not None else mp
    if not p or p < 2:
        raise MorphismError("p-Frobenius test needs a prime p")
    if f.rows != f.cols:
        raise MorphismError("endomorphism expected")
    n = f.rows
    if n == 0:
        return FrobeniusWitness(1, f, 1)
    det = f.det()
    e = p_adic_exponent(abs(det), p)
    if e is None or e == 0:
        return NotFrobenius(f"|det f| = {abs(det)} is not a positive power of {p}")
    if e % n:
        return NotFrobenius(f"|det f| = {p}^{e} and {e} is not divisible by the rank {n}")
    a = e // n
    pa = p**a
    if any(x % pa for r in f.data for x in r):
        return NotFrobenius(f"f is not divisible by {p}^{a}")
    phi0 = IntMatrix.from_rows([[x // pa for x in r] for r in f.data], n)
    bound = max_order or order_bound(n)
    k = _finite_order(phi0, 1, bound)
    if k is None:
        return NotFrobenius(f"f / {p}^{a} does not have finite order dividing {bound}")
    return FrobeniusWitness(a, phi0, k)


def verify_steinberg_witness(f: IntMatrix, p: int, w: SteinbergWitness) -> bool:
    return w.m >= 1 and _is_scalar(f**w.n, p**w.m)


def suzuki_map(r: int) -> IntMatrix:
    """ω1 -> 2^r ω2, ω2 -> 2^(r+1) ω1 on the weight lattice of C2."""
    return IntMatrix.from_rows([[0, 2 ** (r + 1)], [2**r, 0]])


def decompose_over_central_product(m: PMorphism, product) -> CentralDecomposition:
    """Split an endomorphism of a semisimple-by-torus central product.

    See :func:`rdk.central.decompose_endomorphism`.
    """
    from .central import decompose_endomorphism

    return decompose_endomorphism(m, product)


def kernel_preserved(zeta1: IntMatrix, K1: IntMatrix, K2: IntMatrix) -> bool:
    """Whether ζ1 maps the lattice K1 into K2."""
    from .zlattice import is_sublattice

    if K1.cols == 0:
        return True
    return is_sublattice(zeta1 @ K1, K2)


__all__ = [
    "FrobeniusWitness",
    "MorphismError",
    "NotFrobenius",
    "NotSteinberg",
    "PMorphism",
    "SteinbergWitness",
    "compose",
    "decompose_over_central_product",
    "dualize",
    "identity",
    "infer",
    "is_p_frobenius",
    "is_p_isogeny",
    "is_p_power",
    "is_p_steinberg",
    "order_bound",
    "power",
    "scalar",
    "suzuki_map",
    "validate_p_morphism",
]
