"""Central products of root data and the structure results built on them.

Given surjections h1: X1 -> A and h2: X2 -> A killing the roots, the central
product is the datum induced by R1 ⊕ R2 on the fiber lattice

    B = {(x1, x2) : h1(x1) = h2(x2)}.

The datum is expressed in the Hermite basis of B; ``embed`` holds that basis
as columns inside X1 ⊕ X2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .morphism import PMorphism, validate_p_morphism
from .rootdata import (
    RootDatum,
    check,
    coroot_annihilator,
    derived_datum,
    direct_sum,
    induced_datum,
    radical,
    root_saturation,
)
from .zlattice import (
    FinAbPresentation,
    IntMatrix,
    Quotient,
    fiber_product,
    hermite_basis,
    is_sublattice,
    map_is_surjective,
    map_kernel,
    quotient,
    rational_inverse,
    reduce_mod,
    right_inverse,
    section,
)

Group = Union[FinAbPresentation, Quotient]


class CentralProductError(ValueError):
    """Raised for central product data violating the surjectivity or root conditions."""


def trivial_group(ambient_rank: int) -> FinAbPresentation:
    return FinAbPresentation((), ambient_rank, IntMatrix.zeros(0, ambient_rank))


def group_from_factors(factors: tuple[int, ...] | list[int], ambient_rank: int | None = None) -> FinAbPresentation:
    """The abstract group Z/d1 ⊕ ... ⊕ Z/ds with the identity presentation."""
    s = len(factors)
    n = s if ambient_rank is None else ambient_rank
    proj = IntMatrix.identity(s).hstack(IntMatrix.zeros(s, n - s)) if s else IntMatrix.zeros(0, n)
    return FinAbPresentation(tuple(factors), n, proj)


@dataclass(frozen=True)
class CentralProductSpec:
    """Two root data with surjections onto a common group A.

    Only the moduli of ``A`` matter here; h1 and h2 give the coordinates of the
    images in Z/m1 ⊕ ... (a modulus 0 meaning a free factor).
    """

    R1: RootDatum
    R2: RootDatum
    A: Group
    h1: IntMatrix
    h2: IntMatrix

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.A.moduli

    def validate(self) -> str | None:
        m = self.moduli
        for name, R, h in (("h1", self.R1, self.h1), ("h2", self.R2, self.h2)):
            if h.rows != len(m) or h.cols != R.rank:
                return f"{name} has shape {h.rows}x{h.cols}, expected {len(m)}x{R.rank}"
            if not map_is_surjective(h, m):
                return f"{name} is not surjective"
            for i, a in enumerate(R.roots):
                if any(reduce_mod(h.apply(a), m)):
                    return f"{name} does not kill root {i}"
        return None


@dataclass(frozen=True)
class CentralProductResult:
    """R1 ⊕_(A,h1,h2) R2 with its projections.

    Attributes:
        datum: The induced datum on B, in Hermite coordinates.
        p1: Projection onto R1 (f is the first block of ``embed``).
        p2: Projection onto R2.
        embed: Basis of B inside X1 ⊕ X2 (columns).
        spec: The input data.
    """

    datum: RootDatum
    p1: PMorphism
    p2: PMorphism
    embed: IntMatrix
    spec: CentralProductSpec


def central_product(spec: CentralProductSpec) -> CentralProductResult:
    problem = spec.validate()
    if problem is not None:
        raise CentralProductError(problem)
    R1, R2 = spec.R1, spec.R2
    fp = fiber_product(spec.h1, spec.h2, spec.A)
    D, basis = induced_datum(direct_sum(R1, R2), fp.basis)
    n1 = len(R1.roots)
    p1 = PMorphism(fp.proj1, 0, (1,) * n1, tuple(range(n1)))
    p2 = PMorphism(fp.proj2, 0, (1,) * len(R2.roots), tuple(n1 + i for i in range(len(R2.roots))))
    check(D)
    for p, R in ((p1, R1), (p2, R2)):
        v = validate_p_morphism(p, D, R, allow_partial=True)
        if v is not None:  # pragma: no cover - guaranteed by construction
            raise CentralProductError(f"projection is not a homomorphism: {v}")
    name = None
    if R1.name and R2.name:
        name = f"{R1.name} *_A {R2.name}"
    return CentralProductResult(D.with_name(name), p1, p2, basis, spec)


def projection_kernels(res: CentralProductResult) -> tuple[IntMatrix, IntMatrix]:
    """Kernels of p1 and p2 as sublattices of X1 ⊕ X2."""
    out = []
    for p in (res.p1, res.p2):
        K = map_kernel(p.f, (0,) * p.f.rows)
        out.append(hermite_basis(res.embed @ K) if K.cols else IntMatrix.zeros(res.embed.rows, 0))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Recovery and decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Components:
    """Derived datum, radical and A = X/(Φ^⊤ + Φ̌^⊥) of a root datum."""

    derived: RootDatum
    radical: RootDatum
    A: FinAbPresentation
    derived_projection: IntMatrix
    radical_projection: IntMatrix


def recover_components(R: RootDatum) -> Components:
    D, pd = derived_datum(R)
    T, pr = radical(R)
    gens = root_saturation(R).hstack(coroot_annihilator(R))
    A = quotient(gens, R.rank).finite()
    return Components(D, T, A, pd, pr)


@dataclass(frozen=True)
class Decomposition:
    """An isomorphism R ≅ R_der ⊕_(A,h1,h2) R_rad.

    ``iso`` expresses x in the Hermite coordinates of the product lattice, so
    ``R.transform(iso) == product.datum``.
    """

    iso: IntMatrix
    spec: CentralProductSpec
    product: CentralProductResult


def _solve_exact(E: IntMatrix, M: IntMatrix) -> IntMatrix | None:
    inv = rational_inverse(E)
    if inv is None:
        return None
    rows = []
    for r in inv:
        row = []
        for j in range(M.cols):
            v = sum((x * M[k, j] for k, x in enumerate(r)), Fraction(0))
            if v.denominator != 1:
                return None
            row.append(int(v))
        rows.append(row)
    return IntMatrix.from_rows(rows, M.cols)


def decompose_as_central_product(R: RootDatum) -> Decomposition:
    """R ≅ R_der ⊕_(A,h1,h2) R_rad via x -> (x + Φ̌^⊥, x + Φ^⊤)."""
    comp = recover_components(R)
    pd = comp.derived_projection
    S1 = right_inverse(pd) if pd.rows else IntMatrix.zeros(R.rank, 0)
    # h1 and h2 are the quotient map composed with sections of the projections
    qA = comp.A.projection
    h1 = _reduce_rows(qA @ S1, comp.A.moduli) if pd.rows else IntMatrix.zeros(qA.rows, 0)
    T, pr = radical(R)
    S2 = right_inverse(pr) if pr.rows else IntMatrix.zeros(R.rank, 0)
    h2 = _reduce_rows(qA @ S2, comp.A.moduli) if pr.rows else IntMatrix.zeros(qA.rows, 0)
    spec = CentralProductSpec(comp.derived, T, comp.A, h1, h2)
    prod = central_product(spec)
    phi = pd.vstack(pr)
    iso = _solve_exact(prod.embed, phi)
    if iso is None or not iso.is_unimodular():  # pragma: no cover - theorem
        raise CentralProductError("structure map is not an isomorphism")
    if R.transform(iso) != prod.datum:  # pragma: no cover - theorem
        raise CentralProductError("structure map does not match roots and coroots")
    return Decomposition(iso, spec, prod)


def _reduce_rows(M: IntMatrix, moduli: tuple[int, ...]) -> IntMatrix:
    return IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) if m else r for r, m in zip(M.data, moduli)], M.cols)


def is_derived_embedding(m: PMorphism, source: RootDatum, target: RootDatum) -> bool:
    """A homomorphism surjective on lattices that is bijective on roots."""
    from .zlattice import is_surjective

    if validate_p_morphism(m, source, target) is not None:
        return False
    if any(q != 1 for q in m.q):
        return False
    return is_surjective(m.f) if m.f.rows else True


def derived_embedding_structure(m: PMorphism, source: RootDatum, target: RootDatum) -> Decomposition:
    """source ≅ target ⊕_(A,h1,h2) source_rad for a derived embedding m: source -> target.

    A = X_target / f(Φ^⊤) with h1 the quotient map, and x -> (f(x), x + Φ^⊤).
    """
    if not is_derived_embedding(m, source, target):
        raise CentralProductError("morphism is not a derived embedding")
    f = m.f
    img = f @ root_saturation(source) if source.roots else IntMatrix.zeros(target.rank, 0)
    A = quotient(img, target.rank)
    Ag: Group = A.finite() if A.is_finite else A
    T, pr = radical(source)
    S2 = right_inverse(pr) if pr.rows else IntMatrix.zeros(source.rank, 0)
    h1 = A.projection
    h2 = _reduce_rows(A.projection @ f @ S2, A.moduli) if pr.rows else IntMatrix.zeros(A.projection.rows, 0)
    spec = CentralProductSpec(target, T, Ag, h1, h2)
    prod = central_product(spec)
    phi = f.vstack(pr)
    iso = _solve_exact(prod.embed, phi)
    if iso is None or not iso.is_unimodular():
        raise CentralProductError("structure map is not an isomorphism")
    if source.transform(iso) != prod.datum:
        # roots may come in a different order when tau is not the identity
        moved = source.transform(iso)
        if set(zip(moved.roots, moved.coroots)) != set(zip(prod.datum.roots, prod.datum.coroots)):
            raise CentralProductError("structure map does not match roots and coroots")
    return Decomposition(iso, spec, prod)


# ---------------------------------------------------------------------------
# Morphisms between central products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CentralDecomposition:
    """ζ = (ζ1 ⊕ ζ2)|_B together with the induced map ζ3 on A."""

    zeta1: IntMatrix
    zeta2: IntMatrix
    zeta3: IntMatrix
    kernel_preserved: bool


def decompose_morphism(
    f: IntMatrix, source: CentralProductResult, target: CentralProductResult
) -> CentralDecomposition:
    """Split a lattice map B_source -> B_target of semisimple-by-torus products.

    Raises CentralProductError when the map is not block diagonal, which does
    not happen for genuine p-morphisms.
    """
    E1, E2 = source.embed, target.embed
    inv = rational_inverse(E1)
    if inv is None:
        raise CentralProductError("source fiber lattice is degenerate")
    FE = [[Fraction(x) for x in r] for r in (E2 @ f).data]
    Z = [[sum((FE[i][k] * inv[k][j] for k in range(len(inv))), Fraction(0)) for j in range(E1.rows)] for i in range(E2.rows)]
    if any(x.denominator != 1 for r in Z for x in r):
        raise CentralProductError("map does not extend integrally to X1 ⊕ X2")
    Zi = IntMatrix.from_rows([[int(x) for x in r] for r in Z], E1.rows)
    a1, a2 = source.spec.R1.rank, target.spec.R1.rank
    b1, b2 = source.spec.R2.rank, target.spec.R2.rank
    if any(Zi[i, j] for i in range(a2) for j in range(a1, a1 + b1)) or any(
        Zi[i, j] for i in range(a2, a2 + b2) for j in range(a1)
    ):
        raise CentralProductError("map is not block diagonal")
    z1 = Zi.submatrix(range(a2), range(a1))
    z2 = Zi.submatrix(range(a2, a2 + b2), range(a1, a1 + b1))
    h1s, h1t = source.spec.h1, target.spec.h1
    m_s, m_t = source.spec.moduli, target.spec.moduli
    S = section(h1s, m_s)
    z3 = _reduce_rows(h1t @ z1 @ S, m_t) if h1t.rows else IntMatrix.zeros(0, len(m_s))
    # the defining identities, verified exactly
    for i in range(h1s.cols):
        col = tuple(int(j == i) for j in range(h1s.cols))
        lhs = reduce_mod(z3.apply(h1s.apply(col)), m_t) if z3.rows else ()
        rhs = reduce_mod(h1t.apply(z1.apply(col)), m_t)
        if lhs != rhs:
            raise CentralProductError("ζ3 ∘ h1 != h1' ∘ ζ1")
    h2s, h2t = source.spec.h2, target.spec.h2
    for i in range(h2s.cols):
        col = tuple(int(j == i) for j in range(h2s.cols))
        lhs = reduce_mod(z3.apply(h2s.apply(col)), m_t) if z3.rows else ()
        rhs = reduce_mod(h2t.apply(z2.apply(col)), m_t)
        if lhs != rhs:
            raise CentralProductError("ζ3 ∘ h2 != h2' ∘ ζ2")
    K1 = map_kernel(h1s, m_s)
    K2 = map_kernel(h1t, m_t)
    kept = is_sublattice(z1 @ K1, K2) if K1.cols else True
    return CentralDecomposition(z1, z2, z3, kept)


def decompose_endomorphism(m: PMorphism, product: CentralProductResult) -> CentralDecomposition:
    return decompose_morphism(m.f, product, product)


__all__ = [
    "CentralDecomposition",
    "CentralProductError",
    "CentralProductResult",
    "CentralProductSpec",
    "Components",
    "Decomposition",
    "central_product",
    "decompose_as_central_product",
    "decompose_endomorphism",
    "decompose_morphism",
    "derived_embedding_structure",
    "group_from_factors",
    "is_derived_embedding",
    "projection_kernels",
    "recover_components",
    "trivial_group",
]
