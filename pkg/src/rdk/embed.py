"""Derived, regular and smooth regular embeddings.

An embedding of root data is stored as a morphism R' -> R whose lattice map
X' -> X is surjective; on the group side this is the inclusion G -> G'.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import abelian
from .central import (
    CentralProductResult,
    CentralProductSpec,
    central_product,
    derived_embedding_structure,
    is_derived_embedding,
)
from .morphism import (
    NotSteinberg,
    PMorphism,
    SteinbergWitness,
    FrobeniusWitness,
    identity as identity_morphism,
    infer,
    is_p_frobenius,
    is_p_steinberg,
    validate_p_morphism,
)
from .rootdata import RootDatum, centre_invariants, torus, torus_part
from .zlattice import (
    FinAbPresentation,
    IntMatrix,
    Quotient,
    block_diag,
    finite_quotient,
    quotient,
    rational_solve_matrix,
    reduce_mod,
    section,
)


class EmbeddingError(ValueError):
    """Raised when inputs do not meet a construction's hypotheses."""


def _reduce_rows(M: IntMatrix, d) -> IntMatrix:
    return IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) if m else r for r, m in zip(M.data, d)], M.cols)


def conjugate_into(E: IntMatrix, M: IntMatrix) -> IntMatrix | None:
    """The matrix of M on the lattice spanned by the columns of E, if M preserves it.

    E must have full column rank; the result Y satisfies E·Y = M·E.
    """
    return rational_solve_matrix(E, M @ E)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    """Kind of an embedding R' -> R and the torsion of X'/ZΦ'.

    ``kind`` is one of "smooth", "p-regular", "derived" or "none"; the first
    three are nested.
    """

    kind: str
    torsion: tuple[int, ...]
    p_part: tuple[int, ...]
    p_prime_part: tuple[int, ...]
    frobenius_lift: PMorphism | None = None
    lift_commutes: bool | None = None

    @property
    def is_derived(self) -> bool:
        return self.kind != "none"

    @property
    def is_regular(self) -> bool:
        return self.kind in ("p-regular", "smooth")

    @property
    def is_smooth(self) -> bool:
        return self.kind == "smooth"


def classify_embedding(
    m: PMorphism,
    source: RootDatum,
    target: RootDatum,
    p: int = 0,
    F: PMorphism | None = None,
) -> EmbeddingReport:
    """Classify m: source -> target; with F on the target, look for a compatible lift."""
    ci = centre_invariants(source, p)
    if not is_derived_embedding(m, source, target):
        kind = "none"
    elif not ci.torsion:
        kind = "smooth"
    elif p > 1 and not ci.p_prime_part:
        kind = "p-regular"
    else:
        kind = "derived"
    lift = commutes = None
    if F is not None and kind != "none":
        lift = _compatible_lift(m, source, target, F)
        if lift is not None:
            commutes = m.f @ lift.f == F.f @ m.f
    return EmbeddingReport(kind, ci.torsion, ci.p_part, ci.p_prime_part, lift, commutes)


def _compatible_lift(m: PMorphism, source: RootDatum, target: RootDatum, F: PMorphism) -> PMorphism | None:
    """An endomorphism φ' of the source with f∘φ' = F∘f, built on the torus part.

    Uses the structure source ≅ target ⊕_(A,h1,h2) torus; the torus map λ
    must satisfy h2∘λ = ζ∘h2 where ζ is the map F induces on A.  Scalar
    candidates λ = q·I are preferred (q ranging over the weights of F), then
    a λ assembled from a section of h2.
    """
    dec = derived_embedding_structure(m, source, target)
    spec = dec.spec
    mod = spec.moduli
    h1, h2 = spec.h1, spec.h2
    T_rank = spec.R2.rank
    if mod:
        sect1 = section(h1, mod)
        zeta = _reduce_rows(h1 @ F.f @ sect1, mod)
        # F must preserve Ker(h1)
        for c in range(h1.cols):
            col = tuple(int(i == c) for i in range(h1.cols))
            if reduce_mod(zeta.apply(h1.apply(col)), mod) != reduce_mod(h1.apply(F.f.apply(col)), mod):
                return None
    else:
        zeta = IntMatrix.zeros(0, 0)
    candidates = []
    for qv in sorted(set(F.q)) or [1]:
        candidates.append(IntMatrix.identity(T_rank).scale(qv))
    if mod and T_rank:
        s2 = section(h2, mod)
        candidates.append(s2 @ zeta @ h2)
    for lam in candidates:
        if mod and _reduce_rows(h2 @ lam, mod) != _reduce_rows(zeta @ h2, mod):
            continue
        big = block_diag(F.f, lam)
        inner = conjugate_into(dec.product.embed, big)
        if inner is None:
            continue
        iso = dec.iso
        phi = conjugate_into(iso, inner)
        if phi is None:
            continue
        try:
            return infer(phi, F.p, source, source)
        except ValueError:
            continue
    return None


# ---------------------------------------------------------------------------
# Smooth regular embeddings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothEmbedding:
    """R' with the surjection p1: R' -> R and, when F was given, ψ on R'.

    ``product`` is None when R was already smooth and returned unchanged.
    """

    datum: RootDatum
    p1: PMorphism
    psi: PMorphism | None = None
    product: CentralProductResult | None = None
    group_moduli: tuple[int, ...] = ()
    certificates: dict = field(default_factory=dict)


def _check_steinberg(F: PMorphism, R: RootDatum) -> SteinbergWitness:
    v = validate_p_morphism(F, R, R)
    if v is not None:
        raise EmbeddingError(f"F is not a p-morphism of R: {v}")
    w = is_p_steinberg(F)
    if isinstance(w, NotSteinberg):
        raise EmbeddingError(f"F is not p-Steinberg: {w.reason}")
    return w


def smooth_regular_embedding(
    R: RootDatum, F: PMorphism | None = None, *, force_construction: bool = False
) -> SmoothEmbedding:
    """R' = R ⊕_(A,h,h) R° with Tor(X'/ZΦ') = 0 and p1: R' -> R.

    A is X/ZΦ itself when R is semisimple, when F is supplied or when
    ``force_construction`` is set.  For other non-semisimple data only the
    torsion part of X/ZΦ is used, which keeps the result finite over A.  A
    datum that is already smooth is returned unchanged unless forced.
    """
    if F is not None:
        _check_steinberg(F, R)
    ci = centre_invariants(R)
    if not ci.torsion and not force_construction:
        return SmoothEmbedding(R, identity_morphism(R), F, None, (), {"already_smooth": True})
    q = quotient(R.root_matrix if R.roots else IntMatrix.zeros(R.rank, 0), R.rank)
    if q.is_finite:
        A: FinAbPresentation | Quotient = q.finite()
    elif F is not None or force_construction:
        A = q
    else:
        keep = [i for i, m in enumerate(q.moduli) if m != 0]
        A = FinAbPresentation(
            tuple(q.moduli[i] for i in keep), R.rank, q.projection.submatrix(keep, range(R.rank))
        )
    h = A.projection
    res = central_product(CentralProductSpec(R, torus_part(R), A, h, h))
    Rp = res.datum.with_name(None if R.name is None else f"{R.name} smooth")
    psi = None
    certs: dict = {}
    if F is not None:
        big = block_diag(F.f, F.f)
        inner = conjugate_into(res.embed, big)
        if inner is None:  # pragma: no cover - F preserves ZΦ, hence the fiber lattice
            raise EmbeddingError("F ⊕ F does not preserve the fiber lattice")
        psi = infer(inner, F.p, Rp, Rp)
        certs["commutes"] = res.p1.f @ psi.f == F.f @ res.p1.f
        certs["steinberg"] = is_p_steinberg(psi)
    certs["torsion"] = centre_invariants(Rp).torsion
    return SmoothEmbedding(Rp, res.p1, psi, res, tuple(A.moduli), certs)


def is_simple(R: RootDatum) -> bool:
    """Irreducible nonempty root system."""
    if not R.roots:
        return False
    n = len(R.roots)
    from .rootdata import pair

    adj = [[j for j in range(n) if pair(R.roots[i], R.coroots[j]) != 0] for i in range(n)]
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


@dataclass(frozen=True)
class OptimalEmbedding:
    datum: RootDatum
    p1: PMorphism
    psi: PMorphism
    torus_lift: IntMatrix
    product: CentralProductResult
    frobenius: FrobeniusWitness
    commutes: bool


def optimal_embedding(R: RootDatum, F: PMorphism, *, entry_bound: int = 1) -> OptimalEmbedding:
    """A smooth regular embedding with centre of dimension s for a Frobenius F.

    F = q·τ with τ of finite order; τ induces ζ on A = X/ZΦ, and a finite-order
    lift τ̃ ∈ GL_s(Z) of ζ along [I_s] gives ψ = q·(τ ⊕ τ̃) on the product.
    """
    if not is_simple(R) or not R.is_semisimple():
        raise EmbeddingError("optimal embeddings need a simple semisimple datum")
    v = validate_p_morphism(F, R, R)
    if v is not None:
        raise EmbeddingError(f"F is not a p-morphism of R: {v}")
    w = is_p_frobenius(F)
    if not isinstance(w, FrobeniusWitness):
        raise EmbeddingError(
            f"F is not p-Frobenius ({w.reason}); Steinberg maps such as the Suzuki "
            "endomorphism admit no smooth regular embedding with a compatible lift in general"
        )
    tau = w.finite_order_part
    qv = F.p**w.a
    A = finite_quotient(R.root_matrix, R.rank)
    d = A.invariant_factors
    s = len(d)
    h = A.projection
    if d:
        zeta = _reduce_rows(h @ tau @ section(h, d), d)
        lift = abelian.finite_order_lift(zeta, d, s, entry_bound=entry_bound)
        if lift is None:
            raise EmbeddingError("the map induced on X/ZΦ has no finite-order lift to the torus")
    else:
        lift = IntMatrix.zeros(0, 0)
    f = abelian.adapted_surjection(d, s)
    res = central_product(CentralProductSpec(R, torus(s), A, h, f))
    big = block_diag(tau, lift).scale(qv)
    inner = conjugate_into(res.embed, big)
    if inner is None:  # pragma: no cover - lifts are compatible by construction
        raise EmbeddingError("q(τ ⊕ τ̃) does not preserve the fiber lattice")
    Rp = res.datum
    psi = infer(inner, F.p, Rp, Rp)
    wf = is_p_frobenius(psi)
    if not isinstance(wf, FrobeniusWitness):  # pragma: no cover
        raise EmbeddingError("lifted map is not Frobenius")
    commutes = res.p1.f @ psi.f == F.f @ res.p1.f
    return OptimalEmbedding(Rp, res.p1, psi, lift, res, wf, commutes)


def minimal_torus_rank(R: RootDatum) -> int:
    """Lower bound s = number of invariant factors of X/ZΦ for the centre of a smooth embedding."""
    return len(centre_invariants(R).torsion)


# ---------------------------------------------------------------------------
# The Suzuki obstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionCase:
    """Outcome for one candidate lift ψ_s = diag(F*, 2^s) on X ⊕ T."""

    s: int
    psi: IntMatrix
    preserves_lattice: bool
    verdict: SteinbergWitness | NotSteinberg
    e2_exponent: int
    e3_exponent: int

    @property
    def parity_certificate(self) -> bool:
        """ψ² scales e2 by an odd power of 2 and e3 by an even one."""
        return self.e2_exponent % 2 == 1 and self.e3_exponent % 2 == 0


@dataclass(frozen=True)
class ObstructionReport:
    r: int
    frobenius_matrix: IntMatrix
    witness: SteinbergWitness | NotSteinberg
    product: CentralProductResult
    cases: tuple[ObstructionCase, ...]

    @property
    def holds(self) -> bool:
        return all(isinstance(c.verdict, NotSteinberg) and c.parity_certificate for c in self.cases)


def _power_exponent(v: tuple[int, ...], w: tuple[int, ...], base: int) -> int | None:
    """k with v = base^k·w, or None."""
    ratio = None
    for a, b in zip(v, w):
        if b == 0:
            if a != 0:
                return None
            continue
        if a % b:
            return None
        if ratio is None:
            ratio = a // b
        elif ratio != a // b:
            return None
    if ratio is None or ratio < 1:
        return None
    k = 0
    while ratio % base == 0:
        ratio //= base
        k += 1
    return k if ratio == 1 else None


def steinberg_obstruction_check(r: int, s_values=range(11), frobenius_matrix: IntMatrix | None = None) -> ObstructionReport:
    """Check the one-parameter family ψ_s on C2 ⊕_(Z/2) T1.

    ``frobenius_matrix`` defaults to the Suzuki map with parameter r; passing
    a split Frobenius such as 2^k·I shows the contrast, where ψ_k is Steinberg.
    """
    from .catalog import simply_connected
    from .morphism import suzuki_map

    R = simply_connected("C2")
    Fm = suzuki_map(r) if frobenius_matrix is None else frobenius_matrix
    F = infer(Fm, 2, R, R)
    witness = is_p_steinberg(F)
    A = finite_quotient(R.root_matrix, R.rank)
    f = abelian.adapted_surjection(A.invariant_factors, 1)
    res = central_product(CentralProductSpec(R, torus(1), A, A.projection, f))
    e2 = (0, 1, 0)
    e3 = (0, 0, 2)
    for v in (e2, e3):
        if reduce_mod(A.projection.apply(v[:2]), A.moduli) != reduce_mod(f.apply(v[2:]), A.moduli):
            raise AssertionError("test vectors are not in the fiber lattice")  # pragma: no cover
    cases = []
    for s in s_values:
        psi = block_diag(Fm, IntMatrix.from_rows([[2**s]]))
        preserves = conjugate_into(res.embed, psi) is not None
        verdict = is_p_steinberg(psi, 2)
        sq = psi @ psi
        k2 = _power_exponent(sq.apply(e2), e2, 2)
        k3 = _power_exponent(sq.apply(e3), e3, 2)
        cases.append(ObstructionCase(s, psi, preserves, verdict, -1 if k2 is None else k2, -1 if k3 is None else k3))
    return ObstructionReport(r, Fm, witness, res, tuple(cases))


__all__ = [
    "EmbeddingError",
    "EmbeddingReport",
    "ObstructionCase",
    "ObstructionReport",
    "OptimalEmbedding",
    "SmoothEmbedding",
    "classify_embedding",
    "conjugate_into",
    "is_simple",
    "minimal_torus_rank",
    "optimal_embedding",
    "smooth_regular_embedding",
    "steinberg_obstruction_check",
]
