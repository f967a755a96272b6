"""Root-data versions of three reduction constructions.

* :func:`complete_embeddings` places two derived embeddings over a common
  datum under one smooth regular embedding.
* :func:`smooth_covering` dualizes a smooth regular embedding of the dual.
* :func:`cyclic_block_embedding` builds a smooth embedding compatible with a
  Steinberg map that permutes simple blocks cyclically.

All results carry their certificates: every identity the construction is
supposed to satisfy is recomputed exactly and stored in ``certificates``.
These are statements about root data only; nothing is claimed about groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .central import (
    CentralProductResult,
    CentralProductSpec,
    central_product,
    derived_embedding_structure,
    is_derived_embedding,
)
from .embed import EmbeddingError, SmoothEmbedding, conjugate_into, smooth_regular_embedding
from .morphism import (
    NotSteinberg,
    PMorphism,
    dualize,
    infer,
    is_p_steinberg,
    validate_p_morphism,
)
from .rootdata import (
    RootDatum,
    centre_invariants,
    direct_sum,
    dual,
    radical,
    torus,
    torus_part,
)
from .zlattice import (
    IntMatrix,
    block_diag,
    integer_kernel,
    is_injective,
    is_surjective,
    quotient,
    rational_solve_matrix,
    saturation,
    hermite_basis,
)


def _torsion_free(R: RootDatum) -> bool:
    return not centre_invariants(R).torsion


def _is_smooth_embedding(m: PMorphism, source: RootDatum, target: RootDatum) -> bool:
    return is_derived_embedding(m, source, target) and _torsion_free(source)


# ---------------------------------------------------------------------------
# Completion of two embeddings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Completion:
    """R' with π_i: R' -> R_i and the torus S of the construction."""

    datum: RootDatum
    pi1: PMorphism
    pi2: PMorphism
    torus_basis: IntMatrix
    product: CentralProductResult
    psi: PMorphism | None = None
    certificates: dict = field(default_factory=dict)


def complete_embeddings(
    s1: PMorphism,
    R1: RootDatum,
    s2: PMorphism,
    R2: RootDatum,
    R: RootDatum,
    steinberg: tuple[PMorphism, PMorphism, PMorphism] | None = None,
) -> Completion:
    """Complete derived embeddings s_i: R_i -> R to a commuting square.

    S = {(x1, x2) : s1(x1) = s2(x2)} is a torus, f: S -> A = X/ZΦ sends
    (x1, x2) to the class of s1(x1), and R' = R ⊕_(A,h,f) S.  The maps
    π_i: R' -> R_i factor through the structure isomorphisms of the R_i, and
    s1∘π1 = s2∘π2 holds on the nose.  ``steinberg`` = (F, F1, F2) adds the
    lift ψ(x, (y1, y2)) = (F x, (F1 y1, F2 y2)).
    """
    for name, s, Ri in (("s1", s1, R1), ("s2", s2, R2)):
        if not is_derived_embedding(s, Ri, R):
            raise EmbeddingError(f"{name} is not a derived embedding")
    if steinberg is not None:
        F, F1, F2 = steinberg
        for Fi, si, Ri in ((F1, s1, R1), (F2, s2, R2)):
            if si.f @ Fi.f != F.f @ si.f:
                raise EmbeddingError("Steinberg data do not commute with the embeddings")
            if validate_p_morphism(Fi, Ri, Ri) is not None:
                raise EmbeddingError("Steinberg datum is not a p-morphism")
        if validate_p_morphism(F, R, R) is not None:
            raise EmbeddingError("Steinberg datum is not a p-morphism")
    n, n1, n2 = R.rank, R1.rank, R2.rank
    Sb = integer_kernel(s1.f.hstack(-s2.f))
    k = Sb.cols
    A = quotient(R.root_matrix if R.roots else IntMatrix.zeros(n, 0), n)
    h = A.projection
    y1 = Sb.submatrix(range(n1), range(k))
    f = h @ s1.f @ y1
    res = central_product(CentralProductSpec(R, torus(k), A, h, f))
    Rp = res.datum
    E = res.embed  # columns in X ⊕ S-coordinates
    pis = []
    for i, (s, Ri) in enumerate(((s1, R1), (s2, R2))):
        dec = derived_embedding_structure(s, Ri, R)
        _, pr = radical(Ri)
        Yi = Sb.submatrix(range(n1), range(k)) if i == 0 else Sb.submatrix(range(n1, n1 + n2), range(k))
        # (x, c) -> (x, C_i^T · y_i(c)), with y_i the i-th block of the S-basis
        Mi = block_diag(IntMatrix.identity(n), pr @ Yi)
        in_Bi = rational_solve_matrix(dec.product.embed, Mi @ E)
        if in_Bi is None:  # pragma: no cover - fiber condition holds by construction
            raise EmbeddingError("completion does not map into the structure lattice")
        fi = rational_solve_matrix(dec.iso, in_Bi)
        if fi is None:  # pragma: no cover
            raise EmbeddingError("structure isomorphism is not invertible")
        pis.append(infer(fi, 0, Rp, Ri))
    pi1, pi2 = pis
    certs = {
        "square_commutes": s1.f @ pi1.f == s2.f @ pi2.f,
        "pi1_surjective": is_surjective(pi1.f),
        "pi2_surjective": is_surjective(pi2.f),
        "pi1_smooth": _is_smooth_embedding(pi1, Rp, R1),
        "pi2_smooth": _is_smooth_embedding(pi2, Rp, R2),
        "torsion": centre_invariants(Rp).torsion,
    }
    psi = None
    if steinberg is not None:
        F, F1, F2 = steinberg
        big = block_diag(F.f, conjugate_into(Sb, block_diag(F1.f, F2.f)) or _fail("F1 ⊕ F2 does not preserve S"))
        inner = conjugate_into(E, big)
        if inner is None:  # pragma: no cover
            raise EmbeddingError("ψ does not preserve the fiber lattice")
        psi = infer(inner, F.p, Rp, Rp)
        certs["psi_commutes_1"] = pi1.f @ psi.f == F1.f @ pi1.f
        certs["psi_commutes_2"] = pi2.f @ psi.f == F2.f @ pi2.f
        certs["psi_steinberg"] = is_p_steinberg(psi)
    return Completion(Rp, pi1, pi2, Sb, res, psi, certs)


def _fail(msg: str):
    raise EmbeddingError(msg)


# ---------------------------------------------------------------------------
# Smooth coverings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Covering:
    """R̃ = dual(R') for a smooth regular embedding R' -> Ř.

    ``covering`` is the dual of that embedding, a morphism R -> R̃ whose
    lattice map X -> X̃ is ``covering.f``.
    """

    datum: RootDatum
    covering: PMorphism
    embedding: SmoothEmbedding
    frobenius: PMorphism | None = None
    certificates: dict = field(default_factory=dict)


def smooth_covering(R: RootDatum, F: PMorphism | None = None) -> Covering:
    Rd = dual(R)
    Fd = dualize(F) if F is not None else None
    emb = smooth_regular_embedding(Rd, Fd)
    Rp = emb.datum
    cover = dualize(emb.p1)
    Rt = dual(Rp).with_name(None if R.name is None else f"{R.name} cover")
    ft = cover.f
    coker = quotient(ft, ft.rows)
    sat = saturation(Rp.root_matrix, Rp.rank) if Rp.roots else IntMatrix.zeros(Rp.rank, 0)
    root_lat = hermite_basis(Rp.root_matrix) if Rp.roots else IntMatrix.zeros(Rp.rank, 0)
    certs = {
        "injective": is_injective(ft),
        "torsion_free_cokernel": not coker.torsion,
        "derived_simply_connected": sat == root_lat,
        "torsion_transfer": centre_invariants(Rt).torsion == centre_invariants(R).torsion,
        "covering_is_morphism": validate_p_morphism(cover, R, Rt) is None,
    }
    Ft = None
    if F is not None and emb.psi is not None:
        Ft = dualize(emb.psi)
        certs["frobenius_commutes"] = Ft.f @ ft == ft @ F.f
        certs["double_dual"] = dualize(Fd) == F
        certs["frobenius_steinberg"] = is_p_steinberg(Ft)
    return Covering(Rt, cover, emb, Ft, certs)


# ---------------------------------------------------------------------------
# Cyclic blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicBlockEmbedding:
    datum: RootDatum
    h: PMorphism
    psi: PMorphism
    blocks: tuple[CentralProductResult, ...]
    certificates: dict = field(default_factory=dict)


def _offsets(sizes: list[int]) -> list[int]:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def cyclic_block_embedding(blocks: list[RootDatum], F: PMorphism) -> CyclicBlockEmbedding:
    """Blockwise smooth products R_i' with ψ rotating them like F.

    F acts on X_1 ⊕ ... ⊕ X_n and maps block i+1 into block i (indices
    cyclic), so its only nonzero blocks are (i, i+1).
    """
    n = len(blocks)
    if n == 0:
        raise EmbeddingError("at least one block is required")
    R = blocks[0]
    for B in blocks[1:]:
        R = direct_sum(R, B)
    sizes = [B.rank for B in blocks]
    off = _offsets(sizes)
    if F.f.rows != off[-1] or F.f.cols != off[-1]:
        raise EmbeddingError("F has the wrong size for these blocks")
    v = validate_p_morphism(F, R, R)
    if v is not None:
        raise EmbeddingError(f"F is not a p-morphism of the product: {v}")
    for i in range(n):
        for j in range(n):
            if j == (i + 1) % n:
                continue
            sub = F.f.submatrix(range(off[i], off[i + 1]), range(off[j], off[j + 1]))
            if not sub.is_zero():
                raise EmbeddingError(f"F has a nonzero block ({i}, {j}); blocks must rotate cyclically")
    products = []
    for B in blocks:
        A = quotient(B.root_matrix if B.roots else IntMatrix.zeros(B.rank, 0), B.rank)
        hB = A.projection
        products.append(central_product(CentralProductSpec(B, torus_part(B), A, hB, hB)))
    psizes = [p.datum.rank for p in products]
    poff = _offsets(psizes)
    total = poff[-1]
    rows = [[0] * total for _ in range(total)]
    for i in range(n):
        j = (i + 1) % n
        Fij = F.f.submatrix(range(off[i], off[i + 1]), range(off[j], off[j + 1]))
        block = rational_solve_matrix(products[i].embed, block_diag(Fij, Fij) @ products[j].embed)
        if block is None:  # pragma: no cover - F carries ZΦ into ZΦ
            raise EmbeddingError(f"F block ({i}, {j}) does not preserve the fiber lattices")
        for a in range(block.rows):
            for b in range(block.cols):
                rows[poff[i] + a][poff[j] + b] = block[a, b]
    Psi = IntMatrix.from_rows(rows, total)
    Rp = products[0].datum
    for pr in products[1:]:
        Rp = direct_sum(Rp, pr.datum)
    hmat = block_diag(*[p.p1.f for p in products])
    h = infer(hmat, 0, Rp, R)
    psi = infer(Psi, F.p, Rp, Rp)
    Pn = Psi**n
    Fn = F.f**n
    block_diag_ok = all(
        Pn.submatrix(range(poff[i], poff[i + 1]), range(poff[j], poff[j + 1])).is_zero()
        for i in range(n)
        for j in range(n)
        if i != j
    )
    P11 = Pn.submatrix(range(poff[1]), range(poff[1]))
    F11 = Fn.submatrix(range(off[1]), range(off[1]))
    certs = {
        "commutes": hmat @ Psi == F.f @ hmat,
        "psi_n_block_diagonal": block_diag_ok,
        "block1_commutes": products[0].p1.f @ P11 == F11 @ products[0].p1.f,
        "torsion": centre_invariants(Rp).torsion,
        "h_surjective": is_surjective(hmat),
    }
    wF = is_p_steinberg(F) if F.p > 1 else None
    if wF is not None:
        wpsi = is_p_steinberg(psi)
        certs["steinberg_transfers"] = isinstance(wF, NotSteinberg) or not isinstance(wpsi, NotSteinberg)
        certs["psi_steinberg"] = wpsi
    return CyclicBlockEmbedding(Rp, h, psi, tuple(products), certs)


__all__ = [
    "Completion",
    "Covering",
    "CyclicBlockEmbedding",
    "complete_embeddings",
    "cyclic_block_embedding",
    "smooth_covering",
]
