"""Catalog of classical root data.

Simple types are built in weight coordinates: X = Ω = Z^n with basis the
fundamental weights, X̌ = Z^n with basis the simple coroots.  The simple root
α_i then has coordinates ``cartan[i]`` where ``cartan[i][j] = <α_i, α̌_j>``,
and all roots and coroots are produced by closing under simple reflections.
Intermediate lattices ZΦ ⊆ X ⊆ Ω are cut out with :func:`induced_datum`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .rootdata import RootDatum, RootDatumError, _rational_coords, check, induced_datum, pair
from .zlattice import IntMatrix, Vector, finite_quotient, hermite_basis, reduce_mod, section

_LABEL = re.compile(r"^([A-G])(\d+)$")


def _gram(kind: str, n: int) -> list[list[Fraction]]:
    """Symmetric inner products (α_i | α_j) with Bourbaki numbering."""
    g = [[Fraction(0)] * n for _ in range(n)]

    def edge(i: int, j: int, v: Fraction) -> None:
        g[i][j] = g[j][i] = v

    if kind == "A":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 1):
            edge(i, i + 1, Fraction(-1))
    elif kind == "B":
        for i in range(n):
            g[i][i] = Fraction(2)
        g[n - 1][n - 1] = Fraction(1)
        for i in range(n - 1):
            edge(i, i + 1, Fraction(-1))
    elif kind == "C":
        for i in range(n):
            g[i][i] = Fraction(1)
        g[n - 1][n - 1] = Fraction(2)
        for i in range(n - 2):
            edge(i, i + 1, Fraction(-1, 2))
        edge(n - 2, n - 1, Fraction(-1))
    elif kind == "D":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 2):
            edge(i, i + 1, Fraction(-1))
        edge(n - 3, n - 1, Fraction(-1))
    elif kind == "E":
        for i in range(n):
            g[i][i] = Fraction(2)
        edge(0, 2, Fraction(-1))
        edge(1, 3, Fraction(-1))
        for i in range(2, n - 1):
            edge(i, i + 1, Fraction(-1))
    elif kind == "F":
        g[0][0] = g[1][1] = Fraction(2)
        g[2][2] = g[3][3] = Fraction(1)
        edge(0, 1, Fraction(-1))
        edge(1, 2, Fraction(-1))
        edge(2, 3, Fraction(-1, 2))
    elif kind == "G":
        g[0][0], g[1][1] = Fraction(2), Fraction(6)
        edge(0, 1, Fraction(-3))
    return g


_VALID = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def parse_label(label: str) -> list[tuple[str, int]]:
    """Split a type label such as ``"A1xC2"`` into its simple factors."""
    parts = [p for p in re.split(r"[x×+*]", label.strip()) if p]
    if not parts:
        raise RootDatumError(f"empty type label {label!r}")
    out = []
    for p in parts:
        m = _LABEL.match(p.strip())
        if not m:
            raise RootDatumError(f"unknown Cartan type {p!r}")
        kind, n = m.group(1), int(m.group(2))
        if not _VALID[kind](n):
            raise RootDatumError(f"invalid rank for type {kind}: {n}")
        out.append((kind, n))
    return out


def cartan_type_matrix(label: str) -> list[list[int]]:
    """Block-diagonal matrix with entry (i, j) equal to <α_i, α̌_j>."""
    blocks = []
    for kind, n in parse_label(label):
        g = _gram(kind, n)
        blocks.append([[int(2 * g[i][j] / g[j][j]) for j in range(n)] for i in range(n)])
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[off + i][off:off + len(row)] = row
        off += len(b)
    return out


def _close_under_reflections(simple: list[Vector], simple_co: list[Vector]) -> RootDatum:
    n = len(simple[0]) if simple else 0
    roots: dict[Vector, Vector] = {}
    frontier = list(zip(simple, simple_co))
    for a, c in frontier:
        roots[a] = c
    while frontier:
        nxt = []
        for b, cb in frontier:
            for a, ca in zip(simple, simple_co):
                k = pair(b, ca)
                m = pair(a, cb)
                img = tuple(x - k * y for x, y in zip(b, a))
                cimg = tuple(x - m * y for x, y in zip(cb, ca))
                if img not in roots:
                    roots[img] = cimg
                    nxt.append((img, cimg))
        frontier = nxt
    # positive roots by height, then their negatives in the same order
    basis = IntMatrix.from_columns(simple, n)
    coeffs = {a: tuple(int(x) for x in _rational_coords(basis, a)) for a in roots}
    pos = sorted((a for a in roots if sum(coeffs[a]) > 0), key=lambda a: (sum(coeffs[a]), tuple(-x for x in coeffs[a])))
    order = pos + [tuple(-x for x in a) for a in pos]
    return RootDatum.make(n, order, [roots[a] for a in order])


@lru_cache(maxsize=None)
def simply_connected(label: str) -> RootDatum:
    """The datum with X = Ω, the weight lattice."""
    C = cartan_type_matrix(label)
    n = len(C)
    simple = [tuple(row) for row in C]
    simple_co = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    R = _close_under_reflections(simple, simple_co)
    return check(R.with_name(f"{label} sc"))


def fundamental_group(label: str):
    """Ω/ZΦ as a finite abelian group presentation."""
    R = simply_connected(label)
    return finite_quotient(R.root_matrix, R.rank)


def lattice_for_selector(label: str, selector: str | Sequence[Sequence[int]]) -> IntMatrix:
    """Generators of X ⊆ Ω for a selector ("sc", "ad" or weight-coordinate generators)."""
    R = simply_connected(label)
    n = R.rank
    if selector == "sc":
        return IntMatrix.identity(n)
    root_lattice = hermite_basis(R.root_matrix)
    if selector == "ad":
        return root_lattice
    if isinstance(selector, str):
        raise RootDatumError(f"unknown lattice selector {selector!r}")
    gens = [tuple(int(x) for x in g) for g in selector]
    for g in gens:
        if len(g) != n:
            raise RootDatumError(f"selector generator {g} is not a weight of rank {n}")
    if not gens:
        return root_lattice
    return hermite_basis(root_lattice.hstack(IntMatrix.from_columns(gens, n)))


def catalog(label: str, selector: str | Sequence[Sequence[int]] = "sc") -> RootDatum:
    """Root datum of the given Cartan type on the lattice picked by ``selector``.

    Preset names ``GL<n>``, ``Sp4`` and ``CSp4`` are accepted as labels too;
    for these the selector is ignored.
    """
    preset = _preset(label)
    if preset is not None:
        return preset
    R = simply_connected(label)
    if selector == "sc":
        return R
    X = lattice_for_selector(label, selector)
    D, _ = induced_datum(R, X)
    tag = selector if isinstance(selector, str) else "X=" + ",".join(map(str, X.columns()))
    return check(D.with_name(f"{label} {tag}"))


def intermediate_lattices(label: str) -> list[IntMatrix]:
    """Every lattice X with ZΦ ⊆ X ⊆ Ω, as Hermite bases in weight coordinates.

    Subgroups of the fundamental group are enumerated by closure; the list is
    sorted by index in Ω (the weight lattice comes first).
    """
    A = fundamental_group(label)
    R = simply_connected(label)
    root_lattice = hermite_basis(R.root_matrix)
    if A.order == 1:
        return [root_lattice]
    d = A.invariant_factors
    sect = section(A.projection, d)
    elements = _all_elements(d)
    subgroups: set[frozenset] = {frozenset([tuple(0 for _ in d)])}
    frontier = list(subgroups)
    while frontier:
        nxt = []
        for H in frontier:
            for g in elements:
                if g in H:
                    continue
                K = _closure(H | {g}, d)
                if K not in subgroups:
                    subgroups.add(K)
                    nxt.append(K)
        frontier = nxt
    out = []
    for H in subgroups:
        gens = [sect.apply(h) for h in H if any(h)]
        X = root_lattice if not gens else hermite_basis(root_lattice.hstack(IntMatrix.from_columns(gens, R.rank)))
        out.append(X)
    out.sort(key=lambda X: (abs(X.det()), X.tolist()))
    return out


def _all_elements(d: Sequence[int]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for m in d:
        out = [e + (k,) for e in out for k in range(m)]
    return out


def _closure(gens: Iterable[tuple[int, ...]], d: Sequence[int]) -> frozenset:
    H = {tuple(0 for _ in d)}
    frontier = list(H)
    gens = list(gens)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                s = reduce_mod(tuple(a + b for a, b in zip(h, g)), d)
                if s not in H:
                    H.add(s)
                    nxt.append(s)
        frontier = nxt
    return frozenset(H)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------


def general_linear(n: int) -> RootDatum:
    """GL_n: X = Z^n, roots e_i - e_j, coroots e_i - e_j."""
    roots, coroots = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                v = tuple(int(k == i) - int(k == j) for k in range(n))
                roots.append(v)
                coroots.append(v)
    return check(RootDatum.make(n, roots, coroots, f"GL{n}"))


def conformal_symplectic4() -> RootDatum:
    """CSp_4 on X = Z^3."""
    pos = [
        ((1, -1, 0), (1, -1, 0)),
        ((1, 1, -1), (1, 1, 0)),
        ((2, 0, -1), (1, 0, 0)),
        ((0, 2, -1), (0, 1, 0)),
    ]
    roots = [a for a, _ in pos] + [tuple(-x for x in a) for a, _ in pos]
    coroots = [c for _, c in pos] + [tuple(-x for x in c) for _, c in pos]
    return check(RootDatum.make(3, roots, coroots, "CSp4"))


def _preset(label: str) -> RootDatum | None:
    s = label.strip()
    m = re.fullmatch(r"GL_?(\d+)", s)
    if m:
        return general_linear(int(m.group(1)))
    if s in ("Sp4", "Sp_4"):
        return simply_connected("C2").with_name("Sp4")
    if s in ("CSp4", "CSp_4"):
        return conformal_symplectic4()
    m = re.fullmatch(r"SL_?(\d+)", s)
    if m:
        n = int(m.group(1))
        return simply_connected(f"A{n - 1}").with_name(f"SL{n}")
    m = re.fullmatch(r"PGL_?(\d+)", s)
    if m:
        n = int(m.group(1))
        return catalog(f"A{n - 1}", "ad").with_name(f"PGL{n}")
    m = re.fullmatch(r"T_?(\d+)", s)
    if m:
        from .rootdata import torus

        return torus(int(m.group(1)))
    return None


def simple_labels(max_rank: int) -> list[str]:
    """Labels of every simple type of rank at most ``max_rank``."""
    out = []
    for kind in "ABCDEFG":
        for n in range(1, max_rank + 1):
            if _VALID[kind](n):
                out.append(f"{kind}{n}")
    return out
