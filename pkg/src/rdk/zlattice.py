"""Exact arithmetic on finitely generated Z-modules.

Every lattice lives inside some Z^n with the standard basis.  A sublattice is
described by a matrix whose *columns* generate it; the canonical form of a
sublattice is its column-style Hermite normal form, so two sublattices are
equal exactly when their Hermite bases are equal as matrices.

All entries are Python ints, so there is no overflow anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class LatticeError(ValueError):
    """Raised on dimension mismatches and violated preconditions."""


# ---------------------------------------------------------------------------
# IntMatrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, stored row-major as a tuple of tuples."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise LatticeError(
                f"IntMatrix shape mismatch: declared {self.rows}x{self.cols}"
            )
        for r in self.data:
            for x in r:
                if type(x) is not int:
                    raise LatticeError(f"non-integer entry {x!r}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable[int]], rows: int) -> "IntMatrix":
        cols = [tuple(int(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise LatticeError(f"column {c} does not have length {rows}")
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(rows, len(cols), data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(n, n, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    # -- arithmetic -------------------------------------------------------
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise LatticeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntMatrix(self.rows, other.cols, _mul(self.data, other.data, other.cols))

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise LatticeError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in r) for r in self.data))

    def __pow__(self, n: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise LatticeError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = IntMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def _same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LatticeError("shape mismatch")

    # -- invariants -------------------------------------------------------
    def det(self) -> int:
        if self.rows != self.cols:
            raise LatticeError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.data])

    def rank(self) -> int:
        return len(_hnf_rows([list(r) for r in self.data], self.cols))

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix (raises otherwise)."""
        inv = rational_inverse(self)
        if inv is None or any(x.denominator != 1 for r in inv for x in r):
            raise LatticeError("matrix is not invertible over Z")
        return IntMatrix.from_rows([[int(x) for x in r] for r in inv], self.rows)

    # -- assembly ---------------------------------------------------------
    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        mats = (self,) + others
        if len({m.rows for m in mats}) != 1:
            raise LatticeError("hstack of matrices with different row counts")
        data = tuple(sum((m.data[i] for m in mats), ()) for i in range(self.rows))
        return IntMatrix(self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        mats = (self,) + others
        if len({m.cols for m in mats}) != 1:
            raise LatticeError("vstack of matrices with different column counts")
        return IntMatrix(sum(m.rows for m in mats), self.cols, sum((m.data for m in mats), ()))

    def submatrix(self, rows: Sequence[int] | range, cols: Sequence[int] | range) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.data[i]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(out, cols)


def _mul(a: tuple, b: tuple, bcols: int) -> tuple:
    bt = list(zip(*b)) if b else [()] * bcols
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in a)


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(M: IntMatrix) -> list[list[Fraction]] | None:
    """Inverse over Q by Gauss-Jordan, or None when singular."""
    n = M.rows
    if n != M.cols:
        raise LatticeError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.data)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def rational_solve_matrix(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Return the integer matrix X with A X = B for A of full column rank.

    None when no rational solution exists or the solution is not integral.
    """
    if A.rows != B.rows:
        raise LatticeError("row mismatch in solve")
    cols = []
    for j in range(B.cols):
        x = coordinates(A, B.column(j))
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, A.cols)


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _hnf_rows(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of the row lattice; zero rows dropped.

    Pivots are positive and entries above a pivot lie in [0, pivot).
    """
    a = [r[:] for r in rows if any(r)]
    out_row = 0
    pivots: list[int] = []
    for c in range(ncols):
        if out_row >= len(a):
            break
        while True:
            nz = [i for i in range(out_row, len(a)) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][c]))
            a[out_row], a[best] = a[best], a[out_row]
            if a[out_row][c] < 0:
                a[out_row] = [-x for x in a[out_row]]
            p = a[out_row][c]
            done = True
            for i in range(out_row + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // p
                    if q:
                        ri, ro = a[i], a[out_row]
                        a[i] = [x - q * y for x, y in zip(ri, ro)]
                    if a[i][c]:
                        done = False
            if done:
                break
        if out_row < len(a) and a[out_row][c] != 0:
            p = a[out_row][c]
            for i in range(out_row):
                q = a[i][c] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
            pivots.append(c)
            out_row += 1
            a = a[:out_row] + [r for r in a[out_row:] if any(r)]
    return a[:out_row]


def hermite_basis(gens: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``gens``.

    This is the transpose of the row Hermite form of ``gens.T``, so the
    columns are in echelon form from the top.
    """
    n = gens.rows
    rows = _hnf_rows([list(c) for c in gens.columns()], n)
    return IntMatrix.from_columns(rows, n)


def lattice_equal(a: IntMatrix, b: IntMatrix) -> bool:
    return hermite_basis(a) == hermite_basis(b)


def coordinates(basis: IntMatrix, v: Sequence[int]) -> Vector | None:
    """Integer coordinates of ``v`` in the columns of ``basis`` (full column rank).

    Returns None when ``v`` is not in the lattice.  Works for any basis by
    Gaussian elimination over Q followed by an exactness check.
    """
    n, k = basis.rows, basis.cols
    if len(v) != n:
        raise LatticeError(f"vector of length {len(v)} in a rank-{n} ambient lattice")
    if k == 0:
        return () if all(x == 0 for x in v) else None
    a = [[Fraction(basis.data[i][j]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    r = 0
    where = []
    for c in range(k):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            raise LatticeError("basis matrix does not have full column rank")
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        where.append(r)
        r += 1
    for i in range(r, n):
        if a[i][k] != 0:
            return None
    sol = [a[where[c]][k] for c in range(k)]
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def contains(basis: IntMatrix, v: Sequence[int]) -> bool:
    return coordinates(hermite_basis(basis), v) is not None


def is_sublattice(a: IntMatrix, b: IntMatrix) -> bool:
    """True when every column of ``a`` lies in the lattice spanned by ``b``."""
    hb = hermite_basis(b)
    return all(coordinates(hb, c) is not None for c in a.columns())


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U·M·V = S with U, V unimodular and S diagonal with s1 | s2 | ... ."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial invariant factors in descending order d1, d2, ... ."""
        return tuple(sorted((d for d in self.diagonal if d > 1), reverse=True))


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, ascending divisibility on the diagonal."""
    m, n = M.rows, M.cols
    a = [list(r) for r in M.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst: int, src: int, k: int) -> None:
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, k: int) -> None:
        for r in a:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        while True:
            # choose the smallest nonzero entry of the trailing block as pivot
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            # enforce divisibility of the rest of the block by the pivot
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        if all(a[i][t] == 0 for i in range(t, m)) and all(a[t][j] == 0 for j in range(t, n)):
            # remaining block is zero
            pass
    S = IntMatrix.from_rows(a, n)
    return SmithDecomposition(IntMatrix.from_rows(U, m), S, IntMatrix.from_rows(V, n))


def invariant_factors(M: IntMatrix) -> tuple[int, ...]:
    return smith_normal_form(M).invariant_factors


def is_surjective(M: IntMatrix) -> bool:
    """Whether M: Z^cols -> Z^rows is onto."""
    d = smith_normal_form(M).diagonal
    return M.rows == 0 or (len(d) == M.rows and all(x == 1 for x in d))


def is_injective(M: IntMatrix) -> bool:
    return M.rank() == M.cols


def integer_kernel(M: IntMatrix) -> IntMatrix:
    """Basis (columns, Hermite form) of {x in Z^cols : M x = 0}."""
    snf = smith_normal_form(M)
    r = snf.rank
    V = snf.V
    gens = IntMatrix.from_columns([V.column(j) for j in range(r, M.cols)], M.cols)
    return hermite_basis(gens)


def solve(M: IntMatrix, b: Sequence[int]) -> Vector | None:
    """One integer solution of M x = b, or None."""
    if len(b) != M.rows:
        raise LatticeError("right-hand side has the wrong length")
    snf = smith_normal_form(M)
    c = snf.U.apply(b)
    diag = snf.diagonal
    y = [0] * M.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return snf.V.apply(y)


def right_inverse(M: IntMatrix) -> IntMatrix:
    """A matrix R with M R = I for a surjective M."""
    if not is_surjective(M):
        raise LatticeError("right inverse requested for a non-surjective map")
    cols = [solve(M, tuple(int(i == j) for i in range(M.rows))) for j in range(M.rows)]
    return IntMatrix.from_columns(cols, M.cols)  # type: ignore[arg-type]


def complete_to_unimodular(rows: IntMatrix) -> IntMatrix:
    """Extend a k x n matrix with primitive row lattice to a unimodular n x n matrix.

    The first k rows of the result are exactly ``rows``.
    """
    k, n = rows.rows, rows.cols
    snf = smith_normal_form(rows)
    if snf.diagonal[:k] != (1,) * k or len(snf.diagonal) < k:
        raise LatticeError("rows do not span a primitive sublattice")
    Vinv = snf.V.inverse()
    Uinv = snf.U.inverse()
    top = Uinv @ Vinv.submatrix(range(k), range(n))
    rest = Vinv.submatrix(range(k, n), range(n))
    out = top.vstack(rest) if k < n else top
    return out


# ---------------------------------------------------------------------------
# Adapted bases and quotients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdaptedBasis:
    """Basis x1..xn of Z^n with d1·x1, ..., dn·xn a basis of the sublattice.

    Divisors satisfy d_{i+1} | d_i; free directions carry divisor 0 and come
    first, trivial directions carry 1 and come last.
    """

    basis: IntMatrix
    divisors: tuple[int, ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.divisors if d == 0)


def adapted_basis(kernel_gens: IntMatrix, ambient_rank: int) -> AdaptedBasis:
    if kernel_gens.rows != ambient_rank:
        raise LatticeError(
            f"generators live in Z^{kernel_gens.rows}, expected Z^{ambient_rank}"
        )
    snf = smith_normal_form(kernel_gens)
    n = ambient_rank
    diag = list(snf.diagonal) + [0] * (n - len(snf.diagonal))
    # In y = U x coordinates the sublattice is spanned by diag[i] * e_i; the
    # corresponding basis of Z^n is the columns of U^{-1}.
    Uinv = snf.U.inverse()
    order = sorted(range(n), key=lambda i: (0 if diag[i] == 0 else 1, -diag[i], i))
    basis = IntMatrix.from_columns([Uinv.column(i) for i in order], n)
    return AdaptedBasis(basis, tuple(diag[i] for i in order))


@dataclass(frozen=True)
class Quotient:
    """A surjection Z^n -> Z/m1 + ... + Z/mk where a modulus 0 means a free Z.

    Row i of ``projection`` gives coordinate i of the image; it is read modulo
    ``moduli[i]`` (exactly, when the modulus is 0).  Free coordinates come
    first, then the torsion coordinates in descending divisibility order.
    """

    moduli: tuple[int, ...]
    projection: IntMatrix

    @property
    def ambient_rank(self) -> int:
        return self.projection.cols

    @property
    def free_rank(self) -> int:
        return sum(1 for m in self.moduli if m == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(m for m in self.moduli if m != 0)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise LatticeError("infinite quotient has no finite order")
        out = 1
        for m in self.moduli:
            out *= m
        return out

    def reduce(self, v: Sequence[int]) -> Vector:
        return reduce_mod(v, self.moduli)

    def image(self, x: Sequence[int]) -> Vector:
        return self.reduce(self.projection.apply(x))

    def kernel(self) -> IntMatrix:
        return map_kernel(self.projection, self.moduli)

    def finite(self) -> "FinAbPresentation":
        if not self.is_finite:
            raise LatticeError("quotient has a free part")
        return FinAbPresentation(self.moduli, self.projection.cols, self.projection)


def reduce_mod(v: Sequence[int], moduli: Sequence[int]) -> Vector:
    return tuple(x % m if m else x for x, m in zip(v, moduli))


@dataclass(frozen=True)
class FinAbPresentation:
    """A finite abelian group Z/d1 + ... + Z/ds with a surjection from Z^n."""

    invariant_factors: tuple[int, ...]
    ambient_rank: int
    projection: IntMatrix

    def __post_init__(self) -> None:
        d = self.invariant_factors
        if any(x <= 1 for x in d):
            raise LatticeError(f"invariant factors must exceed 1, got {d}")
        if any(d[i] % d[i + 1] for i in range(len(d) - 1)):
            raise LatticeError(f"invariant factors {d} do not form a divisor chain")
        if len(d) > self.ambient_rank:
            raise LatticeError("more invariant factors than the ambient rank")
        if self.projection.rows != len(d) or self.projection.cols != self.ambient_rank:
            raise LatticeError("projection has the wrong shape")

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.invariant_factors

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def s(self) -> int:
        return len(self.invariant_factors)

    def reduce(self, v: Sequence[int]) -> Vector:
        return reduce_mod(v, self.invariant_factors)

    def image(self, x: Sequence[int]) -> Vector:
        return self.reduce(self.projection.apply(x))

    def kernel(self) -> IntMatrix:
        return map_kernel(self.projection, self.invariant_factors)


def quotient(sub_gens: IntMatrix, ambient_rank: int) -> Quotient:
    """The quotient Z^n / L with an explicit projection matrix."""
    ab = adapted_basis(sub_gens, ambient_rank)
    coords = ab.basis.inverse()
    keep = [i for i, d in enumerate(ab.divisors) if d != 1]
    proj = coords.submatrix(keep, range(ambient_rank))
    moduli = tuple(ab.divisors[i] for i in keep)
    # reduce torsion rows so the projection is tidy
    proj = IntMatrix.from_rows([reduce_mod(r, (m,) * len(r)) if m else r for r, m in zip(proj.data, moduli)], ambient_rank)
    return Quotient(moduli, proj)


def finite_quotient(sub_gens: IntMatrix, ambient_rank: int) -> FinAbPresentation:
    q = quotient(sub_gens, ambient_rank)
    if not q.is_finite:
        raise LatticeError("sublattice does not have finite index")
    return q.finite()


def map_kernel(h: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    """Kernel of x -> h x read modulo ``moduli`` (0 = exact)."""
    s, n = h.rows, h.cols
    D = IntMatrix.diagonal(list(moduli)) if s else IntMatrix.zeros(0, 0)
    big = h.hstack(D) if s else IntMatrix.zeros(0, n)
    ker = integer_kernel(big) if s else IntMatrix.identity(n)
    return hermite_basis(ker.submatrix(range(n), range(ker.cols)))


def map_is_surjective(h: IntMatrix, moduli: Sequence[int]) -> bool:
    """Whether x -> h x (mod moduli) is onto Z/m1 + ... ."""
    if h.rows == 0:
        return True
    return is_surjective(h.hstack(IntMatrix.diagonal(list(moduli))))


def section(h: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    """Columns x_i with h x_i = e_i modulo ``moduli`` for a surjective h."""
    s, n = h.rows, h.cols
    if s == 0:
        return IntMatrix.zeros(n, 0)
    big = h.hstack(IntMatrix.diagonal(list(moduli)))
    cols = []
    for i in range(s):
        x = solve(big, tuple(int(j == i) for j in range(s)))
        if x is None:
            raise LatticeError("map is not surjective")
        cols.append(x[:n])
    return IntMatrix.from_columns(cols, n)


def torsion_order(sub_gens: IntMatrix, ambient_rank: int) -> int:
    out = 1
    for d in quotient(sub_gens, ambient_rank).torsion:
        out *= d
    return out


# ---------------------------------------------------------------------------
# Saturation, annihilators, fiber products
# ---------------------------------------------------------------------------


def _check_ambient(A: IntMatrix, n: int) -> None:
    if A.rows != n:
        raise LatticeError(f"generators live in Z^{A.rows}, expected Z^{n}")


def annihilator(A: IntMatrix, ambient_rank: int) -> IntMatrix:
    """{y : <x, y> = 0 for every column x of A}, under the dot product."""
    _check_ambient(A, ambient_rank)
    if A.cols == 0:
        return IntMatrix.identity(ambient_rank)
    return integer_kernel(A.T)


def saturation(A: IntMatrix, ambient_rank: int) -> IntMatrix:
    """{x : n x lies in the span of A for some n > 0}."""
    _check_ambient(A, ambient_rank)
    if A.cols == 0 or A.is_zero():
        return IntMatrix.zeros(ambient_rank, 0)
    return annihilator(annihilator(A, ambient_rank), ambient_rank)


def lattice_sum(*parts: IntMatrix) -> IntMatrix:
    first = parts[0]
    return hermite_basis(first.hstack(*parts[1:]))


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = a.rows
    if a.cols == 0 or b.cols == 0:
        return IntMatrix.zeros(n, 0)
    ker = integer_kernel(a.hstack(-b))
    return hermite_basis(a @ ker.submatrix(range(a.cols), range(ker.cols)))


@dataclass(frozen=True)
class FiberProduct:
    """Basis of {(x1, x2) : h1 x1 = h2 x2} and the two coordinate projections.

    ``proj1`` and ``proj2`` express the projections to Z^{n1} and Z^{n2} in
    the coordinates of ``basis``.
    """

    basis: IntMatrix
    proj1: IntMatrix
    proj2: IntMatrix


def fiber_product(h1: IntMatrix, h2: IntMatrix, A: FinAbPresentation | Quotient) -> FiberProduct:
    moduli = A.moduli
    if h1.rows != len(moduli) or h2.rows != len(moduli):
        raise LatticeError("maps do not land in the given group")
    if not map_is_surjective(h1, moduli):
        raise LatticeError("h1 is not surjective")
    if not map_is_surjective(h2, moduli):
        raise LatticeError("h2 is not surjective")
    n1, n2 = h1.cols, h2.cols
    combined = h1.hstack(-h2)
    basis = map_kernel(combined, moduli)
    return FiberProduct(
        basis,
        basis.submatrix(range(n1), range(basis.cols)),
        basis.submatrix(range(n1, n1 + n2), range(basis.cols)),
    )


def lattice_index(sub: IntMatrix, ambient_rank: int) -> int:
    """Index of a full-rank sublattice (0 when the rank is deficient)."""
    hb = hermite_basis(sub)
    if hb.cols != ambient_rank:
        return 0
    return abs(hb.det())
