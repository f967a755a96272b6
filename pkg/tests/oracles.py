"""Brute-force reference computations used to check the library.

Nothing here calls the normal-form code in ``rdk.zlattice``: group structure
comes from enumerating cosets, Smith invariants from gcds of minors, and
tameness from a search over matrices modulo the exponent of A.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd, prod


# ---------------------------------------------------------------------------
# Rational linear algebra on plain lists
# ---------------------------------------------------------------------------


def det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        out *= A[c][c]
        for r in range(c + 1, n):
            k = A[r][c] / A[c][c]
            for j in range(c, n):
                A[r][j] -= k * A[c][j]
    return int(sign * out)


def solve_rational(cols: list[tuple[int, ...]], v: tuple[int, ...]) -> list[Fraction] | None:
    """Coefficients c with sum c_i cols_i = v, for linearly independent cols."""
    n, k = len(v), len(cols)
    A = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    row = 0
    pivots = []
    for c in range(k):
        piv = next((r for r in range(row, n) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        pv = A[row][c]
        A[row] = [x / pv for x in A[row]]
        for r in range(n):
            if r != row and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[row])]
        pivots.append(c)
        row += 1
    if any(A[r][k] != 0 for r in range(row, n)):
        return None
    out = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        out[c] = A[r][k]
    return out


def in_lattice(cols: list[tuple[int, ...]], v: tuple[int, ...]) -> bool:
    """Membership in the lattice spanned by independent columns."""
    if not cols:
        return not any(v)
    c = solve_rational(cols, v)
    return c is not None and all(x.denominator == 1 for x in c)


# ---------------------------------------------------------------------------
# Smith invariants from minors
# ---------------------------------------------------------------------------


def determinantal_divisors(M: list[list[int]]) -> list[int]:
    """gcd of all k×k minors for k = 1, 2, ... while nonzero."""
    m = len(M)
    n = len(M[0]) if m else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, det([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def smith_diagonal(M: list[list[int]]) -> list[int]:
    """Ascending nonzero Smith diagonal: d_k = D_k / D_{k-1}."""
    D = determinantal_divisors(M)
    prev = 1
    out = []
    for d in D:
        out.append(d // prev)
        prev = d
    return out


# ---------------------------------------------------------------------------
# Finite quotients by coset enumeration
# ---------------------------------------------------------------------------


def coset_elements(cols: list[tuple[int, ...]], n: int, limit: int = 2000) -> list[tuple[int, ...]]:
    """Representatives of Z^n / L for L of full rank, by breadth-first search."""
    reps: list[tuple[int, ...]] = [tuple([0] * n)]
    frontier = list(reps)
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(n):
                y = tuple(x[j] + (j == i) for j in range(n))
                if not any(in_lattice(cols, tuple(a - b for a, b in zip(y, r))) for r in reps):
                    reps.append(y)
                    nxt.append(y)
                    if len(reps) > limit:
                        raise ValueError("quotient too large for the oracle")
        frontier = nxt
    return reps


def _divisor_chains(N: int, smallest: int = 2):
    """All chains d1 | d2 | ... with product N, listed ascending, entries > 1."""
    if N == 1:
        yield ()
        return
    for d in range(smallest, N + 1):
        if N % d == 0:
            for rest in _divisor_chains(N // d, d):
                if all(r % d == 0 for r in rest):
                    yield (d,) + rest


def _torsion_counts(chain: tuple[int, ...], N: int) -> list[int]:
    return [prod(gcd(k, d) for d in chain) for k in range(1, N + 1)]


def group_structure(cols: list[tuple[int, ...]], n: int) -> tuple[int, ...]:
    """Invariant factors (descending) of Z^n / L, from element orders alone."""
    reps = coset_elements(cols, n)
    N = len(reps)

    def killed_by(k: int, x) -> bool:
        return in_lattice(cols, tuple(k * a for a in x))

    counts = [sum(killed_by(k, x) for x in reps) for k in range(1, N + 1)]
    matches = [c for c in _divisor_chains(N) if _torsion_counts(c, N) == counts]
    assert len(matches) == 1, matches
    return tuple(sorted(matches[0], reverse=True))


# ---------------------------------------------------------------------------
# Automorphisms of Z/d1 + ... + Z/ds
# ---------------------------------------------------------------------------


def group_elements(d: tuple[int, ...]) -> list[tuple[int, ...]]:
    return list(itertools.product(*[range(x) for x in d]))


def count_automorphisms(d: tuple[int, ...]) -> int:
    """Images of the standard generators that give a bijective homomorphism."""
    els = group_elements(d)
    # a generator of order d_i must go to an element killed by d_i
    choices = [[e for e in els if all((d[i] * c) % dj == 0 for c, dj in zip(e, d))] for i in range(len(d))]
    count = 0
    for imgs in itertools.product(*choices):
        image = set()
        for x in els:
            y = tuple(sum(x[i] * imgs[i][j] for i in range(len(d))) % d[j] for j in range(len(d)))
            image.add(y)
        if len(image) == len(els):
            count += 1
    return count


def tame_by_search(P: list[list[int]], d: tuple[int, ...], r: int) -> bool:
    """Whether ψ (matrix P on A) lifts along f = [I_s | 0]: Z^r -> A.

    f∘M = ψ∘f for some M in GL_r(Z).  Because SL_r(Z) -> SL_r(Z/N) is onto,
    it suffices to find M modulo N = d1 with det M ≡ ±1 (mod N) and the
    first s rows of M acting correctly on A.
    """
    s = len(d)
    N = d[0] if d else 1
    if N == 1:
        return True
    for entries in itertools.product(range(N), repeat=r * r):
        M = [list(entries[i * r : (i + 1) * r]) for i in range(r)]
        dm = det(M) % N
        if dm not in (1, N - 1):
            continue
        ok = True
        # f(M e_j) = ψ(f(e_j)): the first s coordinates of column j
        for j in range(r):
            fj = [1 if (i == j) else 0 for i in range(s)]
            lhs = [M[i][j] % d[i] for i in range(s)]
            rhs = [sum(P[i][k] * fj[k] for k in range(s)) % d[i] for i in range(s)]
            if lhs != rhs:
                ok = False
                break
        if ok:
            return True
    return False


def double_coset_count(elements, left, right, mul) -> int:
    """Orbits of H_L × H_R on ``elements`` acting by (a, b)·x = a x b."""
    seen = set()
    count = 0
    for x in elements:
        if x in seen:
            continue
        count += 1
        stack = [x]
        seen.add(x)
        while stack:
            y = stack.pop()
            for a in left:
                for b in right:
                    z = mul(mul(a, y), b)
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
    return count


def fiber_points(h1, h2, d, n1: int, n2: int, box: int):
    """Points (x1, x2) in [-box, box]^(n1+n2) with h1(x1) ≡ h2(x2) mod d."""
    for v in itertools.product(range(-box, box + 1), repeat=n1 + n2):
        x1, x2 = v[:n1], v[n1:]
        a = [sum(h1[i][j] * x1[j] for j in range(n1)) for i in range(len(d))]
        b = [sum(h2[i][j] * x2[j] for j in range(n2)) for i in range(len(d))]
        if all((u - w) % m == 0 for u, w, m in zip(a, b, d)):
            yield v


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)
