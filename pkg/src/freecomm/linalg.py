"""Small exact linear algebra: integer determinants and row reduction mod p."""

from __future__ import annotations

from itertools import product
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def det_bareiss(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref_mod_p(rows: Sequence[Sequence[int]], p: int, ncols: int) -> Tuple[Tuple[int, ...], ...]:
    """Reduced row echelon form over GF(p) with zero rows dropped."""
    a = [[x % p for x in r] for r in rows]
    out: list[list[int]] = []
    col = 0
    while a and col < ncols:
        piv = next((r for r in a if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        a.remove(piv)
        inv = pow(piv[col], -1, p)
        piv = [(x * inv) % p for x in piv]
        a = [[(x - r[col] * y) % p for x, y in zip(r, piv)] for r in a]
        out = [[(x - r[col] * y) % p for x, y in zip(r, piv)] for r in out]
        out.append(piv)
        a = [r for r in a if any(r)]
        col += 1
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x), reverse=False)
    return tuple(tuple(r) for r in out)


def nullspace_mod_p(rows: Sequence[Sequence[int]], p: int, ncols: int) -> List[Tuple[int, ...]]:
    """Basis of ``{t : r . t = 0 for every row r}`` over GF(p)."""
    red = rref_mod_p(rows, p, ncols)
    pivots = [next(i for i, x in enumerate(r) if x) for r in red]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        t = [0] * ncols
        t[f] = 1
        for r, pc in zip(red, pivots):
            t[pc] = (-r[f]) % p
        basis.append(tuple(t))
    return basis


def normalized(t: Sequence[int], p: int) -> Tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    lead = next(x for x in t if x % p)
    inv = pow(lead, -1, p)
    return tuple((x * inv) % p for x in t)


def projective_points(basis: Sequence[Sequence[int]], p: int, ncols: int) -> List[Tuple[int, ...]]:
    """All normalized nonzero vectors of a subspace, in lexicographic order."""
    pts = set()
    for coeffs in product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        v = [0] * ncols
        for c, b in zip(coeffs, basis):
            if c:
                for i, x in enumerate(b):
                    v[i] = (v[i] + c * x) % p
        pts.add(normalized(v, p))
    return sorted(pts)


def mat_mul_mod(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> Matrix:
    return [[sum(x * y for x, y in zip(row, col)) % p for col in zip(*b)] for row in a]


def span_contains(red: Sequence[Sequence[int]], v: Sequence[int], p: int) -> bool:
    ncols = len(v)
    return len(rref_mod_p(list(red) + [list(v)], p, ncols)) == len(red)


def intersect_subspaces(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int, ncols: int) -> Tuple[Tuple[int, ...], ...]:
    """Intersection of two row spaces over GF(p)."""
    if not a or not b:
        return ()
    # solve x.A = y.B via the null space of [A; -B]^T
    rows = [list(r) for r in a] + [[(-x) % p for x in r] for r in b]
    # columns of the system are the coordinates; unknowns are the row coefficients
    system = [[rows[k][c] for k in range(len(rows))] for c in range(ncols)]
    sols = nullspace_mod_p(system, p, len(rows))
    vecs = []
    for s in sols:
        v = [0] * ncols
        for k in range(len(a)):
            if s[k]:
                for c in range(ncols):
                    v[c] = (v[c] + s[k] * a[k][c]) % p
        vecs.append(v)
    return rref_mod_p(vecs, p, ncols)
