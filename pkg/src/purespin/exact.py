"""Exact linear algebra over the rationals.

Small dense routines on ``list[list[Fraction]]`` matrices, used wherever the
test contracts demand exactness (Clifford relations, fixed-line dimensions,
rank of the spinor representation).  Dimensions stay tiny (< 100), so plain
Gaussian elimination is adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

Mat = list[list[Fraction]]

__all__ = [
    "as_fraction_matrix",
    "identity",
    "mat_mul",
    "mat_vec",
    "transpose",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "random_rational_orthogonal",
]


def as_fraction_matrix(rows: Sequence[Sequence]) -> Mat:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Mat:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Mat) -> Mat:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Mat, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(row) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = Fraction(1, 1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def nullspace(m: Mat) -> list[list[Fraction]]:
    """Basis of the right nullspace, one vector per free column."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a: Mat, b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of a x = b, or None if inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [list(row) + [Fraction(b[i])] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][-1]
    return x


def inverse(a: Mat) -> Mat:
    n = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def random_rational_orthogonal(n: int, rng: np.random.Generator,
                               denominator: int = 7, special: bool | None = None) -> Mat:
    """Exactly orthogonal rational matrix via the Cayley transform.

    A = (I - S)(I + S)^{-1} for a random rational skew matrix S lies in SO(n)
    and satisfies AᵀA = I exactly.  With ``special=False`` one column sign is
    flipped to land in the other component of O(n).
    """
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            val = Fraction(int(rng.integers(-denominator, denominator + 1)), denominator)
            s[i][j] = val
            s[j][i] = -val
    eye = identity(n)
    i_minus = [[eye[i][j] - s[i][j] for j in range(n)] for i in range(n)]
    i_plus = [[eye[i][j] + s[i][j] for j in range(n)] for i in range(n)]
    a = mat_mul(i_minus, inverse(i_plus))
    if special is False:
        for row in a:
            row[0] = -row[0]
    elif special is None and rng.integers(2):
        for row in a:
            row[0] = -row[0]
    return a
