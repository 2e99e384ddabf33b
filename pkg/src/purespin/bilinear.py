"""Bilinear spaces, subspaces, and the Lagrangian Grassmannian of a split form.

A :class:`BilinearSpace` is R^m with a nondegenerate symmetric Gram matrix;
subspaces are stored as basis matrices (columns).  Because bases are not
unique, equality of subspaces is decided by comparing orthogonal projectors
at a tolerance.  Exact (rational) Gram data is carried alongside the float
matrix when available so the Clifford layer can compute exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "BilinearSpace",
    "Subspace",
    "LagrangianSubspace",
    "make_split_space",
    "lagrangian_from_orthogonal",
    "orthogonal_from_lagrangian",
    "transverse",
    "same_component",
    "random_orthogonal",
    "nullspace_basis",
    "column_space_basis",
    "subspace_distance",
]


def nullspace_basis(m: np.ndarray, tol: float = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace, rank cut at tol * max(s_max, scale).

    ``scale`` sets an absolute noise floor so that matrices that are zero up
    to roundoff are treated as zero rather than full rank.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return np.eye(m.shape[1])
    u, s, vh = np.linalg.svd(m)
    cut = tol * max(s[0] if s.size else 0.0, scale)
    r = int(np.sum(s > cut))
    return vh[r:].T


def column_space_basis(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[1] == 0:
        return m
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    cut = tol * (s[0] if s.size else 1.0)
    r = int(np.sum(s > cut))
    return u[:, :r]


def _projector(basis: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]))
    q = column_space_basis(basis)
    return q @ q.T


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator-norm distance between the orthogonal projectors of two spans."""
    diff = _projector(np.atleast_2d(a)) - _projector(np.atleast_2d(b))
    return float(np.linalg.norm(diff, 2)) if diff.size else 0.0


class BilinearSpace:
    """Finite-dimensional real space with a nondegenerate symmetric form."""

    def __init__(self, gram, tol: float = DEFAULT_TOL):
        rows = [list(r) for r in gram]
        self.dim = len(rows)
        self.gram_exact = rows  # entries as given (Fraction/int/float)
        self.gram = np.array([[float(x) for x in r] for r in rows])
        self.tol = tol
        if not np.allclose(self.gram, self.gram.T, atol=tol):
            raise ValueError("Gram matrix must be symmetric")
        if abs(np.linalg.det(self.gram)) < tol:
            raise ValueError("Gram matrix must be nondegenerate")

    def pairing(self, u, v) -> float:
        return float(np.asarray(u, dtype=float) @ self.gram @ np.asarray(v, dtype=float))

    def pairing_exact(self, u: Sequence, v: Sequence):
        return sum(
            u[i] * self.gram_exact[i][j] * v[j]
            for i in range(self.dim)
            for j in range(self.dim)
            if self.gram_exact[i][j] != 0
        )

    def signature(self) -> tuple[int, int]:
        eig = np.linalg.eigvalsh(self.gram)
        return int(np.sum(eig > 0)), int(np.sum(eig < 0))

    @property
    def is_split(self) -> bool:
        p, q = self.signature()
        return p == q

    def is_exact(self) -> bool:
        return all(
            isinstance(x, (int, Fraction)) for row in self.gram_exact for x in row
        )

    def to_json(self) -> dict:
        return {"dim": self.dim, "gram": [[_num_str(x) for x in row] for row in self.gram_exact]}

    def __repr__(self) -> str:  # pragma: no cover
        p, q = self.signature()
        return f"BilinearSpace(dim={self.dim}, signature=({p},{q}))"


def _num_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


class Subspace:
    """Span of the columns of ``basis`` inside a bilinear space."""

    def __init__(self, ambient: BilinearSpace, basis, check_rank: bool = True):
        self.ambient = ambient
        self.basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if self.basis.shape[0] != ambient.dim:
            raise ValueError("basis rows must match ambient dimension")
        if check_rank and self.basis.shape[1]:
            s = np.linalg.svd(self.basis, compute_uv=False)
            if s[-1] <= ambient.tol * s[0]:
                raise ValueError("basis columns are not linearly independent")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return _projector(self.basis)

    def distance(self, other: "Subspace") -> float:
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = self.ambient.tol if tol is None else tol
        return self.dim == other.dim and self.distance(other) <= tol

    def contains(self, vector, tol: float | None = None) -> bool:
        tol = self.ambient.tol if tol is None else tol
        v = np.asarray(vector, dtype=float)
        scale = max(1.0, float(np.linalg.norm(v)))
        return float(np.linalg.norm(self.projector() @ v - v)) <= tol * scale

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient, np.zeros((self.ambient.dim, 0)), check_rank=False)
        stacked = np.hstack([self.basis, -other.basis])
        ker = nullspace_basis(stacked, self.ambient.tol)
        vecs = self.basis @ ker[: self.dim]
        return Subspace(self.ambient, column_space_basis(vecs, self.ambient.tol), check_rank=False)

    def gram_on_basis(self) -> np.ndarray:
        return self.basis.T @ self.ambient.gram @ self.basis

    def is_isotropic(self, tol: float | None = None) -> bool:
        tol = self.ambient.tol if tol is None else tol
        if self.dim == 0:
            return True
        scale = max(1.0, float(np.linalg.norm(self.basis, 2)) ** 2)
        return float(np.abs(self.gram_on_basis()).max()) <= tol * scale

    def is_lagrangian(self, tol: float | None = None) -> bool:
        return self.ambient.dim == 2 * self.dim and self.is_isotropic(tol)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Subspace(dim={self.dim} in {self.ambient.dim})"


class LagrangianSubspace(Subspace):
    """Maximal isotropic subspace: E = E^⊥."""

    def __init__(self, ambient: BilinearSpace, basis, check: bool = True):
        super().__init__(ambient, basis)
        if check and not self.is_lagrangian():
            raise ValueError("subspace is not Lagrangian")


def make_split_space(n: int, tol: float = DEFAULT_TOL) -> BilinearSpace:
    """R^{n,n}: <e_i, e_j> = ±δ_ij with + for i = j <= n, − for i = j > n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gram = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        gram[i][i] = 1
        gram[n + i][n + i] = -1
    return BilinearSpace(gram, tol)


def lagrangian_from_orthogonal(A, space: BilinearSpace | None = None,
                               tol: float = DEFAULT_TOL) -> LagrangianSubspace:
    """E_A = {(Av, v)} in R^{n,n}; Lagrangian exactly when A is orthogonal."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    defect = np.linalg.norm(A.T @ A - np.eye(n))
    if defect > 1000 * tol:
        raise ValueError(f"matrix is not orthogonal (‖AᵀA−I‖ = {defect:.2e})")
    if space is None:
        space = make_split_space(n, tol)
    basis = np.vstack([A, np.eye(n)])
    return LagrangianSubspace(space, basis)


def orthogonal_from_lagrangian(E: Subspace) -> np.ndarray:
    """Recover the unique A with E = E_A (split space, standard basis)."""
    n = E.ambient.dim // 2
    top, bottom = E.basis[:n], E.basis[n:]
    # E cannot meet the definite first factor, so the bottom block is invertible.
    return top @ np.linalg.inv(bottom)


def transverse(E: Subspace, F: Subspace, tol: float | None = None) -> bool:
    tol = E.ambient.tol if tol is None else tol
    if E.dim + F.dim < E.ambient.dim:
        return False
    stacked = np.hstack([E.basis, F.basis])
    s = np.linalg.svd(stacked, compute_uv=False)
    return bool(s[min(E.ambient.dim, E.dim + F.dim) - 1] > tol * s[0]) and E.dim + F.dim == E.ambient.dim


def same_component(E: LagrangianSubspace, F: LagrangianSubspace) -> bool:
    """Same component of the Lagrangian Grassmannian iff n + dim(E∩F) is even."""
    n = E.ambient.dim // 2
    return (n + E.intersection(F).dim) % 2 == 0


def random_orthogonal(n: int, rng: np.random.Generator, special: bool | None = None) -> np.ndarray:
    """Haar-ish random orthogonal matrix from QR of a Gaussian matrix."""
    m = rng.standard_normal((n, n))
    q, r = np.linalg.qr(m)
    q = q @ np.diag(np.sign(np.diag(r)))
    if special is True and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    elif special is False and np.linalg.det(q) > 0:
        q[:, 0] = -q[:, 0]
    return q
