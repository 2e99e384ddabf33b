"""Matrix Lie group models.

A :class:`GroupModel` packages a faithful matrix representation, an ordered
basis of the Lie algebra, and an ad-invariant inner product B.  Group
elements are plain numpy matrices in the representation; the adjoint action,
structure constants and exponential are derived from the representation.

Provided models: su(2) (B = Id from the normalized trace form), so(3)
(same Lie algebra, adjoint action not liftable through the double cover),
su(3) (Gell-Mann basis), the semidirect product of rotations acting on the
dual of their Lie algebra (split B given by the duality pairing), direct
products, and the swap extension Z2 ⋉ (G × G) used to build double spaces.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "GroupModel",
    "su2_model",
    "so3_model",
    "su3_model",
    "coadjoint_semidirect_model",
    "product_model",
    "swap_double_model",
    "get_model",
    "MODEL_BUILDERS",
]


class GroupModel:
    """Matrix Lie group with a fixed Lie algebra basis and invariant form B."""

    def __init__(self, name: str, basis: Sequence[np.ndarray], B, liftable: bool,
                 center_test=None):
        self.name = name
        self.basis = [np.asarray(x) for x in basis]
        self.dim = len(self.basis)
        self.B = np.asarray(B, dtype=float)
        self.B_inv = np.linalg.inv(self.B)
        self.liftable = liftable
        self.center_test = center_test
        rep_dim = self.basis[0].shape[0]
        self.rep_dim = rep_dim
        self._complex = any(np.iscomplexobj(x) for x in self.basis)
        # least-squares projector onto the basis, for coefficient extraction
        cols = []
        for x in self.basis:
            flat = np.asarray(x, dtype=complex).ravel()
            cols.append(np.concatenate([flat.real, flat.imag]))
        self._coeff_pinv = np.linalg.pinv(np.array(cols).T)
        self.structure = self._structure_constants()

    # -- representation-level operations ---------------------------------- #

    def identity(self) -> np.ndarray:
        dtype = complex if self._complex else float
        return np.eye(self.rep_dim, dtype=dtype)

    def mul(self, g, h) -> np.ndarray:
        return g @ h

    def inv(self, g) -> np.ndarray:
        return np.linalg.inv(g)

    def algebra_matrix(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=float)
        out = sum(c * x for c, x in zip(coeffs, self.basis))
        return out

    def coeffs(self, mat) -> np.ndarray:
        flat = np.asarray(mat, dtype=complex).ravel()
        return self._coeff_pinv @ np.concatenate([flat.real, flat.imag])

    def exp(self, coeffs) -> np.ndarray:
        return scipy.linalg.expm(self.algebra_matrix(coeffs))

    def log(self, g) -> np.ndarray:
        return self.coeffs(scipy.linalg.logm(np.asarray(g, dtype=complex)))

    # -- adjoint data ------------------------------------------------------ #

    def Ad(self, g) -> np.ndarray:
        """Matrix of the adjoint action on the basis coordinates."""
        g_inv = self.inv(g)
        cols = [self.coeffs(g @ x @ g_inv) for x in self.basis]
        return np.array(cols).T

    def _structure_constants(self) -> np.ndarray:
        d = self.dim
        c = np.zeros((d, d, d))
        for i in range(d):
            for j in range(d):
                c[i, j] = self.coeffs(self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i])
        return c

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=float),
                         np.asarray(y, dtype=float), self.structure)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x = [x, ·] on coordinates."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self.structure)

    def pairing(self, x, y) -> float:
        return float(np.asarray(x, dtype=float) @ self.B @ np.asarray(y, dtype=float))

    def dexp_frame(self, x) -> np.ndarray:
        """Left-trivialized differential of exp at x: (1 - e^{-ad_x}) / ad_x."""
        ad = self.ad(x)
        d = self.dim
        block = np.zeros((2 * d, 2 * d))
        block[:d, :d] = -ad
        block[:d, d:] = np.eye(d)
        return scipy.linalg.expm(block)[:d, d:]

    # -- sampling ---------------------------------------------------------- #

    def random_algebra(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return scale * rng.standard_normal(self.dim)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.exp(self.random_algebra(rng, scale))

    def element_key(self, g, decimals: int = 9) -> bytes:
        return np.round(np.asarray(g, dtype=complex), decimals).tobytes()

    def __repr__(self) -> str:  # pragma: no cover
        return f"GroupModel({self.name}, dim={self.dim})"


# --------------------------------------------------------------------------- #
# concrete models

_PAULI = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def su2_model() -> GroupModel:
    """SU(2) as 2x2 unitaries; basis X_k = -(i/2) σ_k, B = Id (so [X_i,X_j] = ε_ijk X_k)."""
    basis = [-0.5j * s for s in _PAULI]
    center = lambda g: min(np.linalg.norm(g - np.eye(2)), np.linalg.norm(g + np.eye(2))) < 1e-9
    return GroupModel("su2", basis, np.eye(3), liftable=True, center_test=center)


def so3_model() -> GroupModel:
    """SO(3) rotations; adjoint action does not lift through the double cover."""
    l1 = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    l2 = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    l3 = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    center = lambda g: np.linalg.norm(g - np.eye(3)) < 1e-9
    return GroupModel("so3", [l1, l2, l3], np.eye(3), liftable=False, center_test=center)


_GELL_MANN = [
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
    np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
    np.array([[1, 0, 0], [0, 1, 0], [0, 0, -2]], dtype=complex) / np.sqrt(3),
]


def su3_model() -> GroupModel:
    """SU(3); basis X_a = -(i/2) λ_a normalized so that B = Id."""
    basis = [-0.5j * lam for lam in _GELL_MANN]
    return GroupModel("su3", basis, np.eye(8), liftable=True)


def coadjoint_semidirect_model() -> GroupModel:
    """Rotations acting on the dual of their algebra: elements [[R, w], [0, 1]].

    Basis order (P_1..P_3, J_1..J_3); B is the duality pairing, a split form
    [[0, I], [I, 0]].  The double cover of the rotation factor is invisible
    to everything adjoint-level, which is all this model is used for.
    """
    so3 = so3_model()
    basis = []
    for i in range(3):
        p = np.zeros((4, 4))
        p[i, 3] = 1.0
        basis.append(p)
    for l in so3.basis:
        j = np.zeros((4, 4))
        j[:3, :3] = l
        basis.append(j)
    B = np.zeros((6, 6))
    B[:3, 3:] = np.eye(3)
    B[3:, :3] = np.eye(3)
    return GroupModel("coadjoint-semidirect", basis, B, liftable=True)


def product_model(m1: GroupModel, m2: GroupModel, name: str | None = None) -> GroupModel:
    """Direct product with block-diagonal representation and B = B1 ⊕ B2."""
    r1, r2 = m1.rep_dim, m2.rep_dim
    basis = []
    for x in m1.basis:
        b = np.zeros((r1 + r2, r1 + r2), dtype=complex)
        b[:r1, :r1] = x
        basis.append(b)
    for x in m2.basis:
        b = np.zeros((r1 + r2, r1 + r2), dtype=complex)
        b[r1:, r1:] = x
        basis.append(b)
    B = np.zeros((m1.dim + m2.dim, m1.dim + m2.dim))
    B[:m1.dim, :m1.dim] = m1.B
    B[m1.dim:, m1.dim:] = m2.B
    model = GroupModel(name or f"{m1.name}x{m2.name}", basis, B,
                       liftable=m1.liftable and m2.liftable)
    model.factors = (m1, m2)  # type: ignore[attr-defined]
    return model


class SwapDoubleModel(GroupModel):
    """Z2 ⋉ (G × G): pairs with an optional swap, as block matrices.

    (1, (g1, g2)) -> [[g1, 0], [0, g2]]; (σ, (g1, g2)) -> [[0, g1], [g2, 0]].
    The group law of the semidirect product is plain matrix multiplication.
    """

    def __init__(self, base: GroupModel):
        r = base.rep_dim
        basis = []
        for x in base.basis:
            b = np.zeros((2 * r, 2 * r), dtype=complex)
            b[:r, :r] = x
            basis.append(b)
        for x in base.basis:
            b = np.zeros((2 * r, 2 * r), dtype=complex)
            b[r:, r:] = x
            basis.append(b)
        B = np.zeros((2 * base.dim, 2 * base.dim))
        B[:base.dim, :base.dim] = base.B
        B[base.dim:, base.dim:] = base.B
        super().__init__(f"z2wr-{base.name}", basis, B, liftable=base.liftable)
        self.base = base

    def pair(self, g1, g2, swap: bool = False) -> np.ndarray:
        r = self.base.rep_dim
        out = np.zeros((2 * r, 2 * r), dtype=complex)
        if swap:
            out[:r, r:] = g1
            out[r:, :r] = g2
        else:
            out[:r, :r] = g1
            out[r:, r:] = g2
        return out

    def blocks(self, g) -> tuple[np.ndarray, np.ndarray, bool]:
        """Return (g1, g2, swapped) for an element of either component."""
        r = self.base.rep_dim
        g = np.asarray(g)
        diag_mass = np.linalg.norm(g[:r, :r]) + np.linalg.norm(g[r:, r:])
        off_mass = np.linalg.norm(g[:r, r:]) + np.linalg.norm(g[r:, :r])
        if diag_mass >= off_mass:
            return g[:r, :r], g[r:, r:], False
        return g[:r, r:], g[r:, :r], True


def swap_double_model(base: GroupModel) -> SwapDoubleModel:
    return SwapDoubleModel(base)


MODEL_BUILDERS = {
    "su2": su2_model,
    "so3": so3_model,
    "su3": su3_model,
    "coadjoint-semidirect": coadjoint_semidirect_model,
}


def get_model(name: str) -> GroupModel:
    try:
        return MODEL_BUILDERS[name]()
    except KeyError:
        raise ValueError(f"unknown group model {name!r}; known: {sorted(MODEL_BUILDERS)}")
