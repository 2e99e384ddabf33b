"""Spinor modules of the doubled space V ⊕ V*.

The doubled space carries the pairing form <v⊕α, v'⊕α'> = α(v') + α'(v),
which is split of signature (n, n) with V and V* as distinguished
Lagrangians.  The contravariant module is Λ V* with

    ρ(v ⊕ α) φ = ι(v) φ + α ∧ φ,

which satisfies ρ(w)ρ(w') + ρ(w')ρ(w) = <w, w'> id on the nose (no extra
factor of two with this pairing); the covariant module Λ V swaps the roles
of V and V*.  Coordinates: indices 0..n-1 are V, indices n..2n-1 are V*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import exact
from .bilinear import (
    BilinearSpace,
    LagrangianSubspace,
    Subspace,
    column_space_basis,
    nullspace_basis,
)
from .multivector import Multivector

__all__ = [
    "DoubledSpace",
    "PureSpinor",
    "rho_contravariant",
    "rho_covariant",
    "null_space",
    "null_space_covariant",
    "spinor_of_lagrangian",
    "covariant_spinor_of_lagrangian",
    "graph_two_form_of",
    "chevalley_pairing",
    "transversality_by_pairing",
    "pushforward",
    "pullback",
    "star_to_covariant",
    "fixed_line_dimension",
    "decompose_pure_spinor",
]


class DoubledSpace:
    """V ⊕ V* with the canonical split pairing."""

    def __init__(self, n: int, tol: float = 1e-9):
        self.n = n
        gram = [[0] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            gram[i][n + i] = 1
            gram[n + i][i] = 1
        self.space = BilinearSpace(gram, tol)
        self.form_blades = [
            b for k in range(n + 1) for b in combinations(range(n), k)
        ]
        self._blade_index = {b: i for i, b in enumerate(self.form_blades)}

    def w(self, v, a) -> np.ndarray:
        return np.concatenate([np.asarray(v, dtype=float), np.asarray(a, dtype=float)])

    def split(self, w):
        w = np.asarray(w, dtype=float)
        return w[: self.n], w[self.n:]

    def v_subspace(self) -> LagrangianSubspace:
        basis = np.vstack([np.eye(self.n), np.zeros((self.n, self.n))])
        return LagrangianSubspace(self.space, basis)

    def v_star_subspace(self) -> LagrangianSubspace:
        basis = np.vstack([np.zeros((self.n, self.n)), np.eye(self.n)])
        return LagrangianSubspace(self.space, basis)

    def swap_matrix(self) -> np.ndarray:
        """Isometry V ⊕ V* -> V* ⊕ V exchanging the two blocks."""
        z = np.zeros((self.n, self.n))
        eye = np.eye(self.n)
        return np.block([[z, eye], [eye, z]])

    # matrices of ρ in the blade basis of Λ V* -------------------------- #

    def rho_matrix(self, w, exact_entries: bool = False):
        """Matrix of ρ(w) on Λ V* in the blade basis (contravariant action)."""
        n_blades = len(self.form_blades)
        v, a = (list(w[: self.n]), list(w[self.n:]))
        if exact_entries:
            m = [[Fraction(0)] * n_blades for _ in range(n_blades)]
        else:
            m = np.zeros((n_blades, n_blades))
        for j, blade in enumerate(self.form_blades):
            img = rho_contravariant(self, list(v) + list(a), Multivector(self.n, {blade: 1}))
            for b, c in img.terms.items():
                i = self._blade_index[b]
                if exact_entries:
                    m[i][j] = Fraction(c)
                else:
                    m[i][j] = float(c)
        return m

    def rho_word_matrix(self, indices, exact_entries: bool = False):
        """Matrix of ρ(w_{i1}) ρ(w_{i2}) ... for generator indices of the doubled space."""
        n_blades = len(self.form_blades)
        if exact_entries:
            acc = exact.identity(n_blades)
            for idx in indices:
                gen = [Fraction(int(k == idx)) for k in range(2 * self.n)]
                acc = exact.mat_mul(self.rho_matrix(gen, exact_entries=True), acc)
            return acc
        acc = np.eye(n_blades)
        for idx in indices:
            gen = np.eye(2 * self.n)[idx]
            acc = self.rho_matrix(gen) @ acc
        return acc


def rho_contravariant(doubled: DoubledSpace, w, phi: Multivector) -> Multivector:
    """ρ(v ⊕ α) φ = ι(v) φ + α ∧ φ on forms φ ∈ Λ V*."""
    v = list(w[: doubled.n])
    a = list(w[doubled.n:])
    out = phi.contract(v)
    alpha = Multivector.from_vector(a)
    if alpha:
        out = out + alpha.wedge(phi)
    return out


def rho_covariant(doubled: DoubledSpace, w, chi: Multivector) -> Multivector:
    """ρ(v ⊕ α) χ = ι(α) χ + v ∧ χ on multivectors χ ∈ Λ V."""
    v = list(w[: doubled.n])
    a = list(w[doubled.n:])
    out = chi.contract(a)
    vec = Multivector.from_vector(v)
    if vec:
        out = out + vec.wedge(chi)
    return out


@dataclass
class PureSpinor:
    """A spinor with Lagrangian null space, cached."""

    doubled: DoubledSpace
    form: Multivector
    null: LagrangianSubspace

    @property
    def parity(self) -> int:
        return self.form.min_grade() % 2

    def pairing_with(self, other: "PureSpinor"):
        return chevalley_pairing(self.form, other.form)

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "null_basis": self.null.basis.tolist()}


def _spinor_action_matrix(doubled: DoubledSpace, phi: Multivector, covariant: bool):
    """Columns ρ(w_k) φ over the generator basis of the doubled space, stacked."""
    n2 = 2 * doubled.n
    rows = len(doubled.form_blades)
    action = rho_covariant if covariant else rho_contravariant
    exact_ok = all(isinstance(c, (int, Fraction)) for c in phi.terms.values())
    cols = []
    for k in range(n2):
        gen = [0.0] * n2
        gen[k] = 1
        img = action(doubled, gen, phi)
        cols.append(img)
    if exact_ok:
        m = [[Fraction(0)] * n2 for _ in range(rows)]
        for k, img in enumerate(cols):
            for b, c in img.terms.items():
                m[doubled._blade_index[b]][k] = Fraction(c)
        return m, True
    m = np.zeros((rows, n2))
    for k, img in enumerate(cols):
        for b, c in img.terms.items():
            m[doubled._blade_index[b], k] = float(c)
    return m, False


def _null_space(doubled: DoubledSpace, phi: Multivector, covariant: bool,
                tol: float, gap: float, diagnostics: bool):
    if not phi:
        raise ValueError("null space of the zero spinor is undefined")
    m, exact_path = _spinor_action_matrix(doubled, phi, covariant)
    diag = {"exact": exact_path, "gap_ratio": math.inf, "gap_ok": True}
    if exact_path:
        basis_vecs = exact.nullspace(m)
        basis = (
            np.array([[float(x) for x in vec] for vec in basis_vecs]).T
            if basis_vecs else np.zeros((2 * doubled.n, 0))
        )
    else:
        u, s, vh = np.linalg.svd(m) if m.size else (None, np.zeros(0), None)
        cut = tol * (s[0] if s.size else 1.0)
        r = int(np.sum(s > cut))
        # the dimension decision is trusted when retained and discarded
        # singular values are separated by a large spectral gap
        if 0 < r < len(s):
            diag["gap_ratio"] = float(s[r - 1] / max(s[r], 1e-300))
            diag["gap_ok"] = diag["gap_ratio"] > gap
        basis = vh[r:].T
    sub = Subspace(doubled.space, basis, check_rank=False)
    is_pure = sub.dim == doubled.n
    if sub.dim and not sub.is_isotropic(1e-7):
        raise AssertionError("null space of a nonzero spinor must be isotropic")
    if diagnostics:
        return sub, is_pure, diag
    return sub, is_pure


def null_space(doubled: DoubledSpace, phi: Multivector, tol: float = 1e-9,
               gap: float = 1e6, diagnostics: bool = False):
    """Null space {w : ρ(w)φ = 0} of a contravariant spinor and a purity flag.

    With ``diagnostics`` the spectral-gap report backing the float-path
    dimension decision is returned as a third value.
    """
    return _null_space(doubled, phi, covariant=False, tol=tol, gap=gap,
                       diagnostics=diagnostics)


def null_space_covariant(doubled: DoubledSpace, chi: Multivector, tol: float = 1e-9,
                         gap: float = 1e6, diagnostics: bool = False):
    return _null_space(doubled, chi, covariant=True, tol=tol, gap=gap,
                       diagnostics=diagnostics)


def graph_two_form_of(E: LagrangianSubspace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Range, induced 2-form, and kernel of a Lagrangian E ⊂ V ⊕ V*.

    Returns (S, omega_S, kernel): S an n×r basis of the range in V, omega_S
    the r×r matrix ω_S(s_i, s_j) = α_i(s_j) for lifts s_i ⊕ α_i ∈ E, and
    kernel a basis of {v : (v, 0) ∈ E}.
    """
    n = E.ambient.dim // 2
    top = E.basis[:n]
    bottom = E.basis[n:]
    s_basis = column_space_basis(top, E.ambient.tol)
    r = s_basis.shape[1]
    omega = np.zeros((r, r))
    for i in range(r):
        coeffs, *_ = np.linalg.lstsq(top, s_basis[:, i], rcond=None)
        alpha = bottom @ coeffs
        for j in range(r):
            omega[i, j] = alpha @ s_basis[:, j]
    omega = 0.5 * (omega - omega.T)  # kill numerical symmetric residue
    ker_coeffs = nullspace_basis(bottom, E.ambient.tol)
    kernel = column_space_basis(top @ ker_coeffs, E.ambient.tol) if ker_coeffs.size else np.zeros((n, 0))
    return s_basis, omega, kernel


def spinor_of_lagrangian(doubled: DoubledSpace, E: LagrangianSubspace,
                         orientation: Multivector | None = None) -> PureSpinor:
    """Contravariant pure spinor e^{-ω_S} ∧ μ with null space E.

    μ is a volume element on the annihilator of ran(E); ``orientation`` may
    supply it (a form of top degree on ann(ran E)), otherwise an orthonormal
    choice is made.  The result depends on that choice only by scale.
    """
    n = doubled.n
    s_basis, omega_s, _ = graph_two_form_of(E)
    r = s_basis.shape[1]
    # extend ω_S to V through the pseudo-inverse of the range basis
    if r:
        pinv = np.linalg.pinv(s_basis)
        omega_full = pinv.T @ omega_s @ pinv
    else:
        omega_full = np.zeros((n, n))
    two_form = Multivector.from_antisymmetric_matrix(omega_full)
    ann = nullspace_basis(s_basis.T, doubled.space.tol) if r else np.eye(n)
    if orientation is None:
        mu = Multivector.scalar(n)
        for col in range(ann.shape[1]):
            mu = mu.wedge(Multivector.from_vector(ann[:, col]))
    else:
        mu = orientation
    form = (-two_form).exp_wedge().wedge(mu)
    if not form.has_pure_parity():
        raise AssertionError("constructed spinor has mixed parity")
    null, pure = null_space(doubled, form, doubled.space.tol)
    if not pure:
        raise AssertionError("constructed spinor is not pure")
    lag = LagrangianSubspace(doubled.space, null.basis, check=False)
    return PureSpinor(doubled, form, lag)


def covariant_spinor_of_lagrangian(doubled: DoubledSpace, E: LagrangianSubspace) -> Multivector:
    """Covariant pure spinor χ ∈ Λ V with null space E (roles of V, V* swapped)."""
    swapped = LagrangianSubspace(doubled.space, doubled.swap_matrix() @ E.basis, check=False)
    return spinor_of_lagrangian(doubled, swapped).form


def chevalley_pairing(phi: Multivector, psi: Multivector):
    """Top coefficient of φ^T ∧ ψ in the standard trivialization of the pairing line."""
    return phi.transpose_sign().wedge(psi).top_coefficient()


def transversality_by_pairing(phi: PureSpinor, psi: PureSpinor, threshold: float = 1e-8) -> bool:
    return abs(float(chevalley_pairing(phi.form, psi.form))) > threshold


def pushforward(matrix, chi: Multivector) -> Multivector:
    """A_* on Λ V for the linear map V -> V' with matrix (dim V', dim V)."""
    return chi.pushforward(matrix)


def pullback(matrix, phi: Multivector) -> Multivector:
    """A* on Λ V'* for the linear map V -> V' with matrix (dim V', dim V)."""
    return phi.pullback(matrix)


def star_to_covariant(phi: Multivector) -> Multivector:
    """Star duality Λ V* -> Λ V against the standard basis volume form."""
    n = phi.dim
    out = {}
    full = tuple(range(n))
    for blade, c in phi.terms.items():
        comp = tuple(i for i in full if i not in blade)
        # sign of the shuffle (blade, comp) relative to the volume order
        perm = list(blade) + list(comp)
        sign = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    sign = -sign
        out[comp] = out.get(comp, 0) + sign * c
    return Multivector(n, out)


def fixed_line_dimension(doubled: DoubledSpace, E: LagrangianSubspace,
                         exact_basis=None) -> int:
    """Dimension of {φ ∈ Λ V* : ρ(w)φ = 0 for all w ∈ E}.

    With ``exact_basis`` (columns over the rationals) the computation is
    exact; otherwise SVD at the space tolerance.
    """
    rows = []
    nb = len(doubled.form_blades)
    if exact_basis is not None:
        stacked: list[list[Fraction]] = []
        for w in exact_basis:
            op_rows = [[Fraction(0)] * nb for _ in range(nb)]
            for j, blade in enumerate(doubled.form_blades):
                img = rho_contravariant(doubled, w, Multivector(doubled.n, {blade: 1}))
                for b, c in img.terms.items():
                    op_rows[doubled._blade_index[b]][j] = Fraction(c)
            stacked.extend(op_rows)
        return len(exact.nullspace(stacked))
    for k in range(E.dim):
        w = E.basis[:, k]
        op = np.zeros((nb, nb))
        for j, blade in enumerate(doubled.form_blades):
            img = rho_contravariant(doubled, w, Multivector(doubled.n, {blade: 1}))
            for b, c in img.terms.items():
                op[doubled._blade_index[b], j] = float(c)
        rows.append(op)
    stacked_np = np.vstack(rows)
    s = np.linalg.svd(stacked_np, compute_uv=False)
    cut = doubled.space.tol * (s[0] if s.size else 1.0)
    return int(nb - np.sum(s > cut))


def decompose_pure_spinor(doubled: DoubledSpace, phi: Multivector,
                          tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray, Multivector]:
    """Write a contravariant pure spinor as e^{-ω} ∧ μ.

    Returns (S, omega_S, mu): the range basis of N_φ, the induced 2-form on
    it, and the annihilator volume factor μ scaled so that the round trip
    e^{-ω} ∧ μ reproduces φ.
    """
    null, pure = null_space(doubled, phi, tol)
    if not pure:
        raise ValueError("spinor is not pure")
    E = LagrangianSubspace(doubled.space, null.basis, check=False)
    s_basis, omega_s, _ = graph_two_form_of(E)
    rebuilt = spinor_of_lagrangian(doubled, E)
    # match scale on the lowest-degree blade present
    blade = min(rebuilt.form.terms, key=lambda b: (len(b), b))
    scale = phi.terms.get(blade, 0) / rebuilt.form.terms[blade]
    k = s_basis.shape[1]
    ann = nullspace_basis(s_basis.T, tol) if k else np.eye(doubled.n)
    mu = Multivector.scalar(doubled.n, scale)
    for col in range(ann.shape[1]):
        mu = mu.wedge(Multivector.from_vector(ann[:, col]))
    return s_basis, omega_s, mu
