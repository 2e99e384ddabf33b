"""Linear Dirac structures and Dirac maps on V ⊕ V*.

A linear Dirac structure is a Lagrangian subspace E of the doubled space.
Forward/backward images under a linear map A : V -> V' are computed from the
relation  v⊕α ~_A v'⊕α'  iff  v' = Av and α = A*α', both directly (as
subspaces) and through the spinor line (pushforward/pullback), which must
agree whenever the spinor route is nonzero.

For an inner product B on V, the isometry V ⊕ V̄ -> V ⊕ V* sends an
orthogonal map A to

    A^κ = [[(A+I)/2,      (A-I) B^{-1}   ],
           [B (A-I)/4,    B (A+I) B^{-1}/2]]

acting on (vector, covector-coefficient) columns.  A^κ(V) is the graph of
the 2-form  x, y -> -B((I-A)(I+A)^{-1} x, y)/2, which yields the closed-form
pure spinor of an orthogonal map; reflection factorization covers the locus
det(A + I) = 0 and provides the Pin-lift route for sign tracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bilinear import (
    BilinearSpace,
    LagrangianSubspace,
    Subspace,
    column_space_basis,
    nullspace_basis,
)
from .clifford import PinElement, factor_into_reflections
from .multivector import Multivector
from .spinor import (
    DoubledSpace,
    PureSpinor,
    chevalley_pairing,
    null_space,
    pullback,
    rho_contravariant,
    spinor_of_lagrangian,
)

LinearDirac = LagrangianSubspace

__all__ = [
    "LinearDirac",
    "OrthogonalLift",
    "graph_of_two_form",
    "graph_of_bivector",
    "gauge_transform",
    "gauge_transform_spinor",
    "dirac_image",
    "dirac_preimage",
    "is_dirac_map",
    "is_strong_dirac",
    "kappa_embed",
    "spinor_of_orthogonal",
    "phi_of_orthogonal",
    "contraction_by_bivector",
    "pullback_transversality",
    "b_volume_form",
]


# --------------------------------------------------------------------------- #
# graphs and gauge transformations

def graph_of_two_form(doubled: DoubledSpace, omega) -> LinearDirac:
    """Gr_ω = {v ⊕ ω(v,·)} for an antisymmetric matrix ω."""
    m = np.asarray(omega, dtype=float)
    basis = np.vstack([np.eye(doubled.n), m.T])
    return LagrangianSubspace(doubled.space, basis)


def graph_of_bivector_subspace(doubled: DoubledSpace, pi) -> LinearDirac:
    """Gr_π = {π(·,α) ⊕ α} = {(Pa, a)} for an antisymmetric matrix P."""
    p = np.asarray(pi, dtype=float)
    basis = np.vstack([p, np.eye(doubled.n)])
    return LagrangianSubspace(doubled.space, basis)


def contraction_by_bivector(pi_mv: Multivector, phi: Multivector) -> Multivector:
    """ι(π)φ, extending contraction to Λ V so that ι(a ∧ b) = ι(b) ∘ ι(a)."""
    out = Multivector.zero(phi.dim)
    for blade, c in pi_mv.terms.items():
        img = phi
        for idx in blade:  # ι(a) acts first: ι(a ∧ b) = ι(b) ι(a)
            vec = [0.0] * phi.dim
            vec[idx] = 1
            img = img.contract(vec)
        out = out + img.scale(c)
    return out


def graph_of_bivector(doubled: DoubledSpace, pi, mu: Multivector | None = None) -> PureSpinor:
    """Pure spinor e^{-ι(π)} μ whose null space is Gr_π."""
    n = doubled.n
    p = np.asarray(pi, dtype=float)
    if mu is None:
        mu = Multivector.top(n)
    pi_mv = Multivector.from_antisymmetric_matrix(p)
    form = Multivector.zero(n)
    term = mu
    k = 0
    sign = 1
    while term:
        form = form + term.scale(sign * _inv_factorial(k))
        k += 1
        sign = -sign
        term = contraction_by_bivector(pi_mv, term)
        if k > n:
            break
    null, pure = null_space(doubled, form, doubled.space.tol)
    if not pure:
        raise AssertionError("bivector spinor is not pure")
    return PureSpinor(doubled, form, LagrangianSubspace(doubled.space, null.basis, check=False))


def _inv_factorial(k: int) -> float:
    return 1.0 / math.factorial(k)


def gauge_transform(E: LinearDirac, tau) -> LinearDirac:
    """Image of E under v ⊕ α -> v ⊕ (α + ι_v τ) for an antisymmetric matrix τ."""
    n = E.ambient.dim // 2
    t = np.asarray(tau, dtype=float)
    block = np.block([[np.eye(n), np.zeros((n, n))], [t.T, np.eye(n)]])
    return LagrangianSubspace(E.ambient, block @ E.basis, check=False)


def gauge_transform_spinor(doubled: DoubledSpace, phi: Multivector, tau) -> Multivector:
    """Spinor-level gauge transformation e^{-τ} ∧ φ."""
    t = Multivector.from_antisymmetric_matrix(np.asarray(tau, dtype=float))
    return (-t).exp_wedge().wedge(phi)


# --------------------------------------------------------------------------- #
# Dirac maps

def dirac_image(A, E: LinearDirac, doubled_target: DoubledSpace) -> tuple[LinearDirac, bool]:
    """Forward image E' = {w' : ∃ w ∈ E, w ~_A w'} and a strongness flag.

    The subspace formula always produces a Lagrangian; the flag reports
    whether the covariant spinor line pushes forward without dying, which is
    exactly the strong Dirac condition E ∩ (ker A ⊕ 0) = 0.
    """
    a = np.asarray(A, dtype=float)
    n_out, n_in = a.shape
    constraint = np.block([
        [np.eye(n_in), np.zeros((n_in, n_out))],
        [np.zeros((n_in, n_in)), a.T],
    ])
    proj = E.projector()
    k = nullspace_basis((np.eye(2 * n_in) - proj) @ constraint, E.ambient.tol)
    out_map = np.block([
        [a, np.zeros((n_out, n_out))],
        [np.zeros((n_out, n_in)), np.eye(n_out)],
    ])
    basis = column_space_basis(out_map @ k, E.ambient.tol)
    image = LagrangianSubspace(doubled_target.space, basis, check=False)
    if not image.is_lagrangian(1e-7):
        raise AssertionError("forward image of a Lagrangian must be Lagrangian")
    return image, is_strong_dirac(a, E)


def dirac_preimage(A, F_target: LinearDirac, doubled_source: DoubledSpace) -> tuple[LinearDirac, bool]:
    """Backward image F = {w : ∃ w' ∈ F', w ~_A w'} and a pullback-nonzero flag."""
    a = np.asarray(A, dtype=float)
    n_out, n_in = a.shape
    constraint = np.block([
        [a, np.zeros((n_out, n_out))],
        [np.zeros((n_out, n_in)), np.eye(n_out)],
    ])
    proj = F_target.projector()
    k = nullspace_basis((np.eye(2 * n_out) - proj) @ constraint, F_target.ambient.tol)
    out_map = np.block([
        [np.eye(n_in), np.zeros((n_in, n_out))],
        [np.zeros((n_in, n_in)), a.T],
    ])
    basis = column_space_basis(out_map @ k, F_target.ambient.tol)
    pre = LagrangianSubspace(doubled_source.space, basis, check=False)
    if not pre.is_lagrangian(1e-7):
        raise AssertionError("backward image of a Lagrangian must be Lagrangian")
    # pullback of the spinor line dies iff F' ∩ (0 ⊕ ann(ran A)) ≠ 0
    ann = nullspace_basis(a.T, F_target.ambient.tol)
    nonzero = True
    if ann.shape[1]:
        block = np.vstack([np.zeros((n_out, ann.shape[1])), ann])
        inter = F_target.intersection(Subspace(F_target.ambient, block, check_rank=False))
        nonzero = inter.dim == 0
    return pre, nonzero


def is_dirac_map(A, E: LinearDirac, E_target: LinearDirac,
                 doubled_target: DoubledSpace, tol: float = 1e-8) -> bool:
    image, _ = dirac_image(A, E, doubled_target)
    return image.dim == E_target.dim and image.distance(E_target) <= tol


def is_strong_dirac(A, E: LinearDirac, E_target: LinearDirac | None = None,
                    doubled_target: DoubledSpace | None = None, tol: float = 1e-8) -> bool:
    """E ∩ (ker A ⊕ 0) = 0; with a target, also require the image to match."""
    a = np.asarray(A, dtype=float)
    n_in = a.shape[1]
    if E_target is not None:
        if doubled_target is None:
            raise ValueError("doubled_target required when checking the image")
        if not is_dirac_map(a, E, E_target, doubled_target, tol):
            return False
    ker = nullspace_basis(a, E.ambient.tol)
    if ker.shape[1] == 0:
        return True
    block = np.vstack([ker, np.zeros((n_in, ker.shape[1]))])
    inter = E.intersection(Subspace(E.ambient, block, check_rank=False))
    return inter.dim == 0


# --------------------------------------------------------------------------- #
# the orthogonal-map family of Lagrangians and spinors

def kappa_embed(A, B: BilinearSpace) -> np.ndarray:
    """Block matrix of A^κ on V ⊕ V* for A orthogonal with respect to B."""
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    g = B.gram
    defect = np.linalg.norm(a.T @ g @ a - g)
    if defect > 1e-6 * max(1.0, np.linalg.norm(g)):
        raise ValueError(f"matrix is not B-orthogonal (defect {defect:.2e})")
    g_inv = np.linalg.inv(g)
    return np.block([
        [(a + np.eye(n)) / 2, (a - np.eye(n)) @ g_inv],
        [g @ (a - np.eye(n)) / 4, g @ (a + np.eye(n)) @ g_inv / 2],
    ])


@dataclass
class OrthogonalLift:
    """Pure spinor data for an orthogonal map: ψ with N_ψ = A^κ(V).

    ``pin`` holds the Clifford-group lift over Cl(V) when the reflection
    route was taken (the closed form never materializes it); the two
    possible lifts differ exactly by ``sign_choice``.
    """

    A: np.ndarray
    psi: PureSpinor
    sign_choice: int
    method: str  # "closed" or "reflections"
    pin: PinElement | None = None


def _cayley_two_form(a: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Matrix of the 2-form x,y -> B((I-A)(I+A)^{-1} x, y)/2 (exponent of ψ)."""
    n = a.shape[0]
    c = np.linalg.solve((np.eye(n) + a).T, (np.eye(n) - a).T).T  # (I-A)(I+A)^{-1}
    m = -0.5 * g @ c
    return 0.5 * (m - m.T)


def b_volume_form(B: BilinearSpace) -> Multivector:
    """Riemannian volume form sqrt|det B| ε^1 ∧ ... ∧ ε^n of the inner product."""
    return Multivector.top(B.dim, math.sqrt(abs(float(np.linalg.det(B.gram)))))


def _reflection_chain(vectors, B: BilinearSpace, seed: Multivector) -> Multivector:
    """Apply ρ(κ(w ⊕ 0)) for each Pin-normalized reflection vector, right to left."""
    doubled = DoubledSpace(B.dim, B.tol)
    out = seed
    for w in reversed(list(vectors)):
        w = np.asarray(w, dtype=float)
        c = 0.5 * B.pairing(w, w)
        w_hat = w / math.sqrt(abs(c))
        out = rho_contravariant(doubled, np.concatenate([w_hat, 0.5 * (B.gram @ w_hat)]), out)
    return out


def spinor_of_orthogonal(A, B: BilinearSpace, sign: int = 1,
                         method: str = "auto") -> OrthogonalLift:
    """Pure spinor ψ of an orthogonal map, with N_ψ = A^κ(V).

    The closed form |det((A+I)/2)|^{1/2} exp(two-form) is used away from
    det(A+I) = 0; otherwise ψ = ρ(Ã^κ) 1 through a reflection factorization.
    The overall sign is lift-dependent: ``sign`` picks the branch explicitly.
    """
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    det_gate = abs(float(np.linalg.det(a + np.eye(n))))
    if method == "auto":
        method = "closed" if det_gate > 1e3 * B.tol else "reflections"
    doubled = DoubledSpace(n, B.tol)
    pin = None
    if method == "closed":
        if det_gate <= 1e3 * B.tol:
            raise ValueError("det(A+I) too small for the closed form")
        m = _cayley_two_form(a, B.gram)
        scale = math.sqrt(abs(float(np.linalg.det((a + np.eye(n)) / 2))))
        form = Multivector.from_antisymmetric_matrix(m).exp_wedge().scale(sign * scale)
    elif method == "reflections":
        from .clifford import CliffordAlgebra, pin_lift_from_reflections
        vectors = factor_into_reflections(a, B)
        form = _reflection_chain(vectors, B, Multivector.scalar(n, float(sign)))
        pin = pin_lift_from_reflections(CliffordAlgebra(B), vectors)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not form.has_pure_parity():
        raise AssertionError("orthogonal-map spinor has mixed parity")
    null, pure = null_space(doubled, form, B.tol)
    if not pure:
        raise AssertionError("orthogonal-map spinor is not pure")
    expected = Subspace(doubled.space, kappa_embed(a, B)[:, :n], check_rank=False)
    if null.distance(expected) > 1e-6:
        raise AssertionError("null space of ψ does not match A^κ(V)")
    lag = LagrangianSubspace(doubled.space, null.basis, check=False)
    return OrthogonalLift(a, PureSpinor(doubled, form, lag), sign, method, pin)


def phi_of_orthogonal(A, B: BilinearSpace, sign: int = 1) -> PureSpinor:
    """Pure spinor ρ(Ã^κ) μ with null space A^κ(V*), μ the B-volume form."""
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    doubled = DoubledSpace(n, B.tol)
    vectors = factor_into_reflections(a, B)
    form = _reflection_chain(vectors, B, b_volume_form(B).scale(float(sign)))
    null, pure = null_space(doubled, form, B.tol)
    if not pure:
        raise AssertionError("orthogonal-map spinor is not pure")
    expected = Subspace(doubled.space, kappa_embed(a, B)[:, n:], check_rank=False)
    if null.distance(expected) > 1e-6:
        raise AssertionError("null space of φ does not match A^κ(V*)")
    return PureSpinor(doubled, form, LagrangianSubspace(doubled.space, null.basis, check=False))


# --------------------------------------------------------------------------- #
# transversality transport along strong Dirac maps

def pullback_transversality(A, E: LinearDirac, E_target: LinearDirac,
                            psi_target: PureSpinor, doubled_source: DoubledSpace,
                            doubled_target: DoubledSpace) -> PureSpinor:
    """Pull a transverse partner of E' back to a transverse partner of E.

    Requires A to be a strong Dirac map (E, E'); then ψ = A*ψ' is a nonzero
    pure spinor and N_ψ is transverse to E.
    """
    a = np.asarray(A, dtype=float)
    if not is_strong_dirac(a, E, E_target, doubled_target):
        raise ValueError("map is not a strong Dirac map for (E, E')")
    psi = pullback(a, psi_target.form)
    if psi.norm() <= 1e-12:
        raise AssertionError("pullback of the transverse spinor vanished")
    null, pure = null_space(doubled_source, psi, doubled_source.space.tol)
    if not pure:
        raise AssertionError("pullback spinor is not pure")
    phi_e = spinor_of_lagrangian(doubled_source, E)
    if abs(float(chevalley_pairing(phi_e.form, psi))) <= 1e-12:
        raise AssertionError("pullback spinor is not transverse to E")
    return PureSpinor(doubled_source, psi,
                      LagrangianSubspace(doubled_source.space, null.basis, check=False))
