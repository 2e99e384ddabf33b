"""Pointwise verification of group-valued moment map structures.

A q-Hamiltonian space is represented by samples: at a point x of the carrier
manifold we keep a tangent frame (abstractly: its size m), the 2-form matrix
on the frame, the moment value Φ(x), the left-trivialized moment
differential, and the action map sending Lie algebra elements to frame
coordinates of their generating vectors.  Every axiom checked here is linear
algebra at the point plus first derivatives, so no atlas machinery is
needed; model spaces (conjugacy classes, the double and fused double built
by fusion from the swap extension, exponentials of coadjoint orbits) are
provided as closures producing such records at arbitrary points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bilinear import column_space_basis, nullspace_basis, subspace_distance
from .dirac import (
    dirac_image,
    gauge_transform,
    graph_of_bivector_subspace,
    graph_of_two_form,
)
from .forms import FD_STEP, fd_exterior_derivative, fd_exterior_derivative_flat
from .geometry import (
    PinLift,
    cartan_dirac_fiber,
    class_point,
    eta_multivector,
    ghjw_matrix,
)
from .groups import GroupModel, SwapDoubleModel, product_model, swap_double_model
from .multivector import Multivector
from .spinor import DoubledSpace

__all__ = [
    "QHamPoint",
    "FusionData",
    "moment_condition_residual",
    "minimal_degeneracy",
    "strong_dirac_equivalence",
    "conjugacy_qham_point",
    "symmetric_space_record",
    "double_point",
    "fused_double_point",
    "DoubleFactory",
    "fuse",
    "fusion_tau",
    "tau_matrix",
    "mult_eta_identity_residual",
    "fused_three_form_residual",
    "qham_volume_top",
    "kirillov_poisson_matrix",
    "homotopy_two_form",
    "exp_orbit_qham_point",
    "exp_dirac_report",
    "regular_value_report",
    "infinitesimal_invariance_residual",
]


@dataclass
class QHamPoint:
    """Pointwise data of a 2-form + group-valued moment structure.

    ``dphi`` has shape (m, d): row i holds the left-trivialized coordinates
    of dΦ(u_i).  ``action`` has shape (m, d): action @ ξ gives the frame
    coordinates of the generating vector ξ^♯ at the point.
    """

    model: GroupModel
    omega: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    action: np.ndarray

    @property
    def frame_dim(self) -> int:
        return self.omega.shape[0]

    def change_frame(self, s: np.ndarray) -> "QHamPoint":
        """Data in the frame u'_i = Σ_j s[j, i] u_j."""
        s = np.asarray(s, dtype=float)
        return QHamPoint(
            self.model,
            s.T @ self.omega @ s,
            self.phi,
            s.T @ self.dphi,
            np.linalg.solve(s, np.eye(s.shape[0])) @ self.action,
        )


@dataclass
class FusionData:
    """Two moment components over one frame, ready to be fused."""

    model: GroupModel
    omega: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    dphi1: np.ndarray
    dphi2: np.ndarray
    action1: np.ndarray
    action2: np.ndarray


# --------------------------------------------------------------------------- #
# axiom checks

def moment_condition_residual(p: QHamPoint) -> float:
    """max | ι(ξ^♯)ω - B(((Ad_Φ + 1)/2) dΦ(·), ξ) | over the bases."""
    ad = p.model.Ad(p.phi)
    d = p.model.dim
    lhs = p.omega.T @ p.action
    rhs = p.dphi @ ((np.eye(d) + ad) / 2.0).T @ p.model.B
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


def minimal_degeneracy(p: QHamPoint, tol: float = 1e-8) -> dict:
    """Both forms of the kernel condition, and whether they agree.

    Original: ker ω = {ξ^♯ : Ad_Φ ξ = -ξ}.  Elegant: ker ω ∩ ker dΦ = 0.
    """
    ker_omega = nullspace_basis(p.omega, tol, scale=1.0)
    eig = nullspace_basis(p.model.Ad(p.phi) + np.eye(p.model.dim), tol, scale=1.0)
    flipped = column_space_basis(p.action @ eig, tol) if eig.size else np.zeros((p.frame_dim, 0))
    original = (ker_omega.shape[1] == flipped.shape[1]
                and subspace_distance(ker_omega, flipped) <= 1e-6)
    ker_dphi = nullspace_basis(p.dphi.T, tol, scale=1.0)
    if ker_omega.shape[1] == 0 or ker_dphi.shape[1] == 0:
        inter_dim = 0
    else:
        stacked = np.hstack([ker_omega, -ker_dphi])
        inter_dim = ker_omega.shape[1] + ker_dphi.shape[1] - np.linalg.matrix_rank(
            stacked, tol=1e-8)
    elegant = inter_dim == 0
    return {
        "original": original,
        "elegant": elegant,
        "consistent": original == elegant,
        "kernel_dim": int(ker_omega.shape[1]),
    }


def strong_dirac_equivalence(p: QHamPoint, tol: float = 1e-7) -> dict:
    """Compare the axiom pair (moment + kernel) with the Dirac-map formulation.

    The tangent map dΦ must carry the graph of ω onto the invariant
    Lagrangian fiber at Φ(x), strongly; pointwise this is equivalent to the
    two axioms holding.
    """
    m, d = p.frame_dim, p.model.dim
    doubled_m = DoubledSpace(m) if m else None
    doubled_g = DoubledSpace(d)
    a = p.dphi.T
    target = cartan_dirac_fiber(p.model, p.phi, doubled_g)
    if m == 0:
        return {"axioms": True, "dirac": True, "agree": True}
    graph = graph_of_two_form(doubled_m, p.omega)
    image, strong = dirac_image(a, graph, doubled_g)
    dirac_ok = bool(image.dim == target.dim and image.distance(target) <= tol and strong)
    axioms_ok = bool(
        moment_condition_residual(p) <= 1e-8 and minimal_degeneracy(p)["original"]
    )
    return {"axioms": axioms_ok, "dirac": dirac_ok, "agree": axioms_ok == dirac_ok}


def infinitesimal_invariance_residual(point_builder, p: QHamPoint, xi,
                                      h: float = FD_STEP) -> float:
    """‖L(ξ^♯) ω‖ estimated by differencing the 2-form along the flow.

    ``point_builder`` maps a group element h to the QHamPoint at the
    transported carrier point h·x; invariance of ω is checked through the
    frame-coherent builder, not through any particular chart.
    """
    exp_plus = p.model.exp(np.asarray(xi, dtype=float) * h)
    exp_minus = p.model.exp(-np.asarray(xi, dtype=float) * h)
    om_plus = point_builder(exp_plus).omega
    om_minus = point_builder(exp_minus).omega
    return float(np.max(np.abs(om_plus - om_minus))) / (2 * h)


# --------------------------------------------------------------------------- #
# model spaces

def conjugacy_qham_point(model: GroupModel, g) -> QHamPoint:
    """A conjugacy class with its invariant 2-form, moment map the inclusion."""
    pt = class_point(model, g)
    u = pt.frame
    omega = ghjw_matrix(pt)
    gen = model.Ad(model.inv(g)) - np.eye(model.dim)
    action, *_ = np.linalg.lstsq(u, gen, rcond=None) if u.size else (np.zeros((0, model.dim)),)
    return QHamPoint(model, omega, np.asarray(g), u.T, action)


def symmetric_space_record(wreath: SwapDoubleModel, c) -> QHamPoint:
    """The base group as a zero-2-form moment space over the swap extension.

    Points are group elements c; the moment is c -> (swap, (c, c^{-1})),
    whose image is the conjugacy class of the swap element.  The frame is
    the left-trivialized chart on c, the 2-form vanishes identically.
    """
    base = wreath.base
    db = base.dim
    ad_c = base.Ad(c)
    phi = wreath.pair(c, base.inv(c), swap=True)
    dphi = np.hstack([(-ad_c).T, np.eye(db)])  # row i = (-Ad_c e_i, e_i)
    action = np.hstack([base.Ad(base.inv(c)), -np.eye(db)])
    return QHamPoint(wreath, np.zeros((db, db)), phi, dphi, action)


def fuse(data: FusionData) -> QHamPoint:
    """Fusion: Φ = Φ1 Φ2, ω += pullback of the twist 2-form, diagonal action."""
    model = data.model
    ad2 = model.Ad(data.phi2)
    cross = 0.5 * data.dphi1 @ model.B @ ad2 @ data.dphi2.T
    omega = data.omega + (cross - cross.T)
    phi = model.mul(data.phi1, data.phi2)
    dphi = data.dphi1 @ model.Ad(model.inv(data.phi2)).T + data.dphi2
    action = data.action1 + data.action2
    return QHamPoint(model, omega, phi, dphi, action)


class DoubleFactory:
    """Builds double and fused-double points of a base group by iterated fusion.

    The pipeline starts from two copies of the symmetric-space record over
    the swap extension, fuses their diagonal to obtain the double (a moment
    space over G × G with moment (ab, a^{-1}b^{-1}) after reparametrizing the
    second slot), and fuses once more to the commutator moment a b a^{-1} b^{-1}.
    """

    def __init__(self, base: GroupModel):
        self.base = base
        self.wreath = swap_double_model(base)
        self.product = product_model(base, base)

    def double_point(self, a, b) -> QHamPoint:
        base, wreath = self.base, self.wreath
        db = base.dim
        b_inner = base.inv(b)  # moment (a c^{-1}, a^{-1} c) at c = b^{-1} gives (ab, a^{-1}b^{-1})
        rec1 = symmetric_space_record(wreath, a)
        rec2 = symmetric_space_record(wreath, b_inner)
        fusion = FusionData(
            wreath,
            np.zeros((2 * db, 2 * db)),
            rec1.phi, rec2.phi,
            np.vstack([rec1.dphi, np.zeros_like(rec2.dphi)]),
            np.vstack([np.zeros_like(rec1.dphi), rec2.dphi]),
            np.vstack([rec1.action, np.zeros((db, 2 * db))]),
            np.vstack([np.zeros((db, 2 * db)), rec2.action]),
        )
        fused = fuse(fusion)
        # identity component of the swap extension is the product group
        point = QHamPoint(self.product, fused.omega, fused.phi, fused.dphi, fused.action)
        transport = np.zeros((2 * db, 2 * db))
        transport[:db, :db] = np.eye(db)
        transport[db:, db:] = -base.Ad(b)
        return point.change_frame(transport)

    def fused_double_point(self, a, b) -> QHamPoint:
        base = self.base
        db = base.dim
        d_pt = self.double_point(a, b)
        prod = self.product
        r = base.rep_dim
        phi_mat = np.asarray(d_pt.phi)
        phi1 = phi_mat[:r, :r]
        phi2 = phi_mat[r:, r:]
        fusion = FusionData(
            base,
            d_pt.omega,
            phi1, phi2,
            d_pt.dphi[:, :db], d_pt.dphi[:, db:],
            d_pt.action[:, :db], d_pt.action[:, db:],
        )
        return fuse(fusion)


def double_point(base: GroupModel, a, b) -> QHamPoint:
    return DoubleFactory(base).double_point(a, b)


def fused_double_point(base: GroupModel, a, b) -> QHamPoint:
    return DoubleFactory(base).fused_double_point(a, b)


# --------------------------------------------------------------------------- #
# the fusion 2-form and the product 3-form identity

def tau_matrix(model: GroupModel, g2) -> np.ndarray:
    """Matrix of the twist 2-form on T(G×G) at (g1, g2) in left trivialization.

    τ((x1,x2),(y1,y2)) = (B(x1, Ad_{g2} y2) - B(y1, Ad_{g2} x2)) / 2; the
    value is independent of g1.
    """
    d = model.dim
    blk = 0.5 * model.B @ model.Ad(g2)
    out = np.zeros((2 * d, 2 * d))
    out[:d, d:] = blk
    out[d:, :d] = -blk.T
    return out


def fusion_tau(model: GroupModel, g1, g2, u, v) -> float:
    """τ at (g1, g2) on two tangent vectors of G × G (left-trivialized)."""
    t = tau_matrix(model, g2)
    return float(np.asarray(u, dtype=float) @ t @ np.asarray(v, dtype=float))


def mult_eta_identity_residual(base: GroupModel, prod: GroupModel, a, b,
                               h: float = FD_STEP) -> float:
    """‖Mult*η - pr1*η - pr2*η - dτ‖ at (a, b)."""
    d = base.dim
    eta = eta_multivector(base)
    r = base.rep_dim

    def tau_field(point):
        g2 = np.asarray(point)[r:, r:]
        return Multivector.from_antisymmetric_matrix(tau_matrix(base, g2))

    d_tau = fd_exterior_derivative(prod, tau_field, _prod_pair(base, a, b), h)
    ad_b_inv = base.Ad(base.inv(b))
    d_mult = np.hstack([ad_b_inv, np.eye(d)])
    pr1 = np.hstack([np.eye(d), np.zeros((d, d))])
    pr2 = np.hstack([np.zeros((d, d)), np.eye(d)])
    lhs = eta.pullback(d_mult)
    rhs = eta.pullback(pr1) + eta.pullback(pr2) + d_tau
    return (lhs - rhs).norm()


def _prod_pair(base: GroupModel, a, b) -> np.ndarray:
    r = base.rep_dim
    out = np.zeros((2 * r, 2 * r), dtype=complex)
    out[:r, :r] = a
    out[r:, r:] = b
    return out


def fused_three_form_residual(factory: DoubleFactory, a, b, h: float = FD_STEP) -> float:
    """‖dω^fus - Φ*η‖ at (a, b) on the fused double (first structure axiom)."""
    base, prod = factory.base, factory.product
    r = base.rep_dim

    def omega_field(point):
        mat = np.asarray(point)
        p = factory.fused_double_point(mat[:r, :r], mat[r:, r:])
        return Multivector.from_antisymmetric_matrix(p.omega)

    center = factory.fused_double_point(a, b)
    d_omega = fd_exterior_derivative(prod, omega_field, _prod_pair(base, a, b), h)
    rhs = eta_multivector(base).pullback(center.dphi.T)
    return (d_omega - rhs).norm()


# --------------------------------------------------------------------------- #
# volume densities

def qham_volume_top(p: QHamPoint, pin: PinLift) -> float:
    """Frame density of the top part of e^ω ∧ Φ*ψ."""
    psi = (pin.forms_at(p.phi) if p.model.liftable
           else pin.forms_at_unsigned(p.phi))[0]
    omega = Multivector.from_antisymmetric_matrix(p.omega)
    pulled = psi.pullback(p.dphi.T)
    density = float(omega.exp_wedge().wedge(pulled).top_coefficient())
    return density if p.model.liftable else abs(density)


# --------------------------------------------------------------------------- #
# exponentials

def kirillov_poisson_matrix(model: GroupModel, x) -> np.ndarray:
    """Linear Poisson structure at x, indices raised by B: P_ij = B(x, [ξ^i, ξ^j])."""
    d = model.dim
    raised = [model.B_inv[:, i] for i in range(d)]
    out = np.zeros((d, d))
    for i in range(d):
        for j in range(i + 1, d):
            val = model.pairing(x, model.bracket(raised[i], raised[j]))
            out[i, j] = val
            out[j, i] = -val
    return out


def homotopy_two_form(model: GroupModel, x, nodes: int = 32) -> np.ndarray:
    """Radial homotopy of the pulled-back 3-form: ϖ_x(u,v) = ∫₀¹ t² (exp*η)_{tx}(x,u,v) dt."""
    x = np.asarray(x, dtype=float)
    d = model.dim
    eta = eta_multivector(model)
    ts, ws = np.polynomial.legendre.leggauss(nodes)
    ts = 0.5 * (ts + 1.0)
    ws = 0.5 * ws
    out = np.zeros((d, d))
    eye = np.eye(d)
    for t, w in zip(ts, ws):
        frame = model.dexp_frame(t * x)
        fx = frame @ x
        cols = frame @ eye
        for i in range(d):
            for j in range(i + 1, d):
                val = eta.evaluate([fx, cols[:, i], cols[:, j]])
                out[i, j] += w * t * t * val
                out[j, i] -= w * t * t * val
    return out


def exp_orbit_qham_point(model: GroupModel, x, tol: float = 1e-9) -> QHamPoint:
    """Adjoint-orbit point made q-Hamiltonian through the exponential.

    ω = (orbit symplectic form) + restriction of the homotopy 2-form,
    Φ = exp, dΦ the trivialized differential of exp.
    """
    x = np.asarray(x, dtype=float)
    d = model.dim
    neg_ad = -model.ad(x)
    # greedy frame for the orbit tangent {[ζ, x]}
    frame_cols: list[np.ndarray] = []
    params: list[np.ndarray] = []
    residual = [neg_ad[:, i].copy() for i in range(d)]
    scale = max(np.linalg.norm(neg_ad, 2), 1.0)
    chosen_idx: list[int] = []
    while True:
        norms = [np.linalg.norm(r) for r in residual]
        best = int(np.argmax(norms))
        if norms[best] <= 1e3 * tol * scale:
            break
        frame_cols.append(neg_ad[:, best])
        e = np.zeros(d)
        e[best] = 1.0
        params.append(e)
        chosen_idx.append(best)
        q = residual[best] / norms[best]
        residual = [r - (q @ r) * q for r in residual]
    u = np.array(frame_cols).T if frame_cols else np.zeros((d, 0))
    z = np.array(params).T if params else np.zeros((d, 0))
    m = u.shape[1]
    kks = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            kks[i, j] = model.pairing(x, model.bracket(z[:, i], z[:, j]))
    w = homotopy_two_form(model, x)
    omega = kks + u.T @ w @ u
    t_frame = model.dexp_frame(x)
    dphi = (t_frame @ u).T
    action, *_ = np.linalg.lstsq(u, neg_ad, rcond=None) if u.size else (np.zeros((0, d)),)
    return QHamPoint(model, omega, model.exp(x), dphi, action)


def regular_value_report(p: QHamPoint, tol: float = 1e-8) -> dict:
    """Pointwise data for reduction at the identity value of the moment map.

    No quotient is built; this only reports whether the moment value is the
    identity, the rank of its differential there, and the kernel dimensions
    entering the local regular-value criterion.
    """
    at_identity = bool(np.linalg.norm(np.asarray(p.phi) - p.model.identity()) < 1e-9)
    rank = int(np.linalg.matrix_rank(p.dphi, tol=tol)) if p.dphi.size else 0
    return {
        "moment_is_identity": at_identity,
        "dphi_rank": rank,
        "dphi_kernel_dim": p.frame_dim - rank,
        "omega_kernel_dim": minimal_degeneracy(p, tol)["kernel_dim"],
    }


def exp_dirac_report(model: GroupModel, x, h: float = FD_STEP,
                     tol: float = 1e-9) -> dict:
    """The two halves of the exponential theorem at x.

    (i) d(homotopy form) = exp*η by flat differencing; (ii) the trivialized
    differential of exp is a strong Dirac map from the gauged Poisson graph
    to the invariant Lagrangian fiber at exp x.
    """
    x = np.asarray(x, dtype=float)
    d = model.dim
    t_frame = model.dexp_frame(x)
    jac = abs(float(np.linalg.det(t_frame)))
    if jac < 1e3 * tol:
        raise ValueError("point is outside the domain where exp is a local diffeomorphism")
    eta = eta_multivector(model)

    def w_field(y):
        return Multivector.from_antisymmetric_matrix(homotopy_two_form(model, y))

    d_w = fd_exterior_derivative_flat(w_field, x, h)
    pulled = eta.pullback(t_frame)
    exterior_residual = (d_w - pulled).norm()

    doubled = DoubledSpace(d)
    graph = graph_of_bivector_subspace(doubled, kirillov_poisson_matrix(model, x))
    gauged = gauge_transform(graph, homotopy_two_form(model, x))
    target = cartan_dirac_fiber(model, model.exp(x), doubled)
    image, strong = dirac_image(t_frame, gauged, doubled)
    return {
        "exterior_residual": exterior_residual,
        "dirac_distance": image.distance(target),
        "strong": bool(strong),
        "jacobian": jac,
    }
