"""Clifford algebra engine over a bilinear space.

The defining relation used throughout is

    w1 w2 + w2 w1 = <w1, w2> 1,

so a generator squares to (1/2)<w, w>.  The literature is split on a factor
of two here; every formula downstream (Pin normalization, the idempotent
built from dual Lagrangian bases, the spinor actions) is written against
this relation and a conformance test pins it.

Products are computed by sort-and-contract on index sequences against the
Gram matrix, so the working basis need not be orthogonal; cost is fine for
the ambient dimensions used here (<= 16 generators, typically <= 8).
Coefficients stay exact whenever the Gram entries and inputs are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exact
from .bilinear import BilinearSpace
from .multivector import Blade, Multivector

HALF = Fraction(1, 2)

__all__ = [
    "CliffordAlgebra",
    "CliffordElement",
    "PinElement",
    "NotInCliffordGroup",
    "factor_into_reflections",
    "reflection_matrix",
    "projector_p",
]


class NotInCliffordGroup(ValueError):
    """Raised when an element fails a Clifford/Pin group membership requirement."""


class CliffordAlgebra:
    """Clifford algebra Cl(W) of a bilinear space, with memoized blade products."""

    def __init__(self, space: BilinearSpace):
        self.space = space
        self.dim = space.dim
        self._norm_cache: dict[tuple[int, ...], dict[Blade, object]] = {}
        self.blades: list[Blade] = [
            b for k in range(self.dim + 1) for b in combinations(range(self.dim), k)
        ]
        self._blade_index = {b: i for i, b in enumerate(self.blades)}

    # -- elements -------------------------------------------------------- #

    def element(self, mv: Multivector) -> "CliffordElement":
        if mv.dim != self.dim:
            raise ValueError("dimension mismatch")
        return CliffordElement(self, mv)

    def scalar(self, c=1) -> "CliffordElement":
        return self.element(Multivector.scalar(self.dim, c))

    def vector(self, coeffs: Sequence) -> "CliffordElement":
        return self.element(Multivector.from_vector(coeffs))

    def basis_element(self, blade: Blade) -> "CliffordElement":
        return self.element(Multivector(self.dim, {tuple(blade): 1}))

    # -- core product ---------------------------------------------------- #

    def _gram_entry(self, i: int, j: int):
        return self.space.gram_exact[i][j]

    def _normal_form(self, seq: tuple[int, ...]) -> dict[Blade, object]:
        """Expansion of the generator word e_{s0} e_{s1} ... in the blade basis."""
        cached = self._norm_cache.get(seq)
        if cached is not None:
            return cached
        bad = next((p for p in range(len(seq) - 1) if seq[p] >= seq[p + 1]), None)
        if bad is None:
            result = {seq: 1}
        else:
            a, b = seq[bad], seq[bad + 1]
            result = {}
            if a == b:
                sub = self._normal_form(seq[:bad] + seq[bad + 2:])
                g = HALF * self._gram_entry(a, a)
                if g != 0:
                    for blade, c in sub.items():
                        result[blade] = result.get(blade, 0) + g * c
            else:
                swapped = self._normal_form(seq[:bad] + (b, a) + seq[bad + 2:])
                for blade, c in swapped.items():
                    result[blade] = result.get(blade, 0) - c
                g = self._gram_entry(a, b)
                if g != 0:
                    contracted = self._normal_form(seq[:bad] + seq[bad + 2:])
                    for blade, c in contracted.items():
                        result[blade] = result.get(blade, 0) + g * c
            result = {blade: c for blade, c in result.items() if c != 0}
        self._norm_cache[seq] = result
        return result

    def mul(self, x: Multivector, y: Multivector) -> Multivector:
        out: dict[Blade, object] = {}
        for bi, ci in x.terms.items():
            for bj, cj in y.terms.items():
                c = ci * cj
                for blade, k in self._normal_form(bi + bj).items():
                    s = out.get(blade, 0) + c * k
                    if s == 0:
                        out.pop(blade, None)
                    else:
                        out[blade] = s
        res = Multivector.zero(self.dim)
        res.terms = out
        return res

    def transpose(self, x: Multivector) -> Multivector:
        """Canonical anti-automorphism: reverse each generator word."""
        out = Multivector.zero(self.dim)
        for blade, c in x.terms.items():
            rev = Multivector.zero(self.dim)
            rev.terms = dict(self._normal_form(tuple(reversed(blade))))
            out = out + rev.scale(c)
        return out

    def parity(self, x: Multivector) -> Multivector:
        """Grading automorphism: +1 on even words, -1 on odd words."""
        return x.parity_sign()

    # -- regular representation ------------------------------------------ #

    def left_multiplication_matrix(self, x: Multivector) -> np.ndarray:
        n = len(self.blades)
        m = np.zeros((n, n))
        for j, blade in enumerate(self.blades):
            col = self.mul(x, Multivector(self.dim, {blade: 1}))
            for b, c in col.terms.items():
                m[self._blade_index[b], j] = float(c)
        return m

    def left_multiplication_matrix_exact(self, x: Multivector) -> exact.Mat:
        n = len(self.blades)
        m = [[Fraction(0)] * n for _ in range(n)]
        for j, blade in enumerate(self.blades):
            col = self.mul(x, Multivector(self.dim, {blade: 1}))
            for b, c in col.terms.items():
                m[self._blade_index[b]][j] = Fraction(c)
        return m

    def inverse(self, x: Multivector) -> Multivector:
        """Inverse by linear solve in the regular representation."""
        one = np.zeros(len(self.blades))
        one[self._blade_index[()]] = 1.0
        if self.space.is_exact() and all(
            isinstance(c, (int, Fraction)) for c in x.terms.values()
        ):
            sol = exact.solve(
                self.left_multiplication_matrix_exact(x),
                [Fraction(int(v)) for v in one],
            )
            if sol is None:
                raise NotInCliffordGroup("element is not invertible")
            return Multivector(
                self.dim,
                {self.blades[i]: sol[i] for i in range(len(sol)) if sol[i] != 0},
            )
        m = self.left_multiplication_matrix(x)
        try:
            sol = np.linalg.solve(m, one)
        except np.linalg.LinAlgError as err:
            raise NotInCliffordGroup("element is not invertible") from err
        if not np.all(np.isfinite(sol)):
            raise NotInCliffordGroup("element is not invertible")
        res = np.linalg.norm(m @ sol - one)
        if res > 1e-6:
            raise NotInCliffordGroup(f"element is not invertible (residual {res:.2e})")
        return Multivector(
            self.dim,
            {self.blades[i]: sol[i] for i in range(len(sol)) if abs(sol[i]) > 0},
        )

    # -- Clifford and Pin groups ------------------------------------------ #

    def twisted_conjugation(self, g: Multivector, y: Multivector,
                            g_inv: Multivector | None = None) -> Multivector:
        if g_inv is None:
            g_inv = self.inverse(g)
        return self.mul(self.mul(self.parity(g), y), g_inv)

    def group_action(self, g: Multivector, tol: float | None = None) -> tuple[bool, np.ndarray]:
        """Membership in the Clifford group and the induced matrix on W.

        Returns (is_member, A) where A has columns Π(g) e_j g^{-1}; membership
        requires every column to be a pure vector, which forces A ∈ O(W).
        """
        tol = self.space.tol if tol is None else tol
        g_inv = self.inverse(g)
        a = np.zeros((self.dim, self.dim))
        ok = True
        for j in range(self.dim):
            y = self.twisted_conjugation(g, Multivector.basis_vector(self.dim, j), g_inv)
            stray = sum(float(c) ** 2 for b, c in y.terms.items() if len(b) != 1)
            scale = max(1.0, y.norm())
            if math.sqrt(stray) > tol * scale * 100:
                ok = False
            for b, c in y.terms.items():
                if len(b) == 1:
                    a[b[0], j] = float(c)
        if ok:
            gmat = self.space.gram
            ok = bool(np.linalg.norm(a.T @ gmat @ a - gmat) <= 1e-6 * max(1.0, np.linalg.norm(gmat)))
        return ok, a

    def pin_normalize(self, g: Multivector) -> "PinElement":
        """Scale g ∈ Γ(W) so that g^T g = ±1."""
        t = self.mul(self.transpose(g), g)
        c = t.scalar_part()
        stray = math.sqrt(sum(float(v) ** 2 for b, v in t.terms.items() if b != ()))
        if stray > 1e-8 * max(1.0, abs(float(c))) or c == 0:
            raise NotInCliffordGroup("g^T g is not a nonzero scalar")
        sign = 1 if float(c) > 0 else -1
        if isinstance(c, (int, Fraction)):
            root = Fraction(abs(c)) ** HALF if _is_square(Fraction(abs(c))) else None
            if root is not None:
                return PinElement(self.element(g.scale(1 / root)), sign)
        scale = 1.0 / math.sqrt(abs(float(c)))
        return PinElement(self.element(g.map_coeff(lambda v: float(v) * scale)), sign)


def _is_square(q: Fraction) -> bool:
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    return rn * rn == q.numerator and rd * rd == q.denominator


@dataclass
class CliffordElement:
    """Element of a fixed Clifford algebra; operators use the Clifford product."""

    algebra: CliffordAlgebra
    mv: Multivector

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")
        return CliffordElement(self.algebra, self.algebra.mul(self.mv, other.mv))

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.algebra, self.mv + other.mv)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return CliffordElement(self.algebra, self.mv - other.mv)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.algebra, -self.mv)

    def __rmul__(self, scalar) -> "CliffordElement":
        return CliffordElement(self.algebra, self.mv.scale(scalar))

    def transpose(self) -> "CliffordElement":
        return CliffordElement(self.algebra, self.algebra.transpose(self.mv))

    def parity(self) -> "CliffordElement":
        return CliffordElement(self.algebra, self.algebra.parity(self.mv))

    def inverse(self) -> "CliffordElement":
        return CliffordElement(self.algebra, self.algebra.inverse(self.mv))

    def almost_equal(self, other: "CliffordElement", tol: float = 1e-9) -> bool:
        return self.mv.almost_equal(other.mv, tol)

    def to_json(self) -> dict:
        return {"space": self.algebra.space.to_json(), "element": self.mv.to_json()}


@dataclass
class PinElement:
    """Clifford group element normalized to g^T g = ±1."""

    g: CliffordElement
    norm_sign: int


def reflection_matrix(w: np.ndarray, space: BilinearSpace) -> np.ndarray:
    """Matrix of the reflection y -> y - 2<w,y>/<w,w> w."""
    w = np.asarray(w, dtype=float)
    gw = space.gram @ w
    c = float(w @ gw)
    if c == 0:
        raise ValueError("reflection vector is isotropic")
    return np.eye(space.dim) - (2.0 / c) * np.outer(w, gw)


def _orthogonal_basis(space: BilinearSpace) -> list[np.ndarray]:
    """Basis with <b_i, b_j> = ±δ_ij, from the spectral form of the Gram matrix."""
    lam, q = np.linalg.eigh(space.gram)
    return [q[:, i] / math.sqrt(abs(lam[i])) for i in range(space.dim)]


def factor_into_reflections(A, space: BilinearSpace, tol: float | None = None) -> list[np.ndarray]:
    """Write an orthogonal map as a product of reflections in non-isotropic vectors.

    Returns vectors w_1, ..., w_k with A = R_{w_1} ∘ ... ∘ R_{w_k}.  Each basis
    direction is fixed by one reflection when possible, by two otherwise; the
    candidate with the larger |<w,w>| is preferred to stay clear of the
    isotropic cone.  For a definite form k <= dim W; in split signature the
    two-reflection fallback can push k up to 2 dim W.
    """
    tol = space.tol if tol is None else tol
    A = np.asarray(A, dtype=float)
    gmat = space.gram
    defect = np.linalg.norm(A.T @ gmat @ A - gmat)
    if defect > 1e-6 * max(1.0, np.linalg.norm(gmat)):
        raise ValueError(f"matrix is not orthogonal for this form (defect {defect:.2e})")
    gram_scale = max(1.0, float(np.linalg.norm(gmat, 2)))
    reflections: list[np.ndarray] = []
    m = A.copy()
    for v in _orthogonal_basis(space):
        mv = m @ v
        if np.linalg.norm(mv - v) <= 1e3 * tol:
            continue
        w1 = mv - v
        w2 = mv + v
        n1 = abs(float(w1 @ gmat @ w1))
        n2 = abs(float(w2 @ gmat @ w2))
        # one reflection unless Mv - v is dangerously close to the isotropic
        # cone, in which case route through -v with two reflections
        if n1 > 1e3 * tol * gram_scale * float(w1 @ w1):
            reflections.append(w1 / np.linalg.norm(w1))
            m = reflection_matrix(w1, space) @ m
        elif n2 > 1e3 * tol * gram_scale * float(w2 @ w2):
            # R_v R_{w2} maps Mv through -v back to v.
            reflections.append(w2 / np.linalg.norm(w2))
            reflections.append(v)
            m = reflection_matrix(v, space) @ reflection_matrix(w2, space) @ m
        else:  # pragma: no cover - excluded by |<v,v>| = 1
            raise ValueError("no usable reflection vector found")
    if np.linalg.norm(m - np.eye(space.dim)) > 1e-7:
        raise ValueError("reflection factorization failed to converge")
    return reflections


def pin_lift_from_reflections(algebra: CliffordAlgebra, vectors: Sequence[np.ndarray]) -> PinElement:
    """Pin lift of a product of reflections: normalized Clifford product of the vectors."""
    g = algebra.scalar(1)
    sign = 1
    for w in vectors:
        c = HALF * algebra.space.pairing(w, w)
        g = g * algebra.vector(np.asarray(w, dtype=float) / math.sqrt(abs(c)))
        sign *= 1 if c > 0 else -1
    return PinElement(g, sign)


def projector_p(algebra: CliffordAlgebra, e_basis: Sequence, f_basis: Sequence,
                check: bool = True) -> CliffordElement:
    """Idempotent p = Π e_i f^i from dual bases of transverse Lagrangians.

    Requires <e_i, f^j> = δ_ij; then p² = p, E p = 0, p F = 0 and p − 1 lies
    in the left ideal generated by E.
    """
    n = len(e_basis)
    if check:
        for i in range(n):
            for j in range(n):
                expect = 1 if i == j else 0
                val = algebra.space.pairing_exact(list(e_basis[i]), list(f_basis[j])) \
                    if algebra.space.is_exact() and not isinstance(e_basis[i], np.ndarray) \
                    else algebra.space.pairing(e_basis[i], f_basis[j])
                if abs(float(val) - expect) > 1e-9:
                    raise ValueError("bases are not dual-normalized")
    p = algebra.scalar(1)
    for i in range(n):
        p = p * (algebra.vector(e_basis[i]) * algebra.vector(f_basis[i]))
    return p
