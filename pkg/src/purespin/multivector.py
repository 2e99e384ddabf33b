"""Sparse multivectors: elements of an exterior algebra over a fixed basis.

A :class:`Multivector` of ambient dimension ``dim`` is a finite linear
combination of basis blades ``e_I`` indexed by strictly increasing tuples
``I`` of indices in ``range(dim)``.  Coefficients may be exact
(:class:`fractions.Fraction`, ``int``) or floating point; arithmetic never
converts exact coefficients to floats on its own.

The same container serves three roles in this package: elements of a wedge
algebra of forms (``Λ V*``), elements of a wedge algebra of multivectors
(``Λ V``), and coefficient storage for Clifford algebra elements (where the
product is supplied by :mod:`purespin.clifford` rather than by ``wedge``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Blade = tuple[int, ...]
Scalar = object  # Fraction | int | float

__all__ = ["Multivector", "merge_blades", "blade_sign_of_permutation"]


def _is_zero(c) -> bool:
    return c == 0


def blade_sign_of_permutation(seq: Sequence[int]) -> tuple[int, Blade]:
    """Sort ``seq`` (distinct indices), returning (sign, sorted tuple).

    Sign is the parity of the permutation applied; 0 is never returned here,
    repeated indices must be handled by the caller.
    """
    arr = list(seq)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(arr)


def merge_blades(I: Blade, J: Blade) -> tuple[int, Blade] | None:
    """Sign and index tuple of ``e_I ∧ e_J``; None if a repeated index kills it."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    if set(I) & set(J):
        return None
    # Count inversions of the concatenation (merge-count; both halves sorted).
    sign = 1
    merged: list[int] = []
    i = j = 0
    li, lj = len(I), len(J)
    while i < li and j < lj:
        if I[i] < J[j]:
            merged.append(I[i])
            i += 1
        else:
            merged.append(J[j])
            # J[j] jumps over the remaining li - i elements of I
            if (li - i) % 2:
                sign = -sign
            j += 1
    merged.extend(I[i:])
    merged.extend(J[j:])
    return sign, tuple(merged)


class Multivector:
    """Graded element of an exterior algebra, stored sparsely."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Blade, Scalar] | None = None):
        self.dim = int(dim)
        clean: dict[Blade, Scalar] = {}
        if terms:
            for blade, coeff in terms.items():
                blade = tuple(blade)
                if any(blade[i] >= blade[i + 1] for i in range(len(blade) - 1)):
                    raise ValueError(f"blade indices must be strictly increasing: {blade}")
                if blade and (blade[0] < 0 or blade[-1] >= self.dim):
                    raise ValueError(f"blade {blade} out of range for dim {self.dim}")
                if not _is_zero(coeff):
                    clean[blade] = coeff
        self.terms = clean

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(dim, {})

    @classmethod
    def scalar(cls, dim: int, value: Scalar = 1) -> "Multivector":
        return cls(dim, {(): value})

    @classmethod
    def basis_vector(cls, dim: int, i: int) -> "Multivector":
        return cls(dim, {(i,): 1})

    @classmethod
    def from_vector(cls, coeffs: Sequence[Scalar]) -> "Multivector":
        coeffs = list(coeffs)
        return cls(len(coeffs), {(i,): c for i, c in enumerate(coeffs) if not _is_zero(c)})

    @classmethod
    def from_antisymmetric_matrix(cls, m) -> "Multivector":
        """Two-form Σ_{i<j} m[i,j] e_i ∧ e_j from an antisymmetric matrix."""
        m = np.asarray(m)
        n = m.shape[0]
        terms = {}
        for i in range(n):
            for j in range(i + 1, n):
                if not _is_zero(m[i, j]):
                    terms[(i, j)] = float(m[i, j]) if isinstance(m[i, j], np.floating) else m[i, j]
        return cls(n, terms)

    @classmethod
    def top(cls, dim: int, value: Scalar = 1) -> "Multivector":
        return cls(dim, {tuple(range(dim)): value})

    # ------------------------------------------------------------------ #
    # basic structure

    def __iter__(self) -> Iterator[tuple[Blade, Scalar]]:
        return iter(self.terms.items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, blade: Iterable[int]) -> Scalar:
        return self.terms.get(tuple(blade), 0)

    @property
    def grades(self) -> set[int]:
        return {len(b) for b in self.terms}

    def grade(self, k: int) -> "Multivector":
        return Multivector(self.dim, {b: c for b, c in self.terms.items() if len(b) == k})

    def max_grade(self) -> int:
        return max((len(b) for b in self.terms), default=0)

    def min_grade(self) -> int:
        return min((len(b) for b in self.terms), default=0)

    def even_part(self) -> "Multivector":
        return Multivector(self.dim, {b: c for b, c in self.terms.items() if len(b) % 2 == 0})

    def odd_part(self) -> "Multivector":
        return Multivector(self.dim, {b: c for b, c in self.terms.items() if len(b) % 2 == 1})

    def has_pure_parity(self) -> bool:
        parities = {len(b) % 2 for b in self.terms}
        return len(parities) <= 1

    def scalar_part(self) -> Scalar:
        return self.terms.get((), 0)

    def top_coefficient(self) -> Scalar:
        return self.terms.get(tuple(range(self.dim)), 0)

    # ------------------------------------------------------------------ #
    # arithmetic

    def __add__(self, other: "Multivector") -> "Multivector":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out.get(b, 0) + c
            if _is_zero(s):
                out.pop(b, None)
            else:
                out[b] = s
        res = Multivector.zero(self.dim)
        res.terms = out
        return res

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return self.map_coeff(lambda c: -c)

    def scale(self, a: Scalar) -> "Multivector":
        if _is_zero(a):
            return Multivector.zero(self.dim)
        return self.map_coeff(lambda c: a * c)

    __rmul__ = scale

    def map_coeff(self, f: Callable[[Scalar], Scalar]) -> "Multivector":
        return Multivector(self.dim, {b: f(c) for b, c in self.terms.items()})

    def wedge(self, other: "Multivector") -> "Multivector":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out: dict[Blade, Scalar] = {}
        for bi, ci in self.terms.items():
            for bj, cj in other.terms.items():
                merged = merge_blades(bi, bj)
                if merged is None:
                    continue
                sign, blade = merged
                s = out.get(blade, 0) + sign * ci * cj
                if _is_zero(s):
                    out.pop(blade, None)
                else:
                    out[blade] = s
        res = Multivector.zero(self.dim)
        res.terms = out
        return res

    def wedge_power(self, k: int) -> "Multivector":
        acc = Multivector.scalar(self.dim)
        for _ in range(k):
            acc = acc.wedge(self)
        return acc

    def exp_wedge(self) -> "Multivector":
        """Exterior exponential 1 + x + x∧x/2 + ...; requires no scalar part."""
        if () in self.terms:
            raise ValueError("exp_wedge requires vanishing scalar part")
        acc = Multivector.scalar(self.dim)
        term = Multivector.scalar(self.dim)
        k = 0
        while True:
            k += 1
            term = term.wedge(self)
            if not term:
                break
            acc = acc + term.scale(Fraction(1, math.factorial(k)))
            if k > self.dim:
                break
        return acc

    def contract(self, vector: Sequence[Scalar]) -> "Multivector":
        """Interior product ι(v) against the dual pairing of the fixed bases.

        ``vector`` holds the pairing coefficients of v against the basis that
        indexes this multivector: ι(v) e_I = Σ_p (-1)^p v[i_p] e_{I \\ i_p}.
        """
        out: dict[Blade, Scalar] = {}
        for blade, coeff in self.terms.items():
            for p, idx in enumerate(blade):
                v = vector[idx]
                if _is_zero(v):
                    continue
                sub = blade[:p] + blade[p + 1:]
                c = coeff * v if p % 2 == 0 else -(coeff * v)
                s = out.get(sub, 0) + c
                if _is_zero(s):
                    out.pop(sub, None)
                else:
                    out[sub] = s
        res = Multivector.zero(self.dim)
        res.terms = out
        return res

    def transpose_sign(self) -> "Multivector":
        """Degree-k part multiplied by (-1)^{k(k-1)/2} (reversal on wedge blades)."""
        return Multivector(
            self.dim,
            {b: (c if (len(b) * (len(b) - 1) // 2) % 2 == 0 else -c) for b, c in self.terms.items()},
        )

    def parity_sign(self) -> "Multivector":
        return Multivector(
            self.dim, {b: (c if len(b) % 2 == 0 else -c) for b, c in self.terms.items()}
        )

    # ------------------------------------------------------------------ #
    # linear maps

    def map_generators(self, images: Sequence["Multivector"], dim_out: int) -> "Multivector":
        """Extend ``e_i -> images[i]`` to an algebra map and apply it.

        Used for the pullback of forms (images = rows of the matrix) and the
        pushforward of multivector blades (images = columns).
        """
        out = Multivector.zero(dim_out)
        for blade, coeff in self.terms.items():
            acc = Multivector.scalar(dim_out, coeff)
            for idx in blade:
                acc = acc.wedge(images[idx])
                if not acc:
                    break
            out = out + acc
        return out

    def pullback(self, matrix) -> "Multivector":
        """Pullback A* of a form under the linear map with the given matrix.

        ``matrix`` has shape (dim_target, dim_source) mapping source
        coordinates to target coordinates; ``self`` lives over the target.
        """
        m = np.asarray(matrix)
        rows, cols = m.shape
        if rows != self.dim:
            raise ValueError("matrix target dimension does not match form")
        images = [Multivector(cols, {(j,): m[i, j] for j in range(cols) if m[i, j] != 0})
                  for i in range(rows)]
        return self.map_generators(images, cols)

    def pushforward(self, matrix) -> "Multivector":
        """Pushforward A_* of a wedge of vectors under the matrix (target x source)."""
        m = np.asarray(matrix)
        rows, cols = m.shape
        if cols != self.dim:
            raise ValueError("matrix source dimension does not match multivector")
        images = [Multivector(rows, {(i,): m[i, j] for i in range(rows) if m[i, j] != 0})
                  for j in range(cols)]
        return self.map_generators(images, rows)

    # ------------------------------------------------------------------ #
    # evaluation and numerics

    def evaluate(self, vectors: Sequence[Sequence[float]]) -> float:
        """Value of a k-form on k coordinate vectors via minor determinants."""
        k = len(vectors)
        mat = np.asarray(vectors, dtype=float)
        total = 0.0
        for blade, coeff in self.terms.items():
            if len(blade) != k:
                continue
            if k == 0:
                total += float(coeff)
                continue
            total += float(coeff) * float(np.linalg.det(mat[:, list(blade)]))
        return total

    def to_array(self, blades: Sequence[Blade]) -> np.ndarray:
        return np.array([float(self.terms.get(b, 0)) for b in blades])

    def norm(self) -> float:
        return math.sqrt(sum(float(c) ** 2 for c in self.terms.values()))

    def prune(self, tol: float) -> "Multivector":
        return Multivector(self.dim, {b: c for b, c in self.terms.items() if abs(float(c)) > tol})

    def almost_equal(self, other: "Multivector", tol: float = 1e-9) -> bool:
        return (self - other).norm() <= tol

    def to_float(self) -> "Multivector":
        return self.map_coeff(float)

    # ------------------------------------------------------------------ #
    # serialization

    def to_json(self) -> list[dict]:
        """JSON encoding: 1-based strictly increasing index sets, scalar strings."""
        items = []
        for blade in sorted(self.terms, key=lambda b: (len(b), b)):
            c = self.terms[blade]
            items.append({"idx": [i + 1 for i in blade], "c": _scalar_str(c)})
        return items

    @classmethod
    def from_json(cls, dim: int, items: Sequence[Mapping]) -> "Multivector":
        terms = {}
        for item in items:
            blade = tuple(i - 1 for i in item["idx"])
            terms[blade] = _scalar_parse(item["c"])
        return cls(dim, terms)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if not self.terms:
            return "0"
        bits = []
        for blade in sorted(self.terms, key=lambda b: (len(b), b)):
            c = self.terms[blade]
            name = "1" if not blade else "e" + "".join(str(i) for i in blade)
            bits.append(f"{c}*{name}")
        return " + ".join(bits)


def _scalar_str(c: Scalar) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, (int, np.integer)):
        return str(int(c))
    return repr(float(c))


def _scalar_parse(s: str) -> Scalar:
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    if any(ch in s for ch in ".eE") or s in ("inf", "-inf", "nan"):
        return float(s)
    return int(s)
