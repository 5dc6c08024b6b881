"""Constant-coefficient alternating forms on a coordinate space.

A k-form is stored sparsely as ``{(i_1, ..., i_k): coefficient}`` over strictly
increasing index tuples, where ``(i_1, ..., i_k)`` stands for
``e^{i_1} ∧ ... ∧ e^{i_k}``. Wedge products follow the shuffle (determinant)
convention with no factorial prefactor, so ``(e^1 ∧ e^2)(e_1, e_2) = 1``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .linalg import (
    BackendMismatchError,
    NonMetricError,
    Scalar,
    Subspace,
    all_zero,
    dot,
    is_exact,
    is_positive_definite,
    is_zero,
    nullspace,
    parse_scalar,
    same_backend,
    sign_of_permutation,
    solve,
    zeros,
)


def _det(rows: list[list]) -> Scalar:
    k = len(rows)
    if k == 0:
        return Fraction(1)
    total = 0
    for perm in itertools.permutations(range(k)):
        term = sign_of_permutation(perm)
        for r, c in enumerate(perm):
            term = term * rows[r][c]
            if term == 0:
                break
        total = total + term
    return total


class AlternatingForm:
    """An alternating k-form with sparse coefficients.

    Instances are immutable; arithmetic returns new forms.
    """

    __slots__ = ("dim", "degree", "exact", "_coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple, object] | None = None,
                 exact: bool = True):
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        clean = {}
        for idx, value in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"index {idx} out of range for dimension {dim}")
            sgn = sign_of_permutation(idx)
            if sgn == 0:
                continue
            value = parse_scalar(value, exact)
            key = tuple(sorted(idx))
            clean[key] = clean.get(key, 0) + sgn * value
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_coeffs",
                           MappingProxyType({k: v for k, v in sorted(clean.items()) if v != 0}))

    def __setattr__(self, name, value):
        raise AttributeError("AlternatingForm is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int, exact: bool = True) -> "AlternatingForm":
        return cls(dim, degree, {}, exact)

    @classmethod
    def basis(cls, dim: int, *indices: int, exact: bool = True) -> "AlternatingForm":
        """``e^{i_1} ∧ ... ∧ e^{i_k}`` for the given (0-based) indices."""
        return cls(dim, len(indices), {tuple(indices): 1}, exact)

    @classmethod
    def from_covector(cls, eta) -> "AlternatingForm":
        eta = np.asarray(eta)
        exact = is_exact(eta)
        return cls(len(eta), 1, {(i,): c for i, c in enumerate(eta) if c != 0}, exact)

    @classmethod
    def from_matrix(cls, m, tol: float | None = None) -> "AlternatingForm":
        """2-form with ``ω(e_a, e_b) = m[a, b]``; ``m`` must be antisymmetric."""
        m = np.asarray(m)
        if not all_zero(m + m.T, tol):
            raise ValueError("matrix is not antisymmetric")
        n = m.shape[0]
        return cls(n, 2, {(a, b): m[a, b] for a in range(n) for b in range(a + 1, n)
                          if m[a, b] != 0}, is_exact(m))

    # -- accessors --------------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[tuple, Scalar]:
        return self._coeffs

    def coefficient(self, *indices: int) -> Scalar:
        """Value on basis vectors ``e_{i_1}, ..., e_{i_k}`` in any order."""
        sgn = sign_of_permutation(indices)
        zero = Fraction(0) if self.exact else 0.0
        if sgn == 0:
            return zero
        return sgn * self._coeffs.get(tuple(sorted(indices)), zero)

    def __call__(self, *vectors) -> Scalar:
        if len(vectors) != self.degree:
            raise ValueError(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        vecs = [np.asarray(v) for v in vectors]
        same_backend(*vecs, expect=self.exact)
        for v in vecs:
            if v.shape != (self.dim,):
                raise ValueError("vector dimension mismatch")
        total = Fraction(0) if self.exact else 0.0
        for idx, c in self._coeffs.items():
            total = total + c * _det([[v[i] for v in vecs] for i in idx])
        return total

    def to_matrix(self) -> np.ndarray:
        if self.degree != 2:
            raise ValueError("only 2-forms have a matrix")
        m = zeros((self.dim, self.dim), self.exact)
        for (a, b), c in self._coeffs.items():
            m[a, b] = c
            m[b, a] = -c
        return m

    def radical(self, tol: float | None = None) -> Subspace:
        """``{X : X ⨼ ω = 0}``; for a 2-form this is the kernel of its matrix."""
        if self.degree == 0:
            raise ValueError("a 0-form has no radical")
        # X ⨼ ω = Σ_i X_i (e_i ⨼ ω); stack coefficient columns
        rows = [interior(_unit(self.dim, i, self.exact), self) for i in range(self.dim)]
        keys = sorted({k for f in rows for k in f.coeffs})
        if not keys:
            return Subspace.full(self.dim, self.exact)
        m = zeros((len(keys), self.dim), self.exact)
        for i, f in enumerate(rows):
            for r, k in enumerate(keys):
                m[r, i] = f.coeffs.get(k, 0)
        return Subspace(nullspace(m, tol), self.dim, tol)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "AlternatingForm") -> None:
        if not isinstance(other, AlternatingForm):
            raise TypeError("expected an AlternatingForm")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.exact != self.exact:
            raise BackendMismatchError("exact and float forms cannot be combined")

    def __add__(self, other: "AlternatingForm") -> "AlternatingForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return AlternatingForm(self.dim, self.degree, out, self.exact)

    def __neg__(self) -> "AlternatingForm":
        return AlternatingForm(self.dim, self.degree,
                               {k: -v for k, v in self._coeffs.items()}, self.exact)

    def __sub__(self, other: "AlternatingForm") -> "AlternatingForm":
        return self + (-other)

    def __mul__(self, scalar) -> "AlternatingForm":
        if isinstance(scalar, AlternatingForm):
            return NotImplemented
        if self.exact and isinstance(scalar, float):
            raise BackendMismatchError("float scalar applied to an exact form")
        s = parse_scalar(scalar, self.exact)
        return AlternatingForm(self.dim, self.degree,
                               {k: s * v for k, v in self._coeffs.items()}, self.exact)

    __rmul__ = __mul__

    def __xor__(self, other: "AlternatingForm") -> "AlternatingForm":
        return wedge(self, other)

    def is_zero(self, tol: float | None = None) -> bool:
        return all(is_zero(v, tol) for v in self._coeffs.values())

    def equals(self, other: "AlternatingForm", tol: float | None = None) -> bool:
        self._check(other)
        return self.degree == other.degree and (self - other).is_zero(tol)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlternatingForm):
            return NotImplemented
        return (self.dim, self.degree, self.exact, dict(self._coeffs)) == (
            other.dim, other.degree, other.exact, dict(other._coeffs))

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"AlternatingForm(dim={self.dim}, degree={self.degree}, 0)"
        terms = " + ".join(
            f"{v}*e^{'^'.join(str(i) for i in k)}" if k else str(v)
            for k, v in self._coeffs.items()
        )
        return f"AlternatingForm(dim={self.dim}, degree={self.degree}, {terms})"


def _unit(n: int, i: int, exact: bool) -> np.ndarray:
    v = zeros(n, exact)
    v[i] = Fraction(1) if exact else 1.0
    return v


def wedge(omega: AlternatingForm, tau: AlternatingForm) -> AlternatingForm:
    """Exterior product in the shuffle convention."""
    omega._check(tau)
    out: dict[tuple, Scalar] = {}
    for i_idx, a in omega.coeffs.items():
        for j_idx, b in tau.coeffs.items():
            joined = i_idx + j_idx
            sgn = sign_of_permutation(joined)
            if sgn == 0:
                continue
            key = tuple(sorted(joined))
            out[key] = out.get(key, 0) + sgn * a * b
    return AlternatingForm(omega.dim, omega.degree + tau.degree, out, omega.exact)


def interior(v, omega: AlternatingForm) -> AlternatingForm:
    """Contraction in the first slot: ``(v ⨼ ω)(X_2, ...) = ω(v, X_2, ...)``."""
    if omega.degree == 0:
        raise ValueError("cannot contract a 0-form")
    v = np.asarray(v)
    if v.shape != (omega.dim,):
        raise ValueError("vector dimension mismatch")
    same_backend(v, expect=omega.exact)
    out: dict[tuple, Scalar] = {}
    for idx, c in omega.coeffs.items():
        for pos, i in enumerate(idx):
            if v[i] == 0:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            term = (-1) ** pos * v[i] * c
            out[rest] = out.get(rest, 0) + term
    return AlternatingForm(omega.dim, omega.degree - 1, out, omega.exact)


# -- metric duality --------------------------------------------------------------

def metric_dual(g, v) -> np.ndarray:
    """Covector ``w ↦ g(v, w)``."""
    g = np.asarray(g)
    v = np.asarray(v)
    same_backend(g, v)
    if g.shape != (len(v), len(v)):
        raise ValueError("dimension mismatch")
    return dot(v, g)


def inverse_dual(g, eta, tol: float | None = None) -> np.ndarray:
    """The vector whose metric dual is ``eta``."""
    g = np.asarray(g)
    eta = np.asarray(eta)
    same_backend(g, eta)
    if not is_positive_definite(g, tol):
        raise NonMetricError("g is not positive definite")
    return solve(g.T, eta, tol)


def bilinear(g, x, y) -> Scalar:
    return np.asarray(x) @ np.asarray(g) @ np.asarray(y)

