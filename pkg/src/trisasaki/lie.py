"""Lie algebras given by structure constants.

``[e_i, e_j] = Σ_k c^k_{ij} e_k`` with constants stored for ``i < j`` only.
Left-invariant forms are differentiated with the Chevalley–Eilenberg formula,
normalized so that a 1-form satisfies ``dη(X, Y) = -η([X, Y])``.  (For the
fundamental vector fields of a left action the sign flips, since those are
anti-isomorphic to the Lie algebra; everything here lives on the
left-invariant side.)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .forms import AlternatingForm
from .linalg import (
    BackendMismatchError,
    Scalar,
    Subspace,
    all_zero,
    convert,
    inverse,
    format_scalar,
    is_exact,
    is_zero,
    nullspace,
    parse_scalar,
    same_backend,
    zeros,
)


class LieAlgebra:
    """Finite-dimensional real Lie algebra in a fixed basis.

    Construction does not check the Jacobi identity, so deliberately broken
    inputs can be represented; see :func:`jacobi_check`.
    """

    def __init__(self, dim: int, structure_constants: Mapping[tuple, object] | None = None,
                 exact: bool = True):
        if dim < 1:
            raise ValueError("dimension must be positive")
        consts: dict[tuple[int, int, int], Scalar] = {}
        for (i, j, k), value in (structure_constants or {}).items():
            i, j, k = int(i), int(j), int(k)
            if not all(0 <= x < dim for x in (i, j, k)):
                raise ValueError(f"index ({i}, {j}, {k}) out of range for dimension {dim}")
            value = parse_scalar(value, exact)
            if i == j:
                if value != 0:
                    raise ValueError(f"[e_{i}, e_{i}] must vanish")
                continue
            if i > j:
                i, j, value = j, i, -value
            consts[(i, j, k)] = consts.get((i, j, k), 0) + value
        self.dim = dim
        self.exact = exact
        self.constants = {key: v for key, v in sorted(consts.items()) if v != 0}
        table: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (i, j, k), v in self.constants.items():
            table.setdefault((i, j), {})[k] = v
            table.setdefault((j, i), {})[k] = -v
        self._table = table

    @classmethod
    def abelian(cls, dim: int, exact: bool = True) -> "LieAlgebra":
        return cls(dim, {}, exact)

    @classmethod
    def from_tensor(cls, c: np.ndarray, tol: float | None = None) -> "LieAlgebra":
        """From a dense array ``c[i, j, k]`` (upper triangle ``i < j`` is read)."""
        c = np.asarray(c)
        n = c.shape[0]
        exact = is_exact(c)
        consts = {(i, j, k): c[i, j, k]
                  for i in range(n) for j in range(i + 1, n) for k in range(n)
                  if not is_zero(c[i, j, k], tol if not exact else None)}
        return cls(n, consts, exact)

    def astype(self, exact: bool) -> "LieAlgebra":
        if exact == self.exact:
            return self
        conv = float if not exact else (lambda v: parse_scalar(v, True))
        return LieAlgebra(self.dim, {k: conv(v) for k, v in self.constants.items()}, exact)

    def tensor(self) -> np.ndarray:
        c = zeros((self.dim,) * 3, self.exact)
        for (i, j), row in self._table.items():
            for k, v in row.items():
                c[i, j, k] = v
        return c

    def basis_bracket(self, i: int, j: int) -> dict[int, Scalar]:
        """Sparse ``[e_i, e_j]`` as ``{k: coefficient}``."""
        return self._table.get((i, j), {})

    def _vec(self, coords: Mapping[int, Scalar]) -> np.ndarray:
        v = zeros(self.dim, self.exact)
        for k, c in coords.items():
            v[k] = c
        return v

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x)
        y = np.asarray(y)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValueError("vector dimension mismatch")
        same_backend(x, y, expect=self.exact)
        out = zeros(self.dim, self.exact)
        for (i, j), row in self._table.items():
            if x[i] == 0 or y[j] == 0:
                continue
            s = x[i] * y[j]
            for k, v in row.items():
                out[k] = out[k] + s * v
        return out

    def ad(self, x) -> np.ndarray:
        """Matrix of ``Y ↦ [X, Y]`` (columns are images of basis vectors)."""
        x = np.asarray(x)
        m = zeros((self.dim, self.dim), self.exact)
        for (i, j), row in self._table.items():
            if x[i] == 0:
                continue
            for k, v in row.items():
                m[k, j] = m[k, j] + x[i] * v
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim, self.exact, self.constants) == (other.dim, other.exact, other.constants)

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"[{i},{j}]_{k}={format_scalar(v)}"
                         for (i, j, k), v in list(self.constants.items())[:6])
        more = "" if len(self.constants) <= 6 else ", ..."
        return f"LieAlgebra(dim={self.dim}, {body}{more})"


# -- Jacobi -------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    defect: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class JacobiReport:
    violations: tuple[JacobiViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def _double_bracket(L: LieAlgebra, i: int, j: int, k: int) -> dict[int, Scalar]:
    # [[e_i, e_j], e_k]
    out: dict[int, Scalar] = {}
    for m, c in L.basis_bracket(i, j).items():
        for n, d in L.basis_bracket(m, k).items():
            out[n] = out.get(n, 0) + c * d
    return out


def jacobi_check(L: LieAlgebra, tol: float | None = None) -> JacobiReport:
    violations = []
    for i, j, k in itertools.combinations(range(L.dim), 3):
        total: dict[int, Scalar] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for n, v in _double_bracket(L, a, b, c).items():
                total[n] = total.get(n, 0) + v
        if any(not is_zero(v, tol) for v in total.values()):
            violations.append(JacobiViolation((i, j, k), L._vec(total)))
    return JacobiReport(tuple(violations))


# -- Chevalley–Eilenberg differential -----------------------------------------------

def ce_differential(L: LieAlgebra, omega: AlternatingForm) -> AlternatingForm:
    """Exterior derivative of a left-invariant form.

    ``dω(X_0, ..., X_k) = Σ_{p<q} (-1)^{p+q} ω([X_p, X_q], X_0, ..., X̂_p, ..., X̂_q, ..., X_k)``
    """
    if omega.dim != L.dim:
        raise ValueError("form and algebra dimensions differ")
    if omega.exact != L.exact:
        raise BackendMismatchError("form and algebra use different backends")
    k = omega.degree
    if k >= L.dim or not L.constants or not omega.coeffs:
        return AlternatingForm.zero(L.dim, k + 1, L.exact)
    out: dict[tuple, Scalar] = {}
    for tup in itertools.combinations(range(L.dim), k + 1):
        total = 0
        for p, q in itertools.combinations(range(k + 1), 2):
            row = L.basis_bracket(tup[p], tup[q])
            if not row:
                continue
            rest = tup[:p] + tup[p + 1:q] + tup[q + 1:]
            sgn = -1 if (p + q) % 2 else 1
            for m, c in row.items():
                val = omega.coefficient(m, *rest)
                if val != 0:
                    total = total + sgn * c * val
        if total != 0:
            out[tup] = total
    return AlternatingForm(L.dim, k + 1, out, L.exact)


# -- subspaces of the algebra ----------------------------------------------------

def center(L: LieAlgebra, tol: float | None = None) -> Subspace:
    """Kernel of the stacked ad-matrices: ``{X : [X, e_j] = 0 for all j}``."""
    rows = zeros((L.dim * L.dim, L.dim), L.exact)
    for (i, j), row in L._table.items():
        for k, v in row.items():
            rows[j * L.dim + k, i] = v
    return Subspace(nullspace(rows, tol), L.dim, tol)


def bracket_span(L: LieAlgebra, a: Subspace, b: Subspace, tol: float | None = None) -> Subspace:
    """``[A, B]``, the span of all brackets of basis vectors."""
    vecs = [L.bracket(x, y) for x in a.basis for y in b.basis]
    vecs = [v for v in vecs if not all_zero(v, tol)]
    return Subspace.span(vecs, L.dim, tol)


def is_ideal(L: LieAlgebra, s: Subspace, tol: float | None = None) -> bool:
    full = Subspace.full(L.dim, L.exact)
    return all(s.contains(L.bracket(x, y), tol) for x in full.basis for y in s.basis)


def lower_central_series(L: LieAlgebra, tol: float | None = None) -> list[Subspace]:
    """``L ⊇ [L, L] ⊇ [L, [L, L]] ⊇ ...`` until it reaches 0 or stabilizes."""
    full = Subspace.full(L.dim, L.exact)
    series = [full]
    while True:
        nxt = bracket_span(L, full, series[-1], tol)
        series.append(nxt)
        if nxt.dim == 0 or nxt.dim == series[-2].dim:
            return series


def is_nilpotent(L: LieAlgebra, tol: float | None = None) -> tuple[bool, int]:
    """Whether ``L`` is nilpotent, and its class (number of nonzero terms)."""
    series = lower_central_series(L, tol)
    if series[-1].dim != 0:
        return False, 0
    return True, sum(1 for s in series if s.dim)


# -- structure-preserving derivations --------------------------------------------------

def structure_derivations(L: LieAlgebra, g, phis: Sequence, xis: Sequence,
                          tol: float | None = None, *, skew: bool = True,
                          commute_phi: bool = True, fix_reeb: bool = True) -> list[np.ndarray]:
    """Basis of endomorphisms ``D`` with

    * ``D[X, Y] = [DX, Y] + [X, DY]``,
    * ``g(DX, Y) + g(X, DY) = 0`` (``skew``),
    * ``D φ_i = φ_i D`` (``commute_phi``),
    * ``D ξ_i = 0`` (``fix_reeb``).

    The keyword flags drop individual conditions for comparison purposes.
    """
    n = L.dim
    exact = L.exact
    g = np.asarray(g)
    # unknown D[r, s] sits at column r * n + s
    eqs: list[np.ndarray] = []

    def col(r, s):
        return r * n + s

    c = L.tensor()
    # derivation: Σ_k c^k_{ab} D[m,k] - Σ_k D[k,a] c^m_{kb} - Σ_k D[k,b] c^m_{ak} = 0
    for a in range(n):
        for b in range(a + 1, n):
            for m in range(n):
                row = zeros(n * n, exact)
                for k in range(n):
                    if c[a, b, k] != 0:
                        row[col(m, k)] += c[a, b, k]
                    if c[k, b, m] != 0:
                        row[col(k, a)] -= c[k, b, m]
                    if c[a, k, m] != 0:
                        row[col(k, b)] -= c[a, k, m]
                if any(x != 0 for x in row):
                    eqs.append(row)
    if skew:
        # (g D)[a, b] + (g D)[b, a] = 0
        for a in range(n):
            for b in range(a, n):
                row = zeros(n * n, exact)
                for k in range(n):
                    row[col(k, b)] += g[a, k]
                    row[col(k, a)] += g[b, k]
                eqs.append(row)
    if commute_phi:
        for phi in phis:
            phi = np.asarray(phi)
            for r in range(n):
                for s in range(n):
                    row = zeros(n * n, exact)
                    for k in range(n):
                        row[col(r, k)] += phi[k, s]
                        row[col(k, s)] -= phi[r, k]
                    eqs.append(row)
    if fix_reeb:
        for xi in xis:
            xi = np.asarray(xi)
            for r in range(n):
                row = zeros(n * n, exact)
                for k in range(n):
                    row[col(r, k)] += xi[k]
                eqs.append(row)
    system = np.array(eqs) if eqs else zeros((0, n * n), exact)
    return [v.reshape(n, n) for v in nullspace(system, tol)]


def is_derivation(L: LieAlgebra, d, tol: float | None = None) -> bool:
    d = np.asarray(d)
    for a in range(L.dim):
        for b in range(a + 1, L.dim):
            ea = _unit(L, a)
            eb = _unit(L, b)
            lhs = d @ L.bracket(ea, eb)
            rhs = L.bracket(d @ ea, eb) + L.bracket(ea, d @ eb)
            if not all_zero(lhs - rhs, tol):
                return False
    return True


def _unit(L: LieAlgebra, i: int) -> np.ndarray:
    v = zeros(L.dim, L.exact)
    v[i] = Fraction(1) if L.exact else 1.0
    return v


def transport(L: LieAlgebra, p) -> LieAlgebra:
    """The algebra ``[X, Y]' = P⁻¹[PX, PY]`` making ``P`` an isomorphism onto ``L``."""
    p = np.asarray(p)
    if is_exact(p) != L.exact:
        p = convert(p, L.exact)
    pinv = inverse(p)
    c = zeros((L.dim,) * 3, L.exact)
    for a in range(L.dim):
        for b in range(a + 1, L.dim):
            v = pinv @ L.bracket(p[:, a], p[:, b])
            for k in range(L.dim):
                c[a, b, k] = v[k]
    return LieAlgebra.from_tensor(c)


__all__ = [
    "LieAlgebra", "JacobiReport", "JacobiViolation", "jacobi_check", "ce_differential",
    "center", "bracket_span", "is_ideal", "lower_central_series", "is_nilpotent",
    "structure_derivations", "is_derivation", "transport",
]
