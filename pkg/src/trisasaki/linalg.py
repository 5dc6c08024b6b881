"""Scalar backends and small dense linear algebra over Q or R.

Two backends exist. The exact backend stores ``fractions.Fraction`` entries in
numpy arrays of ``dtype=object``; the float backend uses ``float64`` arrays and
decides zero-ness with an absolute tolerance. A computation never mixes the
two: combining an exact array with a float array raises
:class:`BackendMismatchError`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_TOL = 1e-9

Scalar = Union[Fraction, float]


class BackendMismatchError(TypeError):
    """Raised when exact and float data meet in one computation."""


class NonMetricError(ValueError):
    """Raised when a bilinear form expected to be a metric is not one."""


# -- scalars -----------------------------------------------------------------

def parse_scalar(value, exact: bool = True) -> Scalar:
    """Coerce ``value`` (int, Fraction, float or a string like ``"-3/4"``)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, str):
        value = Fraction(value.strip())
    if exact:
        if isinstance(value, Rational):
            return Fraction(value)
        if isinstance(value, float):
            # decimal intent: 0.1 -> 1/10, not the binary expansion
            return Fraction(repr(value))
        if isinstance(value, Real):
            return Fraction(repr(float(value)))
        raise TypeError(f"cannot convert {value!r} to an exact scalar")
    return float(value)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def is_zero(x, tol: float | None = None) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(x) <= (DEFAULT_TOL if tol is None else tol)


def sign_of_permutation(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if ``seq`` has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(
        1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b]
    )
    return -1 if inversions % 2 else 1


# -- arrays ------------------------------------------------------------------

def asarray(data, exact: bool = True) -> np.ndarray:
    arr = np.asarray(data, dtype=object if exact else float)
    if exact:
        flat = [parse_scalar(v, True) for v in arr.ravel()]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat if flat else []
        return out
    return arr.astype(float)


def convert(arr: np.ndarray, exact: bool) -> np.ndarray:
    """Re-express an array in the requested backend."""
    if exact:
        return asarray(arr, True)
    if is_exact(arr):
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return np.asarray(arr, dtype=float)


def zeros(shape, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int, exact: bool = True) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def basis_vector(n: int, i: int, exact: bool = True) -> np.ndarray:
    v = zeros(n, exact)
    v[i] = Fraction(1) if exact else 1.0
    return v


def backend_of(arr) -> bool | None:
    """True for exact, False for float, None for integer data (fits both)."""
    arr = np.asarray(arr)
    if arr.dtype == object:
        return True
    if np.issubdtype(arr.dtype, np.integer) or arr.dtype == bool:
        return None
    return False


def is_exact(arr) -> bool:
    """Object (Fraction) and integer arrays count as exact."""
    return backend_of(arr) is not False


def same_backend(*arrays, expect: bool | None = None) -> bool | None:
    """Return the shared backend of ``arrays``; raise if they differ.

    Integer arrays are compatible with either backend. When ``expect`` is
    given, every array must be compatible with it.
    """
    modes = {backend_of(a) for a in arrays} - {None}
    if expect is not None:
        modes.add(expect)
    if len(modes) > 1:
        raise BackendMismatchError("exact and float data cannot be mixed")
    return modes.pop() if modes else None


def dot(*arrays) -> np.ndarray:
    """Chained matrix product; exact operands skip zero entries.

    Structure tensors are sparse, and Fraction products are slow, so this is
    much faster than ``@`` on object arrays.
    """
    out = np.asarray(arrays[0])
    for b in arrays[1:]:
        out = _dot2(out, np.asarray(b))
    return out


def _dot2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if not (a.dtype == object or b.dtype == object):
        return a @ b
    a2 = a if a.ndim == 2 else a[None, :]
    b2 = b if b.ndim == 2 else b[:, None]
    if a2.shape[1] != b2.shape[0]:
        raise ValueError(f"shapes {a.shape} and {b.shape} not aligned")
    out = zeros((a2.shape[0], b2.shape[1]), True)
    b_rows = [[(c, v) for c, v in enumerate(row) if v != 0] for row in b2]
    for i, row in enumerate(a2):
        acc: dict[int, object] = {}
        for k, x in enumerate(row):
            if x == 0:
                continue
            for c, v in b_rows[k]:
                acc[c] = acc.get(c, 0) + x * v
        for c, v in acc.items():
            out[i, c] = v
    if a.ndim == 1 and b.ndim == 1:
        return out[0, 0]
    if a.ndim == 1:
        return out[0]
    if b.ndim == 1:
        return out[:, 0]
    return out


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=arr.dtype, copy=True)
    arr.flags.writeable = False
    return arr


def max_defect(arr: np.ndarray):
    """Largest-magnitude entry of ``arr`` and its index (``None`` if empty)."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0, None
    flat = np.abs(arr).ravel()
    k = int(np.argmax(flat))
    return arr.ravel()[k], np.unravel_index(k, arr.shape)


def all_zero(arr: np.ndarray, tol: float | None = None) -> bool:
    return all(is_zero(x, tol) for x in np.asarray(arr).ravel())


# -- elimination -------------------------------------------------------------

def rref(matrix, tol: float | None = None):
    """Reduced row echelon form and pivot columns.

    Exact input is eliminated over Q with no rounding; float input uses the
    largest available pivot in each column and treats entries below ``tol`` as
    zero.
    """
    exact = is_exact(matrix)
    m = asarray(matrix, True) if exact else np.array(matrix, dtype=float, copy=True)
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    tol = DEFAULT_TOL if tol is None else tol
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if exact:
            p = next((i for i in range(r, rows) if m[i, c] != 0), None)
        else:
            i = r + int(np.argmax(np.abs(m[r:, c])))
            p = i if abs(m[i, c]) > tol else None
        if p is None:
            continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    if not exact:
        m[np.abs(m) <= tol] = 0.0
    return m, pivots


def rank(matrix, tol: float | None = None) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return len(rref(matrix, tol)[1])


def nullspace(matrix, tol: float | None = None) -> list[np.ndarray]:
    """Basis of {x : matrix @ x = 0}, one vector per free column."""
    matrix = np.asarray(matrix)
    exact = is_exact(matrix)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return [basis_vector(cols, j, exact) for j in range(cols)]
    red, pivots = rref(matrix, tol)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols, exact)
        v[f] = Fraction(1) if exact else 1.0
        for row, pc in enumerate(pivots):
            v[pc] = -red[row, f]
        basis.append(v)
    return basis


def solve(a, b, tol: float | None = None) -> np.ndarray:
    """Solve the square system ``a @ x = b``; raise ``NonMetricError`` if singular."""
    a = np.asarray(a)
    b = np.asarray(b)
    same_backend(a, b)
    n = a.shape[0]
    rhs = b.reshape(n, -1)
    aug = np.concatenate([a, rhs], axis=1)
    red, pivots = rref(aug, tol)
    if pivots[:n] != list(range(n)):
        raise NonMetricError("singular matrix")
    x = red[:n, n:]
    return x.reshape(b.shape)


def inverse(a, tol: float | None = None) -> np.ndarray:
    a = np.asarray(a)
    return solve(a, eye(a.shape[0], is_exact(a)), tol)


def is_positive_definite(g, tol: float | None = None) -> bool:
    """Leading principal minors in exact mode, Cholesky in float mode."""
    g = np.asarray(g)
    if g.shape[0] != g.shape[1]:
        return False
    if not all_zero(g - g.T, tol):
        return False
    if not is_exact(g):
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            return False
        return True
    # Gaussian elimination without pivoting: all pivots positive iff all
    # leading principal minors positive.
    m = np.array(g, dtype=object, copy=True)
    n = m.shape[0]
    for k in range(n):
        if m[k, k] <= 0:
            return False
        for i in range(k + 1, n):
            m[i] = m[i] - (m[i, k] / m[k, k]) * m[k]
    return True


# -- subspaces ---------------------------------------------------------------

class Subspace:
    """A linear subspace of an ``ambient``-dimensional coordinate space.

    The basis is kept in the order given, so callers that care about
    ordering (e.g. seeding an orthonormalization) see their own vectors.
    """

    def __init__(self, basis: Iterable[np.ndarray], ambient: int, tol: float | None = None):
        vecs = [np.asarray(v) for v in basis]
        for v in vecs:
            if v.shape != (ambient,):
                raise ValueError(f"vector of shape {v.shape} in a {ambient}-dim space")
        if vecs:
            same_backend(*vecs)
            if rank(np.array(vecs), tol) != len(vecs):
                raise ValueError("basis vectors are linearly dependent")
        self.basis = tuple(frozen(v) for v in vecs)
        self.ambient = ambient
        self.tol = tol

    @classmethod
    def span(cls, vectors: Iterable[np.ndarray], ambient: int,
             tol: float | None = None) -> "Subspace":
        """Span of arbitrary vectors, as a row-reduced basis."""
        vecs = [np.asarray(v) for v in vectors]
        if not vecs:
            return cls([], ambient, tol)
        red, pivots = rref(np.array(vecs), tol)
        return cls([red[i] for i in range(len(pivots))], ambient, tol)

    @classmethod
    def full(cls, ambient: int, exact: bool = True) -> "Subspace":
        return cls([basis_vector(ambient, i, exact) for i in range(ambient)], ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as rows."""
        return np.array(self.basis) if self.basis else np.zeros((0, self.ambient))

    def contains(self, v: np.ndarray, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        if all_zero(v, tol):
            return True
        if not self.basis:
            return False
        return rank(np.vstack([self.matrix(), np.asarray(v)[None, :]]), tol) == self.dim

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace", tol: float | None = None) -> bool:
        return all(other.contains(v, tol) for v in self.basis)

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        return (self.ambient == other.ambient and self.dim == other.dim
                and self.issubspace(other, tol))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"
