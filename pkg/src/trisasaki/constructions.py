"""Generators and transforms of degenerate 3-(α,δ)-Sasakian Lie algebras.

Basis conventions: the three Reeb vectors come first, followed by quaternionic
quadruples ``(e, φ_1 e, φ_2 e, φ_3 e)``.  On each quadruple ``φ_i`` acts as left
multiplication by ``i, j, k`` on ``ℍ`` with real basis ``(1, i, j, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .contact import (
    EVEN_PERMUTATIONS,
    AlmostContact3Structure,
    AlmostContactStructure,
    Check,
    PreconditionError,
    SasakiParams,
    VerificationReport,
    _compare,
    fundamental_form,
    infer_parameters,
    verify_3ad,
    verify_degenerate,
)
from .forms import AlternatingForm
from .lie import LieAlgebra, is_nilpotent, transport
from .linalg import (
    NonMetricError,
    Scalar,
    Subspace,
    all_zero,
    asarray,
    convert,
    eye,
    inverse,
    is_exact,
    is_positive_definite,
    is_zero,
    parse_scalar,
    rank,
    zeros,
)


class NotNilpotentError(ValueError):
    """The isomorphism builder needs a nilpotent algebra."""


# -- quaternions ----------------------------------------------------------------

def _hamilton(p: Sequence, q: Sequence) -> tuple:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def left_multiplication(i: int, exact: bool = True) -> np.ndarray:
    """4×4 matrix of ``x ↦ u x`` on ``ℍ = span(1, i, j, k)``, ``u`` the i-th unit (1-based)."""
    u = [0, 0, 0, 0]
    u[i] = 1
    m = zeros((4, 4), exact)
    for col in range(4):
        e = [0, 0, 0, 0]
        e[col] = 1
        for row, v in enumerate(_hamilton(u, e)):
            m[row, col] = parse_scalar(v, exact)
    return m


def vertical_phi(i: int, exact: bool = True) -> np.ndarray:
    """``φ_i`` on ``span(ξ_1, ξ_2, ξ_3)``: ``ξ_j ↦ ξ_k``, ``ξ_k ↦ -ξ_j``, ``ξ_i ↦ 0`` (0-based ``i``)."""
    _, j, k = EVEN_PERMUTATIONS[i]
    m = zeros((3, 3), exact)
    one = Fraction(1) if exact else 1.0
    m[k, j] = one
    m[j, k] = -one
    return m


def _block_diag(blocks: Sequence[np.ndarray], exact: bool) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = zeros((n, n), exact)
    r = 0
    for b in blocks:
        s = b.shape[0]
        out[r:r + s, r:r + s] = b
        r += s
    return out


def basis_labels(n: int) -> list[str]:
    """``xi1, xi2, xi3, e4, ..., e{4n+3}``."""
    return ["xi1", "xi2", "xi3"] + [f"e{a}" for a in range(4, 4 * n + 4)]


# -- flat hyperkähler data ----------------------------------------------------------

@dataclass(frozen=True)
class FlatHyperkahler:
    """Inner-product space ``(ℝ^{4n}, g)`` with complex structures ``I_1, I_2, I_3``."""

    g: np.ndarray
    complex_structures: tuple[np.ndarray, np.ndarray, np.ndarray]
    tol: float | None = field(default=None, compare=False)

    @classmethod
    def standard(cls, n: int, exact: bool = True) -> "FlatHyperkahler":
        if n < 1:
            raise ValueError("n must be at least 1")
        ims = tuple(_block_diag([left_multiplication(i, exact)] * n, exact) for i in (1, 2, 3))
        return cls(eye(4 * n, exact), ims)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.g)

    @property
    def kahler_forms(self) -> list[AlternatingForm]:
        """``ω_i(X, Y) = g(X, I_i Y)``."""
        return [fundamental_form(self.g, m, self.tol) for m in self.complex_structures]

    def validate(self) -> None:
        g, ims, tol = np.asarray(self.g), self.complex_structures, self.tol
        n = g.shape[0]
        if n % 4 or n == 0:
            raise ValueError(f"hyperkähler dimension must be a positive multiple of 4, got {n}")
        if not is_positive_definite(g, tol):
            raise NonMetricError("g_N is not positive definite")
        minus_id = -eye(n, self.exact)
        for a, m in enumerate(ims):
            if not all_zero(m @ m - minus_id, tol):
                raise ValueError(f"I_{a + 1}^2 != -id")
            if not all_zero(m.T @ g @ m - g, tol):
                raise ValueError(f"g_N is not I_{a + 1}-invariant")
        for i, j, k in EVEN_PERMUTATIONS:
            if not all_zero(ims[i] @ ims[j] - ims[k], tol):
                raise ValueError(f"I_{i + 1} I_{j + 1} != I_{k + 1}")


# -- generators ------------------------------------------------------------------

def _reeb_block_structure(g_h: np.ndarray, ims: Sequence[np.ndarray],
                          exact: bool) -> AlmostContact3Structure:
    m = g_h.shape[0]
    g = _block_diag([eye(3, exact), g_h], exact)
    xis = [asarray(np.eye(3 + m, dtype=int)[a], exact) for a in range(3)]
    phis = [_block_diag([vertical_phi(a, exact), ims[a]], exact) for a in range(3)]
    return AlmostContact3Structure.build(g, xis, phis, exact=exact)


def heisenberg(n: int, exact: bool = True):
    """Quaternionic Heisenberg algebra of dimension ``4n + 3`` with its standard structure.

    The bracket is fixed by ``g([X, Y], ξ_i) = g(φ_i X, Y)`` on ``ℍⁿ`` with the
    Reeb vectors central; the structure has ``(α, δ) = (1/2, 0)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    N = FlatHyperkahler.standard(n, exact)
    S = _reeb_block_structure(N.g, N.complex_structures, exact)
    consts = {}
    for a in range(3, S.dim):
        for b in range(a + 1, S.dim):
            for i in range(3):
                v = S.phis[i][:, a] @ S.g[:, b]
                if v != 0:
                    consts[(a, b, i)] = v
    half = Fraction(1, 2) if exact else 0.5
    return LieAlgebra(S.dim, consts, exact), S, SasakiParams(half, 0 * half)


def t3(exact: bool = True):
    """The abelian 3-dimensional example (the torus ``T³`` at the algebra level)."""
    S = _reeb_block_structure(zeros((0, 0), exact), [zeros((0, 0), exact)] * 3, exact)
    one = Fraction(1) if exact else 1.0
    return LieAlgebra.abelian(3, exact), S, SasakiParams(one, 0 * one)


def su2(exact: bool = True):
    """``su(2)`` with ``[ξ_1, ξ_2] = 2ξ_3`` cyclically: a non-degenerate toy with δ = 1."""
    S = t3(exact)[1]
    one = Fraction(1) if exact else 1.0
    consts = {(0, 1, 2): 2 * one, (1, 2, 0): 2 * one, (0, 2, 1): -2 * one}
    return LieAlgebra(3, consts, exact), S, SasakiParams(one, one)


def flat_boothby_wang(N: FlatHyperkahler, alpha):
    """Central extension ``ℝ³ ⊕ ℝ^{4n}`` of a flat hyperkähler base by its Kähler forms.

    ``η_i([X, Y]) = 2α g_N(I_i X, Y)`` for horizontal ``X, Y``, all other brackets
    vanish, and ``φ_i = I_i + η_j ⊗ ξ_k - η_k ⊗ ξ_j``.
    """
    N.validate()
    exact = N.exact
    alpha = parse_scalar(alpha, exact)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    S = _reeb_block_structure(np.asarray(N.g), N.complex_structures, exact)
    consts = {}
    m = N.dim
    for a in range(m):
        for b in range(a + 1, m):
            for i, im in enumerate(N.complex_structures):
                v = 2 * alpha * (im[:, a] @ N.g[:, b])
                if v != 0:
                    consts[(a + 3, b + 3, i)] = v
    zero = 0 * alpha
    return LieAlgebra(S.dim, consts, exact), S, SasakiParams(alpha, zero)


def reconstruct_bracket(S: AlmostContact3Structure, alpha) -> LieAlgebra:
    """The unique 2-step bracket with ``V`` central, ``[H, H] ⊂ V`` and
    ``η_i([X, Y]) = 2α g(φ_i X, Y)`` on ``H``.
    """
    exact = S.exact
    alpha = parse_scalar(alpha, exact)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    p = S.horizontal_projection()
    g = S.g
    c = zeros((S.dim,) * 3, exact)
    for a in range(S.dim):
        for b in range(a + 1, S.dim):
            v = zeros(S.dim, exact)
            for i in range(3):
                coef = 2 * alpha * ((S.phis[i] @ p[:, a]) @ g @ p[:, b])
                v = v + coef * S.xis[i]
            c[a, b] = v
    return LieAlgebra.from_tensor(c, S.tol)


# -- deformation ------------------------------------------------------------------------

@dataclass(frozen=True)
class DeformationParams:
    """``(a, b, c)`` with ``a > 0``, ``c ≠ 0`` and ``a + b = c²`` (unit Reeb vectors)."""

    a: Scalar
    b: Scalar
    c: Scalar
    tol: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"deformation needs a > 0, got a = {self.a}")
        if self.c == 0:
            raise ValueError("deformation needs c != 0")
        if not is_zero(self.a + self.b - self.c * self.c, self.tol):
            raise ValueError(f"deformation needs a + b = c^2, got a + b = {self.a + self.b} "
                             f"and c^2 = {self.c * self.c}")

    @classmethod
    def from_lambda(cls, lam, exact: bool = True) -> "DeformationParams":
        """``(1, λ² - 1, λ)``."""
        lam = parse_scalar(lam, exact)
        return cls(1 + 0 * lam, lam * lam - 1, lam)

    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.c == 1


def deform_structure(S: AlmostContact3Structure, d: DeformationParams) -> AlmostContact3Structure:
    """``g̃ = a g + b Σ η_i⊗η_i``, ``η̃_i = c η_i``, ``ξ̃_i = ξ_i / c``, ``φ̃_i = φ_i``."""
    exact = S.exact
    a, b, c = (parse_scalar(x, exact) for x in (d.a, d.b, d.c))
    g = a * np.asarray(S.g)
    for eta in S.etas:
        g = g + b * np.outer(eta, eta)
    triples = tuple(AlmostContactStructure(t.xi / c, c * t.eta, t.phi) for t in S.triples)
    return AlmostContact3Structure(g, triples, S.tol)


def h_deformation(L: LieAlgebra, S: AlmostContact3Structure, p: SasakiParams,
                  d: DeformationParams, tol: float | None = None):
    """Apply an H-homothetic deformation; the new (α, δ) are inferred, not assumed."""
    tol = S.tol if tol is None else tol
    if not verify_3ad(L, S, p, tol).passed:
        raise PreconditionError("input does not satisfy the structure equations",
                                verify_3ad(L, S, p, tol, check_preconditions=False))
    if d.is_identity():
        return L, S, p
    S2 = deform_structure(S, d)
    p2 = infer_parameters(L, S2, tol)
    if p2.alpha is None:
        # trivial horizontal space: keep the declared α, it is not constrained
        p2 = SasakiParams(parse_scalar(p.alpha, S.exact), p2.delta)
    report = verify_3ad(L, S2, p2, tol)
    if not report.passed:
        raise RuntimeError(f"deformed structure fails verification: {report.first_failure()}")
    return L, S2, p2


# -- quaternionic Gram–Schmidt ---------------------------------------------------------

def quaternionic_gram_schmidt(g, phis: Sequence, H: Subspace,
                              tol: float = 1e-9) -> list[np.ndarray]:
    """g-orthonormal basis of ``H`` of the form ``(e_1, φ_1e_1, φ_2e_1, φ_3e_1, e_2, ...)``.

    Seeds are the basis vectors of ``H`` in order, each projected away from the
    quadruples already found and skipped if nothing is left.  Works in floats.
    """
    g = convert(np.asarray(g), False)
    phis = [convert(np.asarray(p), False) for p in phis]
    basis = [convert(np.asarray(v), False) for v in H.basis]
    if H.dim % 4:
        raise ValueError(f"dim H = {H.dim} is not a multiple of 4")
    if not is_positive_definite(g, tol):
        raise NonMetricError("g is not positive definite")
    if basis:
        hmat = np.array(basis)
        for a, phi in enumerate(phis):
            if rank(np.vstack([hmat, (phi @ hmat.T).T]), tol) != H.dim:
                raise ValueError(f"H is not invariant under phi_{a + 1}")
    out: list[np.ndarray] = []
    for v in basis:
        if len(out) == H.dim:
            break
        w = v - sum(((v @ g @ u) * u for u in out), np.zeros_like(v))
        norm2 = w @ g @ w
        if norm2 <= tol:
            continue
        e = w / math.sqrt(norm2)
        quad = [e] + [phi @ e for phi in phis]
        gram = np.array([[x @ g @ y for y in out + quad] for x in quad])
        target = np.zeros_like(gram)
        target[:, len(out):] = np.eye(4)
        if np.max(np.abs(gram - target)) > max(tol, 1e-12) * 1e3:
            raise ValueError("quaternionic quadruple is not orthonormal: phi_i are not "
                             "g-orthogonal quaternionic structures on H")
        out.extend(quad)
    if len(out) != H.dim:
        raise ValueError("loss of rank while building the quaternionic basis")
    return out


# -- isomorphisms --------------------------------------------------------------------------

def conjugate(L: LieAlgebra, S: AlmostContact3Structure, p):
    """Rewrite ``(L, S)`` in new coordinates: ``P`` maps new coordinates to old ones.

    ``P`` is then an isomorphism from the result onto ``(L, S)``.
    """
    p = np.asarray(p)
    exact = L.exact
    p = convert(p, exact)
    pinv = inverse(p)
    L2 = transport(L, p)
    g2 = p.T @ S.g @ p
    triples = tuple(AlmostContactStructure(pinv @ t.xi, t.eta @ p, pinv @ t.phi @ p)
                    for t in S.triples)
    return L2, AlmostContact3Structure(g2, triples, S.tol)


@dataclass(frozen=True)
class IsomorphismResult:
    psi: np.ndarray
    source: tuple  # (L, S, params) after parameter matching
    target: tuple  # heisenberg(n) in floats
    report: VerificationReport
    deformation: DeformationParams | None = None

    @property
    def passed(self) -> bool:
        return self.report.passed


def isomorphism_report(psi, source, target, tol: float = 1e-8) -> VerificationReport:
    """Checks that ``psi`` is an invertible map preserving bracket, g, ξ_i, η_i, φ_i."""
    L1, S1 = source[:2]
    L2, S2 = target[:2]
    psi = np.asarray(psi)
    n = L1.dim
    checks = []
    if psi.shape != (n, n) or L2.dim != n:
        return VerificationReport((Check("iso.dimensions", "fail", (n, L2.dim)),))
    if is_exact(psi):
        ok = rank(psi) == n
        smallest = Fraction(1 if ok else 0)
    else:
        smallest = float(np.linalg.svd(psi.astype(float), compute_uv=False)[-1])
        ok = smallest > tol
    checks.append(Check("iso.invertible", "pass" if ok else "fail", (), None,
                        "ψ invertible", f"smallest singular value {smallest}"))
    unit = np.eye(n, dtype=int)
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            ea = convert(unit[a], L1.exact)
            eb = convert(unit[b], L1.exact)
            rows.append(psi @ L1.bracket(ea, eb) - L2.bracket(psi @ ea, psi @ eb))
    checks.append(_compare("iso.bracket", np.array(rows), tol, "ψ[X, Y] = [ψX, ψY]"))
    checks.append(_compare("iso.metric", psi.T @ S2.g @ psi - S1.g, tol, "g₂(ψX, ψY) = g₁(X, Y)"))
    for i in range(3):
        checks.append(_compare(f"iso.xi[{i + 1}]", psi @ S1.xis[i] - S2.xis[i], tol, "ψ ξ_i = ξ_i"))
    for i in range(3):
        checks.append(_compare(f"iso.eta[{i + 1}]", S2.etas[i] @ psi - S1.etas[i], tol,
                               "η_i ∘ ψ = η_i"))
    for i in range(3):
        checks.append(_compare(f"iso.phi[{i + 1}]", psi @ S1.phis[i] - S2.phis[i] @ psi, tol,
                               "ψ φ_i = φ_i ψ"))
    return VerificationReport(tuple(checks))


def matching_deformation(alpha, exact: bool = True) -> DeformationParams:
    """Deformation taking a degenerate structure with parameter α to α = 1/2.

    Uses ``c = sign(α)``, ``a = 2|α|``, ``b = 1 - a``; the resulting α is
    re-inferred afterwards, never assumed.
    """
    alpha = parse_scalar(alpha, exact)
    c = 1 if alpha > 0 else -1
    a = 2 * abs(alpha)
    return DeformationParams(a, 1 - a, c + 0 * alpha)


def build_isomorphism(L: LieAlgebra, S: AlmostContact3Structure, p: SasakiParams,
                      tol: float = 1e-8) -> IsomorphismResult:
    """Explicit structure-preserving isomorphism onto the quaternionic Heisenberg algebra.

    Reeb vectors go to Reeb vectors and a quaternionic orthonormal basis of ``H``
    goes to the standard basis of ``ℍⁿ``, after matching α by a deformation.
    """
    vtol = S.tol if S.tol is not None else (None if S.exact else tol)
    nil, _ = is_nilpotent(L, vtol)
    if not nil:
        raise NotNilpotentError("the algebra is not nilpotent")
    if p.alpha is None or not is_zero(parse_scalar(p.delta, S.exact), vtol):
        raise PreconditionError("a degenerate structure with known alpha is required",
                                VerificationReport())
    report = verify_degenerate(L, S, p.alpha, vtol)
    if not report.passed:
        raise PreconditionError("structure is not degenerate 3-(α,δ)-Sasakian", report)
    half = Fraction(1, 2) if S.exact else 0.5
    deformation = None
    if not is_zero(parse_scalar(p.alpha, S.exact) - half, vtol):
        deformation = matching_deformation(p.alpha, S.exact)
        L, S, p = h_deformation(L, S, p, deformation, vtol)
        if not is_zero(p.alpha - half, vtol):
            raise RuntimeError(f"deformation produced alpha = {p.alpha}, expected 1/2")
    Lf, Sf = L.astype(False), S.astype(False)
    n = (L.dim - 3) // 4
    Lh, Sh, ph = heisenberg(n, exact=False) if n >= 1 else t3(exact=False)
    quads = quaternionic_gram_schmidt(Sf.g, Sf.phis, Sf.horizontal, min(tol, 1e-9)) if n else []
    frame = np.column_stack(list(Sf.xis) + quads)
    psi = inverse(frame)
    rep = isomorphism_report(psi, (Lf, Sf), (Lh, Sh), tol)
    return IsomorphismResult(psi, (L, S, p), (Lh, Sh, ph), rep, deformation)


__all__ = [
    "FlatHyperkahler", "DeformationParams", "IsomorphismResult", "NotNilpotentError",
    "heisenberg", "t3", "su2", "flat_boothby_wang", "reconstruct_bracket",
    "deform_structure", "h_deformation", "quaternionic_gram_schmidt", "conjugate",
    "isomorphism_report", "matching_deformation", "build_isomorphism", "basis_labels",
    "left_multiplication", "vertical_phi",
]
