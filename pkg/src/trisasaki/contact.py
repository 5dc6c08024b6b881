"""Almost (3-)contact metric structures on a metric Lie algebra and their checks.

Indices of the three structures are 1-based in check names (``acms[2]``,
``compat.phi_product[1,2,3]``) to follow the usual ξ_1, ξ_2, ξ_3 labelling;
witnesses are 0-based basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .forms import AlternatingForm, metric_dual, wedge
from .lie import LieAlgebra, ce_differential, jacobi_check
from .linalg import (
    DEFAULT_TOL,
    NonMetricError,
    Scalar,
    Subspace,
    all_zero,
    asarray,
    convert,
    dot,
    eye,
    format_scalar,
    frozen,
    is_exact,
    is_positive_definite,
    is_zero,
    max_defect,
    nullspace,
    parse_scalar,
    same_backend,
)

EVEN_PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class IncompatibleStructureError(ValueError):
    """``(g, φ)`` do not define an alternating fundamental form."""


class PreconditionError(ValueError):
    """A verification entry point was called on data failing its preconditions."""

    def __init__(self, message: str, report: "VerificationReport"):
        super().__init__(message)
        self.report = report


class NotSasakianError(ValueError):
    """Parameter inference found no consistent (α, δ)."""


# -- data ---------------------------------------------------------------------

def _arrays_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and is_exact(a) == is_exact(b) and bool(np.all(a == b))


@dataclass(frozen=True, eq=False)
class AlmostContactStructure:
    xi: np.ndarray
    eta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        for name in ("xi", "eta", "phi"):
            object.__setattr__(self, name, frozen(np.asarray(getattr(self, name))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlmostContactStructure):
            return NotImplemented
        return all(_arrays_equal(getattr(self, n), getattr(other, n)) for n in ("xi", "eta", "phi"))


@dataclass(frozen=True, eq=False)
class AlmostContact3Structure:
    """Metric ``g`` plus three almost contact structures ``(ξ_i, η_i, φ_i)``.

    Nothing is verified at construction; see :func:`verify_acms` and
    :func:`verify_3_compat`.
    """

    g: np.ndarray
    triples: tuple[AlmostContactStructure, AlmostContactStructure, AlmostContactStructure]
    tol: float | None = field(default=None, compare=False)

    def __post_init__(self):
        g = frozen(np.asarray(self.g))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "triples", tuple(self.triples))
        if len(self.triples) != 3:
            raise ValueError("an almost 3-contact structure needs exactly three triples")
        n = g.shape[0]
        if g.shape != (n, n):
            raise ValueError("metric must be square")
        arrays = [g]
        for t in self.triples:
            if t.xi.shape != (n,) or t.eta.shape != (n,) or t.phi.shape != (n, n):
                raise ValueError("structure tensors do not match the metric's dimension")
            arrays += [t.xi, t.eta, t.phi]
        same_backend(*arrays)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlmostContact3Structure):
            return NotImplemented
        return _arrays_equal(self.g, other.g) and self.triples == other.triples

    @classmethod
    def build(cls, g, xis: Sequence, phis: Sequence, etas: Sequence | None = None,
              exact: bool = True, tol: float | None = None) -> "AlmostContact3Structure":
        """Assemble from raw data; ``η_i`` default to the metric duals of ``ξ_i``."""
        g = asarray(g, exact)
        xis = [asarray(x, exact) for x in xis]
        phis = [asarray(p, exact) for p in phis]
        if etas is None:
            etas = [metric_dual(g, x) for x in xis]
        else:
            etas = [asarray(e, exact) for e in etas]
        return cls(g, tuple(AlmostContactStructure(x, e, p) for x, e, p in zip(xis, etas, phis)),
                   tol)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.g)

    @property
    def xis(self) -> tuple[np.ndarray, ...]:
        return tuple(t.xi for t in self.triples)

    @property
    def etas(self) -> tuple[np.ndarray, ...]:
        return tuple(t.eta for t in self.triples)

    @property
    def phis(self) -> tuple[np.ndarray, ...]:
        return tuple(t.phi for t in self.triples)

    def eta_forms(self) -> list[AlternatingForm]:
        return [AlternatingForm.from_covector(e) for e in self.etas]

    @cached_property
    def vertical(self) -> Subspace:
        return Subspace.span(self.xis, self.dim, self.tol)

    @cached_property
    def horizontal(self) -> Subspace:
        """``∩ ker η_i``."""
        return Subspace(nullspace(np.array(self.etas), self.tol), self.dim, self.tol)

    def horizontal_projection(self) -> np.ndarray:
        """``id - Σ ξ_i ⊗ η_i``."""
        p = eye(self.dim, self.exact)
        for xi, eta in zip(self.xis, self.etas):
            p = p - np.outer(xi, eta)
        return p

    def astype(self, exact: bool) -> "AlmostContact3Structure":
        if exact == self.exact:
            return self
        return AlmostContact3Structure(
            convert(self.g, exact),
            tuple(AlmostContactStructure(convert(t.xi, exact), convert(t.eta, exact),
                                         convert(t.phi, exact)) for t in self.triples),
            self.tol)

    def replace_phi(self, i: int, phi) -> "AlmostContact3Structure":
        """Copy with ``φ_{i+1}`` swapped out (0-based ``i``)."""
        triples = list(self.triples)
        t = triples[i]
        triples[i] = AlmostContactStructure(t.xi, t.eta, phi)
        return AlmostContact3Structure(self.g, tuple(triples), self.tol)


@dataclass(frozen=True)
class SasakiParams:
    """``(α, δ)`` with ``α ≠ 0``.

    ``alpha=None`` is only produced by :func:`infer_parameters` when the
    horizontal space is trivial: then every nonzero α fits.
    """

    alpha: Scalar | None
    delta: Scalar = Fraction(0)

    def __post_init__(self):
        if self.alpha is not None and self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    @property
    def degenerate(self) -> bool:
        return self.delta == 0

    def __str__(self) -> str:
        a = "any" if self.alpha is None else format_scalar(self.alpha)
        return f"alpha = {a}, delta = {format_scalar(self.delta)}"


# -- reports ---------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    status: str  # "pass" | "fail" | "skip"
    witness: tuple = ()
    defect: Scalar | None = None
    formula: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.status == "fail"), None)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __add__(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.checks + other.checks)

    @property
    def max_defect(self) -> float:
        vals = [abs(c.defect) for c in self.checks if c.defect is not None]
        return float(max(vals)) if vals else 0.0


def _compare(name: str, diff, tol, formula: str = "") -> Check:
    diff = np.asarray(diff)
    value, idx = max_defect(diff)
    if all_zero(diff, tol):
        return Check(name, "pass", (), value, formula)
    return Check(name, "fail", tuple(int(i) for i in idx), value, formula)


def _compare_forms(name: str, lhs: AlternatingForm, rhs: AlternatingForm, tol,
                   formula: str = "") -> Check:
    diff = lhs - rhs
    if not diff.coeffs:
        return Check(name, "pass", (), 0, formula)
    key = max(diff.coeffs, key=lambda k: abs(diff.coeffs[k]))
    value = diff.coeffs[key]
    status = "pass" if diff.is_zero(tol) else "fail"
    return Check(name, status, () if status == "pass" else key, value, formula)


# -- fundamental forms ------------------------------------------------------------

def fundamental_form(g, phi, tol: float | None = None) -> AlternatingForm:
    """``Φ(X, Y) = g(X, φY)``."""
    g = np.asarray(g)
    phi = np.asarray(phi)
    same_backend(g, phi)
    m = dot(g, phi)
    if not all_zero(m + m.T, tol):
        raise IncompatibleStructureError("g(X, φY) is not alternating")
    return AlternatingForm.from_matrix(m, tol)


def horizontal_part(S: AlmostContact3Structure, omega: AlternatingForm) -> AlternatingForm:
    """``Φ ∘ (π_H ⊗ π_H)`` for a 2-form ``Φ``."""
    p = S.horizontal_projection()
    m = omega.to_matrix()
    return AlternatingForm.from_matrix(dot(p.T, m, p), S.tol)


# -- single structures ---------------------------------------------------------------

def verify_acms(g, s: AlmostContactStructure, tol: float | None = None,
                prefix: str = "acms") -> VerificationReport:
    """The almost contact metric axioms, evaluated on all basis pairs.

    Order: unit ξ, η dual to ξ, φξ = 0, φ² = -id + ξ⊗η, metric compatibility.
    """
    g = np.asarray(g)
    n = g.shape[0]
    exact = is_exact(g)
    one = Fraction(1) if exact else 1.0
    checks = [
        _compare(f"{prefix}.unit_xi", np.array([dot(s.xi, g, s.xi) - one]), tol, "g(ξ, ξ) = 1"),
        _compare(f"{prefix}.eta_dual", s.eta - metric_dual(g, s.xi), tol, "η = g(ξ, ·)"),
        _compare(f"{prefix}.phi_xi", dot(s.phi, s.xi), tol, "φξ = 0"),
        _compare(f"{prefix}.phi_squared", dot(s.phi, s.phi) - (-eye(n, exact) + np.outer(s.xi, s.eta)),
                 tol, "φ² = -id + ξ⊗η"),
        _compare(f"{prefix}.metric_compat",
                 dot(s.phi.T, g, s.phi) - (g - np.outer(s.eta, s.eta)), tol,
                 "g(φX, φY) = g(X, Y) - η(X)η(Y)"),
    ]
    return VerificationReport(tuple(checks))


def verify_3_compat(S: AlmostContact3Structure, tol: float | None = None) -> VerificationReport:
    """Compatibility of the three structures plus the vertical/horizontal split."""
    tol = S.tol if tol is None else tol
    checks = []
    for i, j, k in EVEN_PERMUTATIONS:
        tag = f"[{i + 1},{j + 1},{k + 1}]"
        checks.append(_compare(f"compat.phi_xi{tag}", dot(S.phis[i], S.xis[j]) - S.xis[k], tol,
                               "φ_i ξ_j = ξ_k"))
    for i, j, k in EVEN_PERMUTATIONS:
        tag = f"[{i + 1},{j + 1},{k + 1}]"
        checks.append(_compare(f"compat.eta_phi{tag}", dot(S.etas[i], S.phis[j]) - S.etas[k], tol,
                               "η_i ∘ φ_j = η_k"))
    for i, j, k in EVEN_PERMUTATIONS:
        tag = f"[{i + 1},{j + 1},{k + 1}]"
        diff = dot(S.phis[i], S.phis[j]) - (S.phis[k] + np.outer(S.xis[i], S.etas[j]))
        checks.append(_compare(f"compat.phi_product{tag}", diff, tol,
                               "φ_i φ_j = φ_k + ξ_i ⊗ η_j"))
    checks.append(_splitting_check(S, tol))
    n, h = S.dim, S.horizontal.dim
    ok = n % 4 == 3 and h % 4 == 0
    checks.append(Check("compat.dimensions", "pass" if ok else "fail", () if ok else (n, h),
                        None, "dim ≡ 3 mod 4, dim H ≡ 0 mod 4",
                        "" if ok else f"dim = {n}, dim H = {h}"))
    return VerificationReport(tuple(checks))


def _splitting_check(S: AlmostContact3Structure, tol) -> Check:
    formula = "V ⊕ H = whole space, orthogonally"
    v, h = S.vertical, S.horizontal
    if v.dim != 3 or v.dim + h.dim != S.dim:
        return Check("compat.splitting", "fail", (v.dim, h.dim), None, formula,
                     f"dim V = {v.dim}, dim H = {h.dim}, dim = {S.dim}")
    cross = np.array([[dot(x, S.g, y) for y in h.basis] for x in S.xis]) if h.dim else np.zeros((3, 0))
    return _compare("compat.splitting", cross, tol, formula)


# -- Lie-algebraic conditions ---------------------------------------------------------

def _jacobi_as_check(L: LieAlgebra, tol) -> Check:
    rep = jacobi_check(L, tol)
    if rep.passed:
        return Check("jacobi", "pass", (), 0, "Σ_cyc [[e_i, e_j], e_k] = 0")
    v = rep.violations[0]
    value, _ = max_defect(v.defect)
    return Check("jacobi", "fail", v.triple, value, "Σ_cyc [[e_i, e_j], e_k] = 0",
                 f"{len(rep.violations)} violating triple(s)")


def preconditions(L: LieAlgebra, S: AlmostContact3Structure,
                  tol: float | None = None) -> VerificationReport:
    """Jacobi identity, the three almost contact structures, and compatibility."""
    tol = S.tol if tol is None else tol
    if L.dim != S.dim:
        raise ValueError("algebra and structure dimensions differ")
    report = VerificationReport((_jacobi_as_check(L, tol),))
    if not is_positive_definite(S.g, tol):
        report += VerificationReport((Check("metric", "fail", (), None, "g positive definite",
                                            "metric is not positive definite"),))
    for i, s in enumerate(S.triples):
        report += verify_acms(S.g, s, tol, prefix=f"acms[{i + 1}]")
    return report + verify_3_compat(S, tol)


def _require(L, S, tol):
    pre = preconditions(L, S, tol)
    if not pre.passed:
        bad = pre.first_failure()
        raise PreconditionError(f"precondition failed: {bad.name}", pre)


def differentials(L: LieAlgebra, S: AlmostContact3Structure) -> list[AlternatingForm]:
    return [ce_differential(L, e) for e in S.eta_forms()]


def verify_3ad(L: LieAlgebra, S: AlmostContact3Structure, p: SasakiParams,
               tol: float | None = None, check_preconditions: bool = True) -> VerificationReport:
    """``dη_i = 2αΦ_i + 2(α - δ) η_j ∧ η_k`` for each even permutation."""
    tol = S.tol if tol is None else tol
    if p.alpha is None:
        raise ValueError("alpha must be given")
    if check_preconditions:
        _require(L, S, tol)
    alpha = parse_scalar(p.alpha, S.exact)
    delta = parse_scalar(p.delta, S.exact)
    etas = S.eta_forms()
    d = differentials(L, S)
    checks = []
    for i, j, k in EVEN_PERMUTATIONS:
        phi_i = fundamental_form(S.g, S.phis[i], tol)
        rhs = 2 * alpha * phi_i + 2 * (alpha - delta) * wedge(etas[j], etas[k])
        checks.append(_compare_forms(f"3ad.structure_equation[{i + 1}]", d[i], rhs, tol,
                                     "dη_i = 2αΦ_i + 2(α-δ)η_j∧η_k"))
    return VerificationReport(tuple(checks))


def verify_degenerate(L: LieAlgebra, S: AlmostContact3Structure, alpha,
                      tol: float | None = None,
                      check_preconditions: bool = True) -> VerificationReport:
    """``dη_i = 2αΦ_i^H``, ``ker dη_i = V`` and commuting Reeb vectors."""
    tol = S.tol if tol is None else tol
    if check_preconditions:
        _require(L, S, tol)
    alpha = parse_scalar(alpha, S.exact)
    d = differentials(L, S)
    checks = []
    for i in range(3):
        rhs = 2 * alpha * horizontal_part(S, fundamental_form(S.g, S.phis[i], tol))
        checks.append(_compare_forms(f"degenerate.structure_equation[{i + 1}]", d[i], rhs, tol,
                                     "dη_i = 2αΦ_i^H"))
    for i in range(3):
        rad = d[i].radical(tol)
        ok = rad.equals(S.vertical, tol)
        checks.append(Check(f"degenerate.kernel[{i + 1}]", "pass" if ok else "fail",
                            () if ok else (rad.dim,), None, "ker dη_i = V",
                            "" if ok else f"radical has dimension {rad.dim}"))
    table = reeb_commutators(L, S)
    diffs = np.array([table[i][j] for i in range(3) for j in range(3)])
    checks.append(_compare("degenerate.reeb_commute", diffs, tol, "[ξ_i, ξ_j] = 0"))
    return VerificationReport(tuple(checks))


def reeb_commutators(L: LieAlgebra, S: AlmostContact3Structure) -> list[list[np.ndarray]]:
    """``table[i][j] = [ξ_i, ξ_j]`` (0-based)."""
    return [[L.bracket(S.xis[i], S.xis[j]) for j in range(3)] for i in range(3)]


def reeb_consistent(L: LieAlgebra, S: AlmostContact3Structure, delta,
                    tol: float | None = None) -> bool:
    """Whether ``[ξ_i, ξ_j] = 2δ ξ_k`` for every even permutation."""
    delta = parse_scalar(delta, S.exact)
    table = reeb_commutators(L, S)
    return all(all_zero(table[i][j] - 2 * delta * S.xis[k], tol)
               for i, j, k in EVEN_PERMUTATIONS)


def killing_check(L: LieAlgebra, g, x, tol: float | None = None) -> bool:
    """Left-invariant Killing criterion: ``ad_X`` is skew with respect to ``g``."""
    g = np.asarray(g)
    ad = L.ad(np.asarray(x))
    return all_zero(dot(ad.T, g) + dot(g, ad), tol)


# -- parameter inference -------------------------------------------------------------

def _least_squares_ratio(num: list, den: list):
    """Best ``r`` with ``num ≈ r * den``, plus the residuals."""
    dd = sum(d * d for d in den)
    if dd == 0:
        return None, list(num)
    r = sum(n * d for n, d in zip(num, den)) / dd
    return r, [n - r * d for n, d in zip(num, den)]


def infer_parameters(L: LieAlgebra, S: AlmostContact3Structure,
                     tol: float | None = None) -> SasakiParams:
    """Recover ``(α, δ)`` from the bracket, demanding global consistency."""
    tol = S.tol if tol is None else tol
    exact = S.exact
    table = reeb_commutators(L, S)
    num, den = [], []
    for i, j, k in EVEN_PERMUTATIONS:
        v = table[i][j]
        num.extend(v)
        den.extend(2 * S.xis[k])
    delta, residual = _least_squares_ratio(num, den)
    if delta is None or not all(is_zero(r, tol) for r in residual):
        raise NotSasakianError("not 3-(α,δ)-Sasakian: Reeb commutators are not 2δξ_k")
    if not exact and is_zero(delta, tol):
        delta = 0.0

    d = differentials(L, S)
    h = S.horizontal.basis
    num, den = [], []
    for i in range(3):
        phi_i = fundamental_form(S.g, S.phis[i], tol)
        for a in range(len(h)):
            for b in range(a + 1, len(h)):
                num.append(d[i](h[a], h[b]))
                den.append(2 * phi_i(h[a], h[b]))
    alpha, residual = _least_squares_ratio(num, den)
    if alpha is None:
        if any(not is_zero(r, tol) for r in residual):
            raise NotSasakianError("not 3-(α,δ)-Sasakian: dη_i has horizontal part but Φ_i^H = 0")
    elif not all(is_zero(r, tol) for r in residual):
        raise NotSasakianError("not 3-(α,δ)-Sasakian: inconsistent ratios dη_i : 2Φ_i^H")
    elif is_zero(alpha, tol):
        raise NotSasakianError("not 3-(α,δ)-Sasakian: α = 0")
    params = SasakiParams(alpha, delta)
    probe = params if alpha is not None else SasakiParams(Fraction(1) if exact else 1.0, delta)
    if not verify_3ad(L, S, probe, tol, check_preconditions=False).passed:
        raise NotSasakianError("not 3-(α,δ)-Sasakian: structure equations fail for the "
                               f"inferred {params}")
    return params


# -- full pipeline -----------------------------------------------------------------------

def verify_all(L: LieAlgebra, S: AlmostContact3Structure, params: SasakiParams | None = None,
               degenerate_only: bool = False, tol: float | None = None):
    """Preconditions, then the structure equations; later stages are skipped on failure.

    Returns the report and the parameters used (inferred when not given).
    """
    tol = S.tol if tol is None else tol
    report = preconditions(L, S, tol)
    if not report.passed:
        return report + VerificationReport((Check("structure_equations", "skip"),)), params
    if params is None:
        try:
            params = infer_parameters(L, S, tol)
        except NotSasakianError as exc:
            return report + VerificationReport((Check(
                "parameters", "fail", (), None, "dη_i = 2αΦ_i + 2(α-δ)η_j∧η_k", str(exc)),)), None
    probe = params
    if params.alpha is None:
        probe = SasakiParams(Fraction(1) if S.exact else 1.0, params.delta)
    if not degenerate_only:
        report += verify_3ad(L, S, probe, tol, check_preconditions=False)
    if degenerate_only and not is_zero(parse_scalar(params.delta, S.exact), tol):
        report += VerificationReport((Check("degenerate.delta", "fail", (), params.delta,
                                            "δ = 0"),))
    elif is_zero(parse_scalar(params.delta, S.exact), tol):
        report += verify_degenerate(L, S, probe.alpha, tol, check_preconditions=False)
    return report, params


__all__ = [
    "AlmostContactStructure", "AlmostContact3Structure", "SasakiParams", "Check",
    "VerificationReport", "IncompatibleStructureError", "PreconditionError",
    "NotSasakianError", "NonMetricError", "EVEN_PERMUTATIONS", "fundamental_form",
    "horizontal_part", "verify_acms", "verify_3_compat", "preconditions", "verify_3ad",
    "verify_degenerate", "reeb_commutators", "reeb_consistent", "killing_check",
    "infer_parameters", "verify_all", "differentials", "DEFAULT_TOL",
]
