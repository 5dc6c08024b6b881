"""JSON interchange: structure documents and verification reports.

Exact scalars travel as strings (``"1/2"``, ``"-3"``); float documents may use
plain JSON numbers.  Indices are 0-based.  Matrices are lists of rows, and a
column of ``phi[i]`` is the image of the corresponding basis vector.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .contact import AlmostContact3Structure, SasakiParams, VerificationReport
from .lie import LieAlgebra
from .linalg import Scalar, asarray, format_scalar, is_exact, parse_scalar

FORMAT_VERSION = "1"

Number = Union[str, int, float]


def _check_number(v):
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(v, str):
        try:
            Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a number: {v!r}") from exc
    return v


class ConstantEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int
    j: int
    k: int
    value: Number

    @field_validator("value")
    @classmethod
    def _value(cls, v):
        return _check_number(v)


class StructureDocument(BaseModel):
    """A metric Lie algebra with an almost 3-contact metric structure."""

    model_config = ConfigDict(extra="forbid")

    format_version: Literal["1"] = FORMAT_VERSION
    dim: int = Field(gt=0)
    scalar_mode: Literal["exact", "float"] = "exact"
    basis_labels: Optional[list[str]] = None
    structure_constants: list[ConstantEntry] = []
    metric: list[list[Number]]
    xi: list[list[Number]]
    eta: Optional[list[list[Number]]] = None
    phi: list[list[list[Number]]]
    alpha: Optional[Number] = None
    delta: Optional[Number] = None

    @field_validator("metric", "xi", "eta", "phi")
    @classmethod
    def _numbers(cls, v):
        if v is not None:
            for x in np.asarray(v, dtype=object).ravel():
                _check_number(x)
        return v

    @field_validator("alpha", "delta")
    @classmethod
    def _scalar(cls, v):
        return v if v is None else _check_number(v)

    @model_validator(mode="after")
    def _consistent(self):
        n = self.dim
        if self.basis_labels is not None and len(self.basis_labels) != n:
            raise ValueError(f"basis_labels has {len(self.basis_labels)} entries, dim is {n}")
        for pos, e in enumerate(self.structure_constants):
            if not all(0 <= x < n for x in (e.i, e.j, e.k)):
                raise ValueError(f"structure_constants[{pos}]: index out of range for dim {n}")
            if not e.i < e.j:
                raise ValueError(f"structure_constants[{pos}]: need i < j, got i={e.i}, j={e.j}")
        if len(self.metric) != n or any(len(r) != n for r in self.metric):
            raise ValueError(f"metric must be {n}x{n}")
        m = np.array([[Fraction(str(x)) for x in r] for r in self.metric], dtype=object)
        if not np.all(m == m.T):
            raise ValueError("metric is not symmetric")
        for name in ("xi", "eta"):
            vecs = getattr(self, name)
            if vecs is None:
                continue
            if len(vecs) != 3 or any(len(v) != n for v in vecs):
                raise ValueError(f"{name} must be three vectors of length {n}")
        if len(self.phi) != 3 or any(len(p) != n or any(len(r) != n for r in p)
                                     for p in self.phi):
            raise ValueError(f"phi must be three {n}x{n} matrices")
        return self


class CheckEntry(BaseModel):
    name: str
    status: Literal["pass", "fail", "skip"]
    witness: list[int] = []
    defect: Optional[str] = None
    formula: str = ""
    detail: str = ""


class ReportDocument(BaseModel):
    format_version: Literal["1"] = FORMAT_VERSION
    overall: Literal["pass", "fail"]
    checks: list[CheckEntry]
    inferred_parameters: Optional[dict[str, str]] = None


# -- conversion -----------------------------------------------------------------------

def _num(x: Scalar, exact: bool):
    return format_scalar(x) if exact else float(x)


def _matrix(m, exact: bool) -> list:
    return [[_num(x, exact) for x in row] for row in np.asarray(m)]


def to_document(L: LieAlgebra, S: AlmostContact3Structure, params: SasakiParams | None = None,
                labels: list[str] | None = None) -> StructureDocument:
    exact = L.exact
    consts = [ConstantEntry(i=i, j=j, k=k, value=_num(v, exact))
              for (i, j, k), v in L.constants.items()]
    data = dict(
        dim=L.dim,
        scalar_mode="exact" if exact else "float",
        basis_labels=labels,
        structure_constants=consts,
        metric=_matrix(S.g, exact),
        xi=[[_num(x, exact) for x in v] for v in S.xis],
        eta=[[_num(x, exact) for x in v] for v in S.etas],
        phi=[_matrix(p, exact) for p in S.phis],
    )
    if params is not None:
        if params.alpha is not None:
            data["alpha"] = _num(params.alpha, exact)
        data["delta"] = _num(params.delta, exact)
    return StructureDocument(**data)


def from_document(doc: StructureDocument, mode: str | None = None, tol: float | None = None):
    """Return ``(L, S, params or None, labels)``; ``mode`` overrides ``scalar_mode``."""
    exact = (mode or doc.scalar_mode) == "exact"
    consts = {(e.i, e.j, e.k): parse_scalar(e.value, exact) for e in doc.structure_constants}
    L = LieAlgebra(doc.dim, consts, exact)
    S = AlmostContact3Structure.build(
        asarray(_parse_nested(doc.metric, exact), exact),
        [_parse_nested(v, exact) for v in doc.xi],
        [_parse_nested(p, exact) for p in doc.phi],
        None if doc.eta is None else [_parse_nested(v, exact) for v in doc.eta],
        exact=exact, tol=tol)
    params = None
    if doc.alpha is not None or doc.delta is not None:
        alpha = None if doc.alpha is None else parse_scalar(doc.alpha, exact)
        delta = parse_scalar(0 if doc.delta is None else doc.delta, exact)
        params = SasakiParams(alpha, delta)
    return L, S, params, doc.basis_labels


def _parse_nested(v, exact: bool):
    arr = np.asarray(v, dtype=object)
    out = np.empty(arr.shape, dtype=object if exact else float)
    for idx, x in np.ndenumerate(arr):
        out[idx] = parse_scalar(x, exact)
    return out


def dumps(doc: BaseModel) -> str:
    """Canonical text form: fixed field order, two-space indent, trailing newline."""
    return json.dumps(doc.model_dump(mode="json", exclude_none=True), indent=2,
                      ensure_ascii=False) + "\n"


def load_document(path: str | Path) -> StructureDocument:
    text = Path(path).read_text()
    return StructureDocument.model_validate_json(text)


def save_document(doc: BaseModel, path: str | Path) -> None:
    Path(path).write_text(dumps(doc))


def report_document(report: VerificationReport,
                    params: SasakiParams | None = None) -> ReportDocument:
    checks = [CheckEntry(name=c.name, status=c.status, witness=[int(w) for w in c.witness],
                         defect=None if c.defect is None else format_scalar(c.defect),
                         formula=c.formula, detail=c.detail)
              for c in report.checks]
    inferred = None
    if params is not None:
        inferred = {"alpha": "any" if params.alpha is None else format_scalar(params.alpha),
                    "delta": format_scalar(params.delta)}
    return ReportDocument(overall="pass" if report.passed else "fail", checks=checks,
                          inferred_parameters=inferred)


def matrix_payload(m) -> list:
    m = np.asarray(m)
    return _matrix(m, is_exact(m))
