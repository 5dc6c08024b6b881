"""Regenerate the bundled example documents in src/trisasaki/data."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np

from trisasaki import constructions as cons
from trisasaki.contact import SasakiParams, verify_all
from trisasaki.documents import StructureDocument, dumps, from_document, load_document, to_document
from trisasaki.lie import LieAlgebra

DATA = Path(__file__).resolve().parents[1] / "src" / "trisasaki" / "data"

# expected first failing check of each negative fixture
BROKEN = {
    "h1-broken.json": "3ad.structure_equation[1]",
    "h1-scaled-phi.json": "acms[1].phi_squared",
    "h1-nonunit-xi.json": "acms[1].unit_xi",
    "h1-jacobi.json": "jacobi",
    "h1-wrong-alpha.json": "3ad.structure_equation[1]",
}


def doc_dict(L, S, params=None, labels=None, drop_eta=False):
    d = to_document(L, S, params, labels).model_dump(mode="json", exclude_none=True)
    if drop_eta:
        d.pop("eta")
    return d


def write(name: str, d: dict) -> None:
    d["structure_constants"].sort(key=lambda e: (e["i"], e["j"], e["k"]))
    (DATA / name).write_text(dumps(StructureDocument.model_validate(d)))


def main() -> None:
    L, S, p = cons.heisenberg(1)
    labels = cons.basis_labels(1)
    half = SasakiParams(Fraction(1, 2), Fraction(0))

    write("h1.json", doc_dict(L, S, None, labels))
    L3, S3, _ = cons.t3()
    write("t3.json", doc_dict(L3, S3, None, cons.basis_labels(0)))
    Ls, Ss, _ = cons.su2()
    write("su2.json", doc_dict(Ls, Ss, None, cons.basis_labels(0)))

    # general rational change of basis: vertical and horizontal parts mixed
    P = np.eye(7, dtype=object) * Fraction(1)
    P[3, 4] = Fraction(1, 2)
    P[4, 6] = Fraction(-1, 3)
    P[6, 3] = Fraction(2)
    P[0, 5] = Fraction(1, 4)
    P[1, 1] = Fraction(3, 2)
    Lc, Sc = cons.conjugate(L, S, P)
    write("h1-conjugated.json", doc_dict(Lc, Sc, None, [f"f{i + 1}" for i in range(7)]))

    # [e4, e5] = e5 on the Heisenberg vector space: solvable, not nilpotent
    sol = LieAlgebra(7, {(3, 4, 4): Fraction(1)})
    write("solvable-counterexample.json", doc_dict(sol, S, None, labels))

    d = doc_dict(L, S, half, labels)
    for e in d["structure_constants"]:
        if (e["i"], e["j"], e["k"]) == (3, 4, 0):
            e["value"] = "2"
    write("h1-broken.json", d)

    d = doc_dict(L, S, half, labels)
    d["phi"][0] = [[str(2 * Fraction(x)) for x in row] for row in d["phi"][0]]
    write("h1-scaled-phi.json", d)

    d = doc_dict(L, S, half, labels, drop_eta=True)
    d["xi"][0] = ["2"] + ["0"] * 6
    write("h1-nonunit-xi.json", d)

    d = doc_dict(L, S, half, labels)
    d["structure_constants"] = [e for e in d["structure_constants"]
                                if (e["i"], e["j"], e["k"]) != (3, 4, 0)]
    # [e4, xi1] = e6
    d["structure_constants"].append({"i": 0, "j": 3, "k": 5, "value": "-1"})
    write("h1-jacobi.json", d)

    d = doc_dict(L, S, half, labels)
    d["alpha"] = "1"
    write("h1-wrong-alpha.json", d)

    for name, expected in BROKEN.items():
        Lb, Sb, pb, _ = from_document(load_document(DATA / name))
        report, _ = verify_all(Lb, Sb, pb)
        first = report.first_failure()
        assert first is not None and first.name == expected, (name, first)


if __name__ == "__main__":
    main()
