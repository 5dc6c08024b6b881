from fractions import Fraction

import pytest
import sympy
from sympy.algebras.quaternion import Quaternion

from trisasaki import constructions as cons
from trisasaki import data_path
from trisasaki.documents import from_document, load_document

VALID_FIXTURES = ["h1.json", "t3.json", "su2.json", "h1-conjugated.json"]
BROKEN_FIXTURES = {
    "h1-broken.json": "3ad.structure_equation[1]",
    "h1-scaled-phi.json": "acms[1].phi_squared",
    "h1-nonunit-xi.json": "acms[1].unit_xi",
    "h1-jacobi.json": "jacobi",
    "h1-wrong-alpha.json": "3ad.structure_equation[1]",
}


def load_fixture(name, mode=None):
    return from_document(load_document(data_path(name)), mode)


def valid_algebras():
    """Every bundled or generated structure that should pass, as (name, L, S)."""
    out = []
    for name in VALID_FIXTURES:
        L, S, _, _ = load_fixture(name)
        out.append((name, L, S))
    for n in (1, 2):
        L, S, _ = cons.heisenberg(n)
        out.append((f"heisenberg({n})", L, S))
    L, S, _ = cons.flat_boothby_wang(cons.FlatHyperkahler.standard(1), 1)
    out.append(("flat-bw(alpha=1)", L, S))
    return out


def heisenberg_bracket_oracle(n):
    """[e_a, e_b] for the quaternionic Heisenberg algebra, from quaternion arithmetic.

    Horizontal vectors are quaternion tuples, phi_i is left multiplication by
    i, j, k, and eta_i([X, Y]) = <phi_i X, Y> with the Euclidean product on
    coefficients.  Returns {(a, b): {k: value}} over a < b with nonzero result.
    """
    units = [Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)]
    quat_basis = [Quaternion(1, 0, 0, 0)] + units

    def coords(q):
        return [q.a, q.b, q.c, q.d]

    table = {}
    dim = 4 * n + 3
    for a in range(3, dim):
        for b in range(a + 1, dim):
            blk_a, pos_a = divmod(a - 3, 4)
            blk_b, pos_b = divmod(b - 3, 4)
            if blk_a != blk_b:
                continue
            out = {}
            for i, u in enumerate(units):
                image = coords(u * quat_basis[pos_a])
                val = sum(x * y for x, y in zip(image, coords(quat_basis[pos_b])))
                if val != 0:
                    out[i] = Fraction(int(val))
            if out:
                table[(a, b)] = out
    return table


def derivation_dimension_oracle(L, S, skew=True, commute_phi=True, fix_reeb=True):
    """Dimension of the structure-derivation space by a sympy linear solve."""
    n = L.dim
    D = sympy.Matrix(n, n, lambda r, s: sympy.Symbol(f"d_{r}_{s}"))
    c = L.tensor()

    def br(x, y):
        return sympy.Matrix([sum(sympy.Rational(c[a, b, k]) * x[a] * y[b]
                                 for a in range(n) for b in range(n)) for k in range(n)])

    def rat(m):
        return sympy.Matrix(m.shape[0], m.shape[1],
                            lambda r, s: sympy.Rational(str(m[r, s])))

    unit = [sympy.Matrix([1 if k == i else 0 for k in range(n)]) for i in range(n)]
    eqs = []
    for a in range(n):
        for b in range(a + 1, n):
            eqs.extend(D * br(unit[a], unit[b]) - br(D * unit[a], unit[b])
                       - br(unit[a], D * unit[b]))
    g = rat(S.g)
    if skew:
        eqs.extend(D.T * g + g * D)
    if commute_phi:
        for p in S.phis:
            P = rat(p)
            eqs.extend(D * P - P * D)
    if fix_reeb:
        for xi in S.xis:
            eqs.extend(D * sympy.Matrix([sympy.Rational(str(x)) for x in xi]))
    eqs = [e for e in eqs if e != 0]
    A, _ = sympy.linear_eq_to_matrix(eqs, list(D))
    return n * n - A.rank()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and rep.when == "call":
        rep.user_properties.append(("criterion", mark.args))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            for key, value in getattr(rep, "user_properties", []):
                if key == "criterion":
                    lines.append((value[0], status, value[1]))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title in sorted(lines):
        word = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {word}  {title}")
