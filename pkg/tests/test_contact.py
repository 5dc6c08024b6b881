import itertools
from fractions import Fraction

import pytest

from conftest import BROKEN_FIXTURES, load_fixture, valid_algebras
from trisasaki import constructions as cons
from trisasaki.contact import (
    AlmostContact3Structure,
    IncompatibleStructureError,
    NotSasakianError,
    PreconditionError,
    SasakiParams,
    differentials,
    fundamental_form,
    horizontal_part,
    infer_parameters,
    killing_check,
    reeb_commutators,
    reeb_consistent,
    verify_3_compat,
    verify_3ad,
    verify_acms,
    verify_all,
    verify_degenerate,
)
from trisasaki.forms import AlternatingForm, wedge
from trisasaki.lie import LieAlgebra, center, is_nilpotent
from trisasaki.linalg import asarray, basis_vector, eye, zeros

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def h1():
    return cons.heisenberg(1)


# -- fundamental form -------------------------------------------------------------------------

def test_fundamental_form_standard_complex_structure():
    J = zeros((4, 4))
    J[1, 0], J[0, 1], J[3, 2], J[2, 3] = 1, -1, 1, -1  # J e1 = e2, J e3 = e4
    phi = fundamental_form(eye(4), J)
    assert phi == -(AlternatingForm.basis(4, 0, 1) + AlternatingForm.basis(4, 2, 3))
    assert phi(basis_vector(4, 0), basis_vector(4, 1)) == -1


def test_fundamental_form_of_zero_endomorphism():
    assert fundamental_form(eye(1), zeros((1, 1))).is_zero()


def test_fundamental_form_rejects_non_alternating():
    sym = asarray([[0, 1], [1, 0]])
    with pytest.raises(IncompatibleStructureError):
        fundamental_form(eye(2), sym)


def test_h1_fundamental_form_value(h1):
    _, S, _ = h1
    phi1 = fundamental_form(S.g, S.phis[0])
    assert phi1.coefficient(3, 4) == -1


def test_vertical_part_of_fundamental_form(h1):
    # Phi_i restricted to V is -eta_j ^ eta_k
    _, S, _ = h1
    etas = S.eta_forms()
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        phi = fundamental_form(S.g, S.phis[i])
        vertical = phi - horizontal_part(S, phi)
        assert vertical == -wedge(etas[j], etas[k])


# -- horizontal part ---------------------------------------------------------------------------

def test_horizontal_part_examples(h1):
    _, S, _ = h1
    etas = S.eta_forms()
    assert horizontal_part(S, wedge(etas[1], etas[2])).is_zero()
    hform = AlternatingForm.basis(7, 3, 5) + 2 * AlternatingForm.basis(7, 4, 6)
    assert horizontal_part(S, hform) == hform
    phi1 = fundamental_form(S.g, S.phis[0])
    expected = -(AlternatingForm.basis(7, 3, 4) + AlternatingForm.basis(7, 5, 6))
    assert horizontal_part(S, phi1) == expected


def test_horizontal_part_vanishes_on_vertical_arguments(h1):
    _, S, _ = h1
    phi2 = horizontal_part(S, fundamental_form(S.g, S.phis[1]))
    for xi in S.xis:
        for b in range(7):
            assert phi2(xi, basis_vector(7, b)) == 0


# -- almost contact axioms -------------------------------------------------------------------------

@pytest.mark.parametrize("make", [cons.t3, lambda: cons.heisenberg(1), lambda: cons.heisenberg(2)])
def test_acms_passes_on_standard_structures(make):
    _, S, _ = make()
    for t in S.triples:
        assert verify_acms(S.g, t).passed


def test_acms_scaled_phi_fails_phi_squared(h1):
    _, S, _ = h1
    t = S.triples[0]
    scaled = type(t)(t.xi, t.eta, 2 * t.phi)
    report = verify_acms(S.g, scaled)
    assert report.first_failure().name == "acms.phi_squared"


def test_3_compat_passes(h1):
    assert verify_3_compat(h1[1]).passed
    assert verify_3_compat(cons.t3()[1]).passed
    assert verify_3_compat(cons.heisenberg(2)[1]).passed


def test_negated_phi3_on_horizontal_breaks_product_rule(h1):
    _, S, _ = h1
    p = S.horizontal_projection()
    phi3 = S.phis[2] - 2 * (S.phis[2] @ p)
    report = verify_3_compat(S.replace_phi(2, phi3))
    assert [c.name for c in report.failures()] == ["compat.phi_product[1,2,3]",
                                                   "compat.phi_product[2,3,1]",
                                                   "compat.phi_product[3,1,2]"]


def test_negated_phi3_everywhere_fails_first_at_product_rule(h1):
    _, S, _ = h1
    report = verify_3_compat(S.replace_phi(2, -S.phis[2]))
    assert not report["compat.phi_product[1,2,3]"].passed


def test_splitting_dimensions(h1):
    _, S, _ = h1
    assert S.vertical.dim == 3 and S.horizontal.dim == 4
    assert verify_3_compat(S)["compat.dimensions"].passed


# -- structure equations ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_3ad_heisenberg(n):
    L, S, p = cons.heisenberg(n)
    assert p == SasakiParams(HALF, 0)
    assert verify_3ad(L, S, p).passed


def test_3ad_wrong_alpha_defect_factor(h1):
    L, S, _ = h1
    report = verify_3ad(L, S, SasakiParams(Fraction(1), 0))
    assert not report.passed
    # d eta_1 stays -(e45 + e67), the right side doubles
    c = report["3ad.structure_equation[1]"]
    assert abs(c.defect) == 1


@pytest.mark.parametrize("alpha", [Fraction(1), Fraction(-3, 2), Fraction(7)])
def test_t3_any_alpha(alpha):
    L, S, _ = cons.t3()
    assert verify_3ad(L, S, SasakiParams(alpha, 0)).passed
    assert verify_degenerate(L, S, alpha).passed


def test_su2_non_degenerate():
    L, S, p = cons.su2()
    assert verify_3ad(L, S, p).passed
    assert reeb_consistent(L, S, 1)
    assert not reeb_consistent(L, S, 0)


def test_degenerate_heisenberg(h1):
    L, S, _ = h1
    assert verify_degenerate(L, S, HALF).passed
    assert verify_degenerate(*cons.heisenberg(2)[:2], HALF).passed
    assert not verify_degenerate(L, S, 1).passed


def test_flat_boothby_wang_alpha_one_is_degenerate():
    L, S, _ = cons.flat_boothby_wang(cons.FlatHyperkahler.standard(1), 1)
    assert verify_degenerate(L, S, 1).passed


def test_preconditions_are_reported_separately():
    L, S, p, _ = load_fixture("h1-jacobi.json")
    with pytest.raises(PreconditionError) as info:
        verify_3ad(L, S, p)
    assert info.value.report.first_failure().name == "jacobi"


def test_3ad_and_degenerate_agree_on_degenerate_examples():
    for name, L, S in valid_algebras():
        try:
            p = infer_parameters(L, S)
        except NotSasakianError:
            continue
        if p.delta != 0:
            continue
        alpha = p.alpha if p.alpha is not None else Fraction(1)
        assert verify_3ad(L, S, SasakiParams(alpha, 0)).passed == \
            verify_degenerate(L, S, alpha).passed, name


# -- Reeb vectors and Killing fields ---------------------------------------------------------

def test_reeb_commutators_vanish(h1):
    for L, S in (h1[:2], cons.t3()[:2]):
        table = reeb_commutators(L, S)
        assert not any(v.any() for row in table for v in row)


def test_su2_reeb_table():
    L, S, _ = cons.su2()
    table = reeb_commutators(L, S)
    assert list(table[0][1]) == [0, 0, 2]
    assert list(table[1][2]) == [2, 0, 0]
    assert list(table[2][0]) == [0, 2, 0]


def test_killing_examples(h1):
    L, S, _ = h1
    for xi in S.xis:
        assert killing_check(L, S.g, xi)
    assert killing_check(L, S.g, S.xis[0])
    affine = LieAlgebra(2, {(0, 1, 1): Fraction(1)})
    assert not killing_check(affine, eye(2), basis_vector(2, 0))


def test_degenerate_implies_killing_and_commuting():
    for name, L, S in valid_algebras():
        try:
            p = infer_parameters(L, S)
        except NotSasakianError:
            continue
        alpha = p.alpha if p.alpha is not None else Fraction(1)
        if p.delta == 0 and verify_degenerate(L, S, alpha).passed:
            assert all(killing_check(L, S.g, xi) for xi in S.xis), name
            assert reeb_consistent(L, S, 0), name


def test_center_inside_vertical_and_equal_when_nilpotent():
    for name, L, S in valid_algebras():
        try:
            p = infer_parameters(L, S)
        except NotSasakianError:
            continue
        alpha = p.alpha if p.alpha is not None else Fraction(1)
        if p.delta != 0 or not verify_degenerate(L, S, alpha).passed:
            continue
        Z = center(L)
        assert Z.issubspace(S.vertical), name
        if is_nilpotent(L)[0]:
            assert Z == S.vertical, name


# -- parameter inference -----------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_infer_heisenberg(n):
    L, S, _ = cons.heisenberg(n)
    assert infer_parameters(L, S) == SasakiParams(HALF, 0)


def test_infer_su2_delta_one():
    L, S, _ = cons.su2()
    assert infer_parameters(L, S).delta == 1


def test_infer_perturbed_constant_fails(h1):
    L, S, _ = h1
    consts = dict(L.constants)
    consts[(3, 4, 0)] = Fraction(2)
    with pytest.raises(NotSasakianError, match="not 3-"):
        infer_parameters(LieAlgebra(7, consts), S)


def test_infer_alpha_zero_fails(h1):
    _, S, _ = h1
    with pytest.raises(NotSasakianError, match="α = 0"):
        infer_parameters(LieAlgebra.abelian(7), S)


def test_infer_round_trips_through_verify():
    for name, L, S in valid_algebras():
        p = infer_parameters(L, S)
        alpha = p.alpha if p.alpha is not None else Fraction(1)
        assert verify_3ad(L, S, SasakiParams(alpha, p.delta)).passed, name


def test_infer_float_backend():
    L, S, _ = cons.heisenberg(1, exact=False)
    p = infer_parameters(L, S)
    assert abs(p.alpha - 0.5) < 1e-12 and abs(p.delta) < 1e-12


# -- full pipeline on fixtures ------------------------------------------------------------------

@pytest.mark.parametrize("name,expected", sorted(BROKEN_FIXTURES.items()))
def test_broken_fixture_first_failure(name, expected):
    L, S, p, _ = load_fixture(name)
    report, _ = verify_all(L, S, p)
    assert not report.passed
    assert report.first_failure().name == expected


def test_verify_all_float_mode_on_conjugated_fixture():
    L, S, p, _ = load_fixture("h1-conjugated.json", mode="float")
    report, params = verify_all(L, S, p)
    assert report.passed
    assert abs(params.alpha - 0.5) < 1e-9


def test_structure_rejects_wrong_shapes():
    with pytest.raises(ValueError):
        AlmostContact3Structure.build(eye(3), [basis_vector(3, 0)] * 2, [zeros((3, 3))] * 3)


def test_non_metric_is_a_precondition_failure(h1):
    L, S, _ = h1
    g = S.g.copy()
    g[3, 3] = Fraction(-1)
    bad = AlmostContact3Structure(g, S.triples)
    report, _ = verify_all(L, bad)
    assert not report.passed
    assert report.first_failure().name == "metric"


def test_differentials_are_exact_one_form_images(h1):
    L, S, _ = h1
    d = differentials(L, S)
    assert all(f.degree == 2 for f in d)
    assert sum(len(f.coeffs) for f in d) == 6


def test_every_pair_checked_in_horizontal_identity(h1):
    L, S, _ = h1
    d = differentials(L, S)
    phi = [horizontal_part(S, fundamental_form(S.g, p)) for p in S.phis]
    for i, (a, b) in itertools.product(range(3), itertools.combinations(range(7), 2)):
        assert d[i].coefficient(a, b) == phi[i].coefficient(a, b)
