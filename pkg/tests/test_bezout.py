import dataclasses

import pytest

from fatpoints import bezout as bz
from fatpoints.bezout import CurveClass as C, DivisorClass as D
from fatpoints.recipes import collinear_plus_one_gamma, quasi_star_delta

SEED = 7


@pytest.fixture(scope="module")
def qstar():
    return quasi_star_delta(SEED)


@pytest.fixture(scope="module")
def gamma2():
    return collinear_plus_one_gamma(SEED, 2)


def test_step_scores_quasi_star(qstar):
    _, div, curves = qstar
    assert bz.bezout_step_scores(div, curves)[0] == (9, 12)


def test_step_scores_zero_mults():
    assert bz.bezout_step_scores(D(5, [0, 0]), [C(2, [1, 1]), C(1, [0, 1])]) == [(10, 0), (5, 0)]


def test_step_scores_collinear(gamma2):
    _, div, curves = gamma2
    assert bz.bezout_step_scores(div, curves)[0] == (3, 4)


def test_step_scores_length_mismatch():
    with pytest.raises(bz.BezoutError):
        bz.bezout_step_scores(D(3, [1, 1]), [C(1, [1])])


def test_quasi_star_decomposition(qstar):
    _, div, curves = qstar
    dec = bz.bezout_decompose(div, curves)
    assert dec.coeffs == (2, 2, 2, 1, 1, 1)
    assert dec.residual == D(0, [0] * 6)
    assert [r.subtracted for r in dec.trace] == [(0, 1, 2), (0, 1, 2), (3, 4, 5)]
    assert [r.degree_after for r in dec.trace] == [6, 3, 0]
    assert bz.check_residual_inequality(dec, curves)
    assert bz.reconstruction_holds(dec, curves)


def test_collinear_plus_one_decomposition(gamma2):
    _, div, curves = gamma2
    dec = bz.bezout_decompose(div, curves)
    assert dec.coeffs == (1, 1, 1)
    assert dec.residual == D(0, [0, 0, 0])


def test_no_violation_means_no_change():
    div = D(6, [1, 2, 1])
    curves = [C(1, [1, 1, 0]), C(2, [1, 1, 1])]
    dec = bz.bezout_decompose(div, curves)
    assert dec.coeffs == (0, 0) and dec.residual == div and dec.trace == ()


def test_tampered_coefficients_fail_inequality(qstar):
    _, div, curves = qstar
    dec = bz.bezout_decompose(div, curves)
    bad = dataclasses.replace(dec, coeffs=(1,) + dec.coeffs[1:])
    assert not bz.check_residual_inequality(bad, curves)


def test_empty_curve_list():
    dec = bz.bezout_decompose(D(4, [3, 3]), [])
    assert bz.check_residual_inequality(dec, [])
    assert bz.confluence_test(D(4, [3, 3]), [], 3).identical


@pytest.mark.parametrize("fixture", ["qstar", "gamma2"])
def test_confluence_fixtures(fixture, request):
    _, div, curves = request.getfixturevalue(fixture)
    rep = bz.confluence_test(div, curves, 100, SEED)
    assert rep.identical and rep.counterexamples == []


def test_confluence_single_curve():
    assert bz.confluence_test(D(5, [4, 4, 4]), [C(1, [1, 1, 1])], 10).identical


def test_single_order_respects_chooser(qstar):
    _, div, curves = qstar
    dec = bz.bezout_decompose(div, curves, order="single", choose=lambda v: v[-1])
    assert dec.coeffs == (2, 2, 2, 1, 1, 1)
    assert all(len(r.subtracted) == 1 for r in dec.trace)
    with pytest.raises(bz.BezoutError):
        bz.bezout_decompose(div, curves, order="single", choose=lambda v: 99)
    with pytest.raises(bz.BezoutError):
        bz.bezout_decompose(div, curves, order="sideways")


def test_duplicate_classes_merged():
    line = C(1, [1, 1, 0], "L")
    twin = C(1, [1, 1, 0], "L'")
    # the pair leaves as a unit: (4; 4,4,0) -> (2; 2,2,0) -> (0; 0,0,0)
    dec = bz.bezout_decompose(D(4, [4, 4, 0]), [line, twin])
    assert dec.coeffs == (2, 2)
    assert dec.residual == D(0, [0, 0, 0])
    assert [r.subtracted for r in dec.trace] == [(0, 1), (0, 1)]
    assert dec.notes and "merged" in dec.notes[0]


def test_non_effective_residual_flagged():
    # no conic has two triple points: (2; 3,3) -> (0; 1,1) -> (-2; -1,-1)
    conic = [C(2, [2, 2])]
    dec = bz.bezout_decompose(D(2, [3, 3]), conic)
    assert dec.residual == D(-2, [-1, -1])
    assert dec.non_effective and dec.trace[-1].non_effective
    assert not dec.trace[0].non_effective
    assert bz.reconstruction_holds(dec, conic)
    assert bz.check_residual_inequality(dec, conic)


def test_round_cap_raises():
    # a line through one point never stops violating once the degree drops
    with pytest.raises(bz.NonTerminationError) as err:
        bz.bezout_decompose(D(1, [5]), [C(1, [1])])
    assert not err.value.divisor.effective_looking


def test_curve_validation():
    with pytest.raises(bz.BezoutError):
        C(0, [1])
    with pytest.raises(bz.BezoutError):
        C(1, [-1])


def test_file_roundtrip(qstar):
    import json

    cfg, div, curves = qstar
    cfg2, div2, curves2 = bz.load_problem(json.loads(bz.dump_problem(cfg, div, curves)))
    assert cfg2 == cfg and div2 == div
    assert [(c.degree, c.mults, c.tag) for c in curves2] == [(c.degree, c.mults, c.tag) for c in curves]


@pytest.mark.parametrize("bad", [{}, {"divisor": {"degree": 1}, "curves": []}, {"divisor": {"degree": "x", "mults": []}, "curves": []}])
def test_load_problem_rejects(bad):
    with pytest.raises(bz.BezoutInputError):
        bz.load_problem(bad)


def test_load_problem_length_check(qstar):
    cfg, _, _ = qstar
    with pytest.raises(bz.BezoutError):
        bz.load_problem({"config": cfg.to_dict(), "divisor": {"degree": 1, "mults": [1]}, "curves": []})
