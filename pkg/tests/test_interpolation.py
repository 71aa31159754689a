from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from fatpoints import geometry, interpolation as ip
from fatpoints.geometry import PointConfiguration, ProjectivePoint as P
from fatpoints.interpolation import FatPointScheme
from oracles import brute_dimension, gauss_rank


def scheme(points, m):
    return FatPointScheme(PointConfiguration(tuple(P(*p) for p in points)), m)


def test_condition_matrix_shape():
    mat = ip.build_condition_matrix(scheme([(1, 2, 3), (0, 1, 1)], 3), 5)
    assert mat.shape == (2 * 6, 21)
    assert all(isinstance(v, int) for r in mat.rows for v in r)


@pytest.mark.parametrize(
    "m, d, dim",
    [(1, 1, 2), (2, 1, 0), (2, 2, 3)],
)
def test_single_point_dimensions(m, d, dim):
    s = scheme([(0, 0, 1)], m)
    mat = ip.build_condition_matrix(s, d)
    assert mat.shape == (comb(m + 1, 2), comb(d + 2, 2))
    assert comb(d + 2, 2) - ip.rank_rational(mat) == dim
    assert ip.system_dimension(s, d).dimension == dim


def test_single_point_m5_d4_empty():
    r = ip.system_dimension(scheme([(3, -1, 2)], 5), 4)
    assert r.dimension == 0 and r.certified and r.witness is None


def test_csv_dump():
    text = ip.build_condition_matrix(scheme([(0, 0, 1)], 1), 1).to_csv()
    assert text == "# d=1,m=1,s=1\n0,0,1\n"


def test_rank_modular_examples():
    p = 2**31 - 1
    zero = ip.ConditionMatrix(1, 1, 1, ((0, 0, 0),))
    assert ip.rank_modular(zero, p) == 0
    ident = ip.ConditionMatrix(1, 1, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert ip.rank_modular(ident, p) == 3


@pytest.mark.parametrize("prime", [2, 3, 9, 1000])
def test_rank_modular_rejects_small_or_composite(prime):
    mat = ip.build_condition_matrix(scheme([(1, 2, 3)], 3), 4)
    with pytest.raises(ip.PrimeTooSmallError):
        ip.rank_modular(mat, prime)


def test_rank_rational_examples(star4):
    tri = scheme([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 1)
    assert ip.rank_rational(ip.build_condition_matrix(tri, 1)) == 3
    assert ip.rank_rational(ip.build_condition_matrix(FatPointScheme(star4, 1), 2)) == 6
    conic6 = scheme([(t * t, t, 1) for t in range(6)], 1)
    assert ip.rank_rational(ip.build_condition_matrix(conic6, 2)) == 5


def _product(forms):
    out = forms[0]
    for f in forms[1:]:
        out = ip.multiply_forms(out, f)
    return out


def star_product(cfg):
    lines = [geometry.line_through(*(cfg[i] for i in sorted(s)[:2])) for s in geometry.collinear_subsets(cfg)]
    return _product([ip.linear_form(l.integer_coeffs()) for l in lines])


def test_four_star_double_points_quartic(star4):
    s = FatPointScheme(star4, 2)
    r = ip.system_dimension(s, 4)
    assert r.dimension >= 1 and r.certified
    assert ip.verify_multiplicity(r.witness, s, 4)
    delta = star_product(star4)
    assert ip.verify_multiplicity(delta, s, 4)


def test_single_line_is_not_singular():
    s = scheme([(1, 0, 1), (2, 0, 1)], 2)
    assert not ip.verify_multiplicity(ip.linear_form((0, 1, 0)), s)


def test_quasi_star_delta(quasi_star3):
    cfg = quasi_star3
    tri = [geometry.line_through(*(cfg[i] for i in sorted(s)[:2])) for s in geometry.collinear_subsets(cfg)]
    extra = [geometry.line_through(cfg[i], cfg[j]) for i, j in ((3, 4), (4, 5), (3, 5))]
    forms = [ip.linear_form(l.integer_coeffs()) for l in tri] * 2 + [ip.linear_form(l.integer_coeffs()) for l in extra]
    delta = _product(forms)
    assert ip.form_degree(delta) == 9
    assert ip.verify_multiplicity(delta, FatPointScheme(cfg, 4))
    assert not ip.verify_multiplicity(delta, FatPointScheme(cfg, 5))


def test_quasi_star_m4_d8_empty(quasi_star3):
    s = FatPointScheme(quasi_star3, 4)
    r = ip.system_dimension(s, 8)
    assert r.dimension == 0 and r.certified
    assert ip.rank_rational(ip.build_condition_matrix(s, 8)) == comb(10, 2)


def test_verify_multiplicity_errors():
    s = scheme([(0, 0, 1)], 1)
    with pytest.raises(ip.DegreeMismatchError):
        ip.verify_multiplicity((1, 0, 0), s, degree=2)
    with pytest.raises(ip.DegreeMismatchError):
        ip.verify_multiplicity((1, 0), s)
    with pytest.raises(ValueError):
        ip.verify_multiplicity((0, 0, 0), s)


def test_low_degree_forms_never_pass():
    # x has degree 1 < 3, so it cannot vanish to order 3 anywhere
    s = scheme([(0, 1, 0)], 3)
    assert not ip.verify_multiplicity((1, 0, 0), s)
    assert ip.system_dimension(s, 1).dimension == 0


def test_fast_policy_never_certifies_positive_dimension(star4):
    r = ip.system_dimension(FatPointScheme(star4, 2), 4, policy="fast")
    assert r.dimension >= 1 and not r.certified and r.witness is None


def test_modular_matrix_matches_exact():
    s = scheme([(1, 2, 3), (-4, 0, 5)], 3)
    p = 1000003
    exact = ip.build_condition_matrix(s, 4)
    mod = ip.condition_matrix_mod(s, 4, p)
    from fatpoints import linalg

    assert linalg.rank_mod(mod, p) == linalg.rank_mod(exact.rows, p)


# -- randomized checks against the independent oracle -----------------------

coord = st.integers(-4, 4)
point = st.tuples(coord, coord, coord).filter(any)
points = st.lists(point, min_size=1, max_size=4, unique_by=lambda t: P(*t))


@settings(max_examples=60)
@given(points, st.integers(1, 2), st.integers(0, 4))
def test_dimension_matches_taylor_oracle(pts, m, d):
    s = scheme(pts, m)
    assert ip.system_dimension(s, d).dimension == brute_dimension(pts, m, d)


@settings(max_examples=40)
@given(points, st.integers(1, 3), st.integers(0, 5))
def test_monotone_and_expected_dimension(pts, m, d):
    s = scheme(pts, m)
    r = ip.system_dimension(s, d)
    assert r.dimension >= comb(d + 2, 2) - len(pts) * comb(m + 1, 2)
    assert ip.system_dimension(scheme(pts, m + 1), d).dimension <= r.dimension
    if r.dimension:
        assert ip.system_dimension(s, d + 1).dimension > 0
        w = ip.multiply_forms(r.witness, ip.linear_form((1, 2, 3)))
        assert ip.verify_multiplicity(w, s)
