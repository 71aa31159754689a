import random
from fractions import Fraction

import pytest

from fatpoints import analyzer as an, geometry
from fatpoints.geometry import PointConfiguration, ProjectivePoint as P
from fatpoints.interpolation import FatPointScheme, verify_multiplicity


@pytest.fixture(scope="module")
def star_seq(star4):
    return an.alpha_sequence(star4, 8)


@pytest.fixture(scope="module")
def qstar_seq(quasi_star3):
    return an.alpha_sequence(quasi_star3, 8)


def test_alpha_single_values(star4, quasi_star3, prop42):
    assert an.alpha(star4, 1) == 3
    assert an.alpha(quasi_star3, 4) == 9
    assert an.alpha(geometry.gen_collinear_plus_point(3, 1), 3) == 5
    assert an.alpha(prop42, 1) == 4


def test_alpha_accepts_scheme(star4):
    assert an.alpha(FatPointScheme(star4, 2)) == 4


def test_star_sequence(star_seq):
    assert star_seq.values == [3, 4, 7, 8, 11, 12, 15, 16]
    assert all(star_seq.certified)
    assert an.beta_sequence(star_seq).full() == [3, 1, 3, 1, 3, 1, 3, 1]


def test_quasi_star_sequence(qstar_seq):
    assert qstar_seq.values[:4] == [3, 5, 7, 9]
    assert an.beta_sequence(qstar_seq).full() == [3, 2, 2, 2, 3, 2, 2, 2]


def test_single_point_sequence():
    seq = an.alpha_sequence(PointConfiguration((P(2, 3, 5),)), 3)
    assert seq.values == [1, 2, 3]
    iv = an.waldschmidt_interval(seq)
    assert iv.lower == iv.upper == 1 and iv.exact


def test_prop42_beta(prop42):
    beta = an.beta_sequence(an.alpha_sequence(prop42, 5))
    assert beta.beta0 == 4 and list(beta.betas) == [2, 3, 3, 3]


def test_witnesses_verify(qstar_seq):
    for e in qstar_seq.entries:
        if e.witness is not None:
            assert verify_multiplicity(e.witness, FatPointScheme(qstar_seq.config, e.m), e.value)


def test_beta_needs_two_terms():
    with pytest.raises(an.PreconditionError):
        an.beta_sequence([3])


@pytest.mark.parametrize("a1, bound", [(1, 1), (3, 2), (4, Fraction(5, 2))])
def test_chudnovsky_bound(a1, bound):
    assert an.chudnovsky_bound(a1) == bound


def test_chudnovsky_on_prop42(prop42):
    seq = an.alpha_sequence(prop42, 4)
    assert an.chudnovsky_bound(seq[1]) <= Fraction(seq[4], 4) == 3


@pytest.mark.parametrize("m, k, d, expected", [(1, 5, 10, Fraction(27, 2)), (2, 2, 2, 4), (3, 3, 4, 9)])
def test_ev_gap_bound(m, k, d, expected):
    assert an.ev_gap_bound(m, k, d) == expected


def test_ev_gap_bound_is_nine_quarters_shift():
    assert an.ev_gap_bound(1, 5, 10) == Fraction(9, 4) * 6


@pytest.mark.parametrize("args", [(1, 1, 3), (1, 3, 2), (0, 2, 2)])
def test_ev_gap_bound_preconditions(args):
    with pytest.raises(an.PreconditionError):
        an.ev_gap_bound(*args)


def test_ev_check_examples(star_seq):
    assert an.ev_check(star_seq)
    assert an.ev_check([3, 4, 6])
    assert not an.ev_check([3, 3])
    assert not an.strictly_increasing([3, 3])


def test_sequence_checks_catch_tampering():
    assert not an.subadditive([2, 5])
    assert not an.chudnovsky_holds([3, 3, 5])
    assert all(an.sequence_checks([3, 4, 7, 8]).values())


def test_quasi_star_interval(qstar_seq):
    iv = an.waldschmidt_interval(qstar_seq)
    assert (iv.upper, iv.upper_at) == (Fraction(9, 4), 4)
    assert iv.conjectured == Fraction(9, 4) and iv.period == (3, 2, 2, 2)
    # every partial bound is certified; the interval keeps the best one
    bounds = [Fraction(a + 1, m + 1) for m, a in enumerate(qstar_seq.values, 1)]
    assert Fraction(19, 9) in bounds
    assert iv.lower == max(bounds) <= iv.upper
    assert not iv.exact


def test_star_interval_is_exact(star_seq):
    iv = an.waldschmidt_interval(star_seq)
    assert iv.lower == iv.upper == 2
    assert iv.to_dict()["upper"] == "2/1"


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_collinear_plus_point_interval(k):
    iv = an.waldschmidt_interval(geometry.gen_collinear_plus_point(k, 3), k)
    assert iv.upper == Fraction(2 * k - 1, k)


def test_periodic_tails():
    tails = list(an.periodic_tails([3, 2, 2, 2, 3, 2, 2, 2]))
    assert (0, (3, 2, 2, 2)) in tails
    assert list(an.periodic_tails([1, 2, 3])) == []


def test_fast_policy_values_match(quasi_star3, qstar_seq):
    fast = an.alpha_sequence(quasi_star3, 8, policy="fast")
    assert fast.values == qstar_seq.values
    assert not any(fast.certified)


# -- classification -------------------------------------------------------


def test_classify_line():
    cfg = PointConfiguration(tuple(P(t, 1, 0) for t in range(4)))
    assert an.classify(cfg, 2).tag == "line"


def test_classify_conic():
    cfg = PointConfiguration(tuple(P(t * t, t, 1) for t in range(6)))
    cls = an.classify(cfg, 3)
    assert cls.tag == "conic" and cls.interval.lower <= 2


def test_classify_four_star(star4):
    cls = an.classify(star4, 4)
    assert cls.tag == "four_star"
    assert cls.interval.upper == 2


def test_classify_quasi_star(quasi_star3):
    cls = an.classify(quasi_star3, 4)
    assert cls.tag == "three_quasi_star"
    assert cls.interval.lower <= Fraction(9, 4) <= cls.interval.upper


def test_classify_collinear_plus_one():
    cls = an.classify(geometry.gen_collinear_plus_point(5, 2), 5)
    assert (cls.tag, cls.k) == ("collinear_plus_one", 5)
    assert cls.interval.upper == Fraction(9, 5) < 2


def test_classify_generic_six():
    cls = an.classify(geometry.gen_generic(6, 7), 10)
    assert cls.tag == "unclassified"
    assert cls.interval.lower > an.NINE_QUARTERS
    assert len(set(cls.evidence["empty_below_at_primes"])) == 2
    assert cls.evidence["witness_verified"]


def test_classify_precondition(star4):
    with pytest.raises(an.PreconditionError):
        an.classify(star4, 1)


@pytest.mark.parametrize("seed", range(3))
def test_classify_invariant_under_permutation_and_rescaling(quasi_star3, seed):
    rng = random.Random(seed)
    pts = list(quasi_star3)
    rng.shuffle(pts)
    factors = [rng.choice([-3, 2, Fraction(1, 5)]) for _ in pts]
    scaled = [P(*(c * t for c in p.coords)) for p, t in zip(pts, factors)]
    base = an.classify(quasi_star3, 4)
    other = an.classify(PointConfiguration(tuple(scaled)), 4, seed=seed)
    assert other.tag == base.tag
    assert other.interval.to_dict() == base.interval.to_dict()
