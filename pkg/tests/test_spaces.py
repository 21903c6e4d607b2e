import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logsmooth.lorentz import ParameterError
from logsmooth.spaces import (
    ModulusConfig, SpaceParams, lacunary_boldB_tail_form, lacunary_SB_closed_form, level_cell, level_of,
    mixed_modulus, norm_SB, norm_SboldB_discrete, norm_SboldB_modulus, poly_lorentz_norm,
)
from logsmooth.spectrum import LacunarySeries, TrigPoly, lacunary_to_trigpoly

COS = TrigPoly.cosine((1,))
R2 = 1 / math.sqrt(2)


def test_params_reject_small_b():
    with pytest.raises(ParameterError):
        SpaceParams(2, 2, 2, (-0.5,))
    SpaceParams(2, 2, 2, (-0.49,))
    SpaceParams(2, 2, math.inf, (0.01,))
    with pytest.raises(ParameterError):
        SpaceParams(2, 2, math.inf, (0.0, -0.01))


def test_sb_lacunary_geometric():
    lam = 2.0 ** -np.arange(11)
    f = lacunary_to_trigpoly(LacunarySeries(lam))
    got = norm_SB(f, SpaceParams(2, 2, 2, (0,)))
    want = math.sqrt(2 / 3 * (1 - 4.0 ** -11))
    assert got.total == pytest.approx(want, abs=1e-4)
    assert got.recompute() == pytest.approx(got.total)


def test_sb_zero_and_single_block():
    prm = SpaceParams(2, 2, 1, (1,))
    assert norm_SB(TrigPoly.zero(1), prm).total == 0
    assert norm_SB(COS, prm).total == pytest.approx(math.sqrt(2), abs=1e-9)


def test_sb_sup_form():
    f = COS + TrigPoly.cosine((4,), 3.0)
    got = norm_SB(f, SpaceParams(2, 2, math.inf, (0.5,)))
    assert got.total == pytest.approx(max(2 ** 0.5 * R2, 4 ** 0.5 * 3 * R2), rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=8), st.floats(0.0, 1.0), st.floats(0.0, 1.0),
       st.sampled_from([1.0, 2.0, 3.5]))
def test_sb_monotone_in_b(lam, b, gap, theta):
    f = lacunary_to_trigpoly(LacunarySeries(lam))
    lo = norm_SB(f, SpaceParams(2, 2, theta, (b,))).total
    hi = norm_SB(f, SpaceParams(2, 2, theta, (b + gap,))).total
    assert lo <= hi * (1 + 1e-12) + 1e-15


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=8), st.floats(-0.2, 1.0), st.sampled_from([1.0, 2.0, 4.0]))
def test_sb_lacunary_matches_closed_form_at_l2(lam, b, theta):
    # a single cosine per block has ||.||_{2,2} = |lambda|/sqrt(2)
    prm = SpaceParams(2, 2, theta, (b,))
    f = lacunary_to_trigpoly(LacunarySeries(lam))
    assert norm_SB(f, prm).total == pytest.approx(R2 * lacunary_SB_closed_form(np.array(lam), prm),
                                                  rel=1e-9, abs=1e-12)


def test_level_cells():
    assert [len(level_cell(l)) for l in range(6)] == [1, 1, 2, 4, 8, 16]
    for l in range(8):
        assert all(level_of(s) == l for s in level_cell(l))
    with pytest.raises(ValueError):
        level_of(0)


def test_discrete_boldB_examples():
    prm = SpaceParams(2, 2, 1, (0,))
    assert norm_SboldB_discrete(TrigPoly.zero(1), prm).total == 0
    got = norm_SboldB_discrete(COS, prm)
    assert got.total == pytest.approx(2 * R2, abs=1e-9)
    assert got.contributions[0][0] == (0,)


def test_discrete_boldB_groups_blocks():
    f = lacunary_to_trigpoly(LacunarySeries(2.0 ** -np.arange(9)))
    got = norm_SboldB_discrete(f, SpaceParams(2, 2, 2, (0,)))
    # blocks s = 1..9 fall in levels 0,1,2,2,3,3,3,3,4
    assert [c[0] for c in got.contributions] == [(0,), (1,), (2,), (3,), (4,)]


def test_modulus_examples():
    assert mixed_modulus(COS, (0.5,), (1,), 2, 2) == pytest.approx(math.sqrt(2), abs=1e-9)
    small = mixed_modulus(COS, (1e-6,), (1,), 2, 2)
    assert small < 1e-5


@settings(max_examples=10, deadline=None)
@given(st.floats(0.01, 1.0), st.integers(2, 9))
def test_modulus_sample_nesting(t, n):
    f = COS + TrigPoly.cosine((3,), 0.5)
    coarse = mixed_modulus(f, (t,), (1,), 2, 2, h_samples=n, refine_tol=None)
    fine = mixed_modulus(f, (t,), (1,), 2, 2, h_samples=2 * n - 1, refine_tol=None)
    assert fine >= coarse * (1 - 1e-12)


def test_modulus_norm_dominates_lorentz():
    f = COS + TrigPoly.cosine((5,), 0.3)
    prm = SpaceParams(2, 1.5, 2, (0.25,))
    got = norm_SboldB_modulus(f, prm, ModulusConfig(levels=6, h_samples=9))
    assert got.total >= poly_lorentz_norm(f, 2, 1.5)
    assert norm_SboldB_modulus(TrigPoly.zero(1), prm).total == 0


def test_closed_form_examples():
    N = 20000
    lam = (np.arange(N) + 1.0) ** -2
    got = lacunary_SB_closed_form(lam, SpaceParams(2, 2, 1, (0,)))
    assert got == pytest.approx(math.pi ** 2 / 6, abs=1 / N)
    c, b = -1.7, 0.8
    assert lacunary_SB_closed_form(np.array([c]), SpaceParams(2, 2, 3, (b,))) == pytest.approx(2 ** b * abs(c))
    assert lacunary_SB_closed_form(np.zeros(5), SpaceParams(2, 2, 3, (0,))) == 0


def _tail_form_loops(lam, b, theta, q):
    lam = list(lam)
    total = 0.0
    for nu in range(1, len(lam) + 1):
        tail = sum(abs(lam[s - 1]) ** q for s in range(nu, len(lam) + 1))
        total += (nu + 1) ** (theta * b) * tail ** (theta / q)
    return total ** (1 / theta)


def test_tail_form_examples():
    prm = SpaceParams(2, 2, 2, (0,))
    assert lacunary_boldB_tail_form(np.array([1.0]), prm, 2) == pytest.approx(1.0)
    assert lacunary_boldB_tail_form(np.zeros(4), prm, 2) == 0
    with pytest.raises(ParameterError):
        lacunary_boldB_tail_form(np.ones(3), prm, 3)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=12), st.floats(0, 1), st.sampled_from([1.0, 2.0, 3.0]),
       st.sampled_from([2.0, 3.0]))
def test_tail_form_matches_loops(lam, b, theta, tau):
    prm = SpaceParams(2.5, tau, theta, (b,))
    for q in {2.0, tau}:
        assert lacunary_boldB_tail_form(np.array(lam), prm, q) == pytest.approx(
            _tail_form_loops(lam, b, theta, q), rel=1e-9, abs=1e-12)


def test_tail_form_two_variables_against_loops():
    rng = np.random.default_rng(3)
    lam = rng.normal(size=(4, 3))
    b, theta, q = (0.3, 0.1), 2.0, 2.0
    total = 0.0
    for n1 in range(1, 5):
        for n2 in range(1, 4):
            tail = sum(abs(lam[s1 - 1, s2 - 1]) ** q for s1 in range(n1, 5) for s2 in range(n2, 4))
            total += (n1 + 1) ** (theta * b[0]) * (n2 + 1) ** (theta * b[1]) * tail ** (theta / q)
    got = lacunary_boldB_tail_form(lam, SpaceParams(2, 2, theta, b), q)
    assert got == pytest.approx(total ** 0.5, rel=1e-12)



@pytest.mark.parametrize("b", [0.01, 0.7])
def test_sup_form_is_limit_on_single_block(b):
    f = TrigPoly.cosine((5,), 2.0)
    sup = norm_SB(f, SpaceParams(2, 2, math.inf, (b,))).total
    for theta in (1.0, 4.0, 50.0):
        assert norm_SB(f, SpaceParams(2, 2, theta, (b,))).total == pytest.approx(sup, rel=1e-12)
