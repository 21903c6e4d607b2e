import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from logsmooth.lorentz import (
    LorentzParams, ParameterError, hl_lorentz_estimate, lorentz_norm, lorentz_norm_weighted, lp_norm,
    rearrange,
)
from logsmooth.spectrum import GridSamples, TrigPoly, evaluate_on_grid

p_st = st.floats(1.05, 8.0)
tau_st = st.floats(1.0, 8.0)
vals_st = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=200)


def cos_samples(n):
    return evaluate_on_grid(TrigPoly.cosine((1,)), n)


def test_rearrange_sorts_absolute_values():
    r = rearrange(np.array([1.0, -3.0, 2.0, 0.0]))
    assert list(r.values) == [3, 2, 1, 0]
    assert r.cell == 0.25


def test_rearrange_cosine_closed_form():
    n = 4096
    r = rearrange(cos_samples(n))
    t = (np.arange(n) + 0.5) / n
    assert np.max(np.abs(r(t) - np.cos(np.pi * t / 2))) <= 2e-3


@given(p_st, tau_st)
def test_constant_has_norm_one(p, tau):
    assert lorentz_norm(GridSamples.constant(1.0, 64), p, tau) == pytest.approx(1.0, rel=1e-12)


def test_cosine_l2():
    assert lorentz_norm(cos_samples(4096), 2, 2) == pytest.approx(1 / math.sqrt(2), abs=5e-4)


def test_cosine_p2_tau1_against_quadrature():
    oracle = 0.5 * quad(lambda t: math.cos(math.pi * t / 2) * t ** -0.5, 0, 1)[0]
    assert oracle == pytest.approx(0.77989, abs=1e-5)
    assert lorentz_norm(cos_samples(8192), 2, 1) == pytest.approx(oracle, abs=1e-3)


@settings(max_examples=50)
@given(vals_st, p_st)
def test_diagonal_is_lebesgue(v, p):
    v = np.array(v)
    assert lorentz_norm(v, p, p) == pytest.approx(lp_norm(v, p), rel=1e-9, abs=1e-12)


@settings(max_examples=50)
@given(vals_st, p_st, tau_st, st.floats(-10, 10), st.randoms())
def test_permutation_and_homogeneity(v, p, tau, c, rnd):
    v = np.array(v)
    w = v.copy()
    rnd.shuffle(w)
    base = lorentz_norm(v, p, tau)
    assert lorentz_norm(w, p, tau) == pytest.approx(base, rel=1e-12, abs=1e-300)
    assert lorentz_norm(c * v, p, tau) == pytest.approx(abs(c) * base, rel=1e-9, abs=1e-12)


@settings(max_examples=50)
@given(vals_st, p_st, tau_st)
def test_weighted_with_equal_cells_matches(v, p, tau):
    v = np.array(v)
    assert lorentz_norm_weighted(v, np.ones_like(v), p, tau) == pytest.approx(
        lorentz_norm(v, p, tau), rel=1e-9, abs=1e-12)


@settings(max_examples=30)
@given(vals_st, p_st, tau_st)
def test_splitting_cells_leaves_norm_unchanged(v, p, tau):
    v = np.array(v)
    doubled = np.repeat(v, 2)
    assert lorentz_norm(doubled, p, tau) == pytest.approx(lorentz_norm(v, p, tau), rel=1e-9, abs=1e-12)


@settings(max_examples=30)
@given(vals_st, p_st, st.floats(1.0, 4.0), st.floats(0.0, 4.0))
def test_tau_monotone(v, p, tau1, gap):
    # with the (tau/p) normalisation the Lorentz scale is non-increasing in tau
    v = np.array(v)
    assert lorentz_norm(v, p, tau1 + gap) <= lorentz_norm(v, p, tau1) * (1 + 1e-9) + 1e-12


def test_lp_examples():
    assert lp_norm(GridSamples.constant(-2.5, 32), 3) == pytest.approx(2.5)
    assert lp_norm(cos_samples(4096), 2) == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert lp_norm(cos_samples(4096), 4) == pytest.approx((3 / 8) ** 0.25, abs=1e-4)


@pytest.mark.parametrize("p,tau", [(1.0, 2.0), (2.0, 0.5), (math.inf, 2.0), (2.0, math.inf)])
def test_parameter_errors(p, tau):
    with pytest.raises(ParameterError):
        LorentzParams(p, tau)
    with pytest.raises(ParameterError):
        lorentz_norm(np.ones(4), p, tau)


def test_hl_estimate_examples():
    N = 4096
    nu = np.arange(1, N + 1, dtype=float)
    H = float(np.sum(1 / nu))
    assert hl_lorentz_estimate(nu ** -0.5, 2, 2) == pytest.approx(math.sqrt(H), rel=1e-12)
    assert hl_lorentz_estimate([1.0], 2, 2) == pytest.approx(1.0)
    a = nu ** (-2 / 3)
    direct = np.sum(a ** 2 * nu ** (2 * (2 / 3) - 1)) ** 0.5
    assert hl_lorentz_estimate(a, 3, 2) == pytest.approx(direct, rel=1e-12)


def test_hl_estimate_rejects_increasing():
    with pytest.raises(ValueError):
        hl_lorentz_estimate([1.0, 2.0], 2, 2)


@settings(max_examples=40)
@given(vals_st, p_st, tau_st, st.randoms())
def test_dominance(v, p, tau, rnd):
    v = np.abs(np.array(v))
    bigger = v + np.array([rnd.uniform(0, 3) for _ in v])
    assert lorentz_norm(v, p, tau) <= lorentz_norm(bigger, p, tau) * (1 + 1e-12)


def test_grid_refinement_is_cauchy():
    f = TrigPoly.cosine((3,)) + TrigPoly.cosine((17,), 0.4) + TrigPoly.cosine((40,), -1.2)
    vals = [lorentz_norm(evaluate_on_grid(f, n), 3.0, 1.5) for n in (1024, 2048, 4096, 8192)]
    steps = np.abs(np.diff(vals))
    assert steps[-1] <= 1e-3 and steps[-1] <= steps[0]
