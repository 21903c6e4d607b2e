import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logsmooth.spectrum import (
    GridSamples, LacunarySeries, ResolutionError, TrigPoly, block_extract, blocks, dyadic_cell,
    dyadic_index, evaluate_at, evaluate_on_grid, lacunary_to_trigpoly, mixed_difference, parseval_l2,
)

freq = st.integers(-64, 64)
amp = st.floats(-3, 3, allow_nan=False).filter(lambda v: abs(v) > 1e-6)


@st.composite
def polys(draw, m=1):
    terms = draw(st.dictionaries(st.tuples(*[freq] * m), amp, min_size=0, max_size=12))
    out = TrigPoly.zero(m)
    for k, c in terms.items():
        out = out + TrigPoly.cosine(k, c)
    return out


def test_cell_zero_is_origin():
    assert list(dyadic_cell((0,)).frequencies()) == [(0,)]


def test_cell_one():
    assert sorted(dyadic_cell((1,)).frequencies()) == [(-1,), (1,)]


def test_cell_two_three():
    cell = dyadic_cell((2, 3))
    assert cell.ranges == ((2, 4), (4, 8))
    got = set(cell.frequencies())
    want = {(a, b) for a in (-3, -2, 2, 3) for b in range(-7, 8) if 4 <= abs(b) <= 7}
    assert got == want
    assert cell.size() == len(want)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        dyadic_cell((-1,))


@given(st.tuples(freq, freq))
def test_dyadic_index_is_the_unique_cell(k):
    s = dyadic_index(k)
    assert k in dyadic_cell(s)
    for t in [(s[0] + 1, s[1]), (s[0], max(s[1] - 1, 0) if s[1] else 1)]:
        assert k not in dyadic_cell(t)


def test_block_extract_two_cosines():
    f = TrigPoly.cosine((1,)) + TrigPoly.cosine((4,))
    assert block_extract(f, (1,)).equals(TrigPoly.cosine((1,)))
    assert block_extract(f, (3,)).equals(TrigPoly.cosine((4,)))
    assert len(block_extract(f, (2,))) == 0
    assert set(blocks(f)) == {(1,), (3,)}


def test_blocks_of_zero():
    assert blocks(TrigPoly.zero(2)) == {}


def test_lacunary_blocks_carry_shifted_index():
    lam = np.array([0.3, -1.0, 2.5, 0.75])
    f = lacunary_to_trigpoly(LacunarySeries(lam))
    for s in range(1, 5):
        b = block_extract(f, (s,))
        assert b.equals(TrigPoly.cosine((1 << (s - 1),), lam[s - 1]), tol=1e-15)


@settings(max_examples=60)
@given(polys(m=2))
def test_blocks_partition_spectrum(f):
    total = TrigPoly.zero(2)
    seen = set()
    for s, b in blocks(f).items():
        for k, _ in b:
            assert dyadic_index(k) == s
            assert k not in seen
            seen.add(k)
        total = total + b
    assert total.equals(f, tol=1e-12)


def test_lacunary_examples():
    f = lacunary_to_trigpoly(LacunarySeries([1.0]))
    assert f.equals(TrigPoly.cosine((1,)))
    g = lacunary_to_trigpoly(LacunarySeries([[1.0]]))
    assert len(g) == 4 and all(abs(c - 0.25) < 1e-15 for _, c in g)
    h = lacunary_to_trigpoly(LacunarySeries(2.0 ** -np.arange(11)))
    assert len(h) == 22
    assert h.is_real()


def test_grid_cosine_table():
    v = evaluate_on_grid(TrigPoly.cosine((1,)), 8).values
    want = np.cos(2 * np.pi * np.arange(8) / 8)
    assert np.allclose(v, want, atol=1e-14)


def test_grid_zero_and_peak():
    assert not evaluate_on_grid(TrigPoly.zero(1), 16).values.any()
    f = TrigPoly.cosine((1,)) + TrigPoly.cosine((4,))
    v = evaluate_on_grid(f, 64).values
    assert v.max() == pytest.approx(2.0) and v.argmax() == 0


def test_resolution_error():
    with pytest.raises(ResolutionError):
        evaluate_on_grid(TrigPoly.cosine((5,)), 16)


@settings(max_examples=40)
@given(polys(m=1))
def test_fft_matches_direct(f):
    n = max(4 * max(f.max_freq), 8)
    grid = evaluate_on_grid(f, n).values
    direct = evaluate_at(f, np.arange(n) / n).real
    assert np.allclose(grid, direct, atol=1e-9)


@settings(max_examples=40)
@given(polys(m=1))
def test_parseval_matches_grid_l2(f):
    n = max(4 * max(f.max_freq), 8)
    v = evaluate_on_grid(f, n).values
    assert math.sqrt(np.mean(v ** 2)) == pytest.approx(parseval_l2(f), rel=1e-9, abs=1e-12)


def test_parseval_examples():
    assert parseval_l2(TrigPoly.cosine((1,))) == pytest.approx(1 / math.sqrt(2))
    assert parseval_l2(lacunary_to_trigpoly(LacunarySeries([[1.0]]))) == pytest.approx(0.5)
    assert parseval_l2(TrigPoly.zero(3)) == 0


def test_mixed_difference_examples():
    f = TrigPoly.cosine((1,))
    assert mixed_difference(f, (1,), (0.5,)).equals(f.scale(-2), tol=1e-12)
    assert len(mixed_difference(f, (1,), (0.0,))) == 0
    e = TrigPoly(1, {(1,): 1.0})
    d = mixed_difference(e, (2,), (0.25,))
    assert d.coeff((1,)) == pytest.approx(-2j)


@settings(max_examples=40)
@given(polys(m=2), st.tuples(st.integers(1, 3), st.integers(1, 3)),
       st.tuples(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5)))
def test_mixed_difference_is_pointwise(f, k, h):
    x = np.random.default_rng(0).random((16, 2))
    spectral = evaluate_at(mixed_difference(f, k, h), x)

    def diff(g, axis, order, step):
        for _ in range(order):
            g = (lambda g0: lambda y: g0(y + step * np.eye(2)[axis]) - g0(y))(g)
        return g

    g = lambda y: evaluate_at(f, y)
    g = diff(diff(g, 0, k[0], h[0]), 1, k[1], h[1])
    assert np.allclose(spectral, g(x), atol=1e-8)


@settings(max_examples=30)
@given(polys(m=2))
def test_json_round_trip(f):
    assert TrigPoly.from_json(f.to_json(), m=2).equals(f)


def test_grid_samples_csv_round_trip(tmp_path):
    g = evaluate_on_grid(TrigPoly.cosine((1, 2)), 16)
    g.to_csv(tmp_path / "g.csv")
    back = GridSamples.from_csv(tmp_path / "g.csv")
    assert back.n == 16 and back.m == 2
    assert np.allclose(back.values, g.values)


@settings(max_examples=40)
@given(polys(m=2))
def test_blocks_are_orthogonal(f):
    total = sum(parseval_l2(b) ** 2 for b in blocks(f).values())
    assert total == pytest.approx(parseval_l2(f) ** 2, rel=1e-12, abs=1e-300)
