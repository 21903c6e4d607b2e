"""Sharpness constructions: functions inside a source space but outside a target.

Lacunary constructions (f0, f4 of the sharpness theorem, f5) are stored as
coefficient arrays and normed through the closed forms.  The Abel-weighted
superpositions f3 and f4 (modulus version) are kept as lists of weighted G
terms, because G at level nu carries frequencies up to 2^(2^(nu+1)); they are
materialised as polynomials only for the smallest truncations.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import roots_genlaguerre

from .embedding import (EmbeddingQuery, SeriesSpec, Verdict, symbolic_convergence, thm44_params,
                        thm45_params)
from .lorentz import ParameterError, lorentz_norm, lorentz_norm_weighted
from .spectrum import GridSamples, LacunarySeries, TrigPoly, evaluate_on_grid

__all__ = [
    "beta_interval",
    "f0_build",
    "AbelSequence",
    "abel_epsilon",
    "hl_cosine_sum",
    "G_s_build",
    "G_nu_build",
    "power_cosine_block",
    "G_nu_samples",
    "G_nu_mesh_samples",
    "lerch_tail",
    "G_nu_lorentz_norm",
    "GTerm",
    "Superposition",
    "B_s",
    "B_nu",
    "f3_build",
    "f4_thm43_build",
    "mu_interval_thm44",
    "mu_interval_thm45",
    "f4_sharpness_build",
    "f5_build",
    "CounterexampleReport",
    "divergence_demo",
    "fit_power",
    "dyadic_increments",
    "increment_decay",
    "series_converges_by_increments",
    "f0_demo",
    "f4_thm44_demo",
    "f5_demo",
    "superposition_ledger",
]


def _inv(theta: float) -> float:
    return 0.0 if math.isinf(theta) else 1.0 / theta


# --- f0: the sharpness function for the modulus-space criterion -----------

def beta_interval(b1: float, theta1: float, b2: float, theta2: float) -> tuple[float, float]:
    """Open interval (1/2 + b1 + 1/theta1, 1/2 + b2 + 1/theta2) for the decay exponent."""
    return 0.5 + b1 + _inv(theta1), 0.5 + b2 + _inv(theta2)


def f0_build(j0: int, beta: float, m: int, s_max: int,
             interval: tuple[float, float] | None = None) -> LacunarySeries:
    """lambda = (s_{j0}+1)^{-beta} on the j0 axis (other nu_j = 0), s_{j0} = 0..s_max."""
    if not 0 <= j0 < m:
        raise ValueError("j0 out of range")
    if interval is not None:
        lo, hi = interval
        if not lo < hi:
            raise ParameterError(f"empty beta interval ({lo}, {hi})")
        if not lo < beta < hi:
            raise ParameterError(f"beta={beta} outside ({lo}, {hi})")
    shape = [1] * m
    shape[j0] = s_max + 1
    lam = (np.arange(s_max + 1, dtype=float) + 1.0) ** (-beta)
    return LacunarySeries(lam.reshape(shape))


# --- Abel weights ---------------------------------------------------------

@dataclass
class AbelSequence:
    eps: np.ndarray
    a: np.ndarray          # the terms a_n^delta, n = 1..N
    theta1: float
    theta2: float
    delta: float | None = None

    def property1(self) -> bool:
        return bool(np.all(self.eps * self.a <= 1.0))

    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.eps) <= 0))

    def convergent_partials(self) -> np.ndarray:
        return np.cumsum(self.eps ** self.theta1 * self.a)

    def divergent_partials(self) -> np.ndarray:
        return np.cumsum(self.eps ** self.theta2 * self.a)


def abel_epsilon(a, theta1: float, theta2: float, N: int | None = None,
                 delta: float | None = None, check: bool = True) -> AbelSequence:
    """eps_n = min(A_n^{-1/theta2}, 1/a_n, eps_{n-1}) with A_n the partial sums of a.

    ``a`` is an array of the terms a_n^delta (n = 1, 2, ...) or a callable
    n -> a_n^delta evaluated on n = 1..N.
    """
    if callable(a):
        if N is None:
            raise ValueError("N required with a callable")
        a = np.asarray(a(np.arange(1, N + 1, dtype=float)), dtype=float)
    a = np.asarray(a, dtype=float)[:N]
    if np.any(a < 0):
        raise ValueError("terms must be non-negative")
    if not theta2 < theta1:
        raise ParameterError("need theta2 < theta1")
    if check and len(a) >= 64:
        v = series_from_terms(a)
        if v is Verdict.CONVERGES:
            raise ValueError("input series converges; Abel weights need a divergent series")
    A = np.cumsum(a)
    with np.errstate(divide="ignore", over="ignore"):
        cand = np.minimum(np.where(A > 0, A ** (-1.0 / theta2), np.inf), np.where(a > 0, 1.0 / a, np.inf))
    eps = np.minimum.accumulate(np.where(np.isfinite(cand), cand, 1.0))
    return AbelSequence(eps, a, theta1, theta2, delta)


def series_from_terms(a: np.ndarray) -> Verdict:
    """Numeric convergence verdict for a one-index series of given terms."""
    n = np.arange(1, len(a) + 1, dtype=float)
    lo = max(int(math.sqrt(len(a))), 3)
    sel = (n >= lo) & (a > 0)
    if sel.sum() < 4:
        return Verdict.CONVERGES
    X = np.column_stack([np.log(n[sel]), np.log(np.log(n[sel])), np.ones(sel.sum())])
    rho, sigma, _ = np.linalg.lstsq(X, np.log(a[sel]), rcond=None)[0]
    if rho < -1.05:
        return Verdict.CONVERGES
    if rho > -0.95 or sigma > -0.95:
        return Verdict.DIVERGES
    return Verdict.INCONCLUSIVE


# --- Hardy-Littlewood cosine sums and the G functions ----------------------

def hl_cosine_sum(j: int, N: int, p: float, m: int = 1) -> TrigPoly:
    """sum_{l=1}^N l^{-(1-1/p)} cos(2 pi l x_j) as a polynomial in m variables."""
    if N < 1 or not 1 < p < math.inf:
        raise ParameterError("need N >= 1 and 1 < p < inf")
    alpha = 1.0 - 1.0 / p
    coeffs = {}
    for l in range(1, N + 1):
        c = 0.5 * l ** (-alpha)
        for sg in (1, -1):
            k = [0] * m
            k[j] = sg * l
            coeffs[tuple(k)] = c
    return TrigPoly(m, coeffs)


def _g_poly(m: int, ranges: Sequence[tuple[int, int]], shifts: Sequence[int], exponent: float) -> TrigPoly:
    """sum_j prod_{k != j} e^{2 pi i shift_k x_k} sum_{l in range_j} l^{-exponent} cos(2 pi l x_j)."""
    out: dict[tuple[int, ...], complex] = {}
    for j in range(m):
        lo, hi = ranges[j]
        if hi - lo > 1 << 20:
            raise ParameterError(f"G term needs {hi - lo} frequencies; use the sampled evaluator")
        for l in range(lo, hi):
            c = 0.5 * l ** (-exponent)
            for sg in (1, -1):
                k = tuple(sg * l if i == j else shifts[i] for i in range(m))
                out[k] = out.get(k, 0) + c
    return TrigPoly(m, out)


def G_s_build(s: Sequence[int], p: float, variant: str = "wide") -> TrigPoly:
    """G_s for the block-space construction.

    ``variant="wide"``: inner sums over 1 <= l < 2^{s_j} with weights
    l^{-(1-1/p)}, which gives the (sum (s_j+1))^{1/tau} norm law.
    ``variant="narrow"``: 2^{s_j-1} <= l <= 2^{s_j}-1 with weights
    l^{-1/(1-1/p)}, kept for comparison.
    """
    s = [int(v) for v in s]
    if any(v < 1 for v in s):
        raise ValueError("need s_j >= 1")
    m = len(s)
    shifts = [(1 << v) - 1 for v in s]
    if variant == "wide":
        ranges, ex = [(1, 1 << v) for v in s], 1.0 - 1.0 / p
    elif variant == "narrow":
        ranges, ex = [(1 << (v - 1), 1 << v) for v in s], 1.0 / (1.0 - 1.0 / p)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _g_poly(m, ranges, shifts, ex)


def _g_nu_range(nu: int) -> tuple[int, int]:
    # s from 2^nu + 1 to 2^{nu+1}, l from 2^{s-1} to 2^s - 1: one contiguous range
    return 1 << (1 << nu), 1 << (1 << (nu + 1))


def G_nu_build(nu: Sequence[int], p: float, max_nu: int = 4) -> TrigPoly:
    nu = [int(v) for v in nu]
    if any(v < 0 for v in nu):
        raise ValueError("need nu_j >= 0")
    if max(nu) > max_nu:
        raise ParameterError(f"nu_j <= {max_nu} at desk scale (frequency 2^(2^(nu+1)))")
    shifts = [(1 << (1 << v)) - 1 for v in nu]
    return _g_poly(len(nu), [_g_nu_range(v) for v in nu], shifts, 1.0 - 1.0 / p)


_LAGUERRE_CACHE: dict[tuple[int, float], tuple[np.ndarray, np.ndarray]] = {}
_ZETA_CACHE: dict[tuple[int, float, int], np.ndarray] = {}


def _laguerre_tail(frac: np.ndarray, A: int, alpha: float, nodes: int) -> np.ndarray:
    key = (nodes, alpha)
    if key not in _LAGUERRE_CACHE:
        _LAGUERRE_CACHE[key] = roots_genlaguerre(nodes, alpha - 1.0)
    u, w = _LAGUERRE_CACHE[key]
    decay = np.exp(-u / A)
    out = np.empty(frac.shape, dtype=complex)
    chunk = 8192
    for i in range(0, len(frac), chunk):
        f = frac[i:i + chunk]
        z = np.exp(2j * np.pi * f)[:, None]
        s = (w / (1.0 - z * decay)).sum(axis=1)
        out[i:i + chunk] = np.exp(2j * np.pi * ((A * f) % 1.0)) * s
    return A ** (-alpha) / gamma_fn(alpha) * out


def _hurwitz(s, a):
    # Euler-Maclaurin in 1/a; mpmath.zeta is slow for large a and negative s
    if a < 4096:
        return mpmath.zeta(s, a)
    a = mpmath.mpf(a)
    out = a ** (1 - s) / (s - 1) + a ** (-s) / 2
    for j in range(1, 12):
        out += mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * mpmath.rf(s, 2 * j - 1) * a ** (-s - 2 * j + 1)
    return out


def _zeta_coeffs(A: int, alpha: float, K: int) -> np.ndarray:
    """zeta(alpha - k, A) A^{-k} / k! for k < K."""
    key = (A, alpha, K)
    if key not in _ZETA_CACHE:
        with mpmath.workdps(30):
            _ZETA_CACHE[key] = np.array([
                float(_hurwitz(mpmath.mpf(alpha) - k, A) / mpmath.factorial(k) / mpmath.mpf(A) ** k)
                for k in range(K)
            ])
    return _ZETA_CACHE[key]


def _near_tail(frac: np.ndarray, A: int, alpha: float, K: int = 24) -> np.ndarray:
    # z^A Phi(z, alpha, A) = Gamma(1-alpha)(-w)^{alpha-1} + sum_k zeta(alpha-k, A) w^k / k!,  w = 2 pi i x
    w = 2j * np.pi * frac
    c = _zeta_coeffs(A, alpha, K)
    y = A * w
    poly = np.polyval(c[::-1], y)
    with np.errstate(divide="ignore", invalid="ignore"):
        sing = gamma_fn(1.0 - alpha) * (-w) ** (alpha - 1.0)
    return np.where(frac == 0, np.inf, sing) + poly


def _tail_power_exp_sum(x, A: int, alpha: float, nodes: int = 96, near: float = 0.25) -> np.ndarray:
    """sum_{l >= A} l^{-alpha} e^{2 pi i l x} for 0 < alpha < 1.

    Away from the integers: l^{-alpha} as a Laplace integral, summed as a
    geometric series and integrated by generalised Gauss-Laguerre quadrature.
    Within near/A of an integer: the Hurwitz-zeta expansion of the Lerch
    transcendent, whose power series in A*x converges fast there.
    """
    x = np.asarray(x, dtype=float)
    frac = x - np.round(x)
    out = np.empty(x.shape, dtype=complex)
    far = np.abs(frac) * A >= near
    out[far] = _laguerre_tail(frac[far], A, alpha, nodes)
    out[~far] = _near_tail(frac[~far], A, alpha)
    return out


def lerch_tail(x: float, A: int, alpha: float) -> complex:
    """Reference value of the same tail through mpmath's Lerch transcendent."""
    z = mpmath.expjpi(2 * mpmath.mpf(x))
    return complex(z ** A * mpmath.lerchphi(z, alpha, A))


def power_cosine_block(x, lo: int, hi: int, alpha: float) -> np.ndarray:
    """sum_{l=lo}^{hi-1} l^{-alpha} cos(2 pi l x), evaluated without materialising the sum."""
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    return (_tail_power_exp_sum(x, lo, alpha) - _tail_power_exp_sum(x, hi, alpha)).real


def G_nu_samples(nu: int, p: float, n: int, seed: int = 0) -> GridSamples:
    """Values of the one-variable G_nu at jittered points (i + U_i)/n."""
    rng = np.random.default_rng(seed)
    x = (np.arange(n) + rng.random(n)) / n
    lo, hi = _g_nu_range(int(nu))
    return GridSamples(1, n, power_cosine_block(x, lo, hi, 1.0 - 1.0 / p))


def G_nu_mesh_samples(nu: int, p: float, n: int = 1 << 18, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """(values, cell measures) of G_nu on a graded mesh of (0, 1/2].

    G_nu is even, and most of its mass sits at distances between 2^-(2^(nu+1))
    and 2^-(2^nu) from the origin, far below any uniform grid once nu = 4.  The
    mesh merges n/2 uniform cells with n/2 geometric cells reaching well inside
    the smallest scale; each cell is sampled once at a uniformly jittered point.
    """
    lo, hi = _g_nu_range(int(nu))
    rng = np.random.default_rng(seed)
    deepest = math.log2(hi) + 8
    edges = np.unique(np.concatenate([
        [0.0],
        np.exp2(-np.linspace(deepest, 1.0, n // 2)),
        np.linspace(0.0, 0.5, n // 2 + 1),
    ]))
    widths = np.diff(edges)
    x = edges[:-1] + rng.random(len(widths)) * widths
    return power_cosine_block(x, lo, hi, 1.0 - 1.0 / p), widths


def G_nu_lorentz_norm(nu: int, p: float, tau: float, n: int = 1 << 18, method: str = "auto",
                      seed: int = 0) -> float:
    """||G_nu||_{p,tau} in one variable; ``method`` is "grid", "mesh" or "auto"."""
    lo, hi = _g_nu_range(int(nu))
    if method == "auto":
        method = "grid" if hi <= 256 else "mesh"
    if method == "grid":
        return lorentz_norm(evaluate_on_grid(G_nu_build([nu], p), n), p, tau)
    if method == "mesh":
        return lorentz_norm_weighted(*G_nu_mesh_samples(nu, p, n, seed), p, tau)
    raise ValueError(f"unknown method {method!r}")


# --- Abel-weighted superpositions -----------------------------------------

@dataclass(frozen=True)
class GTerm:
    index: tuple[int, ...]
    shell: int
    coef: float


@dataclass
class Superposition:
    """sum of coef * G_index, grouped by shell; ``kind`` is "s" or "nu"."""

    kind: str
    p: float
    terms: list[GTerm]
    abel: AbelSequence | None = None
    variant: str = "wide"

    def truncate(self, n_max: int) -> "Superposition":
        return Superposition(self.kind, self.p, [t for t in self.terms if t.shell <= n_max], self.abel, self.variant)

    def shells(self) -> list[int]:
        return sorted({t.shell for t in self.terms})

    def to_trigpoly(self) -> TrigPoly:
        m = len(self.terms[0].index) if self.terms else 1
        out = TrigPoly.zero(m)
        for t in self.terms:
            g = G_s_build(t.index, self.p, self.variant) if self.kind == "s" else G_nu_build(t.index, self.p)
            out = out + g.scale(t.coef)
        return out


def B_s(s: Sequence[int], q: EmbeddingQuery) -> float:
    """prod s_j^{b2_j - b1_j} (sum (s_j+1))^{1/tau2 - 1/tau1}."""
    return math.prod(sj ** d for sj, d in zip(s, q.db)) * sum(sj + 1 for sj in s) ** q.c


def B_nu(nu: Sequence[int], q: EmbeddingQuery) -> float:
    """prod 2^{nu_j slack_j} (sum 2^{nu_j})^{1/tau2 - 1/tau1}."""
    return math.prod(2.0 ** (v * sl) for v, sl in zip(nu, q.slack)) * sum(2.0 ** v for v in nu) ** q.c


def _shell_points(m: int, n: int, lo: int, weight: Callable[[tuple[int, ...]], int]) -> list[tuple[int, ...]]:
    pts = []
    for s in product(range(lo, n + 1), repeat=m):
        if weight(s) == n:
            pts.append(s)
    return pts


def f3_build(q: EmbeddingQuery, n_max: int, variant: str = "wide", N_abel: int = 4096) -> Superposition:
    """Abel-weighted superposition of G_s over shells n = sum (s_j+1) <= n_max.

    Applies when the block-space criterion series diverges for the query.
    """
    from .embedding import thm42_condition_4_4

    spec = thm42_condition_4_4(q)
    if symbolic_convergence(spec) is Verdict.CONVERGES:
        raise ParameterError("criterion series converges: the embedding holds, no counterexample")
    m, d = q.m, q.delta
    shell_of = lambda s: sum(v + 1 for v in s)
    # a_n^delta = n^{c delta} sigma_n with sigma_n summing prod s_j^{(b2-b1) delta}
    n_lim = max(N_abel, n_max)
    sig = _sigma_plain(q, n_lim)
    n = np.arange(1, n_lim + 1, dtype=float)
    a_delta = n ** (q.c * d) * sig
    abel = abel_epsilon(a_delta, q.source.theta, q.target.theta, delta=d, check=False)
    terms = []
    for nn in range(2 * m, n_max + 1):
        for s in _shell_points(m, nn, 1, shell_of):
            coef = (abel.eps[nn - 1] * B_s(s, q) ** (d / q.target.theta)
                    * math.prod((sj + 1) ** (-b) for sj, b in zip(s, q.target.b))
                    * nn ** (-1.0 / q.target.tau))
            terms.append(GTerm(s, nn, coef))
    return Superposition("s", q.source.p, terms, abel, variant)


def _sigma_plain(q: EmbeddingQuery, N: int) -> np.ndarray:
    """sigma_n for n = 1..N over the shells sum (s_j+1) = n, s_j >= 1."""
    d = q.delta
    spec = SeriesSpec(q.m, tuple(x * d for x in q.db), 0.0, kind="plain")
    from .embedding import _power_shell_logs

    logs = _power_shell_logs(spec, N)
    with np.errstate(over="ignore"):
        return np.exp(logs[1:])


def f4_thm43_build(q: EmbeddingQuery, nu_max: int, N_abel: int = 4096) -> Superposition:
    """Abel-weighted superposition of G_nu over shells n = sum 2^{nu_j}, nu_j <= nu_max.

    Applies when the modulus-space criterion series diverges for the query.
    """
    from .embedding import thm43_condition_4_10

    spec = thm43_condition_4_10(q)
    if symbolic_convergence(spec) is Verdict.CONVERGES:
        raise ParameterError("criterion series converges: the embedding holds, no counterexample")
    m, d = q.m, q.delta
    n_lim = max(N_abel, m * (1 << nu_max))
    sig = np.zeros(n_lim)
    for nu in product(range(int(math.log2(n_lim)) + 1), repeat=m):
        n = sum(1 << v for v in nu)
        if n <= n_lim:
            sig[n - 1] += math.prod(2.0 ** (v * sl * d) for v, sl in zip(nu, q.slack))
    n = np.arange(1, n_lim + 1, dtype=float)
    a_delta = n ** (q.c * d) * sig
    abel = abel_epsilon(a_delta, q.source.theta, q.target.theta, delta=d, check=False)
    terms = []
    for nu in product(range(nu_max + 1), repeat=m):
        nn = sum(1 << v for v in nu)
        coef = (abel.eps[nn - 1] * B_nu(nu, q) ** (d / q.target.theta)
                * math.prod(2.0 ** (-v * (b + _inv(q.target.theta))) for v, b in zip(nu, q.target.b))
                * nn ** (-1.0 / q.target.tau))
        terms.append(GTerm(tuple(nu), nn, coef))
    terms.sort(key=lambda t: (t.shell, t.index))
    return Superposition("nu", q.source.p, terms, abel)


# --- lacunary sharpness functions -----------------------------------------

def mu_interval_thm44(theta: float) -> tuple[float, float]:
    return 1.0 / theta, 0.5


def mu_interval_thm45(b_j0: float, theta: float, gamma: float, eps: float) -> tuple[float, float]:
    """Half-open (lo, lo + eps] with lo = b_{j0} + 1/theta + 1/max(gamma, theta)."""
    lo = b_j0 + _inv(theta) + _inv(max(gamma, theta))
    return lo, lo + eps


def _axis_series(vals: np.ndarray, j0: int, m: int) -> LacunarySeries:
    shape = [1] * m
    shape[j0] = len(vals)
    return LacunarySeries(vals.reshape(shape))


def f4_sharpness_build(eps: float, mu: float, j0: int, v_j0: float, theta: float, m: int,
                       s_max: int) -> LacunarySeries:
    """lambda_s = (s+1)^{-(v_{j0} - eps + 1/theta)} (1 + log2 s)^{-mu}, s = 1..s_max on the j0 axis."""
    lo, hi = mu_interval_thm44(theta)
    if not lo < hi:
        raise ParameterError(f"empty mu interval ({lo}, {hi}): need theta > 2")
    if not lo < mu < hi:
        raise ParameterError(f"mu={mu} outside ({lo}, {hi})")
    if eps <= 0:
        raise ParameterError("need eps > 0")
    s = np.arange(s_max + 1, dtype=float)
    lam = np.zeros(s_max + 1)
    lam[1:] = (s[1:] + 1) ** (-(v_j0 - eps + _inv(theta))) * (1 + np.log2(s[1:])) ** (-mu)
    return _axis_series(lam, j0, m)


def f5_build(mu: float, j0: int, m: int, s_max: int,
             interval: tuple[float, float] | None = None) -> LacunarySeries:
    """lambda_s = (s+1)^{-mu}, s = 1..s_max on the j0 axis."""
    if interval is not None:
        lo, hi = interval
        if not lo < hi:
            raise ParameterError("empty mu interval")
        if not lo < mu <= hi:
            raise ParameterError(f"mu={mu} outside ({lo}, {hi}]")
    s = np.arange(s_max + 1, dtype=float)
    lam = np.zeros(s_max + 1)
    lam[1:] = (s[1:] + 1) ** (-mu)
    return _axis_series(lam, j0, m)


# --- divergence reports ---------------------------------------------------

def fit_power(x: Sequence[float], y: Sequence[float]) -> float:
    """Slope of log y against log x."""
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class CounterexampleReport:
    construction: str
    parameters: dict
    truncations: list[int]
    source: list[float]
    target: list[float]
    source_last_increment: float = 0.0
    source_bounded: bool = False
    target_monotone: bool = False
    growth_power: float = 0.0
    growth_loglog: float = 0.0
    divergence_shown: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["truncation", "source_norm", "target_norm"])
        for t, s, g in zip(self.truncations, self.source, self.target):
            w.writerow([t, f"{s:.10g}", f"{g:.10g}"])
        return buf.getvalue()


def divergence_demo(build: Callable[[int], object], source_norm: Callable[[object], float],
                    target_norm: Callable[[object], float], truncations: Sequence[int],
                    construction: str = "", parameters: dict | None = None,
                    cauchy_tol: float = 1e-3, growth_min: float = 0.01) -> CounterexampleReport:
    """Evaluate both norms along a truncation ladder and judge the evidence.

    The source counts as bounded when its increments shrink and the last one
    is below ``cauchy_tol``; the target counts as divergent when it increases
    monotonically with a positive growth exponent in log n or in log log n.
    """
    truncations = [int(t) for t in truncations]
    if len(truncations) < 5 or any(b <= a for a, b in zip(truncations, truncations[1:])):
        raise ValueError("need at least 5 increasing truncations")
    src, tgt = [], []
    for t in truncations:
        obj = build(t)
        s, g = float(source_norm(obj)), float(target_norm(obj))
        if not (math.isfinite(s) and math.isfinite(g)):
            raise OverflowError(f"norm evaluation overflow at truncation {t}")
        src.append(s)
        tgt.append(g)
    inc = np.abs(np.diff(src))
    half = len(truncations) // 2
    rep = CounterexampleReport(construction, parameters or {}, truncations, src, tgt)
    rep.source_last_increment = float(inc[-1])
    rep.source_bounded = bool(inc[-1] < cauchy_tol and inc[-1] <= inc[0])
    rep.target_monotone = bool(np.all(np.diff(tgt) > 0))
    tt, gg = truncations[half - 1:], tgt[half - 1:]
    if min(gg) > 0:
        rep.growth_power = fit_power(tt, gg)
        rep.growth_loglog = fit_power(np.log(tt), gg)
    grows = rep.target_monotone and (rep.growth_power > growth_min or rep.growth_loglog > growth_min)
    rep.divergence_shown = bool(rep.source_bounded and grows)
    if not rep.divergence_shown:
        rep.notes.append("no divergence" if rep.source_bounded else "source not shown bounded")
    return rep


# --- lacunary demos --------------------------------------------------------

def dyadic_increments(partials: np.ndarray, k_lo: int, k_hi: int) -> np.ndarray:
    """P(2^{k+1}) - P(2^k) for k = k_lo..k_hi-1, with P indexed from 1."""
    return np.array([partials[(1 << (k + 1)) - 1] - partials[(1 << k) - 1] for k in range(k_lo, k_hi)])


def increment_decay(D: np.ndarray, k_lo: int) -> tuple[float, float]:
    """(geometric rate per doubling, power of k) fitted to dyadic increments."""
    k = np.arange(k_lo, k_lo + len(D), dtype=float)
    y = np.log(D)
    geo = float(np.polyfit(k, y, 1)[0])
    powr = float(np.polyfit(np.log(k + 1.5), y, 1)[0])
    return geo, powr


def series_converges_by_increments(D: np.ndarray, k_lo: int) -> bool:
    # sum D_k converges iff D_k decays geometrically or faster than 1/k
    geo, powr = increment_decay(D, k_lo)
    return geo < -0.05 or powr < -1.1


def f0_demo(b1: float = 0.0, theta1: float = 2.0, b2: float = 1.0, theta2: float = 2.0,
            beta: float | None = None, p: float = 2.0, tau: float = 2.0, m: int = 1, j0: int = 0,
            truncations: Sequence[int] = tuple(1 << k for k in range(4, 11))) -> CounterexampleReport:
    """f0 between two modulus spaces, both normed through the tail form with inner exponent 2."""
    from .spaces import SpaceParams, lacunary_boldB_tail_form

    lo, hi = beta_interval(b1, theta1, b2, theta2)
    beta = 0.5 * (lo + hi) if beta is None else beta
    src = SpaceParams(p, tau, theta1, tuple([b1] * m))
    tgt = SpaceParams(p, tau, theta2, tuple([b2] * m))
    rep = divergence_demo(
        lambda n: f0_build(j0, beta, m, n, (lo, hi)),
        lambda f: lacunary_boldB_tail_form(f, src, 2.0),
        lambda f: lacunary_boldB_tail_form(f, tgt, 2.0),
        truncations, "f0",
        {"b1": b1, "theta1": theta1, "b2": b2, "theta2": theta2, "beta": beta, "p": p, "tau": tau, "m": m},
    )
    rep.parameters["predicted_growth"] = (1.0 - (beta - 0.5 - b2) * theta2) / theta2
    return rep


def f4_thm44_demo(p: float = 3.0, tau: float = 3.0, theta: float = 4.0, b: float = 0.0,
                  eps: float = 0.05, mu: float | None = None, k_lo: int = 8, k_hi: int = 20) -> dict:
    """Membership series against the tail functional for the sharpness function f4 (one variable).

    The tail functional grows like N^{eps theta}; the reported fit is for its
    minorant sum 1/((nu+1)(1 + log2 nu)^{2 mu}), whose partial sums grow like
    (log N)^{1 - 2 mu}.
    """
    _, v = thm44_params(p, tau, theta, (b,))
    lo, hi = mu_interval_thm44(theta)
    mu = 0.5 * (lo + hi) if mu is None else mu
    S = 1 << (k_hi + 2)
    lam = f4_sharpness_build(eps, mu, 0, v[0], theta, 1, S).lam.ravel()
    s = np.arange(1, S + 1, dtype=float)
    member = np.cumsum(s ** ((v[0] - eps) * theta) * lam[1:] ** theta)
    tails = np.cumsum(lam[::-1] ** 2)[::-1][1:]            # sum_{s >= nu}, nu = 1..S
    T = np.cumsum((s + 1) ** (b * theta) * tails ** (theta / 2))
    M = np.cumsum(1.0 / ((s + 1) * (1 + np.log2(s)) ** (2 * mu)))
    Dm = dyadic_increments(member, k_lo, k_hi)
    DM = dyadic_increments(M, k_lo, k_hi)
    growth = 1.0 + increment_decay(DM, k_lo)[1]
    ladder = [1 << k for k in range(k_lo, k_hi + 1)]
    ratios = [T[n - 1] / M[n - 1] for n in ladder]
    return {
        "construction": "f4_thm44",
        "parameters": {"p": p, "tau": tau, "theta": theta, "b": b, "v": v[0], "eps": eps, "mu": mu},
        "membership_converges": series_converges_by_increments(Dm, k_lo),
        "membership_increment_power": increment_decay(Dm, k_lo)[1],
        "truncations": ladder,
        "tail_functional": [float(T[n - 1]) for n in ladder],
        "minorant": [float(M[n - 1]) for n in ladder],
        "minorant_growth": growth,
        "predicted_growth": 1.0 - 2.0 * mu,
        "dominates": bool(min(ratios) >= 1.0),
        "tail_functional_power": fit_power(ladder[len(ladder) // 2:], [T[n - 1] for n in ladder[len(ladder) // 2:]]),
    }


def f5_demo(p: float = 1.5, tau: float = 1.5, theta: float = 2.0, b: float = 0.0, eps: float = 0.2,
            mu: float | None = None, k_lo: int = 8, k_hi: int = 20) -> CounterexampleReport:
    """f5 in the modulus space (tail form) but outside the block space with smoothness u + eps."""
    from .spaces import SpaceParams, lacunary_SB_closed_form

    gamma, u = thm45_params(p, tau, theta, (b,))
    lo, hi = mu_interval_thm45(b, theta, gamma, eps)
    mu = 0.5 * (lo + hi) if mu is None else mu
    if not max(gamma, theta) == 2:
        raise ParameterError("the construction needs max(gamma, theta) = 2")
    S = 1 << k_hi
    lam = f5_build(mu, 0, 1, S, (lo, hi)).lam.ravel()
    s = np.arange(1, S + 1, dtype=float)
    tails = np.cumsum(lam[::-1] ** 2)[::-1][1:]
    member = np.cumsum((s + 1) ** (b * theta) * tails ** (theta / 2))
    Dm = dyadic_increments(member, k_lo, k_hi - 1)
    ladder = [1 << k for k in range(k_lo, k_hi + 1)]
    tgt = SpaceParams(p, tau, theta, (u[0] + eps,))
    target = [lacunary_SB_closed_form(lam[: n + 1].reshape(-1), tgt) for n in ladder]
    half = len(ladder) // 2
    rep = CounterexampleReport("f5", {"p": p, "tau": tau, "theta": theta, "b": b, "eps": eps, "mu": mu,
                                      "u": u[0], "gamma": gamma},
                               ladder, [float(member[n - 1]) ** (1 / theta) for n in ladder], target)
    rep.source_last_increment = float(rep.source[-1] - rep.source[-2])
    rep.source_bounded = series_converges_by_increments(Dm, k_lo)
    rep.target_monotone = bool(np.all(np.diff(target) > 0))
    rep.growth_power = fit_power(ladder[half:], target[half:])
    rep.growth_loglog = fit_power(np.log(ladder[half:]), target[half:])
    rep.divergence_shown = bool(rep.source_bounded and rep.target_monotone and rep.growth_power > 0.01)
    rep.parameters["predicted_growth"] = (1.0 - theta * (mu - u[0] - eps)) / theta
    return rep


def superposition_ledger(sup: Superposition, q: EmbeddingQuery) -> tuple[float, float]:
    """(source, target) norms of a truncated superposition from per-term norm laws.

    Each G term is weighted by its smoothness factor and the law
    ||G_s|| ~ (sum (s_j+1))^{1/tau}, or ||G_nu|| ~ (sum 2^{nu_j})^{1/tau}.
    """
    out = []
    for prm in (q.source, q.target):
        vals = []
        for t in sup.terms:
            if sup.kind == "s":
                w = math.prod((sj + 1) ** b for sj, b in zip(t.index, prm.b))
                law = sum(sj + 1 for sj in t.index) ** (1.0 / prm.tau)
            else:
                w = math.prod(2.0 ** (v * (b + _inv(prm.theta))) for v, b in zip(t.index, prm.b))
                law = sum(2.0 ** v for v in t.index) ** (1.0 / prm.tau)
            vals.append(abs(t.coef) * w * law)
        v = np.array(vals)
        out.append(float(v.max(initial=0.0)) if math.isinf(prm.theta) else float(np.sum(v ** prm.theta) ** (1 / prm.theta)))
    return out[0], out[1]
