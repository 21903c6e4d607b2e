"""Norms of the mixed logarithmic smoothness spaces.

Four functionals are provided:

* ``norm_SB`` -- the block space, an l_theta sum of weighted block norms;
* ``norm_SboldB_discrete`` -- the super-dyadic block form of the modulus space,
  the canonical computable value of that norm;
* ``norm_SboldB_modulus`` -- the modulus-of-smoothness integral itself, as a
  lower-bound cross-check;
* closed forms for lacunary series (``lacunary_SB_closed_form`` and
  ``lacunary_boldB_tail_form``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .lorentz import ParameterError, lorentz_norm
from .spectrum import LacunarySeries, TrigPoly, blocks, evaluate_on_grid, mixed_difference

__all__ = [
    "SpaceParams",
    "GridConfig",
    "ModulusConfig",
    "NormBreakdown",
    "default_grid",
    "poly_lorentz_norm",
    "norm_SB",
    "norm_SboldB_discrete",
    "norm_SboldB_modulus",
    "mixed_modulus",
    "level_of",
    "level_cell",
    "lacunary_SB_closed_form",
    "lacunary_boldB_tail_form",
]

DEFAULT_N = {1: 8192, 2: 1024, 3: 128}


@dataclass(frozen=True)
class SpaceParams:
    p: float
    tau: float
    theta: float
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(v) for v in np.atleast_1d(self.b)))
        if not (1 < self.p < math.inf):
            raise ParameterError(f"need 1 < p < inf, got p={self.p}")
        if not (1 <= self.tau < math.inf):
            raise ParameterError(f"need 1 <= tau < inf, got tau={self.tau}")
        if not (self.theta > 0):
            raise ParameterError(f"need theta > 0, got theta={self.theta}")
        lo = -1.0 / self.theta
        if any(bj <= lo for bj in self.b):
            raise ParameterError(f"need b_j > -1/theta = {lo}, got b={self.b}")

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def inv_theta(self) -> float:
        return 0.0 if math.isinf(self.theta) else 1.0 / self.theta

    def with_b(self, b) -> "SpaceParams":
        return SpaceParams(self.p, self.tau, self.theta, tuple(b))


@dataclass(frozen=True)
class GridConfig:
    """Grid choice for Lorentz norms of polynomials.

    ``n=None`` picks max(default for m, next power of two >= oversample * max
    frequency).
    """

    n: int | None = None
    oversample: int = 4


@dataclass(frozen=True)
class ModulusConfig:
    k: tuple[int, ...] = (1,)
    levels: int | None = None      # dyadic t-levels 0..L; None -> s_max + 2
    h_samples: int = 17
    refine_tol: float = 0.01
    max_refinements: int = 3
    grid: GridConfig = field(default_factory=GridConfig)

    def __post_init__(self):
        if any(int(v) < 1 for v in self.k):
            raise ParameterError("difference orders must be >= 1")
        if self.h_samples < 2:
            raise ParameterError("need at least the two endpoints per coordinate")


@dataclass
class NormBreakdown:
    total: float
    contributions: list[tuple[tuple[int, ...], float]]
    theta: float = 2.0
    base: float = 0.0  # additive ||f||_{p,tau} summand, where the norm has one

    def recompute(self) -> float:
        vals = np.array([v for _, v in self.contributions], dtype=float)
        return self.base + _lsum(vals, self.theta)

    def to_dict(self) -> dict:
        d = {
            "total": self.total,
            "contributions": [{"index": list(i), "value": v} for i, v in self.contributions],
        }
        if self.base:
            d["base"] = self.base
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _lsum(vals: np.ndarray, theta: float) -> float:
    """l_theta quasi-norm of non-negative values; sup for theta = inf."""
    if vals.size == 0:
        return 0.0
    if math.isinf(theta):
        return float(vals.max())
    top = vals.max()
    if top == 0:
        return 0.0
    return float(top * np.sum((vals / top) ** theta) ** (1.0 / theta))


def default_grid(f: TrigPoly, grid: GridConfig | None = None) -> int:
    grid = grid or GridConfig()
    if grid.n is not None:
        return grid.n
    need = grid.oversample * max(max(f.max_freq), 1)
    n = 1 << (need - 1).bit_length()
    return max(n, DEFAULT_N.get(f.m, 64))


def poly_lorentz_norm(f: TrigPoly, p: float, tau: float, grid: GridConfig | None = None) -> float:
    if not f.coeffs:
        return 0.0
    n = default_grid(f, grid)
    return lorentz_norm(evaluate_on_grid(f, n, modulus=not f.is_real()), p, tau)


def norm_SB(f: TrigPoly, prm: SpaceParams, grid: GridConfig | None = None) -> NormBreakdown:
    """{sum_s prod_j (s_j+1)^{b_j theta} ||delta_s f||_{p,tau}^theta}^{1/theta}."""
    _check_dim(f, prm)
    contrib = []
    for s, blk in blocks(f).items():
        w = math.prod((sj + 1) ** bj for sj, bj in zip(s, prm.b))
        contrib.append((s, w * poly_lorentz_norm(blk, prm.p, prm.tau, grid)))
    total = _lsum(np.array([v for _, v in contrib]), prm.theta)
    return NormBreakdown(total, contrib, prm.theta)


def level_of(s: int) -> int:
    """Super-dyadic level l with s in ([2^{l-1}] + 1 .. 2^l); s >= 1."""
    if s < 1:
        raise ValueError("level cells start at s = 1")
    return (s - 1).bit_length()


def level_cell(l: int) -> range:
    return range(((1 << l) >> 1) + 1, (1 << l) + 1)


def norm_SboldB_discrete(f: TrigPoly, prm: SpaceParams, grid: GridConfig | None = None) -> NormBreakdown:
    """||f||_{p,tau} + (sum_l prod_j 2^{l_j theta (b_j + 1/theta)} ||sum_{s in cell(l)} delta_s f||^theta)^{1/theta}.

    Blocks with some s_j = 0 carry no level (mean-zero functions have none).
    """
    _check_dim(f, prm)
    grouped: dict[tuple[int, ...], TrigPoly] = {}
    for s, blk in blocks(f).items():
        if not all(s):
            continue
        l = tuple(level_of(sj) for sj in s)
        grouped[l] = grouped[l] + blk if l in grouped else blk
    contrib = []
    for l in sorted(grouped):
        w = math.prod(2.0 ** (lj * (bj + prm.inv_theta)) for lj, bj in zip(l, prm.b))
        contrib.append((l, w * poly_lorentz_norm(grouped[l], prm.p, prm.tau, grid)))
    base = poly_lorentz_norm(f, prm.p, prm.tau, grid)
    total = base + _lsum(np.array([v for _, v in contrib]), prm.theta)
    return NormBreakdown(total, contrib, prm.theta, base)


def _h_lattice(t: Sequence[float], n: int) -> list[tuple[float, ...]]:
    return list(product(*[np.linspace(-tj, tj, n) for tj in t]))


def mixed_modulus(
    f: TrigPoly,
    t: Sequence[float],
    k: Sequence[int],
    p: float,
    tau: float,
    h_samples: int = 17,
    refine_tol: float | None = 0.01,
    max_refinements: int = 3,
    grid: GridConfig | None = None,
) -> float:
    """sup over |h_j| <= t_j of ||mixed difference||_{p,tau}, on a finite lattice.

    The lattice has ``h_samples`` points per coordinate including +-t_j and is
    refined by halving its spacing (so each refinement is a superset) until
    the value moves by less than ``refine_tol`` relative.
    """
    if any(not (0 < tj <= 1) for tj in t):
        raise ValueError("need 0 < t_j <= 1")
    if not f.coeffs:
        return 0.0
    n_grid = default_grid(f, grid)
    cache: dict[tuple[float, ...], float] = {}

    def value(h):
        key = tuple(float(v) for v in h)
        if key not in cache:
            d = mixed_difference(f, k, key)
            cache[key] = 0.0 if not d.coeffs else lorentz_norm(
                evaluate_on_grid(d, n_grid, modulus=not d.is_real()), p, tau)
        return cache[key]

    n = h_samples
    best = max(value(h) for h in _h_lattice(t, n))
    for _ in range(max_refinements if refine_tol is not None else 0):
        n = 2 * n - 1
        new = max(value(h) for h in _h_lattice(t, n))
        done = new <= best * (1 + refine_tol)
        best = max(best, new)
        if done:
            break
    return best


def norm_SboldB_modulus(f: TrigPoly, prm: SpaceParams, cfg: ModulusConfig | None = None) -> NormBreakdown:
    """Definition-level norm with the t-integral discretised on dyadic cells.

    Cell (2^{-l-1}, 2^{-l}] has dt/t measure ln 2; the modulus is taken at the
    left endpoint (it is non-decreasing in t) and the logarithmic weight at the
    geometric midpoint, 1 - log2 t = l + 3/2.  Levels beyond L are dropped and
    the sup is sampled, so the result is a lower approximation.
    """
    _check_dim(f, prm)
    if math.isinf(prm.theta):
        raise ParameterError("modulus form is implemented for finite theta only")
    cfg = cfg or ModulusConfig(k=(1,) * f.m)
    k = cfg.k if len(cfg.k) == f.m else (cfg.k[0],) * f.m
    base = poly_lorentz_norm(f, prm.p, prm.tau, cfg.grid)
    if not f.coeffs:
        return NormBreakdown(0.0, [], prm.theta, 0.0)
    s_max = max(max(s) for s in blocks(f))
    L = cfg.levels if cfg.levels is not None else s_max + 2
    contrib = []
    omegas: dict[tuple[int, ...], float] = {}
    for l in sorted(product(range(L + 1), repeat=f.m), reverse=True):
        t = [2.0 ** (-lj - 1) for lj in l]
        om = mixed_modulus(f, t, k, prm.p, prm.tau, cfg.h_samples, cfg.refine_tol,
                           cfg.max_refinements, cfg.grid)
        # enforce monotonicity in t along the ladder: smaller l means larger t
        for j in range(f.m):
            if l[j] + 1 <= L:
                nb = l[:j] + (l[j] + 1,) + l[j + 1:]
                if nb in omegas:
                    om = max(om, omegas[nb])
        omegas[l] = om
    for l in sorted(omegas):
        w = math.prod((lj + 1.5) ** bj * math.log(2) ** (1.0 / prm.theta) for lj, bj in zip(l, prm.b))
        contrib.append((l, w * omegas[l]))
    total = base + _lsum(np.array([v for _, v in contrib]), prm.theta)
    return NormBreakdown(total, contrib, prm.theta, base)


def _check_dim(f: TrigPoly, prm: SpaceParams) -> None:
    if f.m != prm.m:
        raise ParameterError(f"function has m={f.m} but b has {prm.m} entries")


def _lam_array(lam: LacunarySeries | np.ndarray) -> np.ndarray:
    return lam.lam if isinstance(lam, LacunarySeries) else np.asarray(lam, dtype=float)


def _shift_weights(shape: Sequence[int], b: Sequence[float], theta: float) -> np.ndarray:
    """prod_j (s_j + 1)^{theta b_j} for s_j = nu_j + 1, nu_j = 0..shape_j - 1."""
    w = np.ones(shape)
    for j, (nj, bj) in enumerate(zip(shape, b)):
        s = np.arange(1, nj + 1, dtype=float)
        ax = [1] * len(shape)
        ax[j] = nj
        w = w * ((s + 1.0) ** (theta * bj)).reshape(ax)
    return w


def lacunary_SB_closed_form(lam: LacunarySeries | np.ndarray, prm: SpaceParams) -> float:
    """(sum_{s >= 1} prod_j (s_j+1)^{theta b_j} |lambda_{s-1}|^theta)^{1/theta}."""
    a = np.abs(_lam_array(lam))
    if a.ndim != prm.m:
        raise ParameterError("lambda dimension does not match b")
    if math.isinf(prm.theta):
        return float((_shift_weights(a.shape, prm.b, 1.0) * a).max(initial=0.0))
    vals = (_shift_weights(a.shape, prm.b, 1.0) * a).ravel()
    return _lsum(vals, prm.theta)


def lacunary_boldB_tail_form(lam: LacunarySeries | np.ndarray, prm: SpaceParams, q: float) -> float:
    """(sum_{nu >= 1} prod_j (nu_j+1)^{theta b_j} (sum_{s >= nu} |lambda_{s-1}|^q)^{theta/q})^{1/theta}.

    ``q`` must be 2 or tau; which one applies depends on the (p, tau) regime.
    """
    if not (math.isclose(q, 2.0) or math.isclose(q, prm.tau)):
        raise ParameterError(f"inner exponent must be 2 or tau={prm.tau}, got {q}")
    a = np.abs(_lam_array(lam))
    if a.ndim != prm.m:
        raise ParameterError("lambda dimension does not match b")
    top = a.max(initial=0.0)
    if top == 0:
        return 0.0
    tail = (a / top) ** q
    for ax in range(tail.ndim):
        tail = np.flip(np.cumsum(np.flip(tail, ax), axis=ax), ax)
    inner = top * tail ** (1.0 / q)
    # tail index s-1 = nu-1, so entry i of ``inner`` belongs to nu = i + 1
    vals = (_shift_weights(a.shape, prm.b, 1.0) * inner).ravel()
    return _lsum(vals, prm.theta)
