"""Non-increasing rearrangement and the Lorentz functional ||f||_{p,tau}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spectrum import GridSamples

__all__ = [
    "ParameterError",
    "LorentzParams",
    "StepRearrangement",
    "rearrange",
    "lorentz_norm",
    "lorentz_norm_weighted",
    "lp_norm",
    "hl_lorentz_estimate",
]


class ParameterError(ValueError):
    """Parameters outside the admissible range of a norm or space."""


@dataclass(frozen=True)
class LorentzParams:
    p: float
    tau: float

    def __post_init__(self):
        if not (1 < self.p < math.inf):
            raise ParameterError(f"need 1 < p < inf, got p={self.p}")
        if not (1 <= self.tau < math.inf):
            raise ParameterError(f"need 1 <= tau < inf, got tau={self.tau}")


@dataclass(frozen=True, eq=False)
class StepRearrangement:
    """f* as a step function: ``values[k]`` on ((k)/M, (k+1)/M], M = len(values)."""

    values: np.ndarray

    @property
    def cell(self) -> float:
        return 1.0 / len(self.values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.ceil(t * len(self.values)).astype(int) - 1, 0, len(self.values) - 1)
        return self.values[idx]


def _abs_values(samples) -> np.ndarray:
    if isinstance(samples, GridSamples):
        return np.abs(samples.values).ravel()
    return np.abs(np.asarray(samples, dtype=float)).ravel()


def rearrange(samples: GridSamples | np.ndarray) -> StepRearrangement:
    v = np.sort(_abs_values(samples))[::-1].copy()
    v.setflags(write=False)
    return StepRearrangement(v)


@lru_cache(maxsize=16)
def _step_weights(M: int, a: float) -> np.ndarray:
    """((k+1)/M)^a - (k/M)^a for k = 0..M-1, without cancellation for large k."""
    k = np.arange(M, dtype=float)
    w = np.empty(M)
    w[0] = (1.0 / M) ** a
    kk = k[1:]
    w[1:] = (kk / M) ** a * np.expm1(a * np.log1p(1.0 / kk))
    w.setflags(write=False)
    return w


def lorentz_norm(samples: GridSamples | StepRearrangement | np.ndarray, p: float, tau: float) -> float:
    """||f||_{p,tau} of the step rearrangement, integrated exactly step by step.

    With descending values v_k on cells of measure 1/M the defining integral
    (tau/p) int_0^1 f*(t)^tau t^{tau/p - 1} dt collapses to
    sum_k v_k^tau [((k+1)/M)^{tau/p} - (k/M)^{tau/p}].
    """
    LorentzParams(p, tau)
    r = samples if isinstance(samples, StepRearrangement) else rearrange(samples)
    v = r.values
    if v.size == 0:
        return 0.0
    top = v[0]
    if top == 0:
        return 0.0
    w = _step_weights(len(v), tau / p)
    return float(top * np.dot((v / top) ** tau, w) ** (1.0 / tau))


def lorentz_norm_weighted(values, weights, p: float, tau: float) -> float:
    """||f||_{p,tau} of a step function taking ``values[i]`` on a set of measure ``weights[i]``.

    Weights are normalised to total measure 1.
    """
    LorentzParams(p, tau)
    v = np.abs(np.asarray(values, dtype=float)).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if v.shape != w.shape or np.any(w < 0):
        raise ValueError("need matching non-negative weights")
    order = np.argsort(-v, kind="stable")
    v, w = v[order], w[order]
    T = np.concatenate([[0.0], np.cumsum(w)])
    T /= T[-1]
    top = v[0] if v.size else 0.0
    if top == 0:
        return 0.0
    a = tau / p
    return float(top * np.dot((v / top) ** tau, np.diff(T ** a)) ** (1.0 / tau))


def lp_norm(samples: GridSamples | np.ndarray, p: float) -> float:
    """Mean L_p norm of |values| (cell measure 1/M)."""
    if p < 1:
        raise ParameterError(f"need p >= 1, got {p}")
    v = _abs_values(samples)
    top = v.max(initial=0.0)
    if top == 0:
        return 0.0
    return float(top * np.mean((v / top) ** p) ** (1.0 / p))


def hl_lorentz_estimate(coeffs, p: float, tau: float) -> float:
    """(sum_nu a_nu^tau nu^{tau/p' - 1})^{1/tau} for a non-increasing a_1, a_2, ...

    This is the two-sided estimate for cosine series with monotone
    coefficients; it matches ||sum a_nu cos(2 pi nu x)||_{p,tau} only up to
    constants depending on p and tau.
    """
    LorentzParams(p, tau)
    a = np.asarray(coeffs, dtype=float)
    if np.any(a < 0) or np.any(np.diff(a) > 0):
        raise ValueError("coefficients must be non-negative and non-increasing")
    nu = np.arange(1, len(a) + 1, dtype=float)
    q = 1.0 - 1.0 / p
    return float(np.sum(a ** tau * nu ** (tau * q - 1.0)) ** (1.0 / tau))
