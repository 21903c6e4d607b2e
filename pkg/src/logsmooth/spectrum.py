"""Sparse multivariate trigonometric polynomials on the unit torus [0, 1)^m.

A polynomial is stored as a map from integer frequency vectors k to complex
amplitudes, so that f(x) = sum_k c_k exp(2 pi i <k, x>).  Dense arrays appear
only when a polynomial is sampled on a grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import scipy.fft

__all__ = [
    "ResolutionError",
    "TrigPoly",
    "LacunarySeries",
    "GridSamples",
    "DyadicCell",
    "dyadic_index",
    "dyadic_cell",
    "block_extract",
    "blocks",
    "lacunary_to_trigpoly",
    "evaluate_on_grid",
    "evaluate_at",
    "parseval_l2",
    "mixed_difference",
]

Frequency = tuple[int, ...]


class ResolutionError(ValueError):
    """Grid too coarse for the spectrum being sampled."""


@dataclass(frozen=True, eq=False)
class TrigPoly:
    m: int
    coeffs: Mapping[Frequency, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        for k, c in self.coeffs.items():
            k = tuple(int(v) for v in k)
            if len(k) != self.m:
                raise ValueError(f"frequency {k} has wrong dimension (m={self.m})")
            c = complex(c)
            if c != 0:
                clean[k] = clean.get(k, 0) + c
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def zero(cls, m: int = 1) -> "TrigPoly":
        return cls(m, {})

    @classmethod
    def cosine(cls, k: Sequence[int], amplitude: float = 1.0) -> "TrigPoly":
        """amplitude * cos(2 pi <k, x>)."""
        k = tuple(int(v) for v in k)
        if not any(k):
            return cls(len(k), {k: amplitude})
        neg = tuple(-v for v in k)
        return cls(len(k), {k: amplitude / 2, neg: amplitude / 2})

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[tuple[Frequency, complex]]:
        return iter(sorted(self.coeffs.items()))

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if other.m != self.m:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return TrigPoly(self.m, out)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + other.scale(-1.0)

    def __rmul__(self, c) -> "TrigPoly":
        return self.scale(c)

    def scale(self, c: complex) -> "TrigPoly":
        return TrigPoly(self.m, {k: c * v for k, v in self.coeffs.items()})

    def coeff(self, k: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(k), 0j)

    def equals(self, other: "TrigPoly", tol: float = 0.0) -> bool:
        if other.m != self.m:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeff(k) - other.coeff(k)) <= tol for k in keys)

    @property
    def max_freq(self) -> tuple[int, ...]:
        """Per-coordinate maximum of |k_j| over the support."""
        if not self.coeffs:
            return (0,) * self.m
        ks = np.abs(np.array(list(self.coeffs), dtype=np.int64))
        return tuple(int(v) for v in ks.max(axis=0))

    def is_real(self, tol: float = 1e-12) -> bool:
        """Hermitian symmetry c(-k) = conj(c(k))."""
        for k, c in self.coeffs.items():
            neg = tuple(-v for v in k)
            if abs(self.coeff(neg) - c.conjugate()) > tol * max(1.0, abs(c)):
                return False
        return True

    def is_mean_zero(self, tol: float = 0.0) -> bool:
        """Zero mean in every variable separately (membership in the L-ring class)."""
        return all(abs(c) <= tol or all(k) for k, c in self.coeffs.items())

    def to_records(self) -> list[dict]:
        return [{"k": list(k), "re": c.real, "im": c.imag} for k, c in self]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: Iterable[Mapping], m: int | None = None) -> "TrigPoly":
        records = list(records)
        if m is None:
            if not records:
                raise ValueError("cannot infer dimension of an empty record list")
            m = len(records[0]["k"])
        return cls(m, {tuple(r["k"]): complex(r.get("re", 0.0), r.get("im", 0.0)) for r in records})

    @classmethod
    def from_json(cls, text: str, m: int | None = None) -> "TrigPoly":
        return cls.from_records(json.loads(text), m)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "TrigPoly":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True, eq=False)
class LacunarySeries:
    """Coefficients lambda_nu of sum_nu lambda_nu prod_j cos(2 pi 2^{nu_j} x_j).

    ``lam`` is a dense array indexed by nu in [0, N_1) x ... x [0, N_m); its
    shape is the truncation bound.
    """

    lam: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.ndim < 1:
            raise ValueError("lambda must have at least one axis")
        if not np.all(np.isfinite(lam)):
            raise ValueError("lambda must be finite")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def m(self) -> int:
        return self.lam.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.lam.shape

    def nonzero(self) -> list[tuple[tuple[int, ...], float]]:
        idx = np.argwhere(self.lam != 0)
        return [(tuple(int(v) for v in i), float(self.lam[tuple(i)])) for i in idx]


@dataclass(frozen=True, eq=False)
class GridSamples:
    """Function values (not absolute values) at n^m points of [0, 1)^m."""

    m: int
    n: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if v.size != self.n ** self.m:
            raise ValueError(f"expected {self.n ** self.m} samples, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite")
        v = v.reshape((self.n,) * self.m)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, c: float, n: int, m: int = 1) -> "GridSamples":
        return cls(m, n, np.full((n,) * m, float(c)))

    def scale(self, c: float) -> "GridSamples":
        return GridSamples(self.m, self.n, c * self.values)

    def to_csv(self, path: str | Path) -> None:
        """Row-major CSV with index columns i1..im and a value column."""
        idx = np.indices(self.values.shape).reshape(self.m, -1).T
        header = ",".join([f"i{j + 1}" for j in range(self.m)] + ["value"])
        rows = [",".join(map(str, i)) + f",{v:.17g}" for i, v in zip(idx, self.values.ravel())]
        Path(path).write_text(header + "\n" + "\n".join(rows) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "GridSamples":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        m = data.shape[1] - 1
        n = int(round(len(data) ** (1.0 / m)))
        return cls(m, n, data[:, -1])

    def to_npy(self, path: str | Path) -> None:
        np.save(path, np.ascontiguousarray(self.values))

    @classmethod
    def from_npy(cls, path: str | Path) -> "GridSamples":
        v = np.load(path)
        return cls(v.ndim, v.shape[0], v)


def dyadic_index(k: Sequence[int]) -> tuple[int, ...]:
    """The s-bar with k in rho(s-bar); coordinate-wise bit length of |k_j|."""
    return tuple(abs(int(v)).bit_length() for v in k)


@dataclass(frozen=True)
class DyadicCell:
    """rho(s) as per-axis half-open ranges lo <= |k_j| < hi."""

    s: tuple[int, ...]

    @property
    def ranges(self) -> tuple[tuple[int, int], ...]:
        # [2^{s-1}] with [.] the integer part; s = 0 gives [1/2] = 0
        return tuple(((1 << sj) >> 1, 1 << sj) for sj in self.s)

    def __contains__(self, k) -> bool:
        return len(k) == len(self.s) and all(lo <= abs(v) < hi for v, (lo, hi) in zip(k, self.ranges))

    def frequencies(self) -> Iterator[Frequency]:
        axes = []
        for lo, hi in self.ranges:
            ax = [v for a in range(lo, hi) for v in ((a, -a) if a else (0,))]
            axes.append(sorted(ax))
        return product(*axes)

    def size(self) -> int:
        return math.prod(2 * (hi - lo) if lo else 1 for lo, hi in self.ranges)


def dyadic_cell(s: Sequence[int], m: int | None = None) -> DyadicCell:
    s = tuple(int(v) for v in s)
    if m is not None and len(s) != m:
        raise ValueError("s has wrong dimension")
    if any(v < 0 for v in s):
        raise ValueError("dyadic indices must be non-negative")
    return DyadicCell(s)


def blocks(f: TrigPoly) -> dict[tuple[int, ...], TrigPoly]:
    """All nonzero dyadic blocks delta_s(f), keyed by s, in sorted order."""
    groups: dict[tuple[int, ...], dict] = {}
    for k, c in f.coeffs.items():
        groups.setdefault(dyadic_index(k), {})[k] = c
    return {s: TrigPoly(f.m, groups[s]) for s in sorted(groups)}


def block_extract(f: TrigPoly, s: Sequence[int]) -> TrigPoly:
    s = tuple(s)
    return TrigPoly(f.m, {k: c for k, c in f.coeffs.items() if dyadic_index(k) == s})


def lacunary_to_trigpoly(series: LacunarySeries) -> TrigPoly:
    m = series.m
    out: dict[Frequency, complex] = {}
    signs = list(product((1, -1), repeat=m))
    for nu, lam in series.nonzero():
        amp = lam / 2 ** m
        base = [1 << v for v in nu]
        for sg in signs:
            k = tuple(a * b for a, b in zip(sg, base))
            out[k] = out.get(k, 0) + amp
    return TrigPoly(m, out)


def _grid_limit() -> int:
    import os

    return int(os.environ.get("LOGSMOOTH_GRID_MAX", str(1 << 24)))


def evaluate_on_grid(f: TrigPoly, n: int, *, modulus: bool = False, oversample: int = 4) -> GridSamples:
    """Sample Re f (or |f| with ``modulus``) at x_j = i_j / n.

    Uses an inverse FFT of the dense coefficient array; exact up to round-off
    because n > 2 max|k_j| leaves no aliasing.
    """
    need = oversample * max(f.max_freq)
    if n < max(need, 1):
        raise ResolutionError(f"n={n} below {oversample} x max frequency ({need})")
    if n ** f.m > _grid_limit():
        raise ResolutionError(f"grid of {n}^{f.m} samples exceeds LOGSMOOTH_GRID_MAX={_grid_limit()}")
    dense = np.zeros((n,) * f.m, dtype=complex)
    for k, c in f.coeffs.items():
        dense[tuple(v % n for v in k)] += c
    vals = scipy.fft.ifftn(dense, overwrite_x=True) * n ** f.m
    vals = np.abs(vals) if modulus else vals.real
    return GridSamples(f.m, n, vals)


def evaluate_at(f: TrigPoly, points: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Direct summation of f at arbitrary points (shape (N, m) or (N,) for m=1)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] != f.m:
        raise ValueError("points have wrong dimension")
    if not f.coeffs:
        return np.zeros(len(pts), dtype=complex)
    ks = np.array([k for k, _ in f], dtype=float)
    cs = np.array([c for _, c in f])
    out = np.empty(len(pts), dtype=complex)
    for i in range(0, len(pts), chunk):
        phase = 2 * np.pi * (pts[i:i + chunk] @ ks.T)
        out[i:i + chunk] = np.exp(1j * phase) @ cs
    return out


def parseval_l2(f: TrigPoly) -> float:
    return math.sqrt(sum(abs(c) ** 2 for c in f.coeffs.values()))


def mixed_difference(f: TrigPoly, k: Sequence[int], h: Sequence[float]) -> TrigPoly:
    """Mixed difference of orders k with increments h, applied in the spectrum.

    Each exponential with frequency n picks up prod_j (exp(2 pi i n_j h_j) - 1)^{k_j}.
    """
    if len(k) != f.m or len(h) != f.m:
        raise ValueError("orders and increments must have length m")
    if any(int(kj) < 1 for kj in k):
        raise ValueError("difference orders must be >= 1")
    out = {}
    for n, c in f.coeffs.items():
        mult = 1.0 + 0j
        for nj, kj, hj in zip(n, k, h):
            mult *= (np.exp(2j * np.pi * nj * hj) - 1.0) ** int(kj)
        out[n] = c * mult
    return TrigPoly(f.m, out)
