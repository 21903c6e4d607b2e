"""Embedding criteria between the log-smoothness spaces.

Each criterion reduces to a multi-index series or supremum whose generic
term is a product of powers.  Two independent referees decide them:

* a symbolic one: the term is homogeneous in the exponents along rays
  s_j ~ N^{w_j}, so convergence and boundedness are decided by the vertices
  w in {0, 1}^m (one check per nonempty coordinate subset);
* a numeric one (``series_convergence``): shell sums over
  n <= sum_j (s_j + 1) < n + 1 (or dyadic levels for geometric series), with
  a log-log regression on the tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .lorentz import ParameterError
from .spaces import SpaceParams

__all__ = [
    "Verdict",
    "SeriesSpec",
    "ConvergenceVerdict",
    "EmbeddingQuery",
    "eta_prime",
    "symbolic_convergence",
    "symbolic_sup_finite",
    "lattice_sup",
    "series_convergence",
    "thm41_predicate",
    "thm21_series",
    "thm21_sup_condition",
    "thm42_condition_4_4",
    "thm42_condition_4_5",
    "thm43_condition_4_10",
    "thm43_condition_4_11",
    "thm44_params",
    "thm45_params",
    "CriterionResult",
    "check_embedding",
]

EPS_FIT = 0.05
TIE_TOL = 0.005


class Verdict(str, Enum):
    CONVERGES = "Converges"
    DIVERGES = "Diverges"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SeriesSpec:
    """Generic term of a criterion series.

    ``kind`` selects the factors:

    * ``"shifted"``: prod_j (s_j+1)^{alpha_j} (sum_j (s_j+1))^gamma, s_j >= 0;
    * ``"plain"``: prod_j s_j^{alpha_j} (sum_j (s_j+1))^gamma, s_j >= 1;
    * ``"geometric"``: prod_j 2^{l_j alpha_j} (sum_j 2^{l_j})^gamma, l_j >= 0.
    """

    m: int
    alpha: tuple[float, ...]
    gamma: float
    kind: str = "shifted"

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if len(self.alpha) != self.m:
            raise ValueError("alpha must have m entries")
        if self.kind not in ("shifted", "plain", "geometric"):
            raise ValueError(f"unknown series kind {self.kind!r}")
        if not all(math.isfinite(a) for a in self.alpha) or not math.isfinite(self.gamma):
            raise ValueError("exponents must be finite")

    def subset_exponents(self) -> dict[tuple[int, ...], float]:
        """Growth exponent of the summed series along each coordinate subset."""
        shift = 0.0 if self.kind == "geometric" else 1.0
        out = {}
        for r in range(1, self.m + 1):
            for e in combinations(range(self.m), r):
                out[e] = sum(self.alpha[j] + shift for j in e) + self.gamma
        return out

    def term(self, s: Sequence[float]) -> float:
        s = np.asarray(s, dtype=float)
        if self.kind == "geometric":
            return float(np.prod(2.0 ** (s * np.array(self.alpha))) * np.sum(2.0 ** s) ** self.gamma)
        base = s if self.kind == "plain" else s + 1
        return float(np.prod(base ** np.array(self.alpha)) * np.sum(s + 1) ** self.gamma)


@dataclass
class ConvergenceVerdict:
    verdict: Verdict
    rho: float
    sigma: float
    cutoffs: list[int]
    partial_sums: list[float]
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


def eta_prime(theta_outer: float, theta_inner: float) -> float:
    """eta' = eta/(eta-1) with eta = theta_outer/theta_inner; 1 when theta_outer = inf."""
    if math.isinf(theta_outer):
        return 1.0
    eta = theta_outer / theta_inner
    if eta <= 1:
        raise ParameterError(f"eta = {eta} must exceed 1 for the Hoelder exponent")
    return eta / (eta - 1.0)


def symbolic_convergence(spec: SeriesSpec) -> Verdict:
    """Converges iff every coordinate subset has negative growth exponent."""
    worst = max(spec.subset_exponents().values())
    return Verdict.CONVERGES if worst < 0 else Verdict.DIVERGES


def symbolic_sup_finite(alpha: Sequence[float], gamma: float, geometric: bool = False) -> bool:
    """sup of prod (s_j+1)^{alpha_j} (sum (s_j+1))^gamma (or its 2^{s_j} analogue).

    Finite iff sum_{j in e} alpha_j + gamma <= 0 for every nonempty subset e;
    a zero exponent is bounded, not decaying, and counts as finite.
    """
    m = len(alpha)
    for r in range(1, m + 1):
        for e in combinations(range(m), r):
            if sum(alpha[j] for j in e) + gamma > 1e-12:
                return False
    return True


def lattice_sup(alpha: Sequence[float], gamma: float, geometric: bool = False, smax: int = 1024) -> tuple[float, float]:
    """Numeric cross-check: log-sup over the lattice up to ``smax`` and up to ``smax // 2``.

    A bounded supremum shows as equal (or nearly equal) values; growth shows
    as a gap of order log 2 times the ray exponent.
    """
    m = len(alpha)
    if geometric:
        axis = np.arange(0, min(smax, 60) + 1, dtype=float)
    else:
        axis = np.unique(np.round(np.geomspace(1, smax + 1, 64))) - 1.0
    grids = np.meshgrid(*([axis] * m), indexing="ij")
    s = np.stack([g.ravel() for g in grids])
    if geometric:
        logt = (np.array(alpha)[:, None] * s * math.log(2)).sum(0) + gamma * np.log(np.sum(2.0 ** s, axis=0))
    else:
        logt = (np.array(alpha)[:, None] * np.log(s + 1)).sum(0) + gamma * np.log(np.sum(s + 1, axis=0))
    half = s.max(axis=0) <= axis[len(axis) // 2]
    return float(logt.max()), float(logt[half].max())


def _power_shell_logs(spec: SeriesSpec, N: int) -> np.ndarray:
    """log a_n for n = 0..N, a_n the mass of the shell sum_j (s_j+1) = n."""
    k = np.arange(N + 1, dtype=float)
    seqs = []
    for a in spec.alpha:
        logs = np.full(N + 1, -np.inf)
        if spec.kind == "plain":
            logs[2:] = a * np.log(k[2:] - 1)
        else:
            logs[1:] = a * np.log(k[1:])
        seqs.append(logs)
    # convolve in scaled linear form; positive terms so no cancellation
    total_log = seqs[0]
    for nxt in seqs[1:]:
        c1, c2 = total_log[np.isfinite(total_log)].max(), nxt[np.isfinite(nxt)].max()
        conv = np.convolve(np.exp(total_log - c1), np.exp(nxt - c2))[: N + 1]
        with np.errstate(divide="ignore"):
            total_log = np.log(conv) + c1 + c2
    with np.errstate(divide="ignore"):
        return total_log + spec.gamma * np.log(np.maximum(k, 1.0))


def _geometric_level_logs(spec: SeriesSpec, L: int) -> np.ndarray:
    """log M_l for l = 0..L, M_l the mass of the level max_j l_j = l."""
    axis = np.arange(L + 1, dtype=float)
    grids = np.meshgrid(*([axis] * spec.m), indexing="ij")
    l = np.stack([g.ravel() for g in grids])
    logt = (np.array(spec.alpha)[:, None] * l * math.log(2)).sum(0)
    logt = logt + spec.gamma * logsumexp(l * math.log(2), axis=0)
    level = l.max(axis=0).astype(int)
    out = np.full(L + 1, -np.inf)
    for v in range(L + 1):
        out[v] = logsumexp(logt[level == v])
    return out


def _fit(x_log: np.ndarray, y_log: np.ndarray, loglog: np.ndarray) -> tuple[float, float]:
    A = np.column_stack([x_log, loglog, np.ones_like(x_log)])
    coef, *_ = np.linalg.lstsq(A, y_log, rcond=None)
    return float(coef[0]), float(coef[1])


def _decide(rho: float, sigma: float, rho_pure: float, critical: float, eps: float,
            tie_tol: float) -> tuple[Verdict, str]:
    if rho < critical - eps:
        return Verdict.CONVERGES, ""
    if rho > critical + eps:
        return Verdict.DIVERGES, ""
    # Inside the band the log regressor is only trusted at a genuine tie, where
    # a plain power fit also lands on the critical exponent.  Near-ties are
    # indistinguishable from ties at desk scale.
    if abs(rho_pure - critical) > tie_tol:
        return Verdict.INCONCLUSIVE, "leading exponent near but not at the critical value"
    if sigma < -1 - eps:
        return Verdict.CONVERGES, "critical exponent, log factor decides"
    if sigma > -1 + eps:
        return Verdict.DIVERGES, "critical exponent, log factor decides"
    return Verdict.INCONCLUSIVE, "critical exponent and critical log factor"


def series_convergence(spec: SeriesSpec, cutoffs: Sequence[int] | None = None,
                       eps_fit: float = EPS_FIT, tie_tol: float = TIE_TOL) -> ConvergenceVerdict:
    """Numeric verdict from tail shell masses.

    Power series: a_n fitted as rho log n + sigma log log n + c over the upper
    half (in log scale) of shells n in [sqrt(N), N]; the critical exponent is
    rho = -1.  Geometric series: level masses M_l fitted as rho l log 2 +
    sigma log l + c over l in [L/2, L]; the critical exponent is rho = 0.
    """
    if cutoffs is None:
        cutoffs = [2 ** 11, 2 ** 12, 2 ** 13, 2 ** 14] if spec.m == 1 else [2 ** 10, 2 ** 11, 2 ** 12, 2 ** 13]
        if spec.kind == "geometric":
            cutoffs = [16, 24, 32, 48] if spec.m <= 2 else [12, 16, 20, 24]
    cutoffs = [int(c) for c in cutoffs]
    if len(cutoffs) < 4 or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("need at least 4 increasing cutoffs")
    N = cutoffs[-1]
    if spec.kind == "geometric":
        logs = _geometric_level_logs(spec, N)
        idx = np.arange(N + 1)
        window = (idx >= max(N // 2, 2)) & np.isfinite(logs)
        x = idx[window] * math.log(2)
        ll = np.log(idx[window].astype(float))
        critical = 0.0
    else:
        logs = _power_shell_logs(spec, N)
        idx = np.arange(N + 1)
        window = (idx >= max(int(math.sqrt(N)), 3)) & np.isfinite(logs)
        x = np.log(idx[window].astype(float))
        ll = np.log(x)
        critical = -1.0
    finite = np.isfinite(logs)
    mx = logs[finite].max() if finite.any() else 0.0
    partial = np.cumsum(np.where(finite, np.exp(logs - mx), 0.0))
    partial_sums = [float(partial[min(c, N)] * math.exp(mx)) if mx < 700 else math.inf for c in cutoffs]
    if window.sum() < 4:
        # tail masses underflow: terms decay faster than any power we can resolve
        return ConvergenceVerdict(Verdict.CONVERGES, -math.inf, 0.0, cutoffs, partial_sums, "tail underflow")
    rho, sigma = _fit(x, logs[window], ll)
    rho_pure = float(np.polyfit(x, logs[window], 1)[0])
    verdict, note = _decide(rho, sigma, rho_pure, critical, eps_fit, tie_tol)
    return ConvergenceVerdict(verdict, rho, sigma, cutoffs, partial_sums, note)


def _tol_ge(a: float, b: float) -> bool:
    return a > b or math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def _inv(theta: float) -> float:
    return 0.0 if math.isinf(theta) else 1.0 / theta


def thm41_predicate(b1: Sequence[float], theta1: float, b2: Sequence[float], theta2: float) -> bool:
    """Embedding of the modulus spaces at equal (p, tau).

    Conjunctive reading: every coordinate needs b1_j + 1/theta1 >= b2_j + 1/theta2,
    and any coordinate with equality forces theta1 < theta2.
    """
    if len(b1) != len(b2):
        raise ValueError("b1 and b2 must have the same length")
    lhs = [x + _inv(theta1) for x in b1]
    rhs = [x + _inv(theta2) for x in b2]
    if not all(_tol_ge(a, c) for a, c in zip(lhs, rhs)):
        return False
    ties = any(math.isclose(a, c, rel_tol=1e-12, abs_tol=1e-12) for a, c in zip(lhs, rhs))
    return (theta1 < theta2) if ties else True


@dataclass(frozen=True)
class EmbeddingQuery:
    source: SpaceParams
    target: SpaceParams

    def __post_init__(self):
        if self.source.m != self.target.m:
            raise ParameterError("source and target dimensions differ")
        if not math.isclose(self.source.p, self.target.p):
            raise ParameterError("source and target must share p")

    @property
    def m(self) -> int:
        return self.source.m

    @property
    def eta(self) -> float:
        return self.source.theta / self.target.theta

    @property
    def eta_prime(self) -> float:
        return eta_prime(self.source.theta, self.target.theta)

    @property
    def delta(self) -> float:
        return self.target.theta * self.eta_prime

    @property
    def c(self) -> float:
        return 1.0 / self.target.tau - 1.0 / self.source.tau

    @property
    def db(self) -> tuple[float, ...]:
        return tuple(y - x for x, y in zip(self.source.b, self.target.b))

    @property
    def slack(self) -> tuple[float, ...]:
        """b2_j - b1_j - 1/theta1 + 1/theta2."""
        return tuple(d - _inv(self.source.theta) + _inv(self.target.theta) for d in self.db)

    def require_tau_order(self) -> None:
        if not (1 < self.target.tau < self.source.tau < math.inf):
            raise ParameterError("need 1 < tau2 < tau1 < inf")


def _beta21(tau2: float) -> float:
    return min(2.0, tau2)


def thm21_series(p: float, tau1: float, tau2: float, theta: float, b: Sequence[float]) -> SeriesSpec:
    """Series of the block space into L_{p,tau2} criterion, case beta < theta."""
    if not tau2 < tau1:
        raise ParameterError("need tau2 < tau1")
    SpaceParams(p, tau1, theta, tuple(b))
    beta = _beta21(tau2)
    if not theta > beta:
        raise ParameterError(f"series form needs theta > beta = {beta}; use the sup form")
    ep = eta_prime(theta, beta)
    return SeriesSpec(len(b), tuple(-beta * ep * bj for bj in b), beta * ep * (1 / tau2 - 1 / tau1))


def thm21_sup_condition(p: float, tau1: float, tau2: float, theta: float, b: Sequence[float]) -> bool:
    """sup (sum (s_j+1))^{1/tau2 - 1/tau1} prod (s_j+1)^{-b_j} < inf, case theta <= beta."""
    if not tau2 < tau1:
        raise ParameterError("need tau2 < tau1")
    return symbolic_sup_finite([-bj for bj in b], 1 / tau2 - 1 / tau1)


def thm42_condition_4_4(q: EmbeddingQuery) -> SeriesSpec:
    """sum_{s >= 1} prod s_j^{(b2-b1) theta2 eta'} (sum (s_j+1))^{(1/tau2-1/tau1) theta2 eta'}; theta2 < theta1."""
    q.require_tau_order()
    if not q.target.theta < q.source.theta:
        raise ParameterError("the block-space series criterion needs theta2 < theta1")
    d = q.delta
    return SeriesSpec(q.m, tuple(x * d for x in q.db), q.c * d, kind="plain")


def thm42_condition_4_5(q: EmbeddingQuery) -> bool:
    """sup prod (s_j+1)^{b2-b1} (sum (s_j+1))^{1/tau2-1/tau1} < inf; theta1 <= theta2."""
    q.require_tau_order()
    if not q.source.theta <= q.target.theta:
        raise ParameterError("the block-space sup criterion needs theta1 <= theta2")
    return symbolic_sup_finite(q.db, q.c)


def thm43_condition_4_10(q: EmbeddingQuery) -> SeriesSpec:
    """sum_l prod 2^{l_j slack_j theta2 eta'} (sum 2^{l_j})^{(1/tau2-1/tau1) theta2 eta'}; theta2 < theta1."""
    q.require_tau_order()
    if not q.target.theta < q.source.theta:
        raise ParameterError("the modulus-space series criterion needs theta2 < theta1")
    d = q.delta
    return SeriesSpec(q.m, tuple(x * d for x in q.slack), q.c * d, kind="geometric")


def thm43_condition_4_11(q: EmbeddingQuery) -> bool:
    """sup prod 2^{s_j slack_j} (sum 2^{s_j})^{1/tau2-1/tau1} < inf; theta1 < theta2."""
    q.require_tau_order()
    if not q.source.theta < q.target.theta:
        raise ParameterError("the modulus-space sup criterion needs theta1 < theta2")
    return symbolic_sup_finite(q.slack, q.c, geometric=True)


def thm44_params(p: float, tau: float, theta: float, b: Sequence[float]) -> tuple[float, tuple[float, ...]]:
    """(beta, v) with v_j = b_j + 1/min(beta, theta)."""
    if 1 < tau <= 2 and 1 < p < math.inf:
        beta = tau
    elif 2 < tau < math.inf and 2 < p < math.inf:
        beta = 2.0
    else:
        raise ParameterError("(p, tau) outside both cases: need 1<tau<=2, or 2<tau and 2<p")
    SpaceParams(p, tau, theta, tuple(b))
    mn = min(beta, theta)
    return beta, tuple(bj + 1.0 / mn for bj in b)


def thm45_params(p: float, tau: float, theta: float, b: Sequence[float]) -> tuple[float, tuple[float, ...]]:
    """(gamma, u) with u_j = b_j + 1/max(gamma, theta)."""
    if 1 < tau <= 2 and 1 < p < math.inf:
        gamma = 2.0
    elif 2 < tau < math.inf and 2 < p < math.inf:
        gamma = float(tau)
    else:
        raise ParameterError("(p, tau) outside both cases: need 1<tau<=2, or 2<tau and 2<p")
    SpaceParams(p, tau, theta, tuple(b))
    mx = max(gamma, theta)
    return gamma, tuple(bj + _inv(mx) for bj in b)


@dataclass
class CriterionResult:
    criterion: str
    parameters: dict
    symbolic: str
    numeric: str | None = None
    verdict: str = "inconclusive"
    exponents: dict = field(default_factory=dict)
    shells: list = field(default_factory=list)
    contradiction: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _params_dict(prm: SpaceParams) -> dict:
    return {"p": prm.p, "tau": prm.tau, "theta": prm.theta, "b": list(prm.b)}


def _series_result(name: str, spec: SeriesSpec, params: dict, iff: bool) -> CriterionResult:
    sym = symbolic_convergence(spec)
    num = series_convergence(spec)
    contradiction = {sym, num.verdict} == {Verdict.CONVERGES, Verdict.DIVERGES}
    if sym is Verdict.CONVERGES:
        verdict = f"EMBEDS ({name})"
    else:
        verdict = f"DOES NOT EMBED ({name})" if iff else f"NOT ESTABLISHED ({name})"
    return CriterionResult(
        criterion=name, parameters=params, symbolic=sym.value, numeric=num.verdict.value,
        verdict=verdict,
        exponents={"alpha": list(spec.alpha), "gamma": spec.gamma, "kind": spec.kind,
                   "rho": num.rho, "sigma": num.sigma,
                   "subsets": {",".join(map(str, e)): v for e, v in spec.subset_exponents().items()}},
        shells=[{"cutoff": c, "partial_sum": s} for c, s in zip(num.cutoffs, num.partial_sums)],
        contradiction=contradiction,
    )


def _sup_result(name: str, alpha, gamma, geometric: bool, params: dict) -> CriterionResult:
    sym = symbolic_sup_finite(alpha, gamma, geometric)
    full, half = lattice_sup(alpha, gamma, geometric)
    # doubling the lattice range moves a bounded log-sup by O(1/smax) only
    bounded_numeric = full - half <= 0.01
    num = "bounded" if bounded_numeric else "unbounded"
    return CriterionResult(
        criterion=name, parameters=params, symbolic="bounded" if sym else "unbounded", numeric=num,
        verdict=f"EMBEDS ({name})" if sym else f"NOT ESTABLISHED ({name})",
        exponents={"alpha": list(alpha), "gamma": gamma, "log_sup": full, "log_sup_half": half},
        contradiction=(sym != bounded_numeric),
    )


def check_embedding(source: SpaceParams, target: SpaceParams | None = None, *, source_space: str = "B",
                    target_space: str = "B", target_tau: float | None = None) -> CriterionResult:
    """Select and evaluate the applicable criterion.

    ``source_space`` / ``target_space`` are "B" (block space) or "bB"
    (modulus space); ``target_space="L"`` with ``target_tau`` asks for the
    block space inside L_{p, target_tau}.
    """
    if target_space == "L":
        if target_tau is None:
            raise ParameterError("target_tau required for the Lorentz target")
        p, tau1, tau2, theta, b = source.p, source.tau, target_tau, source.theta, source.b
        params = {"source": _params_dict(source), "target": {"p": p, "tau": tau2}}
        if not tau2 < tau1:
            raise ParameterError("need tau2 < tau1")
        if not ((1 < tau2 <= 2) or (2 < p and 2 < tau2)):
            raise ParameterError("(p, tau2) outside the admissible cases")
        beta = _beta21(tau2)
        if math.isinf(theta) or theta > beta:
            return _series_result("2.1", thm21_series(p, tau1, tau2, theta, b), params, iff=False)
        return _sup_result("2.2", [-x for x in b], 1 / tau2 - 1 / tau1, False, params)

    if target is None:
        raise ParameterError("target space parameters required")
    q = EmbeddingQuery(source, target)
    params = {"source": _params_dict(source), "target": _params_dict(target)}
    if source_space == "bB" and target_space == "bB" and math.isclose(source.tau, target.tau):
        ok = thm41_predicate(source.b, source.theta, target.b, target.theta)
        lhs = [x + _inv(source.theta) for x in source.b]
        rhs = [x + _inv(target.theta) for x in target.b]
        cond = "cond 1" if all(a > c and not math.isclose(a, c) for a, c in zip(lhs, rhs)) else "cond 2"
        return CriterionResult("4.1", params, symbolic=str(ok), numeric=None,
                               verdict=f"EMBEDS (Thm 4.1, {cond})" if ok else "DOES NOT EMBED (Thm 4.1)",
                               exponents={"lhs": lhs, "rhs": rhs})
    if source_space == "B" and target_space == "B":
        if target.theta < source.theta:
            r = _series_result("4.4", thm42_condition_4_4(q), params, iff=True)
            r.verdict = r.verdict.replace("(4.4)", "(Thm 4.2.1)")
            return r
        thm42_condition_4_5(q)
        r = _sup_result("4.5", q.db, q.c, False, params)
        r.verdict = r.verdict.replace("(4.5)", "(Thm 4.2.2)")
        return r
    if source_space == "bB" and target_space == "bB":
        if target.theta < source.theta:
            r = _series_result("4.10", thm43_condition_4_10(q), params, iff=True)
            r.verdict = r.verdict.replace("(4.10)", "(Thm 4.3.1)")
            return r
        thm43_condition_4_11(q)
        r = _sup_result("4.11", q.slack, q.c, True, params)
        r.verdict = r.verdict.replace("(4.11)", "(Thm 4.3.2)")
        return r
    raise ParameterError(f"no criterion for {source_space} -> {target_space}")
