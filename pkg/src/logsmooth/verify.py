"""Verification suites: module properties and the numbered acceptance checks.

Each check returns a ``CheckResult`` with the observed quantities, so the CLI
and the test-suite print the same numbers.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import counterexamples as cx
from .embedding import (EmbeddingQuery, Verdict, eta_prime, series_convergence, symbolic_convergence,
                        thm21_series, thm42_condition_4_4, thm43_condition_4_10)
from .lorentz import lorentz_norm, lp_norm, rearrange
from .spaces import (SpaceParams, lacunary_boldB_tail_form, lacunary_SB_closed_form, norm_SB,
                     norm_SboldB_discrete, poly_lorentz_norm)
from .spectrum import (LacunarySeries, TrigPoly, block_extract, blocks, evaluate_at, evaluate_on_grid,
                       lacunary_to_trigpoly, mixed_difference, parseval_l2)

SUITES = ("lorentz", "spectrum", "spaces", "embedding", "counterexamples")


@dataclass
class CheckResult:
    name: str
    suite: str
    passed: bool
    observed: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: float | None = None

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        obs = ", ".join(f"{k}={_fmt(v)}" for k, v in self.observed.items())
        budget = f"/{self.budget:g}s" if self.budget is not None else ""
        return f"[{tag}] {self.name} ({self.seconds:.2f}s{budget}) {obs}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


# --- random families -------------------------------------------------------

def random_real_trigpoly(rng: np.random.Generator, m: int = 1, max_freq: int = 512,
                         terms: tuple[int, int] = (1, 12), mean_zero: bool = False) -> TrigPoly:
    """Real polynomial with a few random frequencies and Gaussian amplitudes."""
    count = int(rng.integers(terms[0], terms[1] + 1))
    coeffs: dict[tuple[int, ...], complex] = {}
    lo = 1 if mean_zero else 0
    for _ in range(count):
        k = tuple(int(v) * int(rng.choice([-1, 1])) for v in rng.integers(lo, max_freq + 1, size=m))
        c = complex(rng.normal(), rng.normal())
        neg = tuple(-v for v in k)
        if k == neg:
            coeffs[k] = coeffs.get(k, 0) + c.real
        else:
            coeffs[k] = coeffs.get(k, 0) + c
            coeffs[neg] = coeffs.get(neg, 0) + c.conjugate()
    return TrigPoly(m, coeffs)


def _timed(name: str, suite: str, budget: float | None, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    t0 = time.perf_counter()
    passed, obs = fn()
    return CheckResult(name, suite, bool(passed), obs, time.perf_counter() - t0, budget)


# --- acceptance criteria ---------------------------------------------------

def _family_1(seed: int = 1) -> list[TrigPoly]:
    rng = np.random.default_rng(seed)
    return [random_real_trigpoly(rng, 1, 512) for _ in range(20)]


def criterion_1() -> tuple[bool, dict]:
    worst = 0.0
    for f in _family_1():
        g = evaluate_on_grid(f, 8192)
        for p in (1.5, 2.0, 3.0):
            ref = lp_norm(g, p)
            worst = max(worst, abs(lorentz_norm(g, p, p) - ref) / ref)
    return worst <= 1e-6, {"max_rel_err": worst}


def criterion_2() -> tuple[bool, dict]:
    worst = 0.0
    for f in _family_1():
        ref = parseval_l2(f)
        worst = max(worst, abs(lp_norm(evaluate_on_grid(f, 8192), 2.0) - ref) / ref)
    return worst <= 1e-8, {"max_rel_err": worst}


def criterion_3() -> tuple[bool, dict]:
    f = TrigPoly.cosine((1,))
    g = evaluate_on_grid(f, 4096)
    r = rearrange(g)
    t = (np.arange(4096) + 0.5) / 4096
    dev = float(np.max(np.abs(r(t) - np.cos(np.pi * t / 2))))
    v = lorentz_norm(g, 2.0, 1.0)
    ok = dev <= 2e-3 and abs(v - 0.77989) <= 1e-3
    return ok, {"max_dev": dev, "norm_2_1": v}


def _lacunary_family() -> list[LacunarySeries]:
    fam = []
    for beta in np.linspace(0.6, 3.0, 7):
        nu = np.arange(11, dtype=float)
        fam.append(LacunarySeries((nu + 1) ** -beta))
    for beta in np.linspace(0.6, 3.0, 5):
        nu = np.arange(8, dtype=float)
        fam.append(LacunarySeries(np.outer((nu + 1) ** -beta, (nu + 1) ** -beta)))
    return fam


def criterion_4() -> tuple[bool, dict]:
    ratios = []
    for lam in _lacunary_family():
        prm = SpaceParams(2.0, 2.0, 2.0, (0.0,) * lam.m)
        ratios.append(norm_SB(lacunary_to_trigpoly(lam), prm).total / lacunary_SB_closed_form(lam, prm))
    window = max(ratios) / min(ratios)
    return window <= 4.0 and len(ratios) >= 10, {"count": len(ratios), "min": min(ratios), "max": max(ratios),
                                                 "window": window}


def _thm11_ratio(f: TrigPoly, p: float, tau: float) -> float:
    tau0 = min(tau, 2.0)
    rhs = sum(poly_lorentz_norm(b, p, tau) ** tau0 for b in blocks(f).values()) ** (1 / tau0)
    return poly_lorentz_norm(f, p, tau) / rhs


def _thm12_ratio(f: TrigPoly, p: float, tau1: float, tau2: float) -> float:
    rhs = sum(
        sum(sj + 1 for sj in s) ** (tau2 * (1 / tau2 - 1 / tau1)) * poly_lorentz_norm(b, p, tau1) ** tau2
        for s, b in blocks(f).items()
    ) ** (1 / tau2)
    return poly_lorentz_norm(f, p, tau2) / rhs


def _thm11_draw(rng):
    if rng.random() < 0.5:
        return float(rng.uniform(1.2, 4.0)), float(rng.uniform(1.1, 2.0))
    return float(rng.uniform(2.2, 5.0)), float(rng.uniform(2.2, 5.0))


def theorem_constants(count: int, seed: int = 5) -> tuple[list[float], list[float]]:
    """Ratios lhs / rhs for the two block-decomposition inequalities over a random family."""
    rng = np.random.default_rng(seed)
    r11, r12 = [], []
    for _ in range(count):
        f = random_real_trigpoly(rng, 1, 512, mean_zero=True)
        p, tau = _thm11_draw(rng)
        r11.append(_thm11_ratio(f, p, tau))
        p = float(rng.uniform(1.2, 4.0))
        tau2 = float(rng.uniform(1.1, 2.0))
        tau1 = tau2 + float(rng.uniform(0.2, 3.0))
        r12.append(_thm12_ratio(f, p, tau1, tau2))
    return r11, r12


def criterion_5() -> tuple[bool, dict]:
    r11, r12 = theorem_constants(100)
    obs, ok = {}, True
    for name, r in (("thm11", r11), ("thm12", r12)):
        finite = all(math.isfinite(x) for x in r)
        c50, c100 = max(r[:50]), max(r)
        drift = c100 / c50 - 1.0
        ok = ok and finite and drift <= 0.10
        obs[f"{name}_C50"], obs[f"{name}_C100"], obs[f"{name}_drift"] = c50, c100, drift
    return ok, obs


def lemma11_violations(count: int = 1000, seed: int = 7) -> tuple[int, int]:
    """Violations of the Hoelder form and of the Jensen form (sup a^alpha, and sup a at alpha = 1)."""
    rng = np.random.default_rng(seed)
    hv = jv = 0
    for i in range(count):
        n = int(rng.integers(1, 60))
        a = rng.exponential(1.0, n) * (rng.random(n) > 0.2)
        b = rng.exponential(1.0, n) * (rng.random(n) > 0.2)
        alpha = float(rng.uniform(-2, 2)) if i % 2 else 1.0
        mask = a > 0
        a_, b_ = a[mask], b[mask]
        beta = float(rng.uniform(0.2, 4.0))
        theta = math.inf if rng.random() < 0.1 else beta + float(rng.uniform(0.05, 4.0))
        lhs = np.sum(a_ ** (beta * alpha) * b_ ** beta) ** (1 / beta)
        ep = eta_prime(theta, beta)
        bnorm = b.max() if math.isinf(theta) else np.sum(b ** theta) ** (1 / theta)
        anorm = np.sum(a_ ** (beta * alpha * ep)) ** (1 / (beta * ep)) if a_.size else 0.0
        if lhs > bnorm * anorm * (1 + 1e-12) + 1e-300:
            hv += 1
        theta2 = float(rng.uniform(0.2, 4.0))
        beta2 = theta2 + float(rng.uniform(0.0, 4.0))
        lhs2 = np.sum(a_ ** (beta2 * alpha) * b_ ** beta2) ** (1 / beta2)
        sup = (a_ ** alpha).max(initial=0.0)
        if lhs2 > np.sum(b ** theta2) ** (1 / theta2) * sup * (1 + 1e-12) + 1e-300:
            jv += 1
    return hv, jv


def criterion_6() -> tuple[bool, dict]:
    hv, jv = lemma11_violations()
    return hv == 0 and jv == 0, {"holder_violations": hv, "jensen_violations": jv}


def _draw_21(rng):
    m = int(rng.integers(1, 3))
    if rng.random() < 0.5:
        p, t2 = rng.uniform(1.2, 4.0), rng.uniform(1.1, 2.0)
    else:
        p, t2 = rng.uniform(2.1, 5.0), rng.uniform(2.1, 4.0)
    t1 = t2 + rng.uniform(0.2, 3.0)
    beta = min(2.0, t2)
    th = math.inf if rng.random() < 0.2 else beta + rng.uniform(0.2, 4.0)
    lo = -1 / th if math.isfinite(th) else 0.0
    b = tuple(float(rng.uniform(lo, 1.2)) for _ in range(m))
    return thm21_series(float(p), float(t1), float(t2), float(th), b)


def _draw_query(rng) -> EmbeddingQuery:
    m = int(rng.integers(1, 3))
    p = float(rng.uniform(1.2, 4.0))
    t2 = float(rng.uniform(1.1, 3.0))
    t1 = t2 + float(rng.uniform(0.2, 3.0))
    th2 = float(rng.uniform(0.5, 3.0))
    th1 = th2 + float(rng.uniform(0.3, 3.0))
    b1 = tuple(max(float(rng.uniform(-0.2, 1.5)), -1 / th1 + 0.01) for _ in range(m))
    b2 = tuple(max(float(rng.uniform(-0.2, 1.5)), -1 / th2 + 0.01) for _ in range(m))
    return EmbeddingQuery(SpaceParams(p, t1, th1, b1), SpaceParams(p, t2, th2, b2))


REFEREE_DRAWS = {
    "2.1": _draw_21,
    "4.4": lambda rng: thm42_condition_4_4(_draw_query(rng)),
    "4.10": lambda rng: thm43_condition_4_10(_draw_query(rng)),
}


def referee_agreement(name: str, draws: int = 100, seed: int = 12345) -> dict:
    rng = np.random.default_rng(seed)
    counts = {"agree": 0, "inconclusive": 0, "contradictions": 0}
    for _ in range(draws):
        spec = REFEREE_DRAWS[name](rng)
        sym, num = symbolic_convergence(spec), series_convergence(spec).verdict
        if num is Verdict.INCONCLUSIVE:
            counts["inconclusive"] += 1
        elif num is sym:
            counts["agree"] += 1
        else:
            counts["contradictions"] += 1
    return counts


def criterion_7() -> tuple[bool, dict]:
    obs, ok = {}, True
    for name in REFEREE_DRAWS:
        c = referee_agreement(name)
        ok = ok and c["contradictions"] == 0 and c["inconclusive"] <= 10
        obs[f"{name}_contra"], obs[f"{name}_inconcl"] = c["contradictions"], c["inconclusive"]
    return ok, obs


def criterion_8() -> tuple[bool, dict]:
    rep = cx.f0_demo()
    pred = rep.parameters["predicted_growth"]
    rel = abs(rep.growth_power - pred) / pred
    ok = rep.source_last_increment < 1e-3 and rep.target_monotone and rel <= 0.2
    return ok, {"last_increment": rep.source_last_increment, "growth": rep.growth_power, "predicted": pred,
                "rel_err": rel}


def criterion_9() -> tuple[bool, dict]:
    N = 10 ** 6
    ab = cx.abel_epsilon(lambda n: 1.0 / n, 2.0, 1.0, N=N)
    conv, div = ab.convergent_partials(), ab.divergent_partials()
    inc2 = float(conv[-1] - conv[N // 10 - 1])
    inc3 = float(div[-1] - div[N // 10 - 1])
    p1 = ab.property1()
    ok = p1 and inc2 < 1e-4 and inc3 > 1e-3
    return ok, {"property1": p1, "prop2_last_decade": inc2, "prop3_last_decade": inc3}


def g_nu_ratios(p: float, tau: float, n: int = 1 << 18) -> list[float]:
    return [cx.G_nu_lorentz_norm(nu, p, tau, n, method="mesh") / 2.0 ** (nu / tau) for nu in range(5)]


def criterion_10() -> tuple[bool, dict]:
    obs, ok = {}, True
    for p, tau in ((2.0, 2.0), (3.0, 2.0)):
        r = g_nu_ratios(p, tau)
        w = max(r) / min(r)
        ok = ok and w <= 4.0
        obs[f"window_{p:g}_{tau:g}"] = w
    return ok, obs


def criterion_11() -> tuple[bool, dict]:
    d44 = cx.f4_thm44_demo()
    rel44 = abs(d44["minorant_growth"] - d44["predicted_growth"]) / d44["predicted_growth"]
    ok44 = d44["membership_converges"] and d44["dominates"] and rel44 <= 0.2
    r5 = cx.f5_demo()
    pred5 = r5.parameters["predicted_growth"]
    rel5 = abs(r5.growth_power - pred5) / pred5
    ok5 = r5.source_bounded and r5.target_monotone and rel5 <= 0.2
    return ok44 and ok5, {"f4_growth": d44["minorant_growth"], "f4_pred": d44["predicted_growth"],
                          "f4_rel": rel44, "f5_growth": r5.growth_power, "f5_pred": pred5, "f5_rel": rel5}


ACCEPTANCE: dict[int, tuple[str, str, float, Callable[[], tuple[bool, dict]]]] = {
    1: ("lorentz", "Lorentz/Lebesgue coincidence", 5, criterion_1),
    2: ("spectrum", "Parseval", 2, criterion_2),
    3: ("lorentz", "closed-form rearrangement", 1, criterion_3),
    4: ("spaces", "lacunary block-norm window", 30, criterion_4),
    5: ("spaces", "block-decomposition inequalities", 60, criterion_5),
    6: ("embedding", "Hoelder/Jensen sequence bounds", 1, criterion_6),
    7: ("embedding", "embedding referee agreement", 60, criterion_7),
    8: ("counterexamples", "f0 sharpness demo", 10, criterion_8),
    9: ("counterexamples", "Abel sequence", 5, criterion_9),
    10: ("counterexamples", "G_nu norm law", 120, criterion_10),
    11: ("counterexamples", "lacunary sharpness demos", 30, criterion_11),
}

ALL_BUDGET = 600.0


def run_criterion(i: int) -> CheckResult:
    suite, title, budget, fn = ACCEPTANCE[i]
    return _timed(f"criterion {i}: {title}", suite, budget, fn)


# --- module properties -----------------------------------------------------

def _prop_partition() -> tuple[bool, dict]:
    rng = np.random.default_rng(3)
    bad = 0
    for _ in range(30):
        f = random_real_trigpoly(rng, int(rng.integers(1, 3)), 200)
        parts = blocks(f)
        acc = TrigPoly.zero(f.m)
        for s in parts:
            acc = acc + block_extract(f, s)
        keys = [set(b.coeffs) for b in parts.values()]
        overlap = sum(len(a & b) for i, a in enumerate(keys) for b in keys[i + 1:])
        err = abs(parseval_l2(f) ** 2 - sum(parseval_l2(b) ** 2 for b in parts.values()))
        bad += (not acc.equals(f)) + (overlap > 0) + (err > 1e-12 * max(parseval_l2(f) ** 2, 1))
    return bad == 0, {"failures": bad}


def _prop_fft_direct() -> tuple[bool, dict]:
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(5):
        f = random_real_trigpoly(rng, 1, 64)
        n = 256
        g = evaluate_on_grid(f, n).values
        d = evaluate_at(f, np.arange(n) / n).real
        worst = max(worst, float(np.max(np.abs(g - d))))
    return worst <= 1e-10, {"max_abs_err": worst}


def _prop_mixed_difference() -> tuple[bool, dict]:
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(5):
        f = random_real_trigpoly(rng, 2, 16)
        h = tuple(float(v) for v in rng.uniform(-0.5, 0.5, 2))
        d = mixed_difference(f, (1, 1), h)
        x = rng.random((50, 2))
        pts = lambda a, b: evaluate_at(f, np.column_stack([x[:, 0] + a, x[:, 1] + b]))
        direct = pts(h[0], h[1]) - pts(h[0], 0) - pts(0, h[1]) + pts(0, 0)
        worst = max(worst, float(np.max(np.abs(evaluate_at(d, x) - direct))))
    return worst <= 1e-10, {"max_abs_err": worst}


def _prop_lorentz_invariances() -> tuple[bool, dict]:
    rng = np.random.default_rng(6)
    v = rng.normal(size=4096)
    a = lorentz_norm(v, 3.0, 2.0)
    perm = lorentz_norm(rng.permutation(v), 3.0, 2.0)
    hom = abs(lorentz_norm(-2.5 * v, 3.0, 2.0) / a - 2.5)
    dom = lorentz_norm(np.abs(v) + 0.1, 3.0, 2.0) >= a
    return perm == a and hom <= 1e-12 and dom, {"perm_equal": perm == a, "homogeneity_err": hom}


def _prop_grid_refinement() -> tuple[bool, dict]:
    f = cx.hl_cosine_sum(0, 64, 3.0)
    vals = [lorentz_norm(evaluate_on_grid(f, n), 3.0, 1.5) for n in (4096, 8192, 16384)]
    change = abs(vals[-1] / vals[-2] - 1.0)
    return change <= 1e-3, {"last_change": change}


def _prop_b_monotone() -> tuple[bool, dict]:
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(10):
        f = random_real_trigpoly(rng, 1, 256, mean_zero=True)
        b = float(rng.uniform(-0.3, 1.0))
        lo = norm_SB(f, SpaceParams(2.0, 2.0, 1.5, (b,))).total
        hi = norm_SB(f, SpaceParams(2.0, 2.0, 1.5, (b + 0.3,))).total
        bad += hi < lo
    return bad == 0, {"violations": bad}


def _prop_thm31_upper() -> tuple[bool, dict]:
    ratios = []
    for lam in _lacunary_family():
        prm = SpaceParams(2.0, 2.0, 2.0, (0.0,) * lam.m)
        f = lacunary_to_trigpoly(lam)
        ratios.append(norm_SboldB_discrete(f, prm).total / lacunary_boldB_tail_form(lam, prm, 2.0))
    return max(ratios) < math.inf, {"max_C": max(ratios)}


def _prop_eta_prime() -> tuple[bool, dict]:
    return eta_prime(math.inf, 2.0) == 1.0, {"eta_prime_inf": eta_prime(math.inf, 2.0)}


def _prop_mean_zero() -> tuple[bool, dict]:
    built = [
        lacunary_to_trigpoly(cx.f0_build(0, 1.5, 1, 6)),
        lacunary_to_trigpoly(cx.f0_build(1, 1.5, 2, 4)),
        cx.G_s_build((3,), 2.0), cx.G_nu_build((1,), 3.0), cx.hl_cosine_sum(0, 32, 2.0),
        lacunary_to_trigpoly(cx.f5_build(1.1, 0, 1, 6)),
    ]
    ok = all(f.is_real() and f.is_mean_zero() for f in built)
    return ok, {"checked": len(built)}


def _prop_f3_ledger() -> tuple[bool, dict]:
    q = EmbeddingQuery(SpaceParams(2.0, 4.0, 2.0, (0.0,)), SpaceParams(2.0, 2.0, 1.0, (0.0,)))
    sup = cx.f3_build(q, 64)
    ratios = []
    for n in (2, 3):
        tr = sup.truncate(n)
        led = cx.superposition_ledger(tr, q)[0]
        ratios.append(led / norm_SB(tr.to_trigpoly(), q.source).total)
    tgt = [cx.superposition_ledger(sup.truncate(n), q)[1] for n in (8, 16, 32, 64)]
    window = max(ratios) / min(ratios)
    return window <= 4 and all(np.diff(tgt) > 0), {"engine_ratios": ratios, "target_growth": tgt}


PROPERTIES: dict[str, list[tuple[str, Callable[[], tuple[bool, dict]]]]] = {
    "lorentz": [("permutation/homogeneity/dominance", _prop_lorentz_invariances),
                ("grid refinement", _prop_grid_refinement)],
    "spectrum": [("block partition and orthogonality", _prop_partition),
                 ("FFT against direct summation", _prop_fft_direct),
                 ("mixed difference against pointwise", _prop_mixed_difference)],
    "spaces": [("monotone in b", _prop_b_monotone), ("tail-form upper bound constant", _prop_thm31_upper)],
    "embedding": [("eta' at theta = inf", _prop_eta_prime)],
    "counterexamples": [("builders real and mean-zero", _prop_mean_zero),
                        ("f3 ledger against the engine", _prop_f3_ledger)],
}


def run_suite(suite: str) -> list[CheckResult]:
    if suite == "all":
        t0 = time.perf_counter()
        out = [r for s in SUITES for r in run_suite(s)]
        total = time.perf_counter() - t0
        out.append(CheckResult("criterion 12: verify all wall clock", "all", total <= ALL_BUDGET,
                               {"seconds": total}, total, None))
        return out
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    out = [_timed(name, suite, None, fn) for name, fn in PROPERTIES[suite]]
    out += [run_criterion(i) for i, (s, *_) in ACCEPTANCE.items() if s == suite]
    return out
