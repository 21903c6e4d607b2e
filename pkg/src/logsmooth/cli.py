"""Command-line front end: ``logsmooth {norm,blocks,embed-check,counterexample,verify}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import counterexamples as cx
from .embedding import EmbeddingQuery, check_embedding
from .lorentz import LorentzParams, ParameterError
from .spaces import (GridConfig, ModulusConfig, SpaceParams, lacunary_boldB_tail_form, lacunary_SB_closed_form,
                     norm_SB, norm_SboldB_discrete, norm_SboldB_modulus, poly_lorentz_norm)
from .spectrum import LacunarySeries, ResolutionError, TrigPoly, blocks, lacunary_to_trigpoly

SCHEMA = 1
EXIT_ERROR = 2
EXIT_CONTRADICTION = 3


class CLIError(Exception):
    pass


def _clean(obj):
    """Round floats to 10 significant digits; non-finite floats become strings."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.10g}")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def render(payload: dict) -> str:
    return json.dumps(_clean({"schema": SCHEMA, **payload}), sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(v) for v in s.split(","))


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in s.split(","))


def _theta(s: str) -> float:
    return math.inf if s.lower() in ("inf", "infinity") else float(s)


# --- function specs --------------------------------------------------------

def _load_function(a) -> TrigPoly | LacunarySeries:
    if a.const_zero:
        return TrigPoly.zero(a.m)
    if a.file:
        return TrigPoly.load(a.file)
    if a.lacunary:
        path = Path(a.lacunary)
        lam = np.load(path) if path.suffix == ".npy" else np.asarray(json.loads(path.read_text()), dtype=float)
        return LacunarySeries(lam)
    if a.builder:
        return _build(a)
    raise CLIError("no function given: use --file, --lacunary, --builder or --const-zero")


def _query(a) -> EmbeddingQuery:
    m = a.m
    b1 = a.b1 if a.b1 is not None else (0.0,) * m
    b2 = a.b2 if a.b2 is not None else (0.0,) * m
    return EmbeddingQuery(SpaceParams(a.p, a.tau1, a.theta1, b1), SpaceParams(a.p, a.tau2, a.theta2, b2))


def _build(a):
    name = a.builder
    if name == "hl_sum":
        return cx.hl_cosine_sum(a.j, a.N, a.p, a.m)
    if name == "G_s":
        return cx.G_s_build(a.s or (1,) * a.m, a.p, a.variant)
    if name == "G_nu":
        return cx.G_nu_build(a.nu or (0,) * a.m, a.p)
    if name == "f0":
        lo, hi = cx.beta_interval(a.b1[0] if a.b1 else 0.0, a.theta1, a.b2[0] if a.b2 else 0.0, a.theta2)
        beta = a.beta if a.beta is not None else 0.5 * (lo + hi)
        return cx.f0_build(a.j, beta, a.m, a.s_max, (lo, hi))
    if name == "f4_thm44":
        _, v = cx.thm44_params(a.p, a.tau, a.theta, (a.b[0] if a.b else 0.0,) * a.m)
        lo, hi = cx.mu_interval_thm44(a.theta)
        mu = a.mu if a.mu is not None else 0.5 * (lo + hi)
        return cx.f4_sharpness_build(a.eps, mu, a.j, v[a.j], a.theta, a.m, a.s_max)
    if name == "f5":
        b = a.b[a.j] if a.b else 0.0
        gamma, _ = cx.thm45_params(a.p, a.tau, a.theta, (b,) * a.m)
        lo, hi = cx.mu_interval_thm45(b, a.theta, gamma, a.eps)
        mu = a.mu if a.mu is not None else 0.5 * (lo + hi)
        return cx.f5_build(mu, a.j, a.m, a.s_max, (lo, hi))
    if name in ("f3", "f4_thm43"):
        q = _query(a)
        sup = cx.f3_build(q, a.n_max) if name == "f3" else cx.f4_thm43_build(q, a.n_max)
        return sup.to_trigpoly()
    raise CLIError(f"unknown builder {name!r}")


def _space(a, m: int) -> SpaceParams:
    b = a.b if a.b is not None else (0.0,) * m
    if len(b) == 1 and m > 1:
        b = b * m
    return SpaceParams(a.p, a.tau, a.theta, b)


def cmd_norm(a) -> dict:
    LorentzParams(a.p, a.tau)
    f = _load_function(a)
    grid = GridConfig(n=a.n, oversample=a.oversample)
    if isinstance(f, LacunarySeries):
        prm = _space(a, f.m)
        if a.space == "closed-forms":
            return {"command": "norm", "space": a.space,
                    "SB_closed_form": lacunary_SB_closed_form(f, prm),
                    "SboldB_tail_form_q2": lacunary_boldB_tail_form(f, prm, 2.0),
                    "SboldB_tail_form_qtau": lacunary_boldB_tail_form(f, prm, prm.tau)}
        f = lacunary_to_trigpoly(f)
    if a.space == "lorentz":
        return {"command": "norm", "space": "lorentz", "p": a.p, "tau": a.tau,
                "value": poly_lorentz_norm(f, a.p, a.tau, grid)}
    prm = _space(a, f.m)
    if a.space == "SB":
        br = norm_SB(f, prm, grid)
    elif a.space == "SboldB-discrete":
        br = norm_SboldB_discrete(f, prm, grid)
    elif a.space == "SboldB-modulus":
        br = norm_SboldB_modulus(f, prm, ModulusConfig(k=(a.k,) * f.m, grid=grid))
    else:
        raise CLIError(f"space {a.space!r} needs a lacunary series")
    return {"command": "norm", "space": a.space, "value": br.total, "breakdown": br.to_dict()}


def cmd_blocks(a) -> dict:
    LorentzParams(a.p, a.tau)
    f = _load_function(a)
    if isinstance(f, LacunarySeries):
        f = lacunary_to_trigpoly(f)
    grid = GridConfig(n=a.n, oversample=a.oversample)
    rows = [{"s": list(s), "terms": len(b), "lorentz": poly_lorentz_norm(b, a.p, a.tau, grid)}
            for s, b in blocks(f).items()]
    return {"command": "blocks", "p": a.p, "tau": a.tau, "blocks": rows}


def cmd_embed_check(a) -> tuple[dict, int]:
    m = a.m
    b1 = a.b1 if a.b1 is not None else (0.0,) * m
    src = SpaceParams(a.p, a.tau1, a.theta1, b1)
    if a.target_space == "L":
        res = check_embedding(src, target_space="L", target_tau=a.tau2)
    else:
        b2 = a.b2 if a.b2 is not None else (0.0,) * m
        res = check_embedding(src, SpaceParams(a.p, a.tau2, a.theta2, b2),
                              source_space=a.source_space, target_space=a.target_space)
    code = EXIT_CONTRADICTION if res.contradiction else 0
    return {"command": "embed-check", "result": res.to_dict()}, code


def cmd_counterexample(a):
    if a.construction == "f0":
        rep = cx.f0_demo()
    elif a.construction == "f5":
        rep = cx.f5_demo()
    elif a.construction == "f4_thm44":
        if a.format == "csv":
            raise CLIError("f4_thm44 reports a membership series and a tail functional; use --format json")
        return {"command": "counterexample", "report": cx.f4_thm44_demo()}
    elif a.construction in ("f3", "f4_thm43"):
        q = _query(a)
        build = cx.f3_build if a.construction == "f3" else cx.f4_thm43_build
        sup = build(q, a.n_max)
        shells = sup.shells()
        rows = [(n, *cx.superposition_ledger(sup.truncate(n), q)) for n in shells]
        if a.format == "csv":
            lines = ["truncation,source_norm,target_norm"] + [f"{n},{s:.10g},{t:.10g}" for n, s, t in rows]
            return "\n".join(lines) + "\n"
        return {"command": "counterexample", "construction": a.construction,
                "ledger": [{"truncation": n, "source_norm": s, "target_norm": t} for n, s, t in rows]}
    else:
        raise CLIError(f"unknown construction {a.construction!r}")
    if a.format == "csv":
        return rep.to_csv()
    return {"command": "counterexample", "report": rep.to_dict()}


def cmd_verify(a) -> tuple[str, int]:
    from .verify import run_suite

    results = run_suite(a.suite)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.ok]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", (1 if failed else 0)


# --- parser ----------------------------------------------------------------

def _add_function_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("function")
    g.add_argument("--file", help="TrigPoly JSON file")
    g.add_argument("--lacunary", help="coefficient array (.npy or JSON nested list)")
    g.add_argument("--builder", choices=["f0", "f3", "f4_thm43", "f4_thm44", "f5", "G_s", "G_nu", "hl_sum"])
    g.add_argument("--const-zero", action="store_true")
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--N", type=int, default=64)
    g.add_argument("--j", type=int, default=0)
    g.add_argument("--s", type=_ints)
    g.add_argument("--nu", type=_ints)
    g.add_argument("--variant", choices=["wide", "narrow"], default="wide")
    g.add_argument("--beta", type=float)
    g.add_argument("--mu", type=float)
    g.add_argument("--eps", type=float, default=0.05)
    g.add_argument("--s-max", type=int, default=64)
    g.add_argument("--n-max", type=int, default=3)


def _add_space_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("space")
    g.add_argument("--p", type=float, default=2.0)
    g.add_argument("--tau", type=float, default=2.0)
    g.add_argument("--theta", type=_theta, default=2.0)
    g.add_argument("--b", type=_floats)
    g.add_argument("--n", type=int, help="grid points per dimension")
    g.add_argument("--oversample", type=int, default=4)
    g.add_argument("--k", type=int, default=1, help="difference order for the modulus form")


def _add_query_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("embedding query")
    g.add_argument("--tau1", type=float, default=4.0)
    g.add_argument("--tau2", type=float, default=2.0)
    g.add_argument("--theta1", type=_theta, default=2.0)
    g.add_argument("--theta2", type=_theta, default=1.0)
    g.add_argument("--b1", type=_floats)
    g.add_argument("--b2", type=_floats)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logsmooth", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="Lorentz or space norm of a function")
    _add_function_flags(p)
    _add_space_flags(p)
    _add_query_flags(p)
    p.add_argument("--space", default="lorentz",
                   choices=["lorentz", "SB", "SboldB-discrete", "SboldB-modulus", "closed-forms"])
    p.add_argument("--out")

    p = sub.add_parser("blocks", help="per-block Lorentz norms")
    _add_function_flags(p)
    _add_space_flags(p)
    _add_query_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("embed-check", help="decide an embedding between two spaces")
    p.add_argument("--source-space", choices=["B", "bB"], default="B")
    p.add_argument("--target-space", choices=["B", "bB", "L"], default="B")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--m", type=int, default=1)
    _add_query_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("counterexample", help="truncation ladder of a sharpness construction")
    p.add_argument("construction", choices=["f0", "f3", "f4_thm43", "f4_thm44", "f5"])
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n-max", type=int, default=64)
    _add_query_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=["lorentz", "spectrum", "spaces", "embedding", "counterexamples", "all"])
    p.add_argument("--out")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    code = 0
    try:
        if a.command == "norm":
            text = render(cmd_norm(a))
        elif a.command == "blocks":
            text = render(cmd_blocks(a))
        elif a.command == "embed-check":
            payload, code = cmd_embed_check(a)
            text = render(payload)
        elif a.command == "counterexample":
            res = cmd_counterexample(a)
            text = res if isinstance(res, str) else render(res)
        else:
            text, code = cmd_verify(a)
    except (ParameterError, ResolutionError, CLIError, ValueError, OSError, OverflowError) as e:
        sys.stdout.write(render({"error": {"type": type(e).__name__, "message": str(e)}}))
        return EXIT_ERROR
    _emit(text, getattr(a, "out", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
