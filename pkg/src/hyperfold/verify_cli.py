"""Verification suites with machine-readable reports.

Each suite draws ``trials`` random cases from per-trial child seeds and
scores every case by a margin: positive means the checked inequality holds
with that much room. ``run`` builds the report; ``main`` is the console
entry point.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from typing import Callable

import numpy as np

from .distortion_lab import perfect_model_scan, perturbed_assembly, product_estimate, random_admissible
from .errors import BadParams, GeometryError, UnknownSuite
from .foot_matching import TauSymmetric, assemble, match_feet, sample_feet, tau_shift
from .hexagon_trig import Hexagon
from .inefficiency import predict_closure
from .moebius_core import axis, canonicalize, half_length, is_inf
from .pants_builder import Pants, pool_from_feet, regular_base, shears, spin_decomposition
from .segment_calculus import FramedCycle
from .zigzag import zigzag_axis_distance, zigzag_bounds, zigzag_entries, zigzag_word

SCHEMA = 1


def _phase(rng) -> float:
    return float(rng.uniform(-math.pi, math.pi))


def _moebius(rng, p, tol):
    m = p["scale"] * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    g = canonicalize(m)
    det_err = abs(g.det - 1)
    ax = axis(g)
    ends = [q for q in (ax.p_rep, ax.p_att) if not is_inf(q)]
    fixed_err = max((abs(g.act(q) - q) / max(1.0, abs(q)) for q in ends if not is_inf(g.act(q))), default=0.0)
    hl = half_length(g).value
    trace_err = min(abs(2 * cmath.cosh(hl) - s * g.trace) for s in (1, -1)) / max(1.0, abs(g.trace))
    worst = max(det_err, fixed_err, trace_err)
    return {"det": det_err, "fixed": fixed_err, "trace": trace_err}, tol - worst


def tame_cycle(rng, L: float, m: int, delta: float) -> FramedCycle:
    """Random continuous cycle of m long segments alternating with m detours."""
    segs = []
    for _ in range(m):
        segs.append(complex(rng.uniform(2 * L, 2 * L + 2), _phase(rng)))
        while True:
            half = complex(rng.uniform(0.2, 2.0), _phase(rng))
            if abs(math.log(abs(cmath.sinh(half)))) <= delta:
                break
        segs.append(2 * half)
    return FramedCycle.continuous(segs)


def _inefficiency(rng, p, tol):
    c = tame_cycle(rng, p["L"], int(p["m"]), p["delta"])
    _, (length_gap, phase_gap) = predict_closure(c)
    worst = max(length_gap, phase_gap)
    return {"length_gap": length_gap, "phase_gap": phase_gap}, tol - worst


def _hexagon(rng, p, tol):
    x, c, y = (complex(rng.uniform(0.1, p["spread"]), _phase(rng)) for _ in range(3))
    h = Hexagon.from_consecutive(x, c, y)
    worst = max(max(h.cosine_residuals()), h.closure_defect())
    return {"sides": [[x.real, x.imag], [c.real, c.imag], [y.real, y.imag]]}, tol - worst


def random_zigzag(rng, L: float, eps: float):
    longs = [complex(rng.uniform(L, L + 5), _phase(rng)) for _ in range(2)]
    shorts = [eps * rng.uniform(0, 1) * cmath.exp(1j * _phase(rng)) for _ in range(2)]
    return longs[0], shorts[0], longs[1], shorts[1]


def _zigzag(rng, p, tol):
    ls = random_zigzag(rng, p["L"], p["eps"])
    bound, _ = zigzag_bounds(p["L"], p["eps"], 2 * p["L"], 1.0)
    D = zigzag_axis_distance(*ls)
    word = zigzag_word(*ls).matrix
    entries = np.array(zigzag_entries(*ls)).reshape(2, 2)
    scale = np.abs(entries).max()
    agree = min(np.abs(word - entries).max(), np.abs(word + entries).max()) / scale
    margin = min(bound - math.sinh(D), tol - agree)
    return {"sinh_D": math.sinh(D), "bound": bound, "word_gap": agree}, margin


def _pants(rng, p, tol):
    hl = tuple(complex(rng.uniform(0.3, p["hl_max"]), rng.uniform(-1, 1)) for _ in range(3))
    offsets = [tuple(complex(rng.uniform(0, 1), _phase(rng)) for _ in range(3)) for _ in range(2)]
    p1, p2 = Pants(hl, offsets[0], 1), Pants(hl, offsets[1], -1)
    closure = p1.hexagon().closure_defect()
    residual = max(shears(p1, p2, k).residual for k in range(3))
    worst = max(closure, residual)
    return {"closure": closure, "shear_residual": residual}, tol - worst


def _matching(rng, p, tol):
    hl = complex(p["hl"], 0)
    s = complex(rng.uniform(0, hl.real), _phase(rng))
    fs = sample_feet(int(p["n"]), hl, TauSymmetric(s, p["jitter"]), seed=int(rng.integers(2**31)))
    pairs = match_feet(fs, s, tol)
    errs = [fs.feet[b].point.distance(tau_shift(fs.feet[a].point, s)) for a, b in pairs.items()]
    complete = len(pairs) == len(fs) // 2
    worst = max(errs, default=0.0)
    return {"pairs": len(pairs), "max_error": worst}, (tol - worst) if complete else -1.0


def _distortion(rng, p, tol):
    A_, B_ = rng.uniform(0.2, p["A"]), rng.uniform(0.2, p["B"])
    eps = min(rng.uniform(0, p["eps"]), 0.999 / max(A_, B_))
    n = int(rng.integers(1, int(p["n_max"]) + 1))
    est = product_estimate(*random_admissible(rng, n, A_, B_, eps), A_, B_, eps)
    case = {"n": n, "lhs": est.lhs, "sum_lhs": est.sum_lhs, "bound": est.bound}
    return case, 1.0 - est.lhs / est.bound


def _pipeline(rng, p, tol):
    """One run of the toy construction; the margin is the worst stage margin."""
    base = regular_base(eta=p["eta"])
    spun = spin_decomposition(base, p["R0"], p["eps"])
    fit = spun.fit
    stages = {
        "lattice_fit": fit.m1 - max(fit.errors),
        "spin": math.sqrt(2) * p["eps"] - max(spun.residuals),
        "goodness": min(min(c["hl_margin"], c["shear_margin"]) for c in spun.report["cuffs"]),
    }
    hl = [h.value for h in spun.hl]
    sh = [s.value for s in spun.shears]
    seeds = rng.integers(2**31, size=3)
    footsets = [sample_feet(int(p["n_pants"]), hl[k], TauSymmetric(sh[k], p["jitter"]), seed=int(seeds[k])) for k in range(3)]
    asm = assemble(pool_from_feet(hl, footsets), sh, tol)
    stages["assemble"] = tol - max(g.error for g in asm.gluings)
    model, _ = perfect_model_scan(asm, p["D"], int(p["depth"]))
    _, perfect = perfect_model_scan(model, p["D"], int(p["depth"]))
    stages["perfect_model"] = 1e-10 - perfect
    ratios = []
    # one perturbation direction scaled by each size
    for e in (1e-3, 1e-4):
        _, w = perfect_model_scan(perturbed_assembly(model, e, seed=int(seeds[0])), p["D"], int(p["depth"]))
        ratios.append(w / e)
    stages["linearity"] = 0.3 - abs(ratios[1] / ratios[0] - 1)
    case = {"n": list(fit.n), "R": fit.R, "stages": stages, "slopes": ratios}
    return case, min(stages.values())


Suite = tuple[Callable, dict, float, int]

SUITES: dict[str, Suite] = {
    "moebius": (_moebius, {"scale": 1.0}, 1e-9, 200),
    "inefficiency": (_inefficiency, {"L": 10.0, "m": 3, "delta": 2.0}, 1e-4, 200),
    "hexagon": (_hexagon, {"spread": 3.0}, 1e-10, 500),
    "zigzag": (_zigzag, {"L": 10.0, "eps": 1e-4}, 1e-12, 1000),
    "pants": (_pants, {"hl_max": 3.0}, 1e-9, 200),
    "matching": (_matching, {"n": 20, "jitter": 1e-4, "hl": 2.0}, 1e-2, 200),
    "distortion": (_distortion, {"A": 2.0, "B": 2.0, "eps": 1e-2, "n_max": 50}, 0.0, 1000),
    "pipeline": (
        _pipeline,
        {"R0": 1.0, "eps": 1e-3, "eta": 0.5, "n_pants": 6, "jitter": 1e-4, "D": 10.0, "depth": 4},
        1e-2,
        1,
    ),
}


def _clean(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else (None if math.isnan(x) else math.copysign(1e308, x))
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return _clean(x.item())
    return x


def run(suite: str, params: dict | None = None, seed: int = 0, trials: int | None = None, tol: float | None = None) -> dict:
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(sorted(SUITES))}")
    fn, defaults, default_tol, default_trials = SUITES[suite]
    given = dict(params or {})
    if "trials" in given:
        trials = int(given.pop("trials"))
    for key in given:
        if key not in defaults:
            raise BadParams(f"unknown parameter {key!r} for suite {suite}")
    merged = dict(defaults)
    for key, value in given.items():
        try:
            merged[key] = type(defaults[key])(value)
        except (TypeError, ValueError) as exc:
            raise BadParams(f"parameter {key!r} cannot take value {value!r}") from exc
    trials = default_trials if trials is None else int(trials)
    tol = default_tol if tol is None else float(tol)
    if trials < 1:
        raise BadParams("trials must be positive")
    results = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        rng = np.random.default_rng(child)
        try:
            case, margin = fn(rng, merged, tol)
        except GeometryError as exc:
            case, margin = {"error": f"{type(exc).__name__}: {exc}"}, -math.inf
        results.append({"case": dict(index=i, **case), "margin": float(margin), "pass": bool(margin > 0)})
    fails = [r for r in results if not r["pass"]]
    summary = {
        "pass_count": len(results) - len(fails),
        "fail_count": len(fails),
        "max_violation": max((-r["margin"] for r in fails), default=0.0),
    }
    report = {
        "schema": SCHEMA,
        "suite": suite,
        "seed": seed,
        "trials": trials,
        "tol": tol,
        "params": merged,
        "results": results,
        "summary": summary,
    }
    return _clean(report)


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, allow_nan=False) + "\n"


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "margin", "pass"])
    for r in report["results"]:
        w.writerow([r["case"]["index"], repr(r["margin"]), int(r["pass"])])
    return buf.getvalue()


def _param(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, value


def build_parser() -> argparse.ArgumentParser:
    lines = [f"  {name}: trials={d[3]}, tol={d[2]:g}, " + ", ".join(f"{k}={v}" for k, v in d[1].items()) for name, d in SUITES.items()]
    parser = argparse.ArgumentParser(
        prog="hyperfold-verify",
        description="Run a verification suite and print a JSON or CSV report.",
        epilog="suite defaults:\n" + "\n".join(lines) + "\n\nexit codes: 0 pass, 1 verification failure, 2 usage error",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--suite", required=True, help="one of: " + ", ".join(SUITES))
    parser.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    parser.add_argument("--trials", type=int, default=None, help="number of random cases (suite default)")
    parser.add_argument("--tol", type=float, default=None, help="tolerance (suite default)")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")
    parser.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE", help="override a suite parameter")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = run(args.suite, dict(args.param), args.seed, args.trials, args.tol)
    except (UnknownSuite, BadParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = to_json(report) if args.format == "json" else to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["fail_count"] == 0 else 1
