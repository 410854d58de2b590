"""Command-line front end.

    sharpwave constants --dim 2 3 4 --beta 0 0.25
    sharpwave lemma31 --dim 3 --beta 0 --nodes 200 --seed 7
    sharpwave verify --dim 3 --beta 0 --mode pm --data foschi
    sharpwave counterexample --dim 3 --beta -0.25 --format csv
    sharpwave all

Exit status: 0 if every check passed, 1 if any failed, 3 if an optimizer
run was inconclusive (and nothing failed), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import constants as K
from . import experiments as E
from .errors import DomainError, UnsupportedDataError
from .functionals import LHSQuadrature, SignMode
from .model import Setting, preset

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
OUT_DIR_ENV = "SHARPWAVE_OUT_DIR"
COMMANDS = ("constants", "lemma31", "lorentz", "verify", "radial", "sphere", "counterexample", "search", "all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    dim: list[int] = field(default_factory=lambda: [3])
    beta: list[float] = field(default_factory=lambda: [0.0])
    mode: str = "pm"
    data: str = "foschi"
    data2: str | None = None
    tol: float = 1e-3
    nodes: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    budget: int = 500
    params: int = 4
    pairs: int = 100
    samples: int = 1000
    timing: bool = False

    @property
    def setting(self) -> Setting:
        return Setting(self.dim[0], self.beta[0])

    @property
    def sign_mode(self) -> SignMode:
        return SignMode(self.mode)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command not in ("constants", "all") and (len(self.dim) != 1 or len(self.beta) != 1):
            raise UsageError(f"{self.command} takes a single --dim and a single --beta")
        if any(d < 2 for d in self.dim):
            raise UsageError("dimension must be at least 2")
        if self.nodes is not None and self.nodes < 4:
            raise UsageError("--nodes must be at least 4")
        try:
            s = self.setting
            if self.command in ("lemma31", "verify") and self.mode == "pm":
                s.require("admissible_inequality")
            if self.command == "verify" and self.mode == "pp":
                s.require("admissible_sharp_pp")
            if self.command in ("radial", "search"):
                s.require("admissible_sharp" if self.mode == "pm" else "admissible_sharp_pp")
            if self.command in ("verify", "radial"):
                preset(self.data, s.d)
                if self.data2:
                    preset(self.data2, s.d)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc

    def quad(self) -> LHSQuadrature:
        return LHSQuadrature() if self.nodes is None else LHSQuadrature.from_nodes(self.nodes)


# -- serialization -------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits; key order is insertion order."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = ";".join(_fmt_float(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            out[key] = _fmt_float(v)
        else:
            out[key] = v
    return out


def emit_report(reports: Sequence[E.VerificationReport], fmt: str, sink: IO[str], scans: Sequence[E.ScanResult] = (), timing: bool = False) -> None:
    """Write reports (and scan tables) to ``sink`` as json, csv or text."""
    if fmt == "json":
        doc: dict = {"reports": [r.to_dict(timing) for r in reports]}
        if scans:
            doc["scans"] = [s.to_dict() for s in scans]
        sink.write(to_json(doc) + "\n")
    elif fmt == "csv":
        w = csv.writer(sink, lineterminator="\n")
        for i, s in enumerate(scans):
            # one two-column (delta, value) table per integral
            if i:
                sink.write("\n")
            w.writerow(["delta", s.name])
            for x, v in zip(s.deltas, s.values):
                w.writerow([_fmt_float(x), _fmt_float(v)])
        if reports:
            rows = [_flatten(r.to_dict(timing)) for r in reports]
            cols: list[str] = []
            for row in rows:
                cols += [c for c in row if c not in cols]
            w = csv.DictWriter(sink, fieldnames=cols, lineterminator="\n")
            if scans:
                sink.write("\n")
            w.writeheader()
            w.writerows(rows)
    elif fmt == "text":
        for r in reports:
            sink.write(f"[{r.status.upper():12s}] {r.name}  {_inputs_summary(r.inputs)}\n")
            for k, v in r.computed.items():
                line = f"    {k:36s} {v: .12g}"
                if k in r.rel_errors:
                    line += f"   ref {r.reference[k]: .12g}  rel {r.rel_errors[k]:.2e} (tol {r.tolerances[k]:.0e})"
                sink.write(line + "\n")
            if timing:
                sink.write(f"    runtime_ms {r.runtime_ms}\n")
        for s in scans:
            sink.write(f"\n{s.name}: slope {s.slope:.6f} +- {s.slope_stderr:.1e} (theory {s.theory_slope:.6f})\n")
            sink.write(f"    {'delta':>24s} {'value':>24s}\n")
            for x, v in zip(s.deltas, s.values):
                sink.write(f"    {x:24.17g} {v:24.17g}\n")
    else:
        raise UsageError(f"unknown format {fmt!r}")


def _inputs_summary(inputs: dict) -> str:
    keys = [k for k in ("d", "beta", "mode", "f", "g", "dims") if k in inputs]
    return " ".join(f"{k}={inputs[k]}" for k in keys)


# -- commands ---------------------------------------------------------------------------------


def _constants_table(cfg: RunConfig) -> list[dict]:
    rows = []
    for d in cfg.dim:
        for beta in cfg.beta:
            rows.append({"d": d, "beta": beta, **K.constant_table(beta, d)})
    return rows


def _emit_constants(rows: list[dict], fmt: str, sink: IO[str]) -> None:
    if fmt == "json":
        sink.write(to_json({"constants": rows}) + "\n")
        return
    cols = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(sink, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows({k: ("" if v is None else _fmt_float(v) if isinstance(v, float) else v) for k, v in r.items()} for r in rows)
        return
    cell = lambda v: "-" if v is None else (f"{v:.10g}" if isinstance(v, float) else str(v))
    widths = {c: max(len(c), *(len(cell(r[c])) for r in rows)) for c in cols}
    sink.write("  ".join(c.rjust(widths[c]) for c in cols) + "\n")
    for r in rows:
        sink.write("  ".join(cell(r[c]).rjust(widths[c]) for c in cols) + "\n")


def _sphere_suites(cfg: RunConfig) -> list[E.VerificationReport]:
    s = cfg.setting
    d, lam = s.d, s.lam
    f = preset(cfg.data, d)
    g = preset(cfg.data2, d) if cfg.data2 else f
    n = cfg.nodes or 64
    out = []
    if -2 <= lam < 0:
        out.append(E.verify_lemma21(s, seed=cfg.seed, n=n))
    if 0 < lam < d - 1 and s.admissible_sharp:
        out.append(E.verify_hls(s, f, g, n=n))
    if s.beta_d < s.beta <= (5 - d) / 4:
        if s.beta > (3 - d) / 4:
            out.append(E.verify_corollary14(s, f, n=n, tol=cfg.tol))
        else:
            out.append(E.verify_corollary14(s, f, g, n=n, tol=cfg.tol))
    if abs(s.beta - (3 - d) / 4) < 1e-15:
        out.append(E.verify_threshold(s, f, g, n=n))
    if not out:
        raise UsageError(f"no sphere suite applies at d={d}, beta={s.beta:g} (lambda = 3-d-4beta = {lam:g})")
    return out


def acceptance_grid(cfg: RunConfig) -> list[E.VerificationReport]:
    """The full acceptance grid, in a fixed order."""
    reps: list[E.VerificationReport] = []
    for d in (2, 3, 4, 5):
        for beta in E.lemma31_betas(d):
            reps.append(E.verify_lemma31(Setting(d, beta), seed=cfg.seed))
        reps.append(E.verify_lorentz(d, seed=cfg.seed))
    for d, beta in ((3, 0.0), (2, 0.25), (3, 0.5), (4, 0.0)):
        f = preset("foschi", d)
        for mode in SignMode:
            reps.append(E.verify_theorem(Setting(d, beta), f, f, mode))
    g = preset("gaussian", 3)
    reps.append(E.verify_theorem(Setting(3, 0.0), g, g, expect_strict=True))
    reps.append(E.verify_constant_identities())
    for d in (3, 4, 5):
        f, h = preset("extremiser(-1+0.5j,0.4,0.1)", d), preset("extremiser(-2,-0.3,0)", d)
        reps.append(E.verify_threshold(Setting(d, (3 - d) / 4), f, h))
    reps.append(E.verify_lemma21(Setting(3, 0.5), seed=cfg.seed))
    reps.append(E.verify_lemma21(Setting(3, 0.15), seed=cfg.seed))
    for d, beta in ((4, -0.3), (3, -0.1)):
        f = preset("extremiser(-1,0.4,0.2)", d)
        reps.append(E.verify_hls(Setting(d, beta), f, f))
        reps.append(E.verify_hls(Setting(d, beta), g, g, expect_strict=True))
    reps.append(E.counterexample_report(Setting(3, -0.25))[0])
    reps.append(E.extremiser_search(Setting(3, 0.0), seed=cfg.seed, budget=cfg.budget))
    for d in (2, 3, 4, 5):
        reps.append(E.verify_equality_residual(d, 10_000, cfg.seed))
    return reps


def summary_matrix(reports: Sequence[E.VerificationReport]) -> str:
    """Suite x (beta, d) table of statuses."""
    cells: dict[tuple[str, str], str] = {}
    order: dict[str, tuple] = {}
    for r in reports:
        d, beta = r.inputs.get("d"), r.inputs.get("beta")
        if d is None:
            key, order["-"] = "-", (0, -math.inf)
        elif beta is None:
            key = f"d={d}"
            order[key] = (d, -math.inf)
        else:
            key = f"d={d},b={beta:g}"
            order[key] = (d, beta)
        prev = cells.get((r.name, key))
        mark = {"passed": "ok", "failed": "FAIL", "inconclusive": "??"}[r.status]
        cells[(r.name, key)] = mark if prev in (None, "ok") else prev
    suites = list(dict.fromkeys(n for n, _ in cells))
    cols = sorted(order, key=order.get)
    w0 = max(len(s) for s in suites)
    wc = max(len(c) for c in cols)
    lines = [" " * w0 + "  " + "  ".join(c.rjust(wc) for c in cols)]
    for s in suites:
        lines.append(s.ljust(w0) + "  " + "  ".join(cells.get((s, c), "").rjust(wc) for c in cols))
    return "\n".join(lines) + "\n"


def exit_status(reports: Sequence[E.VerificationReport]) -> int:
    statuses = {r.status for r in reports}
    if E.FAILED in statuses:
        return EXIT_FAIL
    if E.INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _open_sink(cfg: RunConfig) -> tuple[IO[str], bool]:
    target = cfg.out
    if target is None and os.environ.get(OUT_DIR_ENV):
        ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.format]
        target = str(Path(os.environ[OUT_DIR_ENV]) / f"{cfg.command}.{ext}")
    if target is None or target == "-":
        return sys.stdout, False
    Path(target).parent.mkdir(parents=True, exist_ok=True)
    return open(target, "w", encoding="utf-8", newline=""), True


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the exit status."""
    cfg.validate()
    if cfg.command == "constants":
        rows = _constants_table(cfg)
        sink, close = _open_sink(cfg)
        try:
            _emit_constants(rows, cfg.format, sink)
        finally:
            if close:
                sink.close()
        return EXIT_OK
    scans: list[E.ScanResult] = []
    s = cfg.setting if cfg.command != "all" else None
    if cfg.command == "lemma31":
        reports = [E.verify_lemma31(s, n_pairs=cfg.pairs, seed=cfg.seed, nodes=cfg.nodes or 64)]
    elif cfg.command == "lorentz":
        reports = [E.verify_lorentz(s.d, cfg.samples, cfg.seed)]
    elif cfg.command in ("verify", "radial"):
        f = preset(cfg.data, s.d)
        g = preset(cfg.data2, s.d) if cfg.data2 else f
        fn = E.verify_theorem if cfg.command == "verify" else E.verify_radial_corollary
        reports = [fn(s, f, g, cfg.sign_mode, tol=cfg.tol, quad=cfg.quad())]
    elif cfg.command == "sphere":
        reports = _sphere_suites(cfg)
    elif cfg.command == "counterexample":
        rep, pair = E.counterexample_report(s, n=cfg.nodes or 128)
        reports, scans = [rep], list(pair)
    elif cfg.command == "search":
        reports = [E.extremiser_search(s, cfg.sign_mode, cfg.params, cfg.seed, cfg.budget, tol=cfg.tol)]
    else:
        reports = acceptance_grid(cfg)
    sink, close = _open_sink(cfg)
    try:
        emit_report(reports, cfg.format, sink, scans, cfg.timing)
        if cfg.command == "all" and cfg.format == "text":
            sink.write("\n" + summary_matrix(reports))
    finally:
        if close:
            sink.close()
    if cfg.command == "all" and cfg.format != "text":
        sys.stderr.write(summary_matrix(reports))
    return exit_status(reports)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sharpwave", description="Numerical verification of sharp bilinear half-wave estimates.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--dim", type=int, nargs="+", default=[3], help="spatial dimension d (lists allowed for constants)")
    p.add_argument("--beta", type=float, nargs="+", default=[0.0], help="weight exponent beta (lists allowed for constants)")
    p.add_argument("--mode", choices=("pm", "pp"), default="pm", help="(+-) or (++) product")
    p.add_argument("--data", default="foschi", help="preset: foschi, gaussian, extremiser(a,b1,c), prop13(delta)")
    p.add_argument("--data2", default=None, help="second datum g (defaults to --data)")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--nodes", type=int, default=None, help="quadrature node count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help=f"output path, '-' for stdout (default: ${OUT_DIR_ENV}/<command>.<ext> or stdout)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--budget", type=int, default=500, help="evaluation budget for search")
    p.add_argument("--params", type=int, default=4, help="search family size")
    p.add_argument("--pairs", type=int, default=100, help="random pairs for lemma31")
    p.add_argument("--samples", type=int, default=1000, help="random boosts for lorentz")
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-identical output)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        return run(cfg)
    except (UsageError, DomainError, UnsupportedDataError) as exc:
        sys.stderr.write(f"sharpwave: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
