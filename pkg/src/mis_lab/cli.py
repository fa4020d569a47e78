"""Command line entry point: ``mis-lab <command> ...``.

Exit status is 0 on success, 2 for domain errors and 3 when a budget guard
trips.  Output is CSV or JSON, byte-identical for identical inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import counting, lattice, sft2d, surface
from .boundary import SpeedSpec, distribute_tau, empirical_h_boundary, h_boundary, classify_level, realize
from .config import RunConfig, omega_from_json, parse_config, shipped_config
from .counting import (BoundaryRegion, MisSpec, log_pattern_count, log_pattern_count_region, mis_entropy,
                       pattern_count_exact, segment_histogram)
from .errors import BudgetError, InvalidSpec, MisLabError
from .highprec import HighPrecReal
from .lattice import Box, MultiplierVector, hist_J, hist_K
from .sft2d import Sft2dSpec
from .subshift import SubshiftSpec, entropy_rate_1d, word_counts
from .surface import PowerOffset, PowerPair, convergence_table

DIGITS = 20
UNSAFE_FACTOR = 1 << 10


def _workers() -> int:
    cap = os.environ.get("MIS_LAB_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _pmap(fn, items):
    """Ordered map; runs in worker processes when allowed and worthwhile."""
    items = list(items)
    workers = min(_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(x, digits: int = DIGITS) -> str:
    if x is None:
        return ""
    if isinstance(x, HighPrecReal):
        return x.to_decimal(digits)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _frac_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidSpec(f"not a number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise InvalidSpec(f"expected comma-separated integers, got {text!r}") from None


# system selection

def _mis_from_args(args, cfg: RunConfig | None) -> MisSpec:
    if cfg is not None:
        if not isinstance(cfg.system, MisSpec):
            raise InvalidSpec("this command needs a multiplicative system (type 'mis')")
        return cfg.system
    p = _int_list(args.p)
    omega_text = args.omega
    if omega_text == "golden":
        omega = SubshiftSpec.golden_mean()
    elif omega_text.startswith("full:"):
        omega = SubshiftSpec.full(int(omega_text[5:]))
    else:
        try:
            omega = omega_from_json(json.loads(omega_text), "--omega")
        except json.JSONDecodeError:
            raise InvalidSpec("--omega must be 'golden', 'full:R' or a JSON subshift object") from None
    return MisSpec(MultiplierVector(tuple(p)), omega)


def _sft_from_args(args, cfg: RunConfig | None) -> Sft2dSpec:
    if cfg is not None:
        if not isinstance(cfg.system, Sft2dSpec):
            raise InvalidSpec("sft2d needs a 2-D system (type 'sft2d')")
        return cfg.system
    if args.preset:
        return sft2d.preset_spec(args.preset)
    raise InvalidSpec("sft2d needs --config or --preset")


def _prec(args, cfg) -> int | str:
    if args.prec is not None:
        return args.prec
    if cfg is not None:
        return cfg.precision
    return "auto"


def _fixed_prec(value, default: int = 96) -> int:
    return default if value == "auto" else int(value)


# commands; each returns (columns, rows)

def cmd_count(args, cfg):
    mis = _mis_from_args(args, cfg)
    box = Box(tuple(args.box))
    prec = _fixed_prec(_prec(args, cfg))
    if args.inner:
        region = BoundaryRegion(box, tuple(args.inner))
        seg = segment_histogram(region, mis.multipliers)
        words = counting.counts_upto(mis.omega, max(seg, default=0))
        bits = sum(c * words[s].bit_length() for s, c in seg.items())
        count = None
        if bits <= counting.RESULT_MAX_BITS:
            count = 1
            for s, c in sorted(seg.items()):
                count *= words[s] ** c
        logc = log_pattern_count_region(mis, region, prec)
        return (["sides", "inner", "cells", "count", "log_count"],
                [["x".join(map(str, box.sides)), "x".join(map(str, region.inner)), region.size,
                  "" if count is None else count, _fmt(logc)]])
    try:
        count = pattern_count_exact(mis, box)
    except BudgetError:
        if args.exact:
            raise
        count = None
    logc = log_pattern_count(mis, box, prec)
    rows = [["x".join(map(str, box.sides)), box.volume, "" if count is None else count, _fmt(logc)]]
    cols = ["sides", "cells", "count", "log_count"]
    if args.hist:
        J, K = hist_J(box, mis.multipliers), hist_K(box, mis.multipliers)
        cols += ["hist_J", "hist_K"]
        rows[0] += [json.dumps(J.to_json(), sort_keys=True), json.dumps(K.to_json(), sort_keys=True)]
    return cols, rows


def cmd_entropy(args, cfg):
    mis = _mis_from_args(args, cfg)
    tol = _frac_arg(args.tol)
    h = mis_entropy(mis, tol=tol)
    rate = entropy_rate_1d(mis.omega, _fixed_prec(_prec(args, cfg)))
    return (["p", "entropy", "error_bound", "rate_1d"],
            [[" ".join(map(str, mis.multipliers.p)), _fmt(h), format(h.rad, ".3g"), _fmt(rate)]])


def cmd_boundary(args, cfg):
    mis = _mis_from_args(args, cfg)
    prec = _fixed_prec(_prec(args, cfg))
    rows = []
    for text in args.tau:
        tau = _frac_arg(text)
        level = classify_level(tau, mis.P) if tau > 0 else ""
        h = h_boundary(mis, tau, prec)
        row = [_fmt(tau), level, _fmt(h)]
        if args.m:
            sides = tuple(args.m) if len(args.m) == mis.d else (args.m[0],) * mis.d
            slopes = distribute_tau(tau, mis.multipliers.p)
            emp = empirical_h_boundary(mis, sides, SpeedSpec(slopes), prec)
            row += ["x".join(map(str, sides)), " ".join(_fmt(s) for s in slopes), _fmt(emp), _fmt(abs(emp - h), 6)]
        rows.append(row)
    cols = ["tau", "level", "h_formula"]
    if args.m:
        cols += ["m", "slopes", "h_empirical", "abs_diff"]
    return cols, rows


def _realize_row(job):
    mis, target, prec = job
    res = realize(mis, target, prec)
    return [_fmt(res.target), "" if res.level is None else res.level, _fmt(res.tau, DIGITS), _fmt(res.achieved_h),
            format(res.abs_err, ".3e")]


def cmd_realize(args, cfg):
    mis = _mis_from_args(args, cfg)
    prec = _fixed_prec(_prec(args, cfg), 80)
    targets: list = []
    if args.target is not None:
        targets.append(_frac_arg(args.target))
    if args.targets:
        targets += [_frac_arg(t) for t in args.targets.split(",") if t]
    if args.grid:
        lo = mis_entropy(mis, prec=prec + 32)
        hi = counting.log_counts(mis.omega, 1, prec + 32)[1]
        k = args.grid
        for j in range(k):
            w = Fraction(j, max(1, k - 1))
            targets.append(lo * (1 - w) + hi * w)
    if not targets:
        raise InvalidSpec("realize needs --target, --targets or --grid")
    rows = _pmap(_realize_row, [(mis, t, prec) for t in targets])
    return ["target_h", "level_k", "tau", "achieved_h", "abs_err"], rows


def cmd_sft2d(args, cfg):
    spec = _sft_from_args(args, cfg)
    prec = _fixed_prec(_prec(args, cfg), 64)
    cols, rows = ["quantity", "direction", "thickness", "parameter", "value"], []
    if args.strip:
        k, i = args.strip
        rows.append(["strip_entropy", k, i, "", _fmt(sft2d.strip_entropy(spec, k, i, prec))])
    if args.mix is not None or args.realize_t is not None:
        i = args.thickness
        v = sft2d.strip_entropy(spec, 1, i, prec)
        h = sft2d.strip_entropy(spec, 2, i, prec)
        if args.mix is not None:
            t = _frac_arg(args.mix)
            rows.append(["boundary_complexity", "", i, f"t={_fmt(t)}", _fmt(sft2d.mix_2d(v, h, i, t))])
        if args.realize_t is not None:
            t = sft2d.sft_realize_t(v, h, i, _frac_arg(args.realize_t), prec)
            rows.append(["realized_t", "", i, f"h={args.realize_t}", _fmt(HighPrecReal.exact(t, prec))])
    if args.frame:
        m, n, i = args.frame
        c = sft2d.frame_count_empirical(spec, m, n, i, budget=_budget(args, cfg, "frame_max_subsets",
                                                                      sft2d.MAX_LAYER_SUBSETS))
        rows.append(["frame_count", "", i, f"{m}x{n}", c])
    if args.glue_probe:
        N, w = args.glue_probe
        probe = sft2d.block_gluing_probe(spec, N, w)
        rows.append(["gluing_probe", "", w, f"N={N}", probe.to_json()])
    if not rows:
        raise InvalidSpec("sft2d needs one of --strip, --mix, --realize-t, --frame, --glue-probe")
    return cols, rows


def _surface_row(job):
    mis, seq, n, prec, budget = job
    row = convergence_table(mis, seq, [n], prec, budget)[0]
    sides = row.sides
    y = sides[1] if len(sides) > 1 else ""
    dev4 = "" if row.deviation is None else format(float(row.deviation.mid), ".4f")
    return [n, sides[0], y, _fmt(row.correction), _fmt(row.scaled), _fmt(row.predicted), _fmt(row.deviation), dev4]


def cmd_surface(args, cfg):
    mis = _mis_from_args(args, cfg)
    spec = args.seq
    if spec is None and cfg is not None and "seq" in cfg.params:
        spec = [str(v) for v in cfg.params["seq"]]
    if not spec:
        raise InvalidSpec("surface needs --seq power K1 [K2 ...] or --seq offset P K SIGN")
    if spec[0] == "power":
        ks = tuple(int(v) for v in spec[1:]) or (1,) * mis.d
        seq = PowerPair(ks)
    elif spec[0] == "offset" and len(spec) == 4:
        seq = PowerOffset(int(spec[1]), int(spec[2]), int(spec[3]))
    else:
        raise InvalidSpec("--seq must be 'power K1 K2' or 'offset P K SIGN'")
    if args.n:
        ns = _int_list(args.n)
    elif cfg is not None and "n" in cfg.params:
        ns = [int(v) for v in cfg.params["n"]]
    else:
        raise InvalidSpec("surface needs --n")
    prec = _prec(args, cfg)
    budget = _budget(args, cfg, "prec_budget", surface.DEFAULT_PREC_BUDGET)
    rows = _pmap(_surface_row, [(mis, seq, n, prec, budget) for n in ns])
    return ["n", "x_n", "y_n", "correction", "scaled", "predicted", "deviation", "deviation_4dp"], rows


def cmd_selftest(args, cfg):
    from .selftest import run_checks

    rows = [[name, "pass" if ok else "FAIL", detail] for name, ok, detail in run_checks()]
    return ["check", "status", "detail"], rows


COMMANDS = {
    "count": cmd_count, "entropy": cmd_entropy, "boundary": cmd_boundary, "realize": cmd_realize,
    "sft2d": cmd_sft2d, "surface": cmd_surface, "selftest": cmd_selftest,
}


# budgets

def _budget(args, cfg, key: str, default: int) -> int:
    if not args.unsafe_budgets:
        return default
    if cfg is not None and key in cfg.budgets:
        return cfg.budgets[key]
    return default * UNSAFE_FACTOR


def _apply_budgets(args, cfg):
    if not args.unsafe_budgets:
        return
    counting.BRUTE_MAX_CONFIGS = _budget(args, cfg, "brute_max_configs", counting.BRUTE_MAX_CONFIGS)
    counting.RESULT_MAX_BITS = _budget(args, cfg, "result_max_bits", counting.RESULT_MAX_BITS)
    lattice.ORACLE_MAX_VOLUME = _budget(args, cfg, "oracle_max_volume", lattice.ORACLE_MAX_VOLUME)


# output

def render(columns, rows, fmt: str, command: str) -> str:
    if fmt == "json":
        body = {"command": command, "rows": [dict(zip(columns, (_cell(v, True) for v in row))) for row in rows]}
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v, structured: bool = False):
    if isinstance(v, (dict, list)):
        return v if structured else json.dumps(v, sort_keys=True)
    if isinstance(v, (int, Fraction, HighPrecReal)) and not isinstance(v, bool):
        return _fmt(v)
    return v


def write_atomic(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mis-lab", description="Pattern counts, entropy, boundary complexity and "
                                 "surface corrections for 2-multiplicative integer systems.")
    ap.add_argument("--config", help="JSON run configuration (see the shipped samples)")
    ap.add_argument("--sample", help="use a shipped sample config by name, e.g. golden_23")
    ap.add_argument("--format", "--out", dest="format", choices=["csv", "json"], help="output format")
    ap.add_argument("--output", "-o", help="write to this file (atomically) instead of stdout")
    ap.add_argument("--p", default="2,3", help="multipliers when no config is given (default 2,3)")
    ap.add_argument("--omega", default="golden", help="'golden', 'full:R' or a JSON subshift (default golden)")
    ap.add_argument("--prec", type=lambda s: s if s == "auto" else int(s), default=None,
                    help="working precision in bits, or 'auto'")
    ap.add_argument("--unsafe-budgets", action="store_true", help="lift enumeration and precision guards")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="pattern count on a box or a frame")
    p.add_argument("--box", type=int, nargs="+", required=True)
    p.add_argument("--inner", type=int, nargs="+", help="inner box removed from the outer one")
    p.add_argument("--exact", action="store_true", help="fail instead of skipping a too-large exact count")
    p.add_argument("--hist", action="store_true", help="also emit the chain-length histograms")

    p = sub.add_parser("entropy", help="topological entropy of the system")
    p.add_argument("--tol", default="1e-30")

    p = sub.add_parser("boundary", help="boundary complexity for product slope tau")
    p.add_argument("--tau", nargs="+", required=True)
    p.add_argument("--m", type=int, nargs="+", help="also evaluate the finite frame with these sides")

    p = sub.add_parser("realize", help="find tau realizing a target value")
    p.add_argument("--target")
    p.add_argument("--targets", help="comma-separated targets")
    p.add_argument("--grid", type=int, help="evenly spaced targets across [h(X), log r]")

    p = sub.add_parser("sft2d", help="strip entropies, frame counts and gluing probes")
    p.add_argument("--preset", choices=sorted(sft2d.PRESET_SPECS))
    p.add_argument("--strip", type=int, nargs=2, metavar=("K", "I"))
    p.add_argument("--mix", metavar="T")
    p.add_argument("--realize-t", metavar="H")
    p.add_argument("--thickness", type=int, default=1)
    p.add_argument("--frame", type=int, nargs=3, metavar=("M", "N", "I"))
    p.add_argument("--glue-probe", type=int, nargs=2, metavar=("N", "W"))

    p = sub.add_parser("surface", help="surface correction table along a box sequence")
    p.add_argument("--seq", nargs="+")
    p.add_argument("--n")

    sub.add_parser("selftest", help="quick oracle checks")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    fmt = args.format
    try:
        cfg = None
        if args.config:
            cfg = parse_config(args.config)
        elif args.sample:
            cfg = parse_config(shipped_config(args.sample))
        fmt = fmt or (cfg.output if cfg else "csv")
        _apply_budgets(args, cfg)
        columns, rows = COMMANDS[args.command](args, cfg)
        text = render(columns, rows, fmt, args.command)
    except MisLabError as exc:
        code = 3 if isinstance(exc, BudgetError) else 2
        if fmt == "json":
            sys.stdout.write(json.dumps({"error": {"code": exc.code, "message": str(exc)}}) + "\n")
        else:
            sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return code
    if args.output:
        write_atomic(Path(args.output), text)
    else:
        sys.stdout.write(text)
    if args.command == "selftest" and any(row[1] != "pass" for row in rows):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
