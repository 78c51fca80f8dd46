"""Command-line frontend.

    padic-spectral transform FILE --direction forward|inverse [--out OUT]
    padic-spectral operator FILE --which D|Dstar|Dinv|calD [--out OUT]
    padic-spectral seminorm FILE [--format json|csv] [--out OUT]
    padic-spectral distance X Y --p P [--depth N] [--tol T]
    padic-spectral report --p P --depth N --seed S [--format csv|json] [--out OUT]

Exit codes: 0 success, 1 a check failed, 2 input error, 3 shape/compatibility error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dirac, harmonic, metrics
from .padic_core import PAdicApprox, Prime, padic_distance
from .tree_hilbert import GradedPair, TreeFunction, random_tree_function, weighted_norm

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SHAPE = 0, 1, 2, 3

REPORT_HEADER = ("check", "p", "depth", "item", "value", "reference", "lower", "upper", "pass")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    depth: int = 8
    tol: float = 1e-9
    seed: int = 0
    output_format: str = "csv"

    def __post_init__(self):
        try:
            Prime(self.p)
        except ValueError as exc:
            raise CliError(f"--p: {exc}", EXIT_INPUT) from None
        if self.depth < 0:
            raise CliError("--depth must be >= 0", EXIT_INPUT)
        if not self.tol > 0:
            raise CliError("--tol must be > 0", EXIT_INPUT)
        if self.output_format not in ("json", "csv"):
            raise CliError("--format must be json or csv", EXIT_INPUT)


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _round(obj):
    """Round floats to 12 significant digits for JSON output."""
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def write_output(text: str, out: str | None) -> None:
    """Write to ``out`` atomically (temp file + rename), or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: malformed JSON: {exc}", EXIT_INPUT) from None
    if not isinstance(data, dict):
        raise CliError(f"{path}: expected a JSON object", EXIT_INPUT)
    return data


def _tree_function(data: dict, where: str) -> TreeFunction:
    try:
        return TreeFunction.from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise CliError(f"{where}: {exc}", EXIT_INPUT) from None


def _dump(obj) -> str:
    return json.dumps(_round(obj)) + "\n"


# -- transform / operator ----------------------------------------------------


def cmd_transform(args) -> int:
    f = _tree_function(_load_json(args.input), args.input)
    if args.direction == "forward":
        if f.side != "vertex":
            raise CliError("forward transform needs side 'vertex'", EXIT_SHAPE)
        out = harmonic.tree_fourier(f)
    else:
        if f.side != "fourier":
            raise CliError("inverse transform needs side 'fourier'", EXIT_SHAPE)
        out = harmonic.tree_fourier_inverse(f)
    write_output(_dump(out.to_dict()), args.out)
    return EXIT_OK


def _apply_operator(which: str, data: dict, where: str):
    if which == "calD":
        for key in ("plus", "minus"):
            if key not in data:
                raise CliError(f"{where}: missing field {key!r}", EXIT_INPUT)
        plus = _tree_function(data["plus"], f"{where}: plus")
        minus = _tree_function(data["minus"], f"{where}: minus")
        try:
            x = GradedPair(plus, minus)
            y = dirac.apply_calD(x)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_SHAPE) from None
        return x.norm(), y.norm(), {"plus": y.plus.to_dict(), "minus": y.minus.to_dict()}

    f = _tree_function(data, where)
    vertex = f.side == "vertex"
    if which == "D":
        if f.depth < 1:
            raise CliError("D needs depth >= 1", EXIT_SHAPE)
        g = dirac.apply_D(f) if vertex else dirac.apply_D_fourier(f)
    elif which == "Dstar":
        g = dirac.apply_D_adjoint(f) if vertex else dirac.apply_D_adjoint_fourier(f)
    elif which == "Dinv":
        if vertex:
            g = harmonic.tree_fourier_inverse(dirac.apply_D_inverse(harmonic.tree_fourier(f)))
        else:
            g = dirac.apply_D_inverse(f)
    else:
        raise CliError(f"unknown operator {which!r}", EXIT_INPUT)
    return weighted_norm(f), weighted_norm(g), g.to_dict()


def cmd_operator(args) -> int:
    nin, nout, payload = _apply_operator(args.which, _load_json(args.input), args.input)
    write_output(_dump(payload), args.out)
    print(f"operator={args.which} input_norm={fmt(nin)} output_norm={fmt(nout)}", file=sys.stderr)
    return EXIT_OK


# -- seminorm / distance -------------------------------------------------------


def cmd_seminorm(args) -> int:
    data = _load_json(args.input)
    try:
        phi = metrics.LocallyConstantFunction.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise CliError(f"{args.input}: {exc}", EXIT_INPUT) from None
    report = metrics.check_equivalence(phi)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(metrics.SeminormReport.CSV_HEADER)
        writer.writerow([fmt(v) for v in report.csv_row(args.phi_id)])
        text = buf.getvalue()
    else:
        text = _dump(report.to_dict())
    write_output(text, args.out)
    return EXIT_OK if report.lower_ok and report.upper_ok else EXIT_FAIL


def distance_result(x: PAdicApprox, y: PAdicApprox, depth: int, tol: float) -> dict:
    rho = float(padic_distance(x, y))
    lo, hi = metrics.distance_bounds(x.p, rho)
    lip = metrics.lipschitz_ball_distance(x, y, depth)
    est = metrics.connes_distance(x, y, depth, tol)
    ok = lip == rho and _contained(est.lower, est.upper, lo, hi)
    return {
        "rho_p": rho,
        "dist_lipschitz": lip,
        "dist_spectral_lower": est.lower,
        "dist_spectral_upper": est.upper,
        "bounds": [lo, hi],
        "pass": bool(ok),
    }


# containment slack: the lower bound is attained exactly, e.g. p=2, x=0, y=1
_REL_SLACK = 1e-12


def _contained(lower: float, upper: float, lo: float, hi: float) -> bool:
    return lower >= lo * (1 - _REL_SLACK) and upper <= hi * (1 + _REL_SLACK) and lower <= upper


def cmd_distance(args) -> int:
    cfg = RunConfig(p=args.p, depth=args.depth or 0, tol=args.tol, output_format="json")
    try:
        x = PAdicApprox.from_digit_string(args.x, cfg.p)
        y = PAdicApprox.from_digit_string(args.y, cfg.p)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    if x.depth != y.depth:
        raise CliError("digit strings must have equal length", EXIT_INPUT)
    depth = max(args.depth or 0, x.depth)
    try:
        result = distance_result(x, y, depth, cfg.tol)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_SHAPE) from None
    write_output(_dump(result), args.out)
    return EXIT_OK if result["pass"] else EXIT_FAIL


# -- report ------------------------------------------------------------------


def _row(check, p, depth, item, value, reference="", lower="", upper="", ok=True) -> dict:
    return dict(zip(REPORT_HEADER, (check, p, depth, item, value, reference, lower, upper, bool(ok))))


def report_rows(cfg: RunConfig) -> list[dict]:
    """All checks of the reproducibility report; every row carries ``pass``."""
    p, N = Prime(cfg.p), cfg.depth
    rng = np.random.default_rng(cfg.seed)
    rows = []

    limit = dirac.hs_norm_squared_limit(p)
    prev = -math.inf
    for n in range(N + 1):
        v = dirac.hs_norm_squared(p, n)
        ok = abs(limit - v) <= float(p) ** -n * limit and v >= prev
        rows.append(_row("hs_norm", p, n, "hs_norm_squared", v, limit, limit - float(p) ** -n * limit, limit, ok))
        prev = v

    n_inv = min(N, 14)
    bound = math.sqrt(limit)
    g0 = random_tree_function(cfg.seed, p, n_inv, "fourier")
    est = _inverse_norm_estimate(g0, iters=200)
    rows.append(_row("inverse_bound", p, n_inv, "power_iteration_200", est, bound, "", bound + 1e-6,
                     est <= bound + 1e-6))

    n_small = min(N, 8)
    for t in range(3):
        s = int(rng.integers(2**31))
        f = random_tree_function(s, p, n_small, "vertex")
        fh = harmonic.tree_fourier(f)
        err = abs(weighted_norm(f) - weighted_norm(fh))
        rows.append(_row("parseval", p, n_small, f"seed={s}", err, 0.0, "", 1e-10 * weighted_norm(f),
                         err <= 1e-10 * weighted_norm(f)))
        if n_small >= 1:
            fz = harmonic.tree_fourier(f).zero_level(n_small)
            back = dirac.apply_D_inverse(dirac.apply_D_fourier(fz)).pad(n_small)
            err = float(np.linalg.norm(back.to_vector() - fz.to_vector()))
            tol = 1e-10 * weighted_norm(fz)
            rows.append(_row("telescoping", p, n_small, f"seed={s}", err, 0.0, "", tol, err <= tol))

    level = min(N, 6)
    c_low, c_up = metrics.equivalence_constants(p)
    corpus = [("padic_abs", metrics.LocallyConstantFunction.padic_abs(p, level))]
    for t in range(20):
        s = int(rng.integers(2**31))
        corpus.append((f"lip_seed={s}", metrics.gen_random_lipschitz(s, p, level, 1.0)))
    for name, phi in corpus:
        rep = metrics.check_equivalence(phi, cfg.tol)
        rows.append(_row("sandwich", p, level, name, rep.spectral, rep.lipschitz,
                         c_low * rep.lipschitz, c_up * rep.lipschitz, rep.lower_ok and rep.upper_ok))

    n_comm = min(N, 8)
    for name, phi in corpus[:4]:
        formula = metrics.spectral_seminorm(phi).value
        est = metrics.commutator_norm_estimate(phi, n_comm)
        rows.append(_row("commutator_norm", p, n_comm, name, est, formula, formula - 1e-5, formula + 1e-5,
                         abs(est - formula) <= 1e-5))

    n_dist = min(N, 8)
    if n_dist >= 1:
        for t in range(10):
            X, Y = (int(v) for v in rng.integers(p**n_dist, size=2))
            if X == Y:
                Y = (X + 1) % p**n_dist
            x = PAdicApprox.from_int(X, p, n_dist)
            y = PAdicApprox.from_int(Y, p, n_dist)
            res = distance_result(x, y, n_dist, cfg.tol)
            width_ok = res["dist_spectral_upper"] - res["dist_spectral_lower"] <= 0.05 * res["rho_p"]
            rows.append(_row("distance", p, n_dist, f"x={X},y={Y}", res["dist_spectral_lower"], res["rho_p"],
                             res["bounds"][0], res["bounds"][1], res["pass"] and width_ok))
    return rows


def _inverse_norm_estimate(g0: TreeFunction, iters: int) -> float:
    from .linalg import power_iteration

    p, depth = g0.p, g0.depth

    def matvec(v):
        return dirac.apply_D_inverse(TreeFunction.from_vector(v, p, depth, "fourier")).to_vector()

    def rmatvec(v):
        return dirac.apply_D_inverse_adjoint(TreeFunction.from_vector(v, p, depth, "fourier")).to_vector()

    return power_iteration(matvec, rmatvec, g0.to_vector(), iters=iters).norm


def cmd_report(args) -> int:
    cfg = RunConfig(p=args.p, depth=args.depth, tol=args.tol, seed=args.seed, output_format=args.format)
    start = time.perf_counter()
    rows = report_rows(cfg)
    elapsed = time.perf_counter() - start
    failed = [r for r in rows if not r["pass"]]
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in rows:
            writer.writerow([fmt(r[k]) for k in REPORT_HEADER])
        text = buf.getvalue()
    else:
        text = _dump({"config": cfg.__dict__, "rows": rows, "failed": len(failed)})
    write_output(text, args.out)
    print(f"report: {len(rows)} rows, {len(failed)} failed, {elapsed:.2f}s", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-spectral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="tree Fourier transform of a TreeFunction JSON file")
    t.add_argument("input")
    t.add_argument("--direction", choices=("forward", "inverse"), default="forward")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    o = sub.add_parser("operator", help="apply D, D*, D^-1 or the doubled operator")
    o.add_argument("input")
    o.add_argument("--which", choices=("D", "Dstar", "Dinv", "calD"), required=True)
    o.add_argument("--out")
    o.set_defaults(func=cmd_operator)

    s = sub.add_parser("seminorm", help="Lipschitz and spectral seminorms of a LocallyConstantFunction JSON file")
    s.add_argument("input")
    s.add_argument("--phi-id", default="phi")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_seminorm)

    d = sub.add_parser("distance", help="p-adic, Lipschitz and spectral distances between two points")
    d.add_argument("x", help="little-endian base-p digits")
    d.add_argument("y", help="little-endian base-p digits")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--depth", type=int, default=None)
    d.add_argument("--tol", type=float, default=1e-9)
    d.add_argument("--out")
    d.set_defaults(func=cmd_distance)

    r = sub.add_parser("report", help="machine-checkable table of the closed-form results")
    r.add_argument("--p", type=int, default=2)
    r.add_argument("--depth", type=int, default=12)
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--seed", type=int, default=7)
    r.add_argument("--format", choices=("json", "csv"), default="csv")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
