"""Command-line front end; every subcommand writes CSV under ``--out-dir``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from slopelim import _kernels
from slopelim.analysis import convergence_study, tv_audit
from slopelim.limiters import LimiterKind, Region, check_region, hr_region_bounds, phi, special_points, tvd_region_bounds
from slopelim.mesh import StretchRatios, make_stretched, make_uniform
from slopelim.solver import InitialCondition, SimConfig, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("simulate", "limiter-table", "region-check", "convergence", "tv-audit", "special-points")


@dataclass
class CliInvocation:
    subcommand: str
    flags: dict = field(default_factory=dict)
    out_dir: Path = Path("out")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _sim_parent(ic: str = "square") -> argparse.ArgumentParser:
    # a fresh parent per subcommand: parents share Action objects
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=200, help="number of cells")
    p.add_argument("--cfl", type=float, default=0.8)
    p.add_argument("--speed", type=float, default=1.0)
    p.add_argument("--t-end", type=float, default=None, help="default: one period")
    p.add_argument("--ic", choices=[c.value for c in InitialCondition], default=ic)
    p.add_argument("--bc", choices=["periodic"], default="periodic")
    p.add_argument("--mesh", choices=["uniform", "stretched"], default="uniform")
    p.add_argument("--ratio-lo", type=float, default=0.5)
    p.add_argument("--ratio-hi", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x-lo", type=float, default=0.0)
    p.add_argument("--x-hi", type=float, default=1.0)
    p.add_argument("--backend", choices=list(_kernels.BACKENDS), default=None)
    return p


def _build_parser() -> argparse.ArgumentParser:
    kinds = [k.value for k in LimiterKind]

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", type=Path, default=Path("out"))

    lim = argparse.ArgumentParser(add_help=False)
    lim.add_argument("--limiter", choices=kinds, default="mc")

    ratios = argparse.ArgumentParser(add_help=False)
    ratios.add_argument("--a", type=float, default=1.0, help="stretch ratio dx[i-1]/dx[i]")
    ratios.add_argument("--b", type=float, default=1.0, help="stretch ratio dx[i+1]/dx[i]")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=_positive_int, default=1001)
    sampling.add_argument("--tol", type=float, default=1e-12)

    parser = argparse.ArgumentParser(prog="slopelim", description=__doc__)
    parser.add_argument(
        "--args-from", metavar="FILE", help="read further flags from FILE, one per line"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("simulate", parents=[common, lim, _sim_parent()], help="advect and write snapshots")
    p.add_argument("--snapshot-every", type=int, default=0)
    p.add_argument("--prefix", default="snapshot")
    p.add_argument("--mesh-out", type=Path, default=None)

    sub.add_parser(
        "limiter-table", parents=[common, lim, ratios, sampling], help="tabulate phi and region bounds"
    )
    p = sub.add_parser(
        "region-check", parents=[common, lim, ratios, sampling], help="check region membership"
    )
    p.add_argument("--region", choices=[r.value for r in Region], default="high_resolution")

    p = sub.add_parser("convergence", parents=[common, lim, _sim_parent("sine")], help="L1 convergence study")
    p.add_argument("--n-list", type=_n_list, default=[100, 200, 400])

    p = sub.add_parser("tv-audit", parents=[common, lim, _sim_parent(), sampling], help="per-step TV audit")

    sub.add_parser("special-points", parents=[common, ratios], help="print f1, f2, f3")
    return parser


def _expand_args_from(argv: list[str], parser: argparse.ArgumentParser) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--args-from" or tok.startswith("--args-from="):
            path = tok.split("=", 1)[1] if "=" in tok else next(it, None)
            if path is None:
                parser.error("argument --args-from: expected one argument")
            try:
                lines = Path(path).read_text().splitlines()
            except OSError as exc:
                parser.error(f"argument --args-from: cannot read {path!r}: {exc.strerror}")
            for line in lines:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.extend(shlex.split(line))
        else:
            out.append(tok)
    return out


def _validate(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> None:
    if getattr(ns, "a", 1.0) <= 0 or getattr(ns, "b", 1.0) <= 0:
        parser.error("arguments --a/--b: stretch ratios must be positive")
    if hasattr(ns, "samples") and ns.samples < 2:
        parser.error("argument --samples: must be >= 2")
    if hasattr(ns, "tol") and ns.tol < 0:
        parser.error("argument --tol: must be nonnegative")
    if hasattr(ns, "cfl"):
        if not 0 < ns.cfl <= 1:
            parser.error(f"argument --cfl: must lie in (0, 1], got {ns.cfl}")
        if ns.speed == 0:
            parser.error("argument --speed: must be nonzero")
        if ns.n < 3:
            parser.error(f"argument --n: must be >= 3, got {ns.n}")
        if ns.t_end is not None and ns.t_end < 0:
            parser.error("argument --t-end: must be >= 0")
        if not ns.x_hi > ns.x_lo:
            parser.error("arguments --x-lo/--x-hi: need x_hi > x_lo")
        if ns.mesh == "stretched" and not 0 < ns.ratio_lo <= ns.ratio_hi:
            parser.error("arguments --ratio-lo/--ratio-hi: need 0 < ratio_lo <= ratio_hi")
    if getattr(ns, "snapshot_every", 0) < 0:
        parser.error("argument --snapshot-every: must be >= 0")
    if hasattr(ns, "n_list"):
        n = ns.n_list
        if len(n) < 2 or n[0] < 3 or any(hi != 2 * lo for lo, hi in zip(n, n[1:])):
            parser.error("argument --n-list: need >= 2 sizes, starting >= 3, each doubling the last")


def parse_args(argv: list[str] | None = None) -> CliInvocation:
    parser = _build_parser()
    argv = _expand_args_from(list(sys.argv[1:] if argv is None else argv), parser)
    ns = parser.parse_args(argv)
    _validate(parser, ns)
    flags = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "out_dir", "args_from")}
    return CliInvocation(ns.subcommand, flags, ns.out_dir)


def _config(flags: dict) -> SimConfig:
    if flags["mesh"] == "stretched":
        mesh = make_stretched(
            flags["n"], flags["x_lo"], flags["x_hi"], flags["ratio_lo"], flags["ratio_hi"], flags["seed"]
        )
    else:
        mesh = make_uniform(flags["n"], flags["x_lo"], flags["x_hi"])
    return SimConfig(
        mesh=mesh,
        speed=flags["speed"],
        cfl=flags["cfl"],
        limiter=flags["limiter"],
        ic=flags["ic"],
        t_end=flags["t_end"],
        bc=flags["bc"],
    )


def _csv_text(header, rows, trailer=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    if trailer is not None:
        writer.writerow([fmt(x) if not isinstance(x, str) else x for x in trailer])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _limiter_table(inv: CliInvocation) -> int:
    fl = inv.flags
    r = StretchRatios(fl["a"], fl["b"])
    f = np.linspace(0.0, 1.0, fl["samples"])
    p = phi(fl["limiter"], f, r)
    tvd_lo, tvd_hi = tvd_region_bounds(f, r)
    hr_lo, hr_hi = hr_region_bounds(f, r)
    text = _csv_text(
        ["f", "phi", "tvd_lo", "tvd_hi", "hr_lo", "hr_hi"], zip(f, p, tvd_lo, tvd_hi, hr_lo, hr_hi)
    )
    _write(inv.out_dir / "limiter_table.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def _region_check(inv: CliInvocation) -> int:
    fl = inv.flags
    report = check_region(
        fl["limiter"], StretchRatios(fl["a"], fl["b"]), fl["samples"], fl["tol"], fl["region"]
    )
    text = _csv_text(["f", "phi", "lower", "upper", "excess"], report.rows())
    _write(inv.out_dir / "region_check.csv", text)
    sys.stdout.write(text)
    print(
        f"{report.kind.value} a={fmt(report.a)} b={fmt(report.b)} region={report.region.value}: "
        f"{len(report.violations)} violations in {report.n_samples} samples, "
        f"max_excess={fmt(report.max_excess)}",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def _special_points(inv: CliInvocation) -> int:
    sp = special_points(StretchRatios(inv.flags["a"], inv.flags["b"]))
    text = _csv_text(["f1", "f2", "f3"], [(sp.f1, sp.f2, sp.f3)])
    _write(inv.out_dir / "special_points.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def _simulate(inv: CliInvocation) -> int:
    fl = inv.flags
    config = _config(fl)
    result = run(config, fl["snapshot_every"], fl["backend"])
    inv.out_dir.mkdir(parents=True, exist_ok=True)
    x = config.mesh.centers
    for k, state in result.snapshots:
        _write(inv.out_dir / f"{fl['prefix']}_{k}.csv", _csv_text(["x_center", "u"], zip(x, state.u)))
    summary = ((int(row[0]), *row[1:4]) for row in result.history)
    _write(
        inv.out_dir / f"{fl['prefix']}_summary.csv",
        _csv_text(["step", "t", "tv", "total_mass"], summary),
    )
    if fl["mesh_out"] is not None:
        path = fl["mesh_out"] if fl["mesh_out"].is_absolute() else inv.out_dir / fl["mesh_out"]
        path.parent.mkdir(parents=True, exist_ok=True)
        config.mesh.to_csv(path)
    print(f"{result.n_steps} steps to t={fmt(result.final.t)}; wrote {len(result.snapshots)} snapshots to {inv.out_dir}")
    return EXIT_OK


def _convergence(inv: CliInvocation) -> int:
    fl = inv.flags
    base = _config({**fl, "n": fl["n_list"][0]})
    rows = convergence_study(base, fl["n_list"], fl["backend"])
    text = _csv_text(
        ["n_cells", "l1_error", "observed_order"],
        ((r.n_cells, r.l1_error, r.observed_order) for r in rows),
    )
    _write(inv.out_dir / "convergence.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def _tv_audit(inv: CliInvocation) -> int:
    fl = inv.flags
    audit = tv_audit(run(_config(fl), 0, fl["backend"]))
    text = _csv_text(["step", "t", "tv"], audit.tv_series, trailer=["max_increase", audit.max_increase])
    _write(inv.out_dir / "tv_audit.csv", text)
    print(f"max_increase,{fmt(audit.max_increase)}")
    return EXIT_OK if audit.passed(fl["tol"]) else EXIT_FAIL


_HANDLERS = {
    "simulate": _simulate,
    "limiter-table": _limiter_table,
    "region-check": _region_check,
    "convergence": _convergence,
    "tv-audit": _tv_audit,
    "special-points": _special_points,
}


def dispatch(inv: CliInvocation) -> int:
    try:
        return _HANDLERS[inv.subcommand](inv)
    except OSError as exc:
        print(f"slopelim: cannot write output under {inv.out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv: list[str] | None = None) -> int:
    try:
        inv = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return dispatch(inv)


if __name__ == "__main__":
    sys.exit(main())
