"""Command-line front end.

Exit codes: 0 success, 1 tolerance not met (or a failed suite), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import catalog
from .approximation import (
    ApproximationError,
    HarmonicAngle,
    StarCompact,
    approx_finite_type,
    approx_infinite_type,
    approx_real_segment,
    approx_segment,
    approx_star_compact,
    approx_trig_on_circle,
)
from .classification import InfiniteType, classify_limit
from .config import DEFAULT_DEGREE_CAP
from .functions import InfiniteTypeFunction
from .geometry import CPointArray, chi_of_phi_array, gmap_array, metric_d, phi
from .grids import CircleGrid, DiscGrid, PolarGrid, SegmentGrid
from .io import SCHEMA, csv_text, dumps, encode_approximant, flat_csv, load_sequence, parse_point
from .suites import SUITES, run_suite

EXIT_OK, EXIT_TOLERANCE, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    target: str = ""
    params: dict = field(default_factory=dict)
    domain: str = ""
    compact: str = ""
    eps: float = 1e-2
    grid_boundary: int = 512
    grid_radial: int = 128
    degree_cap: int = DEFAULT_DEGREE_CAP
    tol: float = 0.02
    seed: int = 0
    out: str | None = None
    fmt: str = "json"

    def validate(self) -> "ExperimentConfig":
        if not (self.eps > 0 and np.isfinite(self.eps)):
            raise InputError(f"--eps must be a positive number, got {self.eps}")
        if not self.tol > 0:
            raise InputError(f"--tol must be positive, got {self.tol}")
        for name in ("grid_boundary", "grid_radial", "degree_cap"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be a positive integer")
        if self.fmt not in ("json", "csv"):
            raise InputError(f"--format must be json or csv, got {self.fmt!r}")
        if self.compact not in ("", "disc", "square"):
            raise InputError(f"--compact must be disc or square, got {self.compact!r}")
        return self


def _threads_ok():
    raw = os.environ.get("CBAR_THREADS")
    if raw is not None:
        try:
            if int(raw) < 1:
                raise ValueError
        except ValueError:
            raise InputError(f"CBAR_THREADS must be a positive integer, got {raw!r}") from None


def _emit(record: dict, cfg: ExperimentConfig):
    sys.stdout.write(dumps(record) if cfg.fmt == "json" else flat_csv(record))


def _write_outputs(cfg: ExperimentConfig, files: dict[str, str]):
    if not cfg.out:
        return
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)


# ---------------------------------------------------------------------------
# metric


def cmd_metric(p_text: str, q_text: str, cfg: ExperimentConfig) -> int:
    p, q = parse_point(p_text), parse_point(q_text)
    d = metric_d(p, q)
    pa, qa = CPointArray.from_points([p]), CPointArray.from_points([q])
    chi = float(chi_of_phi_array(pa, qa)[0])
    record = {
        "schema": SCHEMA,
        "command": "metric",
        "p": p_text,
        "q": q_text,
        "d": d,
        "chi_phi": chi,
        "phi_p": repr(phi(p)),
        "phi_q": repr(phi(q)),
        "chi_le_2d": chi <= 2 * d + 1e-14,
    }
    _emit(record, cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# approximate


def _disc_grids(cfg: ExperimentConfig) -> tuple[DiscGrid, DiscGrid]:
    construction = DiscGrid(n_boundary=cfg.grid_boundary, n_angular=64, n_radial=cfg.grid_radial)
    verification = DiscGrid(n_boundary=4 * cfg.grid_boundary, n_angular=256,
                            n_radial=max(64, cfg.grid_radial // 2))
    return construction, verification


def _star_target(target, compact: str):
    if isinstance(target, InfiniteTypeFunction) and compact != "disc":
        p = target.theta.analytic_polynomial()
        return HarmonicAngle(lambda z: np.real(p(z)), target.name)
    return target


def run_approximation(cfg: ExperimentConfig):
    """Resolve the target and run the matching driver; returns ``(Q, report, error_rows)``."""
    try:
        target = catalog.resolve(cfg.target, cfg.params)
    except TypeError as exc:
        raise InputError(f"bad parameters for {cfg.target!r}: {exc}") from None
    domain = cfg.domain or catalog.domain_of(target)
    if cfg.compact:
        if domain != "disc":
            raise InputError("--compact applies to disc targets only")
        L = StarCompact.disc() if cfg.compact == "disc" else StarCompact.square()
        f = _star_target(target, cfg.compact)
        Q, report = approx_star_compact(L, f, cfg.eps, n_boundary=cfg.grid_boundary,
                                        degree_cap=cfg.degree_cap)
        pts = L.mesh(4 * cfg.grid_boundary, 256, 32)
        return Q, report, _error_rows(f, Q, pts)
    if domain == "disc":
        grid, vgrid = _disc_grids(cfg)
        driver = approx_infinite_type if isinstance(target, InfiniteTypeFunction) else approx_finite_type
        Q, report = driver(target, cfg.eps, grid=grid, verify_grid=vgrid, degree_cap=cfg.degree_cap)
        vg = vgrid if isinstance(target, InfiniteTypeFunction) else vgrid.with_nodes(target.singular_nodes)
        return Q, report, _error_rows(target, Q, vg.points(), vg.eval_polynomial(Q))
    if domain == "circle":
        Q, report = approx_trig_on_circle(target, cfg.eps, n_grid=2 * cfg.grid_boundary,
                                          degree_cap=cfg.degree_cap)
        vg = CircleGrid(8 * cfg.grid_boundary)
        return Q, report, _error_rows(target, Q, vg.points(), Q(vg.angles()))
    if domain in ("segment", "segment-complex"):
        driver = approx_real_segment if domain == "segment" else approx_segment
        Q, report = driver(target, cfg.eps, n_grid=4 * cfg.grid_boundary + 1, degree_cap=cfg.degree_cap)
        x = SegmentGrid(16 * cfg.grid_boundary + 1).points()
        return Q, report, _error_rows(target, Q, x, Q(x))
    raise InputError(f"unknown domain {domain!r}")


def _error_rows(f, Q, pts, qvals=None):
    pts = np.asarray(pts).ravel()
    if qvals is None:
        qvals = np.concatenate([Q(pts[i : i + 4096]) for i in range(0, pts.size, 4096)])
    err = np.abs(f.evaluate(pts).chart() - gmap_array(np.asarray(qvals).ravel()))
    return [(float(z.real), float(z.imag), float(e)) for z, e in zip(pts, err)]


def cmd_approximate(cfg: ExperimentConfig) -> int:
    record = {"schema": SCHEMA, "command": "approximate", "config": asdict(cfg)}
    try:
        Q, report, rows = run_approximation(cfg)
    except ApproximationError as exc:
        record.update(status="failed", error=str(exc).splitlines()[0],
                      error_type=type(exc).__name__,
                      report=exc.report.to_json() if exc.report else None)
        _emit(record, cfg)
        _write_outputs(cfg, {"report.json": dumps(record)})
        print(f"cbar: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    record.update(status="ok" if report.success else "failed", report=report.to_json())
    _emit(record, cfg)
    _write_outputs(cfg, {
        "report.json": dumps(record),
        "coefficients.json": dumps(encode_approximant(Q)),
        "errors.csv": csv_text(["re", "im", "d_error"], rows),
    })
    return EXIT_OK if report.success else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# classify


def cmd_classify(path: str, cfg: ExperimentConfig, n_angular: int, n_radial: int) -> int:
    seq = load_sequence(path)
    grid = PolarGrid(n_angular, n_radial)
    verdict = classify_limit(seq, grid, tol=cfg.tol)
    record = {"schema": SCHEMA, "command": "classify", "config": asdict(cfg),
              "sequence_length": len(seq), "verdict": verdict.to_json()}
    _emit(record, cfg)
    files = {"verdict.json": dumps(record)}
    if isinstance(verdict, InfiniteType):
        pts = verdict.points.ravel()
        files["theta.csv"] = csv_text(["re", "im", "theta"],
                                      zip(pts.real, pts.imag, verdict.theta.ravel()))
    _write_outputs(cfg, files)
    print(verdict.kind, file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(suite: str, cfg: ExperimentConfig) -> int:
    result = run_suite(suite, seed=cfg.seed)
    record = {"schema": SCHEMA, "command": "verify", **result.to_json()}
    if cfg.fmt == "json":
        _emit(record, cfg)
    else:
        rows = [(c.name, c.passed, c.value, c.threshold, " ".join(c.counterexample)) for c in result.checks]
        sys.stdout.write(csv_text(["check", "passed", "value", "threshold", "counterexample"], rows))
    _write_outputs(cfg, {"verify.json": dumps(record)})
    return EXIT_OK if result.passed else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# parser


def _json_object(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON at column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise argparse.ArgumentTypeError("parameters must be a JSON object")
    return obj


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=1e-2, help="target sup-d error (default 1e-2)")
    common.add_argument("--grid-boundary", type=int, default=512, metavar="N",
                        help="construction boundary samples (default 512; verification uses 4N)")
    common.add_argument("--grid-radial", type=int, default=128, metavar="M",
                        help="construction interior rings (default 128)")
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP, metavar="K",
                        help=f"maximum polynomial degree (default {DEFAULT_DEGREE_CAP})")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="seed for random sampling (default 0)")
    common.add_argument("--out", metavar="PATH", help="directory for report, coefficient and table files")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json",
                        help="stdout format (default json)")

    parser = argparse.ArgumentParser(prog="cbar", description="Polynomial approximation in the metric d.")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("metric", parents=[common], help="d and chi(Phi, Phi) between two points")
    m.add_argument("p", help='point literal, e.g. "1+2i" or "inf@0.5"')
    m.add_argument("q")

    a = sub.add_parser("approximate", parents=[common], help="approximate a catalog target")
    a.add_argument("target", help=f"one of: {', '.join(catalog.NAMES)}; or poly:[...] / segpoly:[...]")
    a.add_argument("--params", type=_json_object, default={}, help="target parameters as a JSON object")
    a.add_argument("--domain", choices=("disc", "circle", "segment", "segment-complex"),
                   help="override the target's domain (segment-complex allows complex values)")
    a.add_argument("--compact", choices=("disc", "square"),
                   help="approximate on a star-shaped compact instead of with the disc drivers")

    c = sub.add_parser("classify", parents=[common], help="classify the limit of a polynomial sequence")
    c.add_argument("file", help="JSON file with the coefficient lists")
    c.add_argument("--tol", type=float, default=0.02, help="Cauchy and blow-up tolerance (default 0.02)")
    c.add_argument("--grid-angular", type=int, default=256, help="rays of the polar grid (default 256)")
    c.add_argument("--grid-rings", type=int, default=64, help="radial steps of the polar grid (default 64)")

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", choices=sorted(SUITES))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = ExperimentConfig(
        command=args.command,
        target=getattr(args, "target", ""),
        params=getattr(args, "params", {}) or {},
        domain=getattr(args, "domain", None) or "",
        compact=getattr(args, "compact", None) or "",
        eps=args.eps,
        grid_boundary=args.grid_boundary,
        grid_radial=args.grid_radial,
        degree_cap=args.degree_cap,
        tol=getattr(args, "tol", 0.02),
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
    )
    try:
        _threads_ok()
        cfg.validate()
        if args.command == "metric":
            return cmd_metric(args.p, args.q, cfg)
        if args.command == "approximate":
            return cmd_approximate(cfg)
        if args.command == "classify":
            return cmd_classify(args.file, cfg, args.grid_angular, args.grid_rings)
        return cmd_verify(args.suite, cfg)
    except (InputError, ValueError, OSError) as exc:
        print(f"cbar: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
