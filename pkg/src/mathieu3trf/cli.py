"""Command-line front end.

    mathieu3trf eval   --q Q --lambda L --kind first|second (--x ... | --z ... | --range lo:hi:n)
    mathieu3trf verify [--q Q --lambda L --x ...] [--quad-nodes N] [--n-max-integral 0..3]
    mathieu3trf probe  ratios|tail ...

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 numeric
overflow.  Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .core import EvalPoint, MathieuDomainError, MathieuOverflowError, MathieuParams, Truncation
from .series3trf import mathieu_series
from .verify import asymptotic_ratio_probe, run_verification, tail_geometry_probe

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_OVERFLOW = 3

EVAL_COLUMNS = ("x", "z", "value", "tail_estimate")
RATIO_COLUMNS = ("n", "A_n", "n2_B_n")
TAIL_COLUMNS = ("n", "ratio")


@dataclass
class RunConfig:
    command: str
    q: float = 1.0
    lam: float = 1.0
    kind: str = "first"
    xs: Optional[list] = None
    zs: Optional[list] = None
    range_spec: Optional[str] = None
    layers: int = 20
    cap: int = 40
    quad_nodes: Optional[int] = None
    n_max_integral: int = 2
    fmt: str = "csv"
    out: Optional[str] = None
    probe: Optional[str] = None
    ns: list = field(default_factory=lambda: [10, 100, 1000, 10000])
    N: int = 500
    jobs: int = 1

    @property
    def nu(self) -> float:
        return 0.0 if self.kind == "first" else 0.5

    def points(self) -> list:
        given = [v is not None for v in (self.xs, self.zs, self.range_spec)]
        if sum(given) != 1:
            raise ValueError("give exactly one of --x, --z, --range")
        if self.xs is not None:
            return [EvalPoint(x) for x in self.xs]
        if self.zs is not None:
            return [EvalPoint.from_angle(z) for z in self.zs]
        lo, hi, n = self.range_spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
        if n < 1:
            raise ValueError("range needs at least one point")
        step = (hi - lo) / (n - 1) if n > 1 else 0.0
        return [EvalPoint(lo + k * step) for k in range(n)]


def _floats(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(columns, rows, fmt: str, stream, meta: Optional[dict] = None):
    if fmt == "json":
        doc = dict(meta or {})
        doc["columns"] = list(columns)
        doc["rows"] = [dict(zip(columns, r)) for r in rows]
        stream.write(json.dumps(doc, indent=2) + "\n")
        return
    w = csv.writer(stream, lineterminator="\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


def _emit(text_writer, cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w", newline="", encoding="utf-8") as fh:
            text_writer(fh)
    else:
        text_writer(sys.stdout)


def _error(kind: str, message: str, **extra) -> None:
    doc = {"error": kind, "message": message}
    doc.update(extra)
    sys.stderr.write(json.dumps(doc) + "\n")


def cmd_eval(cfg: RunConfig) -> int:
    p = MathieuParams(cfg.q, cfg.lam)
    t = Truncation(cfg.layers, cfg.cap)
    pts = cfg.points()

    def one(pt):
        r = mathieu_series(p, cfg.nu, pt, t)
        return (pt.x, pt.z, r.value, r.tail_estimate)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            rows = list(pool.map(one, pts))
    else:
        rows = [one(pt) for pt in pts]
    meta = {"command": "eval", "q": cfg.q, "lambda": cfg.lam, "kind": cfg.kind, "layers": cfg.layers, "cap": cfg.cap}
    _emit(lambda s: write_table(EVAL_COLUMNS, rows, cfg.fmt, s, meta), cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if not 0 <= cfg.n_max_integral <= 3:
        raise ValueError("--n-max-integral must be between 0 and 3")
    xs = cfg.xs if cfg.xs is not None else [0.3]
    for x in xs:
        EvalPoint(x)
    report = run_verification(
        MathieuParams(cfg.q, cfg.lam),
        xs,
        Truncation(cfg.layers, cfg.cap),
        cfg.quad_nodes,
        cfg.n_max_integral,
    )
    _emit(lambda s: s.write(json.dumps(report, indent=2) + "\n"), cfg)
    return EXIT_OK if report["pass"] else EXIT_VERIFY_FAILED


def cmd_probe(cfg: RunConfig) -> int:
    p = MathieuParams(cfg.q, cfg.lam)
    if cfg.probe == "ratios":
        table = asymptotic_ratio_probe(p, cfg.nu, cfg.ns)
    else:
        x = cfg.xs[0] if cfg.xs else 0.5
        table = tail_geometry_probe(p, cfg.nu, x, cfg.N)
    meta = {"command": f"probe {cfg.probe}", "q": cfg.q, "lambda": cfg.lam, "kind": cfg.kind}
    _emit(lambda s: write_table(table.columns, table.rows, cfg.fmt, s, meta), cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=1.0)
    common.add_argument("--lambda", dest="lam", type=float, default=1.0)
    common.add_argument("--kind", choices=("first", "second"), default="first")
    common.add_argument("--x", dest="xs", type=_floats)
    common.add_argument("--z", dest="zs", type=_floats)
    common.add_argument("--range", dest="range_spec")
    common.add_argument("--layers", type=int, default=20)
    common.add_argument("--cap", type=int, default=40)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    common.add_argument("--out")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="mathieu3trf", description="Mathieu functions from nested 3TRF series and their integral forms.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="evaluate MF/MS at points")
    pv = sub.add_parser("verify", parents=[common], help="run the equivalence and residual battery")
    pv.add_argument("--quad-nodes", type=int)
    pv.add_argument("--n-max-integral", type=int, default=2)
    pp = sub.add_parser("probe", parents=[common], help="large-n coefficient and tail probes")
    pp.add_argument("probe", choices=("ratios", "tail"))
    pp.add_argument("--n", dest="ns", type=_ints, default=[10, 100, 1000, 10000])
    pp.add_argument("--N", type=int, default=500)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    if opts["fmt"] is None:
        opts["fmt"] = "json" if args.command == "verify" else "csv"
    cfg = RunConfig(**{k: v for k, v in opts.items() if k in RunConfig.__dataclass_fields__})
    handler = {"eval": cmd_eval, "verify": cmd_verify, "probe": cmd_probe}[args.command]
    try:
        return handler(cfg)
    except MathieuDomainError as exc:
        _error("domain", str(exc))
        return EXIT_DOMAIN
    except MathieuOverflowError as exc:
        _error("overflow", str(exc), layer=exc.layer)
        return EXIT_OVERFLOW
    except ValueError as exc:
        _error("usage", str(exc))
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
