"""zspec command-line front door.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import intertwine as itw
from . import kernels as kr
from . import verify
from .config import ConfigError, RunConfig, load_config
from .hgroup import build_htype
from .zeeman import spectrum
from .zones import build_zone_basis


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _zone(text: str):
    if text == "global":
        return text
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"zone must be an integer or 'global', got {text!r}") from exc


def _blocks(text: str) -> list[dict]:
    out = []
    for item in text.split(","):
        try:
            lam, k = item.split(":")
            out.append({"lambda": float(lam), "k": int(k)})
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"blocks are lambda:k pairs, got {item!r}") from exc
    return out


def _group(text: str) -> dict:
    try:
        l, ab = text.strip().split(":")
        a, b = ab.split(",")
        return {"l": int(l), "a": int(a), "b": int(b)}
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"group must look like 3:2,0, got {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zspec", description="Zeeman spectra, zones, kernels and intertwiners.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="JSON run configuration; flags override its entries")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--out", help="write the table here instead of stdout")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--group", type=_group, default=None, help="H-type group as l:a,b")
        p.add_argument("--quad-order", type=int, default=None)
        return p

    p = common(sub.add_parser("spectrum", help="Box_lambda levels of a zone"))
    p.add_argument("--zone", type=_zone, default=None)
    p.add_argument("--e-max", type=float, default=None)
    p.add_argument("--include-constant", action="store_true", default=None)
    p.add_argument("--constant-mode", choices=["derived", "per-paper"], default=None)

    p = common(sub.add_parser("zones", help="orthonormal zone basis (JSON by default)"))
    p.add_argument("--zone", type=_zone, default=None)
    p.add_argument("--degree", "--degree-max", dest="degree_max", type=int, default=None)

    for name in ("kernel", "partition"):
        p = common(sub.add_parser(name, help=f"{name} evaluation"))
        p.add_argument("--kind", choices=["wk", "df"], default=None)
        p.add_argument("--zone", type=_zone, default=None)
        p.add_argument("--blocks", type=_blocks, default=None, help="lambda:k,lambda:k,...")
        p.add_argument("--method", choices=["closed-form", "eigen-sum"], default=None)
        p.add_argument("--t", type=float, default=None)
        p.add_argument("--t-grid", default=None, help="start:stop:step (inclusive)")
        p.add_argument("--include-constant", action="store_true", default=None)
        p.add_argument("--constant-mode", choices=["derived", "per-paper"], default=None)
        if name == "kernel":
            p.add_argument("--x", type=_floats, default=None)
            p.add_argument("--y", type=_floats, default=None)
            p.add_argument("--p-max", type=int, default=None)

    p = common(sub.add_parser("isospec", help="truncated Box_gamma spectra of two groups"))
    p.add_argument("--family", default=None, help='e.g. "3:2,0 vs 3:1,1"')
    p.add_argument("--zgamma", type=_floats, default=None)
    p.add_argument("--degree", type=int, default=None)

    p = common(sub.add_parser("verify", help="run a verification suite"))
    p.add_argument("--suite", default=None, choices=["all", *verify.SUITES])
    p.add_argument("--tol", type=float, default=None)
    return parser


_NON_CONFIG = {"command", "config", "out"}


def _write_table(cfg: RunConfig, columns: list[str], rows: list[list]) -> str:
    if cfg.format == "json":
        return json.dumps([dict(zip(columns, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _kernel_params(cfg: RunConfig, zone) -> kr.KernelParams:
    if cfg.blocks:
        blocks = tuple(kr.Block.standard(b.lam, b.k) for b in cfg.blocks)
    else:
        blocks = (kr.Block.standard(cfg.lam, cfg.dimension),)
    return kr.KernelParams(blocks, cfg.kind, zone, cfg.include_constant, cfg.constant_mode)


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    table = spectrum(cfg.zone, cfg.dimension, cfg.lam, cfg.e_max, cfg.include_constant, cfg.constant_mode)
    if cfg.format == "json":
        return json.dumps(table.to_json(), indent=2) + "\n", 0
    return table.to_csv(), 0


def cmd_zones(cfg: RunConfig) -> tuple[str, int]:
    if cfg.zone == "global":
        raise ConfigError("zones needs an integer --zone")
    basis = build_zone_basis(cfg.zone, cfg.dimension, cfg.lam, cfg.degree_max)
    if cfg.format in (None, "json"):
        body = basis.to_json()
        body["gram_residual"] = float(np.abs(basis.gram() - np.eye(len(basis))).max())
        return json.dumps(body, indent=2) + "\n", 0
    rows = [[i, e.level, e.magnetic, " ".join(map(str, e.holo)), " ".join(map(str, e.anti)), len(e.poly)]
            for i, e in enumerate(basis.elements)]
    return _write_table(cfg, ["index", "level", "magnetic", "holo", "anti", "terms"], rows), 0


def cmd_kernel(cfg: RunConfig) -> tuple[str, int]:
    if cfg.x is None or cfg.y is None:
        raise ConfigError("kernel needs --x and --y")
    params = _kernel_params(cfg, cfg.zone)
    X = np.array(cfg.x)[None]
    Y = np.array(cfg.y)[None]
    rows = []
    for t in cfg.t_values():
        if params.zone == "global":
            v = kr.evaluate(params, t, X, Y)
        else:
            f = kr.wk_zonal if params.kind == "wk" else kr.df_zonal
            v = f(params.zone, params, t, X, Y, method=cfg.method, p_max=cfg.p_max)
        v = complex(np.asarray(v).ravel()[0])
        rows.append([float(t), v.real, v.imag])
    return _write_table(cfg, ["t", "re", "im"], rows), 0


def cmd_partition(cfg: RunConfig) -> tuple[str, int]:
    params = _kernel_params(cfg, cfg.zone)
    rows = []
    for t in cfg.t_values():
        if cfg.method == "eigen-sum":
            if cfg.kind != "wk":
                raise ConfigError("eigen-sum partition functions are Wiener-Kac only")
            v = kr.partition_eigen_sum(cfg.zone, params, t).value
        else:
            v = kr.partition(cfg.kind, cfg.zone, params, t)
        rows.append([float(t), v.real, v.imag])
    return _write_table(cfg, ["t", "re", "im"], rows), 0


def cmd_isospec(cfg: RunConfig) -> tuple[str, int]:
    if not cfg.family or " vs " not in cfg.family:
        raise ConfigError('isospec needs --family "l:a,b vs l:a,b"')
    left, right = (_group(s) for s in cfg.family.split(" vs "))
    A, B = build_htype(**left), build_htype(**right)
    zg = cfg.zgamma if cfg.zgamma is not None else [0.0] * (A.l - 1) + [1.0]
    res = itw.isospec_check(A, B, zg, cfg.degree)
    rows = [[i, float(a), float(b), float(abs(a - b))] for i, (a, b) in enumerate(zip(res.eigs, res.eigs_other))]
    return _write_table(cfg, ["index", "eig_A", "eig_B", "gap"], rows), 0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    report = verify.run_suite(cfg.suite)
    ok = report.passed(cfg.tol)
    if cfg.format == "json":
        body = {
            "suite": report.suite,
            "passed": ok,
            "checks": [{"name": c.name, "value": c.value, "tol": c.effective_tol(cfg.tol), "mode": c.mode,
                        "passed": c.passed(cfg.tol)} for c in report.checks],
            "verdicts": list(report.verdicts),
        }
        text = json.dumps(body, indent=2) + "\n"
    else:
        lines = report.lines(cfg.tol)
        lines.append(f"{'PASS' if ok else 'FAIL'} suite {report.suite}")
        text = "\n".join(lines) + "\n"
    return text, 0 if ok else 1


COMMANDS = {
    "spectrum": cmd_spectrum,
    "zones": cmd_zones,
    "kernel": cmd_kernel,
    "partition": cmd_partition,
    "isospec": cmd_isospec,
    "verify": cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"zspec: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"zspec: error: cannot read config: {exc}", file=sys.stderr)
        return 2
    old = os.environ.get("ZSPEC_QUAD_ORDER")
    if cfg.quad_order is not None:
        os.environ["ZSPEC_QUAD_ORDER"] = str(cfg.quad_order)
    try:
        text, code = COMMANDS[args.command](cfg)
    except (ConfigError, ValueError, NotImplementedError, KeyError) as exc:
        print(f"zspec: error: {exc}", file=sys.stderr)
        return 2
    finally:
        if cfg.quad_order is not None:
            if old is None:
                os.environ.pop("ZSPEC_QUAD_ORDER", None)
            else:
                os.environ["ZSPEC_QUAD_ORDER"] = old
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
