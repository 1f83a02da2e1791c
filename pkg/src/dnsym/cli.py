"""Command-line entry point: ``dnsym list|verify|eval|export-report``.

Exit codes: 0 success, 1 a check failed or evaluation failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Sequence

from dnsym.report import CheckResult, all_passed, combine, to_json
from dnsym.symexpr import ProbeConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CATEGORIES = ("algebras", "transforms", "reductions", "solutions", "conslaws")
SUITES = ("commutators", "adjoint", "structure", "table1", "solutions", "conslaws", "intermediate", "all")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    probe_points: int = 24
    probe_eps: float = 1e-9
    fd_step: float | None = None  # None: each family's tuned step
    seed: int = 0
    grid: str | None = None
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.probe_points < 8:
            raise UsageError(f"probe_points must be at least 8, got {self.probe_points}")
        if not self.probe_eps > 0:
            raise UsageError("probe_eps must be positive")
        if self.fd_step is not None and not self.fd_step > 0:
            raise UsageError("fd_step must be positive")
        return self

    @property
    def probe(self) -> ProbeConfig:
        return ProbeConfig(points=self.probe_points, eps=self.probe_eps, seed=self.seed)


_FIELD_TYPES = {"probe_points": int, "probe_eps": float, "fd_step": float, "seed": int, "grid": str, "out": str}


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise UsageError(f"config line {n}: unknown key {key!r}")
        try:
            out[key] = _FIELD_TYPES[key](value)
        except ValueError:
            raise UsageError(f"config line {n}: bad value for {key}: {value!r}") from None
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            values.update(parse_config_text(Path(args.config).read_text(encoding="utf-8")))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    flag_map = {
        "probe_points": "probe_points",
        "tol_probe": "probe_eps",
        "fd_step": "fd_step",
        "seed": "seed",
        "grid": "grid",
        "out": "out",
    }
    for flag, key in flag_map.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    known = {f.name for f in fields(RunConfig)}
    return replace(RunConfig(), **{k: v for k, v in values.items() if k in known}).validate()


# ---------------------------------------------------------------------------
# list


def _rows_algebras() -> list[tuple[str, str]]:
    from dnsym.liealgebra import catalog, catalog_ids

    return [(cid, f"{len(catalog(cid).generators)} generator families; {catalog(cid).locus}") for cid in catalog_ids()]


def _rows_transforms() -> list[tuple[str, str]]:
    from dnsym.pointgroup import describe_families

    return describe_families()


def _rows_reductions() -> list[tuple[str, str]]:
    from dnsym.reductions import describe_rows

    return describe_rows()


def _rows_solutions() -> list[tuple[str, str]]:
    from dnsym.solutions import catalog

    return [(name, f.locus) for name, f in sorted(catalog().items())]


def _rows_conslaws() -> list[tuple[str, str]]:
    from dnsym.conslaw import describe_catalog

    return [(f"{r['family']}.{r['member']}", f"slot: {r['slot']}" if r["slot"] else "no functional slot") for r in describe_catalog()]


LISTERS: dict[str, Callable[[], list[tuple[str, str]]]] = {
    "algebras": _rows_algebras,
    "transforms": _rows_transforms,
    "reductions": _rows_reductions,
    "solutions": _rows_solutions,
    "conslaws": _rows_conslaws,
}


def format_table(rows: Sequence[tuple[str, str]]) -> str:
    width = max((len(a) for a, _ in rows), default=0)
    return "".join(f"{a.ljust(width)}  {b}\n" for a, b in rows)


def cmd_list(args: argparse.Namespace) -> int:
    sys.stdout.write(format_table(LISTERS[args.category]()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _suite_commutators(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.liealgebra import all_catalog_results

    return all_catalog_results(cfg.probe)


def _suite_adjoint(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.pointgroup import verify_adjoint_table, verify_megaideal_stability, verify_special_elements

    return verify_adjoint_table(cfg.probe) + verify_megaideal_stability(cfg.probe) + verify_special_elements(cfg.probe)


def _suite_structure(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.liealgebra import (
        catalog_ids,
        verify_intermediate_map,
        verify_structure,
        verify_symmetries,
        verify_symmetry_control,
        verify_upsilon,
    )

    out = verify_structure("a13", cfg.probe)
    for cid in catalog_ids():
        out += verify_symmetries(cid, cfg.probe)
    return out + verify_symmetry_control(cfg.probe) + verify_upsilon(cfg.probe) + verify_intermediate_map(cfg.probe)


def _suite_table1(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.reductions import verify_subalgebras, verify_table

    return verify_table(cfg.probe) + verify_subalgebras(cfg.probe)


def _suite_solutions(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.solutions import verify_solutions

    return verify_solutions(cfg.probe, step=cfg.fd_step, seed=cfg.seed)


def _suite_conslaws(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.conslaw import verify_conslaws

    return verify_conslaws(cfg.probe)


def _suite_intermediate(cfg: RunConfig) -> list[CheckResult]:
    from dnsym.conslaw import intermediate_suite

    return intermediate_suite(cfg.probe)


SUITE_RUNNERS: dict[str, Callable[[RunConfig], list[CheckResult]]] = {
    "commutators": _suite_commutators,
    "adjoint": _suite_adjoint,
    "structure": _suite_structure,
    "table1": _suite_table1,
    "solutions": _suite_solutions,
    "conslaws": _suite_conslaws,
    "intermediate": _suite_intermediate,
}


def run_suite(name: str, cfg: RunConfig) -> list[CheckResult]:
    if name == "all":
        out: list[CheckResult] = []
        for key in SUITE_RUNNERS:
            out += SUITE_RUNNERS[key](cfg)
        return combine(out)
    return combine(SUITE_RUNNERS[name](cfg))


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    results = run_suite(args.suite, cfg)
    text = to_json(results, timing=args.timing)
    out = cfg.out or f"report-{args.suite}.json"
    Path(out).write_text(text, encoding="utf-8")
    failed = [r for r in results if not r.passed]
    for r in failed:
        sys.stderr.write(f"{r.status.upper()}: {r.check_id} ({r.paper_locus}) {r.detail}\n")
    sys.stdout.write(f"{args.suite}: {len(results) - len(failed)}/{len(results)} checks passed; report written to {out}\n")
    return EXIT_OK if all_passed(results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# eval


def parse_grid(spec: str, axes: int) -> tuple[list[tuple[float, float]], int]:
    """``lo:hi,lo:hi[,lo:hi],n``, e.g. ``1:2,1:2,10``."""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != axes + 1:
        raise UsageError(f"grid needs {axes} ranges and a point count, got {spec!r}")
    try:
        window = []
        for p in parts[:-1]:
            lo, hi = (float(x) for x in p.split(":"))
            if not hi > lo:
                raise UsageError(f"empty range {p!r}")
            window.append((lo, hi))
        n = int(parts[-1])
    except ValueError:
        raise UsageError(f"cannot parse grid {spec!r}") from None
    if n < 2:
        raise UsageError("grid needs at least 2 points per axis")
    return window, n


def cmd_eval(args: argparse.Namespace) -> int:
    from dnsym.solutions import CompositeFamily, export_grid, family

    cfg = build_config(args)
    try:
        f = family(args.family)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    window, n = (None, 10)
    if cfg.grid:
        window, n = parse_grid(cfg.grid, 3 if isinstance(f, CompositeFamily) else 2)
        window = tuple(window)
    text, manifest = export_grid(f, window=window, n=n, step=cfg.fd_step)
    if manifest["valid_points"] == 0:
        sys.stderr.write(f"no valid grid points for {f.name}\n")
        return EXIT_FAIL
    if args.format == "json":
        rows = list(csv.DictReader(io.StringIO(text)))
        body = json.dumps({"manifest": manifest, "rows": rows}, indent=2, sort_keys=True) + "\n"
    else:
        body = text
    if cfg.out:
        Path(cfg.out).write_text(body, encoding="utf-8")
        if args.format == "csv":
            Path(cfg.out).with_suffix(".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    else:
        sys.stdout.write(body)
    return EXIT_OK


# ---------------------------------------------------------------------------
# export-report


def cmd_export_report(args: argparse.Namespace) -> int:
    """Re-render a saved JSON report as CSV or an aligned text table."""
    try:
        data = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    if not isinstance(data, list):
        raise UsageError("report must be a JSON array of check records")
    data = sorted(data, key=lambda r: r["check_id"])
    if args.format == "csv":
        buf = io.StringIO()
        cols = ["check_id", "paper_locus", "status", "verdict", "max_probe_error", "elapsed_ms"]
        w = csv.DictWriter(buf, cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(data)
        body = buf.getvalue()
    else:
        body = format_table([(r["check_id"], f"{r['status']:5}  {r['verdict']}  {r.get('detail', '')}".rstrip()) for r in data])
        passed = sum(r["status"] == "pass" for r in data)
        body += f"{passed}/{len(data)} passed\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return EXIT_OK if all(r["status"] == "pass" for r in data) else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep message format
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--probe-points", type=int, dest="probe_points")
    p.add_argument("--tol-probe", type=float, dest="tol_probe", help="probe threshold for the zero test")
    p.add_argument("--fd-step", "--tol-fd-step", type=float, dest="fd_step", help="finite-difference base step")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dnsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("list", help="list catalog entries")
    p.add_argument("category", choices=CATEGORIES)
    p.set_defaults(run=cmd_list)

    p = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--timing", action="store_true", help="include elapsed_ms (reports are then not byte-stable)")
    _common(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a solution family on a grid")
    p.add_argument("family")
    p.add_argument("--grid", help="lo:hi,lo:hi[,lo:hi],n")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _common(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("export-report", help="render a saved JSON report as text or CSV")
    p.add_argument("report")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(run=cmd_export_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        sys.stderr.write(f"dnsym: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
