"""Command line interface: ``tanaka PROBLEM.json`` or ``tanaka --preset NAME``.

Exit status: 0 when the prolongation is finite, 1 when it is infinite (or,
with --dims-only, not seen to vanish up to pmax), 2 on any input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import linalg
from .algebraic import QuadraticNumber
from .criteria import CheckOptions, finiteness_check
from .problem import PRESETS, ProblemError, ProblemSpec, from_dict, parse, preset, subalgebra_warnings
from .prolong import DimTable, oracle_verdict, tanaka_prolong_dims

EXIT_FINITE, EXIT_INFINITE, EXIT_ERROR = 0, 1, 2
MODES = ("check", "oracle", "dims")


def _point_to_json(pt) -> list | None:
    if pt is None:
        return None
    out = []
    for x in pt:
        if isinstance(x, QuadraticNumber):
            out.append(x.to_json() if not x.is_rational() else linalg.fraction_str(x.a))
        else:
            out.append(linalg.fraction_str(Fraction(x)))
    return out


def _point_to_text(pt) -> str:
    return "(" + ", ".join(str(x) if isinstance(x, QuadraticNumber) else linalg.fraction_str(Fraction(x))
                           for x in pt) + ")"


@dataclass
class Report:
    name: str | None
    verdict: str
    route: str | None = None
    witness: list | None = None
    algebraic_witness: list | None = None
    evidence: dict = field(default_factory=dict)
    dims: dict | None = None
    oracle: str | None = None
    agreement: bool | None = None
    warnings: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_FINITE if self.verdict == "FINITE" else EXIT_INFINITE

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "route": self.route,
            "witness": self.witness,
            "algebraic_witness": self.algebraic_witness,
            "evidence": self.evidence,
            "dims": self.dims,
            "oracle": self.oracle,
            "agreement": self.agreement,
            "warnings": self.warnings,
            "seconds": self.seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [f"problem:  {self.name or '<unnamed>'}", f"verdict:  {self.verdict}"]
        if self.route:
            lines.append(f"route:    {self.route}")
        if self.witness is not None:
            lines.append(f"witness:  ({', '.join(self.witness)})")
        if self.algebraic_witness is not None:
            shown = [w if isinstance(w, str) else str(QuadraticNumber(*map(Fraction, w[:2]), int(w[2])))
                     for w in self.algebraic_witness]
            lines.append(f"witness over a quadratic field:  ({', '.join(shown)})")
        for key in sorted(self.evidence):
            lines.append(f"  {key}: {self.evidence[key]}")
        if self.dims is not None:
            d = self.dims
            lines.append(f"dims:     negative {d['negative']}  g0 {d['g0']}  positive {d['positive']}"
                         + (f"  total {d['total']}" if d.get("total") is not None else ""))
            lines.append(f"oracle:   {self.oracle}" + ("" if self.agreement is None else
                                                      f"  (agrees with criterion: {self.agreement})"))
        for w in self.warnings:
            lines.append(f"warning:  {w}")
        lines.append(f"time:     {self.seconds:.3f}s")
        return "\n".join(lines)


def run(spec: ProblemSpec, mode: str = "check", pmax: int | None = None,
        options: CheckOptions | None = None) -> Report:
    """Run one problem. ``mode`` is check, oracle (check plus dimensions) or dims."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    lam = spec.structure_algebra()
    k = spec.ideal()
    pmax = pmax or spec.options.get("pmax", 6)
    if mode == "check" and spec.options.get("run_oracle"):
        mode = "oracle"
    report = Report(spec.name, "", warnings=subalgebra_warnings(spec.n, spec.L))
    table: DimTable | None = None
    if mode in ("oracle", "dims"):
        table = tanaka_prolong_dims(k, lam, pmax)
        report.dims = table.to_dict()
        report.oracle = oracle_verdict(table)
    if mode == "dims":
        report.verdict = "FINITE" if table.stabilized_zero else "INFINITE"
        report.route = f"dimensions up to degree {pmax}"
    else:
        v = finiteness_check(lam, k, spec.perp_basis(), options)
        report.verdict = v.label
        report.route = v.route
        report.witness = _point_to_json(v.witness)
        report.algebraic_witness = _point_to_json(v.algebraic_witness)
        report.evidence = {k_: v_ for k_, v_ in v.evidence.items() if k_ != "seconds"}
        if table is not None:
            report.agreement = v.finite == table.stabilized_zero
    report.seconds = round(time.perf_counter() - start, 4)
    return report


def _load(source: str) -> ProblemSpec:
    if source in PRESETS:
        return preset(source)
    return parse(Path(source).read_text())


def _load_batch(path: str) -> list[ProblemSpec]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, list):
        return [from_dict(d) for d in data]
    # one problem file or preset name per line
    return [_load(line.strip()) for line in text.splitlines() if line.strip() and not line.startswith("#")]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tanaka", description="Decide finiteness of maximal effective prolongations.")
    ap.add_argument("problem", nargs="?", help="problem JSON file or a preset name")
    ap.add_argument("--preset", help="run a built-in problem by name")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                    help="preset parameter (repeatable), value parsed as JSON")
    mode = ap.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", help="run the rank criterion only (default)")
    mode.add_argument("--oracle", action="store_true", help="also compute prolongation dimensions")
    mode.add_argument("--dims-only", action="store_true", help="compute dimensions only")
    ap.add_argument("--pmax", type=int, help="highest positive degree for the dimension oracle")
    ap.add_argument("--format", choices=("text", "machine"), help="report format")
    ap.add_argument("--no-shortcuts", action="store_true", help="disable the two-column shortcut")
    ap.add_argument("--batch", metavar="FILE", help="JSON list of problems, or one file/preset per line")
    ap.add_argument("--jobs", type=int, default=4, help="worker threads for --batch")
    ap.add_argument("--list-presets", action="store_true")
    return ap


def _mode(args) -> str:
    if args.oracle:
        return "oracle"
    if args.dims_only:
        return "dims"
    return "check"


def _emit(report: Report, fmt: str) -> None:
    print(report.to_json() if fmt == "machine" else report.to_text())


def _error(exc: Exception, fmt: str) -> int:
    if isinstance(exc, ProblemError):
        payload = {"error": exc.code, "field": exc.field, "message": exc.message}
    else:
        payload = {"error": type(exc).__name__, "field": None, "message": str(exc)}
    if fmt == "machine":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"error [{payload['error']}] {payload['field'] or ''}: {payload['message']}", file=sys.stderr)
    return EXIT_ERROR


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or "text"
    if args.list_presets:
        for name in PRESETS:
            print(name)
        return 0
    opts = CheckOptions(shortcuts=not args.no_shortcuts)
    mode = _mode(args)

    if args.batch:
        try:
            specs = _load_batch(args.batch)
        except (ProblemError, OSError) as exc:
            return _error(exc, fmt)

        def job(spec):
            try:
                return run(spec, mode, args.pmax, opts), None
            except Exception as exc:  # reported per problem, batch continues
                return None, exc

        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            results = list(pool.map(job, specs))
        worst = EXIT_FINITE
        for report, exc in results:
            if exc is not None:
                worst = max(worst, _error(exc, fmt))
            else:
                _emit(report, fmt)
                if fmt == "text":
                    print()
                worst = max(worst, report.exit_code)
        return worst

    try:
        if args.preset:
            params = {}
            for item in args.param:
                key, _, value = item.partition("=")
                try:
                    params[key] = json.loads(value)
                except json.JSONDecodeError:
                    params[key] = value
            spec = preset(args.preset, **params)
        elif args.problem:
            spec = _load(args.problem)
        else:
            raise ProblemError("schema", "problem", "give a problem file, a preset name or --preset")
        fmt = args.format or spec.options.get("format", "text")
        report = run(spec, mode, args.pmax, opts)
    except (ProblemError, OSError, linalg.ShapeError) as exc:
        return _error(exc, fmt)
    _emit(report, fmt)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
