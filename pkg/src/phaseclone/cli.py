"""Command-line front end: ``phaseclone table|solve|compose``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or domain error.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction

import numpy as np

from . import sdp
from .bases import ReducedPoint, assemble
from .cloners import (FAMILIES, MapKind, closed_form_fidelity, process_fidelity_analytic,
                      reference_table)
from .composition import modular_report, modular_cloner, modular_transpose_cloner
from .oracle import SamplerConfig, SamplingMode, mc_process_fidelity
from .qcore import MAX_DIM, ChannelChoi, DimensionError, DomainError

SCHEMA = 1
log = logging.getLogger("phaseclone")


class UsageError(Exception):
    pass


def _dims(text: str) -> list[int]:
    try:
        ds = sorted({int(tok) for tok in text.split(",") if tok.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}")
    if not ds:
        raise argparse.ArgumentTypeError("empty dimension list")
    return ds


def _check_dims(ds):
    for d in ds:
        if not 2 <= d <= MAX_DIM:
            raise DimensionError(f"dimension d={d} outside supported range 2..{MAX_DIM}")


FRACTION_KEYS = {"value", "closed_form", "modular_value", "direct_optimum", "ratio"}


def _fmt(v, key: str = "") -> str:
    if v is None:
        return "null"
    if isinstance(v, float) and key not in FRACTION_KEYS:
        return f"{v:.6g}"
    if isinstance(v, float):
        frac = Fraction(v).limit_denominator(1000)
        if abs(float(frac) - v) < 1e-9 and frac.denominator > 1:
            return f"{v:.6f} ({frac})"
        return f"{v:.6g}" if abs(v) < 1e-3 and v != 0 else f"{v:.6f}"
    return str(v)


def render(records: list[dict], fmt: str, columns: list[str]) -> str:
    if fmt == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in records:
        lines.append("| " + " | ".join(_fmt(r.get(k), k) for k in columns) + " |")
    return "\n".join(lines)


# table --------------------------------------------------------------------

def cmd_table(d_list, fmt: str, tol: float = 1e-8) -> tuple[list[dict], list[str]]:
    _check_dims(d_list)
    failures = []
    solved = {}
    rows = []
    for ref in reference_table(d_list):
        rec = {"schema": SCHEMA, "row": ref.label, "d": ref.d, "quantity": ref.quantity,
               "formula": ref.formula, "value": ref.value, "source": "cited",
               "citation": ref.citation}
        if ref.computed:
            if ref.d not in solved:
                res = sdp.solve_primal(sdp.SdpProblem.for_family(FAMILIES[MapKind.PHASE_CLONER], ref.d), tol)
                solved[ref.d] = res.value
            rec["value"] = solved[ref.d]
            rec["source"] = "computed"
            rec["closed_form"] = ref.value
            if abs(solved[ref.d] - ref.value) > 1e-6:
                failures.append(f"table: d={ref.d} computed {solved[ref.d]:.9f} != {ref.value:.9f}")
        rows.append(rec)
    return rows, failures


TABLE_COLUMNS = ["row", "d", "quantity", "formula", "value", "source", "citation"]

REPORT_FIELDS = ["schema", "problem", "d", "closed_form", "sdp_value", "gap", "primal_min_eig",
                 "dual_min_eig", "verdict", "mc_mean", "mc_stderr", "samples", "seed", "elapsed_ms"]


# solve --------------------------------------------------------------------

def _mc(E: ChannelChoi, kind: MapKind, samples: int, seed: int):
    mode = SamplingMode.HAAR_UNITARY if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER \
        else SamplingMode.PHASE_TORUS
    return mc_process_fidelity(E, kind, SamplerConfig(seed, samples, mode))


def mc_agrees(mean: float, stderr: float, target: float, k: float = 4.0) -> bool:
    # covariant channels give a constant integrand; 1e-12 absorbs rounding
    return abs(mean - target) <= max(k * stderr, 1e-12)


def cmd_solve(problem: str, d: int, tol: float = 1e-8, samples: int = 100_000,
              seed: int = 42) -> tuple[dict, list[str]]:
    t0 = time.perf_counter()
    try:
        kind = MapKind(problem)
    except ValueError:
        raise UsageError(f"unknown problem {problem!r}; choose from {[k.value for k in MapKind]}")
    _check_dims([d])
    failures = []
    notes = {}
    closed = closed_form_fidelity(kind, d)
    prob = sdp.SdpProblem.for_family(FAMILIES[kind], d)
    res = sdp.solve_primal(prob, tol)
    primal, dual, z = sdp.certificates_for(FAMILIES[kind], d)
    cert = sdp.verify_certificate(prob, primal, dual, z)
    failures += [f"certificate: {f}" for f in cert.failures]
    if abs(res.value - closed) > 1e-6:
        failures.append(f"sdp value {res.value:.10f} differs from closed form {closed:.10f}")
    if kind is MapKind.UNIVERSAL_TRANSPOSE_CLONER:
        lp = sdp.ew_linear_program(d)
        notes["lp_value"] = lp.value
        if abs(lp.value - closed) > 1e-12:
            failures.append("LP optimum differs from closed form")
    J = assemble(res.point)
    E = ChannelChoi(d, (d,) * (1 if kind is MapKind.PHASE_TRANSPOSE else 2), J, check=False)
    try:
        E.validate(1e-8)
    except DomainError as exc:
        failures.append(f"solver channel invalid: {exc}")
    analytic = process_fidelity_analytic(E, kind)
    mc_mean = mc_stderr = None
    if samples >= 2:
        mc_mean, mc_stderr = _mc(E, kind, samples, seed)
        if not mc_agrees(mc_mean, mc_stderr, analytic):
            failures.append(f"MC {mc_mean:.6f} +- {mc_stderr:.1e} deviates from {analytic:.6f} "
                            "by more than 4 stderr")
    else:
        notes["mc_mean"] = "MC skipped (samples < 2)"
    report = {
        "schema": SCHEMA, "problem": kind.value, "d": d, "closed_form": closed,
        "sdp_value": res.value, "gap": cert.gap, "primal_min_eig": cert.primal_min_eig,
        "dual_min_eig": cert.dual_min_eig, "verdict": cert.verdict, "mc_mean": mc_mean,
        "mc_stderr": mc_stderr, "samples": samples, "seed": seed,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
        "solver_dual_value": res.dual_value, "notes": notes, "failures": failures,
    }
    return report, failures


# compose ------------------------------------------------------------------

COMPOSE_FIELDS = ["schema", "problem", "d", "modular_value", "direct_optimum", "ratio",
                  "closed_form", "verdict", "mc_mean", "mc_stderr", "samples", "seed", "elapsed_ms"]


def cmd_compose(d: int, variant: str, samples: int = 100_000, seed: int = 42) -> tuple[dict, list[str]]:
    t0 = time.perf_counter()
    if variant not in ("cloner", "transpose-cloner"):
        raise UsageError(f"unknown variant {variant!r}; use 'cloner' or 'transpose-cloner'")
    _check_dims([d])
    rep = modular_report(d, variant)
    failures = []
    if not rep.matches_reference:
        failures.append(f"modular value {rep.modular:.10f} != reference (3d-4)/(d(d-1)(2d-1)) "
                        f"= {rep.reference:.10f}")
    mc_mean = mc_stderr = None
    notes = {}
    if samples >= 2:
        E = modular_cloner(d) if variant == "cloner" else modular_transpose_cloner(d)
        kind = MapKind.PHASE_CLONER if variant == "cloner" else MapKind.PHASE_TRANSPOSE_CLONER
        mc_mean, mc_stderr = _mc(E, kind, samples, seed)
        if not mc_agrees(mc_mean, mc_stderr, rep.modular):
            failures.append("MC estimate deviates from the link-product value")
    else:
        notes["mc_mean"] = "MC skipped (samples < 2)"
    report = {
        "schema": SCHEMA, "problem": f"modular-{variant}", "d": d, "modular_value": rep.modular,
        "direct_optimum": rep.direct_optimum, "ratio": rep.ratio, "closed_form": rep.reference,
        "verdict": "MATCH" if not failures else "MISMATCH", "mc_mean": mc_mean,
        "mc_stderr": mc_stderr, "samples": samples, "seed": seed,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3), "notes": notes,
        "failures": failures,
    }
    return report, failures


# entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phaseclone", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, d_list=False):
        if d_list:
            sp.add_argument("--d", type=_dims, default=[2, 3])
        else:
            sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--samples", type=int, default=100_000)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", choices=["markdown", "json", "csv"], default="markdown")

    common(sub.add_parser("table", help="reproduce the fidelity table"), d_list=True)
    s = sub.add_parser("solve", help="solve and certify one problem")
    common(s)
    s.add_argument("--problem", required=True)
    c = sub.add_parser("compose", help="evaluate a modular construction")
    common(c)
    c.add_argument("--variant", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        if args.command == "table":
            rows, failures = cmd_table(args.d, args.format, args.tol)
            if args.format == "json":
                out = json.dumps(rows, indent=2)
            else:
                out = render(rows, args.format, TABLE_COLUMNS)
        elif args.command == "solve":
            rep, failures = cmd_solve(args.problem, args.d, args.tol, args.samples, args.seed)
            out = render([rep], args.format, REPORT_FIELDS)
        else:
            rep, failures = cmd_compose(args.d, args.variant, args.samples, args.seed)
            out = render([rep], args.format, COMPOSE_FIELDS)
    except (UsageError, DimensionError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except sdp.InfeasibleError as exc:
        print(f"FAIL: infeasible: {exc}", file=sys.stderr)
        return 1
    print(out)
    for f in failures:
        print(f"FAIL: {f}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
