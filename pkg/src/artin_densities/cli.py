"""Command line: ``density``, ``verify`` and ``sweep``.

Exit codes: 0 success, 2 invalid input, 3 internal-consistency failure
(closed form and engine disagree), 4 level budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from importlib import resources
from typing import Iterable, List, Optional, Sequence

from . import densities
from .finite_model import EngineResult, LevelBudgetExceeded, LevelNotStable, evaluate
from .problem import InvalidSpec, ProblemSpec, parse_rational
from .sieve_verify import SieveConfig, run_experiment

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INVALID, EXIT_INCONSISTENT, EXIT_BUDGET = 0, 2, 3, 4
CSV_COLUMNS = ["r", "a", "f", "t", "kind", "coefficient", "density", "correction",
               "vanishes", "cause", "provenance"]


class Inconsistent(RuntimeError):
    pass


def load_schema() -> dict:
    text = resources.files("artin_densities").joinpath("schema/report-v1.json").read_text()
    return json.loads(text)


def make_spec(r, a=None, f=None, t=1) -> ProblemSpec:
    spec = ProblemSpec(parse_rational(r), a, f, t)
    if spec.kind == "combined" and spec.f % spec.t:
        raise InvalidSpec(f"combined problems need t | f (t={spec.t}, f={spec.f})")
    return spec


def _correction(spec: ProblemSpec) -> Optional[Fraction]:
    kind = spec.kind
    try:
        if kind == "artin":
            return densities.artin_correction(spec.r)
        if kind == "progression":
            return densities.ap_correction(spec.r, spec.a, spec.f)
        if kind == "near":
            return densities.near_correction(spec.r, spec.t)
    except ValueError:
        return None
    return None


def _json_float(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def build_report(spec: ProblemSpec, command: str, check_oracle: bool = False, empirical=None) -> dict:
    """Evaluate a spec along the applicable paths and assemble the report dict."""
    closed = densities.closed_form(spec)
    engine: Optional[EngineResult] = None
    if closed is None or check_oracle:
        if spec.kind == "combined" and spec.a % spec.t != 1 % spec.t:
            density, verdict = densities.generic_density(spec)
        else:
            engine = evaluate(spec)
    if closed is not None and engine is not None and closed[0] != engine.density:
        raise Inconsistent(f"closed form {closed[0]!r} != engine {engine.density!r} for {spec}")

    if closed is not None:
        density, verdict = closed
        correction = _correction(spec)
        provenance = "both-agree" if engine is not None else "closed-form"
    elif engine is not None:
        density, verdict, correction = engine.density, engine.verdict, engine.correction
        provenance = "engine"
    else:
        correction, provenance = None, "engine"

    local = []
    if engine is not None:
        local = [{"p": l.p, "nu": str(l.nu), "E": None if l.E is None else str(l.E), "level": l.level}
                 for l in engine.locals]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "spec": spec.as_dict(),
        "kind": spec.kind,
        "coefficient": str(density.coeff),
        "artin_multiple": str(density.artin_multiple),
        "excluded_tail_primes": list(density.excluded_tail_primes),
        "density": float(density),
        "correction": None if correction is None else {"exact": str(correction), "float": float(correction)},
        "verdict": {"vanishes": verdict.vanishes, "cause": verdict.cause},
        "local_factors": local,
        "provenance": provenance,
        "empirical": empirical,
    }


def render_table(report: dict) -> str:
    """Human-readable rendering; a pure function of the JSON report."""
    spec = report["spec"]
    rows = [
        ("r", spec["r"]),
        ("progression", "-" if spec["f"] is None else f"{spec['a']} mod {spec['f']}"),
        ("index t", str(spec["t"])),
        ("problem", report["kind"]),
        ("density", f"{report['artin_multiple']} * A = {report['density']:.7f}"),
        ("correction E", "-" if report["correction"] is None
         else f"{report['correction']['exact']} ({report['correction']['float']:.6f})"),
        ("vanishes", f"{report['verdict']['vanishes']} ({report['verdict']['cause']})"),
        ("provenance", report["provenance"]),
    ]
    emp = report["empirical"]
    if emp:
        rows += [
            ("bound", str(emp["bound"])),
            ("primes considered", str(emp["primes_considered"])),
            ("matching", str(emp["matching"])),
            ("observed", f"{emp['observed']:.6f}"),
            ("deviation", f"{emp['deviation']:+.6f}"),
            ("z-score", "-" if emp["z_score"] is None else f"{emp['z_score']:+.2f}"),
        ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    if report["local_factors"]:
        lines.append("")
        lines.append(f"{'p'.rjust(4)}  {'nu_p'.ljust(14)}  {'E_p'.ljust(10)}  level")
        for lf in report["local_factors"]:
            lines.append(f"{lf['p']:>4}  {lf['nu']:<14}  {str(lf['E']):<10}  {lf['level']}")
    return "\n".join(lines)


def cmd_density(args) -> dict:
    spec = make_spec(args.r, args.a, args.f, args.t)
    return build_report(spec, "density", check_oracle=args.check_oracle)


def cmd_verify(args) -> dict:
    spec = make_spec(args.r, args.a, args.f, args.t)
    report = build_report(spec, "verify", check_oracle=True)
    config = SieveConfig(args.bound, args.segment_size, args.workers)
    rep = run_experiment(spec, config, predicted=report["density"])
    report["empirical"] = {
        "bound": rep.bound,
        "primes_considered": rep.primes_considered,
        "matching": rep.matching,
        "excluded": rep.excluded,
        "observed": rep.observed,
        "predicted": rep.predicted,
        "deviation": rep.deviation,
        "binomial_se": _json_float(rep.binomial_se),
        "z_score": _json_float(rep.z_score),
    }
    return report


def sweep_specs(r_values: Sequence[Fraction], f_max: int, t_max: int) -> Iterable[ProblemSpec]:
    for r in r_values:
        for f in range(1, f_max + 1):
            for a in range(f):
                if math.gcd(a, f) != 1:
                    continue
                for t in range(1, t_max + 1):
                    if f > 1 and t > 1 and (f % t or a % t != 1 % t):
                        continue
                    yield ProblemSpec(r, a if f > 1 else None, f if f > 1 else None, t)


def cmd_sweep(args) -> Iterable[dict]:
    r_values = [parse_rational(x) for x in args.r_list.split(",") if x.strip()]
    for spec in sweep_specs(r_values, args.f_max, args.t_max):
        yield build_report(spec, "sweep", check_oracle=True)


def _csv_row(report: dict) -> dict:
    spec = report["spec"]
    corr = report["correction"]
    return {
        "r": spec["r"], "a": "" if spec["a"] is None else spec["a"],
        "f": "" if spec["f"] is None else spec["f"], "t": spec["t"],
        "kind": report["kind"], "coefficient": report["artin_multiple"],
        "density": f"{report['density']:.10f}", "correction": "" if corr is None else corr["exact"],
        "vanishes": int(report["verdict"]["vanishes"]), "cause": report["verdict"]["cause"],
        "provenance": report["provenance"],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artin-densities", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_flags(p, r_required=True):
        p.add_argument("--r", required=r_required, help="rational r as p/q or an integer (use --r=-9/4 for negative fractions)")
        p.add_argument("--a", type=int, help="residue of the progression")
        p.add_argument("--f", type=int, help="modulus of the progression")
        p.add_argument("--t", type=int, default=1, help="exact index (default 1)")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("density", help="exact density")
    spec_flags(p)
    p.add_argument("--check-oracle", action="store_true", help="also run the finite-level engine")
    p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("verify", help="compare with prime counts up to a bound")
    spec_flags(p)
    p.add_argument("--bound", type=int, default=10**6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--segment-size", type=int, default=1 << 20)
    p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("sweep", help="cross-product sweep with closed form / engine agreement")
    p.add_argument("--r-list", default="", help="comma-separated rationals (use --r-list=-4,-64)")
    p.add_argument("--f-max", type=int, default=1)
    p.add_argument("--t-max", type=int, default=1)
    p.add_argument("--format", choices=["csv", "jsonl"], default="jsonl")
    p.add_argument("--out")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.command == "sweep":
            return _run_sweep(args, out)
        report = cmd_density(args) if args.command == "density" else cmd_verify(args)
        if args.format == "table":
            out.write(render_table(report) + "\n")
        else:
            out.write(json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    except (InvalidSpec, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (Inconsistent, LevelNotStable) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except LevelBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    finally:
        if out is not sys.stdout:
            out.close()


def _run_sweep(args, out) -> int:
    writer = None
    if args.format == "csv":
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
    status = EXIT_OK
    reports = cmd_sweep(args)
    while True:
        try:
            report = next(reports)
        except StopIteration:
            break
        except Inconsistent as exc:
            print(f"internal inconsistency: {exc}", file=sys.stderr)
            status = EXIT_INCONSISTENT
            continue
        if writer:
            writer.writerow(_csv_row(report))
        else:
            out.write(json.dumps(report) + "\n")
    return status
