"""Command-line driver: check, product, enumerate, verify, run-ga.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 usage or input error. All file outputs carry a format_version field
and are byte-stable for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .census import run_census
from .constructions import (
    DEFAULT_TABLE_CAP,
    ProductShape,
    parse_structure_spec,
    tuple_carrier,
)
from .engine import parse_experiment_config, run_experiment
from .errors import CapacityError, ParseError, ValidationError
from .tables import (
    NGroupoid,
    is_associative,
    is_genetic,
    is_idempotent,
    is_nowhere_commutative,
    is_rectangular_band,
    ngroupoid_from_json,
    ngroupoid_to_json,
)
from .theorems import (
    TheoremReport,
    verify_lemma1,
    verify_not_variety,
    verify_theorem1,
    verify_theorem2,
)

FORMAT_VERSION = 1


def _load_source(text: str) -> NGroupoid:
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            with open(path, encoding="utf-8") as fh:
                return ngroupoid_from_json(json.load(fh))
        except OSError as exc:
            raise ParseError(f"cannot read {text}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{text} is not valid JSON: {exc}") from exc
    return parse_structure_spec(text)


def _emit(payload: dict, text: str, fmt: str, out: str | None, csv_lines=None) -> None:
    if fmt == "json":
        rendered = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if csv_lines is None:
            raise ValidationError("csv output is not defined for this command")
        rendered = "\n".join(csv_lines) + "\n"
    else:
        rendered = text + "\n"
    if out:
        Path(out).write_text(rendered, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(rendered)


def cmd_check(args: argparse.Namespace) -> int:
    ng = _load_source(args.source)
    per_op = []
    for i in range(ng.n_ops):
        g = ng.op(i)
        per_op.append(
            {
                "idempotent": is_idempotent(g),
                "nowhere_commutative": is_nowhere_commutative(g),
                "genetic": is_genetic(g),
                "associative": is_associative(g),
                "rectangular_band": is_rectangular_band(g),
            }
        )
    payload = {
        "format_version": FORMAT_VERSION,
        "source": args.source,
        "order": ng.order,
        "n_ops": ng.n_ops,
        "operations": per_op,
        "all_ops_genetic": all(p["genetic"] for p in per_op) if per_op else True,
    }
    lines = [f"source: {args.source}", f"order: {ng.order}  operations: {ng.n_ops}"]
    for i, p in enumerate(per_op):
        lines.append(
            f"op {i + 1}: "
            + "  ".join(f"{key}: {str(val).lower()}" for key, val in p.items())
        )
    if ng.n_ops != 1:
        lines.append(f"all operations genetic: {str(payload['all_ops_genetic']).lower()}")
    _emit(payload, "\n".join(lines), args.format, args.out)
    return 0


def cmd_product(args: argparse.Namespace) -> int:
    factors = [parse_structure_spec(s) for s in args.factors]
    shape = ProductShape(tuple(factors))
    product = shape.materialize(cap=args.cap)
    payload = {"format_version": FORMAT_VERSION, **ngroupoid_to_json(product)}
    lines = [
        f"product of {len(factors)} factor(s): carrier {product.order}, "
        f"{product.n_ops} operations",
        "carrier tuples: "
        + " ".join(
            "(" + ",".join(str(v) for v in point) + ")"
            for point in tuple_carrier(shape.factor_orders)
        ),
    ]
    _emit(payload, "\n".join(lines), args.format, args.out)
    if args.out:
        sidecar = Path(args.out).with_suffix(".shape.json")
        sidecar.write_text(
            json.dumps(
                {"format_version": FORMAT_VERSION, "shape": shape.describe()},
                indent=2,
                sort_keys=True,
            )
            + "\n",
            encoding="utf-8",
        )
        print(f"wrote {sidecar}")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    from .tables import serialize_compact3

    report = run_census(args.order, jobs=args.jobs)
    payload = {"format_version": FORMAT_VERSION, **report.to_json(include_tables=args.order <= 3 or args.format == "json")}
    csv_lines = [f"# format_version={FORMAT_VERSION}", "representative,orbit_size,associative"]
    for rep, orbit in report.classes:
        tag = (
            serialize_compact3(rep)
            if report.order == 3
            else "".join(str(v) for row in rep.table for v in row)
        )
        csv_lines.append(f"{tag},{orbit},{str(is_associative(rep)).lower()}")
    _emit(payload, report.summary_text(), args.format, args.out, csv_lines)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    runners = {
        "theorem1": verify_theorem1,
        "theorem2": verify_theorem2,
        "lemma1": verify_lemma1,
        "not-variety": verify_not_variety,
    }
    targets = list(runners) if args.target == "all" else [args.target]
    reports: list[TheoremReport] = []
    for t in targets:
        try:
            reports.append(runners[t]())
        except CapacityError as exc:
            skipped = TheoremReport(t)
            skipped.add("capacity", "SKIPPED", str(exc))
            reports.append(skipped)
    payload = {
        "format_version": FORMAT_VERSION,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_json() for r in reports],
    }
    text = "\n\n".join(r.summary_text() for r in reports)
    csv_lines = [f"# format_version={FORMAT_VERSION}", "theorem,check,status,detail"]
    for r in reports:
        for c in r.checks:
            detail = c.detail.replace('"', "'")
            csv_lines.append(f'{r.theorem},{c.name},{c.status},"{detail}"')
    _emit(payload, text, args.format, args.out, csv_lines)
    return 0 if payload["passed"] else 1


def cmd_run_ga(args: argparse.Namespace) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {args.config} is not valid JSON: {exc}") from exc
    if args.seed is not None:
        raw.pop("seeds", None)
        raw["seed"] = args.seed
    config = parse_experiment_config(raw)
    report = run_experiment(config, jobs=args.jobs)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    csv_path = out_dir / "curves.csv"
    fig_path = out_dir / "convergence.png"
    report_path.write_text(
        json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    report.write_csv(csv_path)
    from .plots import render_convergence

    render_convergence(report, fig_path)
    for name in report.family_names():
        runs = report.runs_for(name)
        reached = sum(1 for r in runs if r.reached)
        print(
            f"{name}: {reached}/{len(runs)} seeds reached the target "
            f"(success rate {report.success_rate(name):.2f})"
        )
    print(f"wrote {report_path}, {csv_path}, {fig_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupoid-ga",
        description="Finite genetic-groupoid toolkit and groupoid-crossover GA engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="report the defining predicates of a groupoid")
    p.add_argument("source", help="JSON file, compact ijk/xyz, GA(n; d1,...), band:n,m, or bare:d")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("product", help="materialize a genetic product chain")
    p.add_argument("factors", nargs="+", help="factor specs, left to right")
    p.add_argument("--cap", type=int, default=DEFAULT_TABLE_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("enumerate", help="census of genetic groupoids of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="machine-check the structural claims")
    p.add_argument(
        "target", choices=("theorem1", "theorem2", "lemma1", "not-variety", "all")
    )
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run-ga", help="run a configured experiment, write reports")
    p.add_argument("config", help="JSON experiment configuration")
    p.add_argument("--out", default="ga-report", help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="override the config seeds")
    p.set_defaults(func=cmd_run_ga)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
