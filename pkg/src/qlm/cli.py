"""Command-line surface: build models, verify, mine relations.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 degenerate sampling.  Given the same flags, every command produces
byte-identical output; reports carry no timestamps or timings.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .casemodels import build_model
from .checks import VerifyConfig, run_checks
from .geomclass import certify_lci, eliminate_and_cone
from .involution import build_fixed_model, sigma_action_on_generators
from .quiverext import CaseId
from .exactpoly import DomainError, StructuralError
from .relminer import (
    CASE_WEIGHT_BOUND,
    DEFAULT_ENTRY_BOUND,
    DEFAULT_SEED,
    DegenerateSamplingError,
    MINABLE_CASES,
    SampleScheme,
    certificate_path,
    mine_for_case,
    write_certificate,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

DEFAULT_SAMPLES = 200
DEFAULT_WEIGHT_BOUND = 12

CASE_NAMES = [c.value for c in CaseId]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlm",
        description=(
            "Exact local models of the rank-3 moduli space on a genus-2 curve "
            "and of the branch sextic of its theta map."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, weight_default: int | None = DEFAULT_WEIGHT_BOUND) -> None:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument(
            "--max-weight",
            type=int,
            default=weight_default,
            help="weighted-degree bound (mine: defaults to the case's own relation weight)",
        )
        p.add_argument("--entry-bound", type=int, default=DEFAULT_ENTRY_BOUND)
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--out", type=Path, default=None, help="also write the report to this file")

    p_model = sub.add_parser("model", help="build one local model with its classification")
    p_model.add_argument("--case", choices=CASE_NAMES, required=True)
    p_model.add_argument("--fixed-locus", action="store_true")
    common(p_model)

    p_verify = sub.add_parser("verify", help="run the verification suites")
    group = p_verify.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="run every check (default)")
    group.add_argument("--case", choices=CASE_NAMES, default=None)
    common(p_verify)

    p_mine = sub.add_parser("mine", help="mine a relation certificate")
    p_mine.add_argument("--case", choices=[c.value for c in MINABLE_CASES], required=True)
    common(p_mine, weight_default=None)
    return parser


def _emit(document: dict, text: str, fmt: str, out: Path | None) -> None:
    payload = json.dumps(document, indent=2) + "\n" if fmt == "json" else text
    sys.stdout.write(payload)
    if out is not None:
        out.write_text(payload, encoding="utf-8")


def _model_text(doc: dict) -> str:
    lines = [f"case: {doc['case']}" + (" (fixed locus)" if doc["fixed_locus"] else "")]
    model = doc["model"]
    lines.append(f"ambient dimension: {model['ambient_dim']}")
    lines.append(f"expected dimension: {model['expected_dim']}")
    lines.append("coordinates:")
    for c in model["coordinates"]:
        definition = f" = {c['definition']}" if "definition" in c else " (free)"
        lines.append(f"  {c['name']} (weight {c['weight']}){definition}")
    lines.append("equations:")
    for eq in model["equations"] or ["(none)"]:
        lines.append(f"  {eq} = 0" if eq != "(none)" else "  (none)")
    cone = doc["cone"]
    rank = f", rank {cone['rank']}" if "rank" in cone else ""
    lines.append(f"tangent cone: {cone['kind']}{rank} in dimension {cone['ambient_dim']}")
    for eq in cone["cone_equations"]:
        lines.append(f"  cone equation: {eq} = 0")
    lci = doc["lci"]
    lines.append(
        f"lci certificate: jacobian rank {lci['jacobian_rank']}, dim {lci['dim']}, "
        f"is_lci {str(lci['is_lci']).lower()}"
    )
    return "\n".join(lines) + "\n"


def cmd_model(args: argparse.Namespace) -> int:
    case = CaseId(args.case)
    if args.fixed_locus and case is CaseId.STABLE:
        print("error: the stable case has no fixed-locus model", file=sys.stderr)
        return EXIT_USAGE
    try:
        model = build_model(case)
        if args.fixed_locus:
            model = build_fixed_model(case, model)
        cone = eliminate_and_cone(model)
        cert = certify_lci(model, SampleScheme(args.seed, args.samples, args.entry_bound))
    except (DomainError, StructuralError, ValueError) as err:
        # e.g. a corrupted or tampered cached relation certificate
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    doc = {
        "command": "model",
        "case": case.value,
        "fixed_locus": bool(args.fixed_locus),
        "seed": args.seed,
        "model": model.to_json(),
        "cone": cone.to_json(),
        "lci": cert.to_json(),
    }
    _emit(doc, _model_text(doc), args.format, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cases = None if (args.all or args.case is None) else [args.case]
    config = VerifyConfig(
        seed=args.seed,
        samples=args.samples,
        weight_bound=args.max_weight,
        entry_bound=args.entry_bound,
    )
    results = run_checks(config, cases=cases)
    failures = [r for r in results if not r.passed]
    doc = {
        "command": "verify",
        "seed": args.seed,
        "samples": args.samples,
        "weight_bound": args.max_weight,
        "cases": cases or "all",
        "checks": [
            {
                "id": r.check_id,
                "name": r.name,
                "case": r.case,
                "passed": r.passed,
                "detail": r.detail,
            }
            for r in results
        ],
        "total": len(results),
        "failed": len(failures),
        "passed": not failures,
    }
    text_lines = [r.line() for r in results]
    text_lines.append(f"{len(results) - len(failures)}/{len(results)} checks passed")
    if failures:
        text_lines.append(f"first failure: {failures[0].check_id}: {failures[0].detail}")
    _emit(doc, "\n".join(text_lines) + "\n", args.format, args.out)
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


def cmd_mine(args: argparse.Namespace) -> int:
    case = CaseId(args.case)
    weight_bound = args.max_weight if args.max_weight is not None else CASE_WEIGHT_BOUND[case]
    try:
        cert = mine_for_case(
            case,
            weight_bound=weight_bound,
            seed=args.seed,
            count=args.samples,
            entry_bound=args.entry_bound,
            residual_samples=args.samples,
        )
    except DegenerateSamplingError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    path = args.out or certificate_path(case, weight_bound, args.seed)
    write_certificate(cert, path)
    if args.format == "text":
        relations = cert.relation_polynomials()
        lines = [
            f"case: {case.value}",
            f"weight bound: {weight_bound}, seed: {args.seed}, samples: {cert.count}",
            f"nullspace dimension: {len(cert.nullspace)}",
        ]
        lines += [f"relation: {rel} = 0" for rel in relations]
        lines.append(f"certificate written to {path}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(json.dumps(cert.to_json(), indent=2) + "\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses code 2 for usage errors already
        return int(exc.code or 0)
    if args.command == "model":
        return cmd_model(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "mine":
        return cmd_mine(args)
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
