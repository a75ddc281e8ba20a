"""Command-line front end.

Exit codes: 0 success (and certificate pass with --verify), 1 validation
error, 2 steering stuck, 3 certificate failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bundle import build_bundle, exceptional_pipeline, is_conj_closed, symmetrize
from .errors import NotConjClosed, SteeringStuck, ValidationError, ValidationErrors
from .io import (
    dumps,
    load_problem,
    problem_specs,
    report_to_json,
    series_to_json,
    stagelog_to_json,
    validate,
)
from .verify import check_all

EXIT_OK, EXIT_INVALID, EXIT_STUCK, EXIT_CERT = 0, 1, 2, 3


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="exset",
        description="Build entire functions with prescribed values and exceptional sets, exactly.",
    )
    ap.add_argument("--input", required=True, type=Path, help="problem file (JSON)")
    ap.add_argument("--out", required=True, type=Path, help="output directory")
    ap.add_argument("--seed", type=_u64, help="override the problem's seed")
    ap.add_argument("--stages", type=int, help="number of f* stages (must match the full-support points)")
    ap.add_argument("--degree", type=int, help="truncation degree D of the emitted prefix")
    ap.add_argument("--precision", type=int, help="maximum bits for interval certification")
    ap.add_argument("--mode", choices=("prescribe", "exceptional"), help="override the problem's mode")
    ap.add_argument("--verify", action="store_true", help="run all checks and write certificate.json")
    ap.add_argument("--emit-psi", action="store_true", help="write psi.json with the symmetrized function")
    return ap


def _fail(code: int, exc: BaseException) -> int:
    print(str(exc), file=sys.stderr)
    return code


def run_cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load_problem(args.input)
        if args.mode is not None and args.mode != problem.mode:
            raise ValidationErrors([ValidationError(f"file mode is {problem.mode!r}, flag says {args.mode!r}")])
        if args.seed is not None:
            problem.seed = args.seed
        if args.stages is not None:
            problem.stages = args.stages
        if args.degree is not None:
            problem.degree = args.degree
        if args.precision is not None:
            problem.precision = args.precision
        errors = validate(problem)
        if errors:
            raise ValidationErrors(errors)
    except ValidationError as exc:
        return _fail(EXIT_INVALID, exc)
    except OSError as exc:
        return _fail(EXIT_INVALID, exc)

    kwargs = dict(policy=problem.policy, p_max=problem.precision)
    pipeline = None
    try:
        if problem.mode == "exceptional":
            pipeline = exceptional_pipeline(
                problem.s_points(), problem.v_points(), problem.variables, problem.seed, problem.degree, **kwargs
            )
            bundle = pipeline.bundle
            psi = pipeline.psi
        else:
            bundle = build_bundle(problem.variables, problem_specs(problem), problem.seed, problem.degree, **kwargs)
            psi = None
            if args.emit_psi:
                if not is_conj_closed(bundle.values):
                    raise NotConjClosed("--emit-psi needs a conjugation-closed point set")
                psi = symmetrize(bundle)
    except SteeringStuck as exc:
        return _fail(EXIT_STUCK, exc)
    except ValidationError as exc:
        return _fail(EXIT_INVALID, exc)

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    meta = {"seed": problem.seed, "policy": problem.policy.value}
    (out / "series.json").write_text(dumps(series_to_json(bundle.prefix(), bundle.degree, **meta)))
    (out / "stagelog.json").write_text(dumps(stagelog_to_json(bundle)))
    (out / "report.json").write_text(dumps(report_to_json(problem, bundle, pipeline)))
    if args.emit_psi and psi is not None:
        (out / "psi.json").write_text(dumps(psi.to_json()))
    if args.verify:
        cert = check_all(pipeline if pipeline is not None else bundle)
        (out / "certificate.json").write_text(dumps(cert.to_json()))
        if not cert.passed:
            print("certificate failed: " + ", ".join(cert.failed()), file=sys.stderr)
            return EXIT_CERT
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
