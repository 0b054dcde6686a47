"""Command-line front end.

    weakframe validate SPEC
    weakframe classify SPEC
    weakframe check SPEC --theorem ID|all
    weakframe example NAME [--param k=v ...] [--emit PATH]

Exit codes: 0 every counted identity passes, 1 a check fails, 2 the spec is
malformed, 3 an expression could not be evaluated (domain error or singular
matrix).
"""

from __future__ import annotations

import argparse
import sys

from .catalog import CATALOG_NAMES, get_example
from .expr import DomainError
from .linalg import SingularMatrixError
from .report import axioms_result, render_checks_text, render_class_text, render_json
from .sampling import sample_points
from .specfile import SpecError, StructureSpec
from .structure import InvalidStructureError, Sweep, validate_axioms
from .theorems import CHECK_IDS, CHECKS, get_check

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_DOMAIN = 0, 1, 2, 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", help="structure spec (JSON)")
    p.add_argument("--samples", type=int, default=100, help="number of sample points (default 100)")
    p.add_argument("--seed", type=int, default=42, help="sampling seed (default 42)")
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    p.add_argument("--report", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakframe", description="Verify metric weak f-structures numerically.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("validate", help="check the structure axioms"))
    _add_common(sub.add_parser("classify", help="report the structure class"))
    p = sub.add_parser("check", help="run theorem checks")
    _add_common(p)
    p.add_argument("--theorem", default="all", choices=CHECK_IDS + ("all",), help="check id or all")
    p = sub.add_parser("example", help="emit a catalog structure as a spec")
    p.add_argument("name", choices=CATALOG_NAMES + ("euclid-weak-C-torus",))
    p.add_argument("--param", action="append", default=[], metavar="K=V", help="n, p, lam (comma list), torus")
    p.add_argument("--emit", metavar="PATH", help="write the spec here instead of stdout")
    return parser


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"parameter {item!r} is not of the form k=v")
        key = key.strip()
        if key in ("n", "p"):
            out[key] = int(val)
        elif key == "lam":
            out[key] = [float(v) for v in val.split(",")]
        elif key == "torus":
            out[key] = val.strip().lower() in ("1", "true", "yes")
        else:
            raise ValueError(f"unknown parameter {key!r}")
    return out


def _sweep(args) -> Sweep:
    spec = StructureSpec.load(args.spec)
    S = spec.build(args.spec)
    if args.samples < 1:
        raise SpecError("--samples must be positive")
    return Sweep(S, sample_points(S.box, args.samples, args.seed), args.tol)


def _header(args, sw: Sweep) -> dict:
    return {
        "spec": sw.S.name,
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
    }


def _emit(text: str, out) -> None:
    out.write(text)


def cmd_validate(args, out) -> int:
    sw = _sweep(args)
    res = axioms_result(validate_axioms(sw.S, sweep=sw))
    if args.report == "json":
        _emit(render_json({**_header(args, sw), "pass": res.passed, "checks": [res.to_dict()]}), out)
    else:
        _emit(render_checks_text([res]), out)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_classify(args, out) -> int:
    sw = _sweep(args)
    try:
        cls = sw.classification
    except InvalidStructureError as exc:
        res = axioms_result(exc.reports)
        if args.report == "json":
            doc = {**_header(args, sw), "valid_metric_weak_f": False, "description": str(exc), "checks": [res.to_dict()]}
            _emit(render_json(doc), out)
        else:
            _emit("not a valid metric weak f-structure\n" + render_checks_text([res]), out)
        return EXIT_FAIL
    if args.report == "json":
        _emit(render_json({**_header(args, sw), "description": cls.describe(), **cls.to_dict()}), out)
    else:
        _emit(render_class_text(cls), out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    sw = _sweep(args)
    ids = CHECK_IDS if args.theorem == "all" else (get_check(args.theorem).id,)
    try:
        results = [CHECKS[i].run(sw) for i in ids]
    except InvalidStructureError as exc:
        res = axioms_result(exc.reports)
        if args.report == "json":
            _emit(render_json({**_header(args, sw), "pass": False, "checks": [res.to_dict()]}), out)
        else:
            _emit("not a valid metric weak f-structure\n" + render_checks_text([res]), out)
        return EXIT_FAIL
    ok = all(r.passed for r in results)
    if args.report == "json":
        _emit(render_json({**_header(args, sw), "pass": ok, "checks": [r.to_dict() for r in results]}), out)
    else:
        _emit(render_checks_text(results), out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example(args, out) -> int:
    try:
        spec = get_example(args.name, **_parse_params(args.param))
    except ValueError as exc:
        raise SpecError(str(exc), "param") from None
    if args.emit:
        spec.dump(args.emit)
    else:
        _emit(spec.to_json(), out)
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "classify": cmd_classify, "check": cmd_check, "example": cmd_example}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except SpecError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SPEC
    except (DomainError, SingularMatrixError, FloatingPointError) as exc:
        err.write(f"evaluation error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
