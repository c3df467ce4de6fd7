"""Batch command-line interface: JSON in, JSON out.

Commands:
  classify    CurvatureModel JSON -> per-k ClassificationReport JSON
  verify      suite config JSON / flags -> identity suite report JSON
  decompose   DoubleForm JSON -> Decomposition JSON (with round-trip residual)
  constants   {n, p} -> the hyper-trace identity constant c(n,p)

Exit codes: 0 success (verify: all pass), 1 identity failure,
2 malformed input JSON, 3 invalid input (bad curvature, bad config values).

No numerical logic lives here; every command is a thin shell over the
library.  Passing --figures DIR additionally renders a CSV table and
matplotlib figures for the report into DIR.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import basis, classify, decomposition as dcmp, forms, identities, models, variation

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3

NCAP_ENV = "THORPE_LAB_NCAP"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_payload(args) -> object:
    if args.json_inline is not None and args.input is not None:
        raise CliError("pass either --input or --json-inline, not both", EXIT_PARSE)
    try:
        if args.json_inline is not None:
            return json.loads(args.json_inline)
        if args.input is not None:
            with open(args.input) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot parse input JSON: {exc}", EXIT_PARSE) from exc


def _dump(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise CliError(f"bad --seeds list {text!r}", EXIT_INVALID) from exc


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise CliError(f"bad {flag} list {text!r}", EXIT_INVALID) from exc


def cmd_classify(args) -> int:
    payload = _load_payload(args)
    try:
        model = models.model_from_dict(payload)
        R = models.realize(model)
        tol = args.tolerance if args.tolerance is not None else classify.DEFAULT_TOL
        if tol <= 0:
            raise CliError("tolerance must be positive", EXIT_INVALID)
        reports = classify.classification_report(R, tol=tol)
    except models.InvalidCurvatureError as exc:
        raise CliError(f"invalid curvature model: {exc}", EXIT_INVALID) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"bad model payload: {exc}", EXIT_INVALID) from exc
    out = {
        "model": models.model_to_dict(model),
        "n": R.n,
        "first_bianchi_residual": models.first_bianchi_residual(R),
        "scalar_curvature": models.scalar_curvature(R),
        "reports": [r.to_dict() for r in reports],
    }
    _dump(out, args)
    if args.figures:
        from . import report

        report.write_classification_outputs(reports, args.figures)
    return EXIT_OK


def cmd_verify(args) -> int:
    overrides = {}
    if args.input is not None or args.json_inline is not None:
        payload = _load_payload(args)
        if not isinstance(payload, dict):
            raise CliError("verify config must be a JSON object", EXIT_PARSE)
        overrides = payload
    cfg = identities.SuiteConfig()
    n_values = tuple(overrides.get("n_values", cfg.n_values))
    p_values = tuple(overrides.get("p_values", cfg.p_values))
    seeds = tuple(overrides.get("seeds", cfg.seeds))
    tolerance = overrides.get("tolerance", cfg.tolerance)
    fd_tolerance = overrides.get("fd_tolerance", cfg.fd_tolerance)
    only = overrides.get("only")

    if args.n is not None:
        n_values = _parse_int_list(args.n, "--n")
    if args.p is not None:
        p_values = _parse_int_list(args.p, "--p")
    if args.seeds is not None:
        seeds = _parse_seeds(args.seeds)
    if args.tolerance is not None:
        tolerance = args.tolerance
    if args.only is not None:
        only = args.only

    if tolerance <= 0:
        raise CliError("tolerance must be positive", EXIT_INVALID)
    if only is not None:
        unknown = [name for name in only if name not in identities.REGISTRY]
        if unknown:
            raise CliError(f"unknown identities {unknown}", EXIT_INVALID)
        only = tuple(only)
    config = identities.SuiteConfig(
        n_values=n_values,
        p_values=p_values,
        seeds=seeds,
        tolerance=float(tolerance),
        fd_tolerance=float(fd_tolerance),
        only=only,
    )
    try:
        suite = identities.run_suite(config)
    except ValueError as exc:
        raise CliError(f"invalid suite configuration: {exc}", EXIT_INVALID) from exc
    _dump(suite.to_dict(), args)
    if args.figures:
        from . import report

        report.write_suite_outputs(suite, args.figures)
    return EXIT_OK if suite.all_pass else EXIT_FAILURE


def cmd_decompose(args) -> int:
    payload = _load_payload(args)
    try:
        form = forms.DoubleForm.from_dict(payload)
        d = dcmp.decompose(form)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"bad double-form payload: {exc}", EXIT_INVALID) from exc
    rec = dcmp.reconstruct(d)
    resid = (rec - form).norm() / max(form.norm(), 1.0)
    vanish = dcmp.component_vanishing_report(form)
    out = d.to_dict()
    out["roundtrip_residual"] = resid
    out["component_norms"] = d.component_norms()
    out["vanishing"] = {
        "flags": list(vanish.vanishes),
        "degenerate": vanish.degenerate,
        "contraction_agrees": list(vanish.contraction_agrees),
    }
    _dump(out, args)
    if args.figures:
        from . import report

        report.write_decomposition_outputs(d, resid, args.figures)
    return EXIT_OK


def cmd_constants(args) -> int:
    if args.n is not None and args.p is not None:
        pairs = [(int(n), int(p)) for n in _parse_int_list(args.n, "--n")
                 for p in _parse_int_list(args.p, "--p")]
    else:
        payload = _load_payload(args)
        if isinstance(payload, dict):
            payload = [payload]
        try:
            pairs = [(int(item["n"]), int(item["p"])) for item in payload]
        except (KeyError, TypeError) as exc:
            raise CliError(
                "constants input must be {'n':..,'p':..} objects or --n/--p flags",
                EXIT_PARSE,
            ) from exc
    values = []
    for n, p in pairs:
        try:
            values.append({"n": n, "p": p, "c": identities.derive_c_constant(n, p)})
        except classify.WrongRegimeError as exc:
            raise CliError(str(exc), EXIT_INVALID) from exc
    _dump({"constants": values}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thorpe-lab",
        description="Double-form curvature identities and Thorpe-type classification.",
    )
    parser.add_argument("--n-cap", type=int, default=None,
                        help=f"ambient dimension guard (default 16; env {NCAP_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="path to input JSON (default: stdin)")
        p.add_argument("--json-inline", help="inline JSON payload")
        p.add_argument("--output", help="path for output JSON (default: stdout)")
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--figures", metavar="DIR",
                       help="also render CSV and figure files into DIR")

    p_classify = sub.add_parser("classify", help="classify a curvature model")
    common(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_verify = sub.add_parser("verify", help="run the identity suite")
    common(p_verify)
    p_verify.add_argument("--only", nargs="+", help="registry identities to run")
    p_verify.add_argument("--seeds", help="comma-separated seed list")
    p_verify.add_argument("--n", help="comma-separated dimensions")
    p_verify.add_argument("--p", help="comma-separated degrees")
    p_verify.set_defaults(func=cmd_verify)

    p_dec = sub.add_parser("decompose", help="trace-free decomposition of a form")
    common(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    p_const = sub.add_parser("constants", help="derive the hyper-identity constant")
    common(p_const)
    p_const.add_argument("--n", help="comma-separated dimensions")
    p_const.add_argument("--p", help="comma-separated degrees")
    p_const.set_defaults(func=cmd_constants)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    cap = args.n_cap
    if cap is None and os.environ.get(NCAP_ENV):
        try:
            cap = int(os.environ[NCAP_ENV])
        except ValueError:
            print(f"bad {NCAP_ENV} value {os.environ[NCAP_ENV]!r}", file=sys.stderr)
            return EXIT_INVALID
    if cap is not None:
        try:
            basis.set_dimension_cap(cap)
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_INVALID

    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except (
        basis.DegreeOutOfRangeError,
        forms.IncompatibleOperandsError,
        forms.InvalidDirectionError,
        variation.NotPositiveDefiniteError,
        variation.InvalidStepError,
        classify.WrongRegimeError,
    ) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
