"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 spec parse failure, 3 guard or
precondition violation, 4 incomplete location / failed verification,
5 theta-root count below the expected p.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import DegenerateLeading
from .family import FamilySpec, coefficients
from .locator import Verdict, locate_roots, trace_curve, verify_theorem
from .polynomial import ComplexPoly, RootSolveOptions
from .theta_kernel import h_value, search_theta_roots
from .trinomial_denominator import q_discriminant, roots_and_quotients

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_GUARD = 3
EXIT_INCOMPLETE = 4
EXIT_BELOW = 5

GEN_GUARD = 400

_VERDICT_EXIT = {
    Verdict.COMPLETE: EXIT_OK,
    Verdict.INCOMPLETE: EXIT_INCOMPLETE,
    Verdict.BELOW_THRESHOLD: EXIT_BELOW,
}


class SpecError(ValueError):
    pass


class GuardError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-8
    residual_tol: float = 1e-6
    max_iterations: int = 200
    samples: int = 500
    output_path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        for name in ("tolerance", "residual_tol", "max_iterations", "samples"):
            if not getattr(self, name) > 0:
                raise GuardError(f"--{name.replace('_', '-')} must be positive")

    @property
    def solve_options(self) -> RootSolveOptions:
        return RootSolveOptions(max_iterations=self.max_iterations)


def _complex_list(raw, field: str) -> list[complex]:
    if not isinstance(raw, list):
        raise SpecError(f"field '{field}': expected a list of [re, im] pairs")
    out = []
    for k, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise SpecError(f"field '{field}[{k}]': expected [re, im] with two numbers")
        if not all(math.isfinite(v) for v in pair):
            raise SpecError(f"field '{field}[{k}]': non-finite value")
        out.append(complex(pair[0], pair[1]))
    return out


def parse_spec(text: str) -> FamilySpec:
    """Parse the JSON spec file: {"n": int, "A": [[re, im], ...], "B": [[re, im], ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object")
    for key in ("n", "A", "B"):
        if key not in data:
            raise SpecError(f"field '{key}' is missing")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise SpecError(f"field 'n': expected an integer >= 2, got {n!r}")
    A = _complex_list(data["A"], "A")
    B = _complex_list(data["B"], "B")
    if not any(c != 0 for c in A):
        raise SpecError("field 'A': must not be identically zero")
    return FamilySpec(n, ComplexPoly(A), ComplexPoly(B))


def load_spec(path: str) -> FamilySpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}") from None
    return parse_spec(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def emit_table(columns: list[str], rows: list[list], cfg: RunConfig) -> None:
    if cfg.format == "json":
        payload = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        text = json.dumps(payload, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    _write(text, cfg)


def _write(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def _require_m(args) -> int:
    if args.m is None:
        raise GuardError("--m is required for this command")
    return args.m


def cmd_gen(args, cfg: RunConfig) -> int:
    spec = load_spec(args.spec)
    m = _require_m(args)
    if m < 0:
        raise GuardError("--m must be non-negative")
    if m * spec.b > GEN_GUARD:
        raise GuardError(f"m*b = {m * spec.b} exceeds {GEN_GUARD}; coefficients would overflow")
    H = coefficients(spec, m)
    rows = [[k, c.real, c.imag] for k, c in enumerate(H.coeffs)]
    emit_table(["index", "re", "im"], rows, cfg)
    return EXIT_OK


def _locate(args, cfg: RunConfig):
    spec = load_spec(args.spec)
    m = _require_m(args)
    if m < spec.n:
        raise GuardError(f"m={m} must be at least n={spec.n}")
    rep = locate_roots(spec, m, cfg.solve_options, residual_tol=cfg.residual_tol, curve_tol=cfg.tolerance)
    return spec, rep


def _summary(rep) -> str:
    return f"located={rep.located_count} expected={rep.expected_count} verdict={rep.verdict.value}"


def cmd_locate(args, cfg: RunConfig) -> int:
    _, rep = _locate(args, cfg)
    rows = []
    for rec in rep.records:
        source = f"theta:{rec.theta_index}" if rec.source == "theta" else "B"
        rows.append([rec.z.real, rec.z.imag, rec.theta, source, rec.residual, rec.curve.tag.value])
    emit_table(["re", "im", "theta", "source", "residual", "curve_class"], rows, cfg)
    print(_summary(rep), file=sys.stderr)
    return _VERDICT_EXIT[rep.verdict]


QUOTIENT_COLUMNS = ["root_re", "root_im", "k", "q_re", "q_im"]


def cmd_quotients(args, cfg: RunConfig) -> int:
    try:
        spec, rep = _locate(args, cfg)
    except GuardError:
        emit_table(QUOTIENT_COLUMNS, [], cfg)
        raise
    rows = []
    if rep.verdict is not Verdict.BELOW_THRESHOLD:
        for rec in rep.records:
            try:
                dr = roots_and_quotients(spec, rec.z, cfg.solve_options)
            except DegenerateLeading:
                continue
            for k, qk in enumerate(dr.q, start=1):
                rows.append([rec.z.real, rec.z.imag, k, qk.real, qk.imag])
    emit_table(QUOTIENT_COLUMNS, rows, cfg)
    print(_summary(rep), file=sys.stderr)
    return _VERDICT_EXIT[rep.verdict]


def cmd_curve(args, cfg: RunConfig) -> int:
    spec = load_spec(args.spec)
    points, failures = trace_curve(spec, cfg.samples, cfg.solve_options)
    emit_table(["theta", "re", "im"], [[t, z.real, z.imag] for t, z in points], cfg)
    for theta, msg in failures:
        print(f"sample theta={theta:.17g} failed: {msg}", file=sys.stderr)
    return EXIT_OK


def cmd_htheta(args, cfg: RunConfig) -> int:
    spec = load_spec(args.spec)
    m = _require_m(args)
    if m < 1:
        raise GuardError("--m must be at least 1")
    n = spec.n
    opts = cfg.solve_options
    rows = []
    step = math.pi / n / (cfg.samples + 1)
    for j in range(cfg.samples):
        theta = (j + 1) * step
        rows.append(["sample", theta, h_value(n, m, theta, opts), None, None, None])
    if m >= n:
        search = search_theta_roots(n, m, opts)
        for g, obs in zip(search.grid, search.observed):
            rows.append(["grid", g.theta, h_value(n, m, g.theta, opts), g.h_index, g.expected_sign, obs])
        for tr in search.roots:
            rows.append(["root", tr.theta, tr.h_residual, None, None, None])
    emit_table(["kind", "theta", "h", "h_index", "expected_sign", "observed_sign"], rows, cfg)
    return EXIT_OK


def cmd_qdisc(args, cfg: RunConfig) -> int:
    spec = load_spec(args.spec)
    if args.z is None or args.q is None:
        raise GuardError("--z and --q are required for qdisc")
    z = complex(*args.z)
    q = complex(*args.q)
    try:
        res = q_discriminant(spec, z, q, cfg.solve_options)
    except DegenerateLeading as exc:
        raise GuardError(str(exc)) from None
    branch = "limit" if res.limit_branch else "generic"
    if cfg.format == "json":
        text = json.dumps({
            "branch": branch,
            "product_form": [res.product_form.real, res.product_form.imag],
            "closed_form": [res.closed_form.real, res.closed_form.imag],
            "sign_factor": res.sign_factor,
        }, indent=1) + "\n"
    else:
        text = (f"branch={branch}\n"
                f"product_form={_fmt(res.product_form.real)},{_fmt(res.product_form.imag)}\n"
                f"closed_form={_fmt(res.closed_form.real)},{_fmt(res.closed_form.imag)}\n"
                f"sign_factor={res.sign_factor:+d}\n")
    _write(text, cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    spec = load_spec(args.spec)
    m = _require_m(args)
    if m < 0:
        raise GuardError("--m must be non-negative")
    if m * spec.b > GEN_GUARD:
        raise GuardError(f"m*b = {m * spec.b} exceeds {GEN_GUARD}")
    rep = verify_theorem(spec, m, cfg.tolerance, cfg.solve_options, dps=args.dps)
    print(rep.summary())
    if rep.match_distance is not None:
        print(f"match_distance={_fmt(rep.match_distance)} hausdorff={_fmt(rep.hausdorff)} "
              f"locate_verdict={rep.locate_verdict.value}")
    if cfg.output_path:
        rows = [[z.real, z.imag, c.tag.value, c.height] for z, c in zip(rep.roots, rep.classes)]
        emit_table(["re", "im", "curve_class", "height"], rows, cfg)
    return EXIT_OK if rep.passed else EXIT_INCOMPLETE


COMMANDS = {
    "gen": (cmd_gen, "expand H_m into coefficients"),
    "locate": (cmd_locate, "locate every root of H_m via the theta-roots of h"),
    "quotients": (cmd_quotients, "quotients t_k/t_0 of denominator roots at each located root"),
    "curve": (cmd_curve, "trace the limiting curve as a point cloud"),
    "htheta": (cmd_htheta, "sample h(theta) and evaluate the sign grid"),
    "qdisc": (cmd_qdisc, "q-discriminant of the denominator, product and closed forms"),
    "verify": (cmd_verify, "brute-force roots of H_m checked against the curve and the locator"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threeterm",
        description="Roots of polynomials generated by 1/(1 + B(z) t + A(z) t^n).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--spec", required=True, help="JSON spec file with n, A, B")
        p.add_argument("--m", type=int, default=None, help="index of H_m")
        p.add_argument("--tol", type=float, default=1e-8, help="curve-membership tolerance")
        p.add_argument("--residual-tol", type=float, default=1e-6, help="root residual acceptance")
        p.add_argument("--max-iterations", type=int, default=200)
        p.add_argument("--samples", type=int, default=500)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "qdisc":
            p.add_argument("--z", type=float, nargs=2, metavar=("RE", "IM"))
            p.add_argument("--q", type=float, nargs=2, metavar=("RE", "IM"))
        if name == "verify":
            p.add_argument("--dps", type=int, default=None,
                           help="run the brute force in mpmath at this many digits")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.tol, args.residual_tol, args.max_iterations, args.samples, args.out, args.format)
        handler = COMMANDS[args.command][0]
        return handler(args, cfg)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
