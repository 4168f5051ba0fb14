"""Locate every root of H_m(z) on the curve and check the result by brute force.

The curve is Im w = 0, 0 <= (-1)^n Re w <= n^n / (n-1)^(n-1), w = B^n / A.
Each zero theta of h gives the roots of (-1)^n c_B(q) B^n - c_A(q) A with
q = exp(2 i theta); the roots of B with multiplicity m mod n supply the rest.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateEquation, NonConvergence
from .family import FamilySpec, coefficients, degree_bound, run_recurrence
from .polynomial import DEFAULT_OPTIONS, ComplexPoly, RootSolveOptions, evaluate, roots_all, sort_roots
from .theta_kernel import ThetaRoot, height_bound, search_theta_roots
from .trinomial_denominator import a_vanishes

POLISH_STEPS = 5


class CurveTag(str, Enum):
    ON_CURVE = "OnCurve"
    A_ZERO = "AZero"
    OFF_CURVE = "OffCurve"


@dataclass(frozen=True)
class CurveClass:
    tag: CurveTag
    w: Optional[complex]
    height: Optional[float]


def curve_membership(spec: FamilySpec, z: complex, tol: float = 1e-8) -> CurveClass:
    if a_vanishes(spec, z, tol):
        return CurveClass(CurveTag.A_ZERO, None, None)
    n = spec.n
    w = evaluate(spec.B, z) ** n / evaluate(spec.A, z)
    height = (-1) ** n * w.real
    slack = tol * max(1.0, abs(w))
    on = abs(w.imag) <= slack and -slack <= height <= height_bound(n) + slack
    return CurveClass(CurveTag.ON_CURVE if on else CurveTag.OFF_CURVE, w, height)


def z_equation(spec: FamilySpec, theta: float) -> ComplexPoly:
    """(-1)^n c_B B^n - c_A A with c_B = (1-q) q^{n-1} (1-q^{n-1})^{n-1}, c_A = (1-q^n)^n."""
    n = spec.n
    q = cmath.exp(2j * theta)
    c_b = (1 - q) * q ** (n - 1) * (1 - q ** (n - 1)) ** (n - 1)
    c_a = (1 - q ** n) ** n
    return (-1) ** n * c_b * spec.B ** n - c_a * spec.A


def z_from_theta(spec: FamilySpec, theta: float, opts: RootSolveOptions = DEFAULT_OPTIONS) -> list[complex]:
    if not 0.0 < theta < math.pi / spec.n:
        raise ValueError(f"theta={theta!r} outside (0, pi/{spec.n})")
    poly = z_equation(spec, theta)
    if poly.is_zero():
        raise DegenerateEquation(f"z-equation vanishes identically at theta={theta!r}")
    if poly.degree < 1:
        return []
    return roots_all(poly, opts)


def trace_curve(spec: FamilySpec, samples: int,
                opts: RootSolveOptions = DEFAULT_OPTIONS) -> tuple[list[tuple[float, complex]], list[tuple[float, str]]]:
    """Point cloud on the curve from a uniform interior theta grid.

    Returns ``(points, failures)``; a failing sample is recorded, not raised.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    step = math.pi / spec.n / (samples + 1)
    points, failures = [], []
    for j in range(samples):
        theta = (j + 1) * step
        try:
            for z in z_from_theta(spec, theta, opts):
                points.append((theta, z))
        except (NonConvergence, DegenerateEquation) as exc:
            failures.append((theta, str(exc)))
    return points, failures


class Verdict(str, Enum):
    COMPLETE = "Complete"
    INCOMPLETE = "Incomplete"
    BELOW_THRESHOLD = "BelowThreshold"


@dataclass(frozen=True)
class RootRecord:
    z: complex
    source: str  # "theta" or "B"
    theta_index: Optional[int]
    theta: Optional[float]
    residual: float
    curve: CurveClass


@dataclass
class LocateReport:
    spec: FamilySpec
    m: int
    p: int
    r: int
    theta_roots: list[ThetaRoot]
    records: list[RootRecord]
    expected_count: int
    located_count: int
    verdict: Verdict
    sign_mismatches: list = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def roots(self) -> list[complex]:
        return [rec.z for rec in self.records]


def polish_root(spec: FamilySpec, m: int, z: complex, steps: int = POLISH_STEPS) -> tuple[complex, float]:
    """Newton steps against the rescaled recurrence; a step is kept only if the residual drops."""
    st = run_recurrence(spec, m, z)
    for _ in range(steps):
        if st.value == 0 or st.deriv == 0:
            break
        trial = z - st.value / st.deriv
        tst = run_recurrence(spec, m, trial)
        if not tst.residual < st.residual:
            break
        z, st = trial, tst
    return z, st.residual


def locate_roots(spec: FamilySpec, m: int, opts: RootSolveOptions = DEFAULT_OPTIONS, *,
                 residual_tol: float = 1e-6, curve_tol: float = 1e-8) -> LocateReport:
    n = spec.n
    if m < n:
        raise ValueError(f"m={m} must be at least n={n}")
    p, r = divmod(m, n)
    search = search_theta_roots(n, m, opts)
    records: list[RootRecord] = []
    failures: list[str] = []

    for idx, tr in enumerate(search.roots):
        try:
            zs = z_from_theta(spec, tr.theta, opts)
        except (NonConvergence, DegenerateEquation) as exc:
            failures.append(f"theta[{idx}]={tr.theta!r}: {exc}")
            continue
        for z0 in zs:
            z, res = polish_root(spec, m, z0)
            records.append(RootRecord(z, "theta", idx, tr.theta, res,
                                      curve_membership(spec, z, curve_tol)))

    if r > 0 and spec.B.degree >= 1:
        try:
            betas = roots_all(spec.B, opts)
        except NonConvergence as exc:
            failures.append(f"roots of B: {exc}")
            betas = []
        for beta in betas:
            z, res = polish_root(spec, m, beta)
            for _ in range(r):
                records.append(RootRecord(z, "B", None, None, res, curve_membership(spec, z, curve_tol)))

    expected = degree_bound(spec, m)
    located = len(records)
    if len(search.roots) != p:
        verdict = Verdict.BELOW_THRESHOLD
    elif located == expected and not failures and all(rec.residual <= residual_tol for rec in records):
        verdict = Verdict.COMPLETE
    else:
        verdict = Verdict.INCOMPLETE
    return LocateReport(spec, m, p, r, list(search.roots), records, expected, located, verdict,
                        list(search.mismatches), failures)


def match_distance(a: list[complex], b: list[complex]) -> float:
    """Max pointwise distance under the optimal one-to-one matching (inf if sizes differ)."""
    if len(a) != len(b):
        return math.inf
    if not a:
        return 0.0
    cost = np.abs(np.subtract.outer(np.array(a), np.array(b)))
    # assignment on squared distances, then report the worst matched pair
    rows, cols = linear_sum_assignment(cost ** 2)
    return float(cost[rows, cols].max())


def hausdorff_distance(a: list[complex], b: list[complex]) -> float:
    if not a or not b:
        return 0.0 if not a and not b else math.inf
    cost = np.abs(np.subtract.outer(np.array(a), np.array(b)))
    return float(max(cost.min(axis=1).max(), cost.min(axis=0).max()))


@dataclass
class VerificationReport:
    m: int
    roots: list[complex]
    classes: list[CurveClass]
    on_curve: int
    a_zero: int
    off_curve: int
    passed: bool
    match_distance: Optional[float]
    hausdorff: Optional[float]
    locate_verdict: Optional[Verdict]

    def summary(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"on_curve={self.on_curve} a_zero={self.a_zero} off_curve={self.off_curve} {tag}"


def _mp_brute_force_roots(spec: FamilySpec, m: int, dps: int) -> list[complex]:
    """Expand H_m and solve it in mpmath at ``dps`` digits."""
    import mpmath

    with mpmath.workdps(dps):
        A = [mpmath.mpc(c.real, c.imag) for c in spec.A.coeffs]
        negB = [mpmath.mpc(-c.real, -c.imag) for c in spec.B.coeffs]

        def mul(p, q):
            out = [mpmath.mpc(0)] * (len(p) + len(q) - 1) if p and q else []
            for i, x in enumerate(p):
                for j, y in enumerate(q):
                    out[i + j] += x * y
            return out

        def sub(p, q):
            size = max(len(p), len(q))
            return [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(size)]

        hs = [[mpmath.mpc(1)]]
        for k in range(1, m + 1):
            h = mul(negB, hs[k - 1])
            if k >= spec.n:
                h = sub(h, mul(A, hs[k - spec.n]))
            hs.append(h)
        h = hs[m]
        while h and h[-1] == 0:
            h.pop()
        if len(h) < 2:
            return []
        roots = mpmath.polyroots(h[::-1], maxsteps=500, extraprec=4 * dps, error=False)
        return sort_roots(complex(r) for r in roots)


def verify_theorem(spec: FamilySpec, m: int, tol: float = 1e-8,
                   opts: RootSolveOptions = DEFAULT_OPTIONS, dps: Optional[int] = None) -> VerificationReport:
    """Expand H_m, solve it directly, and classify every root against the curve.

    The default brute force works in double precision, which loses accuracy
    on badly conditioned expansions and at repeated roots; ``dps`` switches the
    expansion and the solve to mpmath at that many digits.
    """
    if dps is None:
        H = coefficients(spec, m)
        roots = roots_all(H, opts) if H.degree >= 1 else []
    else:
        roots = _mp_brute_force_roots(spec, m, dps)
    classes = [curve_membership(spec, z, tol) for z in roots]
    counts = {t: sum(c.tag is t for c in classes) for t in CurveTag}
    dist = haus = None
    verdict = None
    if m >= spec.n:
        rep = locate_roots(spec, m, opts)
        verdict = rep.verdict
        dist = match_distance(roots, rep.roots)
        haus = hausdorff_distance(roots, rep.roots)
    return VerificationReport(
        m, roots, classes,
        counts[CurveTag.ON_CURVE], counts[CurveTag.A_ZERO], counts[CurveTag.OFF_CURVE],
        counts[CurveTag.OFF_CURVE] == 0, dist, haus, verdict,
    )
