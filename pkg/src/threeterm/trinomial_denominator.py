"""The denominator D(t) = 1 + B(z) t + A(z) t^n at a fixed point z.

Covers its roots t_k, the quotients q_k = t_k / t_0, and the q-discriminant,
computed both as a product over roots and in closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateLeading
from .family import FamilySpec
from .polynomial import (
    DEFAULT_OPTIONS,
    ComplexPoly,
    RootSolveOptions,
    derivative,
    evaluate,
    roots_all,
    sort_roots,
)
from .theta_kernel import p_theta

Q_ONE_THRESHOLD = 1e-7
UNIT_TOL = 1e-6
A_ZERO_TOL = 1e-12


def a_vanishes(spec: FamilySpec, z: complex, tol: float) -> bool:
    """|A(z)| <= tol (1 + |z|)^a max|coeff(A)|; shared with the curve classifier."""
    return abs(evaluate(spec.A, z)) <= tol * (1.0 + abs(z)) ** spec.a * spec.A.scale_norm()


def denominator_at(spec: FamilySpec, z: complex, tol: float = A_ZERO_TOL) -> ComplexPoly:
    if a_vanishes(spec, z, tol):
        raise DegenerateLeading(f"A(z) vanishes at z={z!r}")
    c = [0j] * (spec.n + 1)
    c[0] = 1.0
    c[1] = evaluate(spec.B, z)
    c[spec.n] = evaluate(spec.A, z)
    return ComplexPoly(c)


@dataclass(frozen=True)
class DenominatorRoots:
    z: complex
    t: tuple[complex, ...]
    q: tuple[complex, ...]
    theta: Optional[float]


def _order_roots(ts: list[complex]) -> list[complex]:
    """Sort by modulus, then pick the t_0, t_1 pair of smallest modulus.

    With two (numerically) tied smallest moduli they are oriented so that
    t_1 / t_0 has non-negative imaginary part; with more than two ties the
    group is ordered by principal argument.
    """
    ts = sort_roots(ts)
    r0 = abs(ts[0])
    if r0 == 0:
        return ts
    tied = [t for t in ts if abs(abs(t) / r0 - 1.0) <= UNIT_TOL]
    rest = [t for t in ts if abs(abs(t) / r0 - 1.0) > UNIT_TOL]
    if len(tied) == 2:
        a, b = tied
        if (b / a).imag < 0:
            a, b = b, a
        tied = [a, b]
    else:
        tied.sort(key=cmath.phase)
    return tied + rest


def roots_and_quotients(spec: FamilySpec, z: complex,
                        opts: RootSolveOptions = DEFAULT_OPTIONS) -> DenominatorRoots:
    D = denominator_at(spec, z)
    ts = _order_roots(roots_all(D, opts))
    q = tuple(t / ts[0] for t in ts[1:])
    theta = None
    if abs(abs(q[0]) - 1.0) <= UNIT_TOL:
        theta = cmath.phase(q[0]) / 2.0
    return DenominatorRoots(complex(z), tuple(ts), q, theta)


def verify_quotient_lemma(dr: DenominatorRoots, n: int) -> float:
    """max_k |P_theta(e^{-i theta} q_k)|; small when the quotients solve the trinomial."""
    if dr.theta is None:
        raise ValueError("z is not on the curve: no unit-modulus principal quotient")
    P = p_theta(n, dr.theta)
    rot = cmath.exp(-1j * dr.theta)
    return max(abs(evaluate(P, rot * qk)) for qk in dr.q)


def _q_number(k: int, q: complex) -> complex:
    """1 + q + ... + q^(k-1), i.e. (1 - q^k) / (1 - q) without the cancellation."""
    acc = 0j
    for _ in range(k):
        acc = acc * q + 1.0
    return acc


def dq_operator(D: ComplexPoly, q: complex, t: complex) -> complex:
    """Jackson q-derivative (D(t) - D(q t)) / (t - q t).

    Evaluated termwise as sum_k c_k [k]_q t^(k-1), which is exact at t = 0 and
    reduces to D'(t) at q = 1.
    """
    if abs(q - 1.0) < Q_ONE_THRESHOLD:
        return evaluate(derivative(D), t)
    acc = 0j
    for k in range(D.degree, 0, -1):
        acc = acc * t + D.coeffs[k] * _q_number(k, q)
    return acc


@dataclass(frozen=True)
class QDiscResult:
    product_form: complex
    closed_form: complex
    sign_factor: int
    limit_branch: bool


def closed_form_sign(n: int) -> int:
    """Observed value of the leading sign: product form = sign * closed form."""
    return (-1) ** ((n - 1) * (n - 2) // 2)


def qdisc_closed_form(n: int, Az: complex, Bz: complex, q: complex) -> complex:
    """A^{n-2} (B^n q^{n-1} [n-1]_q^{n-1} + (-1)^{n-1} [n]_q^n A), without the leading sign."""
    if abs(q - 1.0) < Q_ONE_THRESHOLD:
        return Az ** (n - 2) * ((n - 1) ** (n - 1) * Bz ** n + (-1) ** (n - 1) * n ** n * Az)
    c1 = _q_number(n - 1, q)
    c0 = _q_number(n, q)
    return Az ** (n - 2) * (Bz ** n * q ** (n - 1) * c1 ** (n - 1) + (-1) ** (n - 1) * c0 ** n * Az)


def qdisc_product_form(D: ComplexPoly, q: complex, opts: RootSolveOptions = DEFAULT_OPTIONS) -> complex:
    """(-1)^{d(d-1)/2} lc^{d-2} prod_i (D_q D)(t_i) over the roots t_i of D."""
    d = D.degree
    acc = (-1.0) ** (d * (d - 1) // 2) * D.lc ** (d - 2)
    for t in roots_all(D, opts):
        acc *= dq_operator(D, q, t)
    return acc


def q_discriminant(spec: FamilySpec, z: complex, q: complex,
                   opts: RootSolveOptions = DEFAULT_OPTIONS) -> QDiscResult:
    D = denominator_at(spec, z)
    n = spec.n
    prod = qdisc_product_form(D, q, opts)
    closed = qdisc_closed_form(n, D.coeffs[n], D.coeffs[1], q)
    sign = 1
    if abs(closed) > 0 and abs(prod) > 1e-8 * abs(closed):
        sign = 1 if (prod / closed).real >= 0 else -1
    return QDiscResult(prod, closed, sign, abs(q - 1.0) < Q_ONE_THRESHOLD)


def classical_discriminant_limit(spec: FamilySpec, z: complex) -> complex:
    """Closed-form q -> 1 limit, with the sign fixed to match the ordinary discriminant."""
    D = denominator_at(spec, z)
    n = spec.n
    return closed_form_sign(n) * qdisc_closed_form(n, D.coeffs[n], D.coeffs[1], 1.0)
