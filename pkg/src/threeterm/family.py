"""The polynomial family H_m(z) generated by 1 / (1 + B(z) t + A(z) t^n)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .polynomial import (
    DEFAULT_OPTIONS,
    ComplexPoly,
    RootSolveOptions,
    derivative,
    evaluate,
    roots_all,
)

# rescale the rolling window once its largest entry leaves [2^-512, 2^512]
_RESCALE_HI = 2.0 ** 512
_RESCALE_LO = 2.0 ** -512


@dataclass(frozen=True)
class FamilySpec:
    n: int
    A: ComplexPoly
    B: ComplexPoly

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if self.A.is_zero():
            raise ValueError("A must not be the zero polynomial")

    @property
    def a(self) -> int:
        return self.A.degree

    @property
    def b(self) -> int:
        # deg of the zero polynomial is reported as 0 here; B == 0 is degenerate anyway
        return max(self.B.degree, 0)

    @classmethod
    def from_coeffs(cls, n: int, A, B) -> "FamilySpec":
        return cls(n, ComplexPoly(A), ComplexPoly(B))


def chebyshev_spec() -> FamilySpec:
    """B = -2z, A = 1, n = 2: the Chebyshev polynomials of the second kind."""
    return FamilySpec.from_coeffs(2, [1.0], [0.0, -2.0])


def quintic_spec() -> FamilySpec:
    """A = z^3 + i, B = z, n = 5."""
    return FamilySpec.from_coeffs(5, [1j, 0, 0, 1], [0, 1])


def coefficients(spec: FamilySpec, m: int) -> ComplexPoly:
    """H_m as an explicit polynomial, by the recurrence H_m = -B H_{m-1} - A H_{m-n}."""
    if m < 0:
        raise ValueError("m must be non-negative")
    negB = -spec.B
    hs = [ComplexPoly([1.0])]
    for k in range(1, min(m, spec.n - 1) + 1):
        hs.append(hs[-1] * negB)
    for k in range(spec.n, m + 1):
        hs.append(negB * hs[k - 1] - spec.A * hs[k - spec.n])
    return hs[m]


def series_oracle(spec: FamilySpec, m: int) -> ComplexPoly:
    """Coefficient of t^m in sum_k (-1)^k (B t + A t^n)^k, expanded binomially.

    Independent of the recurrence: H_m = sum over n j + i = m of
    (-1)^(i+j) C(i+j, i) A^j B^i.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    n = spec.n
    total = ComplexPoly()
    for j in range(m // n + 1):
        i = m - n * j
        term = (spec.A ** j) * (spec.B ** i)
        total = total + term * ((-1) ** (i + j) * math.comb(i + j, i))
    return total


def degree_bound(spec: FamilySpec, m: int) -> int:
    if m < 0:
        raise ValueError("m must be non-negative")
    p, r = divmod(m, spec.n)
    a, b = spec.a, spec.b
    if spec.n * b > a:
        return m * b
    return p * a + r * b


@dataclass(frozen=True)
class ScaledValue:
    """mantissa * exp(log_scale) with |mantissa| in [1, 2), or exactly zero."""

    mantissa: complex
    log_scale: float

    @classmethod
    def make(cls, value: complex, log_scale: float = 0.0) -> "ScaledValue":
        if value == 0:
            return cls(0j, 0.0)
        frac, ex = math.frexp(abs(value))
        # frexp gives frac in [0.5, 1); shift one bit to land in [1, 2)
        ex -= 1
        return cls(value / 2.0 ** ex, log_scale + ex * math.log(2.0))

    def to_complex(self) -> complex:
        if self.mantissa == 0:
            return 0j
        return self.mantissa * math.exp(self.log_scale)

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale


@dataclass(frozen=True)
class RecurrenceState:
    """H_m(z), H_m'(z) and the preceding window, all sharing one scale factor."""

    value: complex
    deriv: complex
    window_max: float
    log_scale: float

    @property
    def residual(self) -> float:
        """|H_m(z)| relative to the largest |H_k(z)| of the preceding n terms."""
        if self.window_max == 0:
            return 0.0 if self.value == 0 else math.inf
        return abs(self.value) / self.window_max


def run_recurrence(spec: FamilySpec, m: int, z: complex, with_derivative: bool = True) -> RecurrenceState:
    """Numeric recurrence at a point, with overflow-safe rescaling."""
    if m < 0:
        raise ValueError("m must be non-negative")
    n = spec.n
    Az, Bz = evaluate(spec.A, z), evaluate(spec.B, z)
    if with_derivative:
        dAz, dBz = evaluate(derivative(spec.A), z), evaluate(derivative(spec.B), z)
    else:
        dAz = dBz = 0j
    # ring buffers of length n holding H_{k-n..k-1} and derivatives
    h = [0j] * n
    dh = [0j] * n
    log_scale = 0.0
    cur, dcur = 1.0 + 0j, 0j
    for k in range(m + 1):
        if k == 0:
            cur, dcur = 1.0 + 0j, 0j
        elif k < n:
            prev, dprev = h[(k - 1) % n], dh[(k - 1) % n]
            cur = -Bz * prev
            dcur = -dBz * prev - Bz * dprev
        else:
            prev, dprev = h[(k - 1) % n], dh[(k - 1) % n]
            old, dold = h[k % n], dh[k % n]
            cur = -Bz * prev - Az * old
            dcur = -dBz * prev - Bz * dprev - dAz * old - Az * dold
        if k == m:
            break
        h[k % n] = cur
        dh[k % n] = dcur
        big = max(max(abs(v) for v in h), max(abs(v) for v in dh))
        if big > _RESCALE_HI or 0 < big < _RESCALE_LO:
            _, ex = math.frexp(big)
            factor = 2.0 ** -ex
            h = [v * factor for v in h]
            dh = [v * factor for v in dh]
            log_scale += ex * math.log(2.0)
    window = [h[j % n] for j in range(max(0, m - n), m)]
    wmax = max((abs(v) for v in window), default=1.0)
    return RecurrenceState(cur, dcur, wmax, log_scale)


def eval_scaled(spec: FamilySpec, m: int, z: complex) -> ScaledValue:
    st = run_recurrence(spec, m, z, with_derivative=False)
    return ScaledValue.make(st.value, st.log_scale)


def b_multiplicity_check(spec: FamilySpec, m: int, tol: float = 1e-9,
                         opts: RootSolveOptions = DEFAULT_OPTIONS) -> bool:
    """Does B^r divide H_m, r = m mod n?  Checked by vanishing derivatives at the roots of B."""
    r = m % spec.n
    if r == 0:
        return True
    if spec.B.degree < 1:
        raise ValueError("B must be nonconstant")
    H = coefficients(spec, m)
    betas = roots_all(spec.B, opts)
    ders = [H]
    for _ in range(1, r):
        ders.append(derivative(ders[-1]))
    for beta in betas:
        for D in ders:
            # compare against the evaluation scale sum |c_k| |beta|^k
            scale = sum(abs(c) * abs(beta) ** k for k, c in enumerate(D.coeffs)) or 1.0
            if abs(evaluate(D, beta)) > tol * scale:
                return False
    return True
