"""Dense complex polynomials in one variable.

Coefficients are stored in ascending order, ``coeffs[k]`` multiplies ``x**k``.
The zero polynomial has no coefficients.  Everything here is immutable and
side-effect free.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NonConvergence

EPS = np.finfo(float).eps


class ComplexPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = [complex(v) for v in coeffs]
        for v in c:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite coefficient {v!r}")
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "ComplexPoly":
        out = cls([lead])
        for r in roots:
            out = out * cls([-r, 1.0])
        return out

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPoly":
        return cls([0.0] * k + [c])

    @property
    def coeffs(self) -> tuple[complex, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def lc(self) -> complex:
        return self._c[-1] if self._c else 0j

    def is_zero(self) -> bool:
        return not self._c

    def scale_norm(self) -> float:
        """Largest coefficient modulus (0 for the zero polynomial)."""
        return max((abs(v) for v in self._c), default=0.0)

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        return add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self) -> "ComplexPoly":
        return scale(self, -1.0)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return add(self, -_as_poly(other))

    def __rsub__(self, other) -> "ComplexPoly":
        return add(_as_poly(other), -self)

    def __mul__(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ComplexPoly":
        return power(self, k)

    def __eq__(self, other) -> bool:
        return isinstance(other, ComplexPoly) and self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self._c)!r})"


def _as_poly(p) -> ComplexPoly:
    if isinstance(p, ComplexPoly):
        return p
    return ComplexPoly([p])


@dataclass(frozen=True)
class RootSolveOptions:
    max_iterations: int = 200
    tolerance: float = 1e-12
    polish_steps: int = 2

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.polish_steps < 0:
            raise ValueError("polish_steps must be non-negative")


DEFAULT_OPTIONS = RootSolveOptions()


def evaluate(p: ComplexPoly, z: complex) -> complex:
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def derivative(p: ComplexPoly) -> ComplexPoly:
    return ComplexPoly([k * c for k, c in enumerate(p.coeffs) if k > 0])


def add(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    return ComplexPoly([x + (b[k] if k < len(b) else 0) for k, x in enumerate(a)])


def mul(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    if p.is_zero() or q.is_zero():
        return ComplexPoly()
    out = [0j] * (len(p) + len(q) - 1)
    for i, x in enumerate(p.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(q.coeffs):
            out[i + j] += x * y
    return ComplexPoly(out)


def scale(p: ComplexPoly, c: complex) -> ComplexPoly:
    return ComplexPoly([c * v for v in p.coeffs])


def power(p: ComplexPoly, k: int) -> ComplexPoly:
    if k < 0:
        raise ValueError("negative exponent")
    out = ComplexPoly([1.0])
    base = p
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


def deflate(p: ComplexPoly, root: complex) -> ComplexPoly:
    """Quotient of ``p`` by ``x - root`` (synthetic division, remainder dropped)."""
    if p.degree < 1:
        raise ValueError("cannot deflate a constant polynomial")
    c = p.coeffs
    d = p.degree
    q = [0j] * d
    acc = c[d]
    for k in range(d - 1, -1, -1):
        q[k] = acc
        acc = c[k] + acc * root
    return ComplexPoly(q)


def sylvester_matrix(p: ComplexPoly, q: ComplexPoly) -> np.ndarray:
    dp, dq = p.degree, q.degree
    size = dp + dq
    S = np.zeros((size, size), dtype=complex)
    pc = np.array(p.coeffs[::-1], dtype=complex)
    qc = np.array(q.coeffs[::-1], dtype=complex)
    for i in range(dq):
        S[i, i:i + dp + 1] = pc
    for i in range(dp):
        S[dq + i, i:i + dq + 1] = qc
    return S


def resultant(p: ComplexPoly, q: ComplexPoly) -> complex:
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if p.degree == 0:
        return p.lc ** q.degree
    if q.degree == 0:
        return q.lc ** p.degree
    return complex(np.linalg.det(sylvester_matrix(p, q)))


def discriminant(p: ComplexPoly) -> complex:
    d = p.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1.0 + 0j
    sign = -1.0 if (d * (d - 1) // 2) % 2 else 1.0
    return sign * resultant(p, derivative(p)) / p.lc


def _sort_key(z: complex):
    return (abs(z), cmath.phase(z))


def sort_roots(roots: Iterable[complex]) -> list[complex]:
    return sorted((complex(z) for z in roots), key=_sort_key)


def roots_all(p: ComplexPoly, opts: RootSolveOptions = DEFAULT_OPTIONS) -> list[complex]:
    """All ``degree(p)`` roots by Aberth-Ehrlich iteration plus Newton polishing.

    Exact zero roots (vanishing low coefficients) are split off first.  The
    result is sorted by modulus, then principal argument.
    """
    d = p.degree
    if d < 1:
        raise ValueError("roots_all needs degree >= 1")
    c = p.coeffs
    nz = 0
    while c[nz] == 0:
        nz += 1
    c = c[nz:]
    zeros = [0j] * nz
    d = len(c) - 1
    if d == 0:
        return zeros
    if d == 1:
        return sort_roots(zeros + [-c[0] / c[1]])
    if d <= 16:
        roots = _aberth_small(c, opts)
    else:
        roots = _aberth_vec(np.array(c, dtype=complex), opts)
    return sort_roots(zeros + list(roots))


def _initial_guesses(c: Sequence[complex]) -> list[complex]:
    """Starting points on circles read off the Newton polygon of log|c_k|.

    For a single hull segment this is one circle of radius |c_0/c_d|^(1/d).
    Every circle is inflated by 5% and rotated by 0.4 rad to dodge symmetric
    configurations.
    """
    d = len(c) - 1
    pts = [(k, math.log(abs(v))) for k, v in enumerate(c) if v != 0]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        # upper convex hull, monotone chain
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    guesses = []
    for (k0, y0), (k1, y1) in zip(hull, hull[1:]):
        count = k1 - k0
        radius = math.exp((y0 - y1) / count) * 1.05
        for j in range(count):
            guesses.append(cmath.rect(radius, 2.0 * math.pi * j / count + 0.4 + k0))
    return guesses


def _horner_with_bound(c, z):
    """p(z), p'(z) and a rounding bound on |p(z)|."""
    p = c[-1]
    dp = 0j
    az = abs(z)
    bound = abs(p)
    for k in range(len(c) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
        bound = bound * az + abs(c[k])
    return p, dp, bound


def _aberth_small(c: Sequence[complex], opts: RootSolveOptions) -> list[complex]:
    d = len(c) - 1
    z = _initial_guesses(c)
    done = [False] * d
    slack = 4.0 * (d + 1) * EPS
    for _ in range(opts.max_iterations):
        for i in range(d):
            if done[i]:
                continue
            zi = z[i]
            pv, dpv, bound = _horner_with_bound(c, zi)
            if abs(pv) <= slack * bound:
                done[i] = True
                continue
            if dpv == 0:
                # nudge off a critical point
                z[i] = zi + 1e-3 * (1 + abs(zi))
                continue
            ratio = pv / dpv
            s = 0j
            for j in range(d):
                if j != i:
                    diff = zi - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            w = ratio / (1.0 - ratio * s)
            z[i] = zi - w
            if abs(w) <= opts.tolerance * abs(z[i]):
                done[i] = True
        if all(done):
            break
    else:
        raise NonConvergence(f"Aberth iteration did not converge in {opts.max_iterations} steps (degree {d})")
    return [_polish(c, zi, opts.polish_steps) for zi in z]


def _polish(c, z, steps):
    pv, dpv, _ = _horner_with_bound(c, z)
    for _ in range(steps):
        if pv == 0 or dpv == 0:
            break
        trial = z - pv / dpv
        tp, tdp, _ = _horner_with_bound(c, trial)
        if abs(tp) >= abs(pv):
            break
        z, pv, dpv = trial, tp, tdp
    return z


def _aberth_vec(c: np.ndarray, opts: RootSolveOptions) -> list[complex]:
    d = len(c) - 1
    z = np.array(_initial_guesses(list(c)), dtype=complex)
    active = np.ones(d, dtype=bool)
    ac = np.abs(c)
    slack = 4.0 * (d + 1) * EPS
    eye = np.eye(d, dtype=bool)
    for _ in range(opts.max_iterations):
        pv, dpv, bound = _horner_vec(c, ac, z)
        settled = np.abs(pv) <= slack * bound
        active &= ~settled
        if not active.any():
            break
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(diff == 0, 0.0, 1.0 / diff)
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dpv
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = -1e-3 * (1 + np.abs(z[bad]))
        w[~active] = 0.0
        z = z - w
        active &= ~(np.abs(w) <= opts.tolerance * np.abs(z))
        if not active.any():
            break
    else:
        raise NonConvergence(f"Aberth iteration did not converge in {opts.max_iterations} steps (degree {d})")
    coeffs = list(c)
    return [_polish(coeffs, complex(zi), opts.polish_steps) for zi in z]


def _horner_vec(c, ac, z):
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    az = np.abs(z)
    bound = np.full(z.shape, ac[-1])
    for k in range(len(c) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
        bound = bound * az + ac[k]
    return p, dp, bound
