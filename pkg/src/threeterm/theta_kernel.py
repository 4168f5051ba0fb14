"""The trinomial P_theta, the root-counting function h(theta), and its zeros.

For fixed ``n`` and ``theta`` the trinomial is

    P_theta(zeta) = zeta**n - U(n, theta) * zeta + U(n - 1, theta),
    U(k, theta) = sin(k theta) / sin(theta),

which always has the roots ``exp(-i theta)`` and ``exp(i theta)``.  A root
``z`` of H_m on the curve corresponds to a zero of

    h(theta) = sum_k 1 / (zeta_k**(m + 1) * P_theta'(zeta_k)).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import RealnessViolation, SignMismatch
from .polynomial import DEFAULT_OPTIONS, ComplexPoly, RootSolveOptions, roots_all

# below this |sin(theta)| the ratio is taken from the Chebyshev recurrence
_SIN_FLOOR = 1e-8
BISECT_WIDTH = 1e-13


def cheb_ratio(n: int, theta: float) -> float:
    """sin(n theta) / sin(theta), continuously extended (n at theta = 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    s = math.sin(theta)
    if abs(s) > _SIN_FLOOR:
        return math.sin(n * theta) / s
    c = math.cos(theta)
    # U_{n-1}(cos theta) by the three-term recurrence
    u_prev, u = 0.0, 1.0
    for _ in range(n - 1):
        u_prev, u = u, 2.0 * c * u - u_prev
    return u if n >= 1 else 0.0


def p_theta(n: int, theta: float) -> ComplexPoly:
    c = [0.0] * (n + 1)
    c[0] = cheb_ratio(n - 1, theta)
    c[1] = -cheb_ratio(n, theta)
    c[n] = 1.0
    return ComplexPoly(c)


def outside_factor(n: int, theta: float) -> ComplexPoly:
    """P_theta divided by (zeta - e^{i theta})(zeta - e^{-i theta}).

    The quotient is sum_j U(j + 1, theta) zeta**(n - 2 - j), an exact
    deflation of the two unit-circle roots.
    """
    return ComplexPoly([cheb_ratio(n - 1 - k, theta) for k in range(n - 1)])


@dataclass(frozen=True)
class ThetaContext:
    n: int
    theta: float
    ratio_n: float
    ratio_n1: float
    p_theta: ComplexPoly
    zeta: tuple[complex, ...]
    dp_at_zeta: tuple[complex, ...]


def build_theta_context(n: int, theta: float, opts: RootSolveOptions = DEFAULT_OPTIONS) -> ThetaContext:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 <= theta < math.pi / n:
        raise ValueError(f"theta={theta!r} outside [0, pi/{n})")
    rn = cheb_ratio(n, theta)
    rn1 = cheb_ratio(n - 1, theta)
    c, s = math.cos(theta), math.sin(theta)
    zeta = [complex(c, -s), complex(c, s)]
    if n > 2:
        zeta += roots_all(outside_factor(n, theta), opts)
    dp = tuple(n * z ** (n - 1) - rn for z in zeta)
    return ThetaContext(n, theta, rn, rn1, p_theta(n, theta), tuple(zeta), dp)


def h_terms(ctx: ThetaContext, m: int) -> list[complex]:
    out = []
    for z, d in zip(ctx.zeta, ctx.dp_at_zeta):
        # polar form keeps zeta**(m+1) from overflowing
        lz = complex(math.log(abs(z)), cmath.phase(z))
        out.append(cmath.exp(-(m + 1) * lz) / d)
    return out


def h_eval(ctx: ThetaContext, m: int) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    total = sum(h_terms(ctx, m))
    if abs(total.imag) > 1e-6 * (1.0 + abs(total.real)):
        raise RealnessViolation(f"h({ctx.theta!r}) has imaginary part {total.imag:.3e}")
    return total.real


def h_value(n: int, m: int, theta: float, opts: RootSolveOptions = DEFAULT_OPTIONS) -> float:
    return h_eval(build_theta_context(n, theta, opts), m)


def curve_height(n: int, theta: float) -> float:
    """sin^n(n t) / (sin t sin^{n-1}((n-1) t)), clamped to its range [0, n^n/(n-1)^(n-1)]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 <= theta <= math.pi / n:
        raise ValueError(f"theta={theta!r} outside [0, pi/{n}]")
    top = height_bound(n)
    if theta == 0.0:
        return top
    if theta == math.pi / n:
        return 0.0
    v = cheb_ratio(n, theta) ** n / cheb_ratio(n - 1, theta) ** (n - 1)
    return min(max(v, 0.0), top)


def height_bound(n: int) -> float:
    return n ** n / (n - 1) ** (n - 1)


@dataclass(frozen=True)
class SignGridPoint:
    h_index: int
    l_value: float
    theta: float
    expected_sign: int


@dataclass(frozen=True)
class ThetaRoot:
    theta: float
    bracket: tuple[float, float]
    h_residual: float


def grid_offsets(n: int, m: int) -> tuple[float, float]:
    """(eps_lo, eps_hi) offsets of the two grid endpoints from 0 and pi/n."""
    r = m % n
    base = math.pi / (4 * n * m)
    hi = base if r == 0 else min(base, (r / n) * math.pi / m / 2)
    return base, hi


def sign_grid(n: int, m: int) -> list[SignGridPoint]:
    """The p+1 points, in decreasing theta, where h is predicted to alternate in sign."""
    if m < n:
        raise ValueError(f"m={m} must be at least n={n}")
    p, r = divmod(m, n)
    eps_lo, eps_hi = grid_offsets(n, m)
    top = math.pi / n
    pts = [SignGridPoint(0, eps_hi * m / math.pi, top - eps_hi, (-1) ** (p + 1))]
    for h in range(1, p):
        l = h + r / n
        pts.append(SignGridPoint(h, l, top - l * math.pi / m, (-1) ** (p - h + 1)))
    pts.append(SignGridPoint(p, m / n - eps_lo * m / math.pi, eps_lo, -1))
    return pts


@dataclass(frozen=True)
class ThetaSearch:
    """Result of the grid scan plus bisection, with any sign disagreements."""

    n: int
    m: int
    grid: tuple[SignGridPoint, ...]
    observed: tuple[int, ...]
    roots: tuple[ThetaRoot, ...]
    mismatches: tuple[SignGridPoint, ...]


def _sign(x: float) -> int:
    return 1 if x > 0 else (-1 if x < 0 else 0)


def search_theta_roots(n: int, m: int, opts: RootSolveOptions = DEFAULT_OPTIONS) -> ThetaSearch:
    grid = sign_grid(n, m)
    values = [h_value(n, m, g.theta, opts) for g in grid]
    observed = [_sign(v) for v in values]
    mismatches = tuple(g for g, s in zip(grid, observed) if s != g.expected_sign)

    # ascending theta from here on
    thetas = [g.theta for g in reversed(grid)]
    vals = list(reversed(values))
    roots = []
    for i in range(len(thetas) - 1):
        lo, hi = thetas[i], thetas[i + 1]
        flo, fhi = vals[i], vals[i + 1]
        if flo == 0.0:
            roots.append(ThetaRoot(lo, (lo, lo), 0.0))
            continue
        if _sign(flo) * _sign(fhi) >= 0:
            continue
        roots.append(_bisect(n, m, lo, hi, flo, opts))
    return ThetaSearch(n, m, tuple(grid), tuple(observed), tuple(roots), mismatches)


def _bisect(n, m, lo, hi, flo, opts) -> ThetaRoot:
    while hi - lo >= BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = h_value(n, m, mid, opts)
        if fm == 0.0:
            return ThetaRoot(mid, (lo, hi), 0.0)
        if _sign(fm) == _sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return ThetaRoot(mid, (lo, hi), abs(h_value(n, m, mid, opts)))


def find_theta_roots(n: int, m: int, opts: RootSolveOptions = DEFAULT_OPTIONS) -> list[ThetaRoot]:
    """Zeros of h on (0, pi/n) in increasing order.

    Emits a :class:`SignMismatch` warning for every grid point whose observed
    sign disagrees with the prediction; that is expected when m is small.
    """
    search = search_theta_roots(n, m, opts)
    for g in search.mismatches:
        warnings.warn(
            SignMismatch(f"n={n} m={m}: sign of h at theta={g.theta:.17g} (h={g.h_index}) "
                         f"differs from predicted {g.expected_sign:+d}"),
            stacklevel=2,
        )
    return list(search.roots)
