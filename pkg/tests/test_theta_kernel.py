import itertools
import math
import warnings

import numpy as np
import pytest

from threeterm.errors import RealnessViolation, SignMismatch
from threeterm.polynomial import deflate, evaluate
from threeterm.theta_kernel import (
    ThetaContext,
    build_theta_context,
    cheb_ratio,
    curve_height,
    find_theta_roots,
    grid_offsets,
    h_eval,
    h_value,
    height_bound,
    outside_factor,
    p_theta,
    search_theta_roots,
    sign_grid,
)


def h_direct(n, m, theta):
    """h from a full numpy solve of P_theta; shares nothing with the deflation path."""
    rn = math.sin(n * theta) / math.sin(theta)
    rn1 = math.sin((n - 1) * theta) / math.sin(theta)
    coeffs = [1.0] + [0.0] * (n - 2) + [-rn, rn1]
    total = 0j
    for z in np.roots(coeffs):
        total += 1.0 / (z ** (m + 1) * (n * z ** (n - 1) - rn))
    return total.real


def test_cheb_ratio_examples():
    assert cheb_ratio(2, math.pi / 6) == pytest.approx(math.sqrt(3))
    assert cheb_ratio(5, 0.0) == 5
    assert cheb_ratio(3, math.pi / 3) == pytest.approx(0, abs=1e-15)


def test_cheb_ratio_continuous_near_zero():
    for n in range(1, 9):
        for t in (1e-9, 1e-12, 0.0):
            assert cheb_ratio(n, t) == pytest.approx(n, rel=1e-12)
        assert cheb_ratio(n, 2e-8) == pytest.approx(math.sin(n * 2e-8) / math.sin(2e-8), rel=1e-12)


def test_context_n2():
    ctx = build_theta_context(2, math.pi / 6)
    assert ctx.p_theta.coeffs == pytest.approx([1, -math.sqrt(3), 1])
    assert ctx.zeta[0] == pytest.approx(complex(math.cos(math.pi / 6), -0.5))
    assert ctx.zeta[1] == pytest.approx(complex(math.cos(math.pi / 6), 0.5))
    assert len(ctx.zeta) == 2


def test_context_theta_zero_n3():
    ctx = build_theta_context(3, 0.0)
    assert ctx.p_theta.coeffs == pytest.approx([2, -3, 0, 1])
    assert ctx.zeta == pytest.approx([1, 1, -2])


def test_context_n6_outside_unit_disk():
    ctx = build_theta_context(6, math.pi / 12)
    direct = np.roots(p_theta(6, math.pi / 12).coeffs[::-1])
    outside = [z for z in direct if abs(z) > 1 + 1e-9]
    assert len(outside) == 4
    for z in ctx.zeta[2:]:
        assert abs(z) > 1
        assert min(abs(z - w) for w in outside) < 1e-12


def test_context_domain():
    with pytest.raises(ValueError):
        build_theta_context(4, math.pi / 4)
    with pytest.raises(ValueError):
        build_theta_context(4, -0.1)
    with pytest.raises(ValueError):
        build_theta_context(1, 0.1)


def test_outside_factor_is_the_deflation():
    for n in range(3, 8):
        theta = 0.37 / n
        P = p_theta(n, theta)
        q = deflate(deflate(P, complex(math.cos(theta), math.sin(theta))),
                    complex(math.cos(theta), -math.sin(theta)))
        assert q.coeffs == pytest.approx(outside_factor(n, theta).coeffs, abs=1e-13)


def test_h_n2_examples():
    ctx = build_theta_context(2, math.pi / 5)
    assert h_eval(ctx, 4) == pytest.approx(0, abs=1e-14)
    ctx = build_theta_context(2, math.pi / 10)
    assert h_eval(ctx, 4) == pytest.approx(-1 / math.sin(math.pi / 10), rel=1e-13)


def test_h_n6_range_sign():
    theta = math.pi / 6 - math.pi / 30
    direct = h_direct(6, 30, theta)
    assert direct < 0
    assert h_value(6, 30, theta) == pytest.approx(direct, rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_h_matches_direct_solve(n):
    for m in (n, 3 * n + 1, 10 * n):
        for theta in np.linspace(0.05, math.pi / n - 0.05, 7):
            assert h_value(n, m, theta) == pytest.approx(h_direct(n, m, theta), rel=1e-8, abs=1e-10)


def test_h_n2_closed_form_sweep():
    thetas = np.linspace(0.01, math.pi / 2 - 0.01, 60)
    for m in range(1, 101, 3):
        for t in thetas:
            assert abs(h_value(2, m, t) + math.sin((m + 1) * t) / math.sin(t)) <= 1e-10


def test_h_large_m_no_overflow():
    v = h_value(5, 10 ** 6, 0.3)
    assert math.isfinite(v)


def test_realness_violation():
    ctx = build_theta_context(4, 0.2)
    broken = ThetaContext(ctx.n, ctx.theta, ctx.ratio_n, ctx.ratio_n1, ctx.p_theta,
                          (ctx.zeta[0], ctx.zeta[1], ctx.zeta[2] * 1j, ctx.zeta[3]), ctx.dp_at_zeta)
    with pytest.raises(RealnessViolation):
        h_eval(broken, 5)


def test_curve_height_examples():
    assert curve_height(2, 0.0) == 4
    assert curve_height(2, 1e-9) == pytest.approx(4)
    assert curve_height(2, math.pi / 2) == 0
    assert curve_height(2, math.pi / 4) == pytest.approx(2)
    assert curve_height(3, 0.0) == pytest.approx(6.75)
    assert height_bound(3) == 6.75


@pytest.mark.parametrize("n", range(2, 9))
def test_curve_height_range(n):
    top = height_bound(n)
    for t in np.linspace(0, math.pi / n, 400):
        v = curve_height(n, float(t))
        assert 0 <= v <= top
        if t >= 0.01:
            assert v < top - 1e-9


@pytest.mark.parametrize("n", range(2, 9))
def test_trinomial_root_structure(n):
    for j in range(200):
        theta = (j + 1) * math.pi / n / 201
        ctx = build_theta_context(n, theta)
        P = ctx.p_theta
        assert abs(evaluate(P, ctx.zeta[0])) < 1e-12
        assert abs(evaluate(P, ctx.zeta[1])) < 1e-12
        for z in ctx.zeta[2:]:
            assert abs(z) > 1 + 1e-9
            assert abs(evaluate(P, z)) < 1e-10 * (1 + abs(z)) ** n
        gaps = [abs(a - b) for a, b in itertools.combinations(ctx.zeta, 2)]
        assert min(gaps) > 1e-9


def test_sign_grid_n2_m4():
    grid = sign_grid(2, 4)
    assert [g.expected_sign for g in grid] == [-1, 1, -1]
    assert grid[1].theta == pytest.approx(math.pi / 4)
    for g in grid:
        observed = -math.sin(5 * g.theta) / math.sin(g.theta)
        assert np.sign(observed) == g.expected_sign


def test_sign_grid_p1():
    grid = sign_grid(3, 4)
    assert len(grid) == 2
    assert [g.expected_sign for g in grid] == [1, -1]


def test_sign_grid_quintic_m200():
    grid = sign_grid(5, 200)
    assert len(grid) == 41
    g39 = next(g for g in grid if g.h_index == 39)
    assert g39.expected_sign == 1
    thetas = [g.theta for g in grid]
    assert thetas == sorted(thetas, reverse=True)
    assert all(0 < t < math.pi / 5 for t in thetas)
    signs = [g.expected_sign for g in grid]
    assert all(a == -b for a, b in zip(signs, signs[1:]))


def test_sign_grid_requires_m_ge_n():
    with pytest.raises(ValueError):
        sign_grid(5, 4)


def test_grid_offsets():
    lo, hi = grid_offsets(4, 41)
    assert lo == pytest.approx(math.pi / (4 * 4 * 41))
    assert hi == pytest.approx(min(lo, 0.25 * math.pi / 41 / 2))
    assert grid_offsets(4, 40) == pytest.approx((lo * 41 / 40, lo * 41 / 40), rel=1e-15)


def test_theta_roots_n2():
    roots = find_theta_roots(2, 4)
    assert [r.theta for r in roots] == pytest.approx([math.pi / 5, 2 * math.pi / 5], abs=1e-12)
    for r in roots:
        assert r.bracket[0] <= r.theta <= r.bracket[1]
        assert r.bracket[1] - r.bracket[0] < 1e-13
    roots = find_theta_roots(2, 30)
    assert [r.theta for r in roots] == pytest.approx([k * math.pi / 31 for k in range(1, 16)], abs=1e-12)


def test_theta_roots_quintic_m200_count():
    roots = find_theta_roots(5, 200)
    assert len(roots) == 40
    thetas = [r.theta for r in roots]
    assert thetas == sorted(thetas)


def test_sign_mismatch_is_a_warning(monkeypatch):
    import threeterm.theta_kernel as tk

    real = tk.h_value

    def flipped(n, m, theta, opts=tk.DEFAULT_OPTIONS):
        return -real(n, m, theta, opts)

    monkeypatch.setattr(tk, "h_value", flipped)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        roots = tk.find_theta_roots(3, 9)
    assert any(issubclass(w.category, SignMismatch) for w in caught)
    assert len(roots) == 3


def test_search_records_observed_signs():
    s = search_theta_roots(4, 30)
    assert len(s.observed) == len(s.grid) == 30 // 4 + 1
    assert s.mismatches == ()
