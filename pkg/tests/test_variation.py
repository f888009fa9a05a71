"""Second variation at the ball, shape search, one-dimensional solver."""

from __future__ import annotations

import math

import numpy as np
import pytest

from isoweight import (
    DomainError,
    OneDSolution,
    Params,
    PerturbationMode,
    PerturbedFamily,
    VerificationError,
    c_rad,
    finite_difference_variation_check,
    interval_brute_force,
    l_upper,
    minimize_ratio,
    mu_measure,
    second_variation,
    solve_1d,
)
from isoweight.quadrature import sphere_area


def test_mode_eigenvalues():
    # Laplace-Beltrami eigenvalues on the sphere: j^2 on the circle,
    # j(j+N-2) in higher dimension
    assert PerturbationMode(2, 1).gamma == 1.0
    assert PerturbationMode(2, 3).gamma == 9.0
    assert PerturbationMode(3, 1).gamma == 2.0
    assert PerturbationMode(3, 2).gamma == 6.0
    assert PerturbationMode(4, 2).gamma == 8.0
    with pytest.raises(DomainError):
        PerturbationMode(2, -1)
    with pytest.raises(DomainError):
        PerturbationMode(2, 1, 0.0)


def test_second_variation_closed_form():
    rng = np.random.default_rng(27)
    for _ in range(200):
        N = int(rng.integers(2, 6))
        k = float(rng.uniform(-0.5, 3.0))
        l = float(rng.uniform(-N + 0.1, 4.0))
        if k + N - 1.0 <= 0.05:
            continue
        idx = int(rng.integers(1, 5))
        mode = PerturbationMode(N, idx)
        got = second_variation(Params(k, l, N), mode)
        want = (k + N - 1.0) * (k - l - 1.0) + mode.gamma
        assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-12)


def test_second_variation_vanishes_on_threshold():
    # the first nontrivial mode changes sign exactly at l_upper
    rng = np.random.default_rng(28)
    for _ in range(100):
        N = int(rng.integers(2, 5))
        k = float(rng.uniform(-0.3, 3.0))
        if k + N - 1.0 <= 0.05:
            continue
        l_star = l_upper(k, N)
        mode = PerturbationMode(N, 1)
        assert abs(second_variation(Params(k, l_star, N), mode)) < 1e-12
        assert second_variation(Params(k, l_star - 0.1, N), mode) > 0.0
        assert second_variation(Params(k, l_star + 0.1, N), mode) < 0.0


def test_finite_difference_matches_closed_form():
    rng = np.random.default_rng(29)
    for _ in range(30):
        N = int(rng.integers(2, 5))
        k = float(rng.uniform(0.1, 2.5))
        l = float(rng.uniform(-0.5, 3.0))
        idx = int(rng.integers(1, 4))
        amp = float(rng.uniform(0.5, 1.5))
        mode = PerturbationMode(N, idx, amp)
        j1, j2 = finite_difference_variation_check(Params(k, l, N), mode)
        sv = second_variation(Params(k, l, N), mode)
        assert abs(j1) < 1e-4 * (1.0 + abs(j2))
        assert abs(j2 / amp**2 - sv) < 1e-4 * (1.0 + abs(sv))


def test_finite_difference_convergence_order():
    params = Params(1.5, 0.8, 2)
    mode = PerturbationMode(2, 2)
    sv = second_variation(params, mode)
    errs = []
    for t in (0.05, 0.025, 0.0125):
        _, j2 = finite_difference_variation_check(params, mode, t_step=t, tolerance=1.0)
        errs.append(abs(j2 - sv))
    # centered differences: error drops by about 4 per halving until the
    # quartic term of the family takes over
    assert errs[0] > errs[1] > errs[2]
    assert errs[0] / errs[1] > 2.5
    assert errs[2] < 1e-3 * (1.0 + abs(sv))


def test_perturbed_family_compensation():
    rng = np.random.default_rng(30)
    for _ in range(10):
        N = int(rng.integers(2, 4))
        k = float(rng.uniform(0.1, 2.0))
        l = float(rng.uniform(-0.5, 2.0))
        idx = int(rng.integers(1, 4))
        fam = PerturbedFamily.build(Params(k, l, N), PerturbationMode(N, idx, 0.4))
        assert fam.s1 == 0.0
        assert fam.compensation(0.0) == 0.0
        t = float(rng.uniform(-0.5, 0.5))
        target = sphere_area(N) / (l + N)
        got = mu_measure(fam.shape(t), l)
        assert math.isclose(got, target, rel_tol=1e-10)
    with pytest.raises(DomainError):
        PerturbedFamily.build(Params(1.0, 0.5, 2), PerturbationMode(2, 0))


def test_one_dimensional_family_derivatives():
    fam = PerturbedFamily.build(Params(2.0, 1.5, 1), PerturbationMode(1, 0))
    assert fam.s1 == 1.0
    assert fam.s2 == -3.0
    # J(t) = (1+s)^k + (1-t)^k with s(t) restoring the l-volume
    j0 = fam.perimeter_value(0.0)
    assert math.isclose(j0, 2.0, rel_tol=1e-12)


def test_minimize_finds_breaking_and_respects_optimality():
    broken = Params(0.0, 2.0, 2)
    res = minimize_ratio(broken, mode_count=3, restarts=1)
    assert res.converged
    assert res.value <= 0.99 * c_rad(broken)
    assert len(res.coefficients) == 3
    assert res.trace and res.trace[-1][0] >= res.trace[0][0]
    certified = Params(0.0, -0.5, 2)
    res = minimize_ratio(certified, mode_count=3, restarts=1)
    assert res.converged and not res.degenerate
    assert abs(res.value - c_rad(certified)) <= 1e-6 * c_rad(certified)


def test_solve_1d_fixtures_and_validation():
    sol = solve_1d(Params(1.0, 1.0, 1))
    assert isinstance(sol, OneDSolution)
    assert sol.kind == "one_sided" and sol.interval == (0.0, 1.0)
    assert math.isclose(sol.value, math.sqrt(2.0), rel_tol=1e-14)
    sol = solve_1d(Params(3.0, 1.0, 1))
    assert sol.kind == "symmetric" and sol.interval == (-1.0, 1.0)
    assert math.isclose(sol.value, 2.0, rel_tol=1e-14)
    # the two branches agree on the boundary k = l+1
    boundary = solve_1d(Params(2.0, 1.0, 1))
    assert math.isclose(boundary.value, 2.0, rel_tol=1e-14)
    with pytest.raises(DomainError):
        solve_1d(Params(1.0, 1.0, 2))
    with pytest.raises(DomainError):
        solve_1d(Params(-0.5, -0.8, 1))


def test_brute_force_interval_scan():
    rng = np.random.default_rng(33)
    for _ in range(10):
        k = float(rng.uniform(0.2, 3.0))
        l = float(rng.uniform(-0.8, 3.0))
        params = Params(k, l, 1)
        sol = solve_1d(params, verify=False)
        _, best = interval_brute_force(params)
        assert best >= sol.value - 1e-9
