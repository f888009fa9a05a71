"""Acceptance battery: one test per numbered criterion, one pytest line each.

Every expected value is either a closed form computed independently inside
the test, a property that must hold exactly, or a value frozen from an
independent high-resolution oracle run (marked where used).
"""

from __future__ import annotations

import math
import time

import numpy as np

from isoweight import (
    CknParams,
    OffsetBall,
    Params,
    PerturbationMode,
    SampledFunction,
    StarShape,
    c_rad,
    ckn_radial_infimum,
    ckn_thresholds,
    classify,
    eigenvalue_radial,
    finite_difference_variation_check,
    hardy_littlewood_check,
    interval_brute_force,
    invert_shape,
    l_one,
    l_upper,
    minimize_ratio,
    offset_ball_ratio,
    polya_szego_check,
    ratio,
    ratio_inverted,
    schwarz_symmetrize,
    second_variation,
    solve_1d,
)
from isoweight.quadrature import angular_grid
from isoweight.rearrange import zeta_uniform_radial_grid


def draw_standard(rng, N, k_range=(-0.8, 3.0)):
    while True:
        k = float(rng.uniform(*k_range))
        l = float(rng.uniform(-N + 0.1, 4.0))
        if k + N - 1.0 > 0.05 and l + N > 0.05:
            return Params(k, l, N)


def test_criterion_01_ball_ratio_reproduces_radial_constant():
    started = time.time()
    rng = np.random.default_rng(101)
    done = 0
    while done < 200:
        N = int(rng.integers(2, 4))
        params = draw_standard(rng, N)
        if classify(params).verdict != "RadialOptimal":
            continue
        radius = float(rng.uniform(0.3, 3.0))
        quad = ratio(StarShape.ball(radius, N), params)
        exact = c_rad(params)
        assert abs(quad - exact) <= 1e-8 * exact
        done += 1
    assert time.time() - started < 5.0
    # classical unweighted constants, quadrature and closed form
    for N, value in ((2, 2.0 * math.sqrt(math.pi)), (3, (36.0 * math.pi) ** (1.0 / 3.0))):
        params = Params(0.0, 0.0, N)
        assert abs(c_rad(params) - value) <= 1e-10 * value
        assert abs(ratio(StarShape.ball(1.0, N), params) - value) <= 1e-10 * value


def test_criterion_02_second_variation_exactness_and_sign():
    rng = np.random.default_rng(102)
    for _ in range(100):
        N = int(rng.integers(2, 4))
        params = draw_standard(rng, N)
        mode = PerturbationMode(N, int(rng.integers(1, 7)),
                                amplitude=float(rng.uniform(0.5, 1.5)))
        # raises VerificationError beyond the 1e-4 band; the angular grid is
        # refined so its own O(h^2) bias sits an order below that band
        finite_difference_variation_check(params, mode, tolerance=1e-4,
                                          nodes=8192 if N == 2 else 8193)
    # the first nonconstant mode (gamma = N-1) decides symmetry breaking:
    # its sign must agree with the threshold curve on every draw
    discrepancies = 0
    for _ in range(10_000):
        N = int(rng.integers(2, 6))
        params = draw_standard(rng, N)
        sv = second_variation(params, PerturbationMode(N, 1))
        predicted_unstable = params.l > l_upper(params.k, N)
        if (sv < 0.0) != predicted_unstable:
            discrepancies += 1
    assert discrepancies == 0


def test_criterion_03_minimizer_finds_breaking_and_respects_certified():
    started = time.time()
    broken = Params(0.0, 2.0, 2)
    res = minimize_ratio(broken)
    assert res.converged
    assert res.value <= 0.99 * c_rad(broken)
    certified = Params(0.0, -0.5, 2)
    res2 = minimize_ratio(certified)
    assert res2.converged
    assert abs(res2.value - c_rad(certified)) <= 1e-6 * c_rad(certified)
    assert time.time() - started < 60.0


def test_criterion_04_far_balls_drive_ratio_to_zero():
    params = Params(1.0, 4.0, 2)
    offsets = np.array([4.0, 8.0, 16.0, 32.0])
    values = np.array([offset_ball_ratio(OffsetBall(2, 1.0, float(t)), params)
                       for t in offsets])
    assert np.all(np.diff(values) < 0.0)
    slope = np.polyfit(np.log(offsets), np.log(values), 1)[0]
    # mass grows like t^(l+N-1) along the orbit while perimeter grows like
    # t^k, so the ratio decays with exponent k - (k+N-1)(l+N-1)/(l+N) = -1/3
    assert abs(slope + 1.0 / 3.0) <= 0.02


def test_criterion_05_one_dimensional_exactness():
    rng = np.random.default_rng(105)
    for _ in range(25):
        l = float(rng.uniform(-0.5, 3.0))
        k = float(rng.uniform(0.05, l + 0.95))  # one-sided regime k < l+1
        params = Params(k, l, 1)
        sol = solve_1d(params, verify=False)
        closed = (l + 1.0) ** (k / (l + 1.0))
        assert sol.kind == "one_sided"
        assert abs(sol.value - closed) <= 1e-12 * closed
        _, brute = interval_brute_force(params)  # 101 x 100 candidate grid
        assert brute >= sol.value - 1e-9
    for _ in range(10):
        l = float(rng.uniform(-0.5, 1.5))
        k = float(rng.uniform(l + 1.0, l + 3.0))  # symmetric regime
        params = Params(k, l, 1)
        sol = solve_1d(params, verify=False)
        _, brute = interval_brute_force(params)
        assert brute >= sol.value - 1e-9


def test_criterion_06_inversion_identity():
    rng = np.random.default_rng(106)
    checked = 0
    for N, nodes in ((2, 32768), (3, 16385)):
        for _ in range(25):
            coeffs = np.concatenate(([0.0], rng.normal(0.0, 0.08, 4)))
            shape = StarShape.from_coeffs(N, coeffs, nodes=nodes)
            params = draw_standard(rng, N)
            lhs = ratio(shape, params)
            rhs = ratio_inverted(invert_shape(shape), params.inverted_image())
            assert abs(lhs - rhs) <= 1e-8 * abs(lhs)
            checked += 1
    assert checked == 50


def test_criterion_07_rearrangement_suite():
    started = time.time()
    rng = np.random.default_rng(107)
    # equimeasurability: distribution functions agree within one grid cell
    for N in (2, 3):
        for l in (0.0, 0.7):
            radial = zeta_uniform_radial_grid(2.0, 48, N)
            theta = angular_grid(N, 64 if N == 2 else 65)
            for _ in range(5):
                vals = rng.uniform(0.0, 1.0, (radial.size, theta.size))
                vals[-1] = 0.0
                f = SampledFunction(N, radial, theta, vals)
                star = schwarz_symmetrize(f, l)
                thresholds = rng.uniform(0.0, 1.0, 50)
                gap = np.abs(f.mu_distribution(thresholds, l)
                             - star.mu_distribution(thresholds, l, N))
                assert np.max(gap) <= f.cell_weights(l).max()
    # Hardy-Littlewood pairing on 500 random pairs
    radial = zeta_uniform_radial_grid(2.0, 48, 2)
    theta = angular_grid(2, 64)
    hl_violations = 0
    for _ in range(500):
        l = float(rng.uniform(-0.5, 1.5))
        vu = rng.uniform(0.0, 1.0, (radial.size, theta.size))
        vv = rng.uniform(0.0, 1.0, (radial.size, theta.size))
        vu[-1] = 0.0
        vv[-1] = 0.0
        lhs, rhs = hardy_littlewood_check(
            SampledFunction(2, radial, theta, vu),
            SampledFunction(2, radial, theta, vv), l)
        if lhs > rhs + 1e-9 * (abs(lhs) + abs(rhs)):
            hl_violations += 1
    assert hl_violations == 0
    # gradient comparison, p in {1, 2, 3}, 20 random bumps in each of two
    # certified regimes (volume weight flat, then both weights negative)
    radial = zeta_uniform_radial_grid(2.0, 80, 2)
    theta = angular_grid(2, 192)
    ps_violations = 0
    for regime in ("flat", "negative"):
        for p in (1.0, 2.0, 3.0):
            for _ in range(20):
                if regime == "flat":
                    params = Params(float(rng.uniform(0.0, 1.0)), 0.0, 2)
                else:
                    k = float(rng.uniform(-0.5, -0.1))
                    params = Params(k, 2.0 * k - 0.2, 2)
                bump = np.exp(-2.0 * radial**2)
                wobble = 1.0 + 0.3 * np.cos(theta - rng.uniform(0.0, 2.0 * math.pi))
                vals = bump[:, None] * wobble[None, :]
                vals[-1] = 0.0
                u = SampledFunction(2, radial, theta, vals)
                lhs, rhs = polya_szego_check(u, params, p)
                if lhs < rhs - 0.02 * (abs(lhs) + abs(rhs)):
                    ps_violations += 1
    assert ps_violations == 0
    assert time.time() - started < 120.0


def test_criterion_08_threshold_algebra():
    rng = np.random.default_rng(108)
    checked = 0
    while checked < 1000:
        N = int(rng.integers(2, 5))
        p = float(rng.uniform(1.05, 4.5))
        q = float(rng.uniform(p + 0.05, p + 4.0))
        if p < N and q >= N * p / (N - p):
            continue
        th = ckn_thresholds(p, q, N)
        assert max(0.0, th["a1"]) < th["a2"] < 1.0
        if N >= 3:
            assert th["a2"] < th["a3"]
        if N == 2 and 1.0 / q > 1.0 / p - 1.0 / 3.0:
            assert th["a2"] < th["a4"]
        checked += 1
    for _ in range(1000):
        N = int(rng.integers(2, 5))
        k = float(rng.uniform(0.0, 4.0))
        assert l_one(k, N) <= l_upper(k, N) + 1e-12
    # fixture (p, q, N) = (2, 4, 3) against an in-test bisection oracle on
    # the defining monotone equations (squared affine shift against a fixed
    # right-hand side), plus the exact rational values of a1 and a2
    p, q, N = 2.0, 4.0, 3

    def bisect_root(rhs):
        lo, hi = 1.0 - N / p, 1.0 - N / p + 100.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (mid - (1.0 - N / p)) ** 2 - rhs > 0.0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    conj = p / (p - 1.0)
    oracle = {
        "a1": 1.0 / 6.0,
        "a2": 1.0 / 4.0,
        "a3": bisect_root((N - 1.0) ** 2 / (N * (1.0 / p - 1.0 / q) * (1.0 - q / p + q) ** 2)),
        "a_star": bisect_root((N - 1.0) * (1.0 / (q - p) - 1.0 / (q + conj))),
    }
    got = ckn_thresholds(p, q, N)
    for key, want in oracle.items():
        assert abs(got[key] - want) <= 1e-9
    # cross-check the bisection oracle against the closed-form square roots
    assert abs(oracle["a3"] - (math.sqrt(16.0 / 27.0) - 0.5)) < 1e-12
    assert abs(oracle["a_star"] - (math.sqrt(2.0 / 3.0) - 0.5)) < 1e-12


def test_criterion_09_eigenvalue_dirichlet_and_scaling():
    lam = eigenvalue_radial(2.0, 0.0, 1.0, N=3, nodes=2000)
    assert abs(lam - math.pi**2) <= 1e-3 * math.pi**2
    # dilation law lambda(B_R) = R^(beta p - p) lambda(B_1), general p
    p, beta = 2.5, 0.3
    lam1 = eigenvalue_radial(p, beta, 1.0, N=4, nodes=64)
    lam2 = eigenvalue_radial(p, beta, 2.0, N=4, nodes=64)
    want = lam1 * 2.0 ** (beta * p - p)
    assert abs(lam2 - want) <= 1e-3 * want


def test_criterion_10_ckn_radial_estimate():
    res = ckn_radial_infimum(CknParams(0.0, 2.0, 6.0, 3))
    assert np.all(np.diff(res.history) <= 0.0)
    # frozen oracle: 1200-node log grid, 200 sweeps, value 5.47974615
    assert abs(res.value - 5.47974615) <= 0.02 * 5.47974615
    assert res.bound == "upper"
