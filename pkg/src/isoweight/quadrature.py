"""Grids, sphere constants, and quadrature weights shared by all modules.

Angular conventions:

* ``N == 2``: a uniform periodic grid of ``n`` nodes on [0, 2*pi); the
  composite trapezoid rule is spectrally accurate there.
* ``N >= 3``: shapes and functions are axisymmetric, sampled on a uniform
  polar-angle grid of ``n`` (odd) nodes on [0, pi]; integrals over the
  sphere carry the surface factor |S^{N-2}| * sin^{N-2}(theta) and use
  composite Simpson weights.
"""

from __future__ import annotations

import math

import numpy as np

#: default angular node counts, overridable by every caller
DEFAULT_ANGULAR_NODES = {2: 2048}
DEFAULT_ANGULAR_NODES_HIGH_DIM = 1025


def default_angular_nodes(N: int) -> int:
    return DEFAULT_ANGULAR_NODES.get(N, DEFAULT_ANGULAR_NODES_HIGH_DIM)


def unit_ball_volume(N: int) -> float:
    """Volume omega_N of the unit ball in R^N."""
    if N == 1:
        return 2.0
    if N == 2:
        return math.pi
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)


def sphere_area(N: int) -> float:
    """Surface measure |S^{N-1}| = N * omega_N of the unit sphere in R^N."""
    return N * unit_ball_volume(N)


def equator_area(N: int) -> float:
    """|S^{N-2}|, the measure of the unit sphere in R^{N-1}.

    For N = 2 this is the counting measure of S^0 = {-1, +1}, i.e. 2.
    """
    if N < 2:
        raise ValueError("equator_area needs N >= 2")
    if N == 2:
        return 2.0
    return sphere_area(N - 1)


def angular_grid(N: int, n: int | None = None) -> np.ndarray:
    """Angular nodes: periodic on [0, 2*pi) for N=2, else [0, pi] inclusive."""
    if n is None:
        n = default_angular_nodes(N)
    if N == 2:
        return np.arange(n) * (2.0 * math.pi / n)
    if n < 3 or n % 2 == 0:
        raise ValueError("polar grids need an odd node count >= 3 for Simpson weights")
    return np.linspace(0.0, math.pi, n)


def simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def angular_weights(N: int, theta: np.ndarray) -> np.ndarray:
    """Quadrature weights w_j so that sum(w_j f(theta_j)) ~ int_{S^{N-1}} f dsigma.

    The weights include the axisymmetric surface factor for N >= 3; they sum
    to |S^{N-1}| up to quadrature accuracy (exactly, for N = 2).
    """
    n = len(theta)
    if N == 2:
        return np.full(n, 2.0 * math.pi / n)
    h = theta[1] - theta[0]
    return simpson_weights(n, h) * np.sin(theta) ** (N - 2) * equator_area(N)


_GAUSS8_X, _GAUSS8_W = np.polynomial.legendre.leggauss(8)


def angular_cell_weights(N: int, theta: np.ndarray) -> np.ndarray:
    """Exact measure of the angular cell owned by each node.

    Node j owns [theta_j - h/2, theta_j + h/2) (clipped to [0, pi] for
    N >= 3).  These weights are used by the rearrangement machinery, where
    sampled functions are treated as piecewise constant per cell, so that
    level-set measures have closed forms.
    """
    n = len(theta)
    if N == 2:
        return np.full(n, 2.0 * math.pi / n)
    h = theta[1] - theta[0]
    lo = np.clip(theta - h / 2.0, 0.0, math.pi)
    hi = np.clip(theta + h / 2.0, 0.0, math.pi)
    if N == 3:
        cells = np.cos(lo) - np.cos(hi)
    else:
        # 8-point Gauss per cell; the integrand sin^{N-2} is analytic, so
        # this is accurate to near machine precision at any grid size.
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GAUSS8_X[None, :]
        cells = half * (np.sin(nodes) ** (N - 2) @ _GAUSS8_W)
    return cells * equator_area(N)


def angular_derivative(N: int, values: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Centered-difference d/dtheta: periodic for N=2, zero at the poles for N>=3."""
    if N == 2:
        h = 2.0 * math.pi / len(theta)
        return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * h)
    h = theta[1] - theta[0]
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    d[0] = 0.0
    d[-1] = 0.0
    return d


def power_segment(a: float, b: float, alpha: float) -> float:
    """int_a^b r^alpha dr in closed form (a >= 0, b >= a)."""
    if b <= a:
        return 0.0
    if a == 0.0 and alpha <= -1.0:
        raise ValueError("divergent power integral: exponent %g at the origin" % alpha)
    if alpha == -1.0:
        return math.log(b / a)
    e = alpha + 1.0
    return (b**e - a**e) / e


def power_segments(grid: np.ndarray, alpha: float) -> np.ndarray:
    """Vector of int_{r_i}^{r_{i+1}} r^alpha dr over consecutive grid cells."""
    r = np.asarray(grid, dtype=float)
    if r[0] == 0.0 and alpha <= -1.0:
        raise ValueError("divergent power integral: exponent %g at the origin" % alpha)
    if alpha == -1.0:
        with np.errstate(divide="ignore"):
            v = np.log(r)
        return v[1:] - v[:-1]
    e = alpha + 1.0
    powered = r**e
    return (powered[1:] - powered[:-1]) / e
