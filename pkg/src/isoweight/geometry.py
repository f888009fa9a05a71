"""Candidate sets and quadrature of weighted volume and weighted perimeter.

Three set representations are supported:

* ``StarShape``: star-shaped about the origin, given by a radial profile
  m(theta) > 0 on an angular grid.  For N = 2 the grid covers the full
  circle; for N >= 3 shapes are axisymmetric and the grid covers the polar
  angle in [0, pi].
* ``OffsetBall``: a round ball of given radius centered at t * e1.
* ``IntervalUnion``: finite unions of disjoint open intervals on the line.

All quadrature follows the grid conventions of :mod:`isoweight.quadrature`:
trapezoid weights on the periodic circle grid, composite Simpson with the
sin^(N-2) surface factor on the polar grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import (
    angular_derivative,
    angular_grid,
    angular_weights,
    default_angular_nodes,
    equator_area,
)
from .regime import Params

_GRID_RTOL = 1e-9


def _gauss_nodes(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class StarShape:
    """Star-shaped set {rho * omega : 0 <= rho < m(theta(omega))}.

    ``theta_grid`` and ``m`` must have equal length.  The profile must be
    strictly positive so the set contains a neighborhood of the origin.
    Instances are immutable; the stored arrays are read-only copies.
    """

    N: int
    theta_grid: np.ndarray
    m: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise DomainError("StarShape requires an integer dimension N >= 2")
        theta = np.array(self.theta_grid, dtype=float)
        m = np.array(self.m, dtype=float)
        if theta.ndim != 1 or m.shape != theta.shape:
            raise DomainError("theta_grid and m must be 1-D arrays of equal length")
        if theta.size < 4:
            raise DomainError("angular grid too coarse: need at least 4 nodes")
        diffs = np.diff(theta)
        if np.any(diffs <= 0.0):
            raise DomainError("theta_grid must be strictly increasing")
        h = diffs[0]
        if not np.allclose(diffs, h, rtol=_GRID_RTOL, atol=1e-12):
            raise DomainError("theta_grid must be uniform")
        if self.N == 2:
            if not math.isclose(h * theta.size, 2.0 * math.pi, rel_tol=_GRID_RTOL):
                raise DomainError("N=2 grid must cover the full circle periodically")
        else:
            if theta.size % 2 == 0:
                raise DomainError("polar grid needs an odd node count for Simpson weights")
            if abs(theta[0]) > 1e-12 or not math.isclose(theta[-1], math.pi, rel_tol=_GRID_RTOL):
                raise DomainError("polar grid must span [0, pi]")
        if not np.all(np.isfinite(m)) or np.any(m <= 0.0):
            raise DomainError("radial profile m must be finite and positive at every node")
        theta.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "theta_grid", theta)
        object.__setattr__(self, "m", m)

    @classmethod
    def ball(cls, radius: float, N: int = 2, nodes: int | None = None) -> "StarShape":
        """Centered ball of the given radius."""
        if radius <= 0.0:
            raise DomainError("ball radius must be positive")
        if nodes is None:
            nodes = default_angular_nodes(N)
        theta = angular_grid(N, nodes)
        return cls(N, theta, np.full(theta.shape, float(radius)))

    @classmethod
    def from_coeffs(cls, N: int, coeffs, nodes: int | None = None) -> "StarShape":
        """Shape with log-profile expanded in the standard angular basis.

        For N = 2 the basis is [1, cos(theta), sin(theta), cos(2 theta), ...]
        with coefficients in that flat order; for N >= 3 it is the Legendre
        polynomials in cos(theta).  The profile is the exponential of the
        expansion, hence automatically positive.
        """
        if nodes is None:
            nodes = default_angular_nodes(N)
        theta = angular_grid(N, nodes)
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coeffs must be a non-empty 1-D sequence")
        if N == 2:
            logm = np.full(theta.shape, c[0])
            for j in range(1, c.size):
                freq = (j + 1) // 2
                logm += c[j] * (np.cos(freq * theta) if j % 2 == 1 else np.sin(freq * theta))
        else:
            logm = np.polynomial.legendre.legval(np.cos(theta), c)
        return cls(N, theta, np.exp(logm))

    def scaled(self, factor: float) -> "StarShape":
        if factor <= 0.0:
            raise DomainError("scale factor must be positive")
        return StarShape(self.N, self.theta_grid, factor * self.m)

    def to_json(self) -> str:
        return json.dumps(
            {"N": self.N, "theta_grid_size": int(self.theta_grid.size), "m": self.m.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "StarShape":
        data = json.loads(text)
        theta = angular_grid(int(data["N"]), int(data["theta_grid_size"]))
        return cls(int(data["N"]), theta, np.asarray(data["m"], dtype=float))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["theta", "m"])
        for t, v in zip(self.theta_grid, self.m):
            writer.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()


@dataclass(frozen=True)
class OffsetBall:
    """Ball of given radius centered at offset * e1, offset >= 0."""

    N: int
    radius: float
    offset: float

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise DomainError("OffsetBall requires an integer dimension N >= 2")
        if self.radius <= 0.0:
            raise DomainError("OffsetBall radius must be positive")
        if self.offset < 0.0:
            raise DomainError("OffsetBall offset must be nonnegative")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of disjoint nonempty open intervals on the line."""

    intervals: tuple

    def __post_init__(self) -> None:
        ivs = tuple(sorted((float(a), float(b)) for a, b in self.intervals))
        for a, b in ivs:
            if not (a < b):
                raise DomainError("each interval must be nonempty (a < b)")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise DomainError("intervals must be disjoint")
        object.__setattr__(self, "intervals", ivs)


def mu_measure(shape: StarShape, l: float) -> float:
    """Weighted volume of the shape against the |x|^l density.

    Computed as (1/(l+N)) * integral of m(theta)^(l+N) over the sphere,
    which is the exact radial integral of rho^(l+N-1) on [0, m(theta)].
    """
    if l + shape.N <= 0.0:
        raise DomainError("mu_measure requires l + N > 0; the weight is not locally integrable")
    w = angular_weights(shape.N, shape.theta_grid)
    return float(np.sum(w * shape.m ** (l + shape.N)) / (l + shape.N))


def mu_exterior(shape: StarShape, l: float) -> float:
    """Weighted volume of the complement of the shape, inverted orientation.

    Requires l + N < 0 so that |x|^l is integrable at infinity; the radial
    integral on [m(theta), infinity) is m^(l+N) / |l+N|.
    """
    if l + shape.N >= 0.0:
        raise DomainError("mu_exterior requires l + N < 0; the weight is not integrable at infinity")
    w = angular_weights(shape.N, shape.theta_grid)
    return float(np.sum(w * shape.m ** (l + shape.N)) / abs(l + shape.N))


def perimeter(shape: StarShape, k: float) -> float:
    """Weighted perimeter of the shape against the |x|^k surface density.

    Quadrature of m^(k+N-2) * sqrt(m^2 + |d m/d theta|^2) over the sphere,
    with the angular derivative from centered differences on the grid.
    """
    dm = angular_derivative(shape.N, shape.m, shape.theta_grid)
    w = angular_weights(shape.N, shape.theta_grid)
    integrand = shape.m ** (k + shape.N - 2) * np.sqrt(shape.m**2 + dm**2)
    return float(np.sum(w * integrand))


def ratio(shape: StarShape, params: Params) -> float:
    """Scale-invariant isoperimetric quotient of the shape, standard orientation."""
    params.require_standard("ratio")
    if shape.N != params.N:
        raise DomainError("shape dimension does not match params.N")
    expo = (params.k + params.N - 1.0) / (params.l + params.N)
    return perimeter(shape, params.k) / mu_measure(shape, params.l) ** expo


def ratio_inverted(shape: StarShape, params: Params) -> float:
    """Isoperimetric quotient with the exterior volume, inverted orientation.

    The shape describes the bounded component of the complement: the set
    under consideration is everything outside the star-shaped surface.
    """
    if params.standard:
        raise DomainError("ratio_inverted requires inverted-orientation params")
    if shape.N != params.N:
        raise DomainError("shape dimension does not match params.N")
    expo = (params.k + params.N - 1.0) / (params.l + params.N)
    return perimeter(shape, params.k) / mu_exterior(shape, params.l) ** expo


def invert_shape(shape: StarShape) -> StarShape:
    """Image of the shape boundary under the inversion x -> x / |x|^2.

    The radial profile maps to 1/m; pair with exponents (-k-2N+2, -l-2N)
    to transport isoperimetric quotients between orientations.
    """
    return StarShape(shape.N, shape.theta_grid, 1.0 / shape.m)


def power_map_shape(shape: StarShape, k: float) -> StarShape:
    """Image of the shape under the radial power map x -> x |x|^(k/(N-1)).

    Sends the profile m to m^((k+N-1)/(N-1)).  Together with the exponent
    substitution l' = (l(N-1) - kN)/(k+N-1) this converts weighted volumes
    with perimeter weight k into volumes with unweighted perimeter.
    """
    if shape.N < 2:
        raise DomainError("power map needs N >= 2")
    if k + shape.N - 1.0 <= 0.0:
        raise DomainError("power map needs k + N - 1 > 0")
    expo = (k + shape.N - 1.0) / (shape.N - 1.0)
    return StarShape(shape.N, shape.theta_grid, shape.m**expo)


def offset_ball_ratio(
    ball: OffsetBall,
    params: Params,
    angular_nodes: int = 400,
    radial_nodes: int = 200,
) -> float:
    """Isoperimetric quotient of a ball centered at offset * e1.

    The perimeter reduces to a single polar-angle integral; the volume to a
    (radius x polar angle) product integral.  Both use Gauss-Legendre rules.
    When the boundary passes through the origin (offset == radius) and k < 0
    the surface integrand has an integrable singularity; a warning is issued
    and the quadrature value is still returned.
    """
    params.require_standard("offset_ball_ratio")
    if ball.N != params.N:
        raise DomainError("ball dimension does not match params.N")
    t, R, N = ball.offset, ball.radius, ball.N
    k, l = params.k, params.l
    if math.isclose(t, R, rel_tol=1e-12) and k < 0.0:
        warnings.warn(
            "offset equals radius with k < 0: boundary touches the weight "
            "singularity; quadrature has an integrable singularity",
            RuntimeWarning,
            stacklevel=2,
        )
    phi, wphi = _gauss_nodes(angular_nodes, 0.0, math.pi)
    sin_pow = np.sin(phi) ** (N - 2)
    eq = equator_area(N)
    dist2_surface = t * t + R * R + 2.0 * t * R * np.cos(phi)
    per = eq * R ** (N - 1) * float(np.sum(wphi * sin_pow * dist2_surface ** (k / 2.0)))
    rho, wrho = _gauss_nodes(radial_nodes, 0.0, R)
    # product quadrature over (rho, phi); |x|^2 = t^2 + rho^2 + 2 t rho cos(phi)
    dist2 = t * t + rho[:, None] ** 2 + 2.0 * t * rho[:, None] * np.cos(phi)[None, :]
    vol_grid = dist2 ** (l / 2.0) * rho[:, None] ** (N - 1) * sin_pow[None, :]
    vol = eq * float(wrho @ vol_grid @ wphi)
    return per / vol ** ((k + N - 1.0) / (l + N))


def interval_ratio(set_: IntervalUnion, params: Params) -> float:
    """One-dimensional isoperimetric quotient of a finite interval union.

    The perimeter is the sum of the endpoint weights |x|^k; the volume is
    the exact integral of |x|^l over the union.  Requires k > 0 (so endpoint
    weights vanish rather than diverge at the origin) and l > -1.
    """
    if params.N != 1:
        raise DomainError("interval_ratio is the N = 1 quotient")
    if params.k <= 0.0:
        raise DomainError("interval_ratio requires k > 0")
    if params.l <= -1.0:
        raise DomainError("interval_ratio requires l > -1")
    if not set_.intervals:
        raise DomainError("empty interval union has no isoperimetric quotient")
    k, l = params.k, params.l

    def anti(x: float) -> float:
        return math.copysign(abs(x) ** (l + 1.0) / (l + 1.0), x)

    per = sum(abs(a) ** k + abs(b) ** k for a, b in set_.intervals)
    vol = sum(anti(b) - anti(a) for a, b in set_.intervals)
    return per / vol ** (k / (l + 1.0))
