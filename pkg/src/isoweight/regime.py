"""Exponent-regime classification, sharp radial constants, and threshold curves.

Everything here is closed form.  The central object is the scale-invariant
ratio of weighted perimeter to weighted volume,

    R(M) = P_k(M) / mu_l(M)^((k+N-1)/(l+N)),

where P_k integrates |x|^k over the boundary and mu_l integrates |x|^l over
the set.  Centered balls give the value ``c_rad``; this module decides, for
each admissible (k, l, N), whether centered balls minimize R (RadialOptimal),
provably fail to (SymmetryBroken), whether the infimum is zero (ZeroInfimum),
or whether the question is open (Unknown).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .quadrature import unit_ball_volume

RADIAL_OPTIMAL = "RadialOptimal"
SYMMETRY_BROKEN = "SymmetryBroken"
ZERO_INFIMUM = "ZeroInfimum"
UNKNOWN = "Unknown"

STANDARD = "standard"
INVERTED = "inverted"


@dataclass(frozen=True)
class Params:
    """Exponent triple (k, l, N): |x|^k weighs perimeter, |x|^l weighs volume.

    Admissible sign regimes:

    * standard: k+N-1 > 0 and l+N > 0 (weights locally integrable at 0);
    * inverted: k+N-1 < 0 and l+N < 0 (integrable at infinity; the natural
      competitors are exteriors of balls).

    Mixed signs and the degenerate lines k+N-1 = 0, l+N = 0 are rejected.
    """

    k: float
    l: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer, got %r" % (self.N,))
        object.__setattr__(self, "N", int(self.N))
        dk = self.k + self.N - 1
        dl = self.l + self.N
        if dk > 0 and dl > 0:
            orientation = STANDARD
        elif dk < 0 and dl < 0:
            orientation = INVERTED
        elif dk == 0:
            raise DomainError("degenerate perimeter weight: k+N-1 = 0")
        elif dl == 0:
            raise DomainError("degenerate volume weight: l+N = 0")
        else:
            raise DomainError(
                "mixed sign regime: k+N-1 = %g and l+N = %g must be both "
                "positive or both negative" % (dk, dl)
            )
        object.__setattr__(self, "orientation", orientation)

    orientation: str = field(init=False)

    @property
    def standard(self) -> bool:
        return self.orientation == STANDARD

    def require_standard(self, what: str = "this operation"):
        if not self.standard:
            raise DomainError(
                "%s needs the standard orientation (k+N-1 > 0 and l+N > 0); "
                "got k+N-1 = %g, l+N = %g"
                % (what, self.k + self.N - 1, self.l + self.N)
            )

    def inverted_image(self) -> "Params":
        """The triple obtained under the inversion x -> x/|x|^2.

        Maps between the two orientations: k~ = -k-2N+2, l~ = -l-2N.  The
        isoperimetric ratio of a set equals the ratio of its inverted image
        with these exponents.
        """
        return Params(-self.k - 2 * self.N + 2, -self.l - 2 * self.N, self.N)


@dataclass(frozen=True)
class RegimeReport:
    """Classification verdict plus the thresholds that delimit the regimes.

    ``certifying_condition`` names the case of the optimality theorem that
    fired (i/ii/iii/iv standard, j/jj/jjj/jv inverted, oneD-a for N=1), or
    "necessity" (the necessary condition for radial optimality fails:
    symmetry breaks), or "positivity" (the positivity criterion
    l(N-1)/N <= k fails: the infimum is zero), or None for Unknown.
    """

    verdict: str
    certifying_condition: str | None
    thresholds: dict
    notes: tuple = ()


@dataclass(frozen=True)
class CknParams:
    """Exponent tuple for the weighted Sobolev (CKN) energy.

    E(v) = int |x|^{ap} |grad v|^p dx / (int |x|^{bq} |v|^q dx)^{p/q},
    with b pinned by scale invariance: b = N(1/p - 1/q) + a - 1.
    """

    a: float
    p: float
    q: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))
        if not (1.0 <= self.p <= self.q):
            raise DomainError("need 1 <= p <= q, got p=%g q=%g" % (self.p, self.q))
        if self.p < self.N:
            pstar = self.N * self.p / (self.N - self.p)
            if self.q > pstar:
                raise DomainError(
                    "q=%g exceeds the critical exponent Np/(N-p)=%g" % (self.q, pstar)
                )
        if not math.isfinite(self.q):
            raise DomainError("q must be finite")
        if not self.a > 1.0 - self.N / self.p:
            raise DomainError(
                "need a > 1 - N/p = %g, got a=%g" % (1.0 - self.N / self.p, self.a)
            )
        object.__setattr__(
            self, "b", self.N * (1.0 / self.p - 1.0 / self.q) + self.a - 1.0
        )

    b: float = field(init=False)

    @property
    def p_critical(self) -> float:
        return self.N * self.p / (self.N - self.p) if self.p < self.N else math.inf


def c_rad(params: Params) -> float:
    """Ratio of a centered ball: (N omega_N)^{(l-k+1)/(l+N)} (l+N)^{(k+N-1)/(l+N)}."""
    params.require_standard("c_rad")
    k, l, N = params.k, params.l, params.N
    s = N * unit_ball_volume(N)
    return s ** ((l - k + 1.0) / (l + N)) * (l + N) ** ((k + N - 1.0) / (l + N))


def c_rad_inverted(params: Params) -> float:
    """Ratio of the exterior of a centered ball in the inverted orientation.

    Same expression as ``c_rad`` with |l+N| in place of l+N; equals
    c_rad of the inverted-image triple.
    """
    if params.standard:
        raise DomainError(
            "c_rad_inverted needs the inverted orientation (k+N-1 < 0 and l+N < 0)"
        )
    k, l, N = params.k, params.l, params.N
    s = N * unit_ball_volume(N)
    return s ** ((l - k + 1.0) / (l + N)) * abs(l + N) ** ((k + N - 1.0) / (l + N))


def condition_iii_holds(params: Params) -> bool:
    """The N>=3 sufficient condition for radial optimality with 0 <= k <= l+1:

        1/(l+N) >= 1/(k+N-1) - (N-1)^2 / (N (k+N-1)^3).
    """
    params.require_standard("condition_iii_holds")
    k, l, N = params.k, params.l, params.N
    if N < 3:
        raise DomainError("condition iii is stated for N >= 3")
    if not (0.0 <= k <= l + 1.0):
        raise DomainError("condition iii needs 0 <= k <= l+1")
    d = k + N - 1.0
    return 1.0 / (l + N) >= 1.0 / d - (N - 1.0) ** 2 / (N * d**3)


def _condition_iv_second_branch(k: float, l: float) -> bool:
    # N = 2 analogue of condition iii for k >= 1/3
    return 1.0 / (l + 2.0) >= 1.0 / (k + 1.0) - 16.0 / (27.0 * (k + 1.0) ** 3)


def radial_certificate(params: Params) -> str | None:
    """Tag of the first optimality-theorem case that covers (k, l, N), if any.

    Standard orientation only.  Cases: (i) l+1 <= k for any N >= 1;
    (ii) N >= 2, k <= l+1, l(N-1)/N <= k <= 0; (iii) N >= 3, 0 <= k <= l+1
    plus the cubic threshold inequality; (iv) its N = 2 analogue.
    """
    params.require_standard("radial_certificate")
    k, l, N = params.k, params.l, params.N
    if l + 1.0 <= k:
        return "i"
    if N >= 2 and k <= l + 1.0 and l * (N - 1.0) / N <= k <= 0.0:
        return "ii"
    if N >= 3 and 0.0 <= k <= l + 1.0 and condition_iii_holds(params):
        return "iii"
    if N == 2 and k <= l + 1.0:
        if l <= 0.0 <= k <= 1.0 / 3.0:
            return "iv"
        if k >= 1.0 / 3.0 and _condition_iv_second_branch(k, l):
            return "iv"
    return None


_INVERTED_TAG = {"i": "j", "ii": "jj", "iii": "jjj", "iv": "jv",
                 "oneD-a": "oneD-a", "oneD-b": "oneD-b",
                 "necessity": "necessity", "positivity": "positivity"}


def classify(params: Params) -> RegimeReport:
    """Decide the regime of (k, l, N).

    Verdict semantics (standard orientation):

    * RadialOptimal: a case of the optimality theorem certifies that
      centered balls minimize the ratio (ties go to RadialOptimal since the
      theorem cases use non-strict inequalities).
    * ZeroInfimum: k < l(N-1)/N, so balls drifting to infinity drive the
      ratio to zero and the infimum vanishes.
    * SymmetryBroken: l+1 > k + (N-1)/(k+N-1) strictly (l+1 > k for N=1),
      so the second variation at the ball is negative in the first
      nontrivial mode and centered balls cannot be minimizers.
    * Unknown: k > 0 with l in the open band (l_one, l_upper] where
      optimality is unresolved; both thresholds are reported.

    The two non-radial conditions overlap (both hold when the infimum is
    zero far beyond the breaking threshold); the verdict surfaces the
    sharper fact in each sign regime: ZeroInfimum wins for k > 0,
    SymmetryBroken wins for k <= 0 beyond l_upper.  All thresholds are in
    the report either way.

    Inverted orientation: classified through the inversion map (the ratio
    is invariant), with case tags renamed i->j, ii->jj, iii->jjj, iv->jv.
    The reported thresholds refer to the mapped standard triple, included
    as mapped_k / mapped_l.
    """
    if not params.standard:
        mapped = params.inverted_image()
        rep = classify(mapped)
        thresholds = dict(rep.thresholds)
        thresholds["mapped_k"] = mapped.k
        thresholds["mapped_l"] = mapped.l
        return RegimeReport(
            verdict=rep.verdict,
            certifying_condition=_INVERTED_TAG.get(
                rep.certifying_condition, rep.certifying_condition
            ),
            thresholds=thresholds,
            notes=rep.notes,
        )

    k, l, N = params.k, params.l, params.N

    if N == 1:
        thresholds = {"l_upper": k - 1.0}
        if k >= l + 1.0:
            return RegimeReport(RADIAL_OPTIMAL, "oneD-a", thresholds)
        return RegimeReport(SYMMETRY_BROKEN, "oneD-b", thresholds)

    thresholds = {"l_upper": l_upper(k, N)}
    if k >= 0.0:
        thresholds["l1"] = l_one(k, N)
    if k <= 0.0:
        thresholds["l_star_lower"] = l_star_exact_nonpos_k(k, N)

    tag = radial_certificate(params)
    if tag is not None:
        return RegimeReport(RADIAL_OPTIMAL, tag, thresholds)

    broken = l + 1.0 > k + (N - 1.0) / (k + N - 1.0)
    vanishing = k < l * (N - 1.0) / N

    if k <= 0.0:
        if broken:
            return RegimeReport(SYMMETRY_BROKEN, "necessity", thresholds)
        if vanishing:
            return RegimeReport(ZERO_INFIMUM, "positivity", thresholds)
    else:
        if vanishing:
            return RegimeReport(ZERO_INFIMUM, "positivity", thresholds)
        if broken:
            return RegimeReport(SYMMETRY_BROKEN, "necessity", thresholds)

    notes = (
        "optimality in the band l_one < l <= l_upper is open; the two "
        "thresholds are conjectured to delimit the same curve",
    )
    return RegimeReport(UNKNOWN, None, thresholds, notes)


def l_one(k: float, N: int) -> float:
    """Largest l certified radial-optimal by the cubic condition (k >= 0).

    N >= 3: (k+N-1)^3 / ((k+N-1)^2 - (N-1)^2/N) - N.  N = 2: 0 on
    k <= 1/3, else (k+1)^3 / ((k+1)^2 - 16/27) - 2 (the branches agree at
    k = 1/3).
    """
    if k < 0:
        raise DomainError("l_one is defined for k >= 0")
    if N < 2:
        raise DomainError("l_one needs N >= 2")
    if N == 2:
        if k <= 1.0 / 3.0:
            return 0.0
        return (k + 1.0) ** 3 / ((k + 1.0) ** 2 - 16.0 / 27.0) - 2.0
    d = k + N - 1.0
    return d**3 / (d**2 - (N - 1.0) ** 2 / N) - N


def l_upper(k: float, N: int) -> float:
    """Breaking threshold l^* = k - 1 + (N-1)/(k+N-1): above it, symmetry breaks."""
    if k + N - 1 <= 0:
        raise DomainError("l_upper needs k+N-1 > 0")
    return k - 1.0 + (N - 1.0) / (k + N - 1.0)


def l_star_exact_nonpos_k(k: float, N: int) -> float:
    """Exact supremum kN/(N-1) of the radial-optimal range for k <= 0.

    Above it the infimum is zero, so the radial range is known exactly for
    nonpositive k.
    """
    if k > 0:
        raise DomainError("exact threshold only for k <= 0")
    if N < 2:
        raise DomainError("needs N >= 2")
    if k + N - 1 <= 0:
        raise DomainError("needs k+N-1 > 0")
    return k * N / (N - 1.0)


def kpos_lower_bound(params: Params) -> float:
    """Positive lower bound for the infimum when 0 < k <= l+1.

    ((N-1)/(k+N-1))^{(l+1-k)/(l+N)} * c_rad(0, l', N) with
    l' = (l(N-1) - kN)/(k+N-1), which always lands in [-1, 0].
    """
    params.require_standard("kpos_lower_bound")
    k, l, N = params.k, params.l, params.N
    if N < 2:
        raise DomainError("kpos_lower_bound needs N >= 2")
    if not 0.0 < k <= l + 1.0:
        raise DomainError("kpos_lower_bound needs 0 < k <= l+1")
    if not l * (N - 1.0) / N <= k:
        raise DomainError("kpos_lower_bound needs l(N-1)/N <= k (positive infimum)")
    l_prime = (l * (N - 1.0) - k * N) / (k + N - 1.0)
    assert -1.0 - 1e-12 <= l_prime <= 1e-12, l_prime
    factor = ((N - 1.0) / (k + N - 1.0)) ** ((l + 1.0 - k) / (l + N))
    return factor * c_rad(Params(0.0, l_prime, N))


def power_map_l(k: float, l: float, N: int) -> float:
    """Volume exponent l' = (l(N-1) - kN)/(k+N-1) after the radial power map."""
    return (l * (N - 1.0) - k * N) / (k + N - 1.0)


def _bisect(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo > 0 or fhi < 0:
        raise DomainError("root not bracketed on (%g, %g)" % (lo, hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def ckn_thresholds(p: float, q: float, N: int) -> dict:
    """Threshold values of the weight exponent a in the CKN symmetry question.

    Returns {a1, a2, a3 (N>=3), a4 (N=2 when 1/q > 1/p - 1/3), a_star}.
    a1 and a2 are closed forms; a3, a4 and a_star are roots of strictly
    monotone scalar equations, found by bisection on (1 - N/p, 1 - N/p + 1e3]
    to absolute tolerance 1e-12.
    """
    if N < 2:
        raise DomainError("ckn_thresholds needs N >= 2")
    if not 1.0 < p < q:
        raise DomainError("need 1 < p < q")
    if p < N and q >= N * p / (N - p):
        raise DomainError("need q < Np/(N-p)")
    p_conj = p / (p - 1.0)
    a1 = (N - 1.0) / (1.0 + q / p_conj) - N / p + 1.0
    a2 = 1.0 + N * (1.0 / q - 1.0 / p)
    out = {"a1": a1, "a2": a2}

    lo = 1.0 - N / p
    hi = lo + 1e3
    shift = N / p - 1.0  # so the squared variable is shift + a > 0

    if N >= 3:
        rhs3 = (N - 1.0) ** 2 / (N * (1.0 / p - 1.0 / q) * (1.0 - q / p + q) ** 2)
        out["a3"] = _bisect(lambda a: (shift + a) ** 2 - rhs3, lo, hi)
    if N == 2 and 1.0 / q > 1.0 / p - 1.0 / 3.0:
        rhs4 = 16.0 / (27.0 * (1.0 / p - 1.0 / q) * (1.0 - q / p + q) ** 2)
        out["a4"] = _bisect(lambda a: (shift + a) ** 2 - rhs4, lo, hi)
    rhs_star = (N - 1.0) * (1.0 / (q - p) - 1.0 / (q + p_conj))
    out["a_star"] = _bisect(lambda a: (shift + a) ** 2 - rhs_star, lo, hi)

    assert max(0.0, a1) < a2 < 1.0
    if "a3" in out:
        assert a2 < out["a3"]
    return out


def ckn_radial_symmetry_sufficient(ckn: CknParams) -> tuple[bool, str | None]:
    """Whether a known sufficient condition certifies that the CKN infimum
    is attained on radial functions.  False means "not certified", not
    "symmetry fails" (beyond a_star it provably fails).
    """
    if ckn.p == ckn.q:
        return True, "hardy"
    if ckn.q == ckn.p_critical:
        return (True, "critical") if ckn.a <= 0.0 else (False, None)
    if not (ckn.p > 1.0 and ckn.N >= 2):
        return False, None
    thresholds = ckn_thresholds(ckn.p, ckn.q, ckn.N)
    if ckn.a <= thresholds["a2"]:
        return True, "a<=a2"
    if "a3" in thresholds and ckn.a <= thresholds["a3"]:
        return True, "a<=a3"
    if "a4" in thresholds and ckn.a <= thresholds["a4"]:
        return True, "a<=a4"
    return False, None
