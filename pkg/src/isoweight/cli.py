"""Command-line front end for the weighted isoperimetric toolkit.

Subcommands
-----------
classify   regime verdict and thresholds for one exponent pair
sweep      verdict grid over a rectangle of exponents, CSV output
minimize   shape search for symmetry-breaking ratios
verify     run a named battery of numerical cross-checks
ckn        interpolation-inequality parameters, thresholds, radial estimate
solve1d    one-dimensional sharp constant and optimal interval
eigen      weighted radial eigenvalue estimate

All JSON documents carry ``"schema": "isoweight/1"``.  Exit codes: 0 on
success, 1 when a verification fails, 2 for invalid parameters, 3 when an
iterative routine does not converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import functionals, geometry, rearrange, regime, variation
from .errors import ConvergenceError, DomainError, VerificationError
from .quadrature import angular_grid, sphere_area
from .variation import DEFAULT_SEED

SCHEMA = "isoweight/1"

# Built-in defaults per subcommand, keyed by argparse dest.  Argparse options
# use a None sentinel so that precedence is: built-in < config file < flag.
_DEFAULTS: dict[str, dict[str, object]] = {
    "classify": {"N": 2, "format": "json", "anchors": False},
    "sweep": {"k_min": 0.0, "k_max": 1.0, "l_min": 0.0, "l_max": 1.0, "step": 0.1, "N": 2},
    "minimize": {
        "N": 2,
        "modes": 4,
        "restarts": 8,
        "seed": DEFAULT_SEED,
        "nodes": 0,
        "format": "json",
    },
    "verify": {},
    "ckn": {"N": 3, "iterations": 60, "format": "json", "anchors": False},
    "solve1d": {"format": "json", "no_verify": False},
    "eigen": {"N": 3, "nodes": 2000, "beta": 0.0, "R": 1.0, "format": "json"},
}


def _max_workers() -> int:
    raw = os.environ.get("ISO_WEIGHT_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise DomainError("ISO_WEIGHT_THREADS must be a positive integer") from None
    if n < 1:
        raise DomainError("ISO_WEIGHT_THREADS must be a positive integer")
    return n


def _coerce(text: str):
    low = text.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    try:
        return int(low)
    except ValueError:
        pass
    try:
        return float(low)
    except ValueError:
        return low


def _load_config(path: str) -> dict[str, object]:
    """Line-oriented key=value file; blank lines and '#' comments ignored."""
    out: dict[str, object] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise DomainError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip().replace("-", "_")] = _coerce(value)
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}") from None
    return out


def _merged(args: argparse.Namespace) -> dict[str, object]:
    """Resolve option values: built-in defaults, then config file, then flags."""
    merged = dict(_DEFAULTS[args.command])
    config_path = getattr(args, "config", None)
    if config_path:
        for key, value in _load_config(config_path).items():
            if key in merged:
                merged[key] = value
    for key in merged:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    for key, value in vars(args).items():
        if key not in merged and key not in ("command", "config", "func"):
            merged[key] = value
    return merged


def _emit(doc: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        for key, value in doc.items():
            if key == "schema":
                continue
            if isinstance(value, dict):
                for sub, subval in value.items():
                    stream.write(f"{key}.{sub}: {subval}\n")
            else:
                stream.write(f"{key}: {value}\n")
    else:
        stream.write(json.dumps(doc, indent=2, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


# ---------------------------------------------------------------------------
# classify


_CLASSIFY_ANCHORS = {
    "c_rad": "c_rad = (N w_N)^((l-k+1)/(l+N)) * (l+N)^((k+N-1)/(l+N)) for the centered ball",
    "c_rad_inverted": "exterior-ball constant: same formula with |l+N| after k -> -k-2N+2, l -> -l-2N",
    "l1": "largest l with 1/(l+N) >= 1/(k+N-1) - (N-1)^2 / (N (k+N-1)^3)",
    "l_upper": "second variation at the ball vanishes when l = k - 1 + (N-1)/(k+N-1)",
    "l_star_lower": "for k <= 0 the infimum stays positive only while l <= k N/(N-1)",
}


def cmd_classify(opts: dict) -> int:
    params = regime.Params(float(opts["k"]), float(opts["l"]), int(opts["N"]))
    report = regime.classify(params)
    doc: dict[str, object] = {
        "schema": SCHEMA,
        "k": params.k,
        "l": params.l,
        "N": params.N,
        "orientation": params.orientation,
        "verdict": report.verdict,
        "certifying_condition": report.certifying_condition,
        "thresholds": dict(report.thresholds),
    }
    constants: dict[str, float] = {}
    if params.standard:
        constants["c_rad"] = regime.c_rad(params)
    else:
        constants["c_rad_inverted"] = regime.c_rad_inverted(params)
    doc["constants"] = constants
    if report.notes:
        doc["notes"] = list(report.notes)
    if opts.get("anchors"):
        keys = set(report.thresholds) | set(constants)
        doc["anchors"] = {k: v for k, v in _CLASSIFY_ANCHORS.items() if k in keys}
    _emit(doc, opts["format"])
    return 0


# ---------------------------------------------------------------------------
# sweep


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise DomainError("sweep bounds and step must be finite")
    if step <= 0.0:
        raise DomainError("sweep step must be positive")
    if hi < lo:
        raise DomainError("sweep upper bound is below the lower bound")
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    return lo + step * np.arange(count)


def _sweep_row(point: tuple[float, float, int]) -> list[str]:
    k, l, N = point
    try:
        params = regime.Params(k, l, N)
        report = regime.classify(params)
    except DomainError:
        return [f"{k:.12g}", f"{l:.12g}", "inadmissible", "", "", ""]
    constant = (
        regime.c_rad(params) if params.standard else regime.c_rad_inverted(params)
    )
    l1 = report.thresholds.get("l1")
    lu = report.thresholds.get("l_upper")
    fmt = lambda x: "" if x is None else repr(float(x))
    return [f"{k:.12g}", f"{l:.12g}", report.verdict, fmt(constant), fmt(l1), fmt(lu)]


def cmd_sweep(opts: dict) -> int:
    ks = _axis(float(opts["k_min"]), float(opts["k_max"]), float(opts["step"]))
    ls = _axis(float(opts["l_min"]), float(opts["l_max"]), float(opts["step"]))
    N = int(opts["N"])
    points = [(float(k), float(l), N) for k in ks for l in ls]
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        rows = list(pool.map(_sweep_row, points))
    out_path = opts.get("out")
    handle = open(out_path, "w", newline="", encoding="utf-8") if out_path else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow(["k", "l", "verdict", "c_rad", "l1", "l_upper"])
        writer.writerows(rows)
    finally:
        if out_path:
            handle.close()
    return 0


# ---------------------------------------------------------------------------
# minimize


def cmd_minimize(opts: dict) -> int:
    params = regime.Params(float(opts["k"]), float(opts["l"]), int(opts["N"]))
    nodes = int(opts["nodes"]) or None
    result = variation.minimize_ratio(
        params,
        mode_count=int(opts["modes"]),
        restarts=int(opts["restarts"]),
        rng_seed=int(opts["seed"]),
        nodes=nodes,
    )
    radial = regime.c_rad(params)
    doc = {
        "schema": SCHEMA,
        "k": params.k,
        "l": params.l,
        "N": params.N,
        "value": result.value,
        "c_rad": radial,
        "gap": result.value / radial - 1.0,
        "coefficients": [float(c) for c in result.coefficients],
        "degenerate": result.degenerate,
        "converged": result.converged,
        "seed": int(opts["seed"]),
        "restarts": int(opts["restarts"]),
        "modes": int(opts["modes"]),
    }
    out_path = opts.get("out")
    if out_path:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "objective", "coefficient_norm"])
            for step, value, norm in result.trace:
                writer.writerow([step, repr(float(value)), repr(float(norm))])
        doc["trace_file"] = out_path
    _emit(doc, opts["format"])
    return 0 if result.converged else 3


# ---------------------------------------------------------------------------
# verify


def _record(name, lhs, rhs, margin, tolerance, anchor) -> dict:
    return {
        "name": name,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "margin": float(margin),
        "tolerance": float(tolerance),
        "anchor": anchor,
        "passed": bool(float(margin) >= -float(tolerance)),
    }


def _eq(name, lhs, rhs, tolerance, anchor) -> dict:
    return _record(name, lhs, rhs, -abs(float(lhs) - float(rhs)), tolerance, anchor)


def _le(name, lhs, rhs, tolerance, anchor) -> dict:
    """Check lhs <= rhs; positive margin means slack."""
    return _record(name, lhs, rhs, float(rhs) - float(lhs), tolerance, anchor)


def _regime_checks() -> list[dict]:
    out = []
    disc = regime.c_rad(regime.Params(0.0, 0.0, 2))
    out.append(_eq("disc_constant", disc, 2.0 * math.sqrt(math.pi), 1e-10,
                   "unweighted N=2: perimeter/area^(1/2) minimized by the disc at 2 sqrt(pi)"))
    ball = regime.c_rad(regime.Params(0.0, 0.0, 3))
    out.append(_eq("ball_constant", ball, (36.0 * math.pi) ** (1.0 / 3.0), 1e-10,
                   "unweighted N=3: area/volume^(2/3) minimized by the ball at (36 pi)^(1/3)"))
    p = regime.Params(0.7, 1.2, 3)
    back = p.inverted_image().inverted_image()
    out.append(_eq("inversion_involution", abs(back.k - p.k) + abs(back.l - p.l), 0.0, 1e-14,
                   "(k,l) -> (-k-2N+2, -l-2N) applied twice is the identity"))
    rep = regime.classify(regime.Params(1.0 / 3.0, 0.0, 2))
    ok = rep.verdict == regime.RADIAL_OPTIMAL and rep.certifying_condition == "iv"
    out.append(_eq("classify_low_k_disc", 1.0 if ok else 0.0, 1.0, 0.0,
                   "N=2, l <= 0 <= k <= 1/3: the centered disc is optimal"))
    rep = regime.classify(regime.Params(0.0, 2.0, 2))
    out.append(_eq("classify_broken", 1.0 if rep.verdict == regime.SYMMETRY_BROKEN else 0.0,
                   1.0, 0.0, "k=0, l=2, N=2 lies above the second-variation threshold"))
    rep = regime.classify(regime.Params(1.0, 4.0, 2))
    out.append(_eq("classify_zero_infimum", 1.0 if rep.verdict == regime.ZERO_INFIMUM else 0.0,
                   1.0, 0.0, "k=1, l=4, N=2: drifting balls drive the ratio to zero"))
    worst = -math.inf
    for N in (2, 3):
        for k in np.linspace(0.0, 3.0, 31):
            worst = max(worst, regime.l_one(float(k), N) - regime.l_upper(float(k), N))
    out.append(_le("threshold_order", worst, 0.0, 0.0,
                   "l1(k,N) never exceeds the breaking threshold l_upper(k,N)"))
    thr = regime.ckn_thresholds(2.0, 4.0, 3)
    out.append(_eq("ckn_a1", thr["a1"], 1.0 / 6.0, 1e-12,
                   "a1 = (N-1)/q - (N-1)(p-1)/p at (p,q,N)=(2,4,3)"))
    out.append(_eq("ckn_a2", thr["a2"], 0.25, 1e-12,
                   "a2 = 1 + N/q - N/p: the weight exponent b vanishes here"))
    out.append(_eq("ckn_a3", thr["a3"], 0.2698003589195010, 1e-9,
                   "a3 solves the N>=3 sufficiency equation at (2,4,3)"))
    out.append(_eq("ckn_a_star", thr["a_star"], 0.3164965809277260, 1e-9,
                   "a_star is the spectral symmetry-breaking threshold at (2,4,3)"))
    return out


def _inversion_checks() -> list[dict]:
    out = []
    cases = [
        (2, regime.Params(0.5, 1.0, 2), [0.0, 0.12, -0.07, 0.05, 0.03]),
        (3, regime.Params(0.7, 1.5, 3), [0.0, 0.1, -0.06, 0.04]),
    ]
    for N, params, coeffs in cases:
        shape = geometry.StarShape.from_coeffs(N, coeffs)
        lhs = geometry.ratio(shape, params)
        rhs = geometry.ratio_inverted(geometry.invert_shape(shape), params.inverted_image())
        out.append(_eq(f"ratio_inversion_N{N}", lhs, rhs, 1e-8 * abs(lhs),
                       "R(M;k,l) = R_inv(M*;k~,l~) with M* the image of M under x -> x/|x|^2"))
    pinv = regime.Params(-2.0, -4.0, 2)
    out.append(_eq("exterior_disc_constant", regime.c_rad_inverted(pinv),
                   2.0 * math.sqrt(math.pi), 1e-12,
                   "inverted (k,l)=(-2,-4), N=2 maps back to the unweighted disc problem"))
    pinv2 = regime.Params(-3.0, -4.0, 2)
    out.append(_eq("exterior_disc_constant_2", regime.c_rad_inverted(pinv2), 2.0, 1e-12,
                   "inverted (k,l)=(-3,-4), N=2 maps back to k~=1, l~=0"))
    out.append(_eq("inverted_constant_consistency", regime.c_rad_inverted(pinv),
                   regime.c_rad(pinv.inverted_image()), 1e-12,
                   "c_rad_inverted equals c_rad of the standard image parameters"))
    return out


def _rearrange_checks() -> list[dict]:
    rng = np.random.default_rng(DEFAULT_SEED)
    out = []
    l = 0.7
    radial = rearrange.zeta_uniform_radial_grid(2.0, 48, 2)
    theta = angular_grid(2, 64)
    values = rng.uniform(0.0, 1.0, (radial.size, theta.size))
    values[-1] = 0.0
    f = rearrange.SampledFunction(2, radial, theta, values)
    star = rearrange.schwarz_symmetrize(f, l)
    thresholds = rng.uniform(0.0, values.max(), 40)
    gap = float(
        np.max(np.abs(f.mu_distribution(thresholds, l) - star.mu_distribution(thresholds, l, 2)))
    )
    out.append(_le("equimeasurability", gap, float(f.cell_weights(l).max()), 0.0,
                   "mu{f > t} and mu{f* > t} agree to within one grid cell"))
    g_values = rng.uniform(0.0, 1.0, (radial.size, theta.size))
    g_values[-1] = 0.0
    g = rearrange.SampledFunction(2, radial, theta, g_values)
    lhs, rhs = rearrange.hardy_littlewood_check(f, g, l)
    out.append(_le("hardy_littlewood", lhs, rhs, 1e-12 * (1.0 + abs(rhs)),
                   "int f g dmu <= int f* g* dmu"))
    grid = np.linspace(0.0, 3.0, 61)
    v = rng.uniform(0.0, 1.0, grid.size)
    v[0] = v[-1] = 0.0
    rec = rearrange.decreasing_rearrangement_weighted(grid, v, 1.3)
    out.append(_le("weighted_variation", rec.tv_rearranged, rec.tv_original,
                   1e-12 * (1.0 + abs(rec.tv_original)),
                   "monotone rearrangement does not increase int t^d |f'| dt"))
    params = regime.Params(0.2, 0.0, 2)
    ball = rearrange.ball_indicator(2, 0.8, radial, theta)
    lhs, rhs = rearrange.polya_szego_check(ball, params, 2.0)
    out.append(_record("polya_szego_indicator", lhs, rhs, lhs - rhs, 1e-9 * (1.0 + abs(lhs)),
                       "int |x|^k |grad u|^p dx does not increase under symmetrization"))
    h = rearrange.starshaped_rearrange(f)
    out.append(_eq("starshaped_mass", f.integral(0.0), h.integral(0.0),
                   1e-12 * (1.0 + f.integral(0.0)),
                   "per-ray monotone rearrangement preserves the unweighted integral"))
    return out


def _variation_checks() -> list[dict]:
    out = []
    params = regime.Params(1.5, 0.8, 2)
    mode = variation.PerturbationMode(2, 2)
    j1, j2 = variation.finite_difference_variation_check(params, mode, t_step=5e-3)
    closed = variation.second_variation(params, mode)
    out.append(_le("first_variation_zero", abs(j1), 1e-7, 0.0,
                   "the centered ball is a critical point of the volume-constrained ratio"))
    out.append(_eq("second_variation_fd", j2, closed, 1e-4 * (1.0 + abs(closed)),
                   "centered second difference of the perturbed ratio matches the quadratic form"))
    rng = np.random.default_rng(DEFAULT_SEED)
    bad = 0
    for _ in range(200):
        N = int(rng.integers(2, 5))
        k = float(rng.uniform(0.05, 3.0))
        l = float(rng.uniform(-0.9, 4.0))
        threshold = regime.l_upper(k, N)
        if abs(l - threshold) < 1e-6:
            continue
        sign = variation.second_variation(regime.Params(k, l, N), variation.PerturbationMode(N, 1))
        if (sign < 0.0) != (l > threshold):
            bad += 1
    out.append(_eq("breaking_sign_agreement", float(bad), 0.0, 0.0,
                   "the lowest mode turns negative exactly above l_upper(k,N)"))
    fam = variation.PerturbedFamily.build(
        regime.Params(1.0, 0.8, 2), variation.PerturbationMode(2, 2, 0.3)
    )
    shape = fam.shape(0.4)
    lhs = geometry.mu_measure(shape, 0.8)
    rhs = sphere_area(2) / (0.8 + 2.0)
    out.append(_eq("compensated_measure", lhs, rhs, 1e-10 * (1.0 + rhs),
                   "the scalar compensation keeps mu_l along the perturbation family fixed"))
    sol = variation.solve_1d(regime.Params(1.0, 1.0, 1))
    out.append(_eq("one_d_constant", sol.value, math.sqrt(2.0), 1e-12,
                   "N=1, k=1, l=1: sharp constant (l+1)^(k/(l+1)) = sqrt(2)"))
    _, brute = variation.interval_brute_force(regime.Params(1.0, 1.0, 1))
    out.append(_le("one_d_brute_force", sol.value, brute, 1e-9,
                   "no interval from the scan beats the closed-form optimum"))
    return out


def _functionals_checks() -> list[dict]:
    out = []
    out.append(_eq("hardy_classical", functionals.hardy_constant(0.0, 2.0, 3), 0.25, 1e-15,
                   "unweighted Hardy constant ((N-p)/p)^p = 1/4 for p=2, N=3"))
    grid = np.geomspace(0.01, 100.0, 241)
    vals = np.minimum(2.0, grid ** (-0.6))
    vals[-1] = 0.0
    u = functionals.RadialProfile(grid, vals)
    ckn = regime.CknParams(0.1, 2.0, 4.0, 3)
    out.append(_eq("ckn_energy_fixture", functionals.ckn_energy(u, ckn),
                   41.082115537189346, 1e-10,
                   "frozen high-precision quadrature value of the energy quotient"))
    params = regime.Params(1.0, 2.0, 2)
    q0 = functionals.q_functional(u, params)
    q1 = functionals.q_functional(u.dilated(3.7), params)
    out.append(_eq("dilation_invariance", q0, q1, 1e-10 * abs(q0),
                   "the quotient is invariant under u(x) -> u(x/t)"))
    eps = 1e-4
    tent = functionals.RadialProfile(
        np.array([1.0 - eps, 1.0]), np.array([1.0, 0.0])
    )
    out.append(_eq("steep_tent_limit", functionals.q_functional(tent, params),
                   regime.c_rad(params), 2e-4 * regime.c_rad(params),
                   "steep cutoffs of the ball indicator approach the sharp constant"))
    near_ind = functionals.RadialProfile(np.array([1.0 - 1e-9, 1.0]), np.array([1.0, 0.0]))
    got = functionals.lorentz_norm(near_ind, 2.0, 3.0, 3)
    want = (2.0 / 3.0) ** (1.0 / 3.0) * (4.0 * math.pi / 3.0) ** 0.5
    out.append(_eq("lorentz_indicator", got, want, 1e-6 * want,
                   "||1_B||_{r,q} = (r/q)^(1/q) |B|^(1/r) for finite q"))
    lam = functionals.eigenvalue_radial(2.0, 0.0, 1.0, N=3, nodes=500)
    out.append(_eq("dirichlet_eigenvalue", lam, math.pi ** 2, 1e-3 * math.pi ** 2,
                   "first radial Dirichlet eigenvalue of the unit ball in R^3 is pi^2"))
    small = np.geomspace(1e-2, 1e2, 160)
    est = functionals.ckn_radial_infimum(ckn, grid=small, iterations=12)
    worst_rise = float(np.max(np.diff(est.history)))
    out.append(_le("ckn_monotone_refinement", worst_rise, 0.0, 0.0,
                   "every accepted descent sweep lowers the upper bound"))
    bump_vals = np.exp(-small) * small / (1.0 + small**2)
    bump_vals[-1] = 0.0
    bump = functionals.RadialProfile(small, bump_vals)
    comparison = functionals.lorentz_imbedding_check(
        bump, ckn, s_rad=est.value, s_rad_delta=est.refinement_delta
    )
    out.append(_record("lorentz_imbedding", comparison.lhs, comparison.rhs, comparison.margin,
                       max(comparison.rhs - comparison.lhs, 0.0) + 1e-9,
                       "the weighted gradient norm dominates the scaled Lorentz norm"))
    return out


_SUITES = {
    "regime": _regime_checks,
    "inversion": _inversion_checks,
    "rearrange": _rearrange_checks,
    "variation": _variation_checks,
    "functionals": _functionals_checks,
}
_SUITE_ORDER = ("regime", "inversion", "rearrange", "variation", "functionals")


def cmd_verify(opts: dict) -> int:
    suite = opts["suite"]
    if suite == "all":
        names = list(_SUITE_ORDER)
    elif suite in _SUITES:
        names = [suite]
    else:
        raise DomainError(
            f"unknown suite {suite!r}: choose from {', '.join(_SUITE_ORDER)} or all"
        )
    def run_suite(name: str):
        try:
            return name, _SUITES[name]()
        except (VerificationError, ConvergenceError, DomainError) as exc:
            failed = {
                "name": f"{name}_suite_execution",
                "lhs": float("nan"),
                "rhs": float("nan"),
                "margin": float("-inf"),
                "tolerance": 0.0,
                "anchor": "all checks in the suite evaluate without raising",
                "passed": False,
                "note": str(exc),
            }
            return name, [failed]

    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        batches = list(pool.map(run_suite, names))
    failures = 0
    total = 0
    for name, records in batches:
        for rec in records:
            rec = {"suite": name, **rec}
            total += 1
            if not rec["passed"]:
                failures += 1
            sys.stdout.write(json.dumps(rec) + "\n")
    summary = {"schema": SCHEMA, "suite": suite, "checks": total, "failures": failures}
    sys.stdout.write(json.dumps(summary) + "\n")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# ckn


_CKN_ANCHORS = {
    "b": "b = N (1/p - 1/q) + a - 1",
    "a1": "below a1 the weight pair satisfies the pointwise sufficiency test",
    "a2": "a2 = 1 + N/q - N/p, where b = 0",
    "a_star": "above a_star the radial constant strictly exceeds the full infimum",
    "s_rad_estimate": "coordinate-descent upper bound for the radial minimization",
    "hardy_constant": "diagonal p = q: the sharp constant is (N/p - 1 + a)^p",
}


def cmd_ckn(opts: dict) -> int:
    ckn = regime.CknParams(float(opts["a"]), float(opts["p"]), float(opts["q"]), int(opts["N"]))
    doc: dict[str, object] = {
        "schema": SCHEMA,
        "a": ckn.a,
        "p": ckn.p,
        "q": ckn.q,
        "N": ckn.N,
        "b": ckn.b,
    }
    if ckn.p == ckn.q:
        doc["hardy_constant"] = functionals.hardy_constant(ckn.a, ckn.p, ckn.N)
        doc["note"] = "diagonal case p = q: sharp constant is explicit, no minimization run"
    else:
        if ckn.N >= 2 and ckn.p > 1.0 and ckn.q < ckn.p_critical:
            doc["thresholds"] = regime.ckn_thresholds(ckn.p, ckn.q, ckn.N)
        certified, tag = regime.ckn_radial_symmetry_sufficient(ckn)
        doc["symmetry_certified"] = certified
        if tag is not None:
            doc["certificate"] = tag
        estimate = functionals.ckn_radial_infimum(ckn, iterations=int(opts["iterations"]))
        doc["s_rad_estimate"] = {
            "value": estimate.value,
            "bound": estimate.bound,
            "iterations": estimate.iterations,
            "converged": estimate.converged,
            "refinement_delta": estimate.refinement_delta,
        }
        thresholds = doc.get("thresholds")
        if not certified and thresholds and ckn.a > thresholds["a_star"]:
            doc["note"] = (
                "a exceeds a_star: radial functions do not attain the full infimum here"
            )
    if opts.get("anchors"):
        doc["anchors"] = {k: v for k, v in _CKN_ANCHORS.items() if k in doc or k in doc.get("thresholds", {})}
    _emit(doc, opts["format"])
    return 0


# ---------------------------------------------------------------------------
# solve1d and eigen


def cmd_solve1d(opts: dict) -> int:
    params = regime.Params(float(opts["k"]), float(opts["l"]), 1)
    sol = variation.solve_1d(params, verify=not opts.get("no_verify", False))
    doc = {
        "schema": SCHEMA,
        "k": params.k,
        "l": params.l,
        "kind": sol.kind,
        "interval": list(sol.interval),
        "value": sol.value,
    }
    _emit(doc, opts["format"])
    return 0


def cmd_eigen(opts: dict) -> int:
    p = float(opts["p"])
    beta = float(opts["beta"])
    radius = float(opts["R"])
    N = int(opts["N"])
    nodes = int(opts["nodes"])
    value = functionals.eigenvalue_radial(p, beta, radius, N=N, nodes=nodes)
    doc = {
        "schema": SCHEMA,
        "p": p,
        "beta": beta,
        "R": radius,
        "N": N,
        "nodes": nodes,
        "value": value,
        "scaling_exponent": beta * p - p,
    }
    _emit(doc, opts["format"])
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoweight",
        description="weighted isoperimetric regimes, rearrangements, and sharp constants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--config", help="key=value file overriding built-in defaults")
        if fmt:
            sp.add_argument("--format", choices=("json", "text"), default=None)

    sp = sub.add_parser("classify", help="regime verdict for one exponent pair")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--anchors", action="store_true", default=None,
                    help="attach formula statements for each reported quantity")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="verdict grid over an exponent rectangle (CSV)")
    sp.add_argument("--k-min", dest="k_min", type=float, default=None)
    sp.add_argument("--k-max", dest="k_max", type=float, default=None)
    sp.add_argument("--l-min", dest="l_min", type=float, default=None)
    sp.add_argument("--l-max", dest="l_max", type=float, default=None)
    sp.add_argument("--step", type=float, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--out", help="write CSV here instead of stdout")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("minimize", help="shape search below the radial constant")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--modes", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--nodes", type=int, default=None)
    sp.add_argument("--out", help="write the optimizer trace CSV here")
    common(sp)
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("verify", help="run a named battery of numerical cross-checks")
    sp.add_argument("suite", choices=(*_SUITE_ORDER, "all"))
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ckn", help="interpolation-inequality thresholds and radial estimate")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--iterations", type=int, default=None)
    sp.add_argument("--anchors", action="store_true", default=None)
    common(sp)
    sp.set_defaults(func=cmd_ckn)

    sp = sub.add_parser("solve1d", help="one-dimensional sharp constant and optimal set")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--no-verify", dest="no_verify", action="store_true", default=None,
                    help="skip the brute-force cross-check")
    common(sp)
    sp.set_defaults(func=cmd_solve1d)

    sp = sub.add_parser("eigen", help="weighted radial eigenvalue estimate")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--R", type=float, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--nodes", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_eigen)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _merged(args)
        return args.func(opts)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
