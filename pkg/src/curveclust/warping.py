"""Monotone warping functions on [0, 1] and the penalized-similarity optimizer.

A warp is a quadratic spline with positive coefficient increments, so it is
strictly increasing and pins 0 -> 0, 1 -> 1 exactly by construction.  Raw
parameters are unconstrained reals: increments are exp(raw) scaled by the
Greville spacing of the knot layout, which makes all-equal raw parameters the
exact identity.  The inverse is approximated by least squares in a finer
quadratic spline space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .curves import Curve
from .errors import (
    InvalidInputError,
    InvalidParameterError,
    MonotonicityError,
    WarpRangeError,
    ZeroVarianceError,
)
from .products import ZERO_NORM_TOL, centered_norm, corr
from .splines import (
    DEFAULT_SPLINES,
    Grid,
    SplineRep,
    SplineSettings,
    basis_matrix,
    derivative,
    evaluate,
    knot_vector,
)

_DENSE_N = 501
_DENSE = np.linspace(0.0, 1.0, _DENSE_N)

_RANGE_TOL = 1e-9


@dataclass(frozen=True)
class OptimizerSettings:
    """Derivative-free search settings for the warp optimizer."""

    power_starts: tuple = (0.7, 0.85, 1.0, 1.18, 1.43)
    budget_per_start: int = 400
    simplex_step: float = 0.3
    xatol: float = 1e-7
    fatol: float = 1e-12


DEFAULT_OPTIMIZER = OptimizerSettings()


@dataclass(eq=False)
class Warping:
    """Forward warp spline paired with a spline approximation of its inverse."""

    forward: SplineRep
    inverse: SplineRep

    def swapped(self) -> "Warping":
        """The same time correspondence read in the opposite direction."""
        return Warping(forward=self.inverse, inverse=self.forward)


class RhoParts(NamedTuple):
    rho: float
    r_fwd: float
    r_inv: float
    penalty_fwd: float
    penalty_inv: float


def greville_abscissae(degree: int, interior_knots: np.ndarray) -> np.ndarray:
    t = knot_vector(degree, interior_knots)
    nb = len(interior_knots) + degree + 1
    return np.array([t[i + 1 : i + degree + 1].mean() for i in range(nb)])


def _difference_operator(degree: int, interior_knots: np.ndarray) -> np.ndarray:
    """Matrix mapping spline coefficients to derivative-spline coefficients."""
    t = knot_vector(degree, interior_knots)
    nb = len(interior_knots) + degree + 1
    op = np.zeros((nb - 1, nb))
    for i in range(nb - 1):
        span = t[i + degree + 1] - t[i + 1]
        op[i, i] = -degree / span
        op[i, i + 1] = degree / span
    return op


class _WarpWorkspace:
    """Cached matrices for fast warp/derivative evaluation on a fixed grid."""

    def __init__(self, grid: Grid, settings: SplineSettings):
        interior = settings.warp_interior()
        degree = settings.warp_degree
        self.interior = interior
        self.degree = degree
        self.basis = basis_matrix(grid.points, degree, interior)
        diff_op = _difference_operator(degree, interior)
        self.deriv = basis_matrix(grid.points, degree - 1, interior) @ diff_op
        self.greville_steps = np.diff(greville_abscissae(degree, interior))
        self.n_raw = len(self.greville_steps)


_workspaces: dict = {}


def _workspace(grid: Grid, settings: SplineSettings) -> _WarpWorkspace:
    key = (grid.key, settings)
    ws = _workspaces.get(key)
    if ws is None:
        ws = _WarpWorkspace(grid, settings)
        _workspaces[key] = ws
    return ws


def n_raw_params(settings: SplineSettings = DEFAULT_SPLINES) -> int:
    return len(settings.warp_interior()) + settings.warp_degree


def _coefficients_from_raw(raw: np.ndarray, greville_steps: np.ndarray) -> np.ndarray:
    increments = np.exp(raw - raw.max()) * greville_steps
    coef = np.empty(len(raw) + 1)
    coef[0] = 0.0
    np.cumsum(increments, out=coef[1:])
    coef[1:] /= coef[-1]
    return coef


def make_warping(raw_params, settings: SplineSettings = DEFAULT_SPLINES) -> Warping:
    """Build a warp from unconstrained parameters.

    Coefficient increments are exp(raw) times the Greville spacing, rescaled so
    the coefficients run 0 to 1: boundary values hold exactly, monotonicity by
    construction, and all-equal parameters give the exact identity.
    """
    raw = np.asarray(raw_params, dtype=float)
    if not np.all(np.isfinite(raw)):
        raise InvalidParameterError("warp parameters must be finite")
    steps = np.diff(greville_abscissae(settings.warp_degree, settings.warp_interior()))
    if raw.shape != steps.shape:
        raise InvalidParameterError(
            f"expected {len(steps)} warp parameters, got {raw.shape}"
        )
    forward = SplineRep(
        degree=settings.warp_degree,
        interior_knots=settings.warp_interior(),
        coefficients=_coefficients_from_raw(raw, steps),
    )
    return Warping(forward=forward, inverse=invert_warping(forward, settings))


def identity_warping(settings: SplineSettings = DEFAULT_SPLINES) -> Warping:
    fwd = SplineRep(
        degree=settings.warp_degree,
        interior_knots=settings.warp_interior(),
        coefficients=greville_abscissae(settings.warp_degree, settings.warp_interior()),
    )
    inv = SplineRep(
        degree=settings.warp_degree,
        interior_knots=settings.inverse_interior(),
        coefficients=greville_abscissae(settings.warp_degree, settings.inverse_interior()),
    )
    return Warping(forward=fwd, inverse=inv)


def _pinned_fit(x, y, degree, interior, left, right) -> np.ndarray:
    """Least-squares spline fit with the first/last coefficients pinned."""
    design = basis_matrix(x, degree, interior)
    rhs = y - left * design[:, 0] - right * design[:, -1]
    mid, *_ = np.linalg.lstsq(design[:, 1:-1], rhs, rcond=None)
    return np.concatenate([[left], mid, [right]])


def invert_warping(psi: SplineRep, settings: SplineSettings = DEFAULT_SPLINES) -> SplineRep:
    """Quadratic-spline approximation of the inverse of a monotone warp."""
    values = evaluate(psi, _DENSE)
    if np.any(np.diff(values) <= 0.0):
        raise MonotonicityError("warp is not strictly increasing on [0, 1]")
    if abs(values[0]) > 1e-6 or abs(values[-1] - 1.0) > 1e-6:
        raise MonotonicityError("warp does not satisfy psi(0)=0, psi(1)=1")
    values = values.copy()
    values[0], values[-1] = 0.0, 1.0
    coef = _pinned_fit(values, _DENSE, settings.warp_degree, settings.inverse_interior(), 0.0, 1.0)
    # spline values live in the convex hull of the coefficients, so clipping
    # keeps the approximate inverse inside [0, 1]
    return SplineRep(
        degree=settings.warp_degree,
        interior_knots=settings.inverse_interior(),
        coefficients=np.clip(coef, 0.0, 1.0),
    )


_power_raw_cache: dict = {}


def power_warp_raw(alpha: float, settings: SplineSettings = DEFAULT_SPLINES) -> np.ndarray:
    """Raw parameters whose warp is the least-squares projection of t**alpha."""
    key = (round(float(alpha), 12), settings)
    cached = _power_raw_cache.get(key)
    if cached is not None:
        return cached
    steps = np.diff(greville_abscissae(settings.warp_degree, settings.warp_interior()))
    if alpha == 1.0:
        raw = np.zeros_like(steps)
    else:
        coef = _pinned_fit(
            _DENSE, _DENSE**alpha, settings.warp_degree, settings.warp_interior(), 0.0, 1.0
        )
        increments = np.maximum(np.diff(coef), 1e-4 * steps)
        raw = np.log(increments / steps)
        raw -= raw.mean()
    _power_raw_cache[key] = raw
    return raw


def _penalty_of_spline(spline: SplineRep, grid: Grid) -> float:
    dvals = evaluate(derivative(spline), grid.points)
    return float(grid.weights @ (dvals - 1.0) ** 2)


def roughness_penalty(psi: Warping, grid: Grid, direction: str = "forward") -> float:
    """Integrated squared deviation of the warp derivative from 1 (trapezoid)."""
    if direction == "forward":
        return _penalty_of_spline(psi.forward, grid)
    if direction == "inverse":
        return _penalty_of_spline(psi.inverse, grid)
    raise InvalidInputError(f"unknown direction: {direction!r}")


def _checked_warp_values(spline: SplineRep, points: np.ndarray) -> np.ndarray:
    vals = spline(points)
    if np.any(vals < -_RANGE_TOL) or np.any(vals > 1.0 + _RANGE_TOL):
        raise WarpRangeError("warp leaves the unit interval on the grid")
    return np.clip(vals, 0.0, 1.0)


def rho_parts(f: Curve, g: Curve, warp: Warping, lambda0: float) -> RhoParts:
    """Penalized similarity of f and g at a fixed warp, with all parts.

    Forward part correlates f with g evaluated at warped grid points; the
    reverse part correlates g with f evaluated through the approximate inverse.
    """
    if f.grid.key != g.grid.key:
        raise InvalidInputError("curves must share the same grid")
    grid = f.grid
    g_warped = g.spline(_checked_warp_values(warp.forward, grid.points))
    r_fwd = corr(f.samples, g_warped, grid.weights)
    p_fwd = _penalty_of_spline(warp.forward, grid)
    f_unwarped = f.spline(_checked_warp_values(warp.inverse, grid.points))
    r_inv = corr(g.samples, f_unwarped, grid.weights)
    p_inv = _penalty_of_spline(warp.inverse, grid)
    rho = 0.5 * ((r_fwd - lambda0 * p_fwd) + (r_inv - lambda0 * p_inv))
    return RhoParts(rho, r_fwd, r_inv, p_fwd, p_inv)


def _proxy_objective(f: Curve, g: Curve, lambda0: float, ws: _WarpWorkspace):
    """Fast negative-similarity objective without building the inverse spline.

    The reverse-direction correlation and penalty are computed by change of
    variables with the forward derivative as weight, which is the same quantity
    up to inverse-approximation error.
    """
    w = f.grid.weights
    fs = f.samples
    f_centered = fs - w @ fs
    f_norm = np.sqrt(w @ (f_centered * f_centered))
    g_bspline = g.spline
    basis, deriv, steps = ws.basis, ws.deriv, ws.greville_steps

    def objective(raw: np.ndarray) -> float:
        coef = _coefficients_from_raw(raw, steps)
        psi = basis @ coef
        dpsi = deriv @ coef
        if not np.all(np.isfinite(dpsi)) or dpsi.min() <= 1e-9:
            return 2.0  # numerically flat somewhere; 1/dpsi would blow up
        g_warped = g_bspline(psi)
        gc = g_warped - w @ g_warped
        g_norm = np.sqrt(w @ (gc * gc))
        if g_norm <= ZERO_NORM_TOL:
            return 2.0
        r_fwd = np.clip((w @ (f_centered * gc)) / (f_norm * g_norm), -1.0, 1.0)
        p_fwd = w @ (dpsi - 1.0) ** 2
        wd = w * dpsi
        g_mean_w = wd @ g_warped
        f_mean_w = wd @ fs
        gcw = g_warped - g_mean_w
        fcw = fs - f_mean_w
        denom = np.sqrt((wd @ (gcw * gcw)) * (wd @ (fcw * fcw)))
        if denom <= ZERO_NORM_TOL**2:
            return 2.0
        r_inv = np.clip((wd @ (gcw * fcw)) / denom, -1.0, 1.0)
        p_inv = wd @ (1.0 / dpsi - 1.0) ** 2
        rho = 0.5 * ((r_fwd - lambda0 * p_fwd) + (r_inv - lambda0 * p_inv))
        return -rho if np.isfinite(rho) else 2.0

    return objective


def _budgeted_nelder_mead(objective, x0: np.ndarray, opts: OptimizerSettings) -> np.ndarray:
    remaining = opts.budget_per_start
    x, fx = x0, objective(x0)
    step = opts.simplex_step
    while remaining > 2 * (len(x0) + 1):
        simplex = np.vstack([x] + [x + step * e for e in np.eye(len(x0))])
        res = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={
                "maxfev": remaining,
                "xatol": opts.xatol,
                "fatol": opts.fatol,
                "initial_simplex": simplex,
            },
        )
        remaining -= res.nfev
        if res.fun >= fx - 1e-13:
            break
        x, fx = res.x, res.fun
        step = max(step / 3.0, 1e-3)
    return x


def optimize_warping(
    f: Curve,
    g: Curve,
    lambda0: float,
    opts: OptimizerSettings = DEFAULT_OPTIMIZER,
    settings: SplineSettings = DEFAULT_SPLINES,
) -> tuple:
    """Maximize the penalized similarity of f and g over the warp family.

    Nelder-Mead multi-start: identity plus projections of fixed power warps.
    All start and final points are re-scored exactly (inverse spline included);
    the best exact value wins, so the result never falls below the identity
    alignment and matches rho_parts at the returned warp to machine precision.
    """
    if centered_norm(f.samples, f.grid.weights) <= ZERO_NORM_TOL or (
        centered_norm(g.samples, g.grid.weights) <= ZERO_NORM_TOL
    ):
        raise ZeroVarianceError("similarity is undefined for constant curves")
    ws = _workspace(f.grid, settings)
    objective = _proxy_objective(f, g, lambda0, ws)

    starts = []
    seen = set()
    for alpha in opts.power_starts:
        raw = np.zeros(ws.n_raw) if alpha == 1.0 else power_warp_raw(alpha, settings)
        key = raw.tobytes()
        if key not in seen:
            seen.add(key)
            starts.append(raw)
    identity = np.zeros(ws.n_raw)
    if identity.tobytes() not in seen:
        starts.insert(0, identity)

    candidates = list(starts)
    for raw in starts:
        final = _budgeted_nelder_mead(objective, raw, opts)
        if final.tobytes() not in seen:
            seen.add(final.tobytes())
            candidates.append(final)

    best_warp, best_parts = None, None
    for raw in candidates:
        try:
            warp = make_warping(raw, settings)
            parts = rho_parts(f, g, warp, lambda0)
        except (MonotonicityError, WarpRangeError, ZeroVarianceError):
            continue  # search drifted into a numerically flat warp
        if best_parts is None or parts.rho > best_parts.rho:
            best_warp, best_parts = warp, parts
    return best_warp, best_parts
