"""Curve objects: samples on the shared grid plus a spline representation,
with provenance of which original curves each one aggregates."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateDataError, InvalidInputError
from .products import centered_norm, ZERO_NORM_TOL
from .splines import (
    DEFAULT_SPLINES,
    Grid,
    SplineRep,
    SplineSettings,
    evaluate,
    fit_least_squares,
)


@dataclass(eq=False)
class Curve:
    id: int
    grid: Grid
    samples: np.ndarray
    spline: SplineRep
    n_orig: int = 1
    members: frozenset = field(default_factory=frozenset)

    @cached_property
    def content_key(self) -> bytes:
        h = hashlib.blake2b(digest_size=16)
        h.update(self.samples.tobytes())
        h.update(self.spline.coefficients.tobytes())
        return h.digest()


def fit_shape_spline(
    x, y, settings: SplineSettings = DEFAULT_SPLINES, weights=None
) -> SplineRep:
    x = np.asarray(x, dtype=float)
    if weights is None:
        weights = np.ones_like(x)
    return fit_least_squares(
        x, y, weights, settings.shape_degree, settings.shape_interior()
    )


def refit_on_grid(
    curve_id: int,
    grid: Grid,
    values: np.ndarray,
    settings: SplineSettings = DEFAULT_SPLINES,
    n_orig: int = 1,
    members: frozenset = frozenset(),
) -> Curve:
    """Project grid values onto the shape-spline space and re-evaluate."""
    spline = fit_shape_spline(grid.points, values, settings)
    return Curve(
        id=curve_id,
        grid=grid,
        samples=evaluate(spline, grid.points),
        spline=spline,
        n_orig=n_orig,
        members=members,
    )


def smooth_curve(
    curve_id: int,
    data_points,
    values,
    grid: Grid,
    settings: SplineSettings = DEFAULT_SPLINES,
) -> Curve:
    """Ingest a raw observed curve: pre-smooth on its own time points, then
    evaluate on the shared run grid.  Constant curves are rejected."""
    data_points = np.asarray(data_points, dtype=float)
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(f"curve {curve_id} contains non-finite values")
    spline = fit_shape_spline(data_points, values, settings)
    samples = evaluate(spline, grid.points)
    if centered_norm(samples, grid.weights) <= ZERO_NORM_TOL:
        raise DegenerateDataError(f"curve {curve_id} is constant after smoothing")
    return Curve(
        id=curve_id,
        grid=grid,
        samples=samples,
        spline=spline,
        n_orig=1,
        members=frozenset([curve_id]),
    )


def normalize(curve: Curve) -> Curve:
    """Scale a curve to unit centered L2 seminorm (spline rescaled consistently)."""
    scale = centered_norm(curve.samples, curve.grid.weights)
    if scale <= ZERO_NORM_TOL:
        raise DegenerateDataError(f"curve {curve.id} has zero centered seminorm")
    if abs(scale - 1.0) < 1e-12:
        return curve  # keeps content keys stable across renormalization passes
    spline = SplineRep(
        degree=curve.spline.degree,
        interior_knots=curve.spline.interior_knots,
        coefficients=curve.spline.coefficients / scale,
    )
    return Curve(
        id=curve.id,
        grid=curve.grid,
        samples=curve.samples / scale,
        spline=spline,
        n_orig=curve.n_orig,
        members=curve.members,
    )
