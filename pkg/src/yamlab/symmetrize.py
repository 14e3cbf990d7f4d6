"""Spherical rearrangement and fiberwise symmetrization.

The rearrangement of a fiber slice is first built exactly, as a step function
of the enclosed ball volume: cells sorted by value (stable), laid out as
geodesic annuli from the south pole.  That step function is then averaged
over the cells of the radial target grid, which keeps every volume-weighted
mean and only smears the level sets inside one target cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fields import dirichlet_split, yamabe_quotient
from .grid import (
    AxisGrid,
    ProductModel,
    _GL_NODES,
    _GL_WEIGHTS,
    assemble_product,
    build_radial_sphere,
    sphere_volume,
)

VOLUME_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class RearrangementTarget:
    """Radial grid on ``S^m_V`` with its cumulative ball-volume table.

    ``ball_volumes[i]`` is the volume of the geodesic ball about the south
    pole whose boundary is the ``i``-th cell edge.
    """

    m: int
    volume: float
    radius: float
    grid: AxisGrid
    ball_volumes: np.ndarray

    def ball_volume(self, s: float | np.ndarray) -> np.ndarray:
        """Volume of the geodesic ball of radius ``s`` (arc length)."""
        s = np.asarray(s, dtype=float)
        theta = np.clip(s / self.radius, 0.0, math.pi)
        edges = self.grid.edges
        i = np.clip(np.searchsorted(edges, theta, side="right") - 1, 0, edges.size - 2)
        a = edges[i]
        half = 0.5 * (theta - a)
        x = (a + half)[..., None] + half[..., None] * _GL_NODES
        partial = half * (np.sin(x) ** (self.m - 1) @ _GL_WEIGHTS)
        scale = sphere_volume(self.m - 1) * self.radius**self.m
        return self.ball_volumes[i] + scale * partial

    def radius_for_volume(self, v: float | np.ndarray) -> np.ndarray:
        """Geodesic radius of the ball of volume ``v`` about the south pole.

        Newton's method on the exact profile inside the bracketing cell of the
        edge table, falling back to bisection when a step leaves the bracket.
        """
        v = np.clip(np.asarray(v, dtype=float), 0.0, self.volume)
        edges = self.grid.edges
        table = self.ball_volumes
        i = np.clip(np.searchsorted(table, v, side="right") - 1, 0, edges.size - 2)
        lo, hi = edges[i].copy(), edges[i + 1].copy()
        theta = 0.5 * (lo + hi)
        scale = sphere_volume(self.m - 1) * self.radius**self.m
        for _ in range(100):
            resid = self.ball_volume(theta * self.radius) - v
            lo = np.where(resid < 0, theta, lo)
            hi = np.where(resid > 0, theta, hi)
            slope = scale * np.sin(theta) ** (self.m - 1)
            with np.errstate(divide="ignore", invalid="ignore"):
                nxt = theta - resid / slope
            bad = ~np.isfinite(nxt) | (nxt <= lo) | (nxt >= hi)
            nxt = np.where(bad, 0.5 * (lo + hi), nxt)
            done = np.all(np.abs(nxt - theta) <= 1e-15 * math.pi)
            theta = nxt
            if done:
                break
        return theta * self.radius


def build_target(m: int, V: float, n_cells: int) -> RearrangementTarget:
    """Target sphere ``S^m_V`` of volume ``V`` with ``n_cells`` radial cells."""
    if V <= 0:
        raise DomainError(f"target volume must be positive, got {V}")
    radius = (V / sphere_volume(m)) ** (1.0 / m)
    grid = build_radial_sphere(m, radius, n_cells)
    table = np.concatenate([[0.0], np.cumsum(grid.volumes)])
    return RearrangementTarget(m, float(table[-1]), radius, grid, table)


@dataclass(frozen=True)
class StepProfile:
    """Exact rearrangement: value ``values[k]`` on the annulus between balls
    of volume ``cumulative[k]`` and ``cumulative[k+1]``."""

    values: np.ndarray
    volumes: np.ndarray
    cumulative: np.ndarray

    def integral(self, p: float = 1.0) -> float:
        """``int |f_*|^p`` over the target."""
        return float(np.sum(np.abs(self.values) ** p * self.volumes))

    def mean(self) -> float:
        """Signed integral ``int f_*``."""
        return float(np.sum(self.values * self.volumes))

    def sublevel_volume(self, t: float) -> float:
        """Volume of ``{f_* < t}``."""
        return float(self.cumulative[np.searchsorted(self.values, t, side="left")])

    def radii(self, target: RearrangementTarget) -> np.ndarray:
        """Geodesic radii of the level-set balls."""
        return target.radius_for_volume(self.cumulative)


def spherical_rearrangement(
    values: np.ndarray, volumes: np.ndarray, target: RearrangementTarget
) -> StepProfile:
    values = np.asarray(values, dtype=float).ravel()
    volumes = np.asarray(volumes, dtype=float).ravel()
    if values.shape != volumes.shape:
        raise DomainError("values and volumes must have the same length")
    total = volumes.sum()
    if abs(total - target.volume) > VOLUME_RTOL * target.volume:
        raise DomainError(
            f"slice volume {total!r} does not match target volume {target.volume!r}"
        )
    order = np.argsort(values, kind="stable")
    vols = volumes[order]
    cumulative = np.concatenate([[0.0], np.cumsum(vols)])
    if cumulative[-1] != target.volume:
        cumulative *= target.volume / cumulative[-1]
    return StepProfile(values[order], vols, cumulative)


def resample(profile: StepProfile, target: RearrangementTarget) -> np.ndarray:
    """Average the step profile over each target cell."""
    c = profile.cumulative
    b = target.ball_volumes
    points = np.union1d(c, b)
    lengths = np.diff(points)
    mids = 0.5 * (points[:-1] + points[1:])
    piece = np.clip(np.searchsorted(c, mids, side="right") - 1, 0, profile.values.size - 1)
    cell = np.clip(np.searchsorted(b, mids, side="right") - 1, 0, b.size - 2)
    n = b.size - 1
    num = np.bincount(cell, weights=profile.values[piece] * lengths, minlength=n)
    den = np.bincount(cell, weights=lengths, minlength=n)
    # averaging equal values can move the last bit; keep the output monotone and in range
    out = np.maximum.accumulate(num / den)
    return np.clip(out, profile.values[0], profile.values[-1])


def rearrange_fiber(
    values: np.ndarray, volumes: np.ndarray, target: RearrangementTarget
) -> np.ndarray:
    """Radial rearrangement of one fiber slice, on the target's cells.

    The result is non-decreasing from the south pole.
    """
    return resample(spherical_rearrangement(values, volumes, target), target)


def _slices(F: np.ndarray, model: ProductModel) -> np.ndarray:
    if model.fiber is None:
        raise DomainError("model has no fiber factor to rearrange")
    F = model.check_field(F)
    nbase = int(np.prod(model.base_shape, dtype=int))
    return F.reshape(nbase, -1)


def fiberwise_rearrange(
    F: np.ndarray, model: ProductModel, target: RearrangementTarget
) -> np.ndarray:
    """Rearrange every fiber slice of ``F``; shape ``base_shape + (n_target,)``."""
    rows = _slices(F, model)
    vols = np.asarray(model.fiber.volumes, dtype=float).ravel()
    out = np.empty((rows.shape[0], target.grid.n))
    for k, row in enumerate(rows):
        out[k] = rearrange_fiber(row, vols, target)
    return out.reshape(model.base_shape + (target.grid.n,))


def fiberwise_profiles(
    F: np.ndarray, model: ProductModel, target: RearrangementTarget
) -> list[StepProfile]:
    """Exact (pre-resample) rearrangement of every fiber slice."""
    vols = np.asarray(model.fiber.volumes, dtype=float).ravel()
    return [spherical_rearrangement(row, vols, target) for row in _slices(F, model)]


def default_target(model: ProductModel, n_cells: int | None = None) -> RearrangementTarget:
    """Target ``S^m_V`` for the model's fiber, matching its radial resolution."""
    if model.fiber is None:
        raise DomainError("model has no fiber factor")
    if n_cells is None:
        n_cells = model.fiber.shape[0]
    return build_target(model.fiber_dim, model.fiber_volume, n_cells)


def symmetrized_model(model: ProductModel, target: RearrangementTarget) -> ProductModel:
    """``N x S^m_V`` with base metric ``h_V = (V/V_m)^(2/m) h`` and the same warp."""
    lam = (target.volume / sphere_volume(target.m)) ** (2.0 / target.m)
    base = tuple(f.scaled(lam) for f in model.base)
    return assemble_product(base, target.grid, model.rho, label=f"sym({model.label})")


def _unwarped(model: ProductModel, fiber) -> ProductModel:
    return assemble_product(model.base, fiber, None)


def _require_ricci(model: ProductModel) -> None:
    m = model.fiber_dim
    if model.fiber_ricci < (m - 1) * (1.0 - 1e-12):
        raise DomainError(
            f"fiber Ricci lower bound {model.fiber_ricci} is below {m - 1}; "
            "the symmetrization inequalities do not apply"
        )


def check_polya_szego(
    F: np.ndarray,
    F_star: np.ndarray,
    model: ProductModel,
    target: RearrangementTarget,
) -> tuple[float, float]:
    """Margins of the fiber and base Dirichlet inequalities.

    Returns ``(E_M(F) - (V/V_m)^(2/m) E_S(F_*), E_N(F) - E_N(F_*))`` with all
    energies over the unwarped products ``N x M`` and ``N x S^m_V``.
    """
    _require_ricci(model)
    original = _unwarped(model, model.fiber)
    sym = _unwarped(model, target.grid)
    base_f, fiber_f = dirichlet_split(F, original)
    base_s, fiber_s = dirichlet_split(F_star, sym)
    factor = (target.volume / sphere_volume(target.m)) ** (2.0 / target.m)
    return fiber_f - factor * fiber_s, base_f - base_s


@dataclass(frozen=True)
class QuotientBound:
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def symmetrized_quotient_bound(
    F: np.ndarray, model: ProductModel, target: RearrangementTarget
) -> QuotientBound:
    """``Y(F)`` on the model against ``(V/V_m)^(2/d) Y(F_*)`` on the symmetrized model."""
    _require_ricci(model)
    F_star = fiberwise_rearrange(F, model, target)
    lhs = yamabe_quotient(F, model)
    sym = symmetrized_model(model, target)
    scale = (target.volume / sphere_volume(target.m)) ** (2.0 / model.dim)
    return QuotientBound(lhs, scale * yamabe_quotient(F_star, sym))


def check_equivariance(
    F: np.ndarray,
    model: ProductModel,
    target: RearrangementTarget,
    shift: int,
    axis: int | None = None,
) -> float:
    """Max difference between rearranging a shifted field and shifting the rearrangement.

    ``axis`` is a periodic base axis (the first one by default); ``shift``
    counts whole cells.
    """
    circles = [ax for ax in model.axes if ax.role == "base" and ax.periodic]
    if axis is None:
        if not circles:
            raise DomainError("model has no periodic base axis")
        axis = circles[0].index
    shifted = fiberwise_rearrange(np.roll(F, shift, axis=axis), model, target)
    expected = np.roll(fiberwise_rearrange(F, model, target), shift, axis=axis)
    return float(np.max(np.abs(shifted - expected)))
