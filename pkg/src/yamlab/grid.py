"""Discretized model manifolds and their warped products.

Every factor is a tensor grid of cells.  A factor knows its cell volumes and,
for each of its own axes, two edge arrays:

* ``energy`` -- weights ``c_e`` such that the Dirichlet energy of a field is
  ``sum_e c_e (f_j - f_i)**2`` over neighbouring cells ``i, j``;
* ``grad`` -- coefficients turning a squared difference into the squared
  pointwise gradient ``|df|**2`` at the edge.

:func:`assemble_product` combines base factors, an optional fiber factor and a
warping function ``rho`` on the base into a :class:`ProductModel` carrying the
metric ``h + rho**2 g`` in this form, together with its scalar curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np
from scipy import sparse, special

from .errors import DomainError, ResolutionError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def sphere_volume(m: int) -> float:
    """Volume of the unit round sphere ``S^m`` in ``R^(m+1)``."""
    if int(m) != m or m < 1:
        raise DomainError(f"sphere dimension must be an integer >= 1, got {m}")
    return 2.0 * math.pi ** ((m + 1) / 2.0) / special.gamma((m + 1) / 2.0)


def _sin_power_integrals(edges: np.ndarray, k: int) -> np.ndarray:
    """Integrals of ``sin(u)**k`` over the cells bounded by ``edges``.

    Gauss-Legendre per cell, so relative accuracy does not degrade in the
    tiny cells next to the poles.
    """
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    if k == 0:
        return 2.0 * half
    x = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES
    return half * (np.sin(x) ** k @ _GL_WEIGHTS)


def _harmonic(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    total = a + b
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(total > 0, 2.0 * a * b / np.where(total > 0, total, 1.0), 0.0)
    return out


def _edge_mean(x: np.ndarray, axis: int, periodic: bool) -> np.ndarray:
    """Harmonic mean of ``x`` across the edges along ``axis``."""
    if periodic:
        return _harmonic(x, np.roll(x, -1, axis=axis))
    n = x.shape[axis]
    lo = np.take(x, np.arange(n - 1), axis=axis)
    hi = np.take(x, np.arange(1, n), axis=axis)
    return _harmonic(lo, hi)


def _edge_diff(f: np.ndarray, axis: int, periodic: bool) -> np.ndarray:
    if periodic:
        return np.roll(f, -1, axis=axis) - f
    return np.diff(f, axis=axis)


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    """A model manifold with closed-form curvature and volume.

    ``size`` is the radius for spheres and the length for circles and
    intervals; it is 0 for a point.
    """

    kind: str
    dim: int
    size: float
    scalar_curvature: float
    ricci_lower: float
    volume: float

    def scaled(self, lam: float) -> "CatalogEntry":
        """The same manifold with its metric multiplied by ``lam``."""
        return replace(
            self,
            size=self.size * math.sqrt(lam),
            scalar_curvature=self.scalar_curvature / lam,
            ricci_lower=self.ricci_lower / lam,
            volume=self.volume * lam ** (self.dim / 2.0),
        )


def round_sphere(m: int, r: float = 1.0) -> CatalogEntry:
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    return CatalogEntry(
        "sphere", m, r, m * (m - 1) / r**2, (m - 1) / r**2, r**m * sphere_volume(m)
    )


def full_sphere2(r: float = 1.0) -> CatalogEntry:
    return replace(round_sphere(2, r), kind="sphere2")


def circle(T: float) -> CatalogEntry:
    if T <= 0:
        raise DomainError(f"circle length must be positive, got {T}")
    return CatalogEntry("circle", 1, T, 0.0, 0.0, T)


def interval(length: float) -> CatalogEntry:
    if length <= 0:
        raise DomainError(f"interval length must be positive, got {length}")
    return CatalogEntry("interval", 1, length, 0.0, 0.0, length)


def point() -> CatalogEntry:
    return CatalogEntry("point", 0, 0.0, 0.0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# factors


@dataclass(frozen=True)
class AxisData:
    """Edge data of one grid axis; see the module docstring."""

    periodic: bool
    energy: np.ndarray
    grad: np.ndarray
    coords: np.ndarray
    kind: str
    extent: float


@dataclass(frozen=True, eq=False)
class AxisGrid:
    """One discretized axis: a circle, a polar interval, or an interval.

    A polar interval is the radial reduction of a round sphere ``S^m`` over
    the polar angle ``theta`` in ``[0, pi]``; its cells carry the volume of
    the corresponding spherical zones.
    """

    topology: str
    nodes: np.ndarray
    edges: np.ndarray
    volumes: np.ndarray
    inv_metric: np.ndarray
    dim: int
    entry: CatalogEntry

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,)

    @property
    def total_volume(self) -> float:
        return float(self.volumes.sum())

    @property
    def periodic(self) -> bool:
        return self.topology == "circle"

    def spacing(self) -> np.ndarray:
        """Node-to-node distances across each edge (coordinate units)."""
        if self.periodic:
            period = self.edges[-1] - self.edges[0]
            return np.diff(np.append(self.nodes, self.nodes[0] + period))
        return np.diff(self.nodes)

    def axis_data(self) -> list[AxisData]:
        dx = self.spacing()
        if self.topology == "polar":
            # the density sin^(m-1) vanishes at the poles; cell means of it are
            # too far from its value at the first interior edges
            r = self.entry.size
            theta_e = self.edges[1:-1]
            density = sphere_volume(self.dim - 1) * r**self.dim * np.sin(theta_e) ** (self.dim - 1)
            energy = density * _edge_mean(self.inv_metric, 0, False) / dx
        else:
            widths = np.diff(self.edges)
            density = self.volumes / widths * self.inv_metric
            energy = _edge_mean(density, 0, self.periodic) / dx
        grad = _edge_mean(self.inv_metric, 0, self.periodic) / dx**2
        extent = float(self.edges[-1] - self.edges[0])
        return [AxisData(self.periodic, energy, grad, self.nodes, self.topology, extent)]

    def scaled(self, lam: float) -> "AxisGrid":
        """Grid of the same manifold with its metric multiplied by ``lam``."""
        return replace(
            self,
            volumes=self.volumes * lam ** (self.dim / 2.0),
            inv_metric=self.inv_metric / lam,
            entry=self.entry.scaled(lam),
        )


@dataclass(frozen=True, eq=False)
class SphereGrid2:
    """Full ``(theta, phi)`` grid on the round 2-sphere of radius ``radius``."""

    radius: float
    theta_edges: np.ndarray
    phi_edges: np.ndarray
    volumes: np.ndarray
    entry: CatalogEntry
    dim: int = 2

    @property
    def theta(self) -> np.ndarray:
        return 0.5 * (self.theta_edges[:-1] + self.theta_edges[1:])

    @property
    def phi(self) -> np.ndarray:
        return 0.5 * (self.phi_edges[:-1] + self.phi_edges[1:])

    @property
    def shape(self) -> tuple[int, ...]:
        return self.volumes.shape

    @property
    def total_volume(self) -> float:
        return float(self.volumes.sum())

    def axis_data(self) -> list[AxisData]:
        r2 = self.radius**2
        dph = self.phi_edges[1] - self.phi_edges[0]
        nphi = self.phi.size
        zone = _sin_power_integrals(self.theta_edges, 1)
        th_energy = np.sin(self.theta_edges[1:-1]) * dph / np.diff(self.theta)
        th_grad = np.full(th_energy.shape, 1.0 / r2) / np.diff(self.theta) ** 2
        ph_energy = zone / np.sin(self.theta) ** 2 / dph
        ph_grad = 1.0 / (r2 * np.sin(self.theta) ** 2 * dph**2)
        return [
            AxisData(False, np.repeat(th_energy[:, None], nphi, axis=1),
                     np.repeat(th_grad[:, None], nphi, axis=1), self.theta, "polar", math.pi),
            AxisData(True, np.repeat(ph_energy[:, None], nphi, axis=1),
                     np.repeat(ph_grad[:, None], nphi, axis=1), self.phi, "azimuth", 2 * math.pi),
        ]

    def scaled(self, lam: float) -> "SphereGrid2":
        return replace(
            self,
            radius=self.radius * math.sqrt(lam),
            volumes=self.volumes * lam,
            entry=self.entry.scaled(lam),
        )


@dataclass(frozen=True, eq=False)
class PointFactor:
    """The zero-dimensional factor."""

    entry: CatalogEntry = field(default_factory=point)
    dim: int = 0

    @property
    def shape(self) -> tuple[int, ...]:
        return ()

    @property
    def volumes(self) -> np.ndarray:
        return np.array(1.0)

    @property
    def total_volume(self) -> float:
        return 1.0

    def axis_data(self) -> list[AxisData]:
        return []

    def scaled(self, lam: float) -> "PointFactor":
        return self


Factor = Union[AxisGrid, SphereGrid2, PointFactor]


def build_circle(T: float, n: int) -> AxisGrid:
    """Periodic grid on the circle of length ``T`` with ``n`` equal cells."""
    if n < 3:
        raise ResolutionError(f"circle needs at least 3 cells, got {n}")
    entry = circle(T)
    edges = np.linspace(0.0, T, n + 1)
    nodes = 0.5 * (edges[:-1] + edges[1:])
    return AxisGrid("circle", nodes, edges, np.full(n, T / n), np.ones(n), 1, entry)


def build_interval(length: float, n: int) -> AxisGrid:
    """Flat interval ``[0, length]`` with zero-flux ends."""
    if n < 2:
        raise ResolutionError(f"interval needs at least 2 cells, got {n}")
    entry = interval(length)
    edges = np.linspace(0.0, length, n + 1)
    nodes = 0.5 * (edges[:-1] + edges[1:])
    return AxisGrid("interval", nodes, edges, np.diff(edges), np.ones(n), 1, entry)


def build_radial_sphere(m: int, r: float, n: int) -> AxisGrid:
    """Radial reduction of the round sphere ``S^m_r`` onto ``theta``.

    Nodes sit at cell centres so no node lies on a pole; the zero-flux
    closure at both ends matches ``f'(0) = f'(pi) = 0`` for smooth radial
    functions.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"radial sphere needs dimension >= 2, got {m}")
    if n < 8:
        raise ResolutionError(f"radial sphere needs at least 8 cells, got {n}")
    entry = round_sphere(m, r)
    edges = np.linspace(0.0, math.pi, n + 1)
    nodes = 0.5 * (edges[:-1] + edges[1:])
    volumes = sphere_volume(m - 1) * r**m * _sin_power_integrals(edges, m - 1)
    return AxisGrid("polar", nodes, edges, volumes, np.full(n, 1.0 / r**2), m, entry)


def build_full_sphere2(r: float, n_theta: int, n_phi: int) -> SphereGrid2:
    """Full latitude-longitude grid on the 2-sphere of radius ``r``."""
    if n_theta < 8 or n_phi < 8:
        raise ResolutionError(f"full sphere grid needs >= 8 cells per axis, got {n_theta}x{n_phi}")
    entry = full_sphere2(r)
    th = np.linspace(0.0, math.pi, n_theta + 1)
    ph = np.linspace(0.0, 2.0 * math.pi, n_phi + 1)
    zone = _sin_power_integrals(th, 1)
    volumes = r**2 * np.outer(zone, np.diff(ph))
    return SphereGrid2(r, th, ph, volumes, entry)


def build_factor(entry: CatalogEntry, n: int) -> Factor:
    """Grid for a catalog entry at resolution ``n`` (cells per axis)."""
    if entry.kind == "point":
        return PointFactor(entry)
    if entry.kind == "circle":
        return build_circle(entry.size, n)
    if entry.kind == "interval":
        return build_interval(entry.size, n)
    if entry.kind == "sphere":
        return build_radial_sphere(entry.dim, entry.size, n)
    if entry.kind == "sphere2":
        return build_full_sphere2(entry.size, n, n)
    raise DomainError(f"unknown catalog kind {entry.kind!r}")


# ---------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class ModelAxis:
    """One axis of an assembled model, with its edge data in full shape."""

    index: int
    role: str  # "base" or "fiber"
    periodic: bool
    weights: np.ndarray
    grad: np.ndarray
    coords: np.ndarray
    kind: str
    extent: float


def _expand(arr: np.ndarray, offset: int, ndim: int) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    return arr.reshape((1,) * offset + arr.shape + (1,) * (ndim - offset - arr.ndim))


@dataclass(frozen=True, eq=False)
class ProductModel:
    """Warped product ``(base factors) x_rho (fiber)`` on a cell grid.

    Cell arrays have shape ``base_shape + fiber_shape``.  ``volumes`` already
    contain the ``rho**m`` factor, and the fiber edge weights the
    ``rho**(m - 2)`` factor, so energies and integrals need no further
    knowledge of the warp.
    """

    base: tuple
    fiber: Factor | None
    rho: np.ndarray
    volumes: np.ndarray
    axes: tuple[ModelAxis, ...]
    scalar_curvature: np.ndarray
    label: str = ""

    @property
    def shape(self) -> tuple[int, ...]:
        return self.volumes.shape

    @property
    def size(self) -> int:
        return self.volumes.size

    @property
    def base_shape(self) -> tuple[int, ...]:
        return self.rho.shape

    @property
    def fiber_shape(self) -> tuple[int, ...]:
        return () if self.fiber is None else self.fiber.shape

    @property
    def base_dim(self) -> int:
        return sum(f.dim for f in self.base)

    @property
    def fiber_dim(self) -> int:
        return 0 if self.fiber is None else self.fiber.dim

    @property
    def dim(self) -> int:
        return self.base_dim + self.fiber_dim

    @property
    def fiber_volume(self) -> float:
        return 0.0 if self.fiber is None else self.fiber.total_volume

    @property
    def fiber_ricci(self) -> float:
        return 0.0 if self.fiber is None else self.fiber.entry.ricci_lower

    @property
    def total_volume(self) -> float:
        return float(self.volumes.sum())

    @property
    def gauss_bonnet_only(self) -> bool:
        """Total dimension 2: the Yamabe constant is a Gauss-Bonnet integral."""
        return self.dim == 2

    def check_field(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != self.shape:
            raise DomainError(f"field shape {f.shape} does not match model shape {self.shape}")
        return f

    def axis_energies(self, f: np.ndarray) -> list[float]:
        """Dirichlet energy contributed by each axis."""
        f = self.check_field(f)
        return [
            float(np.sum(ax.weights * _edge_diff(f, ax.index, ax.periodic) ** 2))
            for ax in self.axes
        ]

    def stiffness_apply(self, f: np.ndarray) -> np.ndarray:
        """``K f`` where ``f @ K @ f`` is the Dirichlet energy."""
        f = self.check_field(f)
        out = np.zeros_like(f)
        for ax in self.axes:
            flux = ax.weights * _edge_diff(f, ax.index, ax.periodic)
            if ax.periodic:
                out -= flux
                out += np.roll(flux, 1, axis=ax.index)
            else:
                n = f.shape[ax.index]
                lo = [slice(None)] * f.ndim
                hi = [slice(None)] * f.ndim
                lo[ax.index] = slice(0, n - 1)
                hi[ax.index] = slice(1, n)
                out[tuple(lo)] -= flux
                out[tuple(hi)] += flux
        return out

    def stiffness_matrix(self) -> sparse.csr_matrix:
        """Sparse symmetric ``K`` acting on C-order flattened fields."""
        idx = np.arange(self.size).reshape(self.shape)
        rows, cols, vals = [], [], []
        for ax in self.axes:
            if ax.periodic:
                nb = np.roll(idx, -1, axis=ax.index)
                here = idx
            else:
                n = self.shape[ax.index]
                here = np.take(idx, np.arange(n - 1), axis=ax.index)
                nb = np.take(idx, np.arange(1, n), axis=ax.index)
            rows.append(here.ravel())
            cols.append(nb.ravel())
            vals.append(np.broadcast_to(ax.weights, here.shape).ravel())
        if not rows:
            return sparse.csr_matrix((self.size, self.size))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        w = np.concatenate(vals)
        off = sparse.coo_matrix((-w, (r, c)), shape=(self.size, self.size)).tocsr()
        off = off + off.T
        diag = -np.asarray(off.sum(axis=1)).ravel()
        return (off + sparse.diags(diag)).tocsr()

    def gradient_squared(self, f: np.ndarray) -> np.ndarray:
        """Pointwise ``|df|**2``: per axis, the mean over the adjacent edges."""
        f = self.check_field(f)
        out = np.zeros_like(f)
        for ax in self.axes:
            g = ax.grad * _edge_diff(f, ax.index, ax.periodic) ** 2
            if ax.periodic:
                out += 0.5 * (g + np.roll(g, 1, axis=ax.index))
                continue
            n = f.shape[ax.index]
            acc = np.zeros_like(f)
            cnt = np.zeros(f.shape[ax.index])
            lo = [slice(None)] * f.ndim
            hi = [slice(None)] * f.ndim
            lo[ax.index] = slice(0, n - 1)
            hi[ax.index] = slice(1, n)
            acc[tuple(lo)] += g
            acc[tuple(hi)] += g
            cnt[: n - 1] += 1
            cnt[1:] += 1
            out += acc / _expand(cnt, ax.index, f.ndim)
        return out


def _product_arrays(factors: Sequence[Factor]):
    ndims = [len(fa.shape) for fa in factors]
    offsets = np.concatenate([[0], np.cumsum(ndims)]).astype(int)
    ndim = int(offsets[-1])
    vols = [_expand(fa.volumes, off, ndim) for fa, off in zip(factors, offsets)]
    return offsets, ndim, vols


def assemble_product(
    base: Sequence[Factor] | Factor = (),
    fiber: Factor | None = None,
    rho: float | np.ndarray | None = None,
    label: str = "",
) -> ProductModel:
    """Assemble the warped product ``h + rho**2 g``.

    Parameters
    ----------
    base : sequence of factors
        Base factors; an empty sequence (or a :class:`PointFactor`) is a point.
    fiber : factor, optional
        The warped fiber.
    rho : float or array, optional
        Warping function sampled at base cells; defaults to 1.
    """
    if not isinstance(base, (list, tuple)):
        base = (base,)
    base = tuple(b for b in base if not isinstance(b, PointFactor))
    if isinstance(fiber, PointFactor):
        fiber = None
    b_offsets, b_ndim, b_vols = _product_arrays(base)
    base_shape = tuple(s for fa in base for s in fa.shape)
    if rho is None:
        rho = 1.0
    rho = np.asarray(rho, dtype=float)
    if rho.ndim == 0:
        rho = np.full(base_shape, float(rho))
    if rho.shape != base_shape:
        raise DomainError(f"rho has shape {rho.shape}, base has shape {base_shape}")
    if not np.all(rho > 0):
        raise DomainError("warping function must be positive at every base cell")

    factors = list(base) + ([fiber] if fiber is not None else [])
    offsets, ndim, vols = _product_arrays(factors)
    m = 0 if fiber is None else fiber.dim
    rho_full = _expand(rho, 0, ndim)

    volumes = rho_full**m
    for v in vols:
        volumes = volumes * v
    volumes = np.ascontiguousarray(np.broadcast_to(volumes, tuple(s for fa in factors for s in fa.shape)))

    axes = []
    for j, fa in enumerate(factors):
        role = "fiber" if (fiber is not None and j == len(factors) - 1) else "base"
        others = np.ones(())
        for i, v in enumerate(vols):
            if i != j:
                others = others * v
        for a, data in enumerate(fa.axis_data()):
            g = int(offsets[j]) + a
            w = _expand(data.energy, int(offsets[j]), ndim) * others
            grad = _expand(data.grad, int(offsets[j]), ndim)
            if role == "base":
                w = w * _edge_mean(rho_full**m, g, data.periodic)
            else:
                w = w * rho_full ** (m - 2)
                grad = grad / rho_full**2
            edge_shape = list(volumes.shape)
            edge_shape[g] = data.energy.shape[a]
            axes.append(
                ModelAxis(g, role, data.periodic,
                          np.ascontiguousarray(np.broadcast_to(w, edge_shape)),
                          np.broadcast_to(grad, edge_shape), data.coords, data.kind,
                          data.extent)
            )

    s_base = sum(fa.entry.scalar_curvature for fa in base)
    if fiber is None:
        curvature = np.full(volumes.shape, float(s_base))
    else:
        s_warp = scalar_curvature_warped(base, fiber.entry.scalar_curvature, m, rho)
        curvature = np.ascontiguousarray(
            np.broadcast_to(_expand(s_warp, 0, ndim), volumes.shape)
        )
    return ProductModel(tuple(base), fiber, rho, volumes, tuple(axes), curvature, label)


def scalar_curvature_warped(
    base: Sequence[Factor] | Factor, s_g: float, m: int, rho: float | np.ndarray
) -> np.ndarray:
    """Scalar curvature of ``h + rho**2 g`` at each base cell.

    ``s_h + s_g/rho**2 + (2m/rho) L rho - m(m-1)|d rho|**2/rho**2`` with ``L``
    the nonnegative (energy-gradient) Laplacian of the base.  With this sign
    the sin-warp of a round sphere over ``[0, pi]`` returns ``m(m+1)``.
    """
    base_model = assemble_product(base, None, None)
    rho = np.asarray(rho, dtype=float)
    if rho.ndim == 0:
        rho = np.full(base_model.shape, float(rho))
    if rho.shape != base_model.shape:
        raise DomainError(f"rho has shape {rho.shape}, base has shape {base_model.shape}")
    if not np.all(rho > 0):
        raise DomainError("warping function must be positive at every base cell")
    lap = base_model.stiffness_apply(rho) / base_model.volumes
    grad2 = base_model.gradient_squared(rho)
    return (
        base_model.scalar_curvature
        + s_g / rho**2
        + 2.0 * m * lap / rho
        - m * (m - 1) * grad2 / rho**2
    )
