"""Scalar fields on product models: norms, energies, the Yamabe quotient.

Fields are plain ``numpy`` arrays shaped like ``model.shape``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedDimensionError
from .grid import ProductModel


@dataclass(frozen=True)
class YamabeConstants:
    """``a = 4(d-1)/(d-2)`` and the critical exponent ``p = 2d/(d-2)``."""

    d: int
    a: float
    p: float


def yamabe_constants(d: int) -> YamabeConstants:
    if d < 3:
        raise UnsupportedDimensionError(
            f"the Yamabe functional needs dimension >= 3, got {d}; "
            "in dimension 2 use the Gauss-Bonnet integral"
        )
    return YamabeConstants(d, 4.0 * (d - 1) / (d - 2), 2.0 * d / (d - 2))


def integrate(f: np.ndarray, model: ProductModel) -> float:
    return float(np.sum(model.check_field(f) * model.volumes))


def lp_norm(f: np.ndarray, p: float, model: ProductModel) -> float:
    """``(sum |f|^p v)^(1/p)`` with cell volumes ``v``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    f = model.check_field(f)
    return float(np.sum(np.abs(f) ** p * model.volumes) ** (1.0 / p))


def dirichlet_energy(f: np.ndarray, model: ProductModel) -> float:
    return float(sum(model.axis_energies(f)))


def dirichlet_split(f: np.ndarray, model: ProductModel) -> tuple[float, float]:
    """Return ``(int |d^N f|^2, int rho^-2 |d^M f|^2)`` over the warped product.

    Without a fiber the whole energy is reported as the fiber part
    (the model is then treated as a single manifold).
    """
    energies = model.axis_energies(f)
    if model.fiber is None:
        return 0.0, float(sum(energies))
    base = sum(e for e, ax in zip(energies, model.axes) if ax.role == "base")
    fiber = sum(e for e, ax in zip(energies, model.axes) if ax.role == "fiber")
    return float(base), float(fiber)


def laplacian_apply(f: np.ndarray, model: ProductModel) -> np.ndarray:
    """Nonnegative Laplacian ``L f = K f / v``.

    ``L`` is the gradient of the Dirichlet energy in the volume-weighted inner
    product, so ``sum(f * L(f) * v)`` equals the energy.
    """
    return model.stiffness_apply(f) / model.volumes


def total_scalar_curvature(model: ProductModel) -> float:
    return float(np.sum(model.scalar_curvature * model.volumes))


def yamabe_quotient(f: np.ndarray, model: ProductModel) -> float:
    """``(a E(f) + int s f^2) / ||f||_p^2`` for the model's total dimension."""
    consts = yamabe_constants(model.dim)
    f = model.check_field(f)
    denom = lp_norm(f, consts.p, model) ** 2
    if denom == 0.0:
        raise DomainError("the Yamabe quotient is undefined for the zero field")
    num = consts.a * dirichlet_energy(f, model) + float(
        np.sum(model.scalar_curvature * f**2 * model.volumes)
    )
    return num / denom


def round_sphere_yamabe(d: int) -> float:
    """``Y(S^d) = d(d-1) V_d^(2/d)``, the value at the round metric."""
    from .grid import sphere_volume

    return d * (d - 1) * sphere_volume(d) ** (2.0 / d)


def random_smooth_field(
    model: ProductModel,
    rng: np.random.Generator,
    modes: int = 3,
    terms: int = 6,
    offset: float = 0.0,
) -> np.ndarray:
    """Random low-frequency field, smooth on the represented manifold.

    Each term multiplies one smooth mode per axis: ``cos(k u + phase)`` on
    circles (``u`` the angle), ``cos(k theta)`` on polar axes (a polynomial in
    ``cos theta``), ``cos(k t pi / L)`` on intervals.  Azimuthal modes carry a
    ``sin(theta)**k`` factor so the field stays smooth at the poles.
    """
    f = np.full(model.shape, float(offset))
    ndim = len(model.shape)
    for _ in range(terms):
        term = np.ones(model.shape)
        for ax in model.axes:
            k = int(rng.integers(0, modes + 1))
            shape = [1] * ndim
            shape[ax.index] = ax.coords.size
            x = ax.coords
            if ax.kind == "circle":
                mode = np.cos(k * 2.0 * math.pi * x / ax.extent + rng.uniform(0, 2 * math.pi))
            elif ax.kind == "polar":
                mode = np.cos(k * x)
            elif ax.kind == "azimuth":
                mode = np.cos(k * x + rng.uniform(0, 2 * math.pi))
                if k > 0:
                    # the polar axis of the same sphere precedes its azimuth
                    theta = model.axes[ax.index - 1].coords
                    pshape = [1] * ndim
                    pshape[ax.index - 1] = theta.size
                    term = term * (np.sin(theta) ** k).reshape(pshape)
            else:
                mode = np.cos(k * math.pi * x / ax.extent)
            term = term * mode.reshape(shape)
        f += rng.normal() * term
    return f
