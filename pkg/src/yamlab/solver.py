"""Yamabe minimizers and first Laplace eigenvalues on product models.

The Yamabe solver minimizes the subcritical quotients

    Q_q(f) = (a E(f) + int s f^2) / ||f||_q^2

for an increasing sequence of exponents ``q`` ending at the critical ``p``,
warm-starting each stage from the previous minimizer.  Each step moves along
the residual of the Euler-Lagrange equation preconditioned by the linear part
``a L + s_+``; with the full step and ``s > 0`` this is the nonlinear inverse
iteration ``f <- Q (a L + s)^(-1) f^(q-1)``.  Steps are halved until the
quotient does not increase.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as scipy_linalg
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .errors import ConvergenceError, UnsupportedDimensionError
from .fields import random_smooth_field, total_scalar_curvature, yamabe_constants, yamabe_quotient
from .grid import ProductModel, assemble_product

logger = logging.getLogger(__name__)


@dataclass
class SolveOptions:
    tol: float = 1e-9
    stage_tol: float = 1e-7
    max_iter: int = 5000
    schedule: tuple[float, ...] | None = None
    schedule_steps: int = 4
    init: str | np.ndarray = "constant"
    restarts: int = 0
    seed: int = 0
    window: int = 10
    max_step: float = 2.0
    bubble_width: float = 1.0


@dataclass
class SolveResult:
    minimizer: np.ndarray
    constant: float
    iterations: int
    relative_decrement: float
    q_path: tuple[float, ...]
    status: str
    history: list[float] = field(default_factory=list)
    restart_constants: list[float] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status in ("converged", "gauss-bonnet")


def default_schedule(p: float, steps: int = 4) -> tuple[float, ...]:
    """Exponents ``2 + (p - 2) k / steps`` for ``k = 1..steps``."""
    steps = max(int(steps), 1)
    return tuple(2.0 + (p - 2.0) * k / steps for k in range(1, steps + 1))


def bubble_field(model: ProductModel, width: float = 1.0) -> np.ndarray:
    """Positive profile concentrated near the first cell of the base.

    ``cosh(dist / width)^(-(d-2)/2)``, the cylinder picture of a round bubble,
    with ``dist`` the discrete distance along the base axes (periodic where
    the axis is a circle, in intrinsic length).  Without base axes the bubble
    sits at the south pole of the fiber.
    """
    exponent = (model.dim - 2) / 2.0
    ndim = len(model.shape)
    dist2 = np.zeros(model.shape)
    axes = [ax for ax in model.axes if ax.role == "base"]
    if not axes:
        axes = [ax for ax in model.axes if ax.kind == "polar"][:1]
    for ax in axes:
        x = ax.coords - ax.coords[0]
        if ax.periodic:
            x = np.minimum(x, ax.extent - x)
        if ax.kind == "polar":
            x = x * model.fiber.entry.size
        shape = [1] * ndim
        shape[ax.index] = x.size
        dist2 = dist2 + (x**2).reshape(shape)
    return np.cosh(np.sqrt(dist2) / width) ** (-exponent)


DIRECT_LIMIT = 30000


def _separable_solver(model: ProductModel, a: float, c: float):
    """Solve ``(a K + c V) x = b`` on a direct product by diagonalizing the base.

    With constant ``rho`` and constant ``c`` the operator is
    ``a r^m K_b (x) V_f + a r^(m-2) V_b (x) K_f + c r^m V_b (x) V_f``; the
    generalized eigenvectors ``U`` of ``(K_b, V_b)`` split it into one fiber
    problem per base eigenvalue.
    """
    base = assemble_product(model.base, None, None)
    fiber = assemble_product((), model.fiber, None)
    r = float(model.rho.flat[0])
    m = model.fiber_dim
    Kb = base.stiffness_matrix().toarray()
    vb = base.volumes.ravel()
    lam, U = scipy_linalg.eigh(Kb, np.diag(vb))
    Kf = fiber.stiffness_matrix().tocsc()
    vf = sparse.diags(fiber.volumes.ravel())
    blocks = [
        splinalg.factorized((a * r ** (m - 2) * Kf + (a * r**m * lk + c * r**m) * vf).tocsc())
        for lk in lam
    ]
    nb, nf = vb.size, fiber.size

    def solve(b: np.ndarray) -> np.ndarray:
        coeff = U.T @ b.reshape(nb, nf)
        out = np.empty_like(coeff)
        for k, blk in enumerate(blocks):
            out[k] = blk(coeff[k])
        return (U @ out).ravel()

    return solve


def linear_solver(model: ProductModel, a: float, c: np.ndarray, K=None):
    """Callable solving ``(a K + diag(v c)) x = b`` for the model.

    Direct sparse LU for small models, base diagonalization for large direct
    products with constant coefficients, AMG-preconditioned CG otherwise.
    """
    K = model.stiffness_matrix() if K is None else K
    v = model.volumes.ravel()
    P = (a * K + sparse.diags(v * c)).tocsc()
    if model.size <= DIRECT_LIMIT:
        return splinalg.factorized(P)
    if (model.fiber is not None and model.base and np.ptp(model.rho) == 0.0
            and np.ptp(c) == 0.0):
        return _separable_solver(model, a, float(c[0]))
    import pyamg

    ml = pyamg.smoothed_aggregation_solver(P.tocsr())
    return lambda b: ml.solve(b, tol=1e-11, accel="cg")


class _Problem:
    """Flattened operators of one model."""

    def __init__(self, model: ProductModel):
        self.model = model
        self.consts = yamabe_constants(model.dim)
        self.K = model.stiffness_matrix()
        self.v = model.volumes.ravel()
        self.s = model.scalar_curvature.ravel()
        a = self.consts.a
        self.A = (a * self.K + sparse.diags(self.v * self.s)).tocsc()
        s_pos = np.maximum(self.s, 0.0)
        shift = 0.0 if s_pos.min() > 0 else max(float(np.mean(np.abs(self.s))), 1.0)
        self.solve = linear_solver(model, a, s_pos + shift, self.K)

    def norm(self, f: np.ndarray, q: float) -> float:
        return float(np.sum(np.abs(f) ** q * self.v) ** (1.0 / q))

    def numerator(self, f: np.ndarray) -> float:
        return float(f @ (self.A @ f))


def _run_stage(prob: _Problem, f: np.ndarray, q: float, tol: float, opts: SolveOptions,
               history: list[float], budget: int):
    f = f / prob.norm(f, q)
    Q = prob.numerator(f)
    step = 1.0
    stage_hist = [Q]
    iters = 0
    status = "max-iter"
    decrement = math.inf
    while iters < budget:
        iters += 1
        Af = prob.A @ f
        Q = float(f @ Af)
        resid = Q * prob.v * np.abs(f) ** (q - 1.0) - Af
        direction = prob.solve(resid)
        step = min(opts.max_step, 2.0 * step)
        accepted = False
        while step > 1e-12:
            trial = f + step * direction
            if trial.min() <= 0.0:
                trial = np.abs(trial)
            nrm = prob.norm(trial, q)
            if nrm > 0.0 and np.isfinite(nrm):
                trial = trial / nrm
                Qt = prob.numerator(trial)
                if Qt <= Q:
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            # no descent left at working precision
            status = "converged"
            decrement = 0.0
            break
        if not np.isfinite(Qt):
            status = "diverged"
            break
        f, Q = trial, Qt
        stage_hist.append(Q)
        history.append(Q)
        if len(stage_hist) > opts.window:
            decrement = (stage_hist[-1 - opts.window] - Q) / abs(Q)
            if decrement < tol:
                status = "converged"
                break
    return f, Q, iters, status, decrement


def _solve_once(prob: _Problem, f0: np.ndarray, q_path, opts: SolveOptions) -> SolveResult:
    f = np.abs(np.asarray(f0, dtype=float).ravel()) + 0.0
    if not np.any(f > 0):
        f = np.ones_like(f)
    history: list[float] = []
    total = 0
    status = "max-iter"
    decrement = math.inf
    for k, q in enumerate(q_path):
        last = k == len(q_path) - 1
        tol = opts.tol if last else max(opts.tol, opts.stage_tol)
        f, Q, iters, status, decrement = _run_stage(
            prob, f, q, tol, opts, history, opts.max_iter - total
        )
        total += iters
        if status == "diverged":
            break
        logger.debug("stage q=%.4f: Q=%.12g after %d iterations (%s)", q, Q, iters, status)
    field_ = f.reshape(prob.model.shape)
    field_ = field_ / prob.norm(f, prob.consts.p)
    constant = yamabe_quotient(field_, prob.model)
    return SolveResult(field_, constant, total, decrement, tuple(q_path), status, history)


def gauss_bonnet_constant(model: ProductModel) -> float:
    """Yamabe constant of a closed surface: the total scalar curvature."""
    if model.dim != 2:
        raise UnsupportedDimensionError(f"Gauss-Bonnet path needs dimension 2, got {model.dim}")
    return total_scalar_curvature(model)


def minimize_yamabe(model: ProductModel, opts: SolveOptions | None = None) -> SolveResult:
    """Approximate the Yamabe constant of ``model`` and a positive minimizer.

    Runs the configured initial field, then ``opts.restarts`` random positive
    starts, and returns the lowest result (its ``restart_constants`` lists all).
    In dimension 2 it returns the Gauss-Bonnet value without iterating.
    """
    opts = opts or SolveOptions()
    if model.dim == 2:
        field_ = np.ones(model.shape) / math.sqrt(model.total_volume)
        return SolveResult(field_, gauss_bonnet_constant(model), 0, 0.0, (), "gauss-bonnet")
    if model.dim < 2:
        raise UnsupportedDimensionError(f"no Yamabe problem in dimension {model.dim}")
    prob = _Problem(model)
    p = prob.consts.p
    q_path = tuple(opts.schedule) if opts.schedule else default_schedule(p, opts.schedule_steps)
    if abs(q_path[-1] - p) > 1e-12 or any(b <= a for a, b in zip(q_path, q_path[1:])):
        raise ValueError(f"schedule must be strictly increasing and end at p={p}")

    if isinstance(opts.init, str):
        if opts.init == "constant":
            starts = [np.ones(model.shape)]
        elif opts.init == "bubble":
            starts = [bubble_field(model, opts.bubble_width)]
        elif opts.init == "both":
            starts = [np.ones(model.shape), bubble_field(model, opts.bubble_width)]
        else:
            raise ValueError(f"unknown init {opts.init!r}")
    else:
        starts = [model.check_field(opts.init)]
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.restarts):
        starts.append(np.exp(0.5 * random_smooth_field(model, rng)))

    results = [_solve_once(prob, f0, q_path, opts) for f0 in starts]
    best = min(results, key=lambda r: r.constant)
    best.restart_constants = [r.constant for r in results]
    return best


def _mass_project(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    return x - np.sum(x * v) / np.sum(v)


def first_eigenvalue(
    model: ProductModel, tol: float = 1e-10, max_iter: int = 2000, seed: int = 0
) -> tuple[float, np.ndarray]:
    """Smallest nonzero eigenvalue of ``L`` and a volume-normalized eigenfield.

    Inverse power iteration on ``K x = lam M x`` with constants projected out
    at every step.  Stops when ``||L e - lam e|| / (lam ||e||) < tol``.
    """
    K = model.stiffness_matrix().tocsc()
    v = model.volumes.ravel()
    scale = float(np.max(K.diagonal() / v)) if K.nnz else 1.0
    shift = 1e-8 * scale
    solve = splinalg.factorized((K + sparse.diags(shift * v)).tocsc())
    rng = np.random.default_rng(seed)
    x = _mass_project(rng.standard_normal(v.size), v)
    x /= math.sqrt(np.sum(x * x * v))
    lam = math.nan
    for _ in range(max_iter):
        y = _mass_project(solve(v * x), v)
        y /= math.sqrt(np.sum(y * y * v))
        Ky = K @ y
        lam = float(y @ Ky)
        r = Ky / v - lam * y
        resid = math.sqrt(np.sum(r * r * v)) / lam
        x = y
        if resid < tol:
            return lam, x.reshape(model.shape)
    raise ConvergenceError(f"inverse iteration stalled at residual {resid:.3e} (lambda={lam})")


def eigen_residual(model: ProductModel, lam: float, e: np.ndarray) -> float:
    """``||L e - lam e|| / (lam ||e||)`` in the volume-weighted norm."""
    v = model.volumes
    r = model.stiffness_apply(e) / v - lam * e
    return math.sqrt(np.sum(r * r * v) / np.sum(e * e * v)) / lam
