import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from yamlab import (
    ConvergenceError,
    SolveOptions,
    UnsupportedDimensionError,
    assemble_product,
    build_circle,
    build_full_sphere2,
    build_radial_sphere,
    eigen_residual,
    first_eigenvalue,
    minimize_yamabe,
    random_smooth_field,
    round_sphere_yamabe,
    yamabe_constants,
    yamabe_quotient,
)
from yamlab.solver import bubble_field, default_schedule, linear_solver


def _s1xs3(T, n_fiber=12, dt=0.2):
    nt = max(16, int(math.ceil(T / dt)))
    return assemble_product([build_circle(T, nt)], build_radial_sphere(3, 1.0, n_fiber))


def test_default_schedule_ends_at_critical_exponent():
    assert default_schedule(6.0) == (3.0, 4.0, 5.0, 6.0)
    assert default_schedule(4.0, 1) == (4.0,)


def test_unit_three_sphere():
    model = assemble_product((), build_radial_sphere(3, 1.0, 200))
    res = minimize_yamabe(model, SolveOptions(restarts=2, seed=1))
    assert res.converged
    assert res.constant == pytest.approx(6 * (2 * math.pi**2) ** (2 / 3), rel=1e-2)
    assert np.ptp(res.minimizer) / np.mean(res.minimizer) < 1e-2
    assert len(res.restart_constants) == 3


def test_two_sphere_gauss_bonnet_path():
    model = assemble_product((), build_full_sphere2(1.0, 16, 16))
    res = minimize_yamabe(model)
    assert res.status == "gauss-bonnet"
    assert res.iterations == 0
    assert res.constant == pytest.approx(8 * math.pi, rel=1e-12)


def test_dimension_one_unsupported():
    with pytest.raises(UnsupportedDimensionError):
        minimize_yamabe(assemble_product([build_circle(1.0, 8)]))


def test_bad_schedule_rejected():
    model = assemble_product((), build_radial_sphere(3, 1.0, 20))
    with pytest.raises(ValueError):
        minimize_yamabe(model, SolveOptions(schedule=(3.0, 5.0)))
    with pytest.raises(ValueError):
        minimize_yamabe(model, SolveOptions(schedule=(4.0, 3.0, 6.0)))
    with pytest.raises(ValueError):
        minimize_yamabe(model, SolveOptions(init="nowhere"))


def test_small_circle_product_is_constant():
    T = 0.5
    model = _s1xs3(T, dt=0.05)
    ref = 6 * (2 * math.pi**2 * T) ** 0.5
    res = minimize_yamabe(model, SolveOptions(restarts=20, seed=3, init="both"))
    assert res.constant == pytest.approx(ref, rel=1e-2)
    # no restart finds anything lower than the constant candidate
    assert min(res.restart_constants) >= ref * (1 - 1e-9)


def test_quotient_non_increasing_per_step():
    model = _s1xs3(8.0)
    p = yamabe_constants(4).p
    f0 = bubble_field(model)
    res = minimize_yamabe(model, SolveOptions(schedule=(p,), init=f0))
    h = np.array(res.history)
    assert h.size > 2
    assert np.all(np.diff(h) <= 1e-12 * np.abs(h[1:]))


def test_long_product_breaks_symmetry():
    # past the stability threshold the constant is a saddle and the bubble start wins
    model = _s1xs3(10.0, dt=0.1)
    res = minimize_yamabe(model, SolveOptions(init="both"))
    const = yamabe_quotient(np.ones(model.shape), model)
    assert res.constant < const * (1 - 1e-3)
    assert res.constant <= round_sphere_yamabe(4) * 1.01
    assert res.minimizer.min() > 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_solved_constant_below_trial_quotients(seed):
    model = _s1xs3(3.0)
    res = minimize_yamabe(model, SolveOptions(init="both"))
    f = np.exp(0.5 * random_smooth_field(model, np.random.default_rng(seed)))
    assert res.constant <= yamabe_quotient(f, model) + 1e-8 * res.constant
    assert res.minimizer.min() > 0


@pytest.mark.parametrize("T", [1.0, 4.0, 20.0])
def test_aubin_bound(T):
    res = minimize_yamabe(_s1xs3(T), SolveOptions(init="both"))
    assert res.constant <= 1.01 * round_sphere_yamabe(4)


def test_max_iter_reported():
    model = _s1xs3(10.0)
    res = minimize_yamabe(model, SolveOptions(init="bubble", max_iter=3))
    assert res.status == "max-iter"
    assert not res.converged
    assert res.iterations == 3
    assert math.isfinite(res.constant)


def test_bubble_field_shape():
    model = _s1xs3(6.0)
    b = bubble_field(model)
    assert b.min() > 0
    assert np.unravel_index(np.argmax(b), b.shape)[0] == 0


def test_separable_and_direct_solvers_agree():
    b = build_circle(5.0, 20)
    model = assemble_product([b], build_radial_sphere(3, 1.0, 12))
    K = model.stiffness_matrix()
    v = model.volumes.ravel()
    rhs = np.random.default_rng(0).standard_normal(model.size)
    c = np.full(model.size, 6.0)
    x = linear_solver(model, 6.0, c, K)(rhs)
    assert np.allclose(6.0 * (K @ x) + c * v * x, rhs, atol=1e-10 * np.abs(rhs).max())
    # non-constant coefficient forces the general path
    rho = 1.5 + 0.3 * np.sin(2 * math.pi * b.nodes / 5.0)
    warped = assemble_product([b], build_radial_sphere(3, 1.0, 12), rho)
    Kw = warped.stiffness_matrix()
    vw = warped.volumes.ravel()
    cw = np.maximum(warped.scalar_curvature.ravel(), 0.0)
    xw = linear_solver(warped, 6.0, cw, Kw)(rhs)
    assert np.allclose(6.0 * (Kw @ xw) + cw * vw * xw, rhs, atol=1e-8 * np.abs(rhs).max())


# -- first eigenvalue -------------------------------------------------------


@pytest.mark.parametrize("m", [2, 3, 4])
def test_first_eigenvalue_sphere(m):
    model = assemble_product((), build_radial_sphere(m, 1.0, 200))
    lam, e = first_eigenvalue(model)
    assert lam == pytest.approx(m, rel=1e-2)
    assert abs(np.sum(e * model.volumes)) < 1e-10
    assert eigen_residual(model, lam, e) < 1e-8


def test_first_eigenvalue_converges_under_refinement():
    lams = [first_eigenvalue(assemble_product((), build_radial_sphere(3, 1.0, n)))[0] for n in (50, 100, 200)]
    errs = [abs(lam - 3.0) for lam in lams]
    assert errs[2] < errs[1] < errs[0]
    assert math.log2(errs[1] / errs[2]) > 1.8


def test_first_eigenvalue_circle():
    lam, _ = first_eigenvalue(assemble_product([build_circle(2 * math.pi, 128)]))
    assert lam == pytest.approx(1.0, rel=1e-2)


def test_first_eigenvalue_product_min_rule():
    model = assemble_product([build_circle(2 * math.pi, 64)], build_radial_sphere(2, 1.0, 40))
    lam, e = first_eigenvalue(model)
    assert lam == pytest.approx(1.0, rel=1e-2)
    assert eigen_residual(model, lam, e) < 1e-8


def test_first_eigenvalue_iteration_budget():
    model = assemble_product((), build_radial_sphere(3, 1.0, 50))
    with pytest.raises(ConvergenceError):
        first_eigenvalue(model, tol=1e-30, max_iter=3)


def test_result_normalization_invariants():
    model = _s1xs3(8.0)
    res = minimize_yamabe(model, SolveOptions(init="both"))
    p = yamabe_constants(4).p
    norm = float(np.sum(res.minimizer**p * model.volumes) ** (1 / p))
    assert norm == pytest.approx(1.0, abs=1e-10)
    assert res.constant == pytest.approx(yamabe_quotient(res.minimizer, model), rel=1e-12)
    assert res.q_path[-1] == p and list(res.q_path) == sorted(res.q_path)
