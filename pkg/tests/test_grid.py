import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as quad

from yamlab import (
    DomainError,
    ResolutionError,
    assemble_product,
    build_circle,
    build_factor,
    build_full_sphere2,
    build_interval,
    build_radial_sphere,
    dirichlet_energy,
    full_sphere2,
    laplacian_apply,
    point,
    random_smooth_field,
    round_sphere,
    scalar_curvature_warped,
    sphere_volume,
)

SETTINGS = settings(max_examples=40, deadline=None)


# -- catalog ----------------------------------------------------------------


def test_sphere_volume_low_dimensions():
    assert sphere_volume(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert sphere_volume(3) == pytest.approx(2 * math.pi**2, rel=1e-15)


@given(st.integers(3, 15))
def test_sphere_volume_recursion(m):
    assert sphere_volume(m) == pytest.approx(2 * math.pi * sphere_volume(m - 2) / (m - 1), rel=1e-13)


@pytest.mark.parametrize("m", [0, -1, 2.5])
def test_sphere_volume_rejects_bad_dimension(m):
    with pytest.raises(DomainError):
        sphere_volume(m)


def test_round_sphere_entry():
    e = round_sphere(3, 0.5)
    assert e.scalar_curvature == pytest.approx(6 / 0.25)
    assert e.ricci_lower == pytest.approx(2 / 0.25)
    assert e.volume == pytest.approx(0.125 * 2 * math.pi**2)


@given(st.floats(0.1, 10.0))
def test_entry_scaling(lam):
    e = round_sphere(4, 1.3)
    s = e.scaled(lam)
    assert s.volume == pytest.approx(e.volume * lam**2, rel=1e-12)
    assert s.scalar_curvature == pytest.approx(e.scalar_curvature / lam, rel=1e-12)
    assert s.size == pytest.approx(e.size * math.sqrt(lam), rel=1e-12)


def test_nonpositive_sizes_rejected():
    with pytest.raises(DomainError):
        round_sphere(2, 0.0)
    with pytest.raises(DomainError):
        build_circle(-1.0, 8)


# -- factor grids -----------------------------------------------------------


def test_too_few_cells():
    with pytest.raises(ResolutionError):
        build_circle(1.0, 2)
    with pytest.raises(ResolutionError):
        build_radial_sphere(3, 1.0, 7)
    with pytest.raises(ResolutionError):
        build_full_sphere2(1.0, 8, 4)
    with pytest.raises(DomainError):
        build_radial_sphere(1, 1.0, 16)


@SETTINGS
@given(st.integers(2, 7), st.floats(0.2, 3.0), st.integers(8, 300))
def test_radial_sphere_volume_exact(m, r, n):
    g = build_radial_sphere(m, r, n)
    assert g.total_volume == pytest.approx(r**m * sphere_volume(m), rel=1e-13)
    assert np.all(g.volumes > 0)


@pytest.mark.parametrize("n", [8, 33, 200])
def test_radial_cell_volume_against_quadrature(n):
    # each zone of S^3: V_2 * int sin^2 over the cell
    g = build_radial_sphere(3, 1.0, n)
    k = n // 3
    ref = 4 * math.pi * quad.quad(lambda t: math.sin(t) ** 2, g.edges[k], g.edges[k + 1])[0]
    assert g.volumes[k] == pytest.approx(ref, rel=1e-13)


def test_full_sphere_volume():
    g = build_full_sphere2(2.0, 16, 24)
    assert g.total_volume == pytest.approx(16 * math.pi, rel=1e-14)


def test_build_factor_dispatch():
    assert build_factor(round_sphere(3, 1.0), 20).n == 20
    assert build_factor(full_sphere2(1.0), 10).shape == (10, 10)
    assert build_factor(point(), 10).shape == ()


# -- product operators ------------------------------------------------------


def _models():
    b = build_circle(2 * math.pi, 12)
    rho = 1.5 + 0.3 * np.sin(b.nodes)
    return [
        assemble_product([b]),
        assemble_product((), build_radial_sphere(3, 1.0, 20)),
        assemble_product([b], build_radial_sphere(2, 0.8, 16)),
        assemble_product([b], build_radial_sphere(3, 0.9, 16), rho),
        assemble_product([b], build_full_sphere2(1.0, 10, 12)),
        assemble_product([build_interval(2.0, 9), b], build_radial_sphere(3, 1.0, 10)),
    ]


@pytest.mark.parametrize("model", _models(), ids=lambda m: str(m.shape))
def test_laplacian_pairing_is_energy(model):
    rng = np.random.default_rng(1)
    for _ in range(5):
        f = random_smooth_field(model, rng)
        pair = float(np.sum(f * laplacian_apply(f, model) * model.volumes))
        assert pair == pytest.approx(dirichlet_energy(f, model), rel=1e-12)


@pytest.mark.parametrize("model", _models(), ids=lambda m: str(m.shape))
def test_stiffness_matrix_matches_apply(model):
    K = model.stiffness_matrix()
    assert abs(K - K.T).max() < 1e-14 * abs(K).max()
    assert np.allclose(K @ np.ones(model.size), 0.0, atol=1e-12 * abs(K).max())
    f = np.random.default_rng(2).standard_normal(model.shape)
    assert np.allclose(K @ f.ravel(), model.stiffness_apply(f).ravel(), rtol=1e-12, atol=1e-12)


def test_energy_nonnegative_and_zero_on_constants():
    for model in _models():
        assert dirichlet_energy(np.full(model.shape, 3.0), model) == pytest.approx(0.0, abs=1e-20)
        f = np.random.default_rng(3).standard_normal(model.shape)
        assert dirichlet_energy(f, model) > 0


@pytest.mark.parametrize("m", [2, 3, 5])
def test_laplacian_of_first_harmonic(m):
    # L cos(theta) = m cos(theta) with the nonnegative sign; error is second order
    errs = []
    for n in (100, 200):
        model = assemble_product((), build_radial_sphere(m, 1.0, n))
        c = np.cos(model.fiber.nodes)
        errs.append(np.max(np.abs(laplacian_apply(c, model) - m * c)))
    assert errs[1] < 1e-3
    assert math.log2(errs[0] / errs[1]) > 1.8


def test_full_sphere_harmonics():
    model = assemble_product((), build_full_sphere2(1.0, 96, 96))
    th, ph = model.fiber.theta[:, None], model.fiber.phi[None, :]
    for f in (np.cos(th) + 0 * ph, np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph)):
        interior = (th > 0.3) & (th < math.pi - 0.3)
        err = np.abs(laplacian_apply(f, model) - 2 * f)
        assert err[np.broadcast_to(interior, err.shape)].max() < 2e-3


def test_circle_energy_quadrature():
    T = 3.0
    model = assemble_product([build_circle(T, 400)])
    x = model.base[0].nodes
    f = np.sin(2 * math.pi * x / T)
    ref = quad.quad(lambda t: (2 * math.pi / T * math.cos(2 * math.pi * t / T)) ** 2, 0, T)[0]
    assert dirichlet_energy(f, model) == pytest.approx(ref, rel=1e-4)


def test_sphere_energy_quadrature():
    model = assemble_product((), build_radial_sphere(2, 1.0, 400))
    f = np.cos(model.fiber.nodes)
    ref = quad.quad(lambda t: 2 * math.pi * math.sin(t) ** 3, 0, math.pi)[0]
    assert dirichlet_energy(f, model) == pytest.approx(ref, rel=1e-4)


def test_product_volumes_include_warp():
    b = build_circle(2 * math.pi, 16)
    fiber = build_radial_sphere(3, 0.9, 12)
    rho = 1.5 + 0.3 * np.sin(b.nodes)
    model = assemble_product([b], fiber, rho)
    ref = np.sum(b.volumes * rho**3) * fiber.total_volume
    assert model.total_volume == pytest.approx(ref, rel=1e-14)
    assert model.dim == 4 and model.fiber_dim == 3 and model.base_dim == 1


def test_rho_validation():
    b = build_circle(1.0, 8)
    with pytest.raises(DomainError):
        assemble_product([b], build_radial_sphere(2, 1.0, 8), np.zeros(8))
    with pytest.raises(DomainError):
        assemble_product([b], build_radial_sphere(2, 1.0, 8), np.ones(5))


# -- warped curvature -------------------------------------------------------


@given(st.integers(2, 5), st.floats(0.3, 4.0))
def test_constant_warp_curvature(m, c):
    b = build_circle(2.0, 10)
    s = scalar_curvature_warped([b], m * (m - 1), m, c)
    assert np.allclose(s, m * (m - 1) / c**2, rtol=1e-12)


def test_product_curvature_sums():
    model = assemble_product([build_radial_sphere(2, 0.5, 10)], build_radial_sphere(3, 2.0, 10))
    assert np.allclose(model.scalar_curvature, 2 / 0.25 + 6 / 4.0)


@pytest.mark.parametrize("m", [2, 3])
def test_sin_warp_gives_round_sphere(m):
    base = build_interval(math.pi, 800)
    rho = np.sin(base.nodes)
    s = scalar_curvature_warped([base], m * (m - 1), m, rho)
    interior = rho > 0.5
    assert np.max(np.abs(s[interior] - m * (m + 1))) < 1e-4


def test_sin_warp_interior_second_order():
    errs = []
    for n in (100, 200, 400):
        base = build_interval(math.pi, n)
        rho = np.sin(base.nodes)
        s = scalar_curvature_warped([base], 6.0, 3, rho)
        errs.append(np.max(np.abs(s[rho > 0.5] - 12.0)))
    assert math.log2(errs[1] / errs[2]) > 1.8


def test_circle_examples():
    g = build_circle(1.0, 4)
    assert np.allclose(g.volumes, 0.25)
    model = assemble_product([build_circle(10.0, 200)])
    f = np.sin(2 * math.pi * model.base[0].nodes / 10.0)
    assert dirichlet_energy(f, model) == pytest.approx((2 * math.pi / 10) ** 2 * 5, rel=1e-2)


def test_radial_sphere_catalog_data():
    g = build_radial_sphere(3, 0.9, 40)
    assert g.total_volume == pytest.approx(0.9**3 * 2 * math.pi**2, rel=1e-13)
    assert g.entry.ricci_lower == pytest.approx(2 / 0.81, rel=1e-15)


def test_full_sphere_energy_examples():
    model = assemble_product((), build_full_sphere2(1.0, 64, 32))
    assert dirichlet_energy(np.ones(model.shape), model) == 0.0
    f = np.broadcast_to(np.cos(model.fiber.theta)[:, None], model.shape)
    assert dirichlet_energy(f, model) == pytest.approx(8 * math.pi / 3, rel=1e-2)
    assert model.gauss_bonnet_only


def test_point_base_warp_curvature():
    assert np.allclose(scalar_curvature_warped([], 6.0, 3, 1.0), 6.0, rtol=1e-15)


def test_assemble_examples():
    a = assemble_product((), build_radial_sphere(3, 1.0, 30))
    assert a.total_volume == pytest.approx(2 * math.pi**2, rel=1e-13)
    assert np.all(a.scalar_curvature == 6.0)
    b = assemble_product([build_circle(1.0, 10)], build_radial_sphere(3, 1.0, 30))
    assert b.total_volume == pytest.approx(2 * math.pi**2, rel=1e-13)
    assert np.allclose(b.scalar_curvature, 6.0, rtol=1e-15)
    c0 = build_circle(2 * math.pi, 200)
    c = assemble_product([c0], build_radial_sphere(2, 1.0, 20), 2 + np.sin(c0.nodes))
    ref = quad.quad(lambda t: (2 + math.sin(t)) ** 2, 0, 2 * math.pi)[0] * 4 * math.pi
    assert c.total_volume == pytest.approx(ref, rel=1e-2)
