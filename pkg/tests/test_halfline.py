import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ostrovsky import halfline as hl


def _sech_tanh(y):
    return np.tanh(y) / np.cosh(y)


F = hl.HalflineFunction.from_callable(_sech_tanh)


def test_mu_lambda_maps():
    assert hl.mu_from_lambda(np.pi / 6, 1) == pytest.approx(1.0)
    assert hl.mu_from_lambda(np.pi / 4, 2) == pytest.approx(1.0)
    for p in (1, 2):
        assert hl.lambda_from_mu(hl.mu_from_lambda(0.3 + 0.2j, p), p) == pytest.approx(0.3 + 0.2j)
    with pytest.raises(ValueError):
        hl.mu_from_lambda(1.0, 3)


@pytest.mark.parametrize("mu,region", [(0.5, "residual"), (-0.99 + 3j, "residual"), (1.0, "continuous"),
                                       (-1 + 2j, "continuous"), (1.5, "resolvent"), (-3 - 1j, "resolvent")])
def test_classify(mu, region):
    assert hl.classify_mu(mu).region == region


def test_truncation_radius_check():
    with pytest.raises(ValueError):
        hl.HalflineFunction.from_callable(np.tanh, Y=10.0)


def test_kernels():
    y = hl.line_grid()
    assert np.allclose(hl.kernel_solution(0.3, y).values, np.cosh(y) * np.exp(0.3 * y))
    assert not hl.kernel_solution(0.3, y).decay_flag
    assert hl.adjoint_kernel(0.3, y).decay_flag
    assert not hl.adjoint_kernel(1.0, y).decay_flag
    assert not hl.adjoint_kernel(-1.0 + 0.5j, y).decay_flag


def test_resolvent_against_quadrature():
    mu = 2.0 + 0.5j
    w = hl.resolvent_solve(mu, F)
    assert w.residual <= 1e-8 and w.decay_flag
    for y0 in (-1.0, 0.0, 0.7, 3.0):
        ref = -mp.quad(lambda s: mp.exp(mu * (y0 - s)) * mp.cosh(y0) / mp.cosh(s) * mp.tanh(s) / mp.cosh(s),
                       [y0, y0 + 5, mp.inf])
        j = int(np.argmin(np.abs(w.grid - y0)))
        assert w.values[j] == pytest.approx(complex(ref), abs=1e-9)


def test_resolvent_reflection():
    g = hl.HalflineFunction.from_callable(lambda y: _sech_tanh(y) * (1 + 0.3 * np.tanh(y) ** 2))
    a = hl.resolvent_solve(-2.5, g)
    b = hl.resolvent_solve(2.5, hl.HalflineFunction(g.Y, g.grid, g.values[::-1]))
    assert np.allclose(a.values, -b.values[::-1], atol=1e-14)


def test_resolvent_rejects():
    with pytest.raises(hl.OutOfRegionError):
        hl.resolvent_solve(0.5, F)
    with pytest.raises(hl.OutOfRegionError):
        hl.resolvent_solve(-1.0, F)
    with pytest.raises(ValueError):
        hl.resolvent_solve(2.0, hl.HalflineFunction.from_callable(lambda y: 1 / np.cosh(y)))


def test_bound_constant():
    assert hl.bound_constant(3.0) == pytest.approx(0.25 + 0.5 + 1.0)
    assert hl.bound_constant(-3.0 + 7j) == hl.bound_constant(3.0)
    with pytest.raises(hl.OutOfRegionError):
        hl.bound_constant(1.0)


def _constrained(coeffs):
    """Odd-even mix of localized functions projected off sech."""
    def f(y):
        out = np.zeros_like(y)
        for k, (a, b) in enumerate(coeffs):
            out += a * np.tanh(y) ** k / np.cosh(y) + b * np.exp(-(y - k) ** 2)
        return out
    raw = hl.HalflineFunction.from_callable(f)
    sech = 1 / np.cosh(raw.grid)
    return hl.HalflineFunction(raw.Y, raw.grid, raw.values - raw.dot(sech) / 2 * sech)


@given(coeffs=st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=4),
       mu=st.sampled_from([1.5, 2.0, 3.0, -2.0, 2.0 + 1j]))
@settings(max_examples=15, deadline=None)
def test_resolvent_norm_bound(coeffs, mu):
    f = _constrained(coeffs)
    if f.norm() < 1e-6:
        return
    w = hl.resolvent_solve(mu, f)
    assert w.norm() <= hl.bound_constant(mu) * f.norm()


def test_primary_constraint_value():
    primary, secondary = hl.residual_constraints(0.5, F)
    assert secondary is None
    assert primary.real == pytest.approx(-0.5553603672697958, abs=1e-10)
    assert primary.real == pytest.approx(oracles.constraint_closed_form(0.5), abs=1e-10)
    ref = oracles.constraint_quadrature(0.5, lambda y: mp.tanh(y) / mp.cosh(y))
    assert primary == pytest.approx(ref, abs=1e-10)


def test_secondary_constraint_at_zero():
    primary, secondary = hl.residual_constraints(0.0, F)
    assert abs(primary) < 1e-12
    assert secondary.real == pytest.approx(-1.0, abs=1e-8)
    with pytest.raises(hl.OutOfRegionError):
        hl.residual_constraints(1.0, F)


def test_continuous_divergence():
    grow = hl.continuous_divergence(1.0)
    assert np.all(np.diff(grow) > 4.0)
    grow_m = hl.continuous_divergence(-1.0)
    assert np.all(np.diff(grow_m) > 4.0)
    conv = hl.continuous_divergence(0.5)
    # tails of order e^{-R/2}: settled from R = 100 on
    assert np.abs(np.diff(conv[1:])).max() < 1e-10


def test_coordinate_map_p1():
    xi = np.linspace(-6, 6, 101)
    z, dz = hl.coordinate_map("forward", 1, xi)
    assert np.allclose(dz, (np.pi ** 2 - z ** 2) / 6)
    h = 1e-5
    fd = (hl.coordinate_map("forward", 1, xi + h)[0] - hl.coordinate_map("forward", 1, xi - h)[0]) / (2 * h)
    assert np.allclose(fd, dz, atol=1e-8)
    assert np.abs(hl.coordinate_map("inverse", 1, z) - xi).max() < 1e-12
    with pytest.raises(ValueError):
        hl.coordinate_map("inverse", 1, [np.pi])
    with pytest.raises(ValueError):
        hl.coordinate_map("sideways", 1, [0.0])


def test_coordinate_map_p2():
    xi = np.linspace(-6, 6, 101)
    (zp, zm), (dp, dm) = hl.coordinate_map("forward", 2, xi)
    assert np.all((zp > 0) & (zp < np.pi) & (zm < 0) & (zm > -np.pi))
    assert np.allclose(dp, zp * (np.pi - zp) / 2) and np.allclose(dm, -zm * (np.pi + zm) / 2)
    assert np.abs(hl.coordinate_map("inverse", 2, zp) - xi).max() < 1e-12
    assert np.abs(hl.coordinate_map("inverse", 2, zm) - xi).max() < 1e-12
    with pytest.raises(ValueError):
        hl.coordinate_map("inverse", 2, [0.0])


def test_transform_field_norms():
    v = lambda z: np.sin(2 * z) + 0.3 * np.cos(z)
    z = np.linspace(-np.pi, np.pi, 200001)
    lhs = np.trapezoid(v(z) ** 2, z)
    w = hl.transform_field(v, 1)
    assert lhs == pytest.approx(np.pi * w.norm() ** 2, rel=1e-8)
    wp, wm = hl.transform_field(v, 2)
    assert lhs == pytest.approx(np.pi / 2 * (wp.norm() ** 2 + wm.norm() ** 2), rel=1e-8)
    ws = hl.transform_field((z[::100], v(z[::100])), 1)
    assert np.abs(ws.values - w.values).max() < 1e-8


def test_peaked_derivative_image_norm():
    # U_*' = z/3 maps to (pi/3) tanh(y) sech(y); its square integrates to 2 pi^2 / 27
    w = hl.transform_field(lambda z: z / 3, 1)
    assert w.norm() ** 2 == pytest.approx(2 * np.pi ** 2 / 27, rel=1e-10)
