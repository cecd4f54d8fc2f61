import warnings

import numpy as np
import pytest

import oracles
from ostrovsky import evolution as ev
from ostrovsky.spectra import eigenvalues
from ostrovsky.spectral_ops import FourierVector, assemble_operator
from ostrovsky.waves import uniform_grid


def test_propagator_equals_rk4_step():
    rng = np.random.default_rng(1)
    E = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    y = rng.standard_normal(6) + 0j
    step = ev.rk4_step(lambda t, v: E @ v, 0.0, y, 0.01)
    assert np.allclose(ev.rk4_propagator(E, 0.01) @ y, step, atol=1e-14)


def test_linear_rate_diagonal():
    E = np.diag([0.1 + 1j, -0.2, 0.05j])
    tr = ev.evolve_linear(E, np.ones(3) + 0j, T=120, dt=0.01)
    assert tr.fitted_rate == pytest.approx(0.1, abs=1e-6)  # other modes are e^-6 smaller by t = 60
    assert tr.diagnostics["fit_r2"] > 0.999


def test_linear_cfl():
    A = assemble_operator("peaked:1", 32)
    with pytest.raises(ev.CFLError):
        ev.evolve_linear(A, np.ones(64) + 0j, T=1, dt=0.5)
    with pytest.raises(ValueError):
        ev.evolve_linear(A, np.ones(64) + 0j, T=0)


def test_linear_eigenvector_rate():
    A = assemble_operator("peaked:1", 64)
    s = eigenvalues(A)
    lam, v = s.nearest(s.eigenvalues[np.argmax(s.eigenvalues.real)])
    tr = ev.evolve_linear(A, FourierVector(64, v), T=40)
    assert tr.fitted_rate == pytest.approx(lam.real, abs=1e-4)


def test_linear_overflow_flag():
    tr = ev.evolve_linear(np.diag([50.0 + 0j]), np.ones(1) + 0j, T=20, dt=0.01, overflow=1e100)
    assert tr.overflow and tr.times[-1] < 20


def test_fit_quality_warning():
    t = np.linspace(0, 10, 50)
    tr = ev.EvolutionTrace(t, np.exp(0.1 * t + np.sin(5 * t)))
    with pytest.warns(ev.FitQualityWarning):
        ev.growth_rate_fit(tr, 1.0)
    with pytest.raises(ValueError):
        ev.growth_rate_fit(tr, 0.0)


def test_burgers_limit():
    # u = a v, t = s/a turns the equation into v_s + v v_x = a^-2 d^-1 v
    a, M = 1000.0, 2048
    x = uniform_grid(M)
    tr = ev.evolve_nonlinear(a * np.sin(x), 1, 0.5 / a, record_dt=0.05 / a)
    assert np.abs(tr.snapshots[-1] / a - oracles.burgers_sine(x, 0.5)).max() < 2e-3
    tr = ev.evolve_nonlinear(a * np.sin(x), 1, 1.5 / a, record_dt=2e-3 / a)
    # max|v_x| = 1/(1 - s) reaches 50 times its initial value at s = 0.98
    assert tr.breaking_time * a == pytest.approx(0.98, abs=5e-3)
    assert ev.breaking_detect(tr) == pytest.approx(tr.breaking_time, abs=3e-3 / a)


def test_small_data_conserves():
    u0 = ev.make_initial_data("small_cosine", {"M": 256, "amplitude": 0.05})
    tr = ev.evolve_nonlinear(u0, 1, T=3.0)
    assert tr.breaking_time is None
    assert tr.diagnostics["l2_drift"] < 1e-8
    assert tr.diagnostics["max_mean"] < 1e-14


def test_cubic_small_data():
    u0 = ev.make_initial_data("small_cosine", {"M": 256, "amplitude": 0.1})
    tr = ev.evolve_nonlinear(u0, 2, T=2.0)
    assert tr.breaking_time is None and tr.diagnostics["l2_drift"] < 1e-8


def test_nonlinear_input_checks():
    with pytest.raises(ValueError):
        ev.evolve_nonlinear(np.zeros(300), 1, 1.0)
    with pytest.raises(ValueError):
        ev.evolve_nonlinear(np.zeros(256), 3, 1.0)
    with pytest.raises(ev.CFLError):
        ev.evolve_nonlinear(np.sin(uniform_grid(256)), 1, 1.0, dt=0.01)
    with pytest.raises(ValueError):
        ev.breaking_detect(ev.EvolutionTrace(np.zeros(1), np.zeros(1)))


def test_initial_data():
    u = ev.make_initial_data("peaked_perturbed", {"p": 1, "M": 256, "amplitude": 0.0})
    assert u.max() == pytest.approx(np.pi ** 2 / 9)
    v = ev.make_initial_data("random_zero_mean", {"N": 16}, seed=5)
    assert np.array_equal(v.coeffs, ev.make_initial_data("random_zero_mean", {"N": 16}, seed=5).coeffs)
    with pytest.raises(ValueError):
        ev.make_initial_data("random_zero_mean", {"N": 16})
    with pytest.raises(ValueError):
        ev.make_initial_data("nope")


def test_random_linear_growth_is_small():
    # finite truncations grow no faster than their spectral abscissa (about 0.5/N)
    A = assemble_operator("peaked:1", 64)
    v0 = ev.make_initial_data("random_zero_mean", {"N": 64}, seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ev.FitQualityWarning)
        tr = ev.evolve_linear(A, v0, T=20)
    assert abs(tr.fitted_rate) < eigenvalues(A).abscissa + 1e-3


@pytest.mark.parametrize("p,t_break", [(1, 7.2224009), (2, 4.1638249)])
def test_peaked_breaking_time_regression(p, t_break):
    # frozen from the validated M=1024 runs of U_* + 0.01 sin z
    u0 = ev.make_initial_data("peaked_perturbed", {"p": p, "M": 1024, "amplitude": 0.01})
    tr = ev.evolve_nonlinear(u0, p, 20.0, keep_snapshots=False)
    assert tr.breaking_time == pytest.approx(t_break, abs=1e-6)
    assert tr.diagnostics["l2_drift"] <= 1e-6
