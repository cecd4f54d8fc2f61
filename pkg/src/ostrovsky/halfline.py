"""The differential part of the linearization on the line.

Under z = pi tanh(y) (p=1) the operator d/dz[(c_* - U_*) .] becomes
(pi/6)(d/dy - tanh y) acting on w = v / cosh y, orthogonal to sech.  This
module holds the coordinate maps, closed-form kernels, the resolvent
quadrature and the constraint functionals of that line operator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

Y_DEFAULT = 35.0
H_DEFAULT = 1e-3
SLOPE_TOL = 1e-6

_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)


class OutOfRegionError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


def line_grid(Y: float = Y_DEFAULT, h: float = H_DEFAULT) -> np.ndarray:
    n = int(round(2 * Y / h))
    return np.linspace(-Y, Y, n + 1)


def _end_decays(y, v, side, tol=SLOPE_TOL):
    """True if |v| is negligible at the end or shrinks exponentially towards it."""
    a = np.abs(v)
    vmax = a.max()
    if vmax == 0:
        return True
    end = a[-1] if side > 0 else a[0]
    if end <= 1e-10 * vmax:
        return True
    # log-slope over the last unit of y
    m = y >= y[-1] - 1.0 if side > 0 else y <= y[0] + 1.0
    if np.any(a[m] == 0):
        return False
    slope = np.polyfit(y[m], np.log(a[m]), 1)[0]
    return bool(side * slope < -tol)


@dataclass
class HalflineFunction:
    Y: float
    grid: np.ndarray
    values: np.ndarray
    decay_flag: bool = False

    def __post_init__(self):
        if np.cosh(self.Y) ** -1 >= 1e-14:
            raise ValueError("truncation radius too small: need sech(Y) < 1e-14")
        self.values = np.asarray(self.values)
        self.decay_flag = _end_decays(self.grid, self.values, -1) and _end_decays(self.grid, self.values, 1)

    @classmethod
    def from_callable(cls, f, Y: float = Y_DEFAULT, h: float = H_DEFAULT):
        y = line_grid(Y, h)
        return cls(Y, y, f(y))

    def dot(self, g) -> complex:
        """<self, g> with g a callable or array on the same grid."""
        gv = g(self.grid) if callable(g) else g
        return complex(integrate.simpson(self.values * gv, x=self.grid))

    def norm(self) -> float:
        return float(np.sqrt(integrate.simpson(np.abs(self.values) ** 2, x=self.grid)))


# --- spectral parameter ------------------------------------------------------

def mu_from_lambda(lam, p: int):
    if p == 1:
        return 6 * lam / np.pi
    if p == 2:
        return 4 * lam / np.pi
    raise ValueError(f"power must be 1 or 2, got {p}")


def lambda_from_mu(mu, p: int):
    return mu / mu_from_lambda(1.0, p)


@dataclass(frozen=True)
class MuClassification:
    mu: complex
    region: str


def classify_mu(mu) -> MuClassification:
    r = abs(complex(mu).real)
    if r > 1:
        region = "resolvent"
    elif r < 1:
        region = "residual"
    else:
        region = "continuous"
    return MuClassification(complex(mu), region)


# --- closed-form kernels ------------------------------------------------------

def kernel_solution(mu, grid=None) -> HalflineFunction:
    """cosh(y) e^{mu y}: the only solutions of (d/dy - tanh y - mu) w = 0."""
    y = line_grid() if grid is None else np.asarray(grid)
    return HalflineFunction(float(y[-1]), y, np.cosh(y) * np.exp(mu * y))


def adjoint_kernel(mu, grid=None) -> HalflineFunction:
    """e^{-mu y} sech(y): kernel of the formal adjoint -d/dy - tanh y - mu."""
    y = line_grid() if grid is None else np.asarray(grid)
    return HalflineFunction(float(y[-1]), y, np.exp(-mu * y) / np.cosh(y))


def b0_apply(w: HalflineFunction) -> np.ndarray:
    """w' - tanh(y) w with sixth-order central differences (ends left zero)."""
    return _deriv6(w.values, w.grid[1] - w.grid[0]) - np.tanh(w.grid) * w.values


def _deriv6(v, h):
    c = np.array([-1, 9, -45, 0, 45, -9, 1]) / (60 * h)
    d = np.zeros_like(v)
    d[3:-3] = sum(c[k] * v[k:len(v) - 6 + k] for k in range(7))
    return d


# --- resolvent ---------------------------------------------------------------

def _backward_sweep(mu, y, fs):
    """w(y) = -int_y^inf e^{mu(y-s)} cosh(y)/cosh(s) f(s) ds with f = spline fs.

    Cell-wise recurrence w_j = e^{-mu h} cosh(y_j)/cosh(y_{j+1}) w_{j+1} - I_j,
    stable for Re mu > -1 since the propagation factor never exceeds one in
    modulus there.  Cell integrals use 6-point Gauss-Legendre on the spline.
    """
    h = y[1] - y[0]
    left = y[:-1]
    s = left[:, None] + 0.5 * h * (_GL_X[None, :] + 1)
    vals = np.exp(mu * (left[:, None] - s)) * np.cosh(left)[:, None] / np.cosh(s) * fs(s)
    cell = 0.5 * h * vals @ _GL_W
    prop = np.exp(-mu * h) * np.cosh(left) / np.cosh(y[1:])
    w = np.zeros(y.size, dtype=complex)
    for j in range(y.size - 2, -1, -1):
        w[j] = prop[j] * w[j + 1] - cell[j]
    return w


def resolvent_solve(mu, f: HalflineFunction, constraint_tol: float = 1e-10,
                    residual_tol: float = 1e-8) -> HalflineFunction:
    """Unique decaying solution of w' - tanh(y) w - mu w = f for |Re mu| > 1.

    For Re mu < -1 the problem is reflected: w(y; mu, f) = -w(-y; -mu, f(-.)).
    """
    mu = complex(mu)
    if abs(mu.real) <= 1:
        raise OutOfRegionError(f"|Re mu| must exceed 1, got mu={mu}")
    y = f.grid
    if abs(f.dot(lambda t: 1 / np.cosh(t))) > constraint_tol:
        raise ValueError("f is not orthogonal to sech")
    if not np.allclose(y, -y[::-1], atol=1e-12):
        raise ValueError("grid must be symmetric about 0")
    fv = np.asarray(f.values, dtype=complex)
    if mu.real > 1:
        w = _backward_sweep(mu, y, CubicSpline(y, fv))
    else:
        w = -_backward_sweep(-mu, y, CubicSpline(y, fv[::-1]))[::-1]
    out = HalflineFunction(f.Y, y, w)
    res = b0_apply(out) - mu * w - fv
    interior = slice(3, -3)
    out.residual = float(np.abs(res[interior]).max())
    if out.residual > residual_tol:
        raise QuadratureError(f"ODE residual {out.residual:.3e} exceeds {residual_tol:g}")
    if not out.decay_flag:
        raise QuadratureError("resolvent output does not decay")
    return out


def bound_constant(mu) -> float:
    """Resolvent bound 1/(2(m-1)) + 2/(m+1) + 2/(m-1), m = |Re mu| > 1."""
    m = abs(complex(mu).real)
    if m <= 1:
        raise OutOfRegionError("bound only holds for |Re mu| > 1")
    return 1 / (2 * (m - 1)) + 2 / (m + 1) + 2 / (m - 1)


def residual_constraints(mu, f: HalflineFunction):
    """Solvability functionals inside the strip |Re mu| < 1.

    primary   = int e^{-mu y} sech(y) f(y) dy
    secondary = int_R int_inf^y sech(s) f(s) ds dy   (only at mu = 0)
    """
    mu = complex(mu)
    if abs(mu.real) >= 1:
        raise OutOfRegionError(f"|Re mu| must be below 1, got mu={mu}")
    y = f.grid
    sech = 1 / np.cosh(y)
    primary = complex(integrate.simpson(np.exp(-mu * y) * sech * f.values, x=y))
    if mu != 0:
        return primary, None
    g = sech * f.values
    cum = integrate.cumulative_simpson(g, x=y, initial=0)
    inner = cum - cum[-1]  # int_inf^y
    secondary = complex(integrate.simpson(inner, x=y))
    return primary, secondary


def continuous_divergence(mu=1.0, radii=(10, 100, 1000, 10000)):
    """Partial integrals int_{-R}^{R} e^{-mu s} sech(s) f(s) ds for an L2, non-L1 f.

    f(s) = (1 + s^2)^{-1/2} minus its sech component.  On |Re mu| = 1 one tail
    of the weight e^{-mu s} sech(s) tends to 2, the integrand behaves like
    2/|s| and the partials grow like 2 log R.
    """
    c = integrate.quad(lambda s: (1 + s * s) ** -0.5 * _sech(s), -np.inf, np.inf)[0] / 2

    def integrand(s):
        a = abs(s)
        weight = 2 * np.exp(-mu * s - a) / (1 + np.exp(-2 * a))  # e^{-mu s} sech s
        return weight * ((1 + s * s) ** -0.5 - c * _sech(s))

    out = []
    for R in radii:
        edges = np.geomspace(1.0, R, 40)
        edges = np.concatenate([-edges[::-1], [0.0], edges])
        out.append(sum(integrate.quad(integrand, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])))
    return np.array(out)


def _sech(s):
    a = np.abs(s)
    return 2 * np.exp(-a) / (1 + np.exp(-2 * a))


# --- coordinate maps ---------------------------------------------------------

def _y_scale(p):
    if p == 1:
        return np.pi / 6
    if p == 2:
        return np.pi / 4
    raise ValueError(f"power must be 1 or 2, got {p}")


def coordinate_map(direction: str, p: int, points):
    """Travelling coordinate xi <-> wave coordinate z.

    forward, p=1: z = pi tanh(pi xi/6); returns (z, dz/dxi).
    forward, p=2: returns ((z_plus, z_minus), (dz_plus/dxi, dz_minus/dxi)) for
    the two half-period maps onto (0, pi) and (-pi, 0).
    inverse, p=1: xi(z) for z in (-pi, pi); p=2: xi(z) on either half-period,
    choosing the branch by the sign of z (z = 0 is a peak and is rejected).
    """
    s = _y_scale(p)
    x = np.asarray(points, dtype=float)
    if direction == "forward":
        y = s * x
        if p == 1:
            z = np.pi * np.tanh(y)
            return z, (np.pi ** 2 - z ** 2) / 6
        zp = 0.5 * np.pi * (1 + np.tanh(y))
        zm = -0.5 * np.pi * (1 - np.tanh(y))
        return (zp, zm), (zp * (np.pi - zp) / 2, -zm * (np.pi + zm) / 2)
    if direction == "inverse":
        if p == 1:
            if np.any(np.abs(x) >= np.pi):
                raise ValueError("inverse map is singular at z = +-pi")
            return np.arctanh(x / np.pi) / s
        a = np.abs(x)
        if np.any((a == 0) | (a >= np.pi)):
            raise ValueError("inverse map is singular at the peaks z = 0, +-pi")
        t = np.where(x > 0, 2 * x / np.pi - 1, 2 * x / np.pi + 1)
        return np.arctanh(t) / s
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def transform_field(v, p: int, Y: float = Y_DEFAULT, h: float = H_DEFAULT):
    """w = v(z(y)) / cosh(y) on the line (p=1) or the pair (w_plus, w_minus) (p=2).

    ``v`` is a callable of z, or a pair (z_samples, values) which is
    interpolated by a cubic spline.
    """
    if not callable(v):
        zs, vs = v
        v = CubicSpline(np.asarray(zs), np.asarray(vs))
    y = line_grid(Y, h)
    if p == 1:
        return HalflineFunction(Y, y, v(np.pi * np.tanh(y)) / np.cosh(y))
    if p == 2:
        zp = 0.5 * np.pi * (1 + np.tanh(y))
        zm = -0.5 * np.pi * (1 - np.tanh(y))
        return (HalflineFunction(Y, y, v(zp) / np.cosh(y)),
                HalflineFunction(Y, y, v(zm) / np.cosh(y)))
    raise ValueError(f"power must be 1 or 2, got {p}")
