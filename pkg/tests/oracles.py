"""Independent reference computations used by the test suite.

None of these import the package; they rebuild quantities from scratch with
different numerics (dense FFT at high oversampling, mpmath quadrature and
determinants, the method of characteristics).
"""
import mpmath as mp
import numpy as np
from scipy.optimize import brentq


def fft_coefficients(f, N, m=2 ** 18):
    """c_n, n = -N..N, of a 2pi-periodic callable from m equispaced samples."""
    z = -np.pi + 2 * np.pi * np.arange(m) / m
    raw = np.fft.fft(f(z)) / m
    n = np.arange(-N, N + 1)
    return raw[n % m] * (-1.0) ** n


def c_minus_u(p):
    if p == 1:
        return lambda z: (np.pi ** 2 - z ** 2) / 6
    return lambda z: np.abs(z) * (np.pi - np.abs(z)) / 2


def mp_fourier(f, n, breaks=(0,)):
    """(1/2pi) int_{-pi}^{pi} f(z) e^{-inz} dz with mpmath, split at kinks."""
    pts = [-mp.pi] + [mp.mpf(b) for b in breaks] + [mp.pi]
    val = mp.quad(lambda z: f(z) * mp.exp(-1j * n * z), pts)
    return complex(val / (2 * mp.pi))


def galerkin_matrix(p, N):
    """A = D M + K built entry by entry with mpmath coefficients (tiny N only)."""
    g = (lambda z: (mp.pi ** 2 - z ** 2) / 6) if p == 1 else (lambda z: abs(z) * (mp.pi - abs(z)) / 2)
    modes = [n for n in range(-N, N + 1) if n != 0]
    d = {k: mp_fourier(g, k) for k in range(-2 * N, 2 * N + 1)}
    A = mp.matrix(len(modes))
    for i, m in enumerate(modes):
        for j, n in enumerate(modes):
            A[i, j] = 1j * m * d[m - n] + (1 / (1j * n) if i == j else 0)
    return A


def charpoly_roots(A, dps=40):
    """Eigenvalues as roots of det(A - x I), coefficients by Faddeev-LeVerrier."""
    with mp.workdps(dps):
        n = A.rows
        I = mp.eye(n)
        Mk = mp.matrix(n)
        coeffs = [mp.mpf(1)]
        for k in range(1, n + 1):
            Mk = A * Mk + coeffs[-1] * I
            AM = A * Mk
            ck = -sum(AM[i, i] for i in range(n)) / k
            coeffs.append(ck)
        roots = mp.polyroots(coeffs, maxsteps=400, extraprec=400)
    return np.array([complex(r) for r in roots])


def burgers_sine(x, t):
    """Solution of u_t + u u_x = 0, u(x,0) = sin x, for t < 1 by characteristics."""
    out = np.empty_like(x)
    for j, xx in enumerate(x):
        xi = brentq(lambda s: s + t * np.sin(s) - xx, xx - 2.0, xx + 2.0)
        out[j] = np.sin(xi)
    return out


def _potential(c, p):
    return lambda u: c * u ** 2 / 2 - u ** (p + 2) / (p + 2)


def smooth_wave_turning_points(u_min, c, p):
    """Crest value from energy conservation of u'' + (c - u^p) u = 0."""
    with mp.workdps(40):
        V = _potential(mp.mpf(c), p)
        E = V(mp.mpf(u_min))
        top = mp.mpf(c) ** (mp.mpf(1) / p)
        return mp.findroot(lambda u: V(u) - E, (mp.mpf(1e-30), top * (1 - mp.mpf(10) ** -30)),
                           solver="anderson")


def smooth_wave_period(u_min, c, p):
    """z-period 2 int (c - u^p)/|u'| du between the turning points (mpmath)."""
    with mp.workdps(40):
        c_, umin = mp.mpf(c), mp.mpf(u_min)
        umax = smooth_wave_turning_points(u_min, c, p)
        V = _potential(c_, p)
        E = V(umin)
        f = lambda u: (c_ - u ** p) / mp.sqrt(2 * (E - V(u)))
        return float(mp.re(2 * mp.quad(f, [umin, 0, umax])))


def constraint_closed_form(mu):
    """int e^{-mu y} sech^2(y) tanh(y) dy = -pi mu^2 / (2 sin(pi mu / 2))."""
    return -np.pi * mu ** 2 / (2 * np.sin(np.pi * mu / 2))


def constraint_quadrature(mu, f):
    val = mp.quad(lambda y: mp.exp(-mu * y) * mp.sech(y) * f(y), [-mp.inf, 0, mp.inf])
    return complex(val)
