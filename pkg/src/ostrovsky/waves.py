"""Traveling-wave profiles of the reduced (modified) Ostrovsky equations.

Profiles live on the period [-pi, pi).  The peaked waves are available in
closed form; smooth waves for c in (1, c_*) are computed by shooting on the
semi-linear oscillator form of the profile equation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

C_STAR = {1: np.pi**2 / 9, 2: np.pi**2 / 8}


class NoSolutionError(ValueError):
    """Requested wave speed lies outside the smooth-wave family."""


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _check_power(p):
    if p not in (1, 2):
        raise ValueError(f"nonlinearity power must be 1 or 2, got {p!r}")


def uniform_grid(n: int, offset: float = 0.0) -> np.ndarray:
    """n equispaced points on [-pi, pi); ``offset`` is a fraction of a cell."""
    h = 2 * np.pi / n
    return -np.pi + (np.arange(n) + offset) * h


@dataclass(frozen=True)
class WaveProfile:
    p: int
    c: float
    grid: np.ndarray
    values: np.ndarray
    kind: str  # "smooth" | "peaked"
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        _check_power(self.p)
        if self.kind not in ("smooth", "peaked"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have the same shape")

    @property
    def n(self) -> int:
        return self.values.size

    def mean(self) -> float:
        """Period average of the profile.

        Smooth profiles use the periodic trapezoid rule (spectrally accurate).
        Peaked profiles are piecewise polynomials of degree <= 2 with kinks on
        grid nodes, so Simpson's rule on each smooth piece is exact.
        """
        if self.kind == "smooth":
            return float(np.mean(self.values))
        z = np.append(self.grid, np.pi)
        u = np.append(self.values, self.values[0])
        cuts = [0, z.size - 1]
        if self.p == 2:
            cuts = [0, int(np.argmin(np.abs(z))), z.size - 1]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            total += integrate.simpson(u[a:b + 1], x=z[a:b + 1])
        return total / (2 * np.pi)


@dataclass(frozen=True)
class BreakingField:
    grid: np.ndarray
    values: np.ndarray
    sign_definite: bool


# --- peaked waves ------------------------------------------------------------

def peaked_value(z, p: int):
    """Closed-form peaked profile U_*(z), periodically continued."""
    _check_power(p)
    z = np.asarray(z, dtype=float)
    zr = np.mod(z + np.pi, 2 * np.pi) - np.pi
    if p == 1:
        return (3 * zr**2 - np.pi**2) / 18
    return (np.abs(zr) - np.pi / 2) / np.sqrt(2)


def peaked_derivative_value(z, p: int):
    """U_*'(z) away from the peaks: z/3 (p=1) or sign(z)/sqrt(2) (p=2)."""
    _check_power(p)
    z = np.asarray(z, dtype=float)
    zr = np.mod(z + np.pi, 2 * np.pi) - np.pi
    if p == 1:
        return zr / 3
    return np.sign(zr) / np.sqrt(2)


def peaked_profile(p: int, n_samples: int) -> WaveProfile:
    _check_power(p)
    if n_samples < 8:
        raise ValueError("need at least 8 samples")
    if p == 2 and n_samples % 2:
        # the kink at z = 0 must sit on a node
        raise ValueError("p=2 peaked profile needs an even number of samples")
    z = uniform_grid(n_samples)
    return WaveProfile(p=p, c=C_STAR[p], grid=z, values=peaked_value(z, p), kind="peaked")


def peaked_derivative(p: int, n_samples: int):
    """Samples of U_*' on the half-cell offset grid (never on a peak).

    Returns ``(grid, values)``.  This is the zero-eigenvector of the
    linearized operator.
    """
    _check_power(p)
    z = uniform_grid(n_samples, offset=0.5)
    return z, peaked_derivative_value(z, p)


# --- smooth waves ------------------------------------------------------------

def _half_period(u_min, c, p):
    """z-length of half an oscillation of u'' + (c - u^p) u = 0 from u_min.

    Starts at the trough (u' = 0) and stops at the next crest.
    """
    def rhs(xi, s):
        u, du, _ = s
        return [du, -(c - u**p) * u, c - u**p]

    def crest(xi, s):
        return s[1]
    crest.terminal = True
    crest.direction = -1

    # the xi-period diverges logarithmically near the separatrix
    sol = integrate.solve_ivp(rhs, (0.0, 400.0), [u_min, 0.0, 0.0], method="DOP853",
                              events=crest, rtol=1e-12, atol=1e-14)
    if not sol.t_events[0].size:
        raise ConvergenceError(f"no crest found for u_min={u_min}")
    u_max = sol.y_events[0][0][0]
    return sol.y_events[0][0][2], u_max


def _separatrix_trough(c, p):
    # turning point of the orbit through the saddle u = c^(1/p)
    if p == 1:
        return -c / 2
    return -np.sqrt(c)


def smooth_wave_solve(c: float, p: int = 1, tol: float = 1e-8, n_samples: int = 512,
                      period_tol: float = 1e-10) -> WaveProfile:
    """Smooth 2pi-periodic wave of speed ``c`` by shooting on the trough value.

    The even solution of u'' + (c - u^p) u = 0 with u(0) = u_min, u'(0) = 0 is
    mapped to z by dz/dxi = c - u^p; u_min is found by root bracketing so that
    half an oscillation covers z in [0, pi].  The returned ``info`` holds the
    trough value, the achieved period error, the residual of the quasi-linear
    profile equation and the conditioning d(half-period)/d(u_min).
    """
    _check_power(p)
    if not 1.0 < c < C_STAR[p]:
        raise NoSolutionError(f"no smooth wave at c={c} (needs 1 < c < {C_STAR[p]:.6f})")

    def mismatch(u_min):
        return _half_period(u_min, c, p)[0] - np.pi

    lo = _separatrix_trough(c, p) * (1 - 1e-9)
    hi = -1e-6 * np.sqrt(c)
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise ConvergenceError("shooting bracket does not straddle the 2pi period",
                               residual=min(abs(f_lo), abs(f_hi)))
    u_min = optimize.brentq(mismatch, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                            maxiter=200)
    half, u_max = _half_period(u_min, c, p)
    period_err = abs(2 * half - 2 * np.pi)
    if period_err > period_tol:
        raise ConvergenceError(f"period error {period_err:.3e} above {period_tol:.1e}",
                               residual=period_err)
    du = 1e-7 * abs(u_min)
    conditioning = (_half_period(u_min + du, c, p)[0] - _half_period(u_min - du, c, p)[0]) / (2 * du)

    z = uniform_grid(n_samples)
    values = _sample_in_z(u_min, c, p, z)
    residual = profile_residual(values, c, p)
    if residual > tol:
        raise ConvergenceError(f"profile residual {residual:.3e} above tol {tol:.1e}",
                               residual=residual)
    info = dict(u_min=u_min, u_max=u_max, period_error=period_err,
                residual=residual, conditioning=conditioning)
    return WaveProfile(p=p, c=c, grid=z, values=values, kind="smooth", info=info)


def _sample_in_z(u_min, c, p, z):
    # In the z variable: u_z = q / (c - u^p), q_z = -u with q = du/dxi.
    pos = np.abs(z)
    order = np.unique(pos)

    def rhs(_, s):
        return [s[1] / (c - s[0]**p), -s[0]]

    t_eval = order[order > 0]
    sol = integrate.solve_ivp(rhs, (0.0, np.pi), [u_min, 0.0], method="DOP853",
                              t_eval=t_eval, rtol=1e-13, atol=1e-15)
    table = np.concatenate([[u_min], sol.y[0]]) if order[0] == 0 else sol.y[0]
    return np.interp(pos, order, table)


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Fourier derivative of periodic samples on [-pi, pi)."""
    n = values.size
    k = np.fft.fftfreq(n, 1.0 / n)
    if order % 2 and n % 2 == 0:
        k[n // 2] = 0.0
    return np.real(np.fft.ifft((1j * k)**order * np.fft.fft(values)))


def profile_residual(values, c, p):
    """max |d/dz[(c - U^p) U'] + U| evaluated spectrally."""
    flux = (c - values**p) * spectral_derivative(values)
    return float(np.max(np.abs(spectral_derivative(flux) + values)))


# --- Fourier data of c - U^p -------------------------------------------------

def peaked_coefficients(p: int, N: int) -> np.ndarray:
    """Analytic Fourier coefficients d_n, n = -N..N, of c_* - U_*^p.

    p=1: (pi^2 - z^2)/6 -> d_0 = pi^2/9, d_n = -(-1)^n / (3 n^2).
    p=2: |z|(pi - |z|)/2 -> d_0 = pi^2/12, d_n = -1/n^2 (n even), 0 (n odd).
    """
    _check_power(p)
    n = np.arange(-N, N + 1)
    d = np.zeros(n.size)
    nz = n != 0
    if p == 1:
        d[~nz] = np.pi**2 / 9
        d[nz] = -((-1.0) ** n[nz]) / (3.0 * n[nz] ** 2)
    else:
        d[~nz] = np.pi**2 / 12
        even = nz & (n % 2 == 0)
        d[even] = -1.0 / n[even] ** 2
    return d


def sampled_coefficients(values: np.ndarray, N: int) -> np.ndarray:
    """Coefficients n = -N..N of periodic samples on the grid starting at -pi.

    Modes beyond the Nyquist limit of the samples are returned as zero.
    """
    m = values.size
    raw = np.fft.fft(values) / m
    n = np.arange(-N, N + 1)
    out = np.zeros(n.size, dtype=complex)
    ok = np.abs(n) < (m + 1) // 2
    # grid starts at -pi: shift theorem gives a factor (-1)^n
    out[ok] = raw[n[ok] % m] * (-1.0) ** n[ok]
    return out


def profile_fourier(profile, N: int):
    """Fourier vector of c - U^p for a profile (analytic series when peaked)."""
    from .spectral_ops import FourierVector

    if N < 2:
        raise ValueError("mode cutoff must be at least 2")
    if isinstance(profile, str):
        kind, _, p = profile.partition(":")
        if kind != "peaked":
            raise ValueError(f"unknown closed-form tag {profile!r}")
        d = peaked_coefficients(int(p), N).astype(complex)
    elif profile.kind == "peaked":
        d = peaked_coefficients(profile.p, N).astype(complex)
    else:
        d = sampled_coefficients(profile.c - profile.values**profile.p, N)
        # real even profile: drop the roundoff imaginary part symmetrically
        d = 0.5 * (d + np.conj(d[::-1]))
    return FourierVector(N=N, coeffs=d, with_mean=True)


# --- breaking criterion ------------------------------------------------------

def _resolved(values, frac=1 / 3, rel=1e-10):
    a = np.abs(np.fft.rfft(values))
    cut = int(np.ceil(a.size * (1 - frac)))
    return a[cut:].max(initial=0.0) <= rel * max(a.max(), 1e-300)


def _fd_derivative(values, h, order):
    if order == 1:
        return (np.roll(values, -1) - np.roll(values, 1)) / (2 * h)
    return (np.roll(values, -1) - 2 * values + np.roll(values, 1)) / h**2


def breaking_indicator(u, p: int, grid=None, method: str = "auto") -> BreakingField:
    """m_0 = 1 - 3 u'' (p=1) or 1 - sqrt(2)|u'| (p=2) on a uniform periodic grid.

    ``method="auto"`` differentiates spectrally when the samples are resolved
    (negligible upper third of the spectrum) and falls back to centred
    differences otherwise; Gibbs oscillations from kinks would otherwise make
    the sign test meaningless.
    """
    _check_power(p)
    u = np.asarray(u, dtype=float)
    if u.size < 16:
        raise ValueError("need at least 16 samples")
    if grid is None:
        grid = uniform_grid(u.size)
    if method == "auto":
        method = "spectral" if _resolved(u) else "fd"
    order = 2 if p == 1 else 1
    if method == "spectral":
        du = spectral_derivative(u, order)
    elif method == "fd":
        du = _fd_derivative(u, 2 * np.pi / u.size, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    m0 = 1 - 3 * du if p == 1 else 1 - np.sqrt(2) * np.abs(du)
    return BreakingField(grid=np.asarray(grid), values=m0, sign_definite=bool(m0.min() > 0))
