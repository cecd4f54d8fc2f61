"""Linear and nonlinear time evolution, growth rates and wave breaking."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .spectral_ops import FourierVector, OperatorMatrix, random_zero_mean
from .waves import peaked_value, smooth_wave_solve, uniform_grid

BREAKING_THRESHOLD = 50.0
CFL = 0.5
MAX_DT = 0.05
RK4_IMAG_LIMIT = 2.8  # RK4 stability interval on the imaginary axis is 2*sqrt(2)


class CFLError(ValueError):
    pass


class FitQualityWarning(UserWarning):
    pass


@dataclass
class EvolutionTrace:
    times: np.ndarray
    norms: np.ndarray
    snapshots: list = field(default_factory=list, repr=False)
    fitted_rate: float | None = None
    diagnostics: dict = field(default_factory=dict)
    breaking_time: float | None = None
    overflow: bool = False


def rk4_step(rhs, t, y, dt):
    k1 = rhs(t, y)
    k2 = rhs(t + dt / 2, y + dt / 2 * k1)
    k3 = rhs(t + dt / 2, y + dt / 2 * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_propagator(E: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for y' = E y, as the matrix polynomial it equals."""
    X = dt * E
    I = np.eye(E.shape[0])
    return I + X @ (I + X @ (I / 2 + X @ (I / 6 + X / 24)))


# --- linear ------------------------------------------------------------------

def evolve_linear(M, v0, T: float, dt: float | None = None, n_records: int = 401,
                  window: float = 0.5, keep_snapshots: bool = False,
                  overflow: float = 1e200) -> EvolutionTrace:
    """v_t = A v in coefficient space with classical RK4.

    dt defaults to 0.5/N.  The step must satisfy dt * |A|_2 <= 2.8 so the
    spectrum of dt A sits inside the RK4 stability region.  Norms are the
    period L2 norms (Parseval), recorded on n_records evenly spaced times.
    """
    E = M.entries if isinstance(M, OperatorMatrix) else np.asarray(M, dtype=complex)
    N = getattr(M, "N", E.shape[0] // 2)
    v = np.array(v0.coeffs if isinstance(v0, FourierVector) else v0, dtype=complex)
    if T <= 0:
        raise ValueError("horizon must be positive")
    dt = 0.5 / N if dt is None else float(dt)
    if dt * np.linalg.norm(E, 2) > RK4_IMAG_LIMIT:
        raise CFLError(f"dt={dt:g} exceeds the RK4 stability bound for this matrix")
    steps = int(np.ceil(T / dt - 1e-9))
    dt = T / steps
    n_rec = min(n_records, steps + 1)
    marks = np.unique(np.round(np.linspace(0, steps, n_rec)).astype(int))
    P = rk4_propagator(E, dt)
    scale = np.sqrt(2 * np.pi)
    times, norms, snaps = [0.0], [scale * np.linalg.norm(v)], [v.copy()] if keep_snapshots else []
    done, flag = 0, False
    for m in marks[1:]:
        for _ in range(m - done):
            v = P @ v
        done = m
        nv = scale * np.linalg.norm(v)
        if not np.isfinite(nv) or nv > overflow:
            flag = True
            break
        times.append(m * dt)
        norms.append(nv)
        if keep_snapshots:
            snaps.append(v.copy())
    tr = EvolutionTrace(np.array(times), np.array(norms), snaps, overflow=flag,
                        diagnostics={"dt": dt, "steps": steps, "N": N})
    if len(tr.times) >= 10:
        tr.fitted_rate = growth_rate_fit(tr, window)
    return tr


def growth_rate_fit(trace: EvolutionTrace, window: float = 0.5) -> float:
    """Least-squares slope of log(norm) against time over the trailing window."""
    if not 0 < window <= 1:
        raise ValueError("window must lie in (0, 1]")
    t, n = np.asarray(trace.times), np.asarray(trace.norms)
    t0 = t[-1] - window * (t[-1] - t[0])
    m = t >= t0 - 1e-12
    if m.sum() < 10:
        raise ValueError("need at least 10 samples in the fit window")
    x, y = t[m], np.log(n[m])
    slope, icpt = np.polyfit(x, y, 1)
    ss = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 if ss == 0 else 1 - np.sum((y - slope * x - icpt) ** 2) / ss
    trace.diagnostics["fit_r2"] = float(r2)
    if r2 < 0.99 and abs(slope) > 1e-8:
        warnings.warn(f"log-norm is not close to linear in the fit window (R^2 = {r2:.4f})",
                      FitQualityWarning, stacklevel=2)
    return float(slope)


# --- nonlinear ---------------------------------------------------------------

def _wavenumbers(Mgrid):
    return np.fft.rfftfreq(Mgrid, 1.0 / Mgrid)


def spectral_slope(u: np.ndarray) -> float:
    k = _wavenumbers(u.size)
    return float(np.abs(np.fft.irfft(1j * k * np.fft.rfft(u), u.size)).max())


def evolve_nonlinear(u0, p: int, T: float, dt: float | None = None,
                     threshold: float = BREAKING_THRESHOLD, record_dt: float = 0.1,
                     keep_snapshots: bool = True) -> EvolutionTrace:
    """u_t + u^p u_x = d/dx^{-1} u on a uniform periodic grid, pseudospectral RK4.

    The flux u^{p+1}/(p+1) is differentiated spectrally and everything is
    truncated to |k| <= M/3 (2/3 rule).  The zero mode is removed.
    With dt=None the step is min(0.5/(max|u|^p M), 0.05); a fixed dt above
    that bound at t=0 is rejected.  Integration stops at T or when max|u_x|
    exceeds threshold times its initial value.
    """
    u0 = np.asarray(u0, dtype=float)
    Mgrid = u0.size
    if Mgrid < 256 or Mgrid & (Mgrid - 1):
        raise ValueError("grid size must be a power of two >= 256")
    if p not in (1, 2):
        raise ValueError(f"power must be 1 or 2, got {p}")
    k = _wavenumbers(Mgrid)
    keep = k <= Mgrid // 3
    ik = 1j * k
    inv = np.zeros_like(ik)
    inv[1:] = 1 / ik[1:]

    def rhs(_t, uh):
        u = np.fft.irfft(uh, Mgrid)
        r = -ik * np.fft.rfft(u ** (p + 1) / (p + 1)) + inv * uh
        r[~keep] = 0
        return r

    def cfl_dt(u):
        return min(CFL / (max(np.abs(u).max() ** p, 1e-12) * Mgrid), MAX_DT)

    uh = np.fft.rfft(u0)
    uh[~keep] = 0
    uh[0] = 0
    u = np.fft.irfft(uh, Mgrid)
    if dt is not None and dt > cfl_dt(u) * (1 + 1e-12):
        raise CFLError(f"dt={dt:g} violates the CFL bound {cfl_dt(u):g}")
    h = 2 * np.pi / Mgrid
    l2_0 = np.sum(u ** 2) * h
    s0 = spectral_slope(u)
    times, norms, snaps, slopes, means = [0.0], [np.sqrt(l2_0)], [u.copy()], [s0], [abs(u.sum() * h)]
    t, next_rec, broke = 0.0, record_dt, None
    drift = 0.0
    while t < T - 1e-12:
        step = cfl_dt(u) if dt is None else dt
        step = min(step, T - t)
        uh = rk4_step(rhs, t, uh, step)
        t += step
        u = np.fft.irfft(uh, Mgrid)
        if not np.all(np.isfinite(u)):
            broke = t
            break
        slope = spectral_slope(u)
        l2 = np.sum(u ** 2) * h
        if slope <= threshold * s0:
            drift = max(drift, abs(l2 / l2_0 - 1))
        if slope > threshold * s0:
            broke = t
        if t >= next_rec - 1e-12 or broke is not None or t >= T - 1e-12:
            times.append(t)
            norms.append(np.sqrt(l2))
            slopes.append(slope)
            means.append(abs(u.sum() * h))
            if keep_snapshots:
                snaps.append(u.copy())
            next_rec += record_dt
        if broke is not None:
            break
    return EvolutionTrace(np.array(times), np.array(norms), snaps,
                          diagnostics={"l2_drift": float(drift), "max_mean": float(max(means)),
                                       "slopes": np.array(slopes), "initial_slope": s0,
                                       "M": Mgrid, "p": p},
                          breaking_time=broke)


def breaking_detect(trace: EvolutionTrace, threshold: float = BREAKING_THRESHOLD):
    """Earliest recorded time with max|u_x| > threshold * max|u_x(0)|, else None.

    Slopes are measured from the stored snapshots by spectral differentiation,
    the same measure the nonlinear solver uses for its own flag.
    """
    if not trace.snapshots:
        raise ValueError("trace carries no snapshots")
    s0 = spectral_slope(np.asarray(trace.snapshots[0]))
    for t, u in zip(trace.times, trace.snapshots):
        if spectral_slope(np.asarray(u)) > threshold * s0:
            return float(t)
    return None


# --- initial data ------------------------------------------------------------

def make_initial_data(kind: str, params: dict | None = None, seed: int | None = None):
    """Reproducible initial data.

    peaked_perturbed: {p, M, amplitude=0.01, mode=1} -> U_* + a sin(mode z)
    smooth_wave:      {c, p=1, M=512}                -> smooth profile samples
    small_cosine:     {M, amplitude=0.05}            -> a cos z
    random_zero_mean: {N, decay=0} (seed required)   -> FourierVector, unit norm
    """
    params = dict(params or {})
    if kind == "peaked_perturbed":
        p, Mgrid = params.get("p", 1), params.get("M", 1024)
        z = uniform_grid(Mgrid)
        return peaked_value(z, p) + params.get("amplitude", 0.01) * np.sin(params.get("mode", 1) * z)
    if kind == "smooth_wave":
        prof = smooth_wave_solve(params["c"], params.get("p", 1), n_samples=params.get("M", 512))
        return prof.values.copy()
    if kind == "small_cosine":
        return params.get("amplitude", 0.05) * np.cos(uniform_grid(params.get("M", 512)))
    if kind == "random_zero_mean":
        if seed is None:
            raise ValueError("random initial data needs a seed")
        return random_zero_mean(params.get("N", 256), seed, params.get("decay", 0.0))
    raise ValueError(f"unknown initial-data kind {kind!r}")
