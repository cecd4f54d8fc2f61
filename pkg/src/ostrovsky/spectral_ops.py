"""Fourier-Galerkin matrices of the linearized operator and its pieces.

Mode sets: at Floquet exponent kappa = 0 the zero mode is excluded (zero-mean
perturbations); for kappa != 0 all modes -N..N are kept.  Modes are stored in
ascending order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waves import WaveProfile, profile_fourier


def mode_indices(N: int, kappa: float = 0.0, with_mean: bool = False) -> np.ndarray:
    if N < 1:
        raise ValueError("mode cutoff must be at least 1")
    if kappa == 0 and not with_mean:
        return np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)])
    return np.arange(-N, N + 1)


@dataclass(frozen=True)
class FourierVector:
    N: int
    coeffs: np.ndarray
    kappa: float = 0.0
    with_mean: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != self.modes.shape:
            raise ValueError(f"expected {self.modes.size} coefficients, got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def modes(self) -> np.ndarray:
        return mode_indices(self.N, self.kappa, self.with_mean)

    def coeff(self, n: int) -> complex:
        idx = np.searchsorted(self.modes, n)
        if idx >= self.modes.size or self.modes[idx] != n:
            raise KeyError(n)
        return self.coeffs[idx]

    def norm(self) -> float:
        """L2 norm over one period (Parseval, 2pi-normalised)."""
        return float(np.sqrt(2 * np.pi) * np.linalg.norm(self.coeffs))

    def to_grid(self, n_points: int) -> np.ndarray:
        """Real samples on the uniform grid starting at -pi (kappa = 0 only)."""
        if self.kappa != 0:
            raise ValueError("grid synthesis is only defined for kappa = 0")
        z = -np.pi + 2 * np.pi * np.arange(n_points) / n_points
        return np.real(np.exp(1j * np.outer(z, self.modes)) @ self.coeffs)

    @classmethod
    def from_function(cls, f, N: int, n_quad: int = 4096):
        """Zero-mean Fourier truncation of a 2pi-periodic function by FFT."""
        from .waves import sampled_coefficients
        z = -np.pi + 2 * np.pi * np.arange(n_quad) / n_quad
        full = sampled_coefficients(np.asarray(f(z), dtype=float), N)
        return cls(N=N, coeffs=np.delete(full, N))


@dataclass(frozen=True)
class OperatorMatrix:
    N: int
    kappa: float
    entries: np.ndarray
    tag: str  # "K" | "A0" | "A" | "multiplier"

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        n = self.modes.size
        if e.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def modes(self) -> np.ndarray:
        return mode_indices(self.N, self.kappa)

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, v):
        if isinstance(v, FourierVector):
            return FourierVector(N=v.N, coeffs=self.entries @ v.coeffs, kappa=v.kappa)
        return self.entries @ v


def _check_kappa(kappa):
    if abs(kappa) > 0.5:
        raise ValueError(f"Floquet exponent must lie in [-1/2, 1/2], got {kappa}")


def assemble_K(N: int, kappa: float = 0.0, modes=None) -> OperatorMatrix:
    """Diagonal matrix of the zero-mean anti-derivative, symbol 1/(i(n + kappa))."""
    _check_kappa(kappa)
    m = mode_indices(N, kappa)
    if modes is not None and kappa == 0 and 0 in np.asarray(modes):
        raise ValueError("mode 0 is not part of the zero-mean space at kappa = 0")
    return OperatorMatrix(N=N, kappa=kappa, entries=np.diag(1.0 / (1j * (m + kappa))), tag="K")


def assemble_multiplier(d: FourierVector, N: int, kappa: float = 0.0) -> OperatorMatrix:
    """Toeplitz block entry(m, n) = d_{m-n} on the retained mode set.

    Needs d_n for |n| <= 2N so that no convolution term inside the block is
    truncated.
    """
    _check_kappa(kappa)
    if not d.with_mean or d.N < 2 * N:
        raise ValueError(f"need coefficients d_n for |n| <= {2 * N}, got cutoff {d.N}")
    m = mode_indices(N, kappa)
    idx = m[:, None] - m[None, :] + d.N
    return OperatorMatrix(N=N, kappa=kappa, entries=d.coeffs[idx], tag="multiplier")


def assemble_operator(profile, N: int, kappa: float = 0.0, include_K: bool = True) -> OperatorMatrix:
    """Galerkin matrix of A = d/dz[(c - U^p) .] + d/dz^{-1} (or A0 without K).

    ``profile`` is a WaveProfile, a closed-form tag such as ``"peaked:1"``, or
    the FourierVector of c - U^p itself.  The convolution runs over the full
    index set; at kappa = 0 the derivative annihilates the mean row, so the
    retained block is D_ret @ M_ret.
    """
    _check_kappa(kappa)
    d = profile if isinstance(profile, FourierVector) else profile_fourier(profile, 2 * N)
    M = assemble_multiplier(d, N, kappa)
    k = mode_indices(N, kappa) + kappa
    A = (1j * k)[:, None] * M.entries
    if include_K:
        A = A + np.diag(1.0 / (1j * k))
    return OperatorMatrix(N=N, kappa=kappa, entries=A, tag="A" if include_K else "A0")


def parity_matrix(N: int) -> np.ndarray:
    """(P v)_n = v_{-n} on the zero-mean mode set."""
    return np.fliplr(np.eye(2 * N))


def compress(op: OperatorMatrix, keep) -> np.ndarray:
    """Principal submatrix on modes selected by a boolean mask or a predicate."""
    mask = keep(op.modes) if callable(keep) else np.asarray(keep, dtype=bool)
    return op.entries[np.ix_(mask, mask)]


def peaked_eigenvector(p: int, N: int) -> FourierVector:
    """Exact Fourier coefficients of U_*' truncated to |n| <= N.

    p=1: z/3 -> i(-1)^n / (3n);  p=2: sign(z)/sqrt(2) -> -i sqrt(2)/(pi n), n odd.
    """
    n = mode_indices(N)
    if p == 1:
        c = 1j * (-1.0) ** n / (3.0 * n)
    else:
        c = np.where(n % 2 != 0, -1j * np.sqrt(2) / (np.pi * n), 0.0)
    return FourierVector(N=N, coeffs=c)


def random_zero_mean(N: int, seed: int, decay: float = 0.0) -> FourierVector:
    """Coefficients of a random real zero-mean field, |c_n| ~ |n|^-decay."""
    rng = np.random.default_rng(seed)
    pos = (rng.standard_normal(N) + 1j * rng.standard_normal(N)) * np.arange(1, N + 1) ** (-decay)
    c = np.concatenate([np.conj(pos[::-1]), pos])
    c /= np.sqrt(2 * np.pi) * np.linalg.norm(c)
    return FourierVector(N=N, coeffs=c)


__all__ = [
    "FourierVector", "OperatorMatrix", "WaveProfile", "mode_indices", "assemble_K",
    "assemble_multiplier", "assemble_operator", "parity_matrix", "compress",
    "peaked_eigenvector", "random_zero_mean",
]
