"""Eigenvalues, smallest singular values and pseudospectral portraits."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .spectral_ops import OperatorMatrix


class EigensolverError(RuntimeError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    N: int
    kappa: float
    vectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def abscissa(self) -> float:
        return float(self.eigenvalues.real.max())

    def nearest(self, lam: complex):
        """(eigenvalue, unit eigenvector) closest to lam."""
        j = int(np.argmin(np.abs(self.eigenvalues - lam)))
        return self.eigenvalues[j], self.vectors[:, j]


def _entries(M):
    return M.entries if isinstance(M, OperatorMatrix) else np.asarray(M, dtype=complex)


def eigenvalues(M, residual_tol: float = 1e-8) -> SpectrumResult:
    """All eigenpairs of a dense matrix; residuals |Av - lam v| / |v| validated."""
    E = _entries(M)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise ValueError("square matrix required")
    if not np.all(np.isfinite(E)):
        raise ValueError("matrix has non-finite entries")
    try:
        w, V = sla.eig(E, check_finite=False)
    except sla.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed: {exc}", {"size": E.shape[0]}) from exc
    V = V / np.linalg.norm(V, axis=0)
    res = np.linalg.norm(E @ V - V * w, axis=0)
    bad = res > residual_tol
    if bad.any():
        raise EigensolverError(
            f"{int(bad.sum())} eigenpairs above residual tolerance",
            {"max_residual": float(res.max()), "size": E.shape[0]})
    N = getattr(M, "N", E.shape[0] // 2)
    kappa = getattr(M, "kappa", 0.0)
    order = np.lexsort((w.imag, w.real))
    return SpectrumResult(w[order], res[order], N, kappa, V[:, order])


def smallest_singular(M, lam: complex) -> float:
    E = _entries(M)
    s = sla.svdvals(E - lam * np.eye(E.shape[0]), check_finite=False)
    return float(s[-1])


def _threads():
    env = os.environ.get("OSTROVSKY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class PseudospectrumField:
    re_grid: np.ndarray
    im_grid: np.ndarray
    sigma_min: np.ndarray  # shape (len(im_grid), len(re_grid)), row-major in Im
    N: int
    kappa: float = 0.0
    tag: str = "A"

    def at(self, lam: complex) -> float:
        i = int(np.argmin(np.abs(self.im_grid - lam.imag)))
        j = int(np.argmin(np.abs(self.re_grid - lam.real)))
        return float(self.sigma_min[i, j])


def pseudospectrum_field(M, re_range, im_range, resolution, threads: int | None = None) -> PseudospectrumField:
    """sigma_min(M - lam I) on a rectangular grid.

    ``resolution`` is an int (both axes) or a pair (n_re, n_im).  Grid points
    are evaluated independently, so the threaded result equals the sequential
    one bit for bit.
    """
    n_re, n_im = (resolution, resolution) if np.isscalar(resolution) else resolution
    if min(n_re, n_im) < 8:
        raise ValueError("resolution must be at least 8 per axis")
    re = np.linspace(*re_range, int(n_re))
    im = np.linspace(*im_range, int(n_im))
    E = _entries(M)
    pts = [complex(x, y) for y in im for x in re]
    nt = threads or _threads()
    if nt > 1:
        with ThreadPoolExecutor(nt) as ex:
            vals = list(ex.map(lambda z: smallest_singular(E, z), pts))
    else:
        vals = [smallest_singular(E, z) for z in pts]
    sig = np.array(vals).reshape(len(im), len(re))
    return PseudospectrumField(re, im, sig, getattr(M, "N", E.shape[0] // 2),
                               getattr(M, "kappa", 0.0), getattr(M, "tag", "A"))


def strip_estimate(fld: PseudospectrumField, eps: float):
    """(min, max) of Re lam over grid points with sigma_min < eps, or None."""
    if eps <= 0:
        raise ValueError("threshold must be positive")
    cols = np.any(fld.sigma_min < eps, axis=0)
    if not cols.any():
        return None
    xs = fld.re_grid[cols]
    return float(xs.min()), float(xs.max())


def compare_pseudospectra(M_A, M_A0, re_range, im_range, resolution, eps: float = 0.02):
    """Max pointwise |sigma_min(A - lam) - sigma_min(A0 - lam)| plus both fields.

    Returns (max_difference, field_A, field_A0, extents) where extents are the
    eps-sublevel horizontal intervals.
    """
    EA, E0 = _entries(M_A), _entries(M_A0)
    if EA.shape != E0.shape:
        raise ValueError(f"dimension mismatch {EA.shape} vs {E0.shape}")
    if getattr(M_A, "kappa", 0.0) != getattr(M_A0, "kappa", 0.0):
        raise ValueError("Floquet exponents differ")
    fa = pseudospectrum_field(M_A, re_range, im_range, resolution)
    f0 = pseudospectrum_field(M_A0, re_range, im_range, resolution)
    diff = float(np.abs(fa.sigma_min - f0.sigma_min).max())
    return diff, fa, f0, (strip_estimate(fa, eps), strip_estimate(f0, eps))
