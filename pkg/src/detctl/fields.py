"""Scalar fields on [0, L]: grids, transforms, differentiation, and norms.

A field is stored by its samples on a uniform grid and identified with the
trigonometric polynomial those samples determine.  Neumann grids sample at
cell midpoints x_j = (j + 1/2) L / M and expand in the cosine basis
cos(k pi x / L), so zero-slope walls hold exactly in the basis; periodic
grids sample at x_j = j L / M and use the complex Fourier basis.

Norms are evaluated modally (exact for band-limited fields).  The quartic
integral is computed on a refined grid so that the tripled bandwidth of the
cube never aliases back into the quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.fft import dct, idct, idst

NEUMANN = "neumann"
PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid1D:
    """Uniform discretization of [0, L] with M cells."""

    L: float
    M: int
    bc: str = NEUMANN

    def __post_init__(self) -> None:
        if not (self.L > 0 and np.isfinite(self.L)):
            raise ValueError(f"domain length must be positive and finite, got L={self.L}")
        if self.M < 8:
            raise ValueError(f"resolution must satisfy M >= 8, got M={self.M}")
        if self.bc not in (NEUMANN, PERIODIC):
            raise ValueError(f"bc must be {NEUMANN!r} or {PERIODIC!r}, got {self.bc!r}")

    @property
    def dx(self) -> float:
        return self.L / self.M

    def points(self) -> np.ndarray:
        """Sample points: cell midpoints (Neumann) or j*L/M (periodic)."""
        j = np.arange(self.M)
        if self.bc == NEUMANN:
            return (j + 0.5) * self.dx
        return j * self.dx

    def wavenumbers(self) -> np.ndarray:
        """Modal wavenumbers k-hat: k*pi/L (Neumann), 2*pi*m/L (periodic)."""
        if self.bc == NEUMANN:
            return np.arange(self.M) * np.pi / self.L
        return np.arange(self.M // 2 + 1) * 2.0 * np.pi / self.L


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=a.dtype if np.iscomplexobj(a) else float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Field:
    """Real-valued samples of a function on a Grid1D."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.M,):
            raise ValueError(f"expected {self.grid.M} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field samples must be finite")
        object.__setattr__(self, "values", _readonly(v))


@dataclass(frozen=True)
class Spectrum:
    """Modal coefficients of a field.

    Neumann: real cosine coefficients c[k] of sum_k c[k] cos(k pi x / L),
    k = 0..M-1.  Periodic: complex coefficients c[m] of
    sum_m c[m] exp(2i pi m x / L) + c.c. for m = 1..M/2, plus the real
    mean c[0] (rfft layout, length M//2 + 1).
    """

    grid: Grid1D
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs)
        n = self.grid.M if self.grid.bc == NEUMANN else self.grid.M // 2 + 1
        if c.shape != (n,):
            raise ValueError(f"expected {n} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("spectral coefficients must be finite")
        kind = complex if self.grid.bc == PERIODIC else float
        object.__setattr__(self, "coeffs", _readonly(c.astype(kind)))


def to_spectral(f: Field) -> Spectrum:
    """Transform samples to modal coefficients (exact for resolved fields)."""
    return Spectrum(f.grid, coeffs_of(f))


def from_spectral(s: Spectrum) -> Field:
    """Synthesize grid samples from modal coefficients."""
    return Field(s.grid, samples_of(s.grid, s.coeffs))


def coeffs_of(f: Field) -> np.ndarray:
    """Raw coefficient array of a field (no Spectrum wrapper)."""
    g = f.grid
    if g.bc == NEUMANN:
        c = dct(f.values, type=2) / g.M
        c[0] *= 0.5
        return c
    return np.fft.rfft(f.values) / g.M


def samples_of(grid: Grid1D, coeffs: np.ndarray) -> np.ndarray:
    if grid.bc == NEUMANN:
        y = np.asarray(coeffs, dtype=float) * grid.M
        y = y.copy()
        y[0] *= 2.0
        return idct(y, type=2)
    return np.fft.irfft(np.asarray(coeffs) * grid.M, n=grid.M)


def field_from_function(grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray]) -> Field:
    return Field(grid, np.asarray(fn(grid.points()), dtype=float))


def constant_field(grid: Grid1D, c: float) -> Field:
    return Field(grid, np.full(grid.M, float(c)))


def cosine_mode(grid: Grid1D, k: int, amplitude: float = 1.0) -> Field:
    """A * cos(k pi x / L) on a Neumann grid (k = 0 gives a constant)."""
    if grid.bc != NEUMANN:
        raise ValueError("cosine modes live on Neumann grids")
    if not 0 <= k < grid.M:
        raise ValueError(f"mode index k={k} out of range for M={grid.M}")
    c = np.zeros(grid.M)
    c[k] = amplitude
    return Field(grid, samples_of(grid, c))


def random_cosine_coeffs(rng: np.random.Generator, kmax: int, scale: float = 1.0) -> np.ndarray:
    """Seeded coefficients a_k ~ U[-1, 1] * scale / (k + 1), k = 0..kmax."""
    k = np.arange(kmax + 1)
    return rng.uniform(-1.0, 1.0, kmax + 1) * scale / (k + 1.0)


def random_band(grid: Grid1D, kmax: int, seed: int, l2: float | None = None,
                scale: float = 1.0) -> Field:
    """Random band-limited field with the 1/(k+1) amplitude law.

    Neumann grids draw cosine coefficients; periodic grids draw both cosine
    and sine amplitudes per wavenumber.  With ``l2`` set, the result is
    rescaled to that exact L2 norm.
    """
    hard = grid.M - 1 if grid.bc == NEUMANN else grid.M // 2 - 1
    if kmax < 0 or kmax > hard:
        raise ValueError(f"band limit kmax={kmax} not representable on M={grid.M}")
    rng = np.random.default_rng(seed)
    if grid.bc == NEUMANN:
        c = np.zeros(grid.M)
        c[: kmax + 1] = random_cosine_coeffs(rng, kmax, scale)
        f = Field(grid, samples_of(grid, c))
    else:
        c = np.zeros(grid.M // 2 + 1, dtype=complex)
        c[0] = rng.uniform(-1.0, 1.0) * scale
        for m in range(1, kmax + 1):
            a, b = rng.uniform(-1.0, 1.0, 2) * scale / (m + 1.0)
            # a*cos + b*sin carried by the positive-frequency coefficient
            c[m] = 0.5 * (a - 1j * b)
        f = Field(grid, samples_of(grid, c))
    if l2 is not None:
        norm = l2_norm(f)
        if norm == 0.0:
            raise ValueError("cannot rescale a zero field to a nonzero L2 norm")
        f = Field(grid, f.values * (l2 / norm))
    return f


# ---------------------------------------------------------------------------
# norms and calculus

def l2_sq_of_coeffs(grid: Grid1D, coeffs: np.ndarray) -> float:
    """Squared L2 norm straight from modal coefficients (Parseval)."""
    if grid.bc == NEUMANN:
        return grid.L * (coeffs[0] ** 2 + 0.5 * np.sum(coeffs[1:] ** 2))
    mag = np.abs(coeffs) ** 2
    total = mag[0] + 2.0 * np.sum(mag[1:-1])
    # Nyquist column of rfft is not doubled for even M
    total += (2.0 if grid.M % 2 else 1.0) * mag[-1]
    return grid.L * total


def h1x_sq_of_coeffs(grid: Grid1D, coeffs: np.ndarray) -> float:
    """Squared L2 norm of the derivative from modal coefficients."""
    k = grid.wavenumbers()
    if grid.bc == NEUMANN:
        return (grid.L / 2.0) * np.sum((k[1:] * coeffs[1:]) ** 2)
    mag = (k * np.abs(coeffs)) ** 2
    total = 2.0 * np.sum(mag[1:-1]) + (2.0 if grid.M % 2 else 1.0) * mag[-1]
    return grid.L * total


_l2_sq = l2_sq_of_coeffs
_h1x_sq = h1x_sq_of_coeffs


def l2_norm(f: Field) -> float:
    """L2 norm, evaluated modally (Parseval)."""
    return float(np.sqrt(max(_l2_sq(f.grid, coeffs_of(f)), 0.0)))


def h1x_norm(f: Field) -> float:
    """L2 norm of the derivative, ||f_x||."""
    return float(np.sqrt(max(_h1x_sq(f.grid, coeffs_of(f)), 0.0)))


def h1_norm(f: Field) -> float:
    """Weighted H1 norm: ||f||_H1^2 = ||f||^2 / L^2 + ||f_x||^2."""
    c = coeffs_of(f)
    return float(np.sqrt(_l2_sq(f.grid, c) / f.grid.L ** 2 + _h1x_sq(f.grid, c)))


def l4_pow4(f: Field) -> float:
    """Integral of f^4 over [0, L], dealiased on a refined grid.

    A field resolved by M modes has a quartic with bandwidth < 4M; midpoint
    (Neumann) or trapezoid (periodic) quadrature on the refined grid
    integrates that bandwidth exactly.
    """
    g = f.grid
    c = coeffs_of(f)
    if g.bc == NEUMANN:
        fine = np.zeros(2 * g.M)
        fine[: g.M] = c
        w = samples_of(Grid1D(g.L, 2 * g.M, NEUMANN), fine)
        return float(np.sum(w ** 4) * (g.L / (2 * g.M)))
    fine = np.zeros(2 * g.M + 1, dtype=complex)
    fine[: g.M // 2 + 1] = c
    w = samples_of(Grid1D(g.L, 4 * g.M, PERIODIC), fine)
    return float(np.sum(w ** 4) * (g.L / (4 * g.M)))


def inner(f: Field, g_: Field) -> float:
    """L2 inner product of two fields on the same grid."""
    if f.grid != g_.grid:
        raise ValueError("fields live on different grids")
    g = f.grid
    cf, cg = coeffs_of(f), coeffs_of(g_)
    if g.bc == NEUMANN:
        return float(g.L * (cf[0] * cg[0] + 0.5 * np.sum(cf[1:] * cg[1:])))
    prod = (cf * np.conj(cg)).real
    total = prod[0] + 2.0 * np.sum(prod[1:-1]) + (2.0 if g.M % 2 else 1.0) * prod[-1]
    return float(g.L * total)


def derivative(f: Field) -> Field:
    """Spectral derivative, sampled on the same grid."""
    g = f.grid
    c = coeffs_of(f)
    if g.bc == NEUMANN:
        # d/dx cos(k pi x / L) = -(k pi / L) sin(k pi x / L): a sine series
        s = -(np.arange(g.M) * np.pi / g.L) * c
        vals = idst(np.concatenate([s[1:], [0.0]]) * g.M, type=2)
        return Field(g, vals)
    k = g.wavenumbers()
    dc = 1j * k * c
    if g.M % 2 == 0:
        dc[-1] = 0.0  # Nyquist derivative is not representable as a real field
    return Field(g, samples_of(g, dc))


def eval_field(f: Field, x: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric polynomial through the samples at points x.

    Exact for band-limited fields; this is the point-evaluation map used by
    nodal observations.
    """
    g = f.grid
    c = coeffs_of(f)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if g.bc == NEUMANN:
        k = np.arange(g.M)
        return np.cos(np.outer(x, k) * (np.pi / g.L)) @ c
    m = np.arange(g.M // 2 + 1)
    phase = np.exp(2j * np.pi * np.outer(x, m) / g.L)
    weights = np.full(g.M // 2 + 1, 2.0)
    weights[0] = 1.0
    if g.M % 2 == 0:
        weights[-1] = 1.0
    return (phase @ (weights * c)).real
