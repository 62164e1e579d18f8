"""Finite-rank observation and actuation maps over a uniform cell partition.

Four controller families are supported on the partition J_k = [(k-1)h, kh],
h = L/N:

- ``volume``   local averages, reconstructed as a piecewise-constant field
- ``nodal``    one point value per cell, piecewise-constant reconstruction
- ``fourier``  projection onto the low cosine modes (optionally with mean)
- ``delta``    point observations driving point (distributional) actuators

The first three produce square-integrable interpolants; ``delta`` only
actuates, through a mass-preserving single-cell source.  Volume observation
is the per-cell sample mean (exact for cell-aligned piecewise constants, so
observe and interpolate compose idempotently); nodal and delta observation
evaluate the spectral representation at their points.  Deficits, pairings,
and interpolant norms are exact integrals of the realized interpolant, so
the inequality suites carry no quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    NEUMANN,
    PERIODIC,
    Field,
    Grid1D,
    coeffs_of,
    eval_field,
    samples_of,
)

VOLUME = "volume"
NODAL = "nodal"
FOURIER = "fourier"
DELTA = "delta"

KINDS = (VOLUME, NODAL, FOURIER, DELTA)


def default_points(N: int, L: float) -> tuple[float, ...]:
    """Cell midpoints x_k = (k - 1/2) h, the default observation sites."""
    h = L / N
    return tuple((k + 0.5) * h for k in range(N))


@dataclass(frozen=True)
class InterpolantSpec:
    """Which controller family, its rank N, and its points.

    ``obs_points`` are where nodal/delta controllers measure; ``act_points``
    are where delta controllers force.  Both default to cell midpoints and
    every point must lie in its own cell.  ``include_mean`` extends the
    fourier family's mode range k = 1..N by the k = 0 mean, without which
    constants are invisible to the controller.
    """

    kind: str
    N: int
    L: float
    obs_points: tuple[float, ...] | None = None
    act_points: tuple[float, ...] | None = None
    include_mean: bool = True

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.N < 1:
            raise ValueError(f"controller rank must satisfy N >= 1, got N={self.N}")
        if not (self.L > 0 and np.isfinite(self.L)):
            raise ValueError(f"domain length must be positive, got L={self.L}")
        wants = {"obs_points": self.kind in (NODAL, DELTA), "act_points": self.kind == DELTA}
        for name in ("obs_points", "act_points"):
            pts = getattr(self, name)
            if pts is None:
                if wants[name]:
                    object.__setattr__(self, name, default_points(self.N, self.L))
                continue
            pts = tuple(float(p) for p in pts)
            if len(pts) != self.N:
                raise ValueError(f"{name} must list exactly N={self.N} points")
            h = self.L / self.N
            for k, p in enumerate(pts):
                if not (k * h <= p <= (k + 1) * h):
                    raise ValueError(
                        f"{name}[{k}]={p} lies outside its cell [{k * h}, {(k + 1) * h}]"
                    )
            object.__setattr__(self, name, pts)

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def rank(self) -> int:
        """Number of observation values this spec produces."""
        if self.kind == FOURIER and self.include_mean:
            return self.N + 1
        return self.N


@dataclass(frozen=True)
class Observations:
    """The measurement vector: cell averages, point values, or mode amplitudes."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("observations must be a nonempty 1-D vector")
        if not np.all(np.isfinite(v)):
            raise ValueError("observations must be finite")
        vv = v.copy()
        vv.setflags(write=False)
        object.__setattr__(self, "values", vv)


def gamma_sq(obs: Observations) -> float:
    """Observation energy: the sum of squared measurement values."""
    return float(np.sum(obs.values ** 2))


# ---------------------------------------------------------------------------
# exact geometry matrices (cosine basis)

def cell_average_matrix(spec: InterpolantSpec, n_modes: int) -> np.ndarray:
    """C[k, m] = mean of cos(m pi x / L) over cell J_k, exact integrals."""
    L, N, h = spec.L, spec.N, spec.h
    C = np.zeros((N, n_modes))
    C[:, 0] = 1.0
    edges = np.arange(N + 1) * h
    for m in range(1, n_modes):
        s = np.sin(m * np.pi * edges / L)
        C[:, m] = (L / (m * np.pi * h)) * (s[1:] - s[:-1])
    return C


def cell_mean_matrix(spec: InterpolantSpec, grid: Grid1D) -> np.ndarray:
    """Coefficient-space form of the per-cell sample mean used by observe."""
    _require_neumann(spec, grid)
    if grid.M % spec.N != 0:
        raise ValueError(f"M={grid.M} must be a multiple of N={spec.N} for cell-aligned averages")
    reps = grid.M // spec.N
    basis = np.cos(np.outer(grid.points(), np.arange(grid.M)) * (np.pi / grid.L))
    return basis.reshape(spec.N, reps, grid.M).mean(axis=1)


def point_eval_matrix(points: np.ndarray, L: float, n_modes: int) -> np.ndarray:
    """E[k, m] = cos(m pi x_k / L)."""
    pts = np.asarray(points, dtype=float)
    return np.cos(np.outer(pts, np.arange(n_modes)) * (np.pi / L))


def chi_projection_matrix(spec: InterpolantSpec, n_modes: int) -> np.ndarray:
    """B[m, k] = cosine coefficients of the indicator of cell J_k."""
    C = cell_average_matrix(spec, n_modes)
    B = np.zeros((n_modes, spec.N))
    B[0, :] = spec.h / spec.L
    B[1:, :] = (2.0 * spec.h / spec.L) * C[:, 1:].T
    return B


def piecewise_projection_matrix(spec: InterpolantSpec, grid: Grid1D) -> np.ndarray:
    """Coefficient-space operator of the resolved-band projection of I_h.

    For the volume and nodal families the interpolant is piecewise constant;
    this returns G with coeffs(P_M I_h u) = G @ coeffs(u), where P_M is the
    L2 projection onto the grid's cosine band.  Pairings of G @ c against any
    resolved field equal the exact continuum pairings of I_h.
    """
    _require_neumann(spec, grid)
    if spec.kind == VOLUME:
        inner_map = cell_mean_matrix(spec, grid)
    elif spec.kind == NODAL:
        inner_map = point_eval_matrix(np.asarray(spec.obs_points), spec.L, grid.M)
    else:
        raise ValueError(f"no piecewise projection for kind {spec.kind!r}")
    return chi_projection_matrix(spec, grid.M) @ inner_map


def fourier_mode_slice(spec: InterpolantSpec) -> slice:
    """Retained cosine-mode indices of the fourier family."""
    return slice(0 if spec.include_mean else 1, spec.N + 1)


def _require_neumann(spec: InterpolantSpec, grid: Grid1D) -> None:
    if grid.bc != NEUMANN:
        raise ValueError(f"{spec.kind!r} interpolants require a Neumann grid")
    if abs(grid.L - spec.L) > 1e-14 * spec.L:
        raise ValueError(f"grid length {grid.L} does not match spec length {spec.L}")


def _check_rank_resolved(spec: InterpolantSpec, grid: Grid1D) -> None:
    if spec.N > grid.M // 4:
        raise ValueError(
            f"controller rank N={spec.N} exceeds M/4={grid.M // 4}: not resolved by the grid"
        )


# ---------------------------------------------------------------------------
# observation / reconstruction / actuation

def observe(f: Field, spec: InterpolantSpec) -> Observations:
    """Measure a field: cell averages, point values, or mode amplitudes.

    Volume averages are per-cell means of the samples (midpoint quadrature,
    which is exact for cell-aligned piecewise constants and for linear
    profiles, so observe and interpolate compose idempotently); nodal and
    delta kinds evaluate the spectral representation at their points.
    """
    grid = f.grid
    _check_rank_resolved(spec, grid)
    if spec.kind == VOLUME:
        _require_neumann(spec, grid)
        if grid.M % spec.N != 0:
            raise ValueError(
                f"M={grid.M} must be a multiple of N={spec.N} for cell-aligned averages"
            )
        return Observations(f.values.reshape(spec.N, -1).mean(axis=1))
    if spec.kind in (NODAL, DELTA):
        if abs(grid.L - spec.L) > 1e-14 * spec.L:
            raise ValueError(f"grid length {grid.L} does not match spec length {spec.L}")
        return Observations(eval_field(f, np.asarray(spec.obs_points)))
    # fourier: the coefficient convention already matches (2/L) int f cos(k..)
    _require_neumann(spec, grid)
    return Observations(coeffs_of(f)[fourier_mode_slice(spec)])


def interpolate(obs: Observations, spec: InterpolantSpec, grid: Grid1D) -> Field:
    """Realize the interpolant I_h on the grid.

    Piecewise-constant families require M to be a multiple of N so that every
    grid cell lies wholly inside one J_k and the indicators are sampled
    exactly.  The delta family has no square-integrable interpolant; see
    :func:`actuate_delta`.
    """
    if spec.kind == DELTA:
        raise ValueError("delta controllers do not define an L2 interpolant")
    if obs.values.shape != (spec.rank,):
        raise ValueError(f"expected {spec.rank} observations, got {obs.values.shape}")
    if spec.kind == FOURIER:
        _require_neumann(spec, grid)
        c = np.zeros(grid.M)
        c[fourier_mode_slice(spec)] = obs.values
        return Field(grid, samples_of(grid, c))
    _require_neumann(spec, grid)
    if grid.M % spec.N != 0:
        raise ValueError(f"M={grid.M} must be a multiple of N={spec.N} for exact indicators")
    reps = grid.M // spec.N
    return Field(grid, np.repeat(obs.values, reps))


def actuate_delta(obs: Observations, spec: InterpolantSpec, grid: Grid1D) -> Field:
    """Grid realization of h * sum_k obs_k delta(x - x_k) on a periodic grid.

    Each point source is deposited in the single grid cell containing its
    actuation point (value obs_k * h / dx), so its discrete integral against
    any test field approximates h * sum_k obs_k * phi(x_k) to first order in
    dx, and exactly when x_k falls on a grid point.
    """
    if spec.kind != DELTA:
        raise ValueError("actuate_delta requires a delta-kind spec")
    if grid.bc != PERIODIC:
        raise ValueError("delta actuation requires a periodic grid")
    if obs.values.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} observations, got {obs.values.shape}")
    idx = delta_cell_indices(spec, grid)
    out = np.zeros(grid.M)
    out[idx] = obs.values * (spec.h / grid.dx)
    return Field(grid, out)


def delta_cell_indices(spec: InterpolantSpec, grid: Grid1D) -> np.ndarray:
    """Grid cell (nearest sample) holding each actuation point; must be distinct."""
    pts = np.asarray(spec.act_points)
    idx = np.rint(pts / grid.dx).astype(int) % grid.M
    if len(np.unique(idx)) != len(idx):
        raise ValueError("two actuation points fall in the same grid cell")
    return idx


# ---------------------------------------------------------------------------
# derived scalar quantities (exact integrals, no quadrature error)

def defect(f: Field, spec: InterpolantSpec) -> float:
    """Interpolation deficit ||f - I_h(f)||_L2.

    The squared deficit expands into the field's norm, the cross term
    against the piecewise-constant (or modal) reconstruction, and the
    reconstruction's norm; every term is an exact integral of the
    trigonometric representation, so no quadrature error enters.
    """
    if spec.kind == DELTA:
        raise ValueError("delta controllers do not define an interpolation deficit")
    grid = f.grid
    _require_neumann(spec, grid)
    _check_rank_resolved(spec, grid)
    c = coeffs_of(f)
    L = spec.L
    l2_sq = L * (c[0] ** 2 + 0.5 * np.sum(c[1:] ** 2))
    if spec.kind == FOURIER:
        sl = fourier_mode_slice(spec)
        d_sq = l2_sq - interpolant_norm_sq_from_modes(c[sl], spec)
    else:
        v = observe(f, spec).values
        fbar = cell_average_matrix(spec, grid.M) @ c
        d_sq = l2_sq - 2.0 * spec.h * np.sum(v * fbar) + spec.h * np.sum(v ** 2)
    return float(np.sqrt(max(d_sq, 0.0)))


def interpolant_norm_sq_from_modes(values: np.ndarray, spec: InterpolantSpec) -> float:
    L = spec.L
    if spec.include_mean:
        return float(L * (values[0] ** 2 + 0.5 * np.sum(values[1:] ** 2)))
    return float(0.5 * L * np.sum(values ** 2))


def interpolant_l2(obs: Observations, spec: InterpolantSpec, grid: Grid1D | None = None) -> float:
    """L2 norm of the realized interpolant (discrete norm for delta sources)."""
    v = obs.values
    if spec.kind in (VOLUME, NODAL):
        return float(np.sqrt(spec.h * np.sum(v ** 2)))
    if spec.kind == FOURIER:
        return float(np.sqrt(interpolant_norm_sq_from_modes(v, spec)))
    if grid is None:
        raise ValueError("delta realization norm needs the grid")
    return float(np.sqrt(spec.h ** 2 / grid.dx * np.sum(v ** 2)))


def pairing(f: Field, spec: InterpolantSpec) -> float:
    """Continuum control pairing <I_h(f), f> (exact integrals).

    For the delta family this is the distributional action
    h * sum_k f(xbar_k) f(x_k).
    """
    grid = f.grid
    c = coeffs_of(f)
    if spec.kind in (VOLUME, NODAL):
        _require_neumann(spec, grid)
        v = observe(f, spec).values
        fbar = cell_average_matrix(spec, grid.M) @ c
        return float(spec.h * np.sum(v * fbar))
    if spec.kind == FOURIER:
        _require_neumann(spec, grid)
        sl = fourier_mode_slice(spec)
        return interpolant_norm_sq_from_modes(c[sl], spec)
    f_obs = eval_field(f, np.asarray(spec.obs_points))
    f_act = eval_field(f, np.asarray(spec.act_points))
    return float(spec.h * np.sum(f_obs * f_act))
