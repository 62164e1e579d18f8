"""Independent references: closed-form solutions and brute-force constants.

Nothing here reuses the solver's code paths.  Linear-mode and logistic
solutions validate the integrator; the empirical interpolation-constant
search brackets the certified constants from below by random trial plus
coordinate ascent, entirely in coefficient space with exact integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import ClosedLoopParams
from .fields import Field, Grid1D, random_cosine_coeffs
from .interpolants import (
    DELTA,
    FOURIER,
    NODAL,
    VOLUME,
    InterpolantSpec,
    cell_average_matrix,
    point_eval_matrix,
)


@dataclass(frozen=True)
class TrialEnsemble:
    """Seeded random cosine sums with the 1/(k+1) amplitude law."""

    seed: int
    n_trials: int
    kmax: int
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.n_trials < 1:
            raise ValueError("ensemble needs at least one trial")
        if self.kmax < 0:
            raise ValueError("kmax must be nonnegative")

    def coefficient_trials(self):
        rng = np.random.default_rng(self.seed)
        for _ in range(self.n_trials):
            yield random_cosine_coeffs(rng, self.kmax, self.scale)


def analytic_linear_mode(k: int, A: float, t: float, p: ClosedLoopParams,
                         grid: Grid1D) -> Field:
    """Exact single-mode solution of the linearized open loop.

    The mode A cos(k pi x / L) evolves by exp((alpha - nu (pi k / L)^2) t):
    growth whenever nu (pi k / L)^2 < alpha.
    """
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    lam = p.alpha - p.nu * (np.pi * k / p.L) ** 2
    amp = A * np.exp(lam * t)
    return Field(grid, amp * np.cos(k * np.pi * grid.points() / grid.L))


def logistic_constant_state(c0: float, t: float, p: ClosedLoopParams) -> float:
    """Exact spatially constant open-loop state solving u' = alpha u - u^3.

    Written with decaying exponentials only, so large alpha * t cannot
    overflow: u(t) = sqrt(alpha) c0 / sqrt(alpha e^{-2 alpha t}
    + c0^2 (1 - e^{-2 alpha t})).
    """
    if c0 == 0.0:
        return 0.0
    decay = np.exp(-2.0 * p.alpha * t)
    return float(np.sqrt(p.alpha) * c0 / np.sqrt(p.alpha * decay + c0 ** 2 * (1.0 - decay)))


# ---------------------------------------------------------------------------
# empirical interpolation constants

def _ratio_fn(spec: InterpolantSpec, n_modes: int):
    """defect / (h ||phi_x||) as a function of a coefficient vector.

    Uses exact integrals of the true interpolant (analytic cell averages),
    so the returned value is a lower bound on the sharp constant of the
    family itself, free of quadrature effects.
    """
    L, h = spec.L, spec.h
    k = np.arange(n_modes)
    deriv_w = (L / 2.0) * (k * np.pi / L) ** 2

    def l2_sq(a):
        return L * (a[0] ** 2 + 0.5 * np.sum(a[1:] ** 2))

    if spec.kind == VOLUME:
        C = cell_average_matrix(spec, n_modes)

        def defect_sq(a):
            return l2_sq(a) - h * np.sum((C @ a) ** 2)

    elif spec.kind == NODAL:
        C = cell_average_matrix(spec, n_modes)
        E = point_eval_matrix(np.asarray(spec.obs_points), L, n_modes)

        def defect_sq(a):
            fx = E @ a
            return l2_sq(a) - 2.0 * h * np.sum(fx * (C @ a)) + h * np.sum(fx ** 2)

    elif spec.kind == FOURIER:
        lo = 0 if spec.include_mean else None

        def defect_sq(a):
            tail = a[spec.N + 1:]
            d = 0.5 * L * np.sum(tail ** 2)
            if lo is None:
                d += L * a[0] ** 2
            return d

    else:
        raise ValueError(f"no interpolation constant for kind {spec.kind!r}")

    def ratio(a):
        dx_sq = float(np.sum(deriv_w * a ** 2))
        if dx_sq <= 0.0:
            return None
        d_sq = max(defect_sq(a), 0.0)
        return float(np.sqrt(d_sq) / (h * np.sqrt(dx_sq)))

    return ratio


def _coordinate_ascent(ratio, a0: np.ndarray, iterations: int = 100) -> float:
    """Greedy per-coordinate sharpening with step halving."""
    a = a0.copy()
    best = ratio(a)
    step = 0.5
    scale = np.abs(a) + 0.1 * max(np.max(np.abs(a)), 1e-12)
    for _ in range(iterations):
        improved = False
        for i in range(len(a)):
            for sign in (1.0, -1.0):
                trial = a.copy()
                trial[i] += sign * step * scale[i]
                r = ratio(trial)
                if r is not None and r > best:
                    best, a = r, trial
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-6:
                break
    return best


def empirical_bh_constant(spec: InterpolantSpec, ens: TrialEnsemble) -> float:
    """Largest observed defect / (h ||phi_x||) over the ensemble, refined.

    A lower bound on the sharp constant of the family; it must never exceed
    the certified constant used by the condition checker.
    """
    if spec.kind == DELTA:
        raise ValueError("delta controllers have no interpolation constant")
    ratio = _ratio_fn(spec, ens.kmax + 1)
    best = None
    best_a = None
    for a in ens.coefficient_trials():
        r = ratio(a)
        if r is None:
            continue
        if best is None or r > best:
            best, best_a = r, a
    if best is None:
        raise ValueError("degenerate ensemble: every trial has a vanishing derivative")
    return _coordinate_ascent(ratio, best_a)
