"""Trajectory analysis: decay-rate fits, bound verification, mode counting,
absorbing-ball values, and minimal-controller-rank sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .dynamics import (
    BlowupError,
    ClosedLoopParams,
    ICSpec,
    SimConfig,
    TrajectoryRecord,
    certified_c,
    simulate,
    stability_limit,
)
from .fields import Grid1D
from .interpolants import VOLUME, InterpolantSpec

UNDERFLOW_FLOOR = 1e-280


@dataclass(frozen=True)
class DecayFit:
    """Log-linear fit of the squared L2 norm: ||u||^2 ~ C exp(-rate * t)."""

    rate: float
    window: tuple[float, float]
    residual: float


class NoFitError(ValueError):
    """The requested fit window is too short or the signal sits at the floor."""


class NotStabilizedError(RuntimeError):
    """No controller rank in the scanned range met the decay criterion."""

    def __init__(self, terminal_ratios: dict[int, float]):
        super().__init__(
            "no N in the scanned range stabilized the loop; terminal ratios: "
            + ", ".join(f"N={n}: {r:.3g}" for n, r in sorted(terminal_ratios.items()))
        )
        self.terminal_ratios = dict(terminal_ratios)


def linear_growth_rate(k: int, p: ClosedLoopParams) -> float:
    """Decay exponent nu (pi k / L)^2 - alpha of mode k about zero (negative
    means the mode grows)."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    return float(p.nu * (np.pi * k / p.L) ** 2 - p.alpha)


def unstable_mode_count(p: ClosedLoopParams) -> int:
    """Number of modes k >= 0 with negative decay exponent.

    The exponent is increasing in k, so counting stops at the first stable
    mode; k = 0 always grows at rate alpha > 0.
    """
    count = 0
    k = 0
    while linear_growth_rate(k, p) < 0.0:
        count += 1
        k += 1
    return count


def fit_decay_rate(traj: TrajectoryRecord, t0: float) -> DecayFit:
    """Least-squares slope of log ||u||^2 on [t0, end of valid window]."""
    t = np.asarray(traj.times)
    e = np.asarray(traj.l2) ** 2
    start = int(np.searchsorted(t, t0))
    t, e = t[start:], e[start:]
    dead = np.nonzero(e <= UNDERFLOW_FLOOR)[0]
    if dead.size:
        t, e = t[: dead[0]], e[: dead[0]]
    if len(t) < 10:
        raise NoFitError(
            f"only {len(t)} samples past t0={t0} above the underflow floor; need >= 10"
        )
    logs = np.log(e)
    slope, intercept = np.polyfit(t, logs, 1)
    resid = float(np.sqrt(np.mean((slope * t + intercept - logs) ** 2)))
    return DecayFit(rate=float(-slope), window=(float(t[0]), float(t[-1])), residual=resid)


def verify_decay_bound(traj: TrajectoryRecord, r: float, slack: float) -> bool:
    """Check ||u(t)||^2 <= (1 + slack) e^{-r t} ||u(0)||^2 at every record."""
    if not np.isfinite(r):
        raise ValueError("decay rate must be finite")
    t = np.asarray(traj.times)
    e = np.asarray(traj.l2) ** 2
    bound = (1.0 + slack) * np.exp(-r * t) * e[0]
    return bool(np.all(e <= bound))


def absorbing_bounds(p: ClosedLoopParams) -> tuple[float, float]:
    """Asymptotic L2 and derivative bounds (R0^2, R1^2) of the closed loop.

    R0^2 = (alpha + nu/L^2)^2 L^3 / nu and
    R1^2 = (1/nu) [ (alpha + nu/L^2) L + R0^2 ] [ 1 + 2 (alpha + mu^2 c^2 h^2 / (2 nu)) ].
    """
    nu, alpha, L, mu = p.nu, p.alpha, p.L, p.mu
    r0_sq = (alpha + nu / L ** 2) ** 2 * L ** 3 / nu
    if p.open_loop:
        gain_term = 0.0
    else:
        c = certified_c(p.spec)
        if c is None:
            raise ValueError(f"no certified interpolation constant for kind {p.spec.kind!r}")
        gain_term = mu ** 2 * c ** 2 * p.spec.h ** 2 / (2.0 * nu)
    r1_sq = (1.0 / nu) * ((alpha + nu / L ** 2) * L + r0_sq) * (1.0 + 2.0 * (alpha + gain_term))
    return float(r0_sq), float(r1_sq)


def absorbing_entry_time(p: ClosedLoopParams, u0_l2_sq: float, margin: float = 0.05) -> float:
    """Time at which the a-priori envelope enters (1 + margin) R0^2.

    The envelope K0(t) = R0^2 + (||u(0)||^2 - R0^2) e^{-nu t / L^2} dominates
    ||u(t)||^2 whenever the existence hypotheses hold, so past this time the
    trajectory must sit inside the inflated absorbing ball.
    """
    r0_sq, _ = absorbing_bounds(p)
    excess = u0_l2_sq - r0_sq
    if excess <= margin * r0_sq:
        return 0.0
    return float(p.L ** 2 / p.nu * math.log(excess / (margin * r0_sq)))


# ---------------------------------------------------------------------------
# minimal stabilizing controller rank

def sweep_grid(N: int, kmax: int, L: float = 1.0, m_min: int = 64) -> Grid1D:
    """Smallest Neumann grid that is a multiple of 4N, resolves the IC band,
    and has at least m_min cells."""
    base = 4 * N
    target = max(m_min, 8 * kmax, base)
    M = base * math.ceil(target / base)
    return Grid1D(L, M)


def sweep_cell_config(
    nu: float, alpha: float, L: float, mu: float, N: int,
    *, kind: str = VOLUME, ic_seed: int = 0, ic_kmax: int = 2,
    ic_amplitude: float = 1.0, safety: float = 0.4,
) -> tuple[SimConfig, ClosedLoopParams]:
    """Deterministic run setup for one (alpha, N) stabilization cell.

    Fixed random band initial state, final time 20/alpha, and a step size
    from the explicit-part bound at the saturated amplitude
    max(2 sqrt(alpha), 2 max|u0|), so cells that merely saturate (instead of
    decaying) still integrate cleanly to T.
    """
    spec = InterpolantSpec(kind, N, L)
    p = ClosedLoopParams(nu=nu, alpha=alpha, L=L, mu=mu, spec=spec)
    grid = sweep_grid(N, ic_kmax, L)
    ic = ICSpec("random-band", seed=ic_seed, kmax=ic_kmax, amplitude=ic_amplitude)
    u0 = ic.realize(grid)
    u_cap = max(2.0 * math.sqrt(alpha), 2.0 * float(np.max(np.abs(u0.values))))
    T = 20.0 / alpha
    dt = safety * stability_limit(p, u_cap)
    n_steps = max(int(math.ceil(T / dt)), 10)
    cfg = SimConfig(grid=grid, dt=T / n_steps, T=T, ic=ic, record_every=n_steps)
    return cfg, p


def terminal_ratio(cfg: SimConfig, p: ClosedLoopParams) -> float:
    """||u(T)|| / ||u(0)||; infinite when the run blows up or trips the
    adaptive step limit."""
    try:
        traj = simulate(cfg, p)
    except BlowupError:
        return float("inf")
    if traj.l2[0] == 0.0:
        return 0.0
    return float(traj.l2[-1] / traj.l2[0])


def minimal_stabilizing_N(
    p_base: ClosedLoopParams,
    mu_rule: Callable[[float], float],
    N_range: Iterable[int],
    decide: Callable[[float], bool] | None = None,
    *,
    kind: str = VOLUME,
    ic_seed: int = 0,
    ic_kmax: int = 2,
    ic_amplitude: float = 1.0,
    ratio_threshold: float = 1e-4,
) -> int:
    """Smallest rank N whose closed loop meets the terminal-decay criterion.

    Runs from a fixed random band initial state to T = 20 / alpha and asks
    for ||u(T)|| <= 1e-4 ||u(0)|| (a scale-free criterion, far below any
    transient overshoot).  The scan is linear in N: the criterion is not
    assumed monotone.  When nothing in the range stabilizes, the error
    carries the per-N terminal ratios.
    """
    ns = sorted(set(int(n) for n in N_range))
    if not ns:
        raise ValueError("N_range must be nonempty")
    if decide is None:
        decide = lambda ratio: ratio <= ratio_threshold
    ratios: dict[int, float] = {}
    for N in ns:
        cfg, p = sweep_cell_config(
            p_base.nu, p_base.alpha, p_base.L, float(mu_rule(p_base.alpha)), N,
            kind=kind, ic_seed=ic_seed, ic_kmax=ic_kmax, ic_amplitude=ic_amplitude,
        )
        ratios[N] = terminal_ratio(cfg, p)
        if decide(ratios[N]):
            return N
    raise NotStabilizedError(ratios)
