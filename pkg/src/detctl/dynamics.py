"""Time integration of the scalar reaction-diffusion loop u_t = nu u_xx + alpha u - u^3 - mu I_h(u).

The stiff diffusion term is advanced exactly mode by mode; the reaction and
control terms are integrated explicitly (exponential Euler by default, a
two-stage exponential Runge-Kutta scheme optionally).  The cubic is always
evaluated on a padded grid, so the resolved band never sees aliasing from
the tripled bandwidth.

Piecewise-constant controllers enter through their resolved-band projection,
whose pairing against any resolved field equals the exact continuum pairing;
delta controllers enter as mass-preserving single-cell sources on periodic
grids.  ``check_conditions`` reports, per stability regime, whether the
closed-loop hypotheses hold and the decay exponent they predict for the
squared L2 norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fields, interpolants
from .fields import Field, Grid1D, coeffs_of, samples_of
from .interpolants import DELTA, FOURIER, NODAL, VOLUME, InterpolantSpec, Observations


@dataclass(frozen=True)
class ClosedLoopParams:
    """Equation and feedback parameters; ``spec=None`` means open loop."""

    nu: float
    alpha: float
    L: float
    mu: float = 0.0
    spec: InterpolantSpec | None = None

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise ValueError(f"diffusion coefficient must be positive, got nu={self.nu}")
        if not self.alpha > 0:
            raise ValueError(f"instability coefficient must be positive, got alpha={self.alpha}")
        if not self.L > 0:
            raise ValueError(f"domain length must be positive, got L={self.L}")
        if not self.mu >= 0:
            raise ValueError(f"feedback gain must be nonnegative, got mu={self.mu}")
        if self.spec is not None and abs(self.spec.L - self.L) > 1e-14 * self.L:
            raise ValueError(f"interpolant spec length {self.spec.L} differs from L={self.L}")

    @property
    def open_loop(self) -> bool:
        return self.mu == 0.0 or self.spec is None


SINGLE_MODE = "single-mode"
RANDOM_BAND = "random-band"
CONSTANT = "constant"


@dataclass(frozen=True)
class ICSpec:
    """Named initial-condition presets.

    - single-mode(k, amplitude): amplitude * cos(k pi x / L) (Neumann) or
      amplitude * cos(2 pi k x / L) (periodic)
    - random-band(seed, kmax, amplitude): seeded cosine/Fourier sum with the
      1/(k+1) amplitude law, rescaled to L2 norm ``amplitude``
    - constant(value)
    """

    kind: str
    k: int | None = None
    amplitude: float | None = None
    seed: int | None = None
    kmax: int | None = None
    value: float | None = None

    def __post_init__(self) -> None:
        if self.kind == SINGLE_MODE:
            if self.k is None or self.k < 0 or self.amplitude is None:
                raise ValueError("single-mode IC needs k >= 0 and an amplitude")
        elif self.kind == RANDOM_BAND:
            if self.seed is None or self.kmax is None or self.amplitude is None:
                raise ValueError("random-band IC needs seed, kmax, and amplitude")
            if self.kmax < 0:
                raise ValueError("random-band IC needs kmax >= 0")
        elif self.kind == CONSTANT:
            if self.value is None:
                raise ValueError("constant IC needs a value")
        else:
            raise ValueError(f"unknown IC kind {self.kind!r}")

    def realize(self, grid: Grid1D) -> Field:
        if self.kind == CONSTANT:
            return fields.constant_field(grid, self.value)
        if self.kind == SINGLE_MODE:
            if grid.bc == fields.NEUMANN:
                return fields.cosine_mode(grid, self.k, self.amplitude)
            return fields.field_from_function(
                grid, lambda x: self.amplitude * np.cos(2 * np.pi * self.k * x / grid.L)
            )
        if self.kmax > grid.M // 8:
            raise ValueError(
                f"random-band kmax={self.kmax} exceeds M/8={grid.M // 8}: cubic underresolved"
            )
        return fields.random_band(grid, self.kmax, self.seed, l2=self.amplitude)


@dataclass(frozen=True)
class SimConfig:
    grid: Grid1D
    dt: float
    T: float
    ic: ICSpec
    record_every: int = 1
    scheme: str = "etd1"

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"time step must be positive, got dt={self.dt}")
        if not self.T > self.dt:
            raise ValueError(f"final time must exceed dt, got T={self.T}")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")
        if self.scheme not in ("etd1", "etdrk2"):
            raise ValueError(f"scheme must be 'etd1' or 'etdrk2', got {self.scheme!r}")


@dataclass
class TrajectoryRecord:
    """Recorded norm and observation series of one run."""

    times: np.ndarray
    l2: np.ndarray
    h1x: np.ndarray
    h1: np.ndarray
    l4p4: np.ndarray
    gamma2: np.ndarray
    ih_l2: np.ndarray
    energy_residual: np.ndarray
    pairing: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


class BlowupError(RuntimeError):
    """Integration failed; carries the failure time and any partial record."""

    def __init__(self, time: float, reason: str, record: TrajectoryRecord | None = None):
        super().__init__(f"integration failed at t={time:.6g}: {reason}")
        self.time = time
        self.reason = reason
        self.record = record


def stability_limit(p: ClosedLoopParams, max_abs_u: float) -> float:
    """Explicit-part step bound 0.5 / (alpha + 3 max|u|^2 + mu)."""
    return 0.5 / (p.alpha + 3.0 * max_abs_u ** 2 + p.mu)


def _phi1(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-7
    safe = np.where(small, 1.0, z)
    out = np.expm1(safe) / safe
    return np.where(small, 1.0 + z / 2.0 + z ** 2 / 6.0, out)


def _phi2(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-5
    safe = np.where(small, 1.0, z)
    out = (np.expm1(safe) - safe) / safe ** 2
    return np.where(small, 0.5 + z / 6.0 + z ** 2 / 24.0, out)


def _check_bc(p: ClosedLoopParams, grid: Grid1D) -> None:
    if p.open_loop:
        return
    kind = p.spec.kind
    if kind == DELTA and grid.bc != fields.PERIODIC:
        raise ValueError("delta-nodal feedback requires a periodic grid")
    if kind in (VOLUME, NODAL, FOURIER) and grid.bc != fields.NEUMANN:
        raise ValueError(f"{kind!r} feedback requires a Neumann grid")


class Stepper:
    """Precomputed one-step map for a fixed (grid, params, dt, scheme)."""

    def __init__(self, grid: Grid1D, p: ClosedLoopParams, dt: float, scheme: str = "etd1"):
        _check_bc(p, grid)
        self.grid = grid
        self.p = p
        self.dt = dt
        self.scheme = scheme
        k = grid.wavenumbers()
        z = -p.nu * k ** 2 * dt
        self.decay = np.exp(z)
        self.w1 = dt * _phi1(z)
        self.w2 = dt * _phi2(z)
        self._setup_control()
        if grid.bc == fields.NEUMANN:
            self._pad = np.zeros(2 * grid.M)
            self._fine = Grid1D(grid.L, 2 * grid.M, fields.NEUMANN)
        else:
            self._pad = np.zeros(2 * grid.M + 1, dtype=complex)
            self._fine = Grid1D(grid.L, 4 * grid.M, fields.PERIODIC)

    def _setup_control(self) -> None:
        p, grid = self.p, self.grid
        self._G: np.ndarray | None = None
        self._fmask: np.ndarray | None = None
        self._delta: tuple | None = None
        self._obs_eval: np.ndarray | None = None
        self._cell_avg: np.ndarray | None = None
        if p.open_loop:
            return
        spec = p.spec
        if spec.kind in (VOLUME, NODAL):
            self._G = interpolants.piecewise_projection_matrix(spec, grid)
        elif spec.kind == FOURIER:
            mask = np.zeros(grid.M)
            mask[interpolants.fourier_mode_slice(spec)] = 1.0
            self._fmask = mask
        else:
            idx = interpolants.delta_cell_indices(spec, grid)
            m = np.arange(grid.M // 2 + 1)
            obs_phase = np.exp(2j * np.pi * np.outer(np.asarray(spec.obs_points), m) / grid.L)
            weights = np.full(grid.M // 2 + 1, 2.0)
            weights[0] = 1.0
            if grid.M % 2 == 0:
                weights[-1] = 1.0
            obs_mat = obs_phase * weights          # (E @ c).real = u(obs_points)
            src = np.exp(-2j * np.pi * np.outer(m, idx) / grid.M)
            src *= spec.h / (grid.dx * grid.M)     # rfft coeffs of unit cell sources
            self._delta = (obs_mat, src, idx)

    def control_coeffs(self, c: np.ndarray) -> np.ndarray:
        """Coefficients of I_h(u) for the active controller family."""
        if self._G is not None:
            return self._G @ c
        if self._fmask is not None:
            return self._fmask * c
        obs_mat, src, _ = self._delta
        obs = (obs_mat @ c).real
        return src @ obs

    def observations(self, c: np.ndarray, u_samples: np.ndarray | None = None) -> np.ndarray | None:
        if self.p.open_loop:
            return None
        spec = self.p.spec
        if spec.kind == VOLUME:
            u = samples_of(self.grid, c) if u_samples is None else u_samples
            return u.reshape(spec.N, -1).mean(axis=1)
        if spec.kind == NODAL:
            if self._obs_eval is None:
                self._obs_eval = interpolants.point_eval_matrix(
                    np.asarray(spec.obs_points), spec.L, self.grid.M
                )
            return self._obs_eval @ c
        if spec.kind == FOURIER:
            return c[interpolants.fourier_mode_slice(spec)].copy()
        obs_mat, _, _ = self._delta
        return (obs_mat @ c).real

    def fine_samples(self, c: np.ndarray) -> tuple[np.ndarray, float]:
        """Samples on the dealiasing grid and its quadrature weight."""
        self._pad[: c.shape[0]] = c
        w = samples_of(self._fine, self._pad)
        return w, self.grid.L / self._fine.M

    def cube(self, c: np.ndarray) -> tuple[np.ndarray, float]:
        """Dealiased coefficients of u^3 and max|u| on the padded grid."""
        self._pad[: c.shape[0]] = c
        w = samples_of(self._fine, self._pad)
        max_abs = float(np.max(np.abs(w)))
        cubed = coeffs_of(_raw_field(self._fine, w ** 3))
        return cubed[: c.shape[0]], max_abs

    def nonlin(self, c: np.ndarray) -> tuple[np.ndarray, float]:
        cubed, max_abs = self.cube(c)
        out = self.p.alpha * c - cubed
        if not self.p.open_loop:
            out = out - self.p.mu * self.control_coeffs(c)
        return out, max_abs

    def advance(self, c: np.ndarray) -> tuple[np.ndarray, float]:
        """One step; returns (new coefficients, max|u| before the step)."""
        n0, max_abs = self.nonlin(c)
        limit = stability_limit(self.p, max_abs)
        if self.dt > limit:
            raise BlowupError(np.nan, f"dt={self.dt:.3g} exceeds the stability limit {limit:.3g}")
        pred = self.decay * c + self.w1 * n0
        if self.scheme == "etd1":
            return pred, max_abs
        n1, _ = self.nonlin(pred)
        return pred + self.w2 * (n1 - n0), max_abs


def _raw_field(grid: Grid1D, values: np.ndarray) -> Field:
    # internal fast path: skip finiteness validation inside hot loops
    f = object.__new__(Field)
    object.__setattr__(f, "grid", grid)
    object.__setattr__(f, "values", values)
    return f


def rhs(u: Field, p: ClosedLoopParams) -> Field:
    """Instantaneous right-hand side nu u_xx + alpha u - u^3 - mu I_h(u).

    Piecewise-constant control terms enter through their resolved-band
    projection (all integrals against resolved fields are exact); the delta
    family enters as its single-cell grid realization.
    """
    _check_bc(p, u.grid)
    st = Stepper(u.grid, p, dt=1.0)
    c = coeffs_of(u)
    k = u.grid.wavenumbers()
    cubed, _ = st.cube(c)
    out = -p.nu * k ** 2 * c + p.alpha * c - cubed
    if not p.open_loop:
        out = out - p.mu * st.control_coeffs(c)
    return Field(u.grid, samples_of(u.grid, out))


def step(u: Field, p: ClosedLoopParams, dt: float, scheme: str = "etd1") -> Field:
    """Advance one time step (throwaway stepper; loops should use simulate)."""
    st = Stepper(u.grid, p, dt, scheme)
    c, _ = st.advance(coeffs_of(u))
    vals = samples_of(u.grid, c)
    if not np.all(np.isfinite(vals)):
        raise BlowupError(dt, "non-finite state after step")
    return Field(u.grid, vals)


def simulate(cfg: SimConfig, p: ClosedLoopParams) -> TrajectoryRecord:
    """Integrate to T and record norms, observation energy, and the energy residual.

    The residual series is assembled afterwards from the recorded quantities:
    |d/dt ||u||^2 / 2 + nu ||u_x||^2 - alpha ||u||^2 + ||u||_L4^4 + mu <I_h u, u>|,
    with centered differencing inside the record and one-sided stencils at
    its ends.
    """
    grid = cfg.grid
    _check_bc(p, grid)
    if abs(grid.L - p.L) > 1e-14 * p.L:
        raise ValueError(f"grid length {grid.L} differs from params length {p.L}")
    st = Stepper(grid, p, cfg.dt, cfg.scheme)
    u0 = cfg.ic.realize(grid)
    c = coeffs_of(u0)

    n_steps = int(round(cfg.T / cfg.dt))
    rec_steps = list(range(0, n_steps + 1, cfg.record_every))
    if rec_steps[-1] != n_steps:
        rec_steps.append(n_steps)
    n_rec = len(rec_steps)

    times = np.empty(n_rec)
    series = {name: np.empty(n_rec) for name in
              ("l2", "h1x", "h1", "l4p4", "gamma2", "ih_l2", "pairing")}

    cavg = None
    if not p.open_loop and p.spec.kind in (VOLUME, NODAL):
        cavg = interpolants.cell_average_matrix(p.spec, grid.M)

    def record(i: int, step_idx: int, c_now: np.ndarray) -> None:
        times[i] = step_idx * cfg.dt
        l2_sq = fields.l2_sq_of_coeffs(grid, c_now)
        h1x_sq = fields.h1x_sq_of_coeffs(grid, c_now)
        series["l2"][i] = np.sqrt(max(l2_sq, 0.0))
        series["h1x"][i] = np.sqrt(max(h1x_sq, 0.0))
        series["h1"][i] = np.sqrt(max(l2_sq / grid.L ** 2 + h1x_sq, 0.0))
        w, dw = st.fine_samples(c_now)
        series["l4p4"][i] = float(np.sum(w ** 4) * dw)
        if p.open_loop:
            series["gamma2"][i] = 0.0
            series["ih_l2"][i] = 0.0
            series["pairing"][i] = 0.0
            return
        u_samples = None
        if p.spec.kind in (VOLUME, DELTA):
            u_samples = samples_of(grid, c_now)
        v = st.observations(c_now, u_samples)
        series["gamma2"][i] = float(np.sum(v ** 2))
        series["ih_l2"][i] = interpolants.interpolant_l2(Observations(v), p.spec, grid)
        if p.spec.kind == DELTA:
            idx = st._delta[2]
            series["pairing"][i] = p.spec.h * float(np.sum(v * u_samples[idx]))
        elif p.spec.kind == FOURIER:
            series["pairing"][i] = interpolants.interpolant_norm_sq_from_modes(v, p.spec)
        else:
            series["pairing"][i] = p.spec.h * float(np.sum(v * (cavg @ c_now)))

    def partial(upto: int) -> TrajectoryRecord:
        sl = slice(0, upto)
        cut = {name: series[name][sl].copy() for name in series}
        res = energy_residual_series(
            times[sl], cut["l2"], cut["h1x"], cut["l4p4"], cut["pairing"], p
        )
        return TrajectoryRecord(times=times[sl].copy(), energy_residual=res, **cut)

    rec_i = 0
    record(0, 0, c)
    rec_i = 1
    next_rec = 1
    for n in range(1, n_steps + 1):
        t = n * cfg.dt
        try:
            c, _ = st.advance(c)
        except BlowupError as err:
            raise BlowupError(t, err.reason, partial(rec_i)) from None
        if next_rec < n_rec and n == rec_steps[next_rec]:
            if not np.all(np.isfinite(c)):
                raise BlowupError(t, "non-finite state", partial(rec_i))
            record(next_rec, n, c)
            rec_i += 1
            next_rec += 1

    residual = energy_residual_series(
        times, series["l2"], series["h1x"], series["l4p4"], series["pairing"], p
    )
    return TrajectoryRecord(times=times, energy_residual=residual, **series)


def _ddt(times: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Centered differences inside; third-order one-sided at the ends."""
    n = len(y)
    out = np.empty(n)
    if n < 2:
        out[:] = 0.0
        return out
    dt = times[1] - times[0]
    out[1:-1] = (y[2:] - y[:-2]) / (2.0 * dt)
    if n >= 4:
        out[0] = (-11 * y[0] + 18 * y[1] - 9 * y[2] + 2 * y[3]) / (6.0 * dt)
        out[-1] = (11 * y[-1] - 18 * y[-2] + 9 * y[-3] - 2 * y[-4]) / (6.0 * dt)
    else:
        out[0] = (y[1] - y[0]) / dt
        out[-1] = (y[-1] - y[-2]) / dt
    return out


def energy_residual_series(times, l2, h1x, l4p4, pairing, p: ClosedLoopParams) -> np.ndarray:
    e = np.asarray(l2) ** 2
    d = _ddt(np.asarray(times), e)
    res = 0.5 * d + p.nu * np.asarray(h1x) ** 2 - p.alpha * e + np.asarray(l4p4)
    res = res + p.mu * np.asarray(pairing)
    return np.abs(res)


# ---------------------------------------------------------------------------
# closed-loop hypothesis checks

def certified_c(spec: InterpolantSpec | None) -> float | None:
    """Certified interpolation constant c with defect <= c h ||.||_H1.

    Volume and nodal families carry c = 1; the fourier family with the mean
    carries c = 1/pi.  Without the mean (constants invisible) and for the
    delta family no finite constant exists.
    """
    if spec is None:
        return None
    if spec.kind in (VOLUME, NODAL):
        return 1.0
    if spec.kind == FOURIER and spec.include_mean:
        return 1.0 / np.pi
    return None


@dataclass(frozen=True)
class TheoremCheck:
    applies: bool
    satisfied: bool
    predicted_rate: float | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "applies": self.applies,
            "satisfied": self.satisfied,
            "predicted_rate": self.predicted_rate,
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class ConditionReport:
    """Per-regime hypothesis verdicts and predicted squared-norm decay rates.

    - thm21_proof: volume elements, the working conditions mu h >= nu and
      nu > alpha h^2 / (4 pi^2); rate nu (2 pi N / L)^2 - alpha
    - thm21_printed: the stated (dimensionally inconsistent) hypothesis
      mu >= nu > (h / 2 pi)^2 max(alpha, mu), flagged separately
    - thm41: existence/absorbing-ball condition nu >= mu c^2 h^2
    - thm51: gain margin r = mu - 2 alpha - nu / L^2 > 0 plus thm41; rate r
    - thm71: delta actuation, mu > 4 alpha and nu >= 2 mu h^2;
      rate 2 (mu / 4 - alpha)
    """

    open_loop: bool
    kind: str | None
    h: float | None
    c: float | None
    thm21_proof: TheoremCheck
    thm21_printed: TheoremCheck
    thm41: TheoremCheck
    thm51: TheoremCheck
    thm71: TheoremCheck

    def to_dict(self) -> dict:
        return {
            "open_loop": self.open_loop,
            "kind": self.kind,
            "h": self.h,
            "c": self.c,
            "thm21_proof": self.thm21_proof.to_dict(),
            "thm21_printed": self.thm21_printed.to_dict(),
            "thm41": self.thm41.to_dict(),
            "thm51": self.thm51.to_dict(),
            "thm71": self.thm71.to_dict(),
        }


def check_conditions(p: ClosedLoopParams) -> ConditionReport:
    """Evaluate every closed-loop stability hypothesis for these parameters."""
    no = TheoremCheck(applies=False, satisfied=False)
    if p.open_loop:
        return ConditionReport(True, None, None, None, no, no, no, no, no)

    spec = p.spec
    h = spec.h
    c = certified_c(spec)
    nu, alpha, mu, L = p.nu, p.alpha, p.mu, p.L

    if spec.kind == VOLUME:
        proof_ok = (mu * h >= nu) and (nu > alpha * h ** 2 / (4 * np.pi ** 2))
        rate21 = nu * (2 * np.pi * spec.N / L) ** 2 - alpha
        thm21_proof = TheoremCheck(
            True, bool(proof_ok), rate21,
            {"mu_h": mu * h, "nu": nu, "alpha_h2_over_4pi2": alpha * h ** 2 / (4 * np.pi ** 2)},
        )
        printed_ok = (mu >= nu) and (nu > (h / (2 * np.pi)) ** 2 * max(alpha, mu))
        thm21_printed = TheoremCheck(
            True, bool(printed_ok), rate21,
            {"threshold": (h / (2 * np.pi)) ** 2 * max(alpha, mu)},
        )
    else:
        thm21_proof = thm21_printed = no

    if c is not None:
        cond36 = nu >= mu * c ** 2 * h ** 2
        r0_sq = (alpha + nu / L ** 2) ** 2 * L ** 3 / nu
        thm41 = TheoremCheck(True, bool(cond36), None,
                             {"mu_c2_h2": mu * c ** 2 * h ** 2, "R0_sq": r0_sq})
        r = mu - (2 * alpha + nu / L ** 2)
        thm51 = TheoremCheck(True, bool(r > 0 and cond36), float(r), {"r": float(r)})
    else:
        thm41 = thm51 = no

    if spec.kind == DELTA:
        ok = (mu > 4 * alpha) and (nu >= 2 * mu * h ** 2)
        thm71 = TheoremCheck(True, bool(ok), float(2 * (mu / 4 - alpha)),
                             {"four_alpha": 4 * alpha, "two_mu_h2": 2 * mu * h ** 2})
    else:
        thm71 = no

    return ConditionReport(False, spec.kind, h, c,
                           thm21_proof, thm21_printed, thm41, thm51, thm71)
