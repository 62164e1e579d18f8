"""Property suites behind `detctl verify`: seeded inequality, energy, and
solver-versus-oracle checks with machine-readable verdicts.

Each suite returns a report dict {"properties": {name: {...}}, "passed": bool}.
Inequality properties assert the certified bounds; the two questionable
composite forms of the observation-energy inequality (the stated one and the
half-constant variant) are measured and reported without being asserted.
"""

from __future__ import annotations

import numpy as np

from . import analysis, oracle
from .dynamics import ClosedLoopParams, ICSpec, SimConfig, simulate
from .fields import (
    NEUMANN,
    PERIODIC,
    Grid1D,
    coeffs_of,
    eval_field,
    h1x_norm,
    l2_norm,
    random_band,
)
from .interpolants import (
    DELTA,
    FOURIER,
    NODAL,
    VOLUME,
    InterpolantSpec,
    cell_average_matrix,
    defect,
    interpolate,
    observe,
)

SUITES = ("interpolation", "energy", "oracle", "all")

_TRIAL_NS = (1, 2, 4, 8, 16)
_KMAX = 20
_M = 256


def _in_cell_points(rng: np.random.Generator, N: int, L: float) -> tuple[float, ...]:
    h = L / N
    return tuple(k * h + rng.uniform(0.0, 1.0) * h for k in range(N))


def _prop(passed: bool, worst: float, trials: int, bound: float | None = None, **extra) -> dict:
    out = {"passed": bool(passed), "worst_ratio": float(worst), "trials": int(trials)}
    if bound is not None:
        out["bound"] = float(bound)
    out.update(extra)
    return out


def interpolation_suite(seed: int = 0, n_trials: int = 200) -> dict:
    g = Grid1D(1.0, _M, NEUMANN)
    L = 1.0
    rng = np.random.default_rng(seed + 12345)
    props: dict[str, dict] = {}

    def ensemble(offset):
        for t in range(n_trials):
            f = random_band(g, kmax=_KMAX, seed=seed * 1000003 + offset + t)
            N = _TRIAL_NS[t % len(_TRIAL_NS)]
            yield f, N

    worst = 0.0
    for f, N in ensemble(0):
        spec = InterpolantSpec(VOLUME, N, L)
        b = spec.h * h1x_norm(f)
        if b > 0:
            worst = max(worst, defect(f, spec) / b)
    props["volume_defect_le_h_dphi"] = _prop(worst <= 1.0, worst, n_trials, 1.0)

    worst = 0.0
    for f, N in ensemble(10 ** 6):
        spec = InterpolantSpec(NODAL, N, L, obs_points=_in_cell_points(rng, N, L))
        b = spec.h * h1x_norm(f)
        if b > 0:
            worst = max(worst, defect(f, spec) / b)
    props["nodal_defect_le_h_dphi"] = _prop(worst <= 1.0, worst, n_trials, 1.0)

    worst = 0.0
    for f, N in ensemble(2 * 10 ** 6):
        spec = InterpolantSpec(FOURIER, N, L)
        b = (spec.h / np.pi) * h1x_norm(f)
        if b > 0:
            worst = max(worst, defect(f, spec) / b)
    props["fourier_defect_le_h_dphi_over_pi"] = _prop(worst <= 1.0, worst, n_trials, 1.0)

    worst = 0.0
    for f, N in ensemble(3 * 10 ** 6):
        h = L / N
        a = np.asarray(_in_cell_points(rng, N, L))
        b = np.asarray(_in_cell_points(rng, N, L))
        lhs = float(np.sum((eval_field(f, a) - eval_field(f, b)) ** 2))
        rhs = h * h1x_norm(f) ** 2
        if rhs > 0:
            worst = max(worst, lhs / rhs)
    props["point_gap_energy_le_h_dphi_sq"] = _prop(worst <= 1.0, worst, n_trials, 1.0)

    worst = 0.0
    for f, N in ensemble(4 * 10 ** 6):
        h = L / N
        pts = np.asarray(_in_cell_points(rng, N, L))
        rhs = 2.0 * (h * float(np.sum(eval_field(f, pts) ** 2)) + h ** 2 * h1x_norm(f) ** 2)
        if rhs > 0:
            worst = max(worst, l2_norm(f) ** 2 / rhs)
    props["norm_le_twice_sampled_energy"] = _prop(worst <= 1.0, worst, n_trials, 1.0)

    # observation-energy inequality, sharp per-cell constant (h/pi)^2, with
    # exact cell averages (the quantity the bound is a theorem about);
    # the stated composite forms are measured for reference only
    worst = 0.0
    worst_stated = 0.0
    worst_half = 0.0
    for f, N in ensemble(5 * 10 ** 6):
        spec = InterpolantSpec(VOLUME, N, L)
        lhs = l2_norm(f) ** 2
        avg = cell_average_matrix(spec, g.M) @ coeffs_of(f)
        g2 = float(np.sum(avg ** 2))
        dphi_sq = h1x_norm(f) ** 2
        rhs = spec.h * g2 + (spec.h / np.pi) ** 2 * dphi_sq
        if rhs > 0:
            worst = max(worst, lhs / rhs)
        stated = (spec.h / (2 * np.pi)) ** 2 * (g2 + dphi_sq)
        if stated > 0:
            worst_stated = max(worst_stated, lhs / stated)
        half = spec.h * g2 + (spec.h / (2 * np.pi)) ** 2 * dphi_sq
        if half > 0:
            worst_half = max(worst_half, lhs / half)
    props["norm_le_h_gamma2_plus_sharp_poincare"] = _prop(worst <= 1.0, worst, n_trials, 1.0)
    props["reference_stated_composite_form"] = _prop(True, worst_stated, n_trials, None,
                                                     asserted=False)
    props["reference_half_constant_form"] = _prop(True, worst_half, n_trials, None,
                                                  asserted=False)

    worst = 0.0
    for t in range(20):
        f = random_band(g, kmax=_KMAX, seed=seed * 1000003 + 6 * 10 ** 6 + t)
        for spec in (InterpolantSpec(VOLUME, 8, L), InterpolantSpec(FOURIER, 8, L)):
            once = interpolate(observe(f, spec), spec, g)
            twice = interpolate(observe(once, spec), spec, g)
            scale = max(float(np.max(np.abs(once.values))), 1e-30)
            worst = max(worst, float(np.max(np.abs(twice.values - once.values))) / scale)
    props["projection_idempotence"] = _prop(worst <= 1e-12, worst, 20, 1e-12)

    passed = all(v["passed"] for v in props.values())
    return {"suite": "interpolation", "seed": seed, "properties": props, "passed": passed}


def oracle_suite(seed: int = 0) -> dict:
    props: dict[str, dict] = {}

    p = ClosedLoopParams(nu=1.0, alpha=1.0, L=1.0)
    cfg = SimConfig(grid=Grid1D(1.0, 8, NEUMANN), dt=1e-4, T=10.0,
                    ic=ICSpec("constant", value=0.1), record_every=2000, scheme="etdrk2")
    traj = simulate(cfg, p)
    worst = 0.0
    for t, l2 in zip(traj.times, traj.l2):
        exact = abs(oracle.logistic_constant_state(0.1, float(t), p))
        if exact > 0:
            worst = max(worst, abs(l2 - exact) / exact)
    props["constant_state_vs_logistic"] = _prop(worst <= 1e-6, worst, len(traj), 1e-6)

    g = Grid1D(np.pi, 32, NEUMANN)
    p = ClosedLoopParams(nu=1.0, alpha=4.0, L=np.pi)
    cfg = SimConfig(grid=g, dt=1e-4, T=1.0, ic=ICSpec("single-mode", k=1, amplitude=1e-6),
                    record_every=1000, scheme="etdrk2")
    traj = simulate(cfg, p)
    worst = 0.0
    for t, l2 in zip(traj.times, traj.l2):
        ref = l2_norm(oracle.analytic_linear_mode(1, 1e-6, float(t), p, g))
        worst = max(worst, abs(l2 - ref) / ref)
    props["linear_regime_vs_analytic_mode"] = _prop(worst <= 1e-4, worst, len(traj), 1e-4)

    for name, spec, cert in (
        ("volume_constant", InterpolantSpec(VOLUME, 8, 1.0), 1.0),
        ("nodal_constant", InterpolantSpec(NODAL, 8, 1.0), 1.0),
        ("fourier_constant", InterpolantSpec(FOURIER, 4, 1.0), 1.0 / np.pi + 1e-6),
    ):
        ens = oracle.TrialEnsemble(seed=seed, n_trials=50, kmax=_KMAX)
        c = oracle.empirical_bh_constant(spec, ens)
        props["empirical_" + name] = _prop(c <= cert, c, 50, cert)

    passed = all(v["passed"] for v in props.values())
    return {"suite": "oracle", "seed": seed, "properties": props, "passed": passed}


def energy_suite(seed: int = 0) -> dict:
    """Short closed-loop runs of both feedback architectures: the recorded
    energy identity must close and the certified decay bounds must hold."""
    props: dict[str, dict] = {}

    spec = InterpolantSpec(FOURIER, 2, 1.0)
    p = ClosedLoopParams(nu=1.0, alpha=4.0, L=1.0, mu=10.0, spec=spec)
    cfg = SimConfig(grid=Grid1D(1.0, 64, NEUMANN), dt=2e-4, T=3.0,
                    ic=ICSpec("random-band", seed=seed + 20, kmax=3, amplitude=1.0),
                    record_every=1, scheme="etdrk2")
    traj = simulate(cfg, p)
    allowance = 1e-3 * max(float(np.max(traj.h1)) ** 2, 1.0)
    resid = float(np.max(traj.energy_residual))
    props["projection_loop_energy_identity"] = _prop(resid <= allowance, resid, len(traj),
                                                     allowance)
    ok = analysis.verify_decay_bound(traj, 1.0, 0.05)
    props["projection_loop_decay_bound"] = _prop(ok, 1.0 if ok else np.inf, len(traj), 1.0)

    spec = InterpolantSpec(DELTA, 4, 1.0)
    p = ClosedLoopParams(nu=1.0, alpha=1.0, L=1.0, mu=4.5, spec=spec)
    # the point-actuated loop needs the finer stride: its stiff recorded modes
    # dominate the differencing error of the identity's d/dt term
    cfg = SimConfig(grid=Grid1D(1.0, 64, PERIODIC), dt=5e-5, T=3.0,
                    ic=ICSpec("random-band", seed=seed + 11, kmax=2, amplitude=1.0),
                    record_every=1, scheme="etdrk2")
    traj = simulate(cfg, p)
    allowance = 1e-3 * max(float(np.max(traj.h1)) ** 2, 1.0)
    resid = float(np.max(traj.energy_residual))
    props["point_loop_energy_identity"] = _prop(resid <= allowance, resid, len(traj), allowance)
    ok = analysis.verify_decay_bound(traj, 0.25, 0.05)
    props["point_loop_decay_bound"] = _prop(ok, 1.0 if ok else np.inf, len(traj), 1.0)

    passed = all(v["passed"] for v in props.values())
    return {"suite": "energy", "seed": seed, "properties": props, "passed": passed}


def run_suite(name: str, seed: int = 0) -> dict:
    if name == "interpolation":
        return interpolation_suite(seed)
    if name == "oracle":
        return oracle_suite(seed)
    if name == "energy":
        return energy_suite(seed)
    if name == "all":
        parts = [interpolation_suite(seed), energy_suite(seed), oracle_suite(seed)]
        merged: dict[str, dict] = {}
        for part in parts:
            for key, val in part["properties"].items():
                merged[f"{part['suite']}.{key}"] = val
        return {"suite": "all", "seed": seed, "properties": merged,
                "passed": all(p["passed"] for p in parts)}
    raise ValueError(f"unknown suite {name!r}")
