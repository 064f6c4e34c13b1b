"""Cross-check suite: closed-form oracles, route agreement and design checks.

Every check returns a :class:`CheckResult`. Accuracy checks accept a
tolerance override; shape checks (maxima locations, oscillation ordering) and
the order-of-magnitude estimate keep their own criteria.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from dynscatter import reference
from dynscatter.amplitudes import Route, scatter, sweep, truncation_family, amplitudes_from_jost
from dynscatter.design import (
    design,
    design_sweep,
    left_reflection_contour,
    predicted_transmission,
    round_trip_residual,
    verify_design,
)
from dynscatter.errors import ScatteringError
from dynscatter.evolution import compose_check, evolve_transfer
from dynscatter.jost import solve_jost
from dynscatter.models.design_spec import DesignGoal, DesignSpec
from dynscatter.numerics import IntegratorConfig
from dynscatter.potential import barrier, modulated_exponential, truncate

logger = logging.getLogger(__name__)

GAMMA = 1e-6
ESTIMATE_WINDINGS = 14300


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class SuiteContext:
    cfg: Optional[IntegratorConfig] = None
    tolerance: Optional[float] = None
    seed: int = 7
    samples: int = 20
    split_points: int = 5
    rng: np.random.Generator = field(init=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance


def _upper(name: str, residual: float, tol: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual, tol, bool(residual <= tol), detail)


def _floored_rel(x: complex, ref: complex) -> float:
    """Relative error, measured absolutely once |ref| < 1."""
    return abs(x - ref) / max(1.0, abs(ref))


def _amp_error(a, b) -> float:
    return max(
        _floored_rel(a.left_reflection, b.left_reflection),
        _floored_rel(a.right_reflection, b.right_reflection),
        _floored_rel(a.transmission, b.transmission),
    )


def _random_barriers(ctx: SuiteContext) -> List[reference.BarrierClosedForm]:
    out = []
    for _ in range(ctx.samples):
        k = float(ctx.rng.uniform(0.5, 2.0))
        length = float(ctx.rng.uniform(0.5, 3.0))
        ratio = float(ctx.rng.uniform(0.0, 5.0)) * np.exp(1j * ctx.rng.uniform(-math.pi, math.pi))
        out.append(reference.BarrierClosedForm(complex(ratio) * k * k, k, length))
    return out


def _uinv(k0L: float) -> DesignSpec:
    return DesignSpec.from_k0L(k0L, DesignGoal.RIGHT_INVISIBLE, gamma=GAMMA)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def check_barrier_oracle(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for params in _random_barriers(ctx):
        exact = reference.barrier_amplitudes(params)
        p = barrier(params.height, params.length)
        for route in (Route.EVOLUTION, Route.JOST, Route.S_FORM):
            worst = max(worst, _amp_error(scatter(p, params.k, route, ctx.cfg), exact))
    return _upper(
        "barrier_oracle", worst, ctx.tol(1e-7),
        f"{ctx.samples} barriers x 3 routes, error / max(1, |exact|)",
    )


def check_determinant_law(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for params in _random_barriers(ctx):
        traj = evolve_transfer(barrier(params.height, params.length), params.k, ctx.cfg)
        worst = max(worst, float(np.max(traj.det_residuals())))
    return _upper("determinant_law", worst, ctx.tol(1e-9), f"{ctx.samples} barriers")


def check_composition(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for params in _random_barriers(ctx):
        p = barrier(params.height, params.length)
        for a in ctx.rng.uniform(0.0, params.length, size=ctx.split_points):
            worst = max(worst, compose_check(p, params.k, float(a), ctx.cfg))
    return _upper(
        "composition", worst, ctx.tol(1e-8), f"{ctx.samples} barriers x {ctx.split_points} split points",
    )


_EXP_CASES = [
    (0.04, math.pi / 3), (0.04, 0.7), (0.1, 1.3), (0.2j, 2.0), (-0.05, 2.9),
    (0.03 + 0.02j, 0.4), (0.5, 1.0), (0.01, 2.2), (0.15 - 0.1j, 1.7), (0.08, 3.0),
]


def check_exp_closed_form(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for height, k0L in _EXP_CASES:
        params = reference.ExpPotentialClosedForm(height, 1.0, k0L)
        exact = reference.exp_potential_amplitudes(params)
        numeric = scatter(modulated_exponential(height, 1.0, k0L), 1.0, Route.JOST, ctx.cfg)
        worst = max(worst, _amp_error(numeric, exact))
    return _upper("exp_closed_form", worst, ctx.tol(1e-7), f"{len(_EXP_CASES)} parameter sets")


def check_exp_period(ctx: SuiteContext) -> CheckResult:
    worst = max(
        reference.exp_period_residual(reference.ExpPotentialClosedForm(h, 1.0, k0L))
        for h, k0L in _EXP_CASES
    )
    return _upper("exp_period", worst, ctx.tol(1e-9))


def check_unitarity(ctx: SuiteContext) -> CheckResult:
    p = barrier(2.5, 1.5)
    rows = sweep(p, np.linspace(0.2, 6.0, 100), Route.EVOLUTION, ctx.cfg, threads=1)
    bad = [r for r in rows if not r.ok]
    if bad:
        return CheckResult("unitarity", math.inf, ctx.tol(1e-8), False, f"{len(bad)} rows failed")
    worst = max(r.amplitudes.unitarity_residual() for r in rows)
    return _upper("unitarity", worst, ctx.tol(1e-8), "real barrier, 100 wavenumbers")


def check_lasing_design(ctx: SuiteContext) -> CheckResult:
    result = design(DesignSpec.from_k0L(3 * math.pi / 4, DesignGoal.LASING))
    v = verify_design(result, Route.EVOLUTION, ctx.cfg, eps=ctx.tol(1e-6))
    return _upper("lasing_design", v.residuals["inverse_transmission"], ctx.tol(1e-6), "|1/T(k0)|")


def check_cpa_design(ctx: SuiteContext) -> CheckResult:
    result = design(DesignSpec.from_k0L(3 * math.pi / 4, DesignGoal.CPA))
    v = verify_design(result, Route.EVOLUTION, ctx.cfg, eps=ctx.tol(1e-6))
    return _upper("cpa_design", v.residuals["m11"], ctx.tol(1e-6), "|M11(k0)|/||M||")


def check_invisibility_design(ctx: SuiteContext) -> CheckResult:
    result = design(_uinv(3 * math.pi))
    amps = scatter(result.potential, 1.0, Route.JOST, ctx.cfg)
    residual = max(abs(amps.right_reflection), abs(amps.transmission - 1))
    tol = ctx.tol(1e-9)
    nonzero = abs(amps.left_reflection) > 1e-6
    return CheckResult(
        "invisibility_design", residual, tol, bool(residual <= tol and nonzero),
        f"|R^l(k0)| = {abs(amps.left_reflection):.3e}",
    )


def check_m_scaling(ctx: SuiteContext) -> CheckResult:
    base = left_reflection_contour(_uinv(math.pi), 1, ctx.cfg)
    worst = 0.0
    for m in (2, 3, 5):
        ratio = left_reflection_contour(_uinv(m * math.pi), m, ctx.cfg) / base
        worst = max(worst, abs(ratio - m))
    return _upper("m_scaling", worst, ctx.tol(1e-5))


def check_windings_estimate(ctx: SuiteContext) -> CheckResult:
    rl1 = left_reflection_contour(_uinv(math.pi), 1, ctx.cfg)
    residual = abs(abs(rl1) * ESTIMATE_WINDINGS - 1.0)
    return _upper("windings_estimate", residual, 0.1, f"|R^l_1| = {abs(rl1):.4e}")


def check_transmission_spot(ctx: SuiteContext) -> CheckResult:
    spec = _uinv(7 * math.pi / 2)
    target = 1 / (1 + 8 * GAMMA)
    closed = abs(predicted_transmission(spec) - target)
    numeric = scatter(design(spec).potential, 1.0, Route.JOST, ctx.cfg)
    forward = abs(numeric.transmission - target)
    tol = ctx.tol(1e-7)
    return CheckResult(
        "transmission_spot", forward, tol, bool(closed <= 1e-12 and forward <= tol),
        f"closed-form error {closed:.2e}",
    )


def check_left_reflection_maxima(ctx: SuiteContext) -> CheckResult:
    grid = np.linspace(math.pi / 2, 5 * math.pi, 400)
    rows = design_sweep(grid, GAMMA, cfg=ctx.cfg, threads=1)
    mags = np.array([abs(r.prediction.left_reflection) if r.prediction else np.nan for r in rows])
    step = grid[1] - grid[0]
    peaks = [grid[i] for i in range(1, grid.size - 1) if mags[i] > mags[i - 1] and mags[i] >= mags[i + 1]]
    worst = 0.0
    for m in range(1, 5):
        nearest = min((abs(x - m * math.pi) for x in peaks), default=math.inf)
        worst = max(worst, nearest / step)
    return _upper("left_reflection_maxima", worst, 1.0, "distance to m*pi in grid cells")


def check_profile_amplitude(ctx: SuiteContext) -> CheckResult:
    big = design(_uinv(3 * math.pi)).profile.oscillation_amplitude()
    small = design(_uinv(7 * math.pi / 2)).profile.oscillation_amplitude()
    return CheckResult(
        "profile_amplitude", small / big, 1.0, bool(small < big),
        f"max|n^2-1|: {big:.3e} at 3pi, {small:.3e} at 7pi/2",
    )


def check_truncation_family(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for p in (barrier(-1.5 + 0.3j, 2.0), design(_uinv(3 * math.pi)).potential):
        j = solve_jost(p, 1.0, ctx.cfg)
        a_values = np.linspace(p.lower, p.upper, 12)[1:-1]
        family = truncation_family(j, p, a_values, ctx.cfg)
        for a, amps in zip(a_values, family):
            q = truncate(p, float(a))
            fresh = amplitudes_from_jost(solve_jost(q, 1.0, ctx.cfg), q, None, ctx.cfg)
            worst = max(worst, _amp_error(amps, fresh))
    return _upper("truncation_family", worst, ctx.tol(1e-8), "10 truncation points, 2 potentials")


def check_dynamical_equation(ctx: SuiteContext) -> CheckResult:
    worst, ratios = 0.0, []
    for height in (-2.0, 1.5 - 0.5j):
        params = reference.BarrierClosedForm(height, 1.0, 2.0)
        r1 = reference.barrier_hamiltonian_check(params, 1.0, 1e-4)
        r2 = reference.barrier_hamiltonian_check(params, 1.0, 2e-4)
        worst = max(worst, r1)
        ratios.append(r2 / r1 if r1 > 0 else 4.0)
    order_ok = all(3.0 <= r <= 5.0 for r in ratios)
    tol = ctx.tol(1e-6)
    return CheckResult(
        "dynamical_equation", worst, tol, bool(worst <= tol and order_ok),
        "h-doubling ratios " + ", ".join(f"{r:.2f}" for r in ratios),
    )


def check_route_agreement(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    potentials = [
        (modulated_exponential(0.04, 1.0, math.pi / 3), 1.0),
        (barrier(-0.8 + 0.4j, 1.7, offset=-0.5), 1.3),
        (design(_uinv(3 * math.pi)).potential, 1.0),
    ]
    for p, k in potentials:
        evo = scatter(p, k, Route.EVOLUTION, ctx.cfg)
        for route in (Route.JOST, Route.S_FORM):
            worst = max(worst, _amp_error(scatter(p, k, route, ctx.cfg), evo))
    return _upper("route_agreement", worst, ctx.tol(1e-7))


def check_design_round_trip(ctx: SuiteContext) -> CheckResult:
    worst = 0.0
    for spec in (_uinv(3 * math.pi), DesignSpec.from_k0L(3 * math.pi / 4, DesignGoal.LASING)):
        worst = max(worst, round_trip_residual(design(spec), ctx.cfg))
    return _upper("design_round_trip", worst, ctx.tol(1e-7))


CHECKS: Dict[str, Callable[[SuiteContext], CheckResult]] = {
    "barrier_oracle": check_barrier_oracle,
    "determinant_law": check_determinant_law,
    "composition": check_composition,
    "exp_closed_form": check_exp_closed_form,
    "exp_period": check_exp_period,
    "unitarity": check_unitarity,
    "lasing_design": check_lasing_design,
    "cpa_design": check_cpa_design,
    "invisibility_design": check_invisibility_design,
    "m_scaling": check_m_scaling,
    "windings_estimate": check_windings_estimate,
    "transmission_spot": check_transmission_spot,
    "left_reflection_maxima": check_left_reflection_maxima,
    "profile_amplitude": check_profile_amplitude,
    "truncation_family": check_truncation_family,
    "dynamical_equation": check_dynamical_equation,
    "route_agreement": check_route_agreement,
    "design_round_trip": check_design_round_trip,
}


def run_check(name: str, ctx: Optional[SuiteContext] = None) -> CheckResult:
    ctx = ctx or SuiteContext()
    try:
        result = CHECKS[name](ctx)
    except ScatteringError as exc:
        logger.error("check %s raised %s: %s", name, exc.code, exc)
        result = CheckResult(name, math.inf, math.nan, False, f"{exc.code}: {exc}")
    level = logging.INFO if result.passed else logging.WARNING
    logger.log(level, "check %-24s %s residual=%.3e tol=%.1e",
               name, "PASS" if result.passed else "FAIL", result.residual, result.tolerance)
    return result


def run_suite(
    tolerance: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
    names: Optional[Sequence[str]] = None,
) -> List[CheckResult]:
    """Run the named checks (default: all) in registry order."""
    selected = list(CHECKS) if names is None else list(names)
    unknown = [n for n in selected if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    ctx = SuiteContext(cfg=cfg, tolerance=tolerance)
    return [run_check(name, ctx) for name in selected]
