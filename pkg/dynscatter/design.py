"""Inverse design of optical index profiles on [0, L] at a target wavenumber k0.

A design starts from a polynomial S(z) with S(1) = S'(1) = 1 (the support
starts at a- = 0, so z- = 1) and a goal condition at z+ = exp(-2i k0 L):

    lasing            S'(z+) = 0
    right invisible   z+ S'(z+) = S(z+)

The index profile follows from the S equation, n^2 = 1 + 4 z^2 S''(z) / S(z)
with z = exp(-2i k0 x), and the optical potential is v = k^2 (1 - n^2).
The CPA profile is the complex conjugate of the lasing one.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from dynscatter import config
from dynscatter.amplitudes import QUADRATURE_INACCURATE, Route, ScatteringAmplitudes, SpectralFlags, classify, scatter
from dynscatter.errors import InvalidConfig, ScatteringError, SingularProfile
from dynscatter.evolution import evolve_transfer
from dynscatter.jost import solve_s
from dynscatter.models.design_spec import DesignGoal, DesignSpec
from dynscatter.numerics import ArcPath, IntegratorConfig, quadrature_arc, quadrature_shortfalls
from dynscatter.potential import IndexProfileRecord, Potential, potential_from_index

logger = logging.getLogger(__name__)

# |S| below this fraction of max |S| on the check grid counts as a zero
_PROFILE_ZERO = 1e-8
_HALF_PI_TOL = 1e-6


@dataclass(frozen=True)
class DesignPrediction:
    """Design-time amplitudes at k0; None where the amplitude has a pole."""

    goal_condition: str
    goal_residual: float
    transmission: Optional[complex] = None
    right_reflection: Optional[complex] = None
    left_reflection: Optional[complex] = None

    def to_dict(self) -> Dict[str, Any]:
        def cplx(z):
            return None if z is None else {"re": z.real, "im": z.imag, "abs": abs(z)}

        return {
            "goal_condition": self.goal_condition,
            "goal_residual": self.goal_residual,
            "transmission": cplx(self.transmission),
            "right_reflection": cplx(self.right_reflection),
            "left_reflection": cplx(self.left_reflection),
        }


@dataclass(frozen=True)
class DesignResult:
    spec: DesignSpec
    potential: Potential = field(repr=False)
    n2: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    s_polynomial: Optional[Polynomial]
    prediction: DesignPrediction
    profile: IndexProfileRecord = field(repr=False)
    dispersive: bool = True

    def to_dict(self) -> Dict[str, Any]:
        coefs = None
        if self.s_polynomial is not None:
            coefs = [{"re": c.real, "im": c.imag} for c in self.s_polynomial.coef]
        return {
            "goal": self.spec.goal.value,
            "k0": self.spec.k0,
            "length": self.spec.length,
            "k0L": self.spec.k0L,
            "gamma": {"re": self.spec.gamma.real, "im": self.spec.gamma.imag},
            "dispersive": self.dispersive,
            "s_coefficients": coefs,
            "prediction": self.prediction.to_dict(),
            "profile_oscillation": self.profile.oscillation_amplitude(),
        }


# ---------------------------------------------------------------------------
# S polynomials
# ---------------------------------------------------------------------------

def lasing_polynomial(spec: DesignSpec) -> Polynomial:
    """``S(z) = (z^2 - 2 z+ z + 1) / (2 (1 - z+))``, so that ``S'(z) = (z - z+)/(1 - z+)``."""
    zp = spec.z_plus
    return Polynomial([1, -2 * zp, 1]) / (2 * (1 - zp))


def invisible_polynomial(spec: DesignSpec) -> Polynomial:
    """``S(z) = gamma [g1 (z-1)^3 - g2 (z-1)^2] + z``."""
    u = Polynomial([-1, 1])
    return spec.gamma * (spec.g1 * u ** 3 - spec.g2 * u ** 2) + Polynomial([0, 1])


def _n2_from_polynomial(s: Polynomial, k0: float, length: float) -> Callable[[np.ndarray], np.ndarray]:
    s2 = s.deriv(2)

    def n2(x):
        xs = np.asarray(x, dtype=float)
        z = np.exp(-2j * k0 * xs)
        inside = (xs >= 0) & (xs <= length)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = 1 + 4 * z * z * s2(z) / s(z)
        return np.where(inside, value, 1.0 + 0j)

    return n2


def _check_half_pi(spec: DesignSpec) -> None:
    q = spec.k0L / (math.pi / 2)
    if abs(q - round(q)) <= _HALF_PI_TOL * max(1.0, abs(q)):
        raise SingularProfile(
            f"k0L={spec.k0L:.12g} is a multiple of pi/2; the {spec.goal.value} profile is singular",
            details={"k0L": spec.k0L},
        )


def _check_profile(s: Polynomial, spec: DesignSpec) -> None:
    """Sample S on the arc over [0, L]; a near-zero makes n^2 blow up."""
    x = np.linspace(0.0, spec.length, config.PROFILE_CHECK_POINTS)
    values = np.abs(s(np.exp(-2j * spec.k0 * x)))
    floor = _PROFILE_ZERO * max(1.0, float(values.max()))
    if not np.all(np.isfinite(values)) or values.min() <= floor:
        i = int(np.argmin(values))
        raise SingularProfile(
            f"n^2 denominator vanishes near x={x[i]:.6g} for {spec.goal.value} design",
            details={"x": float(x[i]), "abs_s": float(values[i])},
        )


# ---------------------------------------------------------------------------
# Predictions
# ---------------------------------------------------------------------------

def _contour_integrand(s: Polynomial) -> Callable[[complex], complex]:
    s1, s2 = s.deriv(1), s.deriv(2)

    def g(w: complex) -> complex:
        sp = s1(w)
        return -s2(w) / (s(w) * sp * sp)

    return g


def predicted_transmission(spec: DesignSpec) -> complex:
    """``T = 1 / (1 + gamma (1 - exp(-2i k0 L))^3)`` for a right-invisible design."""
    if spec.goal is not DesignGoal.RIGHT_INVISIBLE:
        raise InvalidConfig("predicted_transmission applies to right-invisible designs only")
    return 1 / (1 + spec.gamma * (1 - spec.z_plus) ** 3)


def _predict_invisible(spec: DesignSpec, s: Polynomial, cfg: Optional[IntegratorConfig]) -> DesignPrediction:
    zp = spec.z_plus
    s_end, sp_end = s(zp), s.deriv(1)(zp)
    rl = quadrature_arc(_contour_integrand(s), ArcPath(0.0, spec.k0L), cfg)
    return DesignPrediction(
        goal_condition="z+ S'(z+) = S(z+)",
        goal_residual=float(abs(zp * sp_end - s_end)),
        transmission=complex(1 / sp_end),
        right_reflection=complex(s_end / sp_end - zp),
        left_reflection=complex(rl),
    )


def left_reflection_contour(spec: DesignSpec, m: int, cfg: Optional[IntegratorConfig] = None) -> complex:
    """R^l at k0 from m windings of ``-S''/(S S'^2) dw`` with the designed S.

    Requires k0L = m pi, where the loop closes and each winding contributes
    the same amount.
    """
    if spec.goal is not DesignGoal.RIGHT_INVISIBLE:
        raise InvalidConfig("left_reflection_contour applies to right-invisible designs only")
    if m < 1:
        raise InvalidConfig(f"winding count must be positive, got {m}")
    if abs(spec.k0L - m * math.pi) > 1e-9 * m * math.pi:
        raise InvalidConfig(f"k0L={spec.k0L:.12g} is not {m} pi")
    return quadrature_arc(_contour_integrand(invisible_polynomial(spec)), ArcPath(0.0, m * math.pi), cfg)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def sample_index_profile(result: DesignResult, n_points: int = config.PROFILE_SAMPLES) -> IndexProfileRecord:
    """n^2 on a uniform grid over [0, L]."""
    if n_points < 2:
        raise InvalidConfig("a profile needs at least 2 sample points")
    spec = result.spec
    x = np.linspace(0.0, spec.length, int(n_points))
    return IndexProfileRecord(spec.k0, spec.length, x, np.asarray(result.n2(x), dtype=complex))


def index_squared(result: DesignResult, x):
    """n^2(x) of a design; 1 outside [0, L]."""
    return result.n2(x)


def _build(
    spec: DesignSpec,
    n2: Callable,
    s: Optional[Polynomial],
    prediction: DesignPrediction,
    dispersive: bool,
) -> DesignResult:
    potential = potential_from_index(
        n2,
        spec.k0,
        (0.0, spec.length),
        dispersive=dispersive,
        params={"goal": spec.goal.value, "k0L": spec.k0L, "gamma": spec.gamma},
    )
    x = np.linspace(0.0, spec.length, config.PROFILE_SAMPLES)
    profile = IndexProfileRecord(spec.k0, spec.length, x, np.asarray(n2(x), dtype=complex))
    logger.info(
        "designed %s profile: k0=%.6g L=%.6g gamma=%s max|n^2-1|=%.3e",
        spec.goal.value, spec.k0, spec.length, spec.gamma, profile.oscillation_amplitude(),
    )
    return DesignResult(spec, potential, n2, s, prediction, profile, dispersive)


def design_lasing(spec: DesignSpec, *, dispersive: bool = True) -> DesignResult:
    """Spectral singularity at k0.

    Raises:
        SingularProfile: k0L is a multiple of pi/2, or S vanishes on the arc.
    """
    _check_half_pi(spec)
    s = lasing_polynomial(spec)
    _check_profile(s, spec)
    prediction = DesignPrediction(
        goal_condition="S'(z+) = 0",
        goal_residual=float(abs(s.deriv(1)(spec.z_plus))),
    )
    return _build(spec, _n2_from_polynomial(s, spec.k0, spec.length), s, prediction, dispersive)


def design_cpa(spec: DesignSpec, *, dispersive: bool = True) -> DesignResult:
    """Coherent perfect absorption at k0: the conjugate of the lasing profile."""
    _check_half_pi(spec)
    s = lasing_polynomial(spec)
    _check_profile(s, spec)
    lasing_n2 = _n2_from_polynomial(s, spec.k0, spec.length)

    def n2(x):
        return np.conj(lasing_n2(x))

    prediction = DesignPrediction(
        goal_condition="M11(k0) = 0",
        goal_residual=float(abs(s.deriv(1)(spec.z_plus))),
    )
    return _build(spec, n2, None, prediction, dispersive)


def design_right_invisible(
    spec: DesignSpec,
    *,
    dispersive: bool = True,
    cfg: Optional[IntegratorConfig] = None,
) -> DesignResult:
    """R^r(k0) = 0, with T(k0) = 1 whenever k0L is a multiple of pi."""
    s = invisible_polynomial(spec)
    _check_profile(s, spec)
    prediction = _predict_invisible(spec, s, cfg)
    return _build(spec, _n2_from_polynomial(s, spec.k0, spec.length), s, prediction, dispersive)


def design(spec: DesignSpec, *, dispersive: bool = True, cfg: Optional[IntegratorConfig] = None) -> DesignResult:
    if spec.goal is DesignGoal.LASING:
        return design_lasing(spec, dispersive=dispersive)
    if spec.goal is DesignGoal.CPA:
        return design_cpa(spec, dispersive=dispersive)
    return design_right_invisible(spec, dispersive=dispersive, cfg=cfg)


# ---------------------------------------------------------------------------
# Sweeps over k0 L
# ---------------------------------------------------------------------------

DESIGN_SWEEP_COLUMNS = [
    "k0L",
    "re_t_minus_1", "im_t_minus_1", "abs_t_minus_1",
    "re_rl", "im_rl", "abs_rl",
    "abs_rr", "status",
]


@dataclass(frozen=True)
class DesignSweepRow:
    k0L: float
    prediction: Optional[DesignPrediction]
    status: str = "ok"

    def to_row(self) -> List[Any]:
        p = self.prediction
        if p is None:
            return [self.k0L] + [float("nan")] * 7 + [self.status]
        t1, rl = p.transmission - 1, p.left_reflection
        return [self.k0L, t1.real, t1.imag, abs(t1), rl.real, rl.imag, abs(rl),
                abs(p.right_reflection), self.status]


def _sweep_point(k0L: float, gamma: complex, k0: float, cfg) -> DesignSweepRow:
    spec = DesignSpec.from_k0L(k0L, DesignGoal.RIGHT_INVISIBLE, gamma=gamma, k0=k0)
    try:
        s = invisible_polynomial(spec)
        _check_profile(s, spec)
        with quadrature_shortfalls() as shortfalls:
            prediction = _predict_invisible(spec, s, cfg)
    except ScatteringError as exc:
        logger.warning("design sweep point k0L=%.12g flagged: %s", k0L, exc)
        return DesignSweepRow(k0L, None, exc.code)
    if shortfalls:
        logger.warning("design sweep point k0L=%.12g: quadrature error estimate %.3e", k0L, max(shortfalls))
        return DesignSweepRow(k0L, prediction, QUADRATURE_INACCURATE)
    return DesignSweepRow(k0L, prediction)


def design_sweep(
    k0L_values: Sequence[float],
    gamma: complex = 1e-6,
    k0: float = 1.0,
    cfg: Optional[IntegratorConfig] = None,
    threads: Optional[int] = None,
) -> List[DesignSweepRow]:
    """Design-time T and R^l of right-invisible designs over a range of k0 L."""
    values = [float(v) for v in k0L_values]
    if not values:
        raise InvalidConfig("design sweep needs at least one k0L value")
    if any(not v > 0 for v in values):
        raise InvalidConfig("k0L values must be positive")
    workers = max(1, min(threads or config.THREADS, len(values)))
    if workers == 1:
        return [_sweep_point(v, gamma, k0, cfg) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _sweep_point(v, gamma, k0, cfg), values))


# ---------------------------------------------------------------------------
# Forward verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DesignVerification:
    goal: DesignGoal
    residuals: Dict[str, float]
    passed: bool
    amplitudes: Optional[ScatteringAmplitudes] = None
    flags: Optional[SpectralFlags] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "goal": self.goal.value,
            "passed": self.passed,
            "residuals": dict(self.residuals),
            "amplitudes": self.amplitudes.to_dict() if self.amplitudes else None,
            "flags": self.flags.to_dict() if self.flags else None,
        }


def verify_design(
    result: DesignResult,
    route: Route = Route.AUTO,
    cfg: Optional[IntegratorConfig] = None,
    eps: float = config.CLASSIFY_EPS,
) -> DesignVerification:
    """Forward-solve the designed potential at k0 and check the goal.

    Lasing and CPA are checked on the evolution-route transfer matrix, where
    M22 (resp. M11) is finite even at the singular point.
    """
    spec = result.spec
    goal = spec.goal
    if goal in (DesignGoal.LASING, DesignGoal.CPA):
        m = evolve_transfer(result.potential, spec.k0, cfg).final
        norm = m.max_norm()
        if goal is DesignGoal.LASING:
            residual = abs(m.m22)
            residuals = {"inverse_transmission": residual, "matrix_norm": norm}
        else:
            residual = abs(m.m11) / norm
            residuals = {"m11": residual, "matrix_norm": norm}
        return DesignVerification(goal, residuals, residual <= eps)

    amps = scatter(result.potential, spec.k0, route, cfg)
    flags = classify(amps, eps)
    residuals = {
        "right_reflection": abs(amps.right_reflection),
        "transmission_minus_one": abs(amps.transmission - 1),
        "left_reflection": abs(amps.left_reflection),
    }
    if result.prediction.transmission is not None:
        residuals["transmission_vs_prediction"] = abs(amps.transmission - result.prediction.transmission)
    passed = (
        residuals["right_reflection"] <= eps
        and residuals.get("transmission_vs_prediction", 0.0) <= eps
    )
    return DesignVerification(goal, residuals, passed, amps, flags)


def round_trip_residual(result: DesignResult, cfg: Optional[IntegratorConfig] = None, points: int = 50) -> float:
    """max |S_numeric(a) - S(exp(-2i k0 a))| after forward-solving the design at k0."""
    if result.s_polynomial is None:
        raise InvalidConfig("design has no stored S polynomial")
    spec = result.spec
    s_num = solve_s(result.potential, spec.k0, cfg)
    a = np.linspace(0.0, spec.length, points)
    exact = result.s_polynomial(np.exp(-2j * spec.k0 * a))
    return float(np.max(np.abs(s_num.s(a) - exact)))
