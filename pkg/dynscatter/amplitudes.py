"""Reflection and transmission amplitudes from the three solver routes.

The transfer matrix and the amplitudes are related by

    M11 = T - R^l R^r / T,   M12 = R^r / T,
    M21 = -R^l / T,          M22 = 1 / T.

Spectral singularities (real zeros of M22) and coherent perfect absorption
(real zeros of M11) are detected here, together with reflectionlessness and
invisibility from either side.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from dynscatter import config
from dynscatter.errors import (
    InvalidConfig,
    InvalidTransferMatrix,
    ScatteringError,
    SpectralSingularityEncountered,
    ZeroTransmission,
)
from dynscatter.evolution import evolve_transfer
from dynscatter.jost import JostSolution, SFunction, solve_jost, solve_s
from dynscatter.numerics import (
    ArcPath,
    Complex2x2,
    IntegratorConfig,
    quadrature_arc_lifted,
    quadrature_real,
    quadrature_shortfalls,
)
from dynscatter.potential import Potential, evaluate

logger = logging.getLogger(__name__)


class Route(str, Enum):
    EVOLUTION = "evolution"
    JOST = "jost"
    S_FORM = "s"
    AUTO = "auto"
    CLOSED_FORM = "closed_form"


SOLVER_ROUTES = (Route.EVOLUTION, Route.JOST, Route.S_FORM, Route.AUTO)


@dataclass(frozen=True)
class ScatteringAmplitudes:
    k: float
    left_reflection: complex
    right_reflection: complex
    transmission: complex
    route: Route
    deviation: Optional[float] = None

    def to_matrix(self) -> Complex2x2:
        return matrix_from_amplitudes(self)

    def unitarity_residual(self) -> float:
        """max over both sides of ``| |R|^2 + |T|^2 - 1 |``."""
        t2 = abs(self.transmission) ** 2
        return max(
            abs(abs(self.left_reflection) ** 2 + t2 - 1.0),
            abs(abs(self.right_reflection) ** 2 + t2 - 1.0),
        )

    def to_dict(self) -> Dict[str, Any]:
        def cplx(z: complex) -> Dict[str, float]:
            return {"re": z.real, "im": z.imag, "abs": abs(z)}

        return {
            "k": self.k,
            "route": self.route.value,
            "left_reflection": cplx(self.left_reflection),
            "right_reflection": cplx(self.right_reflection),
            "transmission": cplx(self.transmission),
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class SpectralFlags:
    is_spectral_singularity: bool
    is_cpa: bool
    is_right_reflectionless: bool
    is_left_reflectionless: bool
    is_right_invisible: bool
    is_left_invisible: bool
    is_bidirectionally_invisible: bool
    residuals: Dict[str, float] = field(default_factory=dict)

    def active(self) -> List[str]:
        return [name[3:] for name, value in self.__dict__.items()
                if name.startswith("is_") and value]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {k: v for k, v in self.__dict__.items() if k.startswith("is_")}
        out["residuals"] = dict(self.residuals)
        return out


# ---------------------------------------------------------------------------
# M <-> (R^l, R^r, T)
# ---------------------------------------------------------------------------

def amplitudes_from_matrix(m: Complex2x2, k: float = float("nan"), route: Route = Route.EVOLUTION) -> ScatteringAmplitudes:
    """Read the amplitudes off a unit-determinant transfer matrix.

    Raises:
        InvalidTransferMatrix: det M differs from 1 beyond the drift limit.
        SpectralSingularityEncountered: |M22| is below the transfer floor.
    """
    scale = max(1.0, m.max_norm()) ** 2
    det_error = abs(m.det() - 1.0)
    if not det_error <= config.DETERMINANT_DRIFT_LIMIT * scale:
        raise InvalidTransferMatrix(
            f"transfer matrix has det - 1 = {det_error:.3e}",
            details={"det_error": det_error},
        )
    if abs(m.m22) < config.TRANSFER_FLOOR:
        raise SpectralSingularityEncountered(
            f"M22 vanishes at k={k:.12g} (|M22|={abs(m.m22):.3e})",
            details={"k": k, "abs_m22": abs(m.m22)},
        )
    return ScatteringAmplitudes(
        k=k,
        left_reflection=-m.m21 / m.m22,
        right_reflection=m.m12 / m.m22,
        transmission=1.0 / m.m22,
        route=route,
    )


def matrix_from_amplitudes(amps: ScatteringAmplitudes) -> Complex2x2:
    t = complex(amps.transmission)
    if t == 0 or not np.isfinite(t):
        raise ZeroTransmission(f"transmission amplitude {t} has no transfer matrix")
    rl, rr = complex(amps.left_reflection), complex(amps.right_reflection)
    return Complex2x2(t - rl * rr / t, rr / t, -rl / t, 1.0 / t)


# ---------------------------------------------------------------------------
# Jost route
# ---------------------------------------------------------------------------

def _jost_at(j: JostSolution, a: float):
    f_plus, f_minus = complex(j.f_plus(a)), complex(j.f_minus(a))
    if abs(f_minus) <= config.SINGULARITY_FLOOR * (1.0 + abs(f_plus)):
        raise SpectralSingularityEncountered(
            f"F- vanishes at k={j.k:.12g}, a={a:.6g}",
            details={"k": j.k, "a": a, "abs_f_minus": abs(f_minus)},
        )
    k = j.k
    rr = -np.exp(-2j * k * a) * f_plus / f_minus
    t = -2j * k * np.exp(-1j * k * a) / f_minus
    return complex(rr), complex(t)


def _left_reflection_integral(j: JostSolution, p: Potential, lo: float, hi: float, cfg) -> complex:
    k = j.k

    def integrand(x: float) -> complex:
        fm = complex(j.f_minus(x))
        return evaluate(p, x, k) / (fm * fm)

    return 2j * k * quadrature_real(integrand, (lo, hi), cfg, points=p.breakpoints)


def amplitudes_from_jost(
    j: JostSolution,
    p: Potential,
    a: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> ScatteringAmplitudes:
    """Amplitudes of the potential truncated at a (default: the full potential)."""
    a = p.upper if a is None else float(a)
    if not (p.lower <= a <= p.upper):
        raise InvalidConfig(f"a={a} lies outside the support [{p.lower}, {p.upper}]")
    rr, t = _jost_at(j, a)
    rl = _left_reflection_integral(j, p, p.lower, a, cfg)
    return ScatteringAmplitudes(j.k, rl, rr, t, Route.JOST)


def truncation_family(
    j: JostSolution,
    p: Potential,
    a_values: Sequence[float],
    cfg: Optional[IntegratorConfig] = None,
) -> List[ScatteringAmplitudes]:
    """Amplitudes of every ``truncate(p, a)`` from one Jost solve.

    R^l is accumulated interval by interval over the sorted truncation points;
    results come back in the order of ``a_values``.
    """
    order = np.argsort(np.asarray(a_values, dtype=float), kind="stable")
    results: List[Optional[ScatteringAmplitudes]] = [None] * len(a_values)
    rl, prev = 0j, p.lower
    for i in order:
        a = float(a_values[i])
        if not (p.lower <= a <= p.upper):
            raise InvalidConfig(f"a={a} lies outside the support [{p.lower}, {p.upper}]")
        rl += _left_reflection_integral(j, p, prev, a, cfg)
        prev = a
        rr, t = _jost_at(j, a)
        results[i] = ScatteringAmplitudes(j.k, rl, rr, t, Route.JOST)
    return results  # type: ignore[return-value]


def transfer_from_jost(
    j: JostSolution,
    p: Potential,
    a: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> Complex2x2:
    return matrix_from_amplitudes(amplitudes_from_jost(j, p, a, cfg))


# ---------------------------------------------------------------------------
# S route
# ---------------------------------------------------------------------------

def amplitudes_from_s(s: SFunction, cfg: Optional[IntegratorConfig] = None) -> ScatteringAmplitudes:
    """Amplitudes from S(z+) and S'(z+); R^l from the contour integral along the arc.

    On the arc ``-S''/(S S'^2) = v / (4 k^2 z^2 S'^2)``, so S itself drops out of
    the integrand and only S' is needed at each phase.
    """
    p, k = s.potential, s.k
    a_plus = p.upper
    s_end, sp_end = complex(s.s(a_plus)), complex(s.s_prime(a_plus))
    if abs(sp_end) <= config.SINGULARITY_FLOOR * (1.0 + abs(s_end)):
        raise SpectralSingularityEncountered(
            f"S'(z+) vanishes at k={k:.12g}",
            details={"k": k, "abs_s_prime": abs(sp_end)},
        )
    z_plus = s.z_plus

    def h(phi: float) -> complex:
        a = phi / k
        z = np.exp(-2j * phi)
        sp = complex(s.s_prime(a))
        return evaluate(p, a, k) / (4.0 * k * k * z * z * sp * sp)

    if p.is_null:
        rl = 0j
    else:
        rl = quadrature_arc_lifted(
            h,
            ArcPath(k * p.lower, k * p.upper),
            cfg,
            points=[k * b for b in p.breakpoints],
        )
    return ScatteringAmplitudes(
        k=k,
        left_reflection=complex(rl),
        right_reflection=s_end / sp_end - z_plus,
        transmission=1.0 / sp_end,
        route=Route.S_FORM,
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def classify(amps: ScatteringAmplitudes, eps: float = config.CLASSIFY_EPS) -> SpectralFlags:
    """Flag singular, absorbing, reflectionless and invisible configurations.

    The CPA residual is |M11| relative to max(1, ||M||).
    """
    t, rl, rr = complex(amps.transmission), complex(amps.left_reflection), complex(amps.right_reflection)
    inv_t = abs(1.0 / t) if t != 0 else float("inf")
    singular = inv_t <= eps

    if t != 0 and np.isfinite(t):
        m = matrix_from_amplitudes(amps)
        cpa_res = abs(m.m11) / max(1.0, m.max_norm())
    else:
        cpa_res = float("inf")

    t_res = abs(t - 1.0)
    right_rl = abs(rr) <= eps
    left_rl = abs(rl) <= eps
    unit_t = t_res <= eps
    return SpectralFlags(
        is_spectral_singularity=singular,
        is_cpa=cpa_res <= eps,
        is_right_reflectionless=right_rl,
        is_left_reflectionless=left_rl,
        is_right_invisible=right_rl and not left_rl and unit_t,
        is_left_invisible=left_rl and not right_rl and unit_t,
        is_bidirectionally_invisible=right_rl and left_rl and unit_t,
        residuals={
            "inverse_transmission": inv_t,
            "m11": cpa_res,
            "left_reflection": abs(rl),
            "right_reflection": abs(rr),
            "transmission_minus_one": t_res,
        },
    )


# ---------------------------------------------------------------------------
# Facade and sweeps
# ---------------------------------------------------------------------------

def scatter(
    p: Potential,
    k: float,
    route: Route = Route.AUTO,
    cfg: Optional[IntegratorConfig] = None,
) -> ScatteringAmplitudes:
    """Amplitudes of p at k by the chosen route.

    ``auto`` runs the Jost route and cross-checks it against the evolution
    route; the deviation is the max-norm difference of the two transfer
    matrices relative to max(1, ||M||).
    """
    if not k > 0:
        raise InvalidConfig(f"wavenumber must be positive, got {k}")
    route = Route(route)

    if route is Route.EVOLUTION:
        return amplitudes_from_matrix(evolve_transfer(p, k, cfg).final, k, Route.EVOLUTION)
    if route is Route.JOST:
        return amplitudes_from_jost(solve_jost(p, k, cfg), p, None, cfg)
    if route is Route.S_FORM:
        return amplitudes_from_s(solve_s(p, k, cfg), cfg)
    if route is Route.AUTO:
        jost = amplitudes_from_jost(solve_jost(p, k, cfg), p, None, cfg)
        m_evo = evolve_transfer(p, k, cfg).final
        m_jost = matrix_from_amplitudes(jost)
        deviation = (m_jost - m_evo).max_norm() / max(1.0, m_evo.max_norm())
        logger.debug("auto route at k=%.6g: deviation %.3e", k, deviation)
        return ScatteringAmplitudes(
            k, jost.left_reflection, jost.right_reflection, jost.transmission,
            Route.AUTO, deviation,
        )
    raise InvalidConfig(f"route {route.value} cannot be used for a forward solve")


# Row status for a point whose amplitudes rest on an unconverged quadrature.
QUADRATURE_INACCURATE = "QUADRATURE_INACCURATE"

SWEEP_COLUMNS = [
    "k",
    "re_t", "im_t", "abs_t",
    "re_rl", "im_rl", "abs_rl",
    "re_rr", "im_rr", "abs_rr",
    "deviation", "unitarity_residual", "status",
]


@dataclass(frozen=True)
class SweepRow:
    k: float
    amplitudes: Optional[ScatteringAmplitudes]
    flags: Optional[SpectralFlags]
    status: str = "ok"
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_row(self) -> List[Any]:
        nan = float("nan")
        if self.amplitudes is None:
            return [self.k] + [nan] * 11 + [self.status]
        a = self.amplitudes
        row: List[Any] = [self.k]
        for z in (a.transmission, a.left_reflection, a.right_reflection):
            row.extend([z.real, z.imag, abs(z)])
        row.append(a.deviation if a.deviation is not None else nan)
        row.append(a.unitarity_residual())
        row.append(self.status)
        return row


def _sweep_point(p: Potential, k: float, route: Route, cfg, eps: float) -> SweepRow:
    try:
        with quadrature_shortfalls() as shortfalls:
            amps = scatter(p, k, route, cfg)
    except ScatteringError as exc:
        logger.warning("sweep point k=%.12g flagged: %s", k, exc)
        return SweepRow(k, None, None, exc.code, str(exc))
    flags = classify(amps, eps)
    if flags.is_spectral_singularity:
        return SweepRow(k, amps, flags, "SPECTRAL_SINGULARITY")
    if shortfalls:
        message = f"quadrature error estimate {max(shortfalls):.3e}"
        return SweepRow(k, amps, flags, QUADRATURE_INACCURATE, message)
    return SweepRow(k, amps, flags)


def sweep(
    p: Potential,
    k_values: Sequence[float],
    route: Route = Route.AUTO,
    cfg: Optional[IntegratorConfig] = None,
    threads: Optional[int] = None,
    eps: float = config.CLASSIFY_EPS,
) -> List[SweepRow]:
    """Scatter at every k; rows come back in input order, singular points flagged."""
    ks = [float(k) for k in k_values]
    if not ks:
        raise InvalidConfig("sweep needs at least one wavenumber")
    if any(not k > 0 for k in ks):
        raise InvalidConfig("sweep wavenumbers must be positive")
    workers = max(1, min(threads or config.THREADS, len(ks)))
    logger.info("sweeping %d wavenumbers on %d threads (route=%s)", len(ks), workers, Route(route).value)
    if workers == 1:
        return [_sweep_point(p, k, route, cfg, eps) for k in ks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda k: _sweep_point(p, k, route, cfg, eps), ks))
