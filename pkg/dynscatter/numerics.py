"""Complex 2x2 algebra, adaptive ODE integration, and quadrature.

Quadrature is provided on real intervals and on arcs of the unit circle
traversed by ``w = exp(-2i*phi)``. Integration uses scipy's embedded
Runge-Kutta steppers with dense output; complex states are packed into real
vectors of twice the length.
"""

import logging
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad, solve_ivp

from dynscatter import config
from dynscatter.errors import NonFiniteIntegrand, NonFiniteState, StepLimitExceeded

logger = logging.getLogger(__name__)

# DOP853 spends 12 evaluations per step plus 3 for its dense interpolant.
_EVALS_PER_STEP = 16
_SPAN_SLACK = 1e-9


# ---------------------------------------------------------------------------
# 2x2 complex matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Complex2x2:
    """Immutable 2x2 complex matrix (row-major entries)."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def identity(cls) -> "Complex2x2":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def zero(cls) -> "Complex2x2":
        return cls(0j, 0j, 0j, 0j)

    @classmethod
    def from_array(cls, a) -> "Complex2x2":
        a = np.asarray(a, dtype=complex).reshape(2, 2)
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    def to_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def __matmul__(self, other: "Complex2x2") -> "Complex2x2":
        return Complex2x2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __add__(self, other: "Complex2x2") -> "Complex2x2":
        return Complex2x2(self.m11 + other.m11, self.m12 + other.m12,
                          self.m21 + other.m21, self.m22 + other.m22)

    def __sub__(self, other: "Complex2x2") -> "Complex2x2":
        return Complex2x2(self.m11 - other.m11, self.m12 - other.m12,
                          self.m21 - other.m21, self.m22 - other.m22)

    def scale(self, c: complex) -> "Complex2x2":
        return Complex2x2(c * self.m11, c * self.m12, c * self.m21, c * self.m22)

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> complex:
        return self.m11 + self.m22

    def inverse(self) -> "Complex2x2":
        d = self.det()
        if d == 0:
            raise ZeroDivisionError("singular 2x2 matrix")
        return Complex2x2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    def max_norm(self) -> float:
        return max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

class IntegratorConfig(BaseModel):
    """Tolerances and limits shared by the ODE integrator and the quadratures."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default_factory=lambda: config.DEFAULT_REL_TOL, gt=0)
    abs_tol: float = Field(default_factory=lambda: config.DEFAULT_ABS_TOL, gt=0)
    max_steps: int = Field(default_factory=lambda: config.DEFAULT_MAX_STEPS, ge=1)
    initial_step: Optional[float] = Field(default=None, gt=0)
    quad_limit: int = Field(default_factory=lambda: config.DEFAULT_QUAD_LIMIT, ge=1)
    method: Literal["DOP853", "RK45"] = "DOP853"


@dataclass(frozen=True)
class ArcPath:
    """Arc of the unit circle ``w = exp(-2i*phi)`` for ``phi`` in [phase_start, phase_end]."""

    phase_start: float
    phase_end: float

    def __post_init__(self):
        if not (math.isfinite(self.phase_start) and math.isfinite(self.phase_end)):
            raise ValueError("arc phases must be finite")
        if self.phase_end < self.phase_start:
            raise ValueError("phase_end must not precede phase_start")

    @property
    def windings(self) -> int:
        return int(math.floor((self.phase_end - self.phase_start) / math.pi + 1e-12))

    @staticmethod
    def point(phi):
        return np.exp(-2j * np.asarray(phi, dtype=float))

    def chunks(self) -> Iterator[Tuple[float, float]]:
        """Yield sub-intervals of the phase range, cut at every multiple of pi from the start."""
        a = self.phase_start
        j = 1
        while True:
            b = self.phase_start + j * math.pi
            if b >= self.phase_end - 1e-12 * max(1.0, abs(self.phase_end)):
                if self.phase_end > a:
                    yield a, self.phase_end
                return
            yield a, b
            a = b
            j += 1


# ---------------------------------------------------------------------------
# ODE integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Segment:
    t0: float
    t1: float
    solution: object  # scipy OdeSolution, or None for a zero-length span
    y0: np.ndarray

    def evaluate(self, tt: np.ndarray) -> np.ndarray:
        n = self.y0.size
        if self.solution is None:
            return np.repeat(self.y0[:, None], tt.size, axis=1)
        packed = np.asarray(self.solution(tt)).reshape(2 * n, tt.size)
        return packed[:n] + 1j * packed[n:]


@dataclass(frozen=True)
class Trajectory:
    """Dense complex trajectory made of breakpoint-delimited segments."""

    t: np.ndarray
    y: np.ndarray
    segments: Tuple[_Segment, ...]
    accepted_steps: int

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    @property
    def final(self) -> np.ndarray:
        return self.y[:, -1].copy()

    def __call__(self, t):
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.span
        slack = _SPAN_SLACK * (1.0 + max(abs(lo), abs(hi)))
        if np.any(tt < lo - slack) or np.any(tt > hi + slack):
            raise ValueError(f"evaluation point outside trajectory span [{lo}, {hi}]")
        tt = np.clip(tt, lo, hi)

        out = np.empty((self.y.shape[0], tt.size), dtype=complex)
        starts = np.array([seg.t0 for seg in self.segments])
        idx = np.clip(np.searchsorted(starts, tt, side="right") - 1, 0, len(self.segments) - 1)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if np.any(mask):
                out[:, mask] = seg.evaluate(tt[mask])
        return out[:, 0] if np.ndim(t) == 0 else out


class _EvaluationBudget:
    def __init__(self, max_steps: int):
        self.limit = max_steps * _EVALS_PER_STEP
        self.calls = 0

    def tick(self, t: float) -> None:
        self.calls += 1
        if self.calls > self.limit:
            raise StepLimitExceeded(
                f"integrator exceeded its step budget near t={t:.6g}",
                details={"evaluations": self.calls},
            )


def integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t_span: Sequence[float],
    y0,
    cfg: Optional[IntegratorConfig] = None,
    *,
    breakpoints: Sequence[float] = (),
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` for a complex state with dense output.

    Args:
        rhs: Vector field returning a complex array shaped like ``y``.
        t_span: Increasing finite interval ``(t0, t1)``; ``t0 == t1`` yields a
            constant trajectory.
        y0: Initial complex state.
        cfg: Tolerances; defaults to :class:`IntegratorConfig`.
        breakpoints: Known discontinuities of ``rhs``; the span is split there.

    Raises:
        StepLimitExceeded: The step budget ran out or the stepper gave up.
        NonFiniteState: ``rhs`` produced NaN or infinity.
    """
    cfg = cfg or IntegratorConfig()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValueError("t_span must be finite")
    if t1 < t0:
        raise ValueError("t_span must be increasing")

    y = np.array(y0, dtype=complex).ravel()
    n = y.size
    budget = _EvaluationBudget(cfg.max_steps)

    def packed_rhs(t, u):
        budget.tick(t)
        dz = np.asarray(rhs(t, u[:n] + 1j * u[n:]), dtype=complex).ravel()
        if not np.all(np.isfinite(dz)):
            raise NonFiniteState(f"vector field is not finite at t={t:.6g}")
        return np.concatenate([dz.real, dz.imag])

    cuts = sorted({float(b) for b in breakpoints if t0 < b < t1})
    edges = [t0, *cuts, t1]

    segments = []
    nodes_t = [np.array([t0])]
    nodes_y = [y[:, None].copy()]
    steps = 0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            segments.append(_Segment(a, b, None, y.copy()))
            continue

        first_step = min(cfg.initial_step, b - a) if cfg.initial_step else None
        sol = solve_ivp(
            packed_rhs,
            (a, b),
            np.concatenate([y.real, y.imag]),
            method=cfg.method,
            rtol=cfg.rel_tol,
            atol=cfg.abs_tol,
            dense_output=True,
            first_step=first_step,
        )
        if sol.status < 0 or sol.sol is None:
            raise StepLimitExceeded(
                f"integration failed on [{a:.6g}, {b:.6g}]: {sol.message}"
            )

        seg_y = sol.y[:n] + 1j * sol.y[n:]
        segments.append(_Segment(a, b, sol.sol, y.copy()))
        nodes_t.append(sol.t[1:])
        nodes_y.append(seg_y[:, 1:])
        steps += sol.t.size - 1
        y = seg_y[:, -1].copy()
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(f"state is not finite at t={b:.6g}")

    return Trajectory(
        t=np.concatenate(nodes_t),
        y=np.concatenate(nodes_y, axis=1),
        segments=tuple(segments),
        accepted_steps=steps,
    )


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

_SHORTFALLS: ContextVar[Optional[List[float]]] = ContextVar("quadrature_shortfalls", default=None)


@contextmanager
def quadrature_shortfalls() -> Iterator[List[float]]:
    """Collect the error estimates of quadratures that miss their tolerance.

    The collector is bound to the current context, so each sweep worker thread
    sees only its own shortfalls.
    """
    found: List[float] = []
    token = _SHORTFALLS.set(found)
    try:
        yield found
    finally:
        _SHORTFALLS.reset(token)


def _quad_part(g: Callable[[float], float], a: float, b: float, cfg: IntegratorConfig) -> float:
    # full_output reports non-convergence in the return value instead of a warning
    value, err, _info, *problem = quad(
        g, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.quad_limit, full_output=1,
    )
    if problem:
        logger.warning(
            "Quadrature on [%.6g, %.6g] did not reach tolerance (error estimate %.3e)",
            a, b, err,
        )
        found = _SHORTFALLS.get()
        if found is not None:
            found.append(float(err))
    return value


def quadrature_real(
    f: Callable[[float], complex],
    interval: Sequence[float],
    cfg: Optional[IntegratorConfig] = None,
    *,
    points: Sequence[float] = (),
) -> complex:
    """Adaptive estimate of the integral of a complex function over ``[x0, x1]``.

    Endpoints are never evaluated. Interior ``points`` split the interval.

    Raises:
        NonFiniteIntegrand: ``f`` returned NaN or infinity inside the interval.
    """
    cfg = cfg or IntegratorConfig()
    x0, x1 = float(interval[0]), float(interval[1])
    if x0 == x1:
        return 0j
    sign = 1.0
    if x1 < x0:
        x0, x1, sign = x1, x0, -1.0

    def checked(x: float) -> complex:
        value = complex(f(x))
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise NonFiniteIntegrand(f"integrand is not finite at x={x:.6g}")
        return value

    cuts = sorted({float(p) for p in points if x0 < p < x1})
    edges = [x0, *cuts, x1]
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        re = _quad_part(lambda x: checked(x).real, a, b, cfg)
        im = _quad_part(lambda x: checked(x).imag, a, b, cfg)
        total += complex(re, im)
    return sign * total


def quadrature_arc_lifted(
    h: Callable[[float], complex],
    path: ArcPath,
    cfg: Optional[IntegratorConfig] = None,
    *,
    points: Sequence[float] = (),
) -> complex:
    """Integrate ``h(phi) dw`` along the arc, with ``dw = -2i exp(-2i*phi) dphi``.

    ``h`` receives the phase, so integrands that depend on the position along a
    multiply wound arc (not only on ``w``) are supported.
    """
    cfg = cfg or IntegratorConfig()

    def integrand(phi: float) -> complex:
        return complex(h(phi)) * (-2j) * complex(np.exp(-2j * phi))

    total = 0j
    for a, b in path.chunks():
        inner = [p for p in points if a < p < b]
        total += quadrature_real(integrand, (a, b), cfg, points=inner)
    return total


def quadrature_arc(
    g: Callable[[complex], complex],
    path: ArcPath,
    cfg: Optional[IntegratorConfig] = None,
) -> complex:
    """Integrate ``g(w) dw`` along the (possibly multiply wound) arc.

    The orientation is clockwise: one full winding of ``1/w`` gives ``-2*pi*i``.
    """
    return quadrature_arc_lifted(lambda phi: g(complex(path.point(phi))), path, cfg)
