"""Finite-range scattering potentials v(x) on [a-, a+].

Potentials are immutable. Every evaluation takes the wavenumber k so that
energy-dependent profiles (optical potentials v = k^2 (1 - n^2)) share one
interface with plain ones. Outside the support the value is exactly zero.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from dynscatter.errors import InvalidConfig

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray, float], np.ndarray]


class PotentialKind(str, Enum):
    ZERO = "zero"
    BARRIER = "barrier"
    MODULATED_EXPONENTIAL = "modulated_exponential"
    INDEX_PROFILE = "index_profile"
    SAMPLED = "sampled"
    CLOSURE = "closure"


def _zero_evaluator(x: np.ndarray, k: float) -> np.ndarray:
    return np.zeros(x.shape, dtype=complex)


@dataclass(frozen=True)
class Potential:
    """A finite-range potential.

    Attributes:
        kind: Family tag, informational except for export.
        support: ``(a_minus, a_plus)``; equal ends denote the zero potential.
        evaluator: Vectorized ``(x, k) -> v`` valid on the support only.
        params: Family parameters (height, length, ...).
        breakpoints: Interior points where v is discontinuous.
    """

    kind: PotentialKind
    support: Tuple[float, float]
    evaluator: Evaluator = field(repr=False)
    params: Mapping[str, Any] = field(default_factory=dict)
    breakpoints: Tuple[float, ...] = ()

    def __post_init__(self):
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidConfig("potential support must be finite")
        if hi < lo:
            raise InvalidConfig(f"invalid support [{lo}, {hi}]")

    @classmethod
    def zero(cls, at: float = 0.0) -> "Potential":
        return cls(PotentialKind.ZERO, (float(at), float(at)), _zero_evaluator)

    @property
    def lower(self) -> float:
        return self.support[0]

    @property
    def upper(self) -> float:
        return self.support[1]

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def is_null(self) -> bool:
        return self.upper <= self.lower

    def __call__(self, x, k: float):
        return evaluate(self, x, k)


@dataclass(frozen=True)
class IndexProfileRecord:
    """Samples of n^2(x) on a uniform grid over [0, L]."""

    k0: float
    length: float
    x: np.ndarray
    n2: np.ndarray

    def oscillation_amplitude(self) -> float:
        """max |n^2 - 1| over the samples."""
        return float(np.max(np.abs(self.n2 - 1.0)))

    def to_rows(self) -> list:
        """Rows of (k0 x, x, Re n^2 - 1, Im n^2)."""
        return [
            [self.k0 * xi, xi, ni.real - 1.0, ni.imag]
            for xi, ni in zip(self.x.tolist(), self.n2.tolist())
        ]


PROFILE_COLUMNS = ["k0x", "x", "re_n2_minus_1", "im_n2"]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(p: Potential, x, k: float):
    """Return v(x) at wavenumber k; exactly 0 outside the support."""
    if not k > 0:
        raise InvalidConfig(f"wavenumber must be positive, got {k}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xs.shape, dtype=complex)
    if not p.is_null:
        inside = (xs >= p.lower) & (xs <= p.upper)
        if np.any(inside):
            out[inside] = p.evaluator(xs[inside], k)
    if np.ndim(x) == 0:
        return complex(out[0])
    return out


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def barrier(height: complex, length: float, offset: float = 0.0) -> Potential:
    """Rectangular barrier of (complex) height on [offset, offset + length]."""
    if not length > 0:
        raise InvalidConfig("barrier length must be positive")
    h = complex(height)
    return Potential(
        PotentialKind.BARRIER,
        (float(offset), float(offset) + float(length)),
        lambda x, k: np.full(x.shape, h, dtype=complex),
        {"height": h, "length": float(length), "offset": float(offset)},
    )


def modulated_exponential(height: complex, k0: float, length: float) -> Potential:
    """``height * exp(-4i k0 x)`` on [0, length]."""
    if not (k0 > 0 and length > 0):
        raise InvalidConfig("k0 and length must be positive")
    h, q = complex(height), float(k0)
    return Potential(
        PotentialKind.MODULATED_EXPONENTIAL,
        (0.0, float(length)),
        lambda x, k: h * np.exp(-4j * q * x),
        {"height": h, "k0": q, "length": float(length)},
    )


def sampled(x: Sequence[float], values: Sequence[complex], interpolation: str = "cubic") -> Potential:
    """Potential interpolated from samples on a grid (cubic spline or linear)."""
    xs = np.asarray(x, dtype=float)
    vs = np.asarray(values, dtype=complex)
    if xs.ndim != 1 or xs.size < 2 or xs.shape != vs.shape:
        raise InvalidConfig("sampled potential needs matching 1-d grids with at least 2 points")
    if np.any(np.diff(xs) <= 0):
        raise InvalidConfig("sample grid must be strictly increasing")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
        raise InvalidConfig("sampled potential contains non-finite values")

    if interpolation == "cubic":
        re, im = CubicSpline(xs, vs.real), CubicSpline(xs, vs.imag)

        def evaluator(xx, k):
            return re(xx) + 1j * im(xx)
    elif interpolation == "linear":
        def evaluator(xx, k):
            return np.interp(xx, xs, vs.real) + 1j * np.interp(xx, xs, vs.imag)
    else:
        raise InvalidConfig(f"unknown interpolation rule: {interpolation}")

    return Potential(
        PotentialKind.SAMPLED,
        (float(xs[0]), float(xs[-1])),
        evaluator,
        {"x": xs, "values": vs, "interpolation": interpolation},
    )


def closure(
    func: Callable[[np.ndarray, float], Any],
    support: Tuple[float, float],
    breakpoints: Sequence[float] = (),
    params: Optional[Mapping[str, Any]] = None,
) -> Potential:
    """Wrap an arbitrary vectorized ``(x, k) -> v`` evaluator."""
    def evaluator(x, k):
        return np.broadcast_to(np.asarray(func(x, k), dtype=complex), x.shape).copy()

    return Potential(
        PotentialKind.CLOSURE,
        (float(support[0]), float(support[1])),
        evaluator,
        dict(params or {}),
        tuple(sorted(float(b) for b in breakpoints)),
    )


def potential_from_index(
    n2: Callable[[np.ndarray], Any],
    k: float,
    support: Tuple[float, float],
    *,
    dispersive: bool = True,
    params: Optional[Mapping[str, Any]] = None,
) -> Potential:
    """Optical potential ``v(x) = k^2 (1 - n^2(x))`` on the support.

    With ``dispersive`` (default) the index is a fixed material property and k
    is the query wavenumber; otherwise k is frozen at the reference value.
    """
    if not k > 0:
        raise InvalidConfig(f"reference wavenumber must be positive, got {k}")
    k_ref = float(k)

    def evaluator(x, kq):
        kk = kq if dispersive else k_ref
        return kk * kk * (1.0 - np.asarray(n2(x), dtype=complex))

    meta = {"reference_k": k_ref, "dispersive": dispersive, "index_squared": n2}
    meta.update(params or {})
    return Potential(
        PotentialKind.INDEX_PROFILE,
        (float(support[0]), float(support[1])),
        evaluator,
        meta,
    )


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------

def _restrict(p: Potential, lo: float, hi: float) -> Potential:
    new_lo, new_hi = max(p.lower, lo), min(p.upper, hi)
    if p.is_null or new_hi <= new_lo:
        return Potential.zero(at=min(max(lo, p.lower), p.upper))
    params = dict(p.params)
    if p.kind is PotentialKind.BARRIER:
        params.update(length=new_hi - new_lo, offset=new_lo)
    return replace(
        p,
        support=(new_lo, new_hi),
        params=params,
        breakpoints=tuple(b for b in p.breakpoints if new_lo < b < new_hi),
    )


def truncate(p: Potential, a: float) -> Potential:
    """``v_a(x) = v(x) * theta(a - x)``."""
    return _restrict(p, -math.inf, float(a))


def tail(p: Potential, a: float) -> Potential:
    """``v - v_a``: the part of the potential to the right of a."""
    return _restrict(p, float(a), math.inf)


def parity_reflect(p: Potential) -> Potential:
    """``v^P(x) = v(-x)`` on [-a+, -a-]."""
    if p.is_null:
        return Potential.zero(at=-p.lower)
    inner = p.evaluator
    params = dict(p.params)
    params["reflected"] = not params.get("reflected", False)
    if p.kind is PotentialKind.BARRIER:
        params["offset"] = -p.upper
    return Potential(
        p.kind,
        (-p.upper, -p.lower),
        lambda x, k: inner(-x, k),
        params,
        tuple(sorted(-b for b in p.breakpoints)),
    )


# ---------------------------------------------------------------------------
# JSON specs
# ---------------------------------------------------------------------------

def potential_from_spec(spec) -> Potential:
    """Build a Potential from a validated spec model (see ``models.potential_spec``)."""
    from dynscatter.models.potential_spec import (
        BarrierSpec,
        DesignedSpec,
        ModulatedExponentialSpec,
        SampledSpec,
        ZeroSpec,
    )

    if isinstance(spec, ZeroSpec):
        return Potential.zero(at=spec.at)
    if isinstance(spec, BarrierSpec):
        return barrier(spec.height, spec.length, spec.offset)
    if isinstance(spec, ModulatedExponentialSpec):
        return modulated_exponential(spec.height, spec.k0, spec.length)
    if isinstance(spec, SampledSpec):
        im = spec.im if spec.im is not None else [0.0] * len(spec.x)
        values = np.asarray(spec.re) + 1j * np.asarray(im)
        return sampled(spec.x, values, spec.interpolation)
    if isinstance(spec, DesignedSpec):
        # Lazy import: design builds on this module.
        from dynscatter.design import design
        from dynscatter.models.design_spec import DesignSpec

        result = design(
            DesignSpec.from_k0L(spec.k0L, spec.goal, gamma=spec.gamma, k0=spec.k0),
            dispersive=spec.dispersive,
        )
        return result.potential
    raise InvalidConfig(f"unsupported potential spec: {type(spec).__name__}")
