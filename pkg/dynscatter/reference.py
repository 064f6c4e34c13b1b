"""Closed-form oracles used to anchor the numerical routes.

Two exactly solvable cases:

- the rectangular barrier v = height on [0, L], whose M(alpha) is known for
  every truncation point alpha = k a;
- the modulated exponential v = height * exp(-4i k0 x) on [0, L], whose
  amplitudes at k = k0 depend on L only through exp(-2i k0 L).
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from dynscatter.amplitudes import Route, ScatteringAmplitudes, amplitudes_from_matrix
from dynscatter.errors import InvalidConfig, PoleEncountered
from dynscatter.evolution import hamiltonian_matrix
from dynscatter.numerics import Complex2x2

_SERIES_CUTOFF = 1e-4
_POLE_FLOOR = 1e-14


def _sin_over(n: complex, alpha: float) -> complex:
    """``sin(n*alpha)/n``, with its series near n*alpha = 0."""
    x = n * alpha
    if abs(x) < _SERIES_CUTOFF:
        x2 = x * x
        return alpha * (1 - x2 / 6 + x2 * x2 / 120)
    return cmath.sin(x) / n


def _sinc(b: complex) -> complex:
    if abs(b) < _SERIES_CUTOFF:
        b2 = b * b
        return 1 - b2 / 6 + b2 * b2 / 120
    return cmath.sin(b) / b


@dataclass(frozen=True)
class BarrierClosedForm:
    height: complex
    k: float
    length: float

    def __post_init__(self):
        if not (self.k > 0 and self.length > 0):
            raise InvalidConfig("barrier oracle needs k > 0 and L > 0")

    @property
    def n(self) -> complex:
        return cmath.sqrt(1 - complex(self.height) / self.k ** 2)

    @property
    def alpha_end(self) -> float:
        return self.k * self.length


def barrier_transfer(alpha: float, params: BarrierClosedForm, n: Optional[complex] = None) -> Complex2x2:
    """M(alpha) of the barrier truncated at a = alpha/k.

    Identity for alpha <= 0 and frozen at M(kL) beyond kL. Every entry depends
    on n only through cos(n alpha), n^2 and sin(n alpha)/n, so either square
    root may be passed as ``n``.
    """
    if alpha <= 0:
        return Complex2x2.identity()
    alpha = min(alpha, params.alpha_end)
    n = params.n if n is None else complex(n)
    n2 = n * n
    c = cmath.cos(n * alpha)
    s = _sin_over(n, alpha)
    em, ep = cmath.exp(-1j * alpha), cmath.exp(1j * alpha)
    return Complex2x2(
        (c + 0.5j * (n2 + 1) * s) * em,
        0.5j * (n2 - 1) * s * em,
        -0.5j * (n2 - 1) * s * ep,
        (c - 0.5j * (n2 + 1) * s) * ep,
    )


def barrier_amplitudes(params: BarrierClosedForm) -> ScatteringAmplitudes:
    return amplitudes_from_matrix(barrier_transfer(params.alpha_end, params), params.k, Route.CLOSED_FORM)


def barrier_hamiltonian_check(params: BarrierClosedForm, alpha: float, h: float = 1e-4) -> float:
    """Max-norm of ``(dM/dalpha) M^-1 + i H(alpha)`` by centered differences on the closed form."""
    if not (h < alpha < params.alpha_end - h):
        raise InvalidConfig(f"alpha={alpha} must lie at least h={h} inside (0, {params.alpha_end})")
    dm = (barrier_transfer(alpha + h, params) - barrier_transfer(alpha - h, params)).scale(1 / (2 * h))
    lhs = dm @ barrier_transfer(alpha, params).inverse()
    return (lhs + hamiltonian_matrix(params.height, params.k, alpha).scale(1j)).max_norm()


@dataclass(frozen=True)
class ExpPotentialClosedForm:
    height: complex
    k0: float
    length: float

    def __post_init__(self):
        if not (self.k0 > 0 and self.length > 0):
            raise InvalidConfig("exponential oracle needs k0 > 0 and L > 0")

    @property
    def z_plus(self) -> complex:
        return cmath.exp(-2j * self.k0 * self.length)

    @property
    def a(self) -> complex:
        return cmath.sqrt(complex(self.height)) / (2 * self.k0)

    @property
    def b(self) -> complex:
        return self.a * (1 - self.z_plus)


def exp_potential_amplitudes(params: ExpPotentialClosedForm) -> ScatteringAmplitudes:
    """Amplitudes of the modulated exponential at k = k0.

    Written as T = 1/(cos b + a sin b), R^l = -a sin b T and
    R^r = T (cos b - sin b / a) - z+, which stay finite at b = 0 and a = 0.

    Raises:
        PoleEncountered: cos b + a sin b vanishes.
    """
    a, z_plus = params.a, params.z_plus
    c = 1 - z_plus
    b = a * c
    denom = cmath.cos(b) + a * cmath.sin(b)
    if abs(denom) < _POLE_FLOOR:
        raise PoleEncountered(
            f"transmission pole for height={params.height}, k0L={params.k0 * params.length:.6g}",
            details={"abs_denominator": abs(denom)},
        )
    t = 1 / denom
    return ScatteringAmplitudes(
        k=params.k0,
        left_reflection=-a * cmath.sin(b) * t,
        right_reflection=t * (cmath.cos(b) - c * _sinc(b)) - z_plus,
        transmission=t,
        route=Route.CLOSED_FORM,
    )


def exp_period_residual(params: ExpPotentialClosedForm) -> float:
    """Largest amplitude change when L grows by pi/k0."""
    shifted = ExpPotentialClosedForm(params.height, params.k0, params.length + math.pi / params.k0)
    x, y = exp_potential_amplitudes(params), exp_potential_amplitudes(shifted)
    return max(
        abs(x.transmission - y.transmission),
        abs(x.left_reflection - y.left_reflection),
        abs(x.right_reflection - y.right_reflection),
    )
