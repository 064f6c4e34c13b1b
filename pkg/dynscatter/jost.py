"""Jost-solution route and its S(z) and Riccati reformulations.

All three start from the same initial data at the left edge a- of the support:

    psi(a-) = exp(-i k a-),   psi'(a-) = -i k exp(-i k a-)

and are integrated in the real variable x (or a). On the arc z = exp(-2i k a)
the auxiliary function S(z) = exp(-i k a) psi(a) solves

    z^2 S''(z) + v / (4 k^2) S(z) = 0,   S(z-) = z-,  S'(z-) = 1,

and R^r(z) = S(z)/S'(z) - z solves a Riccati equation with R^r(z-) = 0.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from dynscatter import config
from dynscatter.errors import BlowUp, InvalidConfig
from dynscatter.numerics import IntegratorConfig, Trajectory, integrate_ode
from dynscatter.potential import Potential, evaluate
from dynscatter.utils.logger import timed_solve

logger = logging.getLogger(__name__)


def _check_k(k: float) -> float:
    if not k > 0:
        raise InvalidConfig(f"wavenumber must be positive, got {k}")
    return float(k)


# ---------------------------------------------------------------------------
# Jost solution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JostSolution:
    """Dense trajectory of (psi, psi') over the support."""

    k: float
    potential: Potential = field(repr=False)
    trajectory: Trajectory = field(repr=False)

    @property
    def accepted_steps(self) -> int:
        return self.trajectory.accepted_steps

    @property
    def span(self):
        return self.potential.lower, self.potential.upper

    def psi(self, x):
        return self.trajectory(x)[0]

    def dpsi(self, x):
        return self.trajectory(x)[1]

    def f_plus(self, x):
        y = self.trajectory(x)
        return y[1] + 1j * self.k * y[0]

    def f_minus(self, x):
        y = self.trajectory(x)
        return y[1] - 1j * self.k * y[0]


@timed_solve("jost")
def solve_jost(p: Potential, k: float, cfg: Optional[IntegratorConfig] = None) -> JostSolution:
    """Solve ``-psi'' + (v - k^2) psi = 0`` from a- with the Jost initial data."""
    k = _check_k(k)
    a0 = p.lower
    e0 = np.exp(-1j * k * a0)

    def rhs(x, y):
        v = evaluate(p, x, k)
        return np.array([y[1], (v - k * k) * y[0]])

    traj = integrate_ode(
        rhs,
        (p.lower, p.upper),
        np.array([e0, -1j * k * e0]),
        cfg,
        breakpoints=p.breakpoints,
    )
    return JostSolution(k, p, traj)


# ---------------------------------------------------------------------------
# S(z) on the arc z = exp(-2ika)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SFunction:
    """S and S' along the arc, indexed by the real variable a."""

    k: float
    potential: Potential = field(repr=False)
    trajectory: Trajectory = field(repr=False)

    @property
    def accepted_steps(self) -> int:
        return self.trajectory.accepted_steps

    @property
    def z_minus(self) -> complex:
        return complex(np.exp(-2j * self.k * self.potential.lower))

    @property
    def z_plus(self) -> complex:
        return complex(np.exp(-2j * self.k * self.potential.upper))

    def z(self, a):
        return np.exp(-2j * self.k * np.asarray(a, dtype=float))

    def s(self, a):
        return self.trajectory(a)[0]

    def s_prime(self, a):
        return self.trajectory(a)[1]

    def s_second(self, a):
        """S''(z) from the S equation itself."""
        z = self.z(a)
        v = evaluate(self.potential, a, self.k)
        return -v * self.s(a) / (4.0 * self.k ** 2 * z ** 2)

    def psi(self, a):
        """``exp(i k a) S(exp(-2ika))``, the Jost solution at a."""
        return np.exp(1j * self.k * np.asarray(a, dtype=float)) * self.s(a)


@timed_solve("s-form")
def solve_s(p: Potential, k: float, cfg: Optional[IntegratorConfig] = None) -> SFunction:
    """Integrate the S equation in a, with ``dz/da = -2ik z``."""
    k = _check_k(k)
    z_minus = np.exp(-2j * k * p.lower)

    def rhs(a, y):
        s, sp = y
        z = np.exp(-2j * k * a)
        v = evaluate(p, a, k)
        return np.array([-2j * k * z * sp, 1j * v * s / (2.0 * k * z)])

    traj = integrate_ode(
        rhs,
        (p.lower, p.upper),
        np.array([z_minus, 1.0 + 0j]),
        cfg,
        breakpoints=p.breakpoints,
    )
    return SFunction(k, p, traj)


# ---------------------------------------------------------------------------
# Riccati equation for the truncated right reflection amplitude
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RiccatiTrajectory:
    k: float
    potential: Potential = field(repr=False)
    trajectory: Trajectory = field(repr=False)

    @property
    def accepted_steps(self) -> int:
        return self.trajectory.accepted_steps

    @property
    def final(self) -> complex:
        return complex(self.trajectory.final[0])

    def right_reflection(self, a):
        """R^r of the potential truncated at a."""
        return self.trajectory(a)[0]


@timed_solve("riccati")
def solve_riccati(p: Potential, k: float, cfg: Optional[IntegratorConfig] = None) -> RiccatiTrajectory:
    """Integrate ``dR/da = -i v (R + z)^2 / (2 k z)`` with ``R(a-) = 0``.

    Raises:
        BlowUp: |R| exceeded the blow-up threshold (S' is near zero on the arc).
    """
    k = _check_k(k)
    limit = config.RICCATI_BLOWUP

    def rhs(a, y):
        r = y[0]
        if abs(r) > limit:
            raise BlowUp(
                f"Riccati solution escaped at a={a:.6g} (|R|={abs(r):.3e})",
                details={"a": a, "k": k},
            )
        z = np.exp(-2j * k * a)
        v = evaluate(p, a, k)
        return np.array([-1j * v * (r + z) ** 2 / (2.0 * k * z)])

    traj = integrate_ode(rhs, (p.lower, p.upper), np.array([0j]), cfg, breakpoints=p.breakpoints)
    if abs(traj.final[0]) > limit:
        raise BlowUp(f"Riccati solution escaped at a={p.upper:.6g}", details={"k": k})
    return RiccatiTrajectory(k, p, traj)
