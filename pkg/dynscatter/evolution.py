"""Evolution-operator route.

The transfer matrix of the truncated potential v_a, written as a function of
alpha = k*a, obeys

    i dM/dalpha = H(alpha) M,    M(k*a-) = 1,

with the traceless matrix Hamiltonian

    H(tau) = v(tau/k) / (2 k^2) * [[1, exp(-2i tau)], [-exp(2i tau), -1]].

H vanishes outside the support, so integrating over [k*a-, k*a+] gives the
full transfer matrix M = M(k*a+).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from dynscatter import config
from dynscatter.errors import DeterminantDrift, InvalidConfig
from dynscatter.numerics import Complex2x2, IntegratorConfig, Trajectory, integrate_ode
from dynscatter.potential import Potential, evaluate, tail, truncate
from dynscatter.utils.logger import timed_solve

logger = logging.getLogger(__name__)


def hamiltonian_matrix(v: complex, k: float, tau: float) -> Complex2x2:
    """H for a given potential value ``v = v(tau/k)``."""
    c = complex(v) / (2.0 * k * k)
    e = complex(math.cos(2.0 * tau), -math.sin(2.0 * tau))
    return Complex2x2(c, c * e, -c / e, -c)


@dataclass(frozen=True)
class MatrixHamiltonian:
    potential: Potential
    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise InvalidConfig(f"wavenumber must be positive, got {self.k}")

    @property
    def alpha_span(self) -> Tuple[float, float]:
        return self.k * self.potential.lower, self.k * self.potential.upper

    def __call__(self, tau: float) -> Complex2x2:
        return hamiltonian_at(self, tau)


def hamiltonian_at(h: MatrixHamiltonian, tau: float) -> Complex2x2:
    """Evaluate H(tau); zero outside ``[k*a-, k*a+]``."""
    v = evaluate(h.potential, tau / h.k, h.k)
    return hamiltonian_matrix(v, h.k, tau)


@dataclass(frozen=True)
class TransferTrajectory:
    """M(alpha) of the truncated potentials over ``[k*a-, k*a+]``.

    ``alpha`` holds the accepted integrator steps merged with any requested
    grid; ``matrices[i]`` is M(alpha[i]) as a 2x2 array.
    """

    k: float
    alpha: np.ndarray
    matrices: np.ndarray
    hamiltonian: MatrixHamiltonian = field(repr=False)
    dense: Trajectory = field(repr=False)
    accepted_steps: int = 0

    @property
    def final(self) -> Complex2x2:
        return Complex2x2.from_array(self.matrices[-1])

    @property
    def alpha_span(self) -> Tuple[float, float]:
        return self.hamiltonian.alpha_span

    def at(self, alpha: float) -> Complex2x2:
        """M(alpha): identity below ``k*a-``, frozen at M above ``k*a+``."""
        lo, hi = self.alpha_span
        if alpha <= lo:
            return Complex2x2.identity()
        if alpha >= hi:
            return self.final
        return Complex2x2.from_array(self.dense(alpha).reshape(2, 2))

    def det_residuals(self) -> np.ndarray:
        m = self.matrices
        det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
        return np.abs(det - 1.0)

    def to_rows(self) -> List[List[float]]:
        """Rows of (alpha, Re/Im of m11, m12, m21, m22, |det - 1|)."""
        rows = []
        for a, m, r in zip(self.alpha, self.matrices, self.det_residuals()):
            row = [float(a)]
            for entry in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]):
                row.extend([entry.real, entry.imag])
            row.append(float(r))
            rows.append(row)
        return rows


TRAJECTORY_COLUMNS = [
    "alpha",
    "re_m11", "im_m11", "re_m12", "im_m12",
    "re_m21", "im_m21", "re_m22", "im_m22",
    "det_residual",
]


@timed_solve("evolution")
def evolve_transfer(
    p: Potential,
    k: float,
    cfg: Optional[IntegratorConfig] = None,
    *,
    alpha_grid: Optional[Sequence[float]] = None,
) -> TransferTrajectory:
    """Integrate the matrix equation for M(alpha) across the support.

    The 2x2 complex system is integrated as an 8-dimensional real one, split at
    the potential's breakpoints.

    Raises:
        StepLimitExceeded: The integrator gave up.
        DeterminantDrift: |det M - 1| exceeded the drift limit somewhere.
    """
    h = MatrixHamiltonian(p, float(k))
    cfg = cfg or IntegratorConfig()
    lo, hi = h.alpha_span

    def rhs(alpha, y):
        v = evaluate(p, alpha / h.k, h.k)
        if v == 0:
            return np.zeros(4, dtype=complex)
        c = v / (2.0 * h.k * h.k)
        e = np.exp(-2j * alpha)
        # -i H M, row by row
        m11, m12, m21, m22 = y
        top = c * (m11 + e * m21)
        bottom = -c * (m11 / e + m21)
        top2 = c * (m12 + e * m22)
        bottom2 = -c * (m12 / e + m22)
        return -1j * np.array([top, top2, bottom, bottom2])

    dense = integrate_ode(
        rhs,
        (lo, hi),
        np.array([1, 0, 0, 1], dtype=complex),
        cfg,
        breakpoints=[h.k * b for b in p.breakpoints],
    )

    alpha = dense.t
    states = dense.y
    if alpha_grid is not None:
        extra = np.asarray([a for a in alpha_grid if lo <= a <= hi], dtype=float)
        if extra.size:
            alpha = np.concatenate([alpha, extra])
            order = np.argsort(alpha, kind="stable")
            states = np.concatenate([states, dense(extra).reshape(4, -1)], axis=1)
            alpha, states = alpha[order], states[:, order]

    traj = TransferTrajectory(
        k=h.k,
        alpha=alpha,
        matrices=states.T.reshape(-1, 2, 2),
        hamiltonian=h,
        dense=dense,
        accepted_steps=dense.accepted_steps,
    )

    drift = float(np.max(traj.det_residuals()))
    logger.debug("evolution k=%.6g: %d steps, max |det - 1| = %.3e", k, dense.accepted_steps, drift)
    if drift > config.DETERMINANT_DRIFT_LIMIT:
        raise DeterminantDrift(
            f"|det M - 1| reached {drift:.3e} at k={k:.6g}",
            details={"k": k, "drift": drift},
        )
    return traj


def compose_check(
    p: Potential,
    k: float,
    split_a: float,
    cfg: Optional[IntegratorConfig] = None,
) -> float:
    """Max-norm of ``M2 M1 - M`` for the pieces of p left and right of ``split_a``."""
    if not p.is_null and not (p.lower <= split_a <= p.upper):
        raise InvalidConfig(f"split point {split_a} lies outside the support [{p.lower}, {p.upper}]")
    m1 = evolve_transfer(truncate(p, split_a), k, cfg).final
    m2 = evolve_transfer(tail(p, split_a), k, cfg).final
    m = evolve_transfer(p, k, cfg).final
    return (m2 @ m1 - m).max_norm()


def dynamical_residual(traj: TransferTrajectory, alpha: float, h: float = 1e-4) -> float:
    """Max-norm of ``i (dM/dalpha) M^-1 - H(alpha)`` by centered differences."""
    lo, hi = traj.alpha_span
    if not (lo + h <= alpha <= hi - h):
        raise InvalidConfig(f"alpha={alpha} must lie at least h={h} inside [{lo}, {hi}]")
    dm = (traj.at(alpha + h) - traj.at(alpha - h)).scale(1.0 / (2.0 * h))
    lhs = (dm @ traj.at(alpha).inverse()).scale(1j)
    return (lhs - hamiltonian_at(traj.hamiltonian, alpha)).max_norm()
