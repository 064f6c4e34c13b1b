import cmath
import math

import numpy as np
import pytest

from dynscatter.errors import NonFiniteIntegrand, NonFiniteState, StepLimitExceeded
from dynscatter.numerics import (
    ArcPath,
    Complex2x2,
    IntegratorConfig,
    integrate_ode,
    quadrature_arc,
    quadrature_real,
    quadrature_shortfalls,
)


def test_matrix_algebra():
    a = Complex2x2(1 + 1j, 2, -0.5j, 3)
    b = Complex2x2(0, 1j, 1, 2 - 1j)
    prod = (a @ b).to_array()
    assert np.allclose(prod, a.to_array() @ b.to_array())
    assert abs(a.det() - np.linalg.det(a.to_array())) < 1e-14
    assert (a @ a.inverse() - Complex2x2.identity()).max_norm() < 1e-14
    assert a.trace() == 4 + 1j


def test_singular_matrix_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Complex2x2(1, 2, 2, 4).inverse()


def test_integrate_ode_matches_exponential():
    """y' = i y from 0 to 3 gives exp(3i)."""
    traj = integrate_ode(lambda t, y: 1j * y, (0.0, 3.0), [1.0])
    assert abs(traj.final[0] - cmath.exp(3j)) < 1e-9
    mid = traj(1.2)
    assert mid.shape == (1,)
    assert abs(mid[0] - cmath.exp(1.2j)) < 1e-9
    assert traj(np.array([0.5, 2.5])).shape == (1, 2)
    assert traj.accepted_steps > 0


def test_integrate_ode_splits_at_breakpoints():
    """A kink in the vector field is integrated piecewise."""
    def rhs(t, y):
        return np.array([abs(t - 1.0)]) + 0j

    traj = integrate_ode(rhs, (0.0, 2.0), [0.0], breakpoints=[1.0, 5.0])
    assert len(traj.segments) == 2
    assert abs(traj.final[0] - 1.0) < 1e-9


def test_zero_length_span_is_constant():
    traj = integrate_ode(lambda t, y: y, (1.0, 1.0), [2.0 + 1j])
    assert traj.final[0] == 2.0 + 1j
    assert traj.accepted_steps == 0


def test_non_finite_vector_field_is_reported():
    with pytest.raises(NonFiniteState):
        integrate_ode(lambda t, y: np.array([np.nan + 0j]), (0.0, 1.0), [1.0])


def test_step_budget_is_enforced():
    tight = IntegratorConfig(max_steps=2, rel_tol=1e-12, abs_tol=1e-14)
    with pytest.raises(StepLimitExceeded):
        integrate_ode(lambda t, y: 50j * y, (0.0, 20.0), [1.0], tight)


def test_evaluation_outside_span_rejected():
    traj = integrate_ode(lambda t, y: 1j * y, (0.0, 1.0), [1.0])
    with pytest.raises(ValueError):
        traj(1.5)


def test_quadrature_real_complex_integrand():
    value = quadrature_real(lambda x: cmath.exp(1j * x), (0.0, 1.0))
    assert abs(value - (cmath.exp(1j) - 1) / 1j) < 1e-10


def test_quadrature_real_reversed_and_empty():
    f = lambda x: x * x + 1j  # noqa: E731
    assert abs(quadrature_real(f, (2.0, 0.0)) + quadrature_real(f, (0.0, 2.0))) < 1e-12
    assert quadrature_real(f, (1.0, 1.0)) == 0j


def test_quadrature_real_rejects_non_finite():
    with pytest.raises(NonFiniteIntegrand):
        quadrature_real(lambda x: float("inf"), (0.0, 1.0))


@pytest.mark.parametrize("windings", [1, 2, 5])
def test_arc_quadrature_winds_clockwise(windings):
    """The integral of dw/w picks up -2 pi i per turn."""
    path = ArcPath(0.3, 0.3 + windings * math.pi)
    assert path.windings == windings
    value = quadrature_arc(lambda w: 1 / w, path)
    assert abs(value + 2j * math.pi * windings) < 1e-9


def test_arc_quadrature_of_entire_function_vanishes_on_closed_arc():
    value = quadrature_arc(lambda w: w ** 3 - 2 * w, ArcPath(0.0, 2 * math.pi))
    assert abs(value) < 1e-10


def test_arc_chunks_cover_range():
    path = ArcPath(0.0, 2.5 * math.pi)
    chunks = list(path.chunks())
    assert len(chunks) == 3
    assert chunks[0][0] == 0.0
    assert abs(chunks[-1][1] - 2.5 * math.pi) < 1e-15
    assert all(abs(b - a) <= math.pi + 1e-12 for a, b in chunks)


def test_arc_rejects_reversed_phases():
    with pytest.raises(ValueError):
        ArcPath(1.0, 0.5)


def test_matrix_product_is_associative(rng):
    def draw():
        return Complex2x2.from_array(rng.normal(size=4) + 1j * rng.normal(size=4))

    for _ in range(50):
        a, b, c = draw(), draw(), draw()
        assert ((a @ b) @ c - a @ (b @ c)).max_norm() < 1e-12


def test_tightening_tolerances_reduces_error():
    """y' = i y over several periods: each tighter setting lands closer to exp(20i)."""
    errors = []
    for tol in (1e-4, 1e-6, 1e-8, 1e-10):
        cfg = IntegratorConfig(rel_tol=tol, abs_tol=tol * 1e-2)
        traj = integrate_ode(lambda t, y: 1j * y, (0.0, 20.0), [1.0], cfg)
        errors.append(abs(traj.final[0] - cmath.exp(20j)))
    assert all(tight < loose for loose, tight in zip(errors, errors[1:]))
    assert errors[-1] < 1e-8


def test_unconverged_quadrature_is_recorded():
    starved = IntegratorConfig(rel_tol=1e-14, abs_tol=1e-14, quad_limit=1)

    def wave(x):
        return cmath.exp(50j * x)

    with quadrature_shortfalls() as found:
        quadrature_real(wave, (0.0, 10.0), starved)
    assert found
    assert all(err > 0 for err in found)

    with quadrature_shortfalls() as clean:
        value = quadrature_real(wave, (0.0, 10.0))
    assert not clean
    assert abs(value - (cmath.exp(500j) - 1) / 50j) < 1e-9


def test_shortfalls_are_scoped_to_their_collector():
    starved = IntegratorConfig(quad_limit=1)
    with quadrature_shortfalls() as outer:
        with quadrature_shortfalls() as inner:
            quadrature_real(lambda x: cmath.exp(50j * x), (0.0, 10.0), starved)
        assert inner
        assert not outer
