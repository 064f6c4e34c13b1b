import cmath
import math
from unittest.mock import patch

import numpy as np
import pytest

from dynscatter.amplitudes import (
    QUADRATURE_INACCURATE,
    Route,
    SWEEP_COLUMNS,
    ScatteringAmplitudes,
    amplitudes_from_jost,
    amplitudes_from_matrix,
    classify,
    matrix_from_amplitudes,
    scatter,
    sweep,
    transfer_from_jost,
    truncation_family,
)
from dynscatter.errors import (
    InvalidConfig,
    InvalidTransferMatrix,
    SpectralSingularityEncountered,
    StepLimitExceeded,
    ZeroTransmission,
)
from dynscatter.evolution import evolve_transfer
from dynscatter.jost import solve_jost
from dynscatter.numerics import Complex2x2, IntegratorConfig, quadrature_real
from dynscatter.potential import Potential, barrier, parity_reflect, truncate
from dynscatter.reference import BarrierClosedForm, barrier_amplitudes


def test_hand_matrix_amplitudes():
    amps = amplitudes_from_matrix(Complex2x2(1j, 0, 0, -1j), 1.0)
    assert abs(amps.transmission - 1j) < 1e-15
    assert amps.left_reflection == 0
    assert amps.right_reflection == 0


def test_matrix_amplitude_dictionary_round_trips():
    amps = ScatteringAmplitudes(1.0, 0.3 - 0.1j, -0.2j, 0.8 + 0.1j, Route.JOST)
    m = matrix_from_amplitudes(amps)
    assert abs(m.det() - 1) < 1e-14
    back = amplitudes_from_matrix(m, 1.0)
    assert abs(back.left_reflection - amps.left_reflection) < 1e-14
    assert abs(back.right_reflection - amps.right_reflection) < 1e-14
    assert abs(back.transmission - amps.transmission) < 1e-14


def test_non_unimodular_matrix_rejected():
    with pytest.raises(InvalidTransferMatrix):
        amplitudes_from_matrix(Complex2x2(2, 0, 0, 2))


def test_vanishing_m22_is_a_spectral_singularity():
    with pytest.raises(SpectralSingularityEncountered):
        amplitudes_from_matrix(Complex2x2(1, 1, -1, 0))


def test_zero_transmission_has_no_matrix():
    with pytest.raises(ZeroTransmission):
        matrix_from_amplitudes(ScatteringAmplitudes(1.0, 0.5, 0.5, 0j, Route.JOST))


@pytest.mark.parametrize("route", [Route.EVOLUTION, Route.JOST, Route.S_FORM, Route.AUTO])
def test_routes_match_barrier_closed_form(route, cfg):
    params = BarrierClosedForm(-1.5 + 0.8j, 1.2, 2.3)
    exact = barrier_amplitudes(params)
    amps = scatter(barrier(params.height, params.length), params.k, route, cfg)
    assert abs(amps.transmission - exact.transmission) < 1e-8
    assert abs(amps.right_reflection - exact.right_reflection) < 1e-8
    assert abs(amps.left_reflection - exact.left_reflection) < 1e-8


def test_auto_route_reports_deviation(complex_barrier, cfg):
    amps = scatter(complex_barrier, 1.1, Route.AUTO, cfg)
    assert amps.route is Route.AUTO
    assert amps.deviation is not None and amps.deviation < 1e-7


def test_null_potential_scatters_trivially():
    for route in (Route.EVOLUTION, Route.JOST, Route.S_FORM):
        amps = scatter(Potential.zero(), 1.0, route)
        assert abs(amps.transmission - 1) < 1e-15
        assert abs(amps.left_reflection) < 1e-15
        assert abs(amps.right_reflection) < 1e-15


def test_real_barrier_is_unitary(real_barrier, cfg):
    for k in (0.4, 1.0, 2.7):
        assert scatter(real_barrier, k, Route.EVOLUTION, cfg).unitarity_residual() < 1e-8


def test_jost_transfer_agrees_with_evolution(complex_barrier, cfg):
    j = solve_jost(complex_barrier, 0.9, cfg)
    m_jost = transfer_from_jost(j, complex_barrier, None, cfg)
    m_evo = evolve_transfer(complex_barrier, 0.9, cfg).final
    assert (m_jost - m_evo).max_norm() < 1e-7


def test_truncation_family_matches_fresh_solves(complex_barrier, cfg):
    p = complex_barrier
    j = solve_jost(p, 1.0, cfg)
    a_values = [1.2, 0.1, 0.7]
    family = truncation_family(j, p, a_values, cfg)
    for a, amps in zip(a_values, family):
        q = truncate(p, a)
        fresh = amplitudes_from_jost(solve_jost(q, 1.0, cfg), q, None, cfg)
        assert abs(amps.left_reflection - fresh.left_reflection) < 1e-8
        assert abs(amps.transmission - fresh.transmission) < 1e-8


def test_truncation_point_outside_support(complex_barrier):
    j = solve_jost(complex_barrier, 1.0)
    with pytest.raises(InvalidConfig):
        amplitudes_from_jost(j, complex_barrier, a=10.0)


def test_classify_invisibility_flags():
    right_inv = classify(ScatteringAmplitudes(1.0, 0.2, 1e-9, 1 + 1e-9, Route.JOST))
    assert right_inv.is_right_invisible
    assert not right_inv.is_left_invisible
    assert not right_inv.is_bidirectionally_invisible
    assert right_inv.active() == ["right_reflectionless", "right_invisible"]

    both = classify(ScatteringAmplitudes(1.0, 1e-9, 1e-9, 1.0, Route.JOST))
    assert both.is_bidirectionally_invisible
    assert not both.is_right_invisible


def test_classify_spectral_singularity_and_cpa():
    singular = classify(ScatteringAmplitudes(1.0, 1e7, 1e7, 1e8, Route.EVOLUTION))
    assert singular.is_spectral_singularity
    assert not singular.is_cpa

    # M11 = T - Rl Rr / T vanishes when Rl Rr = T^2
    cpa = classify(ScatteringAmplitudes(1.0, 2.0, 0.125, 0.5, Route.EVOLUTION))
    assert cpa.is_cpa
    assert cpa.residuals["m11"] < 1e-15


def test_classify_respects_threshold():
    amps = ScatteringAmplitudes(1.0, 0.3, 1e-5, 1.0, Route.JOST)
    assert not classify(amps, 1e-6).is_right_reflectionless
    assert classify(amps, 1e-4).is_right_reflectionless


def test_sweep_preserves_order(real_barrier, cfg):
    ks = [2.0, 0.5, 1.0, 3.0]
    rows = sweep(real_barrier, ks, Route.EVOLUTION, cfg, threads=3)
    assert [r.k for r in rows] == ks
    assert all(r.ok for r in rows)
    assert all(len(r.to_row()) == len(SWEEP_COLUMNS) for r in rows)


def test_sweep_flags_failures_without_aborting(real_barrier):
    """A failing point is reported on its row; the others still run."""
    original = scatter

    def flaky(p, k, route=Route.AUTO, cfg=None):
        if k == 1.0:
            raise StepLimitExceeded("forced")
        return original(p, k, route, cfg)

    with patch("dynscatter.amplitudes.scatter", side_effect=flaky):
        rows = sweep(real_barrier, [0.5, 1.0, 1.5], Route.EVOLUTION, threads=1)
    assert [r.status for r in rows] == ["ok", "STEP_LIMIT", "ok"]
    assert math.isnan(rows[1].to_row()[1])


def test_sweep_rejects_bad_wavenumbers(real_barrier):
    with pytest.raises(InvalidConfig):
        sweep(real_barrier, [])
    with pytest.raises(InvalidConfig):
        sweep(real_barrier, [1.0, -2.0])


def test_scatter_rejects_closed_form_route(real_barrier):
    with pytest.raises(InvalidConfig):
        scatter(real_barrier, 1.0, Route.CLOSED_FORM)


def test_unitarity_residual_of_lossy_barrier_is_nonzero(cfg):
    amps = scatter(barrier(1.0 + 2.0j, 1.0), 1.0, Route.JOST, cfg)
    assert amps.unitarity_residual() > 1e-3
    assert np.isfinite(amps.unitarity_residual())


@pytest.mark.parametrize("fixture, k", [
    ("complex_barrier", 1.1),
    ("exp_potential", 1.0),
    ("invisible_design", 1.0),
])
@pytest.mark.parametrize("route", [Route.EVOLUTION, Route.JOST, Route.S_FORM])
def test_parity_swaps_reflections_and_keeps_transmission(fixture, k, route, request, cfg):
    p = request.getfixturevalue(fixture)
    p = getattr(p, "potential", p)
    direct = scatter(p, k, route, cfg)
    mirrored = scatter(parity_reflect(p), k, route, cfg)
    assert abs(mirrored.transmission - direct.transmission) < 1e-9
    assert abs(mirrored.left_reflection - direct.right_reflection) < 1e-9
    assert abs(mirrored.right_reflection - direct.left_reflection) < 1e-9


def test_weak_potential_reflection_is_linear_in_strength(cfg):
    """Born regime: scaling a weak potential by 10 scales R^r by 10."""
    def right_reflection(c):
        return scatter(barrier(c * (1.0 + 0.5j), 1.3), 1.0, Route.JOST, cfg).right_reflection

    ratio = right_reflection(1e-4) / right_reflection(1e-5)
    assert abs(ratio - 10.0) < 1e-2


def test_sweep_marks_points_resting_on_unconverged_quadrature(real_barrier):
    original = scatter
    starved = IntegratorConfig(quad_limit=1)

    def leaky(p, k, route=Route.AUTO, cfg=None):
        if k == 1.0:
            quadrature_real(lambda x: cmath.exp(50j * x), (0.0, 10.0), starved)
        return original(p, k, route, cfg)

    with patch("dynscatter.amplitudes.scatter", side_effect=leaky):
        rows = sweep(real_barrier, [0.5, 1.0, 1.5], Route.EVOLUTION, threads=2)
    assert [r.status for r in rows] == ["ok", QUADRATURE_INACCURATE, "ok"]
    assert rows[1].amplitudes is not None
    assert "error estimate" in rows[1].message
    assert rows[1].to_row()[-1] == QUADRATURE_INACCURATE
