import math

import numpy as np
import pytest

from dynscatter.errors import InvalidConfig
from dynscatter.models.potential_spec import parse_potential_spec
from dynscatter.potential import (
    Potential,
    PotentialKind,
    barrier,
    closure,
    evaluate,
    modulated_exponential,
    parity_reflect,
    potential_from_index,
    potential_from_spec,
    sampled,
    tail,
    truncate,
)


def test_barrier_is_zero_outside_support():
    p = barrier(3 - 1j, 2.0, offset=0.5)
    assert p.support == (0.5, 2.5)
    assert evaluate(p, 1.0, 1.0) == 3 - 1j
    assert evaluate(p, 0.49, 1.0) == 0
    assert evaluate(p, 2.51, 1.0) == 0
    values = evaluate(p, np.array([0.0, 1.0, 3.0]), 2.0)
    assert values.tolist() == [0, 3 - 1j, 0]


def test_evaluate_requires_positive_k():
    with pytest.raises(InvalidConfig):
        evaluate(barrier(1.0, 1.0), 0.5, 0.0)


def test_zero_potential_has_null_support():
    p = Potential.zero(at=1.5)
    assert p.is_null
    assert p.lower == p.upper == 1.5
    assert evaluate(p, 1.5, 1.0) == 0


def test_invalid_support_rejected():
    with pytest.raises(InvalidConfig):
        closure(lambda x, k: x, (2.0, 1.0))
    with pytest.raises(InvalidConfig):
        barrier(1.0, -1.0)


def test_modulated_exponential_values():
    p = modulated_exponential(0.04, 1.0, math.pi)
    x = 0.3
    assert abs(evaluate(p, x, 1.0) - 0.04 * np.exp(-4j * x)) < 1e-15


def test_sampled_interpolation_rules():
    x = np.linspace(0.0, 1.0, 11)
    p_cubic = sampled(x, x ** 2 + 1j * x)
    p_linear = sampled(x, x ** 2, interpolation="linear")
    assert abs(evaluate(p_cubic, 0.55, 1.0) - (0.55 ** 2 + 0.55j)) < 1e-12
    assert abs(evaluate(p_linear, 0.55, 1.0) - 0.5 * (0.5 ** 2 + 0.6 ** 2)) < 1e-12
    with pytest.raises(InvalidConfig):
        sampled(x, x, interpolation="quintic")
    with pytest.raises(InvalidConfig):
        sampled([0.0, 0.0, 1.0], [1, 2, 3])


def test_index_profile_is_dispersive_by_default():
    n2 = lambda x: np.full(np.shape(x), 2.0 + 0.1j)  # noqa: E731
    p = potential_from_index(n2, 1.0, (0.0, 1.0))
    frozen = potential_from_index(n2, 1.0, (0.0, 1.0), dispersive=False)
    assert p.kind is PotentialKind.INDEX_PROFILE
    assert abs(evaluate(p, 0.5, 2.0) - 4.0 * (1 - (2.0 + 0.1j))) < 1e-14
    assert abs(evaluate(frozen, 0.5, 2.0) - (1 - (2.0 + 0.1j))) < 1e-14


def test_truncate_and_tail_split_the_support():
    p = barrier(2.0, 3.0)
    left, right = truncate(p, 1.0), tail(p, 1.0)
    assert left.support == (0.0, 1.0)
    assert right.support == (1.0, 3.0)
    assert left.params["length"] == 1.0
    assert right.params["offset"] == 1.0
    assert truncate(p, -1.0).is_null
    assert tail(p, 5.0).is_null


def test_parity_reflect():
    p = closure(lambda x, k: x + 0j, (0.0, 2.0), breakpoints=[0.5])
    q = parity_reflect(p)
    assert q.support == (-2.0, 0.0)
    assert q.breakpoints == (-0.5,)
    assert evaluate(q, -1.5, 1.0) == evaluate(p, 1.5, 1.0)


def test_potential_from_spec_accepts_pi_multiples():
    spec = parse_potential_spec({"kind": "modulated_exponential", "height": 0.04, "k0": 1, "length": "pi/3"})
    p = potential_from_spec(spec)
    assert p.kind is PotentialKind.MODULATED_EXPONENTIAL
    assert abs(p.upper - math.pi / 3) < 1e-15


def test_potential_from_spec_complex_height():
    spec = parse_potential_spec({"kind": "barrier", "height": [-3, 0.5], "length": 2})
    p = potential_from_spec(spec)
    assert p.params["height"] == -3 + 0.5j


def test_potential_from_spec_sampled_and_zero():
    spec = parse_potential_spec({"kind": "sampled", "x": [0, 1, 2], "re": [1, 2, 1]})
    assert potential_from_spec(spec).kind is PotentialKind.SAMPLED
    assert potential_from_spec(parse_potential_spec({"kind": "zero"})).is_null


def test_bad_specs_are_rejected():
    from pydantic import ValidationError

    with pytest.raises(ValidationError):
        parse_potential_spec({"kind": "barrier", "height": 1.0, "length": -1})
    with pytest.raises(ValidationError):
        parse_potential_spec({"kind": "sampled", "x": [0, 1], "re": [1]})
    with pytest.raises(ValidationError):
        parse_potential_spec({"kind": "square-well"})
