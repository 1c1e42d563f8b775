"""Chain evaluator vs direct matrix references and Monte Carlo.

Frozen rationals below were cross-checked against statevector Monte Carlo
before being pinned: 1/5 (20k samples, -0.8 SE), 13/125 (20k, -0.1 SE),
181/3125 (60k, -0.7 SE).
"""

from fractions import Fraction

import numpy as np
import pytest

from xebspoof.errors import ResourceLimitError
from xebspoof.pauli_chain import (
    expected_fidelity_exact,
    expected_scaled_collision,
    expected_trace_squared,
    input_boundary,
    lower_bound_assignment_weight,
    single_qubit_expected_sos,
    transition_matrix,
)
from xebspoof.skeleton import build_1d_brickwork, build_2d_grid, greedy_disjoint
from xebspoof.statevector import Circuit, pauli_z_expectation, simulate


def test_transition_matrix_structure():
    m = transition_matrix()
    assert m.shape == (16, 16)
    assert m[0, 0] == 1.0
    assert np.all(m[0, 1:] == 0.0) and np.all(m[1:, 0] == 0.0)
    assert np.all(m[1:, 1:] == pytest.approx(1 / 15, abs=0))
    # stochastic and symmetric; idempotent on the non-identity block
    assert np.allclose(m.sum(axis=0), 1.0)
    assert np.array_equal(m, m.T)
    assert np.allclose(m @ m, m, atol=1e-15)


def test_input_boundary_values():
    assert np.array_equal(input_boundary(1), [0.5, 0.0, 0.0, 0.5])
    v = input_boundary(2)
    assert v.sum() == pytest.approx(1.0, abs=0)
    for idx in range(16):
        expected = 0.25 if idx % 4 in (0, 3) and idx // 4 in (0, 3) else 0.0
        assert v[idx] == expected
    with pytest.raises(ResourceLimitError, match="4\\*\\*11"):
        input_boundary(11)
    with pytest.raises(ValueError):
        input_boundary(0)


def test_single_gate_against_direct_multiply():
    # independent route: explicit 16-d vector, one M application, digit reorder
    # done by hand (flat index = d0 + 4*d1, pair index = 4*d0 + d1)
    m = transition_matrix()
    v_in = input_boundary(2)
    v_out = np.zeros(16)
    for i in range(16):
        for k in range(16):
            v_out[i] += m[4 * (i % 4) + i // 4, 4 * (k % 4) + k // 4] * v_in[k]
    ets_ref = 4 * v_out[3]  # Z on wire 0, identity on wire 1
    sk = build_1d_brickwork(2, 1)
    assert expected_trace_squared(sk, 0) == pytest.approx(ets_ref, abs=1e-15)
    assert ets_ref == pytest.approx(0.2, abs=1e-12)


def test_depth_zero_is_deterministic():
    sk = build_1d_brickwork(4, 0)
    for i in range(4):
        assert expected_trace_squared(sk, i) == pytest.approx(1.0, abs=0)
    assert expected_scaled_collision(sk) == pytest.approx(16.0, abs=1e-12)


@pytest.mark.parametrize(
    "builder, output, value",
    [
        (lambda: build_1d_brickwork(2, 1), 0, Fraction(1, 5)),
        (lambda: build_1d_brickwork(8, 2), 3, Fraction(13, 125)),
        (lambda: build_1d_brickwork(4, 2), 1, Fraction(13, 125)),
        (lambda: build_1d_brickwork(8, 3), 3, Fraction(181, 3125)),
        (lambda: build_2d_grid(2, 4, 2), 5, Fraction(13, 125)),
    ],
)
def test_expected_trace_squared_frozen_values(builder, output, value):
    assert expected_trace_squared(builder(), output) == pytest.approx(
        float(value), abs=1e-12
    )


@pytest.mark.parametrize(
    "sk", [build_1d_brickwork(8, 2), build_1d_brickwork(8, 3), build_2d_grid(2, 4, 2)]
)
def test_cone_restriction_is_exact(sk):
    for i in range(0, sk.n, 3):
        full = expected_trace_squared(sk, i, restrict_to_cone=False)
        restricted = expected_trace_squared(sk, i)
        assert restricted == pytest.approx(full, abs=1e-14)


def test_chain_matches_monte_carlo():
    sk = build_1d_brickwork(4, 2)
    exact = expected_trace_squared(sk, 1)
    rng = np.random.default_rng(321)
    vals = np.empty(4000)
    for k in range(vals.size):
        vals[k] = pauli_z_expectation(simulate(Circuit.haar_random(sk, rng)), 1) ** 2
    se = vals.std(ddof=1) / np.sqrt(vals.size)
    assert abs(vals.mean() - exact) <= 4 * se


def test_sos_relation():
    sk = build_1d_brickwork(8, 2)
    ets = expected_trace_squared(sk, 0)
    assert single_qubit_expected_sos(sk, 0) == pytest.approx((1 + ets) / 2, abs=0)
    assert single_qubit_expected_sos(sk, 0) == pytest.approx(0.552, abs=1e-12)


def test_expected_fidelity_exact_frozen():
    sk = build_1d_brickwork(12, 2)
    picks = greedy_disjoint(sk, 3)
    value = expected_fidelity_exact(sk, picks)
    assert value == pytest.approx(float(Fraction(138, 125) ** 3 - 1), abs=1e-12)
    # single output reduces to ets; empty selection scores zero
    assert expected_fidelity_exact(sk, [0]) == pytest.approx(
        expected_trace_squared(sk, 0), abs=1e-15
    )
    assert expected_fidelity_exact(sk, []) == 0.0


def test_expected_fidelity_rejects_overlap():
    sk = build_1d_brickwork(12, 2)
    with pytest.raises(ValueError, match="overlap"):
        expected_fidelity_exact(sk, [0, 1])
    with pytest.raises(ValueError, match="duplicate"):
        expected_fidelity_exact(sk, [0, 0])


def test_scaled_collision_single_gate_and_deep():
    # one Haar gate: 4-dim Haar state, collision probability 2/(4+1)
    assert expected_scaled_collision(build_1d_brickwork(2, 1)) == pytest.approx(
        1.6, abs=1e-12
    )
    deep = expected_scaled_collision(build_1d_brickwork(8, 30))
    assert deep == pytest.approx(2 * 256 / 257, abs=1e-4)


def test_assignment_weight_rational():
    for d in range(11):
        sk = build_1d_brickwork(8, d)
        for i in (0, 5):
            assert lower_bound_assignment_weight(sk, i) == Fraction(1, 15) ** d
    for d in (0, 2, 5):
        sk = build_2d_grid(2, 4, d)
        assert lower_bound_assignment_weight(sk, 3) == Fraction(1, 15) ** d


def test_assignment_weight_is_lower_bound():
    for sk in (build_1d_brickwork(8, 1), build_1d_brickwork(8, 3), build_2d_grid(2, 4, 2)):
        for i in range(0, sk.n, 2):
            lb = float(lower_bound_assignment_weight(sk, i))
            assert expected_trace_squared(sk, i) >= lb - 1e-15


def test_resource_limit_and_validation():
    sk = build_1d_brickwork(12, 30)  # cone covers all 12 wires
    with pytest.raises(ResourceLimitError):
        expected_trace_squared(sk, 0)
    with pytest.raises(ValueError):
        expected_trace_squared(build_1d_brickwork(4, 1), 4)
    with pytest.raises(ResourceLimitError):
        expected_scaled_collision(build_1d_brickwork(12, 1))
