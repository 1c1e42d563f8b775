"""Exact second-moment evaluators via a Markov chain over Pauli strings.

Averaging a two-qubit Haar gate maps the squared Pauli coefficients of a state
through a 16x16 stochastic matrix: the identity pair is fixed, and any
non-identity pair spreads uniformly over the 15 non-identity pairs.  Driving a
product of these through the wiring skeleton gives closed-form circuit
averages that Monte Carlo can only approximate.

Conventions match the statevector module: a register of wires is stored as
base-4 digits (I=0, X=1, Y=2, Z=3) with wire r on digit r, and the first slot
of a gate is the high digit of its pair index.  Evaluations restricted to a
light cone use a register holding only the cone's input wires, which is exact:
gates outside the cone carry the identity through both moments.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._validation import check_wire_index
from .errors import ResourceLimitError
from .skeleton import Skeleton, LightCone, light_cone

DEFAULT_MAX_WIRES = 10

_IDENTITY = 0
_Z = 3


def transition_matrix() -> np.ndarray:
    """16x16 pair-transfer matrix, indexed by 4*first_slot + second_slot."""
    m = np.full((16, 16), 1.0 / 15.0)
    m[0, :] = 0.0
    m[:, 0] = 0.0
    m[0, 0] = 1.0
    return m


def input_boundary(n_wires: int, max_wires: int = DEFAULT_MAX_WIRES) -> np.ndarray:
    """Squared Pauli weights of the all-zeros state on ``n_wires`` wires.

    Flat array over base-4 strings (wire r is digit r): weight 2**-n_wires on
    every string in {I, Z}^n, zero elsewhere.
    """
    if n_wires < 1:
        raise ValueError(f"need at least one wire, got {n_wires}")
    if n_wires > max_wires:
        raise ResourceLimitError(
            f"boundary vector needs 4**{n_wires} entries; limit is 4**{max_wires}"
        )
    per_wire = np.array([0.5, 0.0, 0.0, 0.5])
    v = per_wire
    for _ in range(n_wires - 1):
        v = np.multiply.outer(per_wire, v).reshape(-1)
    return v


def _apply_pair(v: np.ndarray, m: np.ndarray, hi: int, lo: int, n_wires: int) -> np.ndarray:
    # digit r lives on reshape axis n_wires - 1 - r
    t = v.reshape((4,) * n_wires)
    t = np.moveaxis(t, (n_wires - 1 - hi, n_wires - 1 - lo), (0, 1))
    shape = t.shape
    t = m @ t.reshape(16, -1)
    t = np.moveaxis(t.reshape(shape), (0, 1), (n_wires - 1 - hi, n_wires - 1 - lo))
    return np.ascontiguousarray(t).reshape(-1)


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def _run_chain(skeleton: Skeleton, cone: LightCone | None, max_wires: int):
    """Drive the boundary weights through the skeleton.

    Returns ``(v, pos)`` where ``v`` is the final weight vector over register
    wires and ``pos`` maps each output slot to its register digit (None for
    slots outside the register).  ``cone=None`` runs the full register.
    """
    n = skeleton.n
    if cone is None:
        wires = list(range(n))
        gate_filter = None
    else:
        wires = sorted(cone.inputs)
        gate_filter = cone.gates
    width = len(wires)
    v = input_boundary(width, max_wires)
    digit = {w: r for r, w in enumerate(wires)}
    # pos[slot] = register digit carried by that slot, None if untracked
    pos: list[int | None] = [None] * n
    for w, r in digit.items():
        pos[skeleton.perms[0][w]] = r
    m = transition_matrix()
    for t in range(skeleton.d):
        for j in range(skeleton.gates_per_layer):
            if gate_filter is not None and (t, j) not in gate_filter:
                continue
            hi, lo = pos[2 * j], pos[2 * j + 1]
            if hi is None or lo is None:
                raise AssertionError("cone gate touching an untracked wire")
            v = _apply_pair(v, m, hi, lo, width)
        inv_next = _inverse(skeleton.perms[t + 1])
        pos = [pos[inv_next[s]] for s in range(n)]
    return v, pos


def expected_trace_squared(
    skeleton: Skeleton,
    output: int,
    *,
    restrict_to_cone: bool = True,
    max_wires: int = DEFAULT_MAX_WIRES,
) -> float:
    """Average over gates of tr(rho_i Z)**2 for the marginal at ``output``.

    Exact (up to float rounding): reads the weight of the string with Z on the
    output wire and identity elsewhere, scaled by 2**register_width.
    """
    check_wire_index(output, skeleton.n)
    cone = light_cone(skeleton, output) if restrict_to_cone else None
    v, pos = _run_chain(skeleton, cone, max_wires)
    width = round(np.log2(v.size) / 2)
    target = pos[output]
    if target is None:
        raise AssertionError("output wire left the tracked register")
    return float(2**width * v[_Z * 4**target])


def single_qubit_expected_sos(
    skeleton: Skeleton,
    output: int,
    *,
    restrict_to_cone: bool = True,
    max_wires: int = DEFAULT_MAX_WIRES,
) -> float:
    """Average of q0**2 + q1**2 for the marginal at ``output``.

    Follows from q0 - q1 = tr(rho Z) and q0 + q1 = 1:
    q0**2 + q1**2 = (1 + tr(rho Z)**2) / 2.
    """
    ets = expected_trace_squared(
        skeleton, output, restrict_to_cone=restrict_to_cone, max_wires=max_wires
    )
    return (1.0 + ets) / 2.0


def expected_fidelity_exact(
    skeleton: Skeleton,
    outputs,
    *,
    max_wires: int = DEFAULT_MAX_WIRES,
) -> float:
    """Average fidelity score of the product spoof over the given outputs.

    Requires pairwise disjoint light cones so the per-output factors are
    independent; returns prod_i (1 + ets_i) - 1.
    """
    outputs = [check_wire_index(i, skeleton.n) for i in outputs]
    if len(set(outputs)) != len(outputs):
        raise ValueError(f"duplicate outputs in {outputs}")
    cones = [light_cone(skeleton, i) for i in outputs]
    for a in range(len(cones)):
        for b in range(a + 1, len(cones)):
            if not cones[a].inputs.isdisjoint(cones[b].inputs):
                raise ValueError(
                    f"light cones of outputs {outputs[a]} and {outputs[b]} overlap"
                )
    total = 1.0
    for i in outputs:
        total *= 1.0 + expected_trace_squared(skeleton, i, max_wires=max_wires)
    return total - 1.0


def expected_scaled_collision(
    skeleton: Skeleton, *, max_wires: int = DEFAULT_MAX_WIRES
) -> float:
    """Average of 2**n * sum_x q(x)**2, exactly.

    The collision probability picks up every string in {I, Z}^n:
    sum_x q(x)**2 = 2**-n * sum_{s in {I,Z}^n} tr(rho s)**2.
    """
    v, _ = _run_chain(skeleton, None, max_wires)
    n = skeleton.n
    t = v.reshape((4,) * n)
    for axis in range(n):
        t = t.take([_IDENTITY, _Z], axis=axis)
    return float(2**n * t.sum())


def lower_bound_assignment_weight(skeleton: Skeleton, output: int) -> Fraction:
    """Exact weight of one explicit chain configuration reaching ``output``.

    Threads a single Z backward from the output wire through one slot per
    layer; every other gate carries the identity.  The result, scaled like
    expected_trace_squared, is a certified lower bound on it and always equals
    (1/15)**depth.
    """
    check_wire_index(output, skeleton.n)
    m = [[Fraction(0)] * 16 for _ in range(16)]
    m[0][0] = Fraction(1)
    for p in range(1, 16):
        for q in range(1, 16):
            m[p][q] = Fraction(1, 15)
    inv = [_inverse(p) for p in skeleton.perms]
    weight = Fraction(1, 2**skeleton.n)  # boundary weight of a {I,Z}^n string
    slot = inv[skeleton.d][output]
    for t in range(skeleton.d - 1, -1, -1):
        pair = _Z * 4 if slot % 2 == 0 else _Z  # Z on this slot, I on its partner
        weight *= m[pair][pair]
        for _ in range(skeleton.gates_per_layer - 1):
            weight *= m[0][0]
        slot = inv[t][slot]
    return weight * 2**skeleton.n
