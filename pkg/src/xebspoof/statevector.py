"""Brute-force statevector oracle for layered 2-qubit circuits.

Basis indices are little-endian: qubit ``w`` is bit ``w`` of the index, so a
bit assignment ``x`` maps to ``sum_w x[w] << w``.  Within a gate's 4x4 matrix
the gate's first wire (slot ``2j``) is the high bit: basis order |00>, |01>,
|10>, |11>.  Wiring permutations are fused into gate application as storage
positions; only the final output relabeling is materialized.

Memory grows as 2**n complex amplitudes; ``simulate`` refuses above a cap
(default 24 qubits) rather than thrash.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._validation import check_bits, check_wire_index
from .errors import ArchitectureError, ResourceLimitError
from .gates import check_unitary, haar_sample, unitary_from_pairs, unitary_to_pairs
from .skeleton import Skeleton, skeleton_from_json, skeleton_to_json

__all__ = [
    "DEFAULT_MAX_QUBITS",
    "Circuit",
    "simulate",
    "probabilities",
    "output_probability",
    "marginal",
    "joint_marginal",
    "pauli_z_expectation",
    "xeb_instance",
    "collision_probability",
    "bits_to_index",
    "index_to_bits",
    "apply_two_qubit",
    "apply_wire_permutation",
    "circuit_to_json",
    "circuit_from_json",
]

DEFAULT_MAX_QUBITS = 24


def bits_to_index(bits) -> int:
    return int(sum(int(b) << w for w, b in enumerate(bits)))


def index_to_bits(index: int, n: int) -> np.ndarray:
    return np.array([(index >> w) & 1 for w in range(n)], dtype=np.uint8)


@dataclass(frozen=True)
class Circuit:
    """A skeleton with one 4x4 unitary per gate node, ``gates[layer][node]``."""

    skeleton: Skeleton
    gates: tuple

    def __post_init__(self):
        sk = self.skeleton
        if len(self.gates) != sk.d:
            raise ArchitectureError(f"expected {sk.d} gate layers, got {len(self.gates)}")
        layers = []
        for layer in self.gates:
            if len(layer) != sk.gates_per_layer:
                raise ArchitectureError(
                    f"expected {sk.gates_per_layer} gates per layer, got {len(layer)}"
                )
            layers.append(tuple(check_unitary(U) for U in layer))
        object.__setattr__(self, "gates", tuple(layers))

    @property
    def n(self) -> int:
        return self.skeleton.n

    @property
    def d(self) -> int:
        return self.skeleton.d

    @classmethod
    def haar_random(cls, skeleton: Skeleton, rng) -> "Circuit":
        """Independent Haar gates, drawn in (layer, node) order from ``rng``."""
        total = skeleton.d * skeleton.gates_per_layer
        if total == 0:
            return cls(skeleton, ())
        batch = haar_sample(rng, size=total)
        it = iter(batch)
        return cls(skeleton, tuple(
            tuple(next(it) for _ in range(skeleton.gates_per_layer))
            for _ in range(skeleton.d)
        ))

    @classmethod
    def identity(cls, skeleton: Skeleton) -> "Circuit":
        eye = np.eye(4, dtype=complex)
        return cls(skeleton, tuple(
            tuple(eye for _ in range(skeleton.gates_per_layer))
            for _ in range(skeleton.d)
        ))


def apply_two_qubit(state: np.ndarray, U: np.ndarray, hi: int, lo: int) -> np.ndarray:
    """Apply a 4x4 gate to storage bits (hi, lo); ``hi`` is the gate's first wire."""
    n = state.size.bit_length() - 1
    v = state.reshape((2,) * n)
    axes = (n - 1 - hi, n - 1 - lo)
    v = np.moveaxis(v, axes, (0, 1))
    shape = v.shape
    v = (U @ v.reshape(4, -1)).reshape(shape)
    return np.moveaxis(v, (0, 1), axes).reshape(-1)


def apply_wire_permutation(state: np.ndarray, perm) -> np.ndarray:
    """Relabel storage bits: old bit ``b`` becomes bit ``perm[b]`` of the result."""
    n = state.size.bit_length() - 1
    idx = np.arange(state.size)
    dest = np.zeros_like(idx)
    for b in range(n):
        dest |= ((idx >> b) & 1) << perm[b]
    out = np.empty_like(state)
    out[dest] = state
    return out


def _inverse(perm) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def simulate(
    circuit: Circuit,
    *,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    check_norm: bool = False,
) -> np.ndarray:
    """Full 2**n statevector of circuit|0...0>, output qubit ``k`` at bit ``k``.

    With ``check_norm`` the norm is verified after every layer (1e-10 drift
    tolerance) instead of only trusted.
    """
    sk = circuit.skeleton
    n = sk.n
    if n > max_qubits:
        raise ResourceLimitError(
            f"simulating n={n} qubits needs 2**{n} complex amplitudes "
            f"(~{16 * 2**n / 2**30:.1f} GiB); cap is {max_qubits}"
        )
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    pos = _inverse(sk.perms[0])  # slot -> storage bit
    for t in range(sk.d):
        for j in range(sk.gates_per_layer):
            state = apply_two_qubit(state, circuit.gates[t][j], pos[2 * j], pos[2 * j + 1])
        inv_next = _inverse(sk.perms[t + 1])
        pos = [pos[inv_next[s]] for s in range(n)]
        if check_norm:
            norm = float(np.sum(np.abs(state) ** 2))
            if abs(norm - 1.0) > 1e-10:
                raise RuntimeError(f"norm drifted to {norm} after layer {t}")
    # one materialized relabeling puts output qubit k at bit k
    final = _inverse(pos)
    return apply_wire_permutation(state, final)


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def output_probability(state: np.ndarray, x) -> float:
    """Probability of measuring bit assignment ``x`` (bits, bitstring, or index)."""
    n = state.size.bit_length() - 1
    if isinstance(x, (int, np.integer)):
        if not 0 <= x < state.size:
            raise ValueError(f"basis index out of range: {x}")
        idx = int(x)
    else:
        idx = bits_to_index(check_bits(x, n))
    return float(np.abs(state[idx]) ** 2)


def marginal(state: np.ndarray, wire: int) -> tuple[float, float]:
    """(q0, q1) marginal of one output qubit."""
    n = state.size.bit_length() - 1
    check_wire_index(wire, n)
    probs = np.abs(state.reshape((2,) * n)) ** 2
    q = probs.sum(axis=tuple(ax for ax in range(n) if ax != n - 1 - wire))
    return float(q[0]), float(q[1])


def joint_marginal(state: np.ndarray, wires) -> np.ndarray:
    """Joint distribution of ``wires`` (strictly ascending), little-endian over them."""
    n = state.size.bit_length() - 1
    wires = [check_wire_index(w, n) for w in wires]
    if sorted(set(wires)) != wires:
        raise ValueError("wires must be strictly ascending")
    probs = np.abs(state.reshape((2,) * n)) ** 2
    keep = {n - 1 - w for w in wires}
    out = probs.sum(axis=tuple(ax for ax in range(n) if ax not in keep))
    # remaining axes run over wires in descending order = little-endian flatten
    return out.reshape(-1)


def pauli_z_expectation(state: np.ndarray, wire: int) -> float:
    q0, q1 = marginal(state, wire)
    return q0 - q1


def xeb_instance(q: np.ndarray, x) -> float:
    """Instance score 2**n q(x) - 1 against a full output distribution ``q``."""
    n = q.size.bit_length() - 1
    if q.size != 2**n:
        raise ValueError("distribution length must be a power of two")
    idx = int(x) if isinstance(x, (int, np.integer)) else bits_to_index(check_bits(x, n))
    return float(2**n * q[idx] - 1.0)


def collision_probability(state: np.ndarray) -> float:
    """sum_x q(x)^2 for q = |amplitudes|^2."""
    return float(np.sum(np.abs(state) ** 4))


def circuit_to_json(circuit: Circuit) -> str:
    obj = json.loads(skeleton_to_json(circuit.skeleton))
    obj["gates"] = [[unitary_to_pairs(U) for U in layer] for layer in circuit.gates]
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def circuit_from_json(text: str) -> Circuit:
    try:
        obj = json.loads(text)
        gates = obj.pop("gates")
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
        raise ArchitectureError(f"malformed circuit JSON: {exc}") from exc
    skeleton = skeleton_from_json(json.dumps(obj))
    return Circuit(skeleton, tuple(
        tuple(unitary_from_pairs(p) for p in layer) for layer in gates
    ))
