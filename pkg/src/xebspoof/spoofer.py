"""Products of single-qubit marginals that score high on the linear XEB.

The attack: pick outputs whose backward light cones are pairwise disjoint,
compute their exact single-qubit marginals by simulating only the cone gates,
sample those bits from their marginals and every other bit uniformly.  Because
disjoint-cone outputs are independent under the true distribution, the XEB
score of this product ansatz has the closed form

    prod_j 2 * (q0_j**2 + q1_j**2) - 1

which beats the vanishing score of honest uniform guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

import json

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_rng, check_bits, check_wire_index
from .errors import ArchitectureError, ResourceLimitError
from .skeleton import greedy_disjoint, light_cone
from .statevector import DEFAULT_MAX_QUBITS, apply_two_qubit, marginal

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class SpoofPlan:
    """Frozen description of one spoofing distribution.

    ``selected`` holds 0-based output indices; ``marginals[j]`` is the exact
    (prob of 0, prob of 1) pair for ``selected[j]``.  ``requested_m`` records
    what the caller asked for (None means "as many as possible") so a greedy
    shortfall stays visible.
    """

    n: int
    selected: tuple[int, ...]
    marginals: tuple[tuple[float, float], ...]
    requested_m: int | None
    cone_sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.marginals) != len(self.selected):
            raise ValueError("one marginal pair per selected output required")
        if len(self.cone_sizes) != len(self.selected):
            raise ValueError("one cone size per selected output required")
        for i in self.selected:
            check_wire_index(i, self.n)
        for q0, q1 in self.marginals:
            if not (0.0 <= q0 <= 1.0 and 0.0 <= q1 <= 1.0):
                raise ValueError(f"marginal pair ({q0}, {q1}) outside [0, 1]")
            if abs(q0 + q1 - 1.0) > _NORM_TOL:
                raise ValueError(f"marginal pair ({q0}, {q1}) does not sum to 1")

    @property
    def m(self) -> int:
        return len(self.selected)

    @property
    def shortfall(self) -> bool:
        return self.requested_m is not None and self.m < self.requested_m


def light_cone_marginal(
    circuit, output: int, *, max_qubits: int = DEFAULT_MAX_QUBITS
) -> tuple[float, float]:
    """Exact (q0, q1) for one output, simulating only its cone gates."""
    sk = circuit.skeleton
    check_wire_index(output, sk.n)
    cone = light_cone(sk, output)
    wires = sorted(cone.inputs)
    width = len(wires)
    if width > max_qubits:
        raise ResourceLimitError(
            f"light cone needs 2**{width} amplitudes; limit is 2**{max_qubits}"
        )
    state = np.zeros(2**width, dtype=complex)
    state[0] = 1.0
    # pos[slot] = register bit carried by that slot, None if untracked
    pos: list[int | None] = [None] * sk.n
    for r, w in enumerate(wires):
        pos[sk.perms[0][w]] = r
    for t in range(sk.d):
        for j in range(sk.gates_per_layer):
            if (t, j) not in cone.gates:
                continue
            hi, lo = pos[2 * j], pos[2 * j + 1]
            if hi is None or lo is None:
                raise AssertionError("cone gate touching an untracked wire")
            state = apply_two_qubit(state, circuit.gates[t][j], hi, lo)
        nxt = sk.perms[t + 1]
        new_pos: list[int | None] = [None] * sk.n
        for s in range(sk.n):
            new_pos[nxt[s]] = pos[s]
        pos = new_pos
    target = pos[output]
    if target is None:
        raise AssertionError("output wire left the tracked register")
    return marginal(state, target)


def plan(circuit, m: int | None = None, *, max_qubits: int = DEFAULT_MAX_QUBITS) -> SpoofPlan:
    """Greedily pick disjoint-cone outputs and attach their exact marginals."""
    sk = circuit.skeleton
    requested = m
    selected = greedy_disjoint(sk, sk.n if m is None else m)
    marginals = []
    sizes = []
    for i in selected:
        q0, q1 = light_cone_marginal(circuit, i, max_qubits=max_qubits)
        if not (-_NORM_TOL < q0 < 1 + _NORM_TOL) or abs(q0 + q1 - 1) > _NORM_TOL:
            raise RuntimeError(f"cone marginal ({q0}, {q1}) is not a distribution")
        q0 = min(1.0, max(0.0, q0))
        marginals.append((q0, 1.0 - q0))
        sizes.append(light_cone(sk, i).size)
    return SpoofPlan(
        n=sk.n,
        selected=tuple(selected),
        marginals=tuple(marginals),
        requested_m=requested,
        cone_sizes=tuple(sizes),
    )


def sample(spoof_plan: SpoofPlan, rng=None, size: int | None = None) -> np.ndarray:
    """Draw bitstrings: selected bits from their marginals, the rest uniform."""
    gen = as_rng(rng)
    k = 1 if size is None else size
    out = gen.integers(0, 2, size=(k, spoof_plan.n), dtype=np.uint8)
    for i, (_, q1) in zip(spoof_plan.selected, spoof_plan.marginals):
        out[:, i] = gen.random(k) < q1
    return out[0] if size is None else out


def spoof_pdf(spoof_plan: SpoofPlan, x) -> float:
    """Probability the spoofer assigns to bitstring ``x``."""
    bits = check_bits(x, spoof_plan.n)
    p = 2.0 ** -(spoof_plan.n - spoof_plan.m)
    for i, (q0, q1) in zip(spoof_plan.selected, spoof_plan.marginals):
        p *= q1 if bits[i] else q0
    return p


def closed_form_fidelity(spoof_plan: SpoofPlan) -> float:
    """Exact XEB score of the spoof against the circuit it was planned for."""
    f = 1.0
    for q0, q1 in spoof_plan.marginals:
        f *= 2.0 * (q0**2 + q1**2)
    return f - 1.0


def plan_to_json(spoof_plan: SpoofPlan) -> str:
    """Canonical JSON with 1-based output indices."""
    obj = {
        "n": spoof_plan.n,
        "requested_m": spoof_plan.requested_m,
        "selected": [i + 1 for i in spoof_plan.selected],
        "marginals": [[q0, q1] for q0, q1 in spoof_plan.marginals],
        "cone_sizes": list(spoof_plan.cone_sizes),
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def plan_from_json(text: str) -> SpoofPlan:
    try:
        obj = json.loads(text)
        return SpoofPlan(
            n=obj["n"],
            selected=tuple(i - 1 for i in obj["selected"]),
            marginals=tuple((q0, q1) for q0, q1 in obj["marginals"]),
            requested_m=obj["requested_m"],
            cone_sizes=tuple(obj["cone_sizes"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArchitectureError(f"malformed plan document: {exc}") from exc


class XEBSpoofer(BaseEstimator):
    """Estimator wrapper around the spoofing attack.

    ``fit`` takes a Circuit and computes the plan; ``sample`` draws spoofed
    bitstrings; ``score_samples`` returns per-string log probabilities under
    the spoof distribution, ``score`` their sum.  ``m`` limits how many
    outputs are targeted (None targets as many as the wiring allows).
    """

    def __init__(self, m: int | None = None, max_qubits: int = DEFAULT_MAX_QUBITS):
        self.m = m
        self.max_qubits = max_qubits

    def fit(self, X, y=None):
        from .statevector import Circuit

        if not isinstance(X, Circuit):
            raise TypeError(f"fit expects a Circuit, got {type(X).__name__}")
        self.plan_ = plan(X, self.m, max_qubits=self.max_qubits)
        self.fidelity_ = closed_form_fidelity(self.plan_)
        self.n_qubits_ = X.n
        return self

    def sample(self, n_samples: int = 1, random_state=None) -> np.ndarray:
        check_is_fitted(self)
        return sample(self.plan_, random_state, size=n_samples)

    def score_samples(self, X) -> np.ndarray:
        check_is_fitted(self)
        rows = [check_bits(x, self.n_qubits_) for x in X]
        with np.errstate(divide="ignore"):
            return np.log([spoof_pdf(self.plan_, row) for row in rows])

    def score(self, X, y=None) -> float:
        return float(self.score_samples(X).sum())
