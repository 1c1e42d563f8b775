"""Layered circuit skeletons: wiring permutations, light cones, disjoint outputs.

A skeleton on ``n`` wires (``n`` even) with ``d`` gate layers is specified by
``d + 1`` wiring permutations ``perms[0..d]`` of ``{0, ..., n-1}``: input wire
``w`` enters slot ``perms[0][w]`` of gate layer 0, output slot ``s`` of gate
layer ``t`` feeds slot ``perms[t+1][s]`` of layer ``t + 1``, and ``perms[d]``
routes the last gate layer to the output qubits.  Gate node ``j`` of every
layer acts on slot pair ``(2j, 2j+1)``, so each layer holds exactly ``n/2``
gates.  All indices are 0-based throughout the Python API; the JSON schema
uses 1-based permutation images.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ._validation import check_depth, check_even_wires, check_permutation, check_wire_index
from .errors import ArchitectureError

__all__ = [
    "Skeleton",
    "LightCone",
    "build_1d_brickwork",
    "build_2d_grid",
    "light_cone",
    "light_cone_size",
    "greedy_disjoint",
    "skeleton_to_json",
    "skeleton_from_json",
]


def _inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def _compose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """outer o inner: i -> outer[inner[i]]."""
    return tuple(outer[inner[i]] for i in range(len(inner)))


@dataclass(frozen=True)
class Skeleton:
    """Gate placement of a layered 2-qubit circuit, independent of gate values."""

    n: int
    d: int
    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = check_even_wires(self.n)
        d = check_depth(self.d)
        if len(self.perms) != d + 1:
            raise ArchitectureError(
                f"skeleton with d={d} needs {d + 1} permutations, got {len(self.perms)}"
            )
        perms = tuple(check_permutation(p, n) for p in self.perms)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "perms", perms)

    @property
    def gates_per_layer(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class LightCone:
    """Backward light cone of one output qubit.

    ``inputs`` are the input wires with a forward path to ``output``; ``gates``
    are the ``(layer, gate_node)`` pairs on such paths.  Every gate in
    ``gates`` acts only on slots whose backward closure lies inside ``inputs``.
    """

    output: int
    inputs: frozenset[int]
    gates: frozenset[tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.inputs)


def build_1d_brickwork(n: int, d: int) -> Skeleton:
    """Canonical periodic 1D brickwork.

    Layer 0 pairs wires (0,1), (2,3), ...; layer 1 pairs (1,2), (3,4), ...,
    (n-1,0); layers alternate from there.  Deterministic in (n, d).
    """
    n = check_even_wires(n)
    d = check_depth(d)
    ident = tuple(range(n))
    shift = tuple((j + 1) % n for j in range(n))  # slot j carries wire j+1
    sigma = [ident if t % 2 == 0 else shift for t in range(max(d, 1))]
    return Skeleton(n, d, _perms_from_slot_maps(sigma, d))


def build_2d_grid(rows: int, cols: int, d: int) -> Skeleton:
    """Deterministic 2D brick pattern on a rows x cols grid (row-major wire order).

    Layers cycle horizontal-even, horizontal-odd, vertical-even, vertical-odd;
    horizontal layers pair neighbours in row-major ring order and vertical
    layers in column-major ring order, so every layer is a perfect matching
    for any even ``rows * cols``.  For ``rows == 1`` the result degenerates to
    ``build_1d_brickwork(cols, d)``.
    """
    if rows < 1 or cols < 1:
        raise ArchitectureError(f"grid must be at least 1x1, got {rows}x{cols}")
    n = check_even_wires(rows * cols)
    d = check_depth(d)
    row_major = tuple(range(n))
    col_major = tuple(r * cols + c for c in range(cols) for r in range(rows))

    def slot_map(kind: int) -> tuple[int, ...]:
        order = row_major if kind < 2 else col_major
        off = kind % 2
        return tuple(order[(j + off) % n] for j in range(n))

    sigma = [slot_map(t % 4) for t in range(max(d, 1))]
    return Skeleton(n, d, _perms_from_slot_maps(sigma, d))


def _perms_from_slot_maps(sigma: list[tuple[int, ...]], d: int) -> tuple[tuple[int, ...], ...]:
    """Convert per-layer slot->wire maps into the d+1 wiring permutations."""
    if d == 0:
        return (tuple(range(len(sigma[0]))),)
    perms = [_inverse(sigma[0])]
    for t in range(1, d):
        perms.append(_compose(_inverse(sigma[t]), sigma[t - 1]))
    perms.append(sigma[d - 1])
    return tuple(perms)


def light_cone(skeleton: Skeleton, output: int) -> LightCone:
    """Backward light cone of ``output``, by walking gate layers last to first."""
    check_wire_index(output, skeleton.n)
    inv = [_inverse(p) for p in skeleton.perms]
    active = {inv[skeleton.d][output]}
    gates: set[tuple[int, int]] = set()
    for t in range(skeleton.d - 1, -1, -1):
        nodes = {s // 2 for s in active}
        gates.update((t, j) for j in nodes)
        slots = {s for j in nodes for s in (2 * j, 2 * j + 1)}
        active = {inv[t][s] for s in slots}
    return LightCone(output=output, inputs=frozenset(active), gates=frozenset(gates))


def light_cone_size(skeleton: Skeleton) -> int:
    """max_i |light_cone(i).inputs|; marginals are computable in O(2^L) when this is L."""
    return max(light_cone(skeleton, i).size for i in range(skeleton.n))


def greedy_disjoint(skeleton: Skeleton, m: int) -> list[int]:
    """Select up to ``m`` outputs with pairwise-disjoint light cones.

    Scans outputs in ascending order, keeping any whose cone inputs avoid all
    cones kept so far, and stops after ``m`` selections.  If fewer than ``m``
    disjoint outputs exist, returns the maximal greedy set (callers detect the
    shortfall from the length).
    """
    if not 1 <= m <= skeleton.n:
        raise ValueError(f"m must be in [1, {skeleton.n}], got {m}")
    chosen: list[int] = []
    covered: set[int] = set()
    for i in range(skeleton.n):
        cone = light_cone(skeleton, i)
        if covered.isdisjoint(cone.inputs):
            chosen.append(i)
            covered |= cone.inputs
            if len(chosen) == m:
                break
    return chosen


def skeleton_to_json(skeleton: Skeleton) -> str:
    """Canonical JSON form ``{"d": ..., "n": ..., "perms": [...]}`` with 1-based images."""
    obj = {
        "n": skeleton.n,
        "d": skeleton.d,
        "perms": [[p + 1 for p in perm] for perm in skeleton.perms],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def skeleton_from_json(text: str) -> Skeleton:
    try:
        obj = json.loads(text)
        n, d, perms = obj["n"], obj["d"], obj["perms"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ArchitectureError(f"malformed skeleton JSON: {exc}") from exc
    return Skeleton(n, d, tuple(tuple(int(p) - 1 for p in perm) for perm in perms))
