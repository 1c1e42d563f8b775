"""Skeleton construction, light cones, greedy disjoint selection, JSON round-trip."""

import json

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from xebspoof.errors import ArchitectureError
from xebspoof.skeleton import (
    LightCone,
    Skeleton,
    build_1d_brickwork,
    build_2d_grid,
    greedy_disjoint,
    light_cone,
    light_cone_size,
    skeleton_from_json,
    skeleton_to_json,
)


def reference_cone_inputs(s: Skeleton, output: int) -> set[int]:
    """Independent reference: forward reachability over an explicit node graph.

    Builds the layered graph literally (input, gate, output nodes) and asks
    which inputs reach ``output``, instead of walking slots backward.
    """
    succ: dict = {}
    for w in range(s.n):
        slot = s.perms[0][w]
        succ[("in", w)] = {("gate", 0, slot // 2)} if s.d > 0 else {("out", s.perms[0][w])}
    for t in range(s.d):
        for j in range(s.n // 2):
            targets = set()
            for out_slot in (2 * j, 2 * j + 1):
                nxt = s.perms[t + 1][out_slot]
                targets.add(("out", nxt) if t == s.d - 1 else ("gate", t + 1, nxt // 2))
            succ[("gate", t, j)] = targets
    if s.d == 0:
        # perms[0] routes inputs straight to outputs
        succ = {("in", w): {("out", s.perms[0][w])} for w in range(s.n)}

    def reaches(w: int) -> bool:
        frontier, visited = [("in", w)], set()
        while frontier:
            node = frontier.pop()
            if node == ("out", output):
                return True
            if node in visited or node[0] == "out":
                continue
            visited.add(node)
            frontier.extend(succ[node])
        return False

    return {w for w in range(s.n) if reaches(w)}


def figure_ring_skeleton() -> Skeleton:
    """n=8, d=3 ring brickwork written out as explicit shift permutations."""
    n = 8
    ident = tuple(range(n))
    down = tuple((i - 1) % n for i in range(n))
    up = tuple((i + 1) % n for i in range(n))
    return Skeleton(n, 3, (ident, down, up, down))


# --- construction and validation -------------------------------------------------


def test_identity_skeleton_d0():
    s = Skeleton(2, 0, ((0, 1),))
    assert s.gates_per_layer == 1
    assert light_cone(s, 0).inputs == frozenset({0})
    assert light_cone(s, 0).gates == frozenset()
    assert build_1d_brickwork(2, 0).perms == ((0, 1),)


@pytest.mark.parametrize(
    "n, d, perms",
    [
        (3, 0, ((0, 1, 2),)),  # odd width
        (4, 1, ((0, 1, 2, 3),)),  # wrong number of permutations
        (4, 0, ((0, 1, 1, 3),)),  # not a bijection
        (4, 0, ((0, 1, 2),)),  # wrong length
    ],
)
def test_invalid_skeletons_rejected(n, d, perms):
    with pytest.raises(ArchitectureError):
        Skeleton(n, d, perms)


def test_output_index_validated():
    s = build_1d_brickwork(4, 1)
    with pytest.raises(ValueError):
        light_cone(s, 4)
    with pytest.raises(ValueError):
        light_cone(s, -1)


# --- light cones ------------------------------------------------------------------


def test_brickwork_8_3_light_cones():
    s = build_1d_brickwork(8, 3)
    assert light_cone_size(s) == 6
    # interior output 2 (third qubit) sees exactly the first six inputs
    assert sorted(light_cone(s, 2).inputs) == [0, 1, 2, 3, 4, 5]
    assert all(light_cone(s, i).size == 6 for i in range(8))


def test_explicit_ring_skeleton_matches_builder_cones():
    fig = figure_ring_skeleton()
    assert sorted(light_cone(fig, 2).inputs) == [0, 1, 2, 3, 4, 5]
    assert light_cone_size(fig) == 6


@pytest.mark.parametrize("n, d", [(6, 1), (8, 1), (8, 2), (8, 3), (10, 3), (12, 2), (14, 4)])
def test_brickwork_cone_size_closed_form(n, d):
    # any n >= 2d + 2 gives max cone exactly min(n, 2d)
    assert light_cone_size(build_1d_brickwork(n, d)) == min(n, 2 * d)


@pytest.mark.parametrize("builder, args", [
    (build_1d_brickwork, (8, 3)),
    (build_1d_brickwork, (12, 2)),
    (build_2d_grid, (2, 4, 3)),
    (build_2d_grid, (3, 4, 2)),
])
def test_cone_matches_forward_reachability_reference(builder, args):
    s = builder(*args)
    for i in range(s.n):
        assert set(light_cone(s, i).inputs) == reference_cone_inputs(s, i)


def test_cone_gate_closure_is_consistent():
    s = build_1d_brickwork(10, 3)
    for i in range(s.n):
        cone = light_cone(s, i)
        # gates of the cone, re-expanded backward, land inside cone.inputs
        by_layer = {}
        for t, j in cone.gates:
            by_layer.setdefault(t, set()).add(j)
        if not by_layer:
            continue
        t0 = min(by_layer)
        slots = {x for j in by_layer[t0] for x in (2 * j, 2 * j + 1)}
        inv0 = {p: w for w, p in enumerate(s.perms[0])}
        assert {inv0[x] for x in slots} <= set(cone.inputs)


def test_2d_grid_cases():
    assert light_cone_size(build_2d_grid(2, 2, 1)) == 2
    L = light_cone_size(build_2d_grid(4, 4, 2))
    assert 4 <= L <= 16
    # rows=1 degenerates to the 1D brickwork exactly
    assert build_2d_grid(1, 8, 3).perms == build_1d_brickwork(8, 3).perms


@pytest.mark.parametrize("rows, cols, d", [(2, 3, 2), (2, 5, 3), (3, 4, 4), (4, 4, 3), (2, 2, 5)])
def test_2d_cone_bound(rows, cols, d):
    n = rows * cols
    assert light_cone_size(build_2d_grid(rows, cols, d)) <= min((2 * d) ** 2, n)


@seed(20240817)
@settings(max_examples=60, deadline=None)
@given(
    n=st.sampled_from([2, 4, 6, 8]),
    d=st.integers(min_value=0, max_value=3),
    data=st.data(),
)
def test_random_skeleton_cone_properties(n, d, data):
    perms = tuple(
        tuple(data.draw(st.permutations(range(n)))) for _ in range(d + 1)
    )
    s = Skeleton(n, d, perms)
    for i in range(n):
        cone = light_cone(s, i)
        assert 1 <= cone.size <= n
        assert set(cone.inputs) == reference_cone_inputs(s, i)


# --- greedy selection -------------------------------------------------------------


def test_greedy_finds_three_disjoint_cones_n12_d2():
    s = build_1d_brickwork(12, 2)
    picked = greedy_disjoint(s, 3)
    assert picked == [0, 3, 7]
    cones = [light_cone(s, i) for i in picked]
    assert all(c.size <= 4 for c in cones)
    for a in range(3):
        for b in range(a + 1, 3):
            assert cones[a].inputs.isdisjoint(cones[b].inputs)


def test_disjoint_pair_on_width_limited_ring():
    # with width-6 cones a second disjoint output needs n >= 12; at n=16 the
    # pair (first qubit, ninth qubit) separates cleanly and greedy finds m=2
    s = build_1d_brickwork(16, 3)
    assert light_cone(s, 0).inputs.isdisjoint(light_cone(s, 8).inputs)
    assert len(greedy_disjoint(s, 2)) == 2


def test_greedy_shortfall_when_cones_cover_the_ring():
    # n=8, d=3: every cone has width 6, so no two outputs can be disjoint and
    # the greedy set stops at one element
    s = build_1d_brickwork(8, 3)
    assert greedy_disjoint(s, 2) == [0]


def test_greedy_m_validated():
    s = build_1d_brickwork(4, 1)
    with pytest.raises(ValueError):
        greedy_disjoint(s, 0)
    with pytest.raises(ValueError):
        greedy_disjoint(s, 5)


@seed(20240818)
@settings(max_examples=40, deadline=None)
@given(
    n=st.sampled_from([4, 8, 12]),
    d=st.integers(min_value=0, max_value=3),
    m=st.integers(min_value=1, max_value=4),
)
def test_greedy_properties(n, d, m):
    s = build_1d_brickwork(n, d)
    picked = greedy_disjoint(s, m)
    assert len(picked) <= m
    assert picked == sorted(picked)
    cones = [light_cone(s, i) for i in picked]
    for a in range(len(picked)):
        for b in range(a + 1, len(picked)):
            assert cones[a].inputs.isdisjoint(cones[b].inputs)
    # m = 1 always achievable
    assert len(greedy_disjoint(s, 1)) == 1


# --- serialization ----------------------------------------------------------------


def test_json_round_trip_byte_stable():
    for s in [build_1d_brickwork(8, 3), build_2d_grid(2, 3, 4), build_1d_brickwork(2, 0)]:
        text = skeleton_to_json(s)
        again = skeleton_from_json(text)
        assert again == s
        assert skeleton_to_json(again) == text


def test_json_uses_one_based_images():
    s = build_1d_brickwork(4, 1)
    obj = json.loads(skeleton_to_json(s))
    assert obj["n"] == 4 and obj["d"] == 1
    assert sorted(obj["perms"][0]) == [1, 2, 3, 4]


def test_malformed_json_rejected():
    with pytest.raises(ArchitectureError):
        skeleton_from_json("{not json")
    with pytest.raises(ArchitectureError):
        skeleton_from_json('{"n": 4, "d": 1}')


def test_light_cone_type_fields():
    s = build_1d_brickwork(6, 1)
    cone = light_cone(s, 0)
    assert isinstance(cone, LightCone)
    assert cone.output == 0
    assert cone.gates == frozenset({(0, 0)})
