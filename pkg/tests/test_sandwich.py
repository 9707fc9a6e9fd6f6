"""Sandwich solvers against the brute-force enumerator."""

import itertools
import random

import pytest

from redblue.errors import (
    GuardExceeded,
    InputError,
    IntractableTemplateError,
    OpenRegimeError,
)
from redblue.graphs import StarMatrix, from_matrix
from redblue.sandwich import (
    MAX_FREE_PAIRS,
    SandwichInstance,
    brute_force_sandwich,
    solve_list_sandwich,
    solve_sandwich,
    to_csp_instance,
    verify_mpartition,
)

M_S = StarMatrix.make([["0", "*"], ["*", "1"]])
M_B = StarMatrix.make([["0", "*"], ["*", "0"]])
STUBBORN = StarMatrix.make(
    [
        ["0", "*", "0", "*"],
        ["*", "0", "*", "*"],
        ["0", "*", "*", "*"],
        ["*", "*", "*", "1"],
    ]
)
ADJ_K3 = StarMatrix.make([["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]])


def _pairs(n):
    return list(itertools.combinations(range(n), 2))


def _random_instance(rng, n, with_lists=False, parts=2):
    allowed = [e for e in _pairs(n) if rng.random() < 0.75]
    mandatory = [e for e in allowed if rng.random() < 0.45]
    lists = None
    if with_lists:
        lists = [
            frozenset(p for p in range(parts) if rng.random() < 0.75) or frozenset(range(parts))
            for _ in range(n)
        ]
    return SandwichInstance.make(n, mandatory, allowed, lists)


def _check_yes(m, s, res):
    edges, f = res
    assert s.mandatory <= edges <= s.allowed
    assert verify_mpartition(m, s.n, edges, f) is None
    if s.lists is not None:
        assert all(f[v] in s.lists[v] for v in range(s.n))


def test_instance_json_roundtrip():
    s = SandwichInstance.make(3, [(0, 1)], [(0, 1), (1, 2)], [[0], [0, 1], [1]])
    assert SandwichInstance.from_json(s.to_json()) == s
    bare = SandwichInstance.make(2, [], [(0, 1)])
    assert SandwichInstance.from_json(bare.to_json()) == bare


def test_instance_validation():
    with pytest.raises(InputError):
        SandwichInstance.make(2, [(0, 0)], [(0, 0)])  # loop
    with pytest.raises(InputError):
        SandwichInstance.make(2, [(0, 1)], [])  # mandatory outside allowed
    with pytest.raises(InputError):
        SandwichInstance.make(2, [], [(0, 2)])  # vertex out of range
    with pytest.raises(InputError):
        SandwichInstance.make(3, [], [(0, 1)], [[0]])  # one list for three


def test_to_csp_instance_encoding():
    s = SandwichInstance.make(3, [(0, 1)], [(0, 1), (1, 2)])
    inst = to_csp_instance(s, 2)
    g = inst.graph
    assert g.blue[0, 1] and not g.blue[1, 2]
    assert g.red[0, 2] and not g.red[0, 1] and not g.red[1, 2]
    assert all(l == frozenset({0, 1}) for l in inst.lists)


@pytest.mark.parametrize("matrix", [M_S, M_B], ids=["M_S", "M_B"])
def test_exhaustive_tiny_against_brute_force(matrix):
    n = 3
    for allowed_mask in range(1 << len(_pairs(n))):
        allowed = [e for i, e in enumerate(_pairs(n)) if allowed_mask >> i & 1]
        for sub_mask in range(1 << len(allowed)):
            mandatory = [e for i, e in enumerate(allowed) if sub_mask >> i & 1]
            s = SandwichInstance.make(n, mandatory, allowed)
            got = solve_sandwich(matrix, s)
            want = brute_force_sandwich(matrix, s)
            assert (got is None) == (want is None)
            if got is not None:
                res = solve_list_sandwich(matrix, s)
                _check_yes(matrix, s, res)


@pytest.mark.parametrize("matrix", [M_S, M_B], ids=["M_S", "M_B"])
def test_random_against_brute_force(matrix):
    rng = random.Random(len(matrix.entries))
    for _ in range(60):
        s = _random_instance(rng, rng.randint(1, 6))
        got = solve_sandwich(matrix, s)
        want = brute_force_sandwich(matrix, s)
        assert (got is None) == (want is None)


def test_list_sandwich_on_a_core_matrix():
    rng = random.Random(3)
    for _ in range(50):
        s = _random_instance(rng, rng.randint(1, 5), with_lists=True)
        got = solve_list_sandwich(M_S, s)
        want = brute_force_sandwich(M_S, s)
        assert (got is None) == (want is None)
        if got is not None:
            _check_yes(M_S, s, got)


def test_list_sandwich_through_a_full_fold():
    folding = StarMatrix.make(
        [["0", "*", "*"], ["*", "1", "1"], ["*", "1", "1"]]
    )
    rng = random.Random(4)
    for _ in range(50):
        s = _random_instance(rng, rng.randint(1, 5), with_lists=True, parts=3)
        got = solve_list_sandwich(folding, s)
        want = brute_force_sandwich(folding, s)
        assert (got is None) == (want is None)
        if got is not None:
            _check_yes(folding, s, got)


def test_split_graph_recognition_special_case():
    # a split graph: clique {0,1} plus independent {2,3}, one cross edge
    edges = [(0, 1), (0, 2)]
    s = SandwichInstance.make(4, edges, edges)
    assert solve_sandwich(M_S, s) == frozenset(edges)


def test_c4_needs_a_chord():
    cycle = [(0, 1), (1, 2), (2, 3), (0, 3)]
    s = SandwichInstance.make(4, cycle, _pairs(4))
    got = solve_sandwich(M_S, s)
    assert got is not None and frozenset(cycle) < got


def test_stubborn_plain_solver_always_succeeds():
    rng = random.Random(5)
    for _ in range(30):
        s = _random_instance(rng, rng.randint(1, 6))
        got = solve_list_sandwich(STUBBORN, s)
        assert got is not None
        _check_yes(STUBBORN, s, got)


def test_stubborn_lists_are_the_open_regime():
    rng = random.Random(6)
    s = _random_instance(rng, 5, with_lists=True, parts=4)
    with pytest.raises(OpenRegimeError):
        solve_list_sandwich(STUBBORN, s)
    for _ in range(25):
        s = _random_instance(rng, rng.randint(1, 5), with_lists=True, parts=4)
        got = solve_list_sandwich(STUBBORN, s, oracle=True)
        want = brute_force_sandwich(STUBBORN, s)
        assert (got is None) == (want is None)
        if got is not None:
            _check_yes(STUBBORN, s, got)


def test_adjacency_matrix_needs_the_oracle():
    s = SandwichInstance.make(3, [(0, 1)], _pairs(3))
    with pytest.raises(IntractableTemplateError):
        solve_sandwich(ADJ_K3, s)
    rng = random.Random(7)
    for _ in range(30):
        s = _random_instance(rng, rng.randint(1, 5))
        got = solve_sandwich(ADJ_K3, s, oracle=True)
        want = brute_force_sandwich(ADJ_K3, s)
        assert (got is None) == (want is None)


def test_brute_force_guard():
    n = 8
    s = SandwichInstance.make(n, [], _pairs(n))
    assert len(_pairs(n)) > MAX_FREE_PAIRS
    with pytest.raises(GuardExceeded):
        brute_force_sandwich(M_S, s)
