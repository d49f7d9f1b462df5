import json
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ersc import (
    SimplicialComplex,
    a_value,
    b_value,
    closure,
    counts,
    filled_skeleton,
    from_json,
    full_simplex,
    skeleton,
    to_json,
)
from ersc.complex_core import make_simplex, mask_of, vertices_of

# The ten-vertex example complex, shifted to 0-based labels.
EDGES_1 = [(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7), (5, 6),
           (5, 7), (6, 7), (7, 8), (8, 9), (8, 10), (9, 10)]
TRIANGLES_1 = [(2, 4, 5), (4, 5, 6), (4, 5, 7), (4, 6, 7), (5, 6, 7)]
TETRA_1 = [(4, 5, 6, 7)]


def _shift(simplices):
    return [tuple(v - 1 for v in s) for s in simplices]


EDGES, TRIANGLES, TETRA = _shift(EDGES_1), _shift(TRIANGLES_1), _shift(TETRA_1)


@pytest.fixture
def example():
    return closure(EDGES + TRIANGLES + TETRA + [(v,) for v in range(10)], 10)


def _brute_phi(C, d):
    """Count (d+1)-subsets whose facets all lie in C."""
    faces = set(C.simplices())
    return sum(
        all(f in faces for f in combinations(s, d))
        for s in combinations(range(C.n), d + 1)
    )


def test_example_complex_counts(example):
    c = counts(example)
    assert c.f[:4] == (10, 16, 5, 1)
    assert c.phi[1] == comb(10, 2)
    assert c.phi[2] == 8 == _brute_phi(example, 2)
    assert c.phi[3] == 1 == _brute_phi(example, 3)
    assert example.dim == 3


def test_example_complex_indicators(example):
    assert a_value(example, (3, 4, 5, 6)) == 1
    assert a_value(example, (0, 1)) == 0
    assert b_value(example, (7, 8, 9)) == 1
    assert a_value(example, (7, 8, 9)) == 0
    assert b_value(example, (1, 3, 5)) == 0  # edge (1, 5) is absent
    assert b_value(example, (4,)) == 1


def test_example_skeletons(example):
    one = skeleton(example, 1)
    assert counts(one).f[:3] == (10, 16, 0)
    filled = filled_skeleton(example, 1)
    assert (7, 8, 9) in filled
    assert (3, 4, 5, 6) not in filled
    assert len(filled.simplices(2)) == 8
    assert filled_skeleton(one, 1) == filled


def test_closure_of_tetrahedron():
    C = closure([(4, 5, 6, 7)], 10)
    assert counts(C).f[:4] == (4, 6, 4, 1)
    assert closure([], 3).dim == -1
    assert len(closure([], 3)) == 0


def test_filled_zero_skeleton_is_complete_graph():
    C = closure([(i,) for i in range(5)], 5)
    assert len(filled_skeleton(C, 0).simplices(1)) == 10


def test_full_simplex_counts():
    c = counts(full_simplex(3))
    assert c.f[1:] == (3, 1)
    assert c.phi[2] == 1


def test_label_out_of_range():
    with pytest.raises(ValueError):
        closure([(0, 5)], 5)


@pytest.mark.parametrize("bad", [(), (1, 1), (2, -1)])
def test_make_simplex_rejects(bad):
    with pytest.raises(ValueError):
        make_simplex(bad)


def test_make_simplex_sorts():
    assert make_simplex([3, 1, 2]) == (1, 2, 3)
    assert vertices_of(mask_of((0, 4))) == (0, 4)


def test_not_downward_closed_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex.from_simplices(3, [(0,), (1,), (0, 1, 2)])


def test_json_layout(example):
    obj = json.loads(to_json(closure([(0, 2)], 3)))
    assert obj == {"n": 3, "simplices": [[0], [2], [0, 2]]}
    assert from_json(to_json(example)) == example


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 3, "simplices": [[0, 1]]}',
        '{"n": 3, "simplices": [[0], [1], [1, 0]]}',
        '{"n": 2, "simplices": [[0], [2]]}',
    ],
)
def test_json_rejects(text):
    with pytest.raises(ValueError):
        from_json(text)


complexes = st.integers(1, 7).flatmap(
    lambda n: st.lists(
        st.sets(st.integers(0, n - 1), min_size=1, max_size=n), max_size=6
    ).map(lambda gens: closure(gens, n))
)


@settings(max_examples=150, deadline=None)
@given(complexes)
def test_closure_properties(C):
    faces = set(C.simplices())
    for s in faces:
        for k in range(1, len(s)):
            assert all(f in faces for f in combinations(s, k))
        if len(s) > 1:
            assert b_value(C, s) == 1
    assert closure(C.simplices(), C.n) == C
    assert from_json(to_json(C)) == C


@settings(max_examples=150, deadline=None)
@given(complexes)
def test_counts_properties(C):
    c = counts(C)
    for d in range(1, C.n):
        assert c.phi[d] >= c.f[d]
        assert c.phi[d] == _brute_phi(C, d)
        assert c.f[d] <= comb(C.n, d + 1)
    assert c.phi[0] == C.n


@settings(max_examples=100, deadline=None)
@given(complexes, st.integers(0, 4))
def test_filled_skeleton_depends_on_skeleton_only(C, d):
    F = filled_skeleton(C, d)
    assert F == filled_skeleton(skeleton(C, d), d)
    assert skeleton(C, d) == skeleton(F, d)
    assert F.dim <= d + 1
    for s in F.simplices(d + 1):
        assert b_value(C, s) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.integers(0, 5), min_size=1, max_size=6), max_size=5), st.sets(st.integers(0, 5), min_size=1))
def test_closure_monotone(gens, extra):
    small = closure(gens, 6)
    big = closure(gens + [extra], 6)
    assert set(small.simplices()) <= set(big.simplices())


@pytest.mark.parametrize("k", range(5))
def test_closure_of_simplex_binomial(k):
    c = counts(closure([tuple(range(k + 1))], 6))
    assert [c.f[d] for d in range(k + 1)] == [comb(k + 1, d + 1) for d in range(k + 1)]
