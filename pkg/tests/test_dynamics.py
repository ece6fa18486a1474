import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_relax
from sandpile.dynamics import (
    CapExceeded,
    burning_vector,
    enumerate_recurrent,
    group_add,
    group_inverse,
    identity_element,
    is_recurrent,
    is_stable,
    max_stable,
    recurrent_representative,
    stabilize,
)
from sandpile.graph import path_graph, rectangle_graph
from sandpile.harmonic import solve_laplacian


def in_image_of_laplacian(g, f):
    return all(x.denominator == 1 for x in solve_laplacian(g, f))


def add_lap(g, f, h):
    return tuple(a + b for a, b in zip(f, g.laplacian @ h))


class TestStabilize:
    def test_examples(self):
        g = rectangle_graph(2, 2)
        assert stabilize(g, (0,)) == ((0,), (0,))
        assert stabilize(g, (4,)) == ((0,), (1,))

    def test_matches_naive_relaxer(self):
        g = path_graph(5)
        rng = random.Random(1)
        for _ in range(200):
            f = [rng.randint(0, 9) for _ in range(len(g))]
            assert stabilize(g, f) == naive_relax(g, f)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            stabilize(path_graph(3), (-1, 0))
        with pytest.raises(ValueError):
            stabilize(path_graph(3), (1, 0, 0))

    @settings(max_examples=300)
    @given(st.data())
    def test_conservation_and_abelian(self, data):
        g = data.draw(st.sampled_from([rectangle_graph(3, 3), rectangle_graph(2, 5), path_graph(6),
                                       rectangle_graph(4, 3)]))
        f = data.draw(st.lists(st.integers(0, 40), min_size=len(g), max_size=len(g)))
        out, odo = stabilize(g, f)
        assert is_stable(g, out)
        assert out == add_lap(g, f, odo)
        assert stabilize(g, f, policy="max") == (out, odo)

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            stabilize(path_graph(3), (0, 0), policy="lifo")


class TestRecurrence:
    def test_single_vertex(self):
        g = rectangle_graph(2, 2)
        assert [is_recurrent(g, (k,)) for k in range(4)] == [True] * 4

    def test_path3(self):
        g = path_graph(3)
        assert not is_recurrent(g, (0, 0))
        states = [s for s in itertools.product(range(2), repeat=2) if is_recurrent(g, s)]
        assert len(states) == 3

    def test_max_stable_is_recurrent(self, small_graphs):
        for g in small_graphs:
            assert is_recurrent(g, max_stable(g))

    def test_unstable_rejected(self):
        with pytest.raises(ValueError):
            is_recurrent(rectangle_graph(2, 2), (4,))

    def test_burning_vector(self, small_graphs):
        for g in small_graphs:
            assert burning_vector(g) == tuple(-x for x in g.laplacian @ ([1] * len(g)))


class TestRepresentative:
    def test_examples(self):
        g = rectangle_graph(2, 2)
        assert recurrent_representative(g, (-1,)) == (3,)
        p = path_graph(3)
        for s in enumerate_recurrent(p):
            assert recurrent_representative(p, s) == s
        phi = recurrent_representative(p, (0, 0))
        assert is_recurrent(p, phi)
        assert in_image_of_laplacian(p, [a - b for a, b in zip(phi, (0, 0))])

    @settings(max_examples=100)
    @given(st.data())
    def test_coset_invariance(self, data):
        g = data.draw(st.sampled_from([rectangle_graph(3, 3), path_graph(5), rectangle_graph(2, 4)]))
        n = len(g)
        f = data.draw(st.lists(st.integers(-30, 30), min_size=n, max_size=n))
        h = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
        phi = recurrent_representative(g, f)
        assert is_recurrent(g, phi)
        assert in_image_of_laplacian(g, [a - b for a, b in zip(phi, f)])
        assert recurrent_representative(g, add_lap(g, f, h)) == phi


class TestGroup:
    def test_single_vertex_arithmetic(self):
        g = rectangle_graph(2, 2)
        assert group_add(g, (3,), (2,)) == (1,)
        assert identity_element(g) == (0,)
        assert group_inverse(g, (1,)) == (3,)

    def test_identity_and_inverse(self, small_graphs):
        for g in small_graphs:
            e = identity_element(g)
            assert group_add(g, e, e) == e
            assert group_inverse(g, e) == e
            states = enumerate_recurrent(g)
            for a in states:
                assert group_add(g, e, a) == a
                assert group_add(g, a, group_inverse(g, a)) == e

    def test_path3_identity_is_neutral(self):
        g = path_graph(3)
        e = identity_element(g)
        assert all(group_add(g, e, a) == a for a in enumerate_recurrent(g))

    def test_inverse_random_gamma33(self):
        g = rectangle_graph(3, 3)
        rng = random.Random(3)
        e = identity_element(g)
        for _ in range(20):
            a = recurrent_representative(g, [rng.randint(-10, 10) for _ in range(4)])
            assert group_add(g, a, group_inverse(g, a)) == e

    def test_axioms_exhaustive(self):
        for g in (path_graph(4), rectangle_graph(2, 3), path_graph(7)):
            states = enumerate_recurrent(g)
            s = set(states)
            for a in states:
                for b in states:
                    c = group_add(g, a, b)
                    assert c in s
                    assert c == group_add(g, b, a)
            rng = random.Random(0)
            for _ in range(100):
                a, b, c = (rng.choice(states) for _ in range(3))
                assert group_add(g, group_add(g, a, b), c) == group_add(g, a, group_add(g, b, c))


class TestEnumerate:
    def test_counts(self):
        assert len(enumerate_recurrent(rectangle_graph(2, 2))) == 4
        assert len(enumerate_recurrent(path_graph(3))) == 3
        assert len(enumerate_recurrent(rectangle_graph(2, 3))) == 15

    def test_count_is_det(self, small_graphs):
        for g in small_graphs:
            assert len(enumerate_recurrent(g)) == g.det

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_recurrent(rectangle_graph(4, 4), cap=1000)
