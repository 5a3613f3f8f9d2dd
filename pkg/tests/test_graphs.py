from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infactor.errors import ConfigError, InputError, WitnessImpossible
from infactor.graphs import (
    DigitSet,
    builtin_family,
    complete_graph,
    edge_index,
    edge_pair,
    pad_with_isolated,
    parse_host,
    rado_graph,
    rado_star_witness,
    rado_undominated,
    star_forest,
)

R2 = DigitSet(2, frozenset({1}))
BUILTINS = ["path", "tree:2", "tree:3", "matching", "cliques:3", "rado:2:1", "rado:3:0,1", "star:2", "pad:star:1"]


class TestEdgeEnumeration:
    @pytest.mark.parametrize("pair,k", [((0, 1), 0), ((2, 4), 8), ((0, 4), 6), ((1, 3), 4)])
    def test_known_indices(self, pair, k):
        assert edge_index(*pair) == k
        assert edge_pair(k) == pair

    def test_round_trip_on_index_prefix(self):
        for k in range(10**6):
            assert edge_index(*edge_pair(k)) == k

    def test_round_trip_on_pairs(self):
        k = 0
        for hi in range(1500):
            for lo in range(hi):
                assert edge_index(lo, hi) == k
                assert edge_pair(k) == (lo, hi)
                k += 1

    @pytest.mark.parametrize("lo,hi", [(3, 3), (-1, 2)])
    def test_non_edges_rejected(self, lo, hi):
        with pytest.raises(InputError):
            edge_index(lo, hi)

    def test_unordered(self):
        assert edge_index(4, 2) == edge_index(2, 4)


class TestDigitSet:
    @pytest.mark.parametrize("q,I", [(1, {0}), (2, set()), (2, {0, 1}), (3, {3})])
    def test_invalid(self, q, I):
        with pytest.raises(InputError):
            DigitSet(q, frozenset(I))

    def test_label(self):
        assert DigitSet(3, frozenset({1, 0})).label == "rado:3:0,1"


class TestRado:
    def test_adjacency_examples(self):
        g = rado_graph(R2)
        assert g.adjacency(1, 3)
        assert not g.adjacency(0, 4)
        assert not rado_graph(DigitSet(3, frozenset({0}))).adjacency(1, 5)

    def test_witness_examples(self):
        assert rado_star_witness(R2, {1, 3}, {0, 2}, 3) == 10
        assert rado_star_witness(R2, (), (), 0) == 1
        assert rado_star_witness(R2, {0}, (), 0) == 1

    def test_undominated_examples(self):
        assert rado_undominated(R2, {0}, 0) == 2
        assert rado_undominated(R2, {0, 1}, 1) == 4
        assert rado_undominated(R2, (), 5) == 6

    def test_overlapping_sets_rejected(self):
        with pytest.raises(InputError):
            rado_star_witness(R2, {1}, {1}, 0)

    @pytest.mark.parametrize("q,I", [(2, {1}), (2, {0}), (3, {0, 1}), (3, {2}), (5, {1, 4})])
    def test_witness_soundness_random(self, q, I):
        ds = DigitSet(q, frozenset(I))
        g = rado_graph(ds)
        rng = random.Random(q * 31 + sum(I))
        for _ in range(200):
            pool = rng.sample(range(20), rng.randint(0, 10))
            cut = rng.randint(0, len(pool))
            U, W = pool[:cut], pool[cut:]
            z = g.star_witness(U, W, 0)
            assert z > max([0, *pool])
            assert all(g.adjacency(u, z) for u in U)
            assert not any(g.adjacency(w, z) for w in W)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 30), max_size=6, unique=True), st.integers(0, 40))
    def test_witness_is_least(self, pool, bound):
        g = rado_graph(R2)
        U, W = pool[::2], pool[1::2]
        z = g.star_witness(U, W, bound)
        for c in range(max([bound, *pool]) + 1, min(z, 1 << 16)):
            assert not (all(g.adjacency(u, c) for u in U) and not any(g.adjacency(w, c) for w in W))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 25), max_size=6), st.integers(0, 30), st.sampled_from([(2, {1}), (3, {0, 1})]))
    def test_undominated_is_isolated_from_D(self, D, bound, qi):
        g = rado_graph(DigitSet(qi[0], frozenset(qi[1])))
        a = g.undominated(D, bound)
        assert a > max([bound, *D])
        assert not any(g.adjacency(d, a) for d in D)

    @pytest.mark.parametrize("q", [2, 3])
    def test_digit_classes_partition_edges(self, q):
        graphs = [rado_graph(DigitSet(q, frozenset({i}))) for i in range(q)]
        for y in range(1, 1 << 10):
            for x in range(y):
                assert sum(g.adjacency(x, y) for g in graphs) == 1


class TestComplete:
    def test_examples(self):
        g = complete_graph()
        assert g.adjacency(3, 7)
        assert not g.adjacency(5, 5)
        assert g.star_witness({0, 1}, (), 9) == 10
        assert g.undominated is None

    def test_nonempty_W_impossible(self):
        with pytest.raises(WitnessImpossible):
            complete_graph().star_witness({0}, {1}, 3)


class TestBuiltins:
    def test_path_is_a_ray(self):
        g = builtin_family("path")
        assert g.adjacency(4, 5)
        assert not g.adjacency(4, 6)
        assert g.adjacency(0, 1)

    def test_two_way_path_and_tree(self):
        g = builtin_family("tree:2")
        assert sorted(u for u in range(10) if g.adjacency(0, u)) == [1, 2]
        t = builtin_family("tree:3")
        assert sorted(u for u in range(40) if t.adjacency(0, u)) == [1, 2, 3]
        for v in range(1, 40):
            assert sum(t.adjacency(v, u) for u in range(200)) == 3

    def test_matching_undominated(self):
        assert builtin_family("matching").undominated({0, 1}, 1) == 2

    def test_star_forest_has_no_undominated(self):
        g = star_forest(2)
        assert g.undominated is None
        assert g.adjacency(0, 2) and g.adjacency(1, 3) and not g.adjacency(0, 3)

    def test_pad(self):
        p = pad_with_isolated(star_forest(1))
        assert p.adjacency(0, 2)
        assert not p.adjacency(0, 1)
        assert p.undominated({0, 2, 4}, 4) == 5
        cl = pad_with_isolated(builtin_family("cliques:3"))
        assert all(u % 2 == 0 and v % 2 == 0 for u in range(30) for v in range(30) if cl.adjacency(u, v))

    @pytest.mark.parametrize("spec", BUILTINS)
    def test_symmetric_irreflexive(self, spec):
        g = builtin_family(spec)
        for u in range(1 << 7):
            assert not g.adjacency(u, u)
            for v in range(u):
                assert g.adjacency(u, v) == g.adjacency(v, u)

    @pytest.mark.parametrize("spec", BUILTINS)
    @settings(max_examples=300)
    @given(u=st.integers(0, 1 << 12), v=st.integers(0, 1 << 12))
    def test_symmetry_wide(self, spec, u, v):
        g = builtin_family(spec)
        assert g.adjacency(u, v) == g.adjacency(v, u)
        assert not g.adjacency(u, u)

    @pytest.mark.parametrize("spec", [s for s in BUILTINS if not s.startswith("star")])
    @settings(max_examples=60)
    @given(D=st.lists(st.integers(0, 60), max_size=6), bound=st.integers(0, 60))
    def test_undominated_contract(self, spec, D, bound):
        g = builtin_family(spec)
        a = g.undominated(D, bound)
        assert a > max([bound, *D])
        assert not any(g.adjacency(d, a) for d in D)

    @pytest.mark.parametrize("spec", BUILTINS)
    def test_accelerators_agree_with_adjacency(self, spec):
        g = builtin_family(spec)
        vs = list(range(0, 70, 3)) + [5, 8, 64]
        for v in range(0, 40):
            assert sorted(g.neighbors_among(v, vs)) == sorted(u for u in vs if g.adjacency(u, v))
            assert sorted(g.lower_among(v, set(vs))) == sorted(u for u in set(vs) if u < v and g.adjacency(u, v))

    @pytest.mark.parametrize("spec", ["cycle", "tree:1", "rado:2", "star:0", "cliques:1", "pad:nope"])
    def test_unknown_specs(self, spec):
        with pytest.raises((ConfigError, InputError)):
            builtin_family(spec)

    def test_hosts(self):
        assert parse_host("complete").name == "complete"
        assert parse_host("rado:3:0,1").name == "rado:3:0,1"
        with pytest.raises(ConfigError):
            parse_host("path")
