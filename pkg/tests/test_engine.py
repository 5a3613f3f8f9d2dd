from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infactor import engine as eng
from infactor.engine import Family, FactorizationEngine, Mode
from infactor.errors import ConfigError, InputError, OracleMissing
from infactor.graphs import builtin_family, complete_graph, edge_pair, parse_host

LOCAL = ["path", "tree:2", "tree:3", "matching", "cliques:3", "rado:2:1", "pad:star:2"]


def bare(host: str, spec: str) -> FactorizationEngine:
    e = FactorizationEngine(parse_host(host), Family((spec,)))
    e._new_factor()
    return e


class TestExtendDomain:
    def test_first_vertex_on_complete_host(self):
        e = bare("complete", "path")
        e.extend_domain(0, 0)
        assert e.embeddings[0].domain_to_host == {0: 0}
        assert not e.used_edges

    def test_least_unused_vertex(self):
        e = bare("complete", "path")
        for v in (0, 1, 2):
            e.extend_domain(0, v)
        emb = e.embeddings[0]
        assert emb.domain_to_host == {0: 0, 1: 1, 2: 2}
        assert emb.placed_edges == {(0, 1), (1, 2)}

    def test_rado_host_witness(self):
        e = bare("rado:2:1", "path")
        emb = e.embeddings[0]
        # pattern neighbours 1 and 3 of vertex 2 sit on host vertices 1 and 3
        e._map(emb, 1, 1)
        e._map(emb, 3, 3)
        e.extend_domain(0, 2)
        assert emb.domain_to_host[2] == 10
        assert emb.placed_edges == {(1, 10), (3, 10)}

    def test_repeated_vertex_is_noop(self):
        e = bare("complete", "path")
        e.extend_domain(0, 0)
        e.extend_domain(0, 0)
        assert len(e.embeddings[0]) == 1


class TestExtendImage:
    def test_rado_pattern(self):
        e = bare("complete", "rado:2:1")
        emb = e.embeddings[0]
        e._map(emb, 0, 0)
        e.extend_image(0, 7)
        assert emb.domain_to_host[2] == 7
        assert not emb.placed_edges

    def test_matching_pattern(self):
        e = bare("complete", "matching")
        emb = e.embeddings[0]
        e.extend_domain(0, 0)
        e.extend_domain(0, 1)
        edges = set(emb.placed_edges)
        e.extend_image(0, 5)
        assert emb.domain_to_host[2] == 5
        assert emb.placed_edges == edges

    @pytest.mark.parametrize("spec", ["star:1", "star:2", "star:5"])
    def test_star_patterns_lack_the_oracle(self, spec):
        e = bare("complete", spec)
        with pytest.raises(OracleMissing):
            e.extend_image(0, 3)


class TestStages:
    def test_first_stage_uses_first_edge(self):
        e = eng.run_engine("complete", ["rado:2:1"], 1)
        assert e.embeddings[0].domain_to_host[0] == 0
        assert e.embeddings[0].domain_to_host[1] == 1
        assert e.used_edges[(0, 1)] == 0

    def test_three_stages_cover_triangle(self):
        e = eng.run_engine("complete", ["rado:2:1"], 3)
        for edge in [(0, 1), (0, 2), (1, 2)]:
            owners = [emb.factor_id for emb in e.embeddings if edge in emb.placed_edges]
            assert len(owners) == 1

    def test_rado_host_prefix(self):
        e = eng.run_engine("rado:2:1", ["rado:2:1"], 50)
        host = parse_host("rado:2:1")
        first = list(host.edges(50))
        assert all(edge in e.used_edges for edge in first)
        assert not any(eng.check_invariants(e).values())

    def test_seed_on_fresh_pair_when_edge_taken(self):
        e = eng.run_engine("complete", ["path"], 30)
        fresh = 0
        for g in range(30):
            seed = [ln.split() for ln in e.lines if ln.startswith(f"M {g} ")][:2]
            hosts = tuple(sorted(int(rec[3]) for rec in seed))
            if hosts == edge_pair(g):
                assert e.used_edges[hosts] == g
            else:
                fresh += 1
                assert e.used_edges[edge_pair(g)] < g
                assert min(hosts) > g
        assert fresh > 0

    def test_manifest_records(self):
        e = eng.run_engine("complete", ["path", "matching"], 5)
        kinds = [ln.split()[0] for ln in e.lines if not ln.startswith("#")]
        assert kinds.count("S") == 5
        assert kinds.count("E") == 5
        assert set(kinds) <= {"M", "E", "S", "N"}

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(st.sampled_from(LOCAL), min_size=1, max_size=4),
        st.integers(1, 14),
        st.sampled_from(["complete", "rado:2:1", "rado:2:0", "rado:3:1"]),
    )
    def test_invariants_hold_for_random_families(self, family, stages, host):
        e = eng.run_engine(host, family, stages)
        assert not any(eng.check_invariants(e, exhaustive=True).values())
        assert eng.check_structure(e.manifest()) == []
        assert eng.replay(e.manifest()).manifest() == e.manifest()


class TestReplay:
    def test_round_trip_and_determinism(self):
        a = eng.run_engine("rado:2:1", ["path", "rado:2:1"], 20)
        b = eng.run_engine("rado:2:1", ["path", "rado:2:1"], 20)
        assert a.manifest() == b.manifest()
        r = eng.replay(a.manifest())
        assert r.snapshot() == a.snapshot()
        assert r.manifest() == a.manifest()

    def test_sparse_records_present(self):
        text = eng.run_engine("rado:2:1", ["path", "tree:3", "rado:2:1", "matching"], 15).manifest()
        assert any(ln.startswith("N ") for ln in text.splitlines())

    def test_collision_detected(self):
        text = eng.run_engine("complete", ["path"], 4).manifest()
        lines = text.splitlines()
        # map a second factor's vertex onto an edge owned by another factor
        lines.insert(len(lines) - 1, "M 0 999 0")
        lines.insert(len(lines) - 1, "M 0 1000 1")
        with pytest.raises(InputError):
            eng.replay("\n".join(lines) + "\n")

    def test_stale_placement_detected(self):
        e = eng.run_engine("complete", ["cliques:3"], 3)
        # a vertex seen by factor 1 but outside the image of factor 0
        old = max(set(e.embeddings[1].host_to_domain) - set(e.embeddings[0].host_to_domain))
        lines = e.manifest().splitlines()
        # pattern 6 and 7 are adjacent in cliques:3
        lines.insert(len(lines) - 1, "M 0 6 900")
        lines.insert(len(lines) - 1, f"M 0 7 {old}")
        problems = eng.check_structure("\n".join(lines) + "\n")
        assert len(problems) == 1 and f"seen vertex {old}" in problems[0]

    def test_bad_header(self):
        with pytest.raises(InputError):
            eng.replay("M 0 0 0\n")

    def test_wrong_edge_claim(self):
        text = eng.run_engine("complete", ["path"], 2).manifest().replace("E 1 ", "E 2 ", 1)
        with pytest.raises(InputError):
            eng.replay(text)


class TestInvariantCheckers:
    def test_broken_isomorphism_caught(self):
        e = eng.run_engine("complete", ["path"], 6)
        emb = e.embeddings[2]
        extra = (100, 101)
        emb.placed_edges.add(extra)
        e.used_edges[extra] = 2
        assert eng.check_isomorphism(emb, e.host)
        assert eng.check_isomorphism(emb, e.host, exhaustive=True)

    def test_missing_edge_caught(self):
        e = eng.run_engine("complete", ["path"], 6)
        emb = e.embeddings[1]
        emb.placed_edges.pop()
        assert eng.check_isomorphism(emb, e.host)
        assert eng.check_exact_cover(e)

    def test_prefix_and_vertex_conditions(self):
        e = eng.run_engine("complete", ["path"], 6)
        del e.used_edges[edge_pair(3)]
        assert eng.check_prefix_cover(e)
        e.embeddings[0].domain_to_host.pop(5)
        assert eng.check_vertex_conditions(e)


class TestFiniteMode:
    def test_path_plus_rado_tail(self):
        e = eng.run_finite_mode("rado:2:1", ["path", "rado:2:1"], 30)
        assert len(e.embeddings) == 1
        assert not any(eng.check_invariants(e).values())
        res = e.residual()
        host = parse_host("rado:2:1")
        for lo, hi in host.edges(400):
            assert res.adjacency(lo, hi) == ((lo, hi) not in e.used_edges)

    def test_residual_star_property(self):
        e = eng.run_finite_mode("rado:2:1", ["path", "rado:2:1"], 30)
        rep = eng.check_star_property(e.residual(), 50, 15, 1 << 20, seed=3)
        assert rep.ok and rep.successes == 50

    def test_single_rado_member(self):
        e = eng.run_finite_mode("rado:2:1", ["rado:2:1"], 10)
        assert not e.used_edges
        assert e.residual().adjacency(1, 3)

    def test_tail_must_be_rado(self):
        with pytest.raises(ConfigError):
            eng.run_finite_mode("rado:2:1", ["path", "matching"], 3)
        with pytest.raises(ConfigError):
            eng.run_finite_mode("complete", ["path", "rado:2:1"], 3)


class TestSplit:
    @pytest.mark.parametrize("family", [["path", "tree:3"], ["rado:2:1"]])
    def test_disjoint_hosts(self, family):
        even, odd = eng.factorize_complete_via_split(family, 40)
        assert not set(even.used_edges) & set(odd.used_edges)
        for e in (even, odd):
            assert not any(eng.check_invariants(e).values())
            assert eng.replay(e.manifest()).manifest() == e.manifest()
        assert even.host.name == "rado:2:0" and odd.host.name == "rado:2:1"
        assert even.family.spec(1) == family[2 % len(family)]

    def test_star_member_rejected(self):
        with pytest.raises(OracleMissing):
            eng.factorize_complete_via_split(["path", "star:1"], 10)


class TestStarProperty:
    def test_rado_passes(self):
        rep = eng.check_star_property(builtin_family("rado:2:1"), 100, 12, 1 << 16, seed=0)
        assert rep.successes == 100

    def test_path_fails(self):
        path = builtin_family("path")
        assert eng.find_star_witness(path, [0, 2], [1], 1 << 12) is None
        assert eng.find_star_witness(path, [0, 2], [], 1 << 12) == 1
        rep = eng.check_star_property(path, 30, 12, 1 << 10, seed=0)
        assert not rep.ok

    def test_complete_graph_with_empty_W(self):
        assert eng.find_star_witness(complete_graph(), [0, 3, 5], [], 100) == 1

    def test_seeded(self):
        g = builtin_family("rado:3:0,1")
        a = eng.check_star_property(g, 20, 12, 1 << 16, seed=7)
        b = eng.check_star_property(g, 20, 12, 1 << 16, seed=7)
        assert a.failures == b.failures and a.successes == b.successes


def test_finite_tail_requires_count():
    with pytest.raises(ConfigError):
        FactorizationEngine(parse_host("rado:2:1"), Family(("rado:2:1",)), Mode.FINITE_TAIL)


def test_empty_family():
    with pytest.raises(ConfigError):
        Family(())
