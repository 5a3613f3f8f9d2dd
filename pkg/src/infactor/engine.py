"""Dovetailed back-and-forth construction of factorization prefixes.

Stage ``g`` of an :class:`FactorizationEngine` in infinite-family mode

1. creates factor ``g``: the colex-least edge of pattern ``F_g`` is mapped onto
   the host edge ``e_g`` if that edge is still free, otherwise onto a pair of
   fresh host vertices;
2. for every older factor, adds pattern vertex ``g`` to its domain
   (:meth:`~FactorizationEngine.extend_domain`) and host vertex ``g`` to its
   image (:meth:`~FactorizationEngine.extend_image`);
3. back-fills vertices ``0..g`` into the new factor the same way.

New domain vertices always land on host vertices never touched before, so a
placed edge can only collide with nothing.  After stage ``g`` the host edges
``e_0..e_g`` are covered exactly once and every factor ``a <= g`` contains
vertex ``g`` on both sides.

Runs are recorded as a line-oriented manifest (see :data:`MANIFEST_HEADER`)
from which :func:`replay` rebuilds the state exactly.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .errors import ConfigError, InputError, OracleMissing, WitnessImpossible
from .graphs import (
    ComputableGraph,
    builtin_family,
    edge_index,
    edge_pair,
    ordered,
    parse_host,
)
from .naturals import Nat, NatCodec, compare

log = logging.getLogger(__name__)

MANIFEST_HEADER = "# infactor manifest v1"
PATTERN_EDGE_SCAN = 1_000_000


class Mode(str, Enum):
    INFINITE = "infinite"
    FINITE_TAIL = "finite-tail"


@dataclass
class Family:
    """Stage-indexed supplier of pattern graphs.

    Member ``i`` is ``specs[(offset + stride * i) % len(specs)]``, so a list
    of descriptors repeats forever; ``stride=2`` selects every other member.
    """

    specs: tuple[str, ...]
    offset: int = 0
    stride: int = 1
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.specs = tuple(self.specs)
        if not self.specs:
            raise ConfigError("empty family")
        for s in self.specs:
            builtin_family(s)

    def spec(self, i: int) -> str:
        return self.specs[(self.offset + self.stride * i) % len(self.specs)]

    def member(self, i: int) -> ComputableGraph:
        s = self.spec(i)
        g = self._cache.get(s)
        if g is None:
            g = self._cache[s] = builtin_family(s)
        return g

    def header(self) -> str:
        return f"{self.offset} {self.stride} " + " ".join(self.specs)

    @classmethod
    def from_header(cls, text: str) -> "Family":
        offset, stride, *specs = text.split()
        return cls(tuple(specs), int(offset), int(stride))


@dataclass
class PartialEmbedding:
    """A finite injective map from pattern vertices to host vertices."""

    factor_id: int
    pattern: ComputableGraph
    domain_to_host: dict = field(default_factory=dict)
    host_to_domain: dict = field(default_factory=dict)
    placed_edges: set = field(default_factory=set)
    max_domain: Nat = -1

    def __len__(self) -> int:
        return len(self.domain_to_host)


def colex_least_edge(graph: ComputableGraph, cap: int = PATTERN_EDGE_SCAN) -> tuple[int, int]:
    adj = graph.adjacency
    for k in range(cap):
        lo, hi = edge_pair(k)
        if adj(lo, hi):
            return lo, hi
    raise ConfigError(f"pattern {graph.name} has no edge among its first {cap} pairs")


class FactorizationEngine:
    """Single-writer state machine; one :meth:`run_stage` call per stage."""

    def __init__(
        self,
        host: ComputableGraph,
        family: Family,
        mode: Mode = Mode.INFINITE,
        n_factors: Optional[int] = None,
    ):
        if mode is Mode.FINITE_TAIL:
            if n_factors is None or n_factors < 1:
                raise ConfigError("finite-tail mode needs n_factors >= 1")
            if not host.name.startswith("rado:"):
                raise ConfigError("finite-tail mode needs a Rado host")
        self.host = host
        self.family = family
        self.mode = Mode(mode)
        self.n_factors = n_factors
        self.embeddings: list[PartialEmbedding] = []
        # edge -> owning factor; the keys are the used edge set
        self.used_edges: dict[tuple, int] = {}
        self.stage = 0
        self.touched_max: Nat = -1
        self._host_edges: list[tuple[int, int]] = []
        self._host_scan = 0
        self._codec = NatCodec()
        self.stale_placements: list[tuple] = []
        self.lines: list[str] = [
            MANIFEST_HEADER,
            f"# host {host.name}",
            f"# family {family.header()}",
            f"# mode {self.mode.value}" + (f" {n_factors}" if n_factors is not None else ""),
        ]

    # ------------------------------------------------------------------
    # bookkeeping

    def _touch(self, v: Nat) -> None:
        if compare(v, self.touched_max) > 0:
            self.touched_max = v

    def _fmt(self, v: Nat) -> str:
        return self._codec.encode(v, self.lines.append)

    def host_edge(self, i: int) -> tuple[int, int]:
        """The ``i``-th host edge in colex order."""
        if self.host.name == "complete":
            return edge_pair(i)
        adj = self.host.adjacency
        while len(self._host_edges) <= i:
            lo, hi = edge_pair(self._host_scan)
            self._host_scan += 1
            if adj(lo, hi):
                self._host_edges.append((lo, hi))
        return self._host_edges[i]

    def _new_factor(self) -> PartialEmbedding:
        fid = len(self.embeddings)
        emb = PartialEmbedding(fid, self.family.member(fid))
        self.embeddings.append(emb)
        return emb

    def _map(self, emb: PartialEmbedding, dom: Nat, img: Nat, nbrs: Optional[list] = None) -> list[tuple]:
        """Add ``dom -> img`` and place the edges to its pattern-neighbours."""
        if dom in emb.domain_to_host:
            raise InputError(f"pattern vertex {dom} already mapped in factor {emb.factor_id}")
        if img in emb.host_to_domain:
            raise InputError(f"host vertex {img} already in the image of factor {emb.factor_id}")
        if nbrs is None:
            if compare(dom, emb.max_domain) > 0:
                nbrs = emb.pattern.lower_among(dom, emb.domain_to_host.keys())
            else:
                nbrs = emb.pattern.neighbors_among(dom, emb.domain_to_host)
        placed = []
        for u in nbrs:
            e = ordered(emb.domain_to_host[u], img)
            owner = self.used_edges.get(e)
            if owner is not None:
                raise InputError(f"edge {e} already used by factor {owner}")
            placed.append(e)
        emb.domain_to_host[dom] = img
        emb.host_to_domain[img] = dom
        if compare(dom, emb.max_domain) > 0:
            emb.max_domain = dom
        for e in placed:
            emb.placed_edges.add(e)
            self.used_edges[e] = emb.factor_id
        self._touch(img)
        self.lines.append(f"M {emb.factor_id} {self._fmt(dom)} {self._fmt(img)}")
        return placed

    def _fresh_witness(self, U: list) -> Nat:
        if self.host.star_witness is None:
            raise WitnessImpossible(f"host {self.host.name} has no star witness oracle")
        return self.host.star_witness(U, (), self.touched_max)

    # ------------------------------------------------------------------
    # the two extension steps

    def extend_domain(self, factor_id: int, v: Nat) -> None:
        """Add pattern vertex ``v`` to factor ``factor_id`` on a fresh host vertex."""
        emb = self.embeddings[factor_id]
        if v in emb.domain_to_host:
            return
        nbrs = emb.pattern.neighbors_among(v, emb.domain_to_host)
        a = self._fresh_witness([emb.domain_to_host[u] for u in nbrs])
        if compare(a, self.touched_max) <= 0:
            raise WitnessImpossible(f"host witness {a} is not fresh")
        self._map(emb, v, a, nbrs)

    def extend_image(self, factor_id: int, x: Nat) -> None:
        """Add host vertex ``x`` to the image of ``factor_id`` with no new edges."""
        emb = self.embeddings[factor_id]
        if x in emb.host_to_domain:
            return
        pattern = emb.pattern
        if pattern.undominated is None:
            raise OracleMissing(
                f"pattern {pattern.name} (factor {factor_id}) has no undominated-vertex oracle; "
                "a graph with a finite dominating set cannot be a factor here"
            )
        a = pattern.undominated(list(emb.domain_to_host), emb.max_domain)
        if compare(a, emb.max_domain) <= 0:
            raise OracleMissing(f"undominated oracle of {pattern.name} returned {a}, not above the domain")
        # a exceeds the whole domain, so any neighbour of it there is a lower one
        if pattern.lower_among(a, emb.domain_to_host.keys()):
            raise OracleMissing(f"undominated oracle of {pattern.name} returned a dominated vertex {a}")
        self._map(emb, a, x, [])

    # ------------------------------------------------------------------
    # stages

    def _seed(self, emb: PartialEmbedding, target: Optional[tuple]) -> None:
        u, w = colex_least_edge(emb.pattern)
        if target is None or target in self.used_edges:
            a = self._fresh_witness([])
            b = self.host.star_witness([a], (), a)
            target = (a, b)
        self._map(emb, u, target[0])
        self._map(emb, w, target[1])

    def _grow(self, emb: PartialEmbedding, v: int) -> None:
        self.extend_domain(emb.factor_id, v)
        self.extend_image(emb.factor_id, v)

    def run_stage(self) -> None:
        g = self.stage
        if self.mode is Mode.INFINITE:
            e = self.host_edge(g)
            emb = self._new_factor()
            self._seed(emb, e)
            for older in self.embeddings[:-1]:
                self._grow(older, g)
            for b in range(g + 1):
                self._grow(emb, b)
            self.lines.append(f"E {edge_index(*e)} {self.used_edges[e]}")
        else:
            grown = self.n_factors - 1
            for older in self.embeddings[: min(g, grown)]:
                self._grow(older, g)
            if g < grown:
                emb = self._new_factor()
                self._seed(emb, None)
                for b in range(g + 1):
                    self._grow(emb, b)
        self.lines.append(f"S {g}")
        self.stage = g + 1

    def run(self, stages: int) -> "FactorizationEngine":
        for _ in range(stages):
            self.run_stage()
        return self

    # ------------------------------------------------------------------
    # views

    def manifest(self) -> str:
        return "\n".join(self.lines) + "\n"

    def residual(self) -> ComputableGraph:
        """Host minus the used edges (the Rado tail in finite-tail mode)."""
        adj = self.host.adjacency
        used = self.used_edges

        def adjacency(u, v):
            return adj(u, v) and ordered(u, v) not in used

        return ComputableGraph(f"residual({self.host.name})", adjacency)

    def snapshot(self) -> tuple:
        return (
            self.stage,
            [(e.factor_id, e.pattern.name, dict(e.domain_to_host), set(e.placed_edges)) for e in self.embeddings],
            dict(self.used_edges),
        )


# ----------------------------------------------------------------------
# construction helpers


def run_engine(host: str, family: Iterable[str], stages: int) -> FactorizationEngine:
    return FactorizationEngine(parse_host(host), Family(tuple(family))).run(stages)


def run_finite_mode(host: str, family: Iterable[str], stages: int) -> FactorizationEngine:
    """Finite family whose last member is the Rado residual."""
    specs = tuple(family)
    if not specs[-1].startswith("rado:"):
        raise ConfigError("the last member of a finite family must be a Rado graph")
    eng = FactorizationEngine(parse_host(host), Family(specs), Mode.FINITE_TAIL, n_factors=len(specs))
    return eng.run(stages)


def factorize_complete_via_split(family: Iterable[str], stages: int) -> tuple[FactorizationEngine, FactorizationEngine]:
    """Even members factorize ``R^2_{0}``, odd members ``R^2_{1}``; the two
    hosts partition the edges of K_N."""
    specs = tuple(family)
    engines = []
    for parity in (0, 1):
        host = parse_host(f"rado:2:{parity}")
        engines.append(FactorizationEngine(host, Family(specs, offset=parity, stride=2)).run(stages))
    return engines[0], engines[1]


# ----------------------------------------------------------------------
# replay


def replay(text: str) -> FactorizationEngine:
    """Rebuild an engine from its manifest, re-deriving every placed edge.

    Edge collisions raise :class:`InputError`.  Edge-placing ``M`` records
    whose host vertex was already seen are listed in ``engine.stale_placements``
    (the two seed records of each factor are exempt).
    """
    header: dict[str, str] = {}
    body = []
    for raw in text.splitlines():
        if not raw.strip():
            continue
        if raw.startswith("#"):
            key, _, value = raw[1:].strip().partition(" ")
            header[key] = value
        else:
            body.append(raw.split())
    try:
        mode_fields = header["mode"].split()
        engine = FactorizationEngine(
            parse_host(header["host"]),
            Family.from_header(header["family"]),
            Mode(mode_fields[0]),
            int(mode_fields[1]) if len(mode_fields) > 1 else None,
        )
    except KeyError as exc:
        raise InputError(f"manifest header lacks {exc}") from exc
    codec = NatCodec()
    seen: set = set()
    for lineno, rec in enumerate(body, 1):
        kind = rec[0]
        if kind == "N":
            codec.define(rec[1:])
        elif kind == "M":
            fid = int(rec[1])
            while fid >= len(engine.embeddings):
                engine._new_factor()
            emb = engine.embeddings[fid]
            img = codec.decode(rec[3])
            seeding = len(emb) < 2
            placed = engine._map(emb, codec.decode(rec[2]), img)
            if placed and not seeding and img in seen:
                engine.stale_placements.append((lineno, fid, img))
            seen.add(img)
        elif kind == "E":
            k, fid = int(rec[1]), int(rec[2])
            e = edge_pair(k)
            if engine.used_edges.get(e) != fid:
                raise InputError(f"manifest claims edge {e} in factor {fid}")
            engine.lines.append(f"E {k} {fid}")
        elif kind == "S":
            engine.lines.append(f"S {rec[1]}")
            engine.stage = int(rec[1]) + 1
        else:
            raise InputError(f"unknown manifest record {' '.join(rec)}")
    return engine


# ----------------------------------------------------------------------
# invariants


def check_exact_cover(engine: FactorizationEngine) -> list[str]:
    """Used edges are the disjoint union of the per-factor placed edges."""
    problems = []
    total = 0
    for emb in engine.embeddings:
        total += len(emb.placed_edges)
        for e in emb.placed_edges:
            if engine.used_edges.get(e) != emb.factor_id:
                problems.append(f"edge {e} of factor {emb.factor_id} owned by {engine.used_edges.get(e)}")
    if total != len(engine.used_edges):
        problems.append(f"{total} placed edges but {len(engine.used_edges)} used edges")
    return problems


def check_prefix_cover(engine: FactorizationEngine) -> list[str]:
    """Host edges ``e_0 .. e_{stage-1}`` are all used (infinite mode)."""
    if engine.mode is not Mode.INFINITE:
        return []
    return [
        f"host edge e_{i} = {engine.host_edge(i)} unused"
        for i in range(engine.stage)
        if engine.host_edge(i) not in engine.used_edges
    ]


def check_vertex_conditions(engine: FactorizationEngine) -> list[str]:
    """Every vertex ``g < stage`` lies in the domain and the image of every
    factor (a stronger form of ``g`` in factor ``a`` for ``a <= g``)."""
    problems = []
    for emb in engine.embeddings:
        for g in range(engine.stage):
            if g not in emb.domain_to_host:
                problems.append(f"vertex {g} missing from the domain of factor {emb.factor_id}")
            if g not in emb.host_to_domain:
                problems.append(f"vertex {g} missing from the image of factor {emb.factor_id}")
    return problems


def check_isomorphism(
    emb: PartialEmbedding, host: ComputableGraph, exhaustive: bool = False
) -> list[str]:
    """The embedding is an isomorphism from the induced pattern subgraph on
    its domain onto its placed edges, and every placed edge is a host edge.

    The default test checks that each placed edge pulls back to a pattern
    edge and that both edge counts agree; since the map is injective this is
    equivalent to the pairwise comparison done with ``exhaustive=True``.
    """
    problems = []
    fwd, back = emb.domain_to_host, emb.host_to_domain
    if len(fwd) != len(back) or any(back.get(h) != d for d, h in fwd.items()):
        problems.append(f"factor {emb.factor_id}: maps are not mutually inverse")
        return problems
    for a, b in emb.placed_edges:
        if not host.adjacency(a, b):
            problems.append(f"factor {emb.factor_id}: {(a, b)} is not a host edge")
        if a not in back or b not in back:
            problems.append(f"factor {emb.factor_id}: {(a, b)} leaves the image")
        elif not emb.pattern.adjacency(back[a], back[b]):
            problems.append(f"factor {emb.factor_id}: {(a, b)} pulls back to a non-edge")
    if exhaustive:
        dom = list(fwd)
        adj = emb.pattern.adjacency
        for i, u in enumerate(dom):
            for v in dom[i + 1 :]:
                if adj(u, v) != (ordered(fwd[u], fwd[v]) in emb.placed_edges):
                    problems.append(f"factor {emb.factor_id}: pair {(u, v)} disagrees")
    else:
        expected = emb.pattern.count_edges_within(fwd)
        if expected != len(emb.placed_edges):
            problems.append(
                f"factor {emb.factor_id}: {expected} pattern edges in the domain, "
                f"{len(emb.placed_edges)} placed"
            )
    return problems


def check_invariants(engine: FactorizationEngine, exhaustive: bool = False) -> dict[str, list[str]]:
    iso = []
    for emb in engine.embeddings:
        iso.extend(check_isomorphism(emb, engine.host, exhaustive))
    return {
        "exact-cover": check_exact_cover(engine),
        "prefix-cover": check_prefix_cover(engine),
        "vertex-conditions": check_vertex_conditions(engine),
        "isomorphism": iso,
    }


def stale_report(engine: FactorizationEngine) -> list[str]:
    """Edge placements onto already-seen vertices recorded by :func:`replay`."""
    return [f"record {n}: factor {f} placed edges at seen vertex {v}" for n, f, v in engine.stale_placements]


def check_structure(text: str) -> list[str]:
    """Replay a manifest and report edge placements onto already-seen vertices."""
    return stale_report(replay(text))


# ----------------------------------------------------------------------
# property checks


@dataclass
class StarReport:
    graph: str
    trials: int
    seed: int
    successes: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def find_star_witness(graph: ComputableGraph, U: Iterable[int], W: Iterable[int], search_cap: int) -> Optional[int]:
    """Least ``z < search_cap`` outside ``U | W`` adjacent to all of ``U`` and none of ``W``."""
    U, W = list(U), list(W)
    skip = set(U) | set(W)
    adj = graph.adjacency
    for z in range(search_cap):
        if z in skip:
            continue
        if all(adj(u, z) for u in U) and not any(adj(w, z) for w in W):
            return z
    return None


def random_disjoint_sets(rng: random.Random, element_bound: int, max_size: int) -> tuple[list, list]:
    pool = rng.sample(range(element_bound), min(element_bound, 2 * max_size))
    nu = rng.randint(0, min(max_size, len(pool)))
    nw = rng.randint(0, min(max_size, len(pool) - nu))
    return sorted(pool[:nu]), sorted(pool[nu : nu + nw])


def check_star_property(
    graph: ComputableGraph,
    trials: int,
    element_bound: int,
    search_cap: int,
    seed: int = 0,
    max_size: int = 5,
) -> StarReport:
    """Sample disjoint ``(U, W)`` below ``element_bound`` and scan for witnesses.

    A failure shows the graph is not Rado-like; success proves nothing.
    """
    rng = random.Random(seed)
    report = StarReport(graph.name, trials, seed)
    for _ in range(trials):
        U, W = random_disjoint_sets(rng, element_bound, max_size)
        if find_star_witness(graph, U, W, search_cap) is None:
            report.failures.append((U, W))
        else:
            report.successes += 1
    return report
