"""Decompositions of finite complete-graph prefixes and a greedy resolver.

A :class:`Decomposition` is a list of blocks (small graphs on naturals) whose
edge sets partition the edges they touch, together with the incidence lists
``G(v)``.  ``complete_upto`` promises that every block containing a vertex
``<= complete_upto`` is present; checks beyond it are inconclusive.

:func:`resolve` grows resolution classes stage by stage: at stage ``g`` every
older class is extended to contain vertex ``g``, then class ``g`` is created
(seeded with block ``g`` when that block is still free) and back-filled with
vertices ``0..g``.  Each extension takes the least-index unassigned block at
the vertex that is vertex-disjoint from the class.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InputError, SearchExhausted

Edge = tuple[int, int]


@dataclass(frozen=True)
class Block:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def make(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> "Block":
        vs = tuple(vertices)
        es = []
        for a, b in edges:
            if a == b:
                raise InputError(f"loop at {a}")
            es.append((min(a, b), max(a, b)))
        if not vs:
            raise InputError("empty block")
        if len(set(vs)) != len(vs):
            raise InputError(f"repeated vertex in block {vs}")
        vset = set(vs)
        for e in es:
            if e[0] not in vset or e[1] not in vset:
                raise InputError(f"edge {e} leaves its block {vs}")
        return cls(vs, tuple(es))

    @classmethod
    def complete(cls, vertices: Iterable[int]) -> "Block":
        vs = tuple(vertices)
        return cls.make(vs, itertools.combinations(vs, 2))

    @classmethod
    def path(cls, *vertices: int) -> "Block":
        return cls.make(vertices, zip(vertices, vertices[1:]))

    @property
    def order(self) -> int:
        return len(self.vertices)

    def is_complete(self) -> bool:
        n = self.order
        return len(self.edges) == n * (n - 1) // 2


@dataclass
class Decomposition:
    blocks: list[Block]
    complete_upto: int
    incidence: dict[int, list[int]] = field(init=False)

    def __post_init__(self):
        seen: dict[Edge, int] = {}
        self.incidence = {}
        for i, b in enumerate(self.blocks):
            for e in b.edges:
                if e in seen:
                    raise InputError(f"edge {e} in blocks {seen[e]} and {i}")
                seen[e] = i
            for v in b.vertices:
                self.incidence.setdefault(v, []).append(i)

    def G(self, v: int) -> list[int]:
        return self.incidence.get(v, [])

    @property
    def vertices(self) -> list[int]:
        return sorted(self.incidence)

    def edge_owner(self) -> dict[Edge, int]:
        return {e: i for i, b in enumerate(self.blocks) for e in b.edges}

    def uncovered_edges(self) -> list[Edge]:
        """Edges of K_{0..complete_upto} in no block."""
        owner = self.edge_owner()
        n = self.complete_upto
        return [(a, b) for b in range(n + 1) for a in range(b) if (a, b) not in owner]

    # --------------------------------------------------------------
    # text format

    def dumps(self) -> str:
        lines = [f"COMPLETE_UPTO {self.complete_upto}"]
        for i, b in enumerate(self.blocks):
            edges = " ".join(f"{x} {y}" for x, y in b.edges)
            lines.append(f"B {i} {' '.join(map(str, b.vertices))} | {edges}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Decomposition":
        complete = None
        blocks: list[Block] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                if head == "COMPLETE_UPTO":
                    complete = int(rest[0])
                elif head == "B":
                    ident = int(rest[0])
                    if ident != len(blocks):
                        raise InputError(f"line {lineno}: block ids must run 0, 1, 2, ...")
                    text_v, _, text_e = " ".join(rest[1:]).partition("|")
                    vs = [int(t) for t in text_v.split()]
                    flat = [int(t) for t in text_e.split()]
                    if len(flat) % 2:
                        raise InputError(f"line {lineno}: odd number of edge endpoints")
                    blocks.append(Block.make(vs, zip(flat[::2], flat[1::2])))
                else:
                    raise InputError(f"line {lineno}: unknown record {head!r}")
            except (ValueError, IndexError) as exc:
                if isinstance(exc, InputError):
                    raise
                raise InputError(f"line {lineno}: {exc}") from exc
        if complete is None:
            raise InputError("missing COMPLETE_UPTO header")
        return cls(blocks, complete)


# ----------------------------------------------------------------------
# fixtures


def single_edge_decomposition(n: int) -> Decomposition:
    """K_{0..n} cut into single edges, in colex order."""
    blocks = [Block.make((a, b), [(a, b)]) for b in range(n + 1) for a in range(b)]
    return Decomposition(blocks, n)


AFFINE_PLANE_3 = [
    # lines of AG(2,3), point (x, y) numbered 3x + y, listed by parallel class
    [(0, 1, 2), (3, 4, 5), (6, 7, 8)],
    [(0, 3, 6), (1, 4, 7), (2, 5, 8)],
    [(0, 4, 8), (1, 5, 6), (2, 3, 7)],
    [(0, 5, 7), (1, 3, 8), (2, 4, 6)],
]


def triangle_decomposition(groups: int) -> Decomposition:
    """Copies of the resolvable 2-(9,3,1) design on vertex groups of nine,
    followed by the cross-group edges as single-edge blocks."""
    if groups < 1:
        raise InputError("need at least one group")
    blocks = []
    for g in range(groups):
        for parallel_class in AFFINE_PLANE_3:
            for line in parallel_class:
                blocks.append(Block.complete(9 * g + p for p in line))
    n = 9 * groups - 1
    for b in range(n + 1):
        for a in range(b):
            if a // 9 != b // 9:
                blocks.append(Block.make((a, b), [(a, b)]))
    return Decomposition(blocks, n)


def fixture_path_extension(base: Decomposition, x: int) -> Decomposition:
    """Add fresh ``y < z`` with blocks ``[y,v,z]`` for ``v != x``, ``[x,z,y]`` and ``[x,y]``.

    The result decomposes ``K_{V + {y, z}}`` when ``base`` decomposes ``K_V``
    and fails N2 at ``(x, y, z)``.
    """
    V = base.vertices
    if x not in base.incidence:
        raise InputError(f"{x} is not a vertex of the base decomposition")
    y, z = max(V) + 1, max(V) + 2
    extra = [Block.path(y, v, z) for v in V if v != x]
    extra += [Block.path(x, z, y), Block.path(x, y)]
    return Decomposition(list(base.blocks) + extra, z)


def near_complete_decomposition(n: int) -> Decomposition:
    """Complete-graph blocks on K_{0..n} apart from two 2-paths through ``{0, 1}``.

    Triangles ``{3i, 3i+1, 3i+2}`` for ``i >= 2``, two paths ``0-5-1`` and
    ``0-6-1``, and single edges for everything else.
    """
    if n < 8:
        raise InputError("need n >= 8")
    blocks = [Block.path(0, 5, 1), Block.path(0, 6, 1)]
    used = {(0, 5), (1, 5), (0, 6), (1, 6)}
    for i in range(2, (n + 1) // 3):
        tri = Block.complete((3 * i, 3 * i + 1, 3 * i + 2))
        if set(tri.edges) & used:
            continue
        blocks.append(tri)
        used.update(tri.edges)
    for b in range(n + 1):
        for a in range(b):
            if (a, b) not in used:
                blocks.append(Block.make((a, b), [(a, b)]))
    return Decomposition(blocks, n)


# ----------------------------------------------------------------------
# necessary conditions


@dataclass
class CheckReport:
    name: str
    verdict: str  # PASS, FAIL or INCONCLUSIVE
    violations: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == "PASS"

    def summary(self) -> str:
        text = self.verdict
        if self.violations:
            text += f" {self.violations[0]}"
        if self.note:
            text += f" ({self.note})"
        return text


def check_R_conditions(d: Decomposition, bound: int) -> CheckReport:
    """R1: every block has at most ``bound`` vertices.  R2: any two vertices
    ``x < y <= complete_upto`` share at most ``bound`` blocks.

    Countable prefixes admit only the literal reading of R1, a uniform
    finite bound on block orders.
    """
    violations = []
    for i, b in enumerate(d.blocks):
        if b.order > bound:
            violations.append(("R1", i, b.order))
    shared: Counter = Counter()
    n = d.complete_upto
    for b in d.blocks:
        vs = sorted(v for v in b.vertices if v <= n)
        for pair in itertools.combinations(vs, 2):
            shared[pair] += 1
    for pair, count in sorted(shared.items()):
        if count > bound:
            violations.append(("R2", pair, count))
    return CheckReport("R", "FAIL" if violations else "PASS", violations)


def _n2_violations(sets: dict[int, frozenset], window: Sequence[int]) -> list[tuple]:
    out = []
    for x, y in itertools.combinations(window, 2):
        gx, gy = sets[x], sets[y]
        union, meet = gx | gy, gx & gy
        for z in window:
            if z == x or z == y:
                continue
            gz = sets[z]
            if gz <= union and not meet <= gz:
                out.append((x, y, z, tuple(sorted(meet - gz))))
    return out


def check_N2(d: Decomposition, window: Iterable[int]) -> CheckReport:
    """``G(z) <= G(x) | G(y)`` must imply ``G(z) >= G(x) & G(y)``.

    Triples are scanned with ``x < y`` outermost and ``z`` innermost, in
    increasing order.  Window vertices beyond ``complete_upto`` are dropped
    and make a passing verdict inconclusive.
    """
    window = sorted(set(window))
    inside = [v for v in window if v <= d.complete_upto]
    sets = {v: frozenset(d.G(v)) for v in inside}
    violations = _n2_violations(sets, inside)
    if violations:
        return CheckReport("N2", "FAIL", violations)
    if len(inside) < len(window):
        return CheckReport("N2", "INCONCLUSIVE", note=f"incidence complete only up to {d.complete_upto}")
    return CheckReport("N2", "PASS")


def check_N1(d: Decomposition, block: Optional[int] = None, complement_size: Optional[int] = None) -> CheckReport:
    """A non-spanning block needs at least ``min |G|`` vertices outside it.

    The complement size cannot be read off a finite prefix, so it is declared
    by the caller; without a declaration the verdict is inconclusive.
    """
    if block is None or complement_size is None:
        return CheckReport("N1", "INCONCLUSIVE", note="no non-spanning block declared")
    if not 0 <= block < len(d.blocks):
        raise InputError(f"no block {block}")
    least = min(b.order for b in d.blocks)
    if complement_size >= least:
        return CheckReport("N1", "PASS")
    return CheckReport("N1", "FAIL", [(block, complement_size, least)])


# ----------------------------------------------------------------------
# resolver


@dataclass
class ResolutionClass:
    vertices: set = field(default_factory=set)
    blocks: list = field(default_factory=list)


@dataclass
class ResolutionState:
    classes: list[ResolutionClass] = field(default_factory=list)
    assigned: dict[int, int] = field(default_factory=dict)  # block -> class
    stage: int = 0
    lines: list[str] = field(default_factory=list)

    def manifest(self) -> str:
        return "".join(line + "\n" for line in self.lines)


class Resolver:
    def __init__(self, d: Decomposition, search_cap: int = 10_000):
        if search_cap < 1:
            raise InputError("search_cap must be >= 1")
        self.d = d
        self.search_cap = search_cap
        self.state = ResolutionState()

    def _assign(self, block: int, cls: int) -> None:
        st = self.state
        c = st.classes[cls]
        c.blocks.append(block)
        c.vertices.update(self.d.blocks[block].vertices)
        st.assigned[block] = cls
        st.lines.append(f"A {block} {cls} {st.stage}")

    def cover(self, cls: int, v: int) -> None:
        """Put vertex ``v`` into class ``cls`` using the least eligible block."""
        c = self.state.classes[cls]
        if v in c.vertices:
            return
        if v > self.d.complete_upto:
            raise InputError(f"incidence of vertex {v} is not known to be complete")
        scanned = 0
        for i in self.d.G(v):
            if scanned >= self.search_cap:
                break
            scanned += 1
            if i in self.state.assigned:
                continue
            if c.vertices.isdisjoint(self.d.blocks[i].vertices):
                self._assign(i, cls)
                return
        raise SearchExhausted(
            f"stage {self.state.stage}: no free block at vertex {v} disjoint from class {cls} "
            f"after {scanned} incidence entries",
            self.search_cap,
        )

    def run_stage(self) -> None:
        st = self.state
        g = st.stage
        if g >= len(self.d.blocks):
            raise InputError(f"stage {g} needs block {g}, but only {len(self.d.blocks)} blocks exist")
        for a in range(len(st.classes)):
            self.cover(a, g)
        st.classes.append(ResolutionClass())
        if g not in st.assigned:
            self._assign(g, g)
        for b in range(g + 1):
            self.cover(g, b)
        st.lines.append(f"S {g}")
        st.stage = g + 1

    def run(self, stages: int) -> ResolutionState:
        for _ in range(stages):
            self.run_stage()
        return self.state


def resolve(d: Decomposition, stages: int, search_cap: int = 10_000) -> ResolutionState:
    return Resolver(d, search_cap).run(stages)


def check_resolution(d: Decomposition, st: ResolutionState) -> list[str]:
    """Disjointness within classes and the stage conditions after ``st.stage`` stages."""
    problems = []
    for a, c in enumerate(st.classes):
        seen: set = set()
        for i in c.blocks:
            vs = set(d.blocks[i].vertices)
            if seen & vs:
                problems.append(f"class {a}: block {i} meets earlier blocks in {sorted(seen & vs)}")
            seen |= vs
            if st.assigned.get(i) != a:
                problems.append(f"block {i} listed in class {a} but assigned to {st.assigned.get(i)}")
        if seen != c.vertices:
            problems.append(f"class {a}: vertex set out of sync")
    owners = Counter(i for c in st.classes for i in c.blocks)
    for i, n in owners.items():
        if n > 1:
            problems.append(f"block {i} in {n} classes")
    for g in range(st.stage):
        for a in range(g + 1):
            if g not in st.classes[a].vertices:
                problems.append(f"vertex {g} missing from class {a}")
        if owners.get(g) != 1 or st.assigned.get(g, g + 1) > g:
            problems.append(f"block {g} not in exactly one class of index <= {g}")
    return problems
