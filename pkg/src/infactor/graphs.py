"""Countable graphs on the vertex set N, given by oracles.

A :class:`ComputableGraph` is an adjacency predicate plus two optional
constructive oracles:

* ``star_witness(U, W, bound)``: a vertex ``z > bound`` adjacent to every
  vertex of ``U`` and to no vertex of ``W``;
* ``undominated(D, bound)``: a vertex ``a > bound`` adjacent to no vertex of
  ``D`` (its absence means the graph may have a finite dominating set).

Both oracles return the least valid vertex above ``max(bound, U, W)`` /
``max(bound, D)``, so every construction built on them is deterministic.

Graphs are described by short strings (``"rado:2:1"``, ``"tree:3"``,
``"pad:star:1"``); :func:`builtin_family` and :func:`parse_host` turn those
into graphs and ``graph.name`` gives the string back.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Collection, Iterable, Optional

from .errors import ConfigError, InputError, WitnessImpossible
from .naturals import LIMIT, Nat, canon, compare, digit, least_constrained, nat_max, succ

Adjacency = Callable[[Nat, Nat], bool]
StarWitness = Callable[[Collection[Nat], Collection[Nat], Nat], Nat]
Undominated = Callable[[Collection[Nat], Nat], Nat]


# --------------------------------------------------------------------------
# colex edge enumeration


def edge_index(lo: int, hi: int) -> int:
    """Colex index of the pair ``{lo, hi}``: ``hi*(hi-1)/2 + lo``."""
    if lo > hi:
        lo, hi = hi, lo
    if lo < 0 or lo == hi:
        raise InputError(f"not an edge: {{{lo}, {hi}}}")
    if type(hi) is not int:
        raise InputError("colex index undefined for sparse vertex ids")
    return hi * (hi - 1) // 2 + lo


def edge_pair(k: int) -> tuple[int, int]:
    """Inverse of :func:`edge_index`."""
    if k < 0:
        raise InputError(f"negative edge index {k}")
    hi = (1 + math.isqrt(1 + 8 * k)) // 2
    # isqrt floors; correct for the boundary on either side
    while hi * (hi - 1) // 2 > k:
        hi -= 1
    while (hi + 1) * hi // 2 <= k:
        hi += 1
    return k - hi * (hi - 1) // 2, hi


def ordered(u: Nat, v: Nat) -> tuple[Nat, Nat]:
    """The pair sorted ascending (works for sparse ids)."""
    return (u, v) if compare(u, v) < 0 else (v, u)


# --------------------------------------------------------------------------
# graph container


@dataclass(frozen=True)
class ComputableGraph:
    name: str
    adjacency: Adjacency = field(repr=False)
    star_witness: Optional[StarWitness] = field(default=None, repr=False, compare=False)
    undominated: Optional[Undominated] = field(default=None, repr=False, compare=False)
    # accelerator: the members of ``vertices`` adjacent to ``v``
    neighbors_in: Optional[Callable[[Nat, Iterable[Nat]], list]] = field(
        default=None, repr=False, compare=False
    )
    # accelerator: the members of the set ``vertices`` below ``v`` and adjacent to it
    lower_neighbors: Optional[Callable[[Nat, set], Iterable[Nat]]] = field(
        default=None, repr=False, compare=False
    )

    def adjacent(self, u: Nat, v: Nat) -> bool:
        return self.adjacency(u, v)

    def neighbors_among(self, v: Nat, vertices: Iterable[Nat]) -> list:
        if self.neighbors_in is not None:
            return self.neighbors_in(v, vertices)
        adj = self.adjacency
        return [u for u in vertices if adj(u, v)]

    def lower_among(self, v: Nat, vertices: set) -> list:
        if self.lower_neighbors is not None:
            return list(self.lower_neighbors(v, vertices))
        adj = self.adjacency
        return [u for u in vertices if compare(u, v) < 0 and adj(u, v)]

    def count_edges_within(self, vertices: Iterable[Nat]) -> int:
        """Number of edges of the subgraph induced on a finite vertex set."""
        vs = set(vertices)
        return sum(len(self.lower_among(v, vs)) for v in vs)

    def edges(self, limit: int) -> Iterable[tuple[int, int]]:
        """The first ``limit`` edges in colex order (scans K_N)."""
        k = 0
        found = 0
        adj = self.adjacency
        while found < limit:
            lo, hi = edge_pair(k)
            if adj(lo, hi):
                yield lo, hi
                found += 1
            k += 1


# --------------------------------------------------------------------------
# R^q_I


@dataclass(frozen=True)
class DigitSet:
    q: int
    digits: frozenset

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise InputError(f"base q must be >= 2, got {self.q}")
        object.__setattr__(self, "digits", frozenset(self.digits))
        if not all(isinstance(d, int) and 0 <= d < self.q for d in self.digits):
            raise InputError(f"digits {sorted(self.digits)} not within 0..{self.q - 1}")
        if not 1 <= len(self.digits) < self.q:
            raise InputError("need 1 <= |I| < q")

    @property
    def complement(self) -> frozenset:
        return frozenset(range(self.q)) - self.digits

    @property
    def label(self) -> str:
        return f"rado:{self.q}:{','.join(map(str, sorted(self.digits)))}"


def rado_adjacent(ds: DigitSet, x: Nat, y: Nat) -> bool:
    if type(x) is int and type(y) is int:
        if x < y:
            return digit(y, x, ds.q) in ds.digits
        return x > y and digit(x, y, ds.q) in ds.digits
    c = compare(x, y)
    if c == 0:
        return False
    if c > 0:
        x, y = y, x
    return digit(y, x, ds.q) in ds.digits


def rado_star_witness(ds: DigitSet, U: Collection[Nat], W: Collection[Nat], bound: Nat) -> Nat:
    """Least ``z > max(bound, U, W)`` with the digit of ``z`` at every ``u`` in
    ``ds.digits`` and at every ``w`` outside it.

    A negative ``bound`` imposes no floor beyond ``U`` and ``W``.
    """
    q = ds.q
    if q == 2:
        z = _binary_witness(ds, U, W, bound)
        if z is not None:
            return z
    U = list(dict.fromkeys(canon(u, q) for u in U))
    W = list(dict.fromkeys(canon(w, q) for w in W))
    allowed: dict = {}
    for u in U:
        allowed[u] = ds.digits
    for w in W:
        if w in allowed:
            raise InputError("U and W must be disjoint")
        allowed[w] = ds.complement
    floor = [*U, *W]
    if not (type(bound) is int and bound < 0):
        floor.append(canon(bound, q))
    start = succ(nat_max(floor), q) if floor else 0
    return least_constrained(q, start, allowed)


def _binary_witness(ds: DigitSet, U, W, bound) -> Optional[int]:
    """Bitmask shortcut for ``q == 2`` when every input is an int.

    A 0-digit demanded at a position beyond the answer's length holds for
    free, so only large positions that need a 1-digit defeat the shortcut.
    Returns None when the shortcut does not apply.
    """
    if type(bound) is not int:
        return None
    ones, zeros = (U, W) if 1 in ds.digits else (W, U)
    one = zero = 0
    top = bound
    for u in ones:
        if type(u) is not int or not 0 <= u < LIMIT:
            return None
        one |= 1 << u
        if u > top:
            top = u
    for w in zeros:
        if type(w) is not int:
            return None
        if w > top:
            top = w
        if w < LIMIT:
            zero |= 1 << w
    if one & zero:
        raise InputError("U and W must be disjoint")
    start = top + 1
    violating = (start & zero) | (~start & one)
    if violating:
        # raise the lowest free 0-bit at or above the highest violation
        j = violating.bit_length() - 1
        candidates = ~start & ~zero & ~((1 << j) - 1)
        low = candidates & -candidates
        start = ((start >> low.bit_length()) << low.bit_length()) | low | (one & (low - 1))
    if start.bit_length() > LIMIT:
        return None
    return start


def rado_undominated(ds: DigitSet, D: Collection[Nat], bound: Nat) -> Nat:
    """Least ``z > max(bound, D)`` adjacent to no vertex of ``D``."""
    return rado_star_witness(ds, (), D, bound)


def rado_graph(ds: DigitSet) -> ComputableGraph:
    q, I = ds.q, ds.digits

    def adjacency(x: Nat, y: Nat) -> bool:
        return rado_adjacent(ds, x, y)

    if q == 2 and I == frozenset({1}):

        def neighbors_in(v: Nat, vertices: Iterable[Nat]) -> list:
            if type(v) is not int:
                return [u for u in vertices if rado_adjacent(ds, u, v)]
            below = set_bits(v)
            if v >= LIMIT:
                # ints above v are shorter than v digits, so only sparse ones can hit
                return [u for u in vertices if (u in below if type(u) is int else u.digit(v))]
            mask = 1 << v
            return [
                u for u in vertices
                if ((u in below if u < v else u > v and u & mask) if type(u) is int else u.digit(v))
            ]

        def lower_neighbors(v: Nat, vertices: set) -> Iterable[Nat]:
            if type(v) is int:
                return set_bits(v) & vertices
            return [p for p, _ in v.digits if p in vertices]

    else:

        def neighbors_in(v: Nat, vertices: Iterable[Nat]) -> list:
            return [u for u in vertices if rado_adjacent(ds, u, v)]

        lower_neighbors = None

    return ComputableGraph(
        name=ds.label,
        adjacency=adjacency,
        star_witness=lambda U, W, b: rado_star_witness(ds, U, W, b),
        undominated=lambda D, b: rado_undominated(ds, D, b),
        neighbors_in=neighbors_in,
        lower_neighbors=lower_neighbors,
    )


@lru_cache(maxsize=1 << 16)
def set_bits(n: int) -> frozenset:
    """Positions of the 1-bits of ``n``; cheap for sparse numbers."""
    out = []
    while n:
        low = n & -n
        out.append(low.bit_length() - 1)
        n ^= low
    return frozenset(out)


# --------------------------------------------------------------------------
# K_N


def complete_graph() -> ComputableGraph:
    def star_witness(U, W, bound):
        if W:
            raise WitnessImpossible("K_N has no vertex non-adjacent to a nonempty W")
        return max([bound, *U]) + 1

    return ComputableGraph(
        name="complete",
        adjacency=lambda u, v: u != v,
        star_witness=star_witness,
        neighbors_in=lambda v, vertices: [u for u in vertices if u != v],
    )


# --------------------------------------------------------------------------
# locally finite built-ins


def _locally_finite(name: str, neighbors: Callable[[int], Iterable[int]]) -> ComputableGraph:
    def adjacency(u: int, v: int) -> bool:
        if u == v:
            return False
        return v in neighbors(u)

    def undominated(D: Collection[int], bound: int) -> int:
        closed = set(D)
        for d in D:
            closed.update(neighbors(d))
        a = max([bound, *D]) + 1
        while a in closed:
            a += 1
        return a

    def neighbors_in(v: int, vertices: Iterable[int]) -> list:
        near = set(neighbors(v))
        return [u for u in vertices if u in near]

    def lower_neighbors(v: int, vertices: set) -> list:
        return [u for u in neighbors(v) if u < v and u in vertices]

    return ComputableGraph(
        name,
        adjacency,
        undominated=undominated,
        neighbors_in=neighbors_in,
        lower_neighbors=lower_neighbors,
    )


def path_graph() -> ComputableGraph:
    """One-way infinite path 0 - 1 - 2 - ..."""
    return _locally_finite("path", lambda n: (n - 1, n + 1) if n else (1,))


def tree_graph(d: int) -> ComputableGraph:
    """Infinite d-regular tree in breadth-first numbering (``tree:2`` is the two-way path)."""
    if d < 2:
        raise ConfigError(f"tree degree must be >= 2, got {d}")

    def neighbors(n: int) -> list[int]:
        if n == 0:
            return list(range(1, d + 1))
        parent = 0 if n <= d else (n - d - 1) // (d - 1) + 1
        first = d + (n - 1) * (d - 1) + 1
        return [parent, *range(first, first + d - 1)]

    return _locally_finite(f"tree:{d}", neighbors)


def matching_graph() -> ComputableGraph:
    """Perfect matching {2i, 2i+1}."""
    return _locally_finite("matching", lambda n: (n ^ 1,))


def cliques_graph(c: int) -> ComputableGraph:
    """Disjoint union of K_c on the blocks {c*i, ..., c*i + c - 1}."""
    if c < 2:
        raise ConfigError(f"clique size must be >= 2, got {c}")

    def neighbors(n: int) -> list[int]:
        base = n - n % c
        return [base + i for i in range(c) if base + i != n]

    return _locally_finite(f"cliques:{c}", neighbors)


def star_forest(k: int) -> ComputableGraph:
    """The k-star S_k: centres 0..k-1, every n >= k a leaf of centre n % k.

    The centres dominate the graph, so no undominated oracle is provided.
    """
    if k < 1:
        raise ConfigError(f"star count must be >= 1, got {k}")

    def adjacency(u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return u < k <= v and v % k == u

    def neighbors_in(v: int, vertices: Iterable[int]) -> list:
        if v < k:
            return [u for u in vertices if u >= k and u % k == v]
        return [u for u in vertices if u == v % k]

    return ComputableGraph(f"star:{k}", adjacency, neighbors_in=neighbors_in)


def pad_with_isolated(pattern: ComputableGraph) -> ComputableGraph:
    """Relabel ``n -> 2n`` and make every odd vertex isolated.

    The result has infinite domination number whatever ``pattern`` is; its
    undominated oracle returns the least odd vertex above the bound.
    """
    adj = pattern.adjacency

    def adjacency(u: int, v: int) -> bool:
        return u % 2 == 0 and v % 2 == 0 and adj(u // 2, v // 2)

    def undominated(D: Collection[int], bound: int) -> int:
        a = max([bound, *D]) + 1
        return a if a % 2 else a + 1

    def neighbors_in(v: int, vertices: Iterable[int]) -> list:
        if v % 2:
            return []
        evens = [u for u in vertices if u % 2 == 0]
        return [2 * u for u in pattern.neighbors_among(v // 2, [u // 2 for u in evens])]

    return ComputableGraph(
        f"pad:{pattern.name}", adjacency, undominated=undominated, neighbors_in=neighbors_in
    )


# --------------------------------------------------------------------------
# descriptors


def parse_digit_set(q_text: str, digits_text: str) -> DigitSet:
    try:
        q = int(q_text)
        digits = frozenset(int(t) for t in digits_text.replace("+", ",").split(",") if t != "")
    except ValueError as exc:
        raise ConfigError(f"bad digit set {q_text}:{digits_text}") from exc
    try:
        return DigitSet(q, digits)
    except InputError as exc:
        raise ConfigError(str(exc)) from exc


def builtin_family(spec: str) -> ComputableGraph:
    """Graph for a descriptor string.

    ``path``, ``dpath`` (two-way path), ``tree:d``, ``matching``,
    ``cliques:c``, ``rado:q:I`` (``I`` comma separated), ``star:k`` and
    ``pad:<descriptor>``.
    """
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    try:
        if kind == "path" and not rest:
            return path_graph()
        if kind == "dpath" and not rest:
            g = tree_graph(2)
            return ComputableGraph("dpath", g.adjacency, undominated=g.undominated, neighbors_in=g.neighbors_in)
        if kind == "matching" and not rest:
            return matching_graph()
        if kind == "tree":
            return tree_graph(int(rest))
        if kind == "cliques":
            return cliques_graph(int(rest))
        if kind == "star":
            return star_forest(int(rest))
        if kind == "rado":
            q_text, _, digits_text = rest.partition(":")
            return rado_graph(parse_digit_set(q_text, digits_text))
        if kind == "pad" and rest:
            return pad_with_isolated(builtin_family(rest))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad graph descriptor {spec!r}") from exc
    raise ConfigError(f"unknown graph descriptor {spec!r}")


def parse_host(spec: str) -> ComputableGraph:
    """``complete`` or ``rado:q:I``."""
    if spec.strip() == "complete":
        return complete_graph()
    if spec.strip().startswith("rado:"):
        return builtin_family(spec)
    raise ConfigError(f"host must be 'complete' or 'rado:q:I', got {spec!r}")
