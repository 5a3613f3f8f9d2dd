"""k-star factorizations of the complete graph on Z x {0,1} by translation.

A :class:`StarForestSpec` lists ``k`` stars; each star has a centre and a
leaf rule made of :class:`Clause` objects (closed-form arithmetic
progressions on one level).  Translating the whole forest by every ``d`` in
Z gives ``Orb(spec)``; for ``k >= 4`` the specs built by :func:`kstar_spec`
use every edge of the complete graph exactly once.

Vertex ``(a, i)`` is written ``a_i``.  For ``k = h + 3 >= 5`` the level-0
star of the ``k = 4`` forest is split into stars ``Delta_j`` centred at
``c_j = 2 (2^j - 1)``: ``Delta_j`` collects the offsets ``i > 0`` with
``v2(i) = j`` and the last one, ``Delta*_{h-1}``, every positive multiple of
``2^(h-1)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, NamedTuple, Optional

from .errors import InputError, Unsupported


class LV(NamedTuple):
    """Labelled vertex ``coord_level``."""

    coord: int
    level: int

    def __str__(self) -> str:
        return f"{self.coord}_{self.level}"


@dataclass(frozen=True)
class Clause:
    """Vertices ``x_level`` with ``lo <= x <= hi`` and ``(x - centre) % modulus == residue``.

    ``lo``/``hi`` are absolute coordinates of the untranslated star; ``None``
    leaves that side unbounded.
    """

    level: int
    lo: Optional[int] = None
    hi: Optional[int] = None
    modulus: int = 1
    residue: int = 0

    def contains(self, v: LV, centre: int) -> bool:
        if v.level != self.level:
            return False
        if self.lo is not None and v.coord < self.lo:
            return False
        if self.hi is not None and v.coord > self.hi:
            return False
        return (v.coord - centre) % self.modulus == self.residue

    def members(self, lo: int, hi: int, centre: int) -> Iterator[LV]:
        """Members with coordinate in ``[lo, hi]``."""
        a = lo if self.lo is None else max(lo, self.lo)
        b = hi if self.hi is None else min(hi, self.hi)
        if a > b:
            return
        first = a + (self.residue - (a - centre)) % self.modulus
        for x in range(first, b + 1, self.modulus):
            yield LV(x, self.level)

    @property
    def unbounded(self) -> bool:
        return self.lo is None or self.hi is None


@dataclass(frozen=True)
class Star:
    name: str
    centre: LV
    leaves: tuple[Clause, ...]

    def is_leaf(self, v: LV, shift: int = 0) -> bool:
        w = LV(v.coord - shift, v.level)
        return w != self.centre and any(c.contains(w, self.centre.coord) for c in self.leaves)

    def contains(self, v: LV, shift: int = 0) -> bool:
        return v == LV(self.centre.coord + shift, self.centre.level) or self.is_leaf(v, shift)

    def leaves_in(self, lo: int, hi: int, shift: int = 0) -> Iterator[LV]:
        seen = set()
        for c in self.leaves:
            for w in c.members(lo - shift, hi - shift, self.centre.coord):
                if w != self.centre and w not in seen:
                    seen.add(w)
                    yield LV(w.coord + shift, w.level)

    @property
    def unbounded(self) -> bool:
        return any(c.unbounded for c in self.leaves)


@dataclass(frozen=True)
class StarForestSpec:
    k: int
    stars: tuple[Star, ...]
    levels: tuple[int, ...] = (0, 1)

    @property
    def centres(self) -> list[LV]:
        return [s.centre for s in self.stars]

    @property
    def slack(self) -> int:
        return max(abs(c.coord) for c in self.centres) + 3

    def star(self, name: str) -> Star:
        for s in self.stars:
            if s.name == name:
                return s
        raise KeyError(name)

    def with_star(self, star: Star) -> "StarForestSpec":
        """Copy with the star of the same name replaced (used for mutation tests)."""
        return replace(self, stars=tuple(star if s.name == star.name else s for s in self.stars))


def centre_coord(j: int) -> int:
    """``c_j = 2 (2^j - 1)``."""
    return 2 * ((1 << j) - 1)


def delta_star(j: int) -> Star:
    c = centre_coord(j)
    return Star(f"Delta_{j}", LV(c, 0), (Clause(0, lo=c + 1, modulus=1 << (j + 1), residue=1 << j),))


def delta_star_closed(j: int) -> Star:
    c = centre_coord(j)
    return Star(f"Delta*_{j}", LV(c, 0), (Clause(0, lo=c + 1, modulus=1 << j, residue=0),))


def level0_stars(h: int) -> tuple[Star, ...]:
    """The split level-0 star for ``h >= 1``: Delta_0 .. Delta_{h-2}, Delta*_{h-1}."""
    return tuple(delta_star(j) for j in range(h - 1)) + (delta_star_closed(h - 1),)


_K4_TAIL = (
    Star("Gamma_2", LV(-1, 1), (Clause(1, lo=0), Clause(0, lo=-1, hi=-1))),
    Star("Gamma_3", LV(-2, 0), (Clause(1, hi=-3),)),
    Star("Gamma_4", LV(-2, 1), (Clause(0, hi=-3),)),
)


def kstar_spec(k: int) -> StarForestSpec:
    if k in (1, 2):
        raise Unsupported(f"no factorization of K_V into {k}-stars exists")
    if k == 3:
        raise Unsupported("k = 3 is an open problem; no construction is known")
    if k < 1:
        raise Unsupported(f"k must be a positive integer, got {k}")
    if k == 4:
        head = (Star("Gamma_1", LV(0, 0), (Clause(0, lo=1),)),)
    else:
        head = level0_stars(k - 3)
    return StarForestSpec(k, head + _K4_TAIL)


# ----------------------------------------------------------------------
# closed-form edge assignment


def v2(m: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if m == 0:
        raise InputError("v2(0) is undefined")
    return (m & -m).bit_length() - 1


def _as_lv(v) -> LV:
    try:
        coord, level = v
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a labelled vertex: {v!r}") from exc
    if level not in (0, 1) or not isinstance(coord, int):
        raise InputError(f"not a labelled vertex: {v!r}")
    return LV(coord, level)


def assign_edge(k: int, e) -> int:
    """The translate ``d`` with ``e`` an edge of ``spec + d``."""
    if k < 4:
        kstar_spec(k)
    x, y = (_as_lv(v) for v in e)
    if x == y:
        raise InputError(f"loop {x} is not an edge")
    if x.level == y.level:
        a, b = sorted((x.coord, y.coord))
        if x.level == 1:
            return a + 1
        if k == 4:
            return a
        h = k - 3
        return a - centre_coord(min(v2(b - a), h - 1))
    if x.level == 1:
        x, y = y, x
    a, b = x.coord, y.coord  # a_0, b_1
    if a == b:
        return a + 1
    if b < a:
        return a + 2
    return b + 2


# ----------------------------------------------------------------------
# window verification


@dataclass
class WindowReport:
    k: int
    window: int
    edges: int = 0
    translates: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{verdict} {len(self.violations)} violations"


def window_vertices(W: int) -> list[LV]:
    return [LV(x, lvl) for lvl in (0, 1) for x in range(-W, W + 1)]


def translate_edges(spec: StarForestSpec, d: int, W: int) -> Iterator[tuple[str, LV, LV]]:
    """Edges of ``spec + d`` with both ends in the window."""
    for s in spec.stars:
        c = LV(s.centre.coord + d, s.centre.level)
        if abs(c.coord) > W:
            continue
        for leaf in s.leaves_in(-W, W, d):
            yield s.name, c, leaf


def _key(x: LV, y: LV) -> tuple[LV, LV]:
    return (x, y) if (x.level, x.coord) < (y.level, y.coord) else (y, x)


def verify_window(k: int, W: int, spec: Optional[StarForestSpec] = None) -> WindowReport:
    """Exact cover, star shape and vertex partition on the window ``|coord| <= W``.

    Every translate ``|d| <= W + slack`` is enumerated; each window edge must
    be hit exactly once and by the translate :func:`assign_edge` predicts.
    """
    if W < 1:
        raise InputError("window radius must be >= 1")
    spec = kstar_spec(k) if spec is None else spec
    report = WindowReport(k, W)
    reach = W + spec.slack
    verts = window_vertices(W)
    hits: dict[tuple, list[int]] = {}
    flag = report.violations.append

    for d in range(-reach, reach + 1):
        report.translates += 1
        # star shape: no window vertex in two stars, edges only centre-leaf
        owner: dict[LV, str] = {}
        for s in spec.stars:
            for v in verts:
                if s.contains(v, d):
                    if v in owner:
                        flag(f"translate {d}: {v} in {owner[v]} and {s.name}")
                    owner[v] = s.name
        for v in verts:
            if v not in owner:
                flag(f"translate {d}: {v} in no star")
        for name, c, leaf in translate_edges(spec, d, W):
            hits.setdefault(_key(c, leaf), []).append(d)
    centres = len(spec.stars)
    if centres > k:
        flag(f"{centres} stars for k = {k}")
    for s in spec.stars:
        if not s.unbounded:
            flag(f"{s.name} has a bounded leaf rule")
    for i, x in enumerate(verts):
        for y in verts[i + 1 :]:
            report.edges += 1
            found = hits.get(_key(x, y), [])
            if len(found) != 1:
                flag(f"edge {x}-{y} covered by translates {found}")
                continue
            d = assign_edge(k, (x, y))
            if d != found[0]:
                flag(f"edge {x}-{y}: closed form says {d}, scan says {found[0]}")
    return report


def recursion_partition(h: int, bound: int = 1 << 10) -> list[int]:
    """Coordinates in ``[-bound, bound]`` where ``V(Delta_{h-1})`` and
    ``V(Delta*_h)`` fail to partition ``V(Delta*_{h-1})``."""
    if h < 1:
        raise InputError("h must be >= 1")
    whole, a, b = delta_star_closed(h - 1), delta_star(h - 1), delta_star_closed(h)
    bad = []
    for x in range(-bound, bound + 1):
        v = LV(x, 0)
        if whole.contains(v) != (a.contains(v) + b.contains(v) == 1) or (a.contains(v) and b.contains(v)):
            bad.append(x)
    return bad


# ----------------------------------------------------------------------
# difference multisets


def diff_multiset(edges: Iterable[tuple[int, int]]) -> Counter:
    """Multiset of positive differences ``|y - x|`` of edges on Z."""
    out: Counter = Counter()
    for x, y in edges:
        if x == y:
            raise InputError(f"loop at {x}")
        out[abs(y - x)] += 1
    return out


@dataclass
class OrbitReport:
    bound: int
    missing: list = field(default_factory=list)
    duplicated: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.duplicated

    def summary(self) -> str:
        if self.ok:
            return f"PASS differences 1..{self.bound} each once"
        return f"FAIL missing={self.missing[:10]} duplicated={sorted(self.duplicated.items())[:10]}"


def star_differences(stars: Iterable[Star], M: int) -> Counter:
    """Differences up to ``M`` contributed by single-level stars on Z."""
    edges = []
    for s in stars:
        c = s.centre.coord
        edges.extend((c, leaf.coord) for leaf in s.leaves_in(c - M, c + M))
    return diff_multiset(edges)


def orbit_cover_check(stars: Iterable[Star], M: int) -> OrbitReport:
    """Does each difference ``1..M`` occur exactly once?  Orbits of a graph
    on Z factorize K_Z iff every positive difference occurs exactly once."""
    diffs = star_differences(stars, M)
    report = OrbitReport(M)
    for m in range(1, M + 1):
        n = diffs.get(m, 0)
        if n == 0:
            report.missing.append(m)
        elif n > 1:
            report.duplicated[m] = n
    return report


def gamma1_star() -> Star:
    return Star("Gamma_1", LV(0, 0), (Clause(0, lo=1),))


# ----------------------------------------------------------------------
# exports


def emit_window(k: int, W: int) -> Iterator[str]:
    """Lines ``a level b level d`` for every window edge, colex by level then coordinate."""
    verts = window_vertices(W)
    for i, x in enumerate(verts):
        for y in verts[i + 1 :]:
            yield f"{x.coord} {x.level} {y.coord} {y.level} {assign_edge(k, (x, y))}"


def translate_dot(k: int, d: int, W: int) -> str:
    spec = kstar_spec(k)
    lines = [f'graph "k{k}_d{d}" {{']
    for v in window_vertices(W):
        lines.append(f'  "{v}";')
    for name, c, leaf in translate_edges(spec, d, W):
        lines.append(f'  "{c}" -- "{leaf}" [label="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_lv(text: str) -> LV:
    try:
        a, b = text.split(":")
        return _as_lv((int(a), int(b)))
    except ValueError as exc:
        raise InputError(f"bad vertex {text!r}; expected coord:level") from exc
