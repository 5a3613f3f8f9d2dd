"""Exact natural numbers stored by their nonzero base-q digits.

Vertex ids in digit-rule graphs are natural numbers, but witnesses chosen in
``R^q_I`` with ``0 not in I`` must carry a nonzero digit at the *position*
given by every earlier neighbour, so ids grow like ``q ** previous_id``.
After a handful of steps no machine integer (or Python int) can hold them.

A :class:`SparseNat` keeps only the nonzero digits, keyed by position, where
positions are themselves naturals (``int`` or ``SparseNat``).  Numbers whose
highest nonzero position is below :data:`LIMIT` are always plain ``int``; every
``SparseNat`` is therefore strictly larger than every canonical ``int``.
Instances are hash-consed, so equality is identity.
"""

from __future__ import annotations

import weakref
from functools import lru_cache
from typing import Iterable, Mapping, Union

LIMIT = 4096

Nat = Union[int, "SparseNat"]

_TABLE: "weakref.WeakValueDictionary[tuple, SparseNat]" = weakref.WeakValueDictionary()
# memo for comparisons between two SparseNats; keeps both operands alive
_ORDER: dict = {}
_ORDER_MAX = 1 << 20


class SparseNat:
    """A natural number ``sum(d * q**p)`` over its nonzero digits.

    ``digits`` is a tuple of ``(position, digit)`` pairs sorted by position,
    highest first.  Do not construct directly; use :func:`from_digits`.
    """

    __slots__ = ("q", "digits", "_hash", "_map", "__weakref__")

    q: int
    digits: tuple

    def __new__(cls, q: int, digits: tuple):
        key = (q, digits)
        obj = _TABLE.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.q = q
            obj.digits = digits
            obj._hash = hash(key)
            obj._map = None
            _TABLE[key] = obj
        return obj

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __ne__(self, other) -> bool:
        return self is not other

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    def __reduce__(self):
        return (SparseNat, (self.q, self.digits))

    @property
    def top(self) -> Nat:
        return self.digits[0][0]

    def digit(self, pos: Nat) -> int:
        if self._map is None:
            self._map = dict(self.digits)
        return self._map.get(pos, 0)

    def __repr__(self) -> str:
        terms = " + ".join(
            f"{d}*{self.q}^({p!r})" if d != 1 else f"{self.q}^({p!r})" for p, d in self.digits
        )
        return f"SparseNat[{terms}]"


def _same(a: Nat, b: Nat) -> bool:
    if a is b:
        return True
    return type(a) is int and type(b) is int and a == b


def compare(a: Nat, b: Nat) -> int:
    """Three-way comparison of canonical naturals (ints and SparseNats)."""
    if a is b:
        return 0
    if type(a) is int:
        if type(b) is int:
            return (a > b) - (a < b)
        return -1
    if type(b) is int:
        return 1
    key = (a, b)
    c = _ORDER.get(key)
    if c is None:
        c = _compare(a, b)
        if len(_ORDER) >= _ORDER_MAX:
            _ORDER.clear()
        _ORDER[key] = c
    return c


def _compare(a: Nat, b: Nat) -> int:
    while True:
        if a is b:
            return 0
        a_int = type(a) is int
        b_int = type(b) is int
        if a_int and b_int:
            return (a > b) - (a < b)
        if a_int:
            return -1
        if b_int:
            return 1
        if a.q != b.q:
            raise TypeError(f"cannot compare naturals stored in bases {a.q} and {b.q}")
        da, db = a.digits, b.digits
        for (pa, xa), (pb, xb) in zip(da, db):
            if _same(pa, pb):
                if xa != xb:
                    return (xa > xb) - (xa < xb)
                continue
            # the number owning the higher position at the first difference is larger
            a, b = pa, pb
            break
        else:
            return (len(da) > len(db)) - (len(da) < len(db))


@lru_cache(maxsize=8192)
def _power(q: int, p: int) -> int:
    return q**p


def from_digits(q: int, mapping: Mapping[Nat, int] | Iterable[tuple[Nat, int]]) -> Nat:
    """Canonical natural with the given ``position -> digit`` map."""
    items = mapping.items() if isinstance(mapping, Mapping) else mapping
    items = [(p, d) for p, d in items if d]
    for _, d in items:
        if not 0 < d < q:
            raise ValueError(f"digit {d} out of range for base {q}")
    if all(type(p) is int and p < LIMIT for p, _ in items):
        if q == 2:
            value = 0
            for p, _ in items:
                value |= 1 << p
            return value
        return sum(d * _power(q, p) for p, d in items)
    items.sort(key=lambda pd: _Key(pd[0]), reverse=True)
    return SparseNat(q, tuple(items))


class _Key:
    __slots__ = ("v",)

    def __init__(self, v: Nat):
        self.v = v

    def __lt__(self, other: "_Key") -> bool:
        return compare(self.v, other.v) < 0


def int_digits(n: int, q: int) -> list[tuple[int, int]]:
    """Nonzero base-q digits of an int, highest position first."""
    if n < 0:
        raise ValueError("naturals only")
    if q == 2:
        s = bin(n)[2:]
        top = len(s) - 1
        return [(top - i, 1) for i, ch in enumerate(s) if ch == "1"] if n else []
    out = []
    p = 0
    while n:
        n, d = divmod(n, q)
        if d:
            out.append((p, d))
        p += 1
    out.reverse()
    return out


def digit_items(n: Nat, q: int) -> list[tuple[Nat, int]]:
    """Nonzero digits of ``n`` as ``(position, digit)``, highest position first."""
    if type(n) is int:
        return int_digits(n, q)
    _check_base(n, q)
    return list(n.digits)


def canon(n: Nat, q: int) -> Nat:
    """Canonical form of ``n`` for base ``q`` (converts oversized ints)."""
    if type(n) is int:
        if n < 0:
            raise ValueError("naturals only")
        if n.bit_length() <= LIMIT:
            return n
        return from_digits(q, int_digits(n, q))
    if isinstance(n, bool):
        return int(n)
    _check_base(n, q)
    return n


def _check_base(n: SparseNat, q: int) -> None:
    if n.q != q:
        raise TypeError(f"natural stored in base {n.q} used as base {q}")


def digit(n: Nat, pos: Nat, q: int) -> int:
    """The base-q digit of ``n`` at position ``pos``."""
    if type(n) is int:
        if type(pos) is not int or pos >= n.bit_length():
            return 0
        if q == 2:
            return (n >> pos) & 1
        return (n // _power(q, pos)) % q
    return n.digit(pos)


def succ(n: Nat, q: int) -> Nat:
    """``n + 1``."""
    if type(n) is int:
        return canon(n + 1, q)
    digits = dict(n.digits)
    pos: Nat = 0
    while True:
        d = _lookup(digits, pos)
        if d < q - 1:
            _store(digits, pos, d + 1)
            break
        _store(digits, pos, 0)
        pos = succ(pos, q)
    return from_digits(q, digits)


def _lookup(digits: dict, pos: Nat) -> int:
    return digits.get(pos, 0)


def _store(digits: dict, pos: Nat, d: int) -> None:
    if d:
        digits[pos] = d
    else:
        digits.pop(pos, None)


def nat_max(values: Iterable[Nat], default: Nat = 0) -> Nat:
    best = default
    for v in values:
        if compare(v, best) > 0:
            best = v
    return best


def least_constrained(q: int, start: Nat, allowed: Mapping[Nat, frozenset]) -> Nat:
    """Least ``z >= start`` whose digit at each position ``p`` in ``allowed``
    lies in ``allowed[p]``; unconstrained positions take any digit.

    Every ``allowed[p]`` must be nonempty.
    """
    start = canon(start, q)
    violations = [p for p, ok in allowed.items() if digit(start, p, q) not in ok]
    if not violations:
        return start
    full = range(q)
    pos = nat_max(violations)
    while True:
        here = digit(start, pos, q)
        bigger = [d for d in allowed.get(pos, full) if d > here]
        if bigger:
            raised = min(bigger)
            break
        pos = succ(pos, q)
    out: dict[Nat, int] = {}
    for p, d in digit_items(start, q):
        if compare(p, pos) > 0:
            out[p] = d
    out[pos] = raised
    for p, ok in allowed.items():
        if compare(p, pos) < 0:
            low = min(ok)
            if low:
                out[p] = low
    return from_digits(q, out)


def to_int(n: Nat) -> int:
    """Exact int value; only sensible for moderately sized SparseNats."""
    if type(n) is int:
        return n
    return sum(d * n.q ** to_int(p) for p, d in n.digits)


def depth(n: Nat) -> int:
    """Nesting depth of the sparse representation (0 for ints)."""
    best = 0
    stack = [(n, 0)]
    while stack:
        v, level = stack.pop()
        if type(v) is int:
            best = max(best, level)
            continue
        for p, _ in v.digits:
            stack.append((p, level + 1))
    return best


class NatCodec:
    """Text encoding for naturals in line-oriented artifacts.

    Ints are written in decimal.  A SparseNat is written as ``#id`` after a
    definition record ``N id q pos:digit ...`` has been emitted, so shared
    sub-terms are written once.
    """

    def __init__(self):
        self._ids: dict[SparseNat, int] = {}
        self._defs: dict[int, SparseNat] = {}

    def encode(self, n: Nat, emit) -> str:
        if type(n) is int:
            return str(n)
        known = self._ids.get(n)
        if known is not None:
            return f"#{known}"
        # post-order walk so every referenced position is defined first
        stack = [(n, False)]
        while stack:
            v, ready = stack.pop()
            if type(v) is int or v in self._ids:
                continue
            if ready:
                parts = " ".join(f"{self._token(p)}:{d}" for p, d in v.digits)
                ident = len(self._ids)
                self._ids[v] = ident
                emit(f"N {ident} {v.q} {parts}")
            else:
                stack.append((v, True))
                for p, _ in v.digits:
                    if type(p) is not int and p not in self._ids:
                        stack.append((p, False))
        return f"#{self._ids[n]}"

    def _token(self, n: Nat) -> str:
        return str(n) if type(n) is int else f"#{self._ids[n]}"

    def define(self, fields: list[str]) -> None:
        ident, q = int(fields[0]), int(fields[1])
        items = []
        for tok in fields[2:]:
            p, d = tok.rsplit(":", 1)
            items.append((self.decode(p), int(d)))
        self._defs[ident] = from_digits(q, items)

    def decode(self, token: str) -> Nat:
        if token.startswith("#"):
            return self._defs[int(token[1:])]
        return int(token)
