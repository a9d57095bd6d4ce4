"""Hereditarily finite sets and their codes as sets of ordinals.

A code of ``x`` relative to an enumeration ``f`` of ``tc({x})`` (root at
index 0) is the membership graph written with the pairing function::

    { pair(i, j) : f[i] in f[j] }

Decoding reads the pairs back as edges and takes the Mostowski collapse of
node 0.  Set literals use ``{`` ``,`` ``}``; codes render as ``[2,5,6]``.
"""
from __future__ import annotations

import random
import weakref
from dataclasses import dataclass
from functools import total_ordering
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    CodeError,
    IllFoundedCode,
    InvalidEnumeration,
    NonExtensionalCode,
    ParseError,
    UnsupportedRange,
)
from .ordinal import Ordinal, ord_from_text, ord_to_text, pair, unpair

__all__ = [
    "SetValue",
    "EMPTY",
    "Enumeration",
    "Code",
    "encode",
    "decode",
    "check_rep",
    "canonical_enumeration",
    "canonical_code",
    "permuted_enumeration",
    "reencode",
    "transitive_closure",
    "rank",
    "parse_set",
    "set_to_text",
    "code_to_text",
    "parse_code",
]

Code = FrozenSet[Ordinal]

_interned: "weakref.WeakValueDictionary[tuple, SetValue]" = weakref.WeakValueDictionary()


@total_ordering
class SetValue:
    """An immutable hereditarily finite set.

    Instances are hash-consed, so extensional equality is identity.  The
    total order compares the children lists lexicographically, larger child
    first; ``children`` is stored in ascending order.
    """

    __slots__ = ("children", "_key", "_hash", "_set", "__weakref__")

    children: Tuple["SetValue", ...]

    def __new__(cls, members: Iterable["SetValue"] = ()):
        members = set(members)
        for m in members:
            if not isinstance(m, SetValue):
                raise TypeError(f"set members must be SetValue, got {type(m).__name__}")
        children = tuple(sorted(members))
        self = _interned.get(children)
        if self is None:
            self = object.__new__(cls)
            self.children = children
            self._key = tuple(c._key for c in reversed(children))
            self._hash = hash(children)
            self._set = frozenset(children)
            _interned[children] = self
        return self

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, SetValue):
            return self is other
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, SetValue):
            return NotImplemented
        return self is not other and self._key < other._key

    def __contains__(self, item):
        return item in self._set

    @property
    def members(self) -> AbstractSet["SetValue"]:
        return self._set

    def __iter__(self):
        return iter(self.children)

    def __len__(self):
        return len(self.children)

    def __bool__(self):
        return bool(self.children)

    def __repr__(self):
        return f"SetValue({set_to_text(self)!r})"

    def __str__(self):
        return set_to_text(self)

    def __reduce__(self):
        return (SetValue, (self.children,))

    def union(self, *others: "SetValue") -> "SetValue":
        out = set(self.children)
        for o in others:
            out.update(o.children)
        return SetValue(out)

    def minus(self, other: Iterable["SetValue"]) -> "SetValue":
        drop = set(other)
        return SetValue(c for c in self.children if c not in drop)

    def with_member(self, item: "SetValue") -> "SetValue":
        return SetValue(self.children + (item,))


EMPTY = SetValue()


def rank(x: SetValue) -> int:
    memo: Dict[SetValue, int] = {}

    def go(s):
        r = memo.get(s)
        if r is None:
            r = memo[s] = max((go(c) + 1 for c in s.children), default=0)
        return r

    return go(x)


def transitive_closure(x: SetValue) -> FrozenSet[SetValue]:
    """tc({x}): ``x`` together with every hereditary member."""
    seen = {x}
    stack = [x]
    while stack:
        for c in stack.pop().children:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return frozenset(seen)


@dataclass(frozen=True)
class Enumeration:
    """A repetition-free listing of tc({x}) with ``items[0] == x``."""

    items: Tuple[SetValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    @property
    def root(self) -> SetValue:
        return self.items[0]

    def validate(self, x: Optional[SetValue] = None) -> None:
        if not self.items:
            raise InvalidEnumeration("empty enumeration")
        if x is not None and self.items[0] != x:
            raise InvalidEnumeration("index 0 must hold the coded set")
        if len(set(self.items)) != len(self.items):
            raise InvalidEnumeration("enumeration repeats an item")
        if set(self.items) != transitive_closure(self.items[0]):
            raise InvalidEnumeration("enumeration is not tc({x})")


def canonical_enumeration(x: SetValue) -> Enumeration:
    """Breadth-first listing of tc({x}), children in canonical order."""
    items = [x]
    seen = {x}
    i = 0
    while i < len(items):
        for c in items[i].children:
            if c not in seen:
                seen.add(c)
                items.append(c)
        i += 1
    return Enumeration(tuple(items))


def encode(x: SetValue, f: Enumeration) -> Code:
    f.validate(x)
    index = {item: i for i, item in enumerate(f.items)}
    return frozenset(
        pair(index[child], j) for j, item in enumerate(f.items) for child in item.children
    )


def canonical_code(x: SetValue) -> Code:
    return encode(x, canonical_enumeration(x))


def permuted_enumeration(x: SetValue, perm: Sequence[int]) -> Enumeration:
    """Canonical enumeration with the non-root slots rearranged.

    ``perm`` lists canonical indices ``1..n-1`` in their new order.
    """
    items = canonical_enumeration(x).items
    if sorted(perm) != list(range(1, len(items))):
        raise InvalidEnumeration(f"{list(perm)} does not permute 1..{len(items) - 1}")
    return Enumeration((items[0],) + tuple(items[i] for i in perm))


def reencode(c: Code, seed: int) -> Code:
    """Another code of the same set, non-root slots shuffled by ``seed``."""
    x = decode(c)
    perm = list(range(1, len(transitive_closure(x))))
    random.Random(seed).shuffle(perm)
    return encode(x, permuted_enumeration(x, perm))


def _edges(c: Iterable[Ordinal]) -> Dict[Ordinal, List[Ordinal]]:
    children: Dict[Ordinal, List[Ordinal]] = {Ordinal(0): []}
    for o in c:
        i, j = unpair(o)
        children.setdefault(i, [])
        children.setdefault(j, []).append(i)
    return children


def decode(c: Iterable[Ordinal]) -> SetValue:
    """Mostowski collapse of node 0 of the membership graph coded by ``c``."""
    children = _edges(c)

    # post-order DFS, colouring nodes to find membership cycles
    order: List[Ordinal] = []
    state: Dict[Ordinal, int] = {}
    for start in sorted(children):
        if start in state:
            continue
        state[start] = 1
        stack = [(start, iter(children[start]))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                s = state.get(nxt)
                if s == 1:
                    raise IllFoundedCode(f"membership cycle through node {ord_to_text(nxt)}")
                if s is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(children[nxt])))
                    break
            else:
                stack.pop()
                state[node] = 2
                order.append(node)

    seen: Dict[FrozenSet[Ordinal], Ordinal] = {}
    for node in order:
        key = frozenset(children[node])
        other = seen.setdefault(key, node)
        if other != node:
            raise NonExtensionalCode(
                f"nodes {ord_to_text(other)} and {ord_to_text(node)} have the same members"
            )

    value: Dict[Ordinal, SetValue] = {}
    for node in order:
        value[node] = SetValue(value[i] for i in children[node])
    return value[Ordinal(0)]


def check_rep(c: Iterable[Ordinal], x: SetValue) -> bool:
    """rep(c, x): does ``c`` code ``x``?"""
    try:
        return decode(c) == x
    except (CodeError, UnsupportedRange):
        return False


# -- text --------------------------------------------------------------------


def set_to_text(x: SetValue) -> str:
    memo: Dict[SetValue, str] = {}

    def go(s):
        t = memo.get(s)
        if t is None:
            t = memo[s] = "{" + ",".join(go(c) for c in s.children) + "}"
        return t

    return go(x)


def parse_set(text: str) -> SetValue:
    """Parse a set literal such as ``{{},{{}}}``; whitespace is ignored."""
    stack: List[List[SetValue]] = []
    result = None
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if result is not None:
            raise ParseError(f"unexpected {ch!r} after the set literal", text, pos)
        if ch == "{":
            if stack and stack[-1] and not _expecting_member(text, pos):
                raise ParseError("expected ',' or '}'", text, pos)
            stack.append([])
        elif ch == "}":
            if not stack:
                raise ParseError("unbalanced '}'", text, pos)
            if _after_comma(text, pos):
                raise ParseError("expected a set after ','", text, pos)
            done = SetValue(stack.pop())
            if stack:
                stack[-1].append(done)
            else:
                result = done
        elif ch == ",":
            if not stack or not stack[-1] or _after_comma(text, pos):
                raise ParseError("unexpected ','", text, pos)
        else:
            raise ParseError(f"unexpected {ch!r}", text, pos)
    if result is None:
        raise ParseError("incomplete set literal", text, len(text))
    return result


def _prev_token(text: str, pos: int) -> str:
    i = pos - 1
    while i >= 0 and text[i].isspace():
        i -= 1
    return text[i] if i >= 0 else ""


def _after_comma(text: str, pos: int) -> bool:
    return _prev_token(text, pos) == ","


def _expecting_member(text: str, pos: int) -> bool:
    return _prev_token(text, pos) in ("{", ",")


def code_to_text(c: Iterable[Ordinal]) -> str:
    return "[" + ",".join(ord_to_text(o) for o in sorted(Ordinal(o) for o in c)) + "]"


def parse_code(text: str) -> Code:
    """Parse ``[o1,o2,...]`` (ordinal texts, whitespace around items ignored)."""
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    if not s.startswith("["):
        raise ParseError("a code starts with '['", text, offset)
    if not s.endswith("]"):
        raise ParseError("a code ends with ']'", text, offset + len(s))
    body = s[1:-1]
    if not body.strip():
        return frozenset()
    out = set()
    pos = offset + 1
    for item in body.split(","):
        lead = len(item) - len(item.lstrip())
        try:
            out.add(ord_from_text(item.strip()))
        except ParseError as exc:
            raise ParseError(exc.message, text, pos + lead + exc.pos) from None
        pos += len(item) + 1
    return frozenset(out)
