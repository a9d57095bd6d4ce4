"""Choice principles as construction problems on hereditarily finite sets.

Ordered pairs are Kuratowski pairs ``{{a},{a,b}}``, functions are sets of
pairs and ordinals are von Neumann naturals.

=======  =========================================  ===========================
kind     instances                                  solutions
=======  =========================================  ===========================
AC       every set x                                f on x+{0}, f(0)=0, f(z) in z
ACprime  families of non-empty disjoint sets        y in U(x) meeting each z once
WO       every set x                                bijection n <-> x
ZL       pairs (X, R), R a partial order, X != 0    an R-maximal y in X
=======  =========================================  ===========================
"""
from __future__ import annotations

import enum
from functools import partial
from itertools import combinations, product
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .setcode import EMPTY, SetValue

__all__ = [
    "Problem",
    "kpair",
    "as_pair",
    "as_function",
    "von_neumann",
    "as_natural",
    "in_domain",
    "check",
    "canonify",
    "canonification",
    "poset",
    "hf_sets",
    "instances",
]

Canonification = Callable[[SetValue], SetValue]


class Problem(enum.Enum):
    AC = "ac"
    ACprime = "acp"
    WO = "wo"
    ZL = "zl"

    @classmethod
    def parse(cls, name: str) -> "Problem":
        for p in cls:
            if name.lower() in (p.value, p.name.lower()):
                return p
        raise ValueError(f"unknown problem {name!r}; expected one of ac, acp, wo, zl")


# -- set-theoretic plumbing -------------------------------------------------


def kpair(a: SetValue, b: SetValue) -> SetValue:
    return SetValue([SetValue([a]), SetValue([a, b])])


def as_pair(z: SetValue) -> Optional[Tuple[SetValue, SetValue]]:
    """Inverse of :func:`kpair`, or ``None`` if ``z`` is not a pair."""
    if len(z) == 1:
        (u,) = z.children
        if len(u) == 1:
            return u.children[0], u.children[0]
        return None
    if len(z) != 2:
        return None
    u, v = sorted(z.children, key=len)
    if len(u) != 1 or len(v) != 2:
        return None
    (a,) = u.children
    if a not in v:
        return None
    (b,) = [w for w in v.children if w != a]
    return a, b


def as_function(y: SetValue) -> Optional[Dict[SetValue, SetValue]]:
    """``y`` as a dict if it is a set of pairs with unique first coordinates."""
    out: Dict[SetValue, SetValue] = {}
    for z in y.children:
        p = as_pair(z)
        if p is None or p[0] in out:
            return None
        out[p[0]] = p[1]
    return out


def von_neumann(n: int) -> SetValue:
    out = EMPTY
    for _ in range(n):
        out = out.with_member(out)
    return out


def as_natural(s: SetValue) -> Optional[int]:
    n = len(s)
    return n if s == von_neumann(n) else None


def poset(carrier, relation) -> SetValue:
    """The instance ``(X, R)`` for a carrier and an iterable of ``(a, b)`` with a <= b."""
    return kpair(SetValue(carrier), SetValue(kpair(a, b) for a, b in relation))


def _as_order(x: SetValue) -> Optional[Tuple[SetValue, set]]:
    p = as_pair(x)
    if p is None:
        return None
    carrier, rel = p
    pairs = set()
    for z in rel.children:
        ab = as_pair(z)
        if ab is None:
            return None
        pairs.add(ab)
    return carrier, pairs


def _is_partial_order(carrier: SetValue, pairs: set) -> bool:
    xs = carrier.members
    if any(a not in xs or b not in xs for a, b in pairs):
        return False
    if any((a, a) not in pairs for a in xs):
        return False
    if any(a != b and (b, a) in pairs for a, b in pairs):
        return False
    succ: Dict[SetValue, set] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    return all(c in succ[a] for a, b in pairs for c in succ.get(b, ()))


# -- the four problems ------------------------------------------------------


def in_domain(p: Problem, x: SetValue) -> bool:
    if p in (Problem.AC, Problem.WO):
        return True
    if p is Problem.ACprime:
        seen: set = set()
        for z in x.children:
            if not z or seen & z.members:
                return False
            seen |= z.members
        return True
    order = _as_order(x)
    if order is None:
        return False
    carrier, pairs = order
    # finite posets: every chain is bounded iff the empty chain is, i.e. X != 0
    return bool(carrier) and _is_partial_order(carrier, pairs)


def check(p: Problem, x: SetValue, y: SetValue) -> bool:
    """Is ``y`` a solution of instance ``x``?"""
    if p is Problem.AC:
        f = as_function(y)
        if f is None or set(f) != set(x.children) | {EMPTY}:
            return False
        return f[EMPTY] == EMPTY and all(f[z] in z for z in x.children if z)
    if p is Problem.ACprime:
        union = set().union(*(z.members for z in x.children))
        if not y.members <= union:
            return False
        return all(len(y.members & z.members) == 1 for z in x.children)
    if p is Problem.WO:
        f = as_function(y)
        if f is None:
            return False
        n = len(f)
        if set(f) != {von_neumann(i) for i in range(n)}:
            return False
        return len(set(f.values())) == n and set(f.values()) == set(x.children)
    order = _as_order(x)
    if order is None:
        return False
    carrier, pairs = order
    if y not in carrier:
        return False
    return not any(z != y and (y, z) in pairs for z in carrier.children)


def _maximal(x: SetValue) -> List[SetValue]:
    carrier, pairs = _as_order(x)
    return [y for y in carrier.children if not any(z != y and (y, z) in pairs for z in carrier.children)]


def canonify(p: Problem, x: SetValue, adversarial: bool = False) -> SetValue:
    """Deterministic solution, or the empty set outside the domain.

    Picks canonical-least witnesses; ``adversarial=True`` picks the
    canonical-greatest ones wherever the solution is not unique.
    """
    if not in_domain(p, x):
        return EMPTY
    pick = max if adversarial else min
    if p is Problem.AC:
        return SetValue([kpair(EMPTY, EMPTY)] + [kpair(z, pick(z.children)) for z in x.children if z])
    if p is Problem.ACprime:
        return SetValue(pick(z.children) for z in x.children)
    if p is Problem.WO:
        order = sorted(x.children, reverse=adversarial)
        return SetValue(kpair(von_neumann(i), z) for i, z in enumerate(order))
    return pick(_maximal(x))


def canonification(p: Problem, adversarial: bool = False) -> Canonification:
    return partial(canonify, p, adversarial=adversarial)


# -- instance generation ----------------------------------------------------


def hf_sets(max_rank: int) -> List[SetValue]:
    """All hereditarily finite sets of rank <= max_rank, in canonical order."""
    level = [EMPTY]
    for _ in range(max_rank):
        level = [SetValue(c) for n in range(len(level) + 1) for c in combinations(level, n)]
    return sorted(level)


def _carriers(max_rank: int, max_carrier: int) -> Iterator[Tuple[SetValue, ...]]:
    elems = hf_sets(max_rank)
    for n in range(max_carrier + 1):
        yield from combinations(elems, n)


def _partial_orders(carrier: Tuple[SetValue, ...]) -> Iterator[List[Tuple[SetValue, SetValue]]]:
    off = [(a, b) for a in carrier for b in carrier if a != b]
    for bits in product((0, 1), repeat=len(off)):
        rel = [(a, a) for a in carrier] + [ab for ab, bit in zip(off, bits) if bit]
        if _is_partial_order(SetValue(carrier), set(rel)):
            yield rel


def instances(p: Problem, max_rank: int = 2, max_carrier: int = 4) -> List[SetValue]:
    """Deterministic instance suite: elements of rank <= max_rank, at most max_carrier of them."""
    out: List[SetValue] = []
    for carrier in _carriers(max_rank, max_carrier):
        if p is Problem.ZL:
            if carrier:
                out.extend(poset(carrier, rel) for rel in _partial_orders(carrier))
            continue
        x = SetValue(carrier)
        if in_domain(p, x):
            out.append(x)
    return out
