"""Ordinal-indexed binary tapes stored as finite unions of intervals.

A tape is the set of cells holding 1, kept as sorted, disjoint,
non-adjacent half-open spans ``[start, end)`` of ordinals.  Successor steps
touch one cell at a time; limit jumps may add spans such as ``[0, w)``.
"""
from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator, List, Optional, Tuple

from .ordinal import OMEGA, Ordinal, ord_add, ord_to_text

Span = Tuple[Ordinal, Ordinal]


def _succ(p: Ordinal) -> Ordinal:
    return ord_add(p, 1)


class Tape:
    __slots__ = ("spans", "_hash", "_starts")

    def __init__(self, spans: Iterable[Span] = ()):
        self.spans: Tuple[Span, ...] = tuple((Ordinal(a), Ordinal(b)) for a, b in spans)
        self._hash = hash(self.spans)
        self._starts: Optional[List[int]] = None

    @classmethod
    def from_positions(cls, positions: Iterable[Ordinal]) -> "Tape":
        out: List[List[Ordinal]] = []
        for p in sorted(Ordinal(p) for p in set(positions)):
            if out and out[-1][1] == p:
                out[-1][1] = _succ(p)
            else:
                out.append([p, _succ(p)])
        return cls((a, b) for a, b in out)

    def __eq__(self, other):
        if not isinstance(other, Tape):
            return NotImplemented
        return self._hash == other._hash and self.spans == other.spans

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tape({self.to_text()})"

    def __bool__(self):
        return bool(self.spans)

    def _find(self, p: Ordinal) -> int:
        """Index of the last span starting at or before ``p``, or -1."""
        if p.nat is not None:
            return bisect_right(self._finite_starts(), p.nat) - 1
        lo, hi = 0, len(self.spans)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.spans[mid][0] <= p:
                lo = mid + 1
            else:
                hi = mid
        return lo - 1

    def _finite_starts(self) -> List[int]:
        # starts of spans beginning below w, as ints; later spans start after any natural
        if self._starts is None:
            self._starts = [a.nat for a, _ in self.spans if a.nat is not None]
        return self._starts

    def read(self, p: Ordinal) -> int:
        p = Ordinal(p)
        i = self._find(p)
        return int(i >= 0 and p < self.spans[i][1])

    def write(self, p: Ordinal, bit: int) -> "Tape":
        if self.read(p) == bit:
            return self
        return self.fill(p, _succ(p), bit)

    def fill(self, start: Ordinal, end: Ordinal, bit: int) -> "Tape":
        """Set every cell of ``[start, end)`` to ``bit``."""
        start, end = Ordinal(start), Ordinal(end)
        if not start < end:
            return self
        out: List[Span] = []
        for a, b in self.spans:
            if b <= start or a >= end:
                out.append((a, b))
                continue
            if a < start:
                out.append((a, start))
            if end < b:
                out.append((end, b))
        if bit:
            out.append((start, end))
        return Tape(_normalize(out))

    def meet(self, other: "Tape") -> "Tape":
        """Cellwise AND."""
        out: List[Span] = []
        i = j = 0
        xs, ys = self.spans, other.spans
        while i < len(xs) and j < len(ys):
            a = max(xs[i][0], ys[j][0])
            b = min(xs[i][1], ys[j][1])
            if a < b:
                out.append((a, b))
            if xs[i][1] < ys[j][1]:
                i += 1
            else:
                j += 1
        return Tape(out)

    def is_finite(self) -> bool:
        return all(a.split_finite()[0] == b.split_finite()[0] for a, b in self.spans)

    def positions(self) -> Iterator[Ordinal]:
        """The 1-cells in increasing order; raises for infinite tapes."""
        if not self.is_finite():
            raise ValueError(f"tape {self.to_text()} has infinite support")
        for a, b in self.spans:
            base, n = a.split_finite()
            m = b.split_finite()[1]
            for k in range(n, m):
                yield ord_add(base, k)

    def window(self, base: Ordinal, k0: int) -> Tuple[Tuple[int, Optional[int]], ...]:
        """Offsets of the 1-cells in ``[base + k0, base + w)``.

        Returns spans ``(s, e)`` of finite offsets from ``base``; ``e`` is
        ``None`` when the span reaches ``base + w``.
        """
        return tuple(self.iter_window(base, k0))

    def iter_window(self, base: Ordinal, k0: int) -> Iterator[Tuple[int, Optional[int]]]:
        if base.nat == 0:
            # plain ints while below w
            for a, b in self.spans[max(bisect_right(self._finite_starts(), k0) - 1, 0):]:
                if a.nat is None:
                    return
                if b.nat is not None and b.nat <= k0:
                    continue
                yield max(a.nat, k0), b.nat
            return
        lo = ord_add(base, k0)
        hi = ord_add(base, OMEGA)
        for a, b in self.spans[max(self._find(lo), 0):]:
            if not a < hi:
                break
            a2, b2 = max(a, lo), min(b, hi)
            if not a2 < b2:
                continue
            s = a2.split_finite()[1]
            e = None if b2 == hi else b2.split_finite()[1]
            yield s, e

    def to_text(self) -> str:
        return "{" + ",".join(f"[{ord_to_text(a)},{ord_to_text(b)})" for a, b in self.spans) + "}"


def _normalize(spans: List[Span]) -> Tuple[Span, ...]:
    spans.sort(key=lambda s: s[0])
    out: List[List[Ordinal]] = []
    for a, b in spans:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


BLANK = Tape()
__all__ = ["Tape", "BLANK"]
