"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable, hashable sequence of terms
``(exponent, coefficient)`` with strictly decreasing exponents.  Finite
ordinals compare and hash like the corresponding ``int``, so
``Ordinal(5) == 5`` and ``{Ordinal(2)} == {2}``.

Besides arithmetic the module provides the Goedel pairing function
(pairs ordered by maximum, then lexicographically) used by set codes,
and a small text format::

    ordinal := "0" | term ("+" term)*
    term    := "w" ("^" atom)? ("*" nat)? | nat
    atom    := nat | "(" ordinal ")"
"""
from __future__ import annotations

from math import isqrt
from typing import Iterable, Tuple, Union

from .errors import ParseError, UnsupportedRange

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "ord_cmp",
    "ord_add",
    "ord_mul",
    "ord_sub",
    "w_pow",
    "pair",
    "unpair",
    "ord_to_text",
    "ord_from_text",
]

OrdLike = Union["Ordinal", int]


class Ordinal:
    __slots__ = ("terms", "nat", "_hash")

    terms: Tuple[Tuple["Ordinal", int], ...]
    #: the value as an ``int`` when finite, otherwise ``None``
    nat: Union[int, None]

    def __new__(cls, value: int = 0):
        if isinstance(value, Ordinal):
            return value
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"cannot make an Ordinal from {value!r}")
        if value < 0:
            raise ValueError("ordinals are non-negative")
        if value == 0 and "ZERO" in globals():
            return ZERO
        self = object.__new__(cls)
        self.terms = () if value == 0 else ((ZERO, value),)
        self.nat = value
        self._hash = hash(value)
        return self

    @classmethod
    def _make(cls, terms) -> "Ordinal":
        # trusted constructor: terms already in normal form
        terms = tuple(terms)
        if not terms:
            return ZERO
        if len(terms) == 1 and terms[0][0].nat == 0:
            return cls(terms[0][1])
        self = object.__new__(cls)
        self.terms = terms
        self.nat = None
        self._hash = hash(terms)
        return self

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[OrdLike, int]]) -> "Ordinal":
        """Build an ordinal from ``(exponent, coefficient)`` pairs in normal form."""
        out = []
        for exp, coeff in terms:
            exp = Ordinal(exp)
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive int, got {coeff!r}")
            if out and not exp < out[-1][0]:
                raise ValueError("exponents must be strictly decreasing")
            out.append((exp, coeff))
        return cls._make(out)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return self.nat is not None

    def is_limit(self) -> bool:
        """True for limit ordinals (0 is not a limit)."""
        return bool(self.terms) and self.terms[-1][0].nat != 0

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].nat == 0

    def lead_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("0 has no leading exponent")
        return self.terms[0][0]

    def split_finite(self) -> Tuple["Ordinal", int]:
        """Return ``(base, n)`` with ``self == base + n``, base 0 or a limit."""
        if self.nat is not None:
            return ZERO, self.nat
        if self.terms[-1][0].nat == 0:
            return Ordinal._make(self.terms[:-1]), self.terms[-1][1]
        return self, 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor():
            raise ValueError(f"{ord_to_text(self)} has no predecessor")
        if self.nat is not None:
            return Ordinal(self.nat - 1)
        *rest, (_, n) = self.terms
        return Ordinal._make(rest + ([(ZERO, n - 1)] if n > 1 else []))

    def successor(self) -> "Ordinal":
        return ord_add(self, ONE)

    # -- protocol ----------------------------------------------------------

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Ordinal):
            if self is other:
                return True
            if self.nat is not None or other.nat is not None:
                return self.nat == other.nat
            return self._hash == other._hash and self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self.nat == other
        return NotImplemented

    def __lt__(self, other):
        if self.nat is not None and type(other) is Ordinal and other.nat is not None:
            return self.nat < other.nat
        other = _coerce(other)
        return NotImplemented if other is None else ord_cmp(self, other) < 0

    def __le__(self, other):
        if self.nat is not None and type(other) is Ordinal and other.nat is not None:
            return self.nat <= other.nat
        other = _coerce(other)
        return NotImplemented if other is None else ord_cmp(self, other) <= 0

    def __gt__(self, other):
        if self.nat is not None and type(other) is Ordinal and other.nat is not None:
            return self.nat > other.nat
        other = _coerce(other)
        return NotImplemented if other is None else ord_cmp(self, other) > 0

    def __ge__(self, other):
        if self.nat is not None and type(other) is Ordinal and other.nat is not None:
            return self.nat >= other.nat
        other = _coerce(other)
        return NotImplemented if other is None else ord_cmp(self, other) >= 0

    def __add__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else ord_add(self, other)

    def __radd__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else ord_add(other, self)

    def __mul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else ord_mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else ord_mul(other, self)

    def __bool__(self):
        return bool(self.terms)

    def __int__(self):
        if self.nat is None:
            raise ValueError(f"{ord_to_text(self)} is infinite")
        return self.nat

    def __index__(self):
        return self.__int__()

    def __repr__(self):
        return f"Ordinal({ord_to_text(self)!r})" if self.nat is None else f"Ordinal({self.nat})"

    def __str__(self):
        return ord_to_text(self)

    def __reduce__(self):
        if self.nat is not None:
            return (Ordinal, (self.nat,))
        return (ord_from_text, (ord_to_text(self),))


def _coerce(x):
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return Ordinal(x)
    return None


ZERO = Ordinal(0)
ONE = Ordinal(1)
OMEGA = Ordinal._make(((ONE, 1),))


def ord_cmp(a: OrdLike, b: OrdLike) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if type(a) is not Ordinal or type(b) is not Ordinal:
        a, b = Ordinal(a), Ordinal(b)
    if a.nat is not None and b.nat is not None:
        return (a.nat > b.nat) - (a.nat < b.nat)
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = ord_cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return 1 if ca > cb else -1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def ord_add(a: OrdLike, b: OrdLike) -> Ordinal:
    a, b = Ordinal(a), Ordinal(b)
    if a.nat is not None and b.nat is not None:
        return Ordinal(a.nat + b.nat)
    if not b.terms:
        return a
    lead, coeff = b.terms[0]
    out = []
    for e, c in a.terms:
        cmp = ord_cmp(e, lead)
        if cmp > 0:
            out.append((e, c))
        else:
            if cmp == 0:
                coeff += c
            break
    out.append((lead, coeff))
    out.extend(b.terms[1:])
    return Ordinal._make(out)


def _mul_term(a: Ordinal, exp: Ordinal, coeff: int) -> Ordinal:
    # a * (w^exp * coeff), a != 0
    if exp.nat == 0:
        (e0, c0), *rest = a.terms
        return Ordinal._make([(e0, c0 * coeff)] + rest)
    return Ordinal._make(((ord_add(a.terms[0][0], exp), coeff),))


def ord_mul(a: OrdLike, b: OrdLike) -> Ordinal:
    a, b = Ordinal(a), Ordinal(b)
    if a.nat is not None and b.nat is not None:
        return Ordinal(a.nat * b.nat)
    if not a.terms or not b.terms:
        return ZERO
    # right factor distributes: a * sum(w^e c) = sum(a * w^e c)
    out = ZERO
    for e, c in b.terms:
        out = ord_add(out, _mul_term(a, e, c))
    return out


def ord_sub(a: OrdLike, b: OrdLike) -> Ordinal:
    """Left subtraction: the unique ``d`` with ``b + d == a``; requires ``b <= a``."""
    a, b = Ordinal(a), Ordinal(b)
    if a.nat is not None and b.nat is not None:
        if b.nat > a.nat:
            raise ValueError("left subtraction needs b <= a")
        return Ordinal(a.nat - b.nat)
    for i, (ta, tb) in enumerate(zip(a.terms, b.terms)):
        if ta == tb:
            continue
        (ea, ca), (eb, cb) = ta, tb
        cmp = ord_cmp(ea, eb)
        if cmp > 0:
            return Ordinal._make(a.terms[i:])
        if cmp == 0 and ca > cb:
            return Ordinal._make(((ea, ca - cb),) + a.terms[i + 1:])
        raise ValueError("left subtraction needs b <= a")
    if len(b.terms) > len(a.terms):
        raise ValueError("left subtraction needs b <= a")
    return Ordinal._make(a.terms[len(b.terms):])


def w_pow(a: OrdLike) -> Ordinal:
    """omega ** a."""
    return Ordinal._make(((Ordinal(a), 1),))


# -- pairing -----------------------------------------------------------------

OMEGA_OMEGA = w_pow(OMEGA)


def _check_range(a: Ordinal) -> None:
    if a.nat is None and a.terms[0][0].nat is None:
        raise UnsupportedRange(f"{ord_to_text(a)} is not below w^w")


def _square(m: Ordinal) -> Ordinal:
    """Order type of the pairs whose maximum is below ``m`` (m < w^w)."""
    if m.nat is not None:
        return Ordinal(m.nat * m.nat)
    out = ZERO
    prefix = ZERO
    for e, c in m.terms:
        k = e.nat
        if k == 0:
            # each step adds prefix*2 + 1; consecutive sums absorb the finite tails
            out = ord_add(out, ord_add(ord_mul(ord_mul(prefix, 2), c), c))
        elif not prefix.terms:
            out = ord_add(w_pow(2 * k - 1), ord_mul(w_pow(2 * k), c - 1))
        else:
            out = ord_add(out, ord_mul(w_pow(prefix.terms[0][0].nat + k), c))
        prefix = ord_add(prefix, ord_mul(w_pow(k), c))
    return out


def pair(a: OrdLike, b: OrdLike) -> Ordinal:
    """Goedel pairing: pairs ordered by max, then lexicographically."""
    a, b = Ordinal(a), Ordinal(b)
    if a.nat is not None and b.nat is not None:
        x, y = a.nat, b.nat
        m = max(x, y)
        return Ordinal(m * m + x if x < m else m * m + m + y)
    _check_range(a)
    _check_range(b)
    m = max(a, b)
    if a < m:
        return ord_add(_square(m), a)
    return ord_add(ord_add(_square(m), m), b)


def _largest_root(c: Ordinal) -> Ordinal:
    # greatest m with _square(m) <= c, built digit by digit from the top
    m = ZERO
    for k in range(c.terms[0][0].nat, -1, -1):
        step = w_pow(k)

        def fits(d):
            return _square(ord_add(m, ord_mul(step, d))) <= c

        hi = 1
        while fits(hi):
            hi *= 2
        lo = hi // 2  # fits(lo) holds (or lo == 0)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if fits(mid):
                lo = mid
            else:
                hi = mid
        if lo:
            m = ord_add(m, ord_mul(step, lo))
    return m


def unpair(c: OrdLike) -> Tuple[Ordinal, Ordinal]:
    """Inverse of :func:`pair`."""
    c = Ordinal(c)
    if c.nat is not None:
        n = c.nat
        m = isqrt(n)
        r = n - m * m
        return (Ordinal(r), Ordinal(m)) if r < m else (Ordinal(m), Ordinal(r - m))
    _check_range(c)
    m = _largest_root(c)
    r = ord_sub(c, _square(m))
    if r < m:
        return r, m
    return m, ord_sub(r, m)


# -- text --------------------------------------------------------------------


def ord_to_text(a: OrdLike) -> str:
    a = Ordinal(a)
    if a.nat is not None:
        return str(a.nat)
    parts = []
    for e, c in a.terms:
        if e.nat == 0:
            parts.append(str(c))
            continue
        s = "w"
        if e.nat != 1:
            s += "^" + (str(e.nat) if e.nat is not None else f"({ord_to_text(e)})")
        parts.append(f"{s}*{c}")
    return "+".join(parts)


class _OrdParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        return ParseError(msg, self.text, self.pos if pos is None else pos)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, got {got}")
        self.pos += 1

    def nat(self) -> int:
        start = self.pos
        while self.peek().isdigit() and self.peek() in "0123456789":
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits:
            raise self.error("expected a number")
        if len(digits) > 1 and digits[0] == "0":
            raise self.error("leading zero in number", start)
        return int(digits)

    def ordinal(self) -> Ordinal:
        if self.peek() == "0":
            start = self.pos
            self.pos += 1
            if self.peek().isdigit():
                raise self.error("leading zero in number", start)
            return ZERO
        out = self.term()
        while self.peek() == "+":
            self.pos += 1
            out = ord_add(out, self.term())
        return out

    def term(self) -> Ordinal:
        start = self.pos
        if self.peek() == "w":
            self.pos += 1
            exp = ONE
            if self.peek() == "^":
                self.pos += 1
                if self.peek() == "(":
                    self.pos += 1
                    exp = self.ordinal()
                    self.expect(")")
                else:
                    exp = Ordinal(self.nat())
            coeff = 1
            if self.peek() == "*":
                self.pos += 1
                at = self.pos
                coeff = self.nat()
                if coeff == 0:
                    raise self.error("coefficient must be positive", at)
            return ord_mul(w_pow(exp), coeff)
        if self.peek().isdigit():
            n = self.nat()
            if n == 0:
                raise self.error("0 is only allowed as the whole ordinal", start)
            return Ordinal(n)
        got = repr(self.peek()) if self.peek() else "end of input"
        raise self.error(f"expected 'w' or a number, got {got}")


def ord_from_text(text: str) -> Ordinal:
    p = _OrdParser(text)
    out = p.ordinal()
    if p.pos != len(text):
        raise p.error(f"unexpected {text[p.pos]!r}")
    return out
