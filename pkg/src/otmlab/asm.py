"""Text format for transition tables (``.otm`` files).

One declaration per line; ``;`` starts a comment::

    #halt 3
    0 0 0 0 -> 1 0 0 R S S 0        ; q s0 s1 s2 -> w0 w1 w2 m0 m1 m2 q'
    1 * -> MIRACLE 2                ; oracle call, any read triple

States are decimal naturals, symbols are bits and moves are ``L``, ``R`` or
``S``.  The start state is always 0.
"""
from __future__ import annotations

import re
from importlib import resources
from typing import Dict, List, Union

from .errors import AsmError
from .vm import WILDCARD, Miracle, Program, Rule, RuleKey, Step

__all__ = ["parse_program", "print_program", "load_program", "bundled_programs"]

_TOKEN = re.compile(r"[^ \t\r\f\v]+")
_NAT = re.compile(r"0|[1-9][0-9]*\Z")


def _nat(tok: str, line: int, col: int, what: str) -> int:
    if not _NAT.fullmatch(tok):
        raise AsmError(f"expected {what} (a decimal natural), got {tok!r}", line=line, col=col)
    return int(tok)


def _bit(tok: str, line: int, col: int) -> int:
    if tok not in ("0", "1"):
        raise AsmError(f"expected a bit, got {tok!r}", line=line, col=col)
    return int(tok)


def _move(tok: str, line: int, col: int) -> str:
    if tok not in ("L", "R", "S"):
        raise AsmError(f"expected a move L, R or S, got {tok!r}", line=line, col=col)
    return tok


def parse_program(text: Union[str, bytes]) -> Program:
    """Parse program text; every failure is an :class:`AsmError` with a position."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            prefix = bytes(text[: exc.start]).decode("ascii")
            raise AsmError("non-ASCII byte", prefix, len(prefix)) from None
    for pos, ch in enumerate(text):
        if ord(ch) > 127:
            raise AsmError("non-ASCII character", text, pos)

    halt = None
    rules: Dict[RuleKey, Rule] = {}
    where: Dict[RuleKey, int] = {}
    lines = text.split("\n")
    for lineno, raw in enumerate(lines, 1):
        body = raw.split(";", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        first, col = toks[0]
        if first.startswith("#"):
            if first != "#halt":
                raise AsmError(f"unknown directive {first!r}", line=lineno, col=col)
            if len(toks) != 2:
                at = toks[2][1] if len(toks) > 2 else col + len(first)
                raise AsmError("#halt takes exactly one state", line=lineno, col=at)
            if halt is not None:
                raise AsmError("duplicate #halt directive", line=lineno, col=col)
            halt = _nat(toks[1][0], lineno, toks[1][1], "a state")
            continue

        q = _nat(first, lineno, col, "a state")
        if len(toks) >= 2 and toks[1][0] == WILDCARD:
            shape = ["q", "*", "->", "MIRACLE", "q'"]
        else:
            shape = ["q", "s", "s", "s", "->", "w", "w", "w", "m", "m", "m", "q'"]
        if len(toks) != len(shape):
            at = toks[len(shape)][1] if len(toks) > len(shape) else len(body.rstrip()) + 1
            raise AsmError(
                f"expected {len(shape)} fields ({' '.join(shape)}), got {len(toks)}",
                line=lineno,
                col=at,
            )
        for (tok, c), kind in zip(toks, shape):
            if kind in ("->", "MIRACLE") and tok != kind:
                raise AsmError(f"expected {kind!r}, got {tok!r}", line=lineno, col=c)
        nxt = _nat(toks[-1][0], lineno, toks[-1][1], "a state")
        if shape[1] == "*":
            key: RuleKey = (q, WILDCARD)
            rule: Rule = Miracle(nxt)
        else:
            syms = tuple(_bit(t, lineno, c) for t, c in toks[1:4])
            write = tuple(_bit(t, lineno, c) for t, c in toks[5:8])
            move = tuple(_move(t, lineno, c) for t, c in toks[8:11])
            key, rule = (q, syms), Step(write, move, nxt)
        clash = key if key in rules else None
        if clash is None:
            if key[1] == WILDCARD:
                clash = next((k for k in rules if k[0] == q), None)
            elif (q, WILDCARD) in rules:
                clash = (q, WILDCARD)
        if clash is not None:
            raise AsmError(
                f"duplicate rule for state {q} (conflicts with line {where[clash]})",
                line=lineno,
                col=col,
            )
        rules[key] = rule
        where[key] = lineno

    if halt is None:
        raise AsmError("missing #halt directive", line=len(lines), col=1)
    for (q, _), line in where.items():
        if q == halt:
            raise AsmError(f"rule out of halt state {q}", line=line, col=1)
    return Program(halt, rules)


def _rule_line(key: RuleKey, rule: Rule) -> str:
    q, syms = key
    if isinstance(rule, Miracle):
        return f"{q} * -> MIRACLE {rule.next}"
    return " ".join(
        [str(q), *map(str, syms), "->", *map(str, rule.write), *rule.move, str(rule.next)]
    )


def print_program(p: Program) -> str:
    """Canonical text: the ``#halt`` directive, then rules sorted by key."""
    lines: List[str] = [f"#halt {p.halt}"]

    def order(item):
        (q, syms), _ = item
        return (q, (-1,) if syms == WILDCARD else syms)

    lines.extend(_rule_line(k, r) for k, r in sorted(p.rules.items(), key=order))
    return "\n".join(lines) + "\n"


def bundled_programs() -> List[str]:
    """Names of the programs shipped with the package."""
    files = resources.files("otmlab") / "programs"
    return sorted(f.name[:-4] for f in files.iterdir() if f.name.endswith(".otm"))


def load_program(name: str) -> Program:
    """Parse a bundled program by name (``copy``, ``flipflop``, ...)."""
    path = resources.files("otmlab") / "programs" / f"{name}.otm"
    return parse_program(path.read_text(encoding="ascii"))
