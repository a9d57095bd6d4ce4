"""Ordinal Turing machines with three tapes and an oracle ("miracle") command.

Tapes are numbered 0 (scratch, holds the input), 1 (output) and 2 (miracle).
A transition reads all three cells under the heads at once.  Limit stages
are reached only through two certified tail detectors:

``repeat``
    the full configuration (state, heads, tapes) recurs, so the run is
    periodic from then on; the limit takes componentwise minima over one
    period.
``march``
    some heads drift right by a fixed stride per period while everything
    else recurs, and the tape window each drifting head can still see is a
    translate of the previous one.  Drifting heads go to ``base + w``; the
    cells they leave behind take the per-period pattern, which must be
    constant (all 0 or all 1) to stay representable.

Anything else is reported as ``undetected-limit-pattern``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, zip_longest
from types import MappingProxyType
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import MissingOracle, MissingRule, OracleUndefined, ProgramError
from .ordinal import OMEGA, ZERO, Ordinal, ord_add, ord_to_text
from .tape import BLANK, Tape

__all__ = [
    "Step",
    "Miracle",
    "Program",
    "Configuration",
    "Fuel",
    "RunResult",
    "LimitEvidence",
    "March",
    "step",
    "move_head",
    "limit_jump",
    "run",
    "format_trace",
    "WILDCARD",
    "HALTED",
    "STUCK",
    "FUEL_EXHAUSTED",
    "UNDETECTED",
    "MIRACLE_UNDEFINED",
]

WILDCARD = "*"
SCRATCH, OUTPUT, MIRACLE_TAPE = 0, 1, 2

HALTED = "halted"
STUCK = "stuck"
FUEL_EXHAUSTED = "fuel-exhausted"
UNDETECTED = "undetected-limit-pattern"
MIRACLE_UNDEFINED = "miracle-undefined"

Bits = Tuple[int, int, int]
CodeOracle = Callable[[FrozenSet[Ordinal]], FrozenSet[Ordinal]]


@dataclass(frozen=True)
class Step:
    write: Bits
    move: Tuple[str, str, str]
    next: int


@dataclass(frozen=True)
class Miracle:
    next: int


Rule = Union[Step, Miracle]
RuleKey = Tuple[int, Union[Bits, str]]


@dataclass(frozen=True)
class Program:
    """A deterministic transition table; the start state is always 0."""

    halt: int
    rules: Mapping[RuleKey, Rule] = field(default_factory=dict)

    def __post_init__(self):
        rules = dict(self.rules)
        miracle_states = set()
        for (q, syms), rule in rules.items():
            if not isinstance(q, int) or q < 0:
                raise ProgramError(f"bad state {q!r}")
            if q == self.halt:
                raise ProgramError(f"rule out of halt state {q}")
            if syms == WILDCARD:
                if not isinstance(rule, Miracle):
                    raise ProgramError("the wildcard is only allowed in MIRACLE rules")
                miracle_states.add(q)
            elif not (isinstance(syms, tuple) and len(syms) == 3 and set(syms) <= {0, 1}):
                raise ProgramError(f"bad read triple {syms!r}")
            if isinstance(rule, Step):
                if len(rule.write) != 3 or not set(rule.write) <= {0, 1}:
                    raise ProgramError(f"bad write triple {rule.write!r}")
                if len(rule.move) != 3 or not set(rule.move) <= {"L", "R", "S"}:
                    raise ProgramError(f"bad move triple {rule.move!r}")
            elif not isinstance(rule, Miracle):
                raise ProgramError(f"bad rule {rule!r}")
            if not isinstance(rule.next, int) or rule.next < 0:
                raise ProgramError(f"bad next state {rule.next!r}")
        for q, syms in rules:
            if syms != WILDCARD and q in miracle_states:
                raise ProgramError(f"state {q} has both a MIRACLE rule and explicit rules")
        object.__setattr__(self, "rules", MappingProxyType(rules))

    def __hash__(self):
        return hash((self.halt, frozenset(self.rules.items())))

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self.halt == other.halt and dict(self.rules) == dict(other.rules)

    @property
    def states(self) -> FrozenSet[int]:
        out = {0, self.halt}
        for (q, _), rule in self.rules.items():
            out.update((q, rule.next))
        return frozenset(out)

    @property
    def has_miracle(self) -> bool:
        return any(isinstance(r, Miracle) for r in self.rules.values())

    def lookup(self, state: int, syms: Bits) -> Optional[Rule]:
        rule = self.rules.get((state, syms))
        if rule is None:
            rule = self.rules.get((state, WILDCARD))
        return rule


@dataclass(frozen=True)
class Configuration:
    time: Ordinal
    state: int
    heads: Tuple[Ordinal, Ordinal, Ordinal]
    tapes: Tuple[Tape, Tape, Tape]

    def key(self):
        return (self.state, self.heads, self.tapes)

    def read(self) -> Bits:
        try:
            return self.__dict__["_read"]
        except KeyError:
            bits = tuple(t.read(h) for t, h in zip(self.tapes, self.heads))
            object.__setattr__(self, "_read", bits)
            return bits


@dataclass(frozen=True)
class Fuel:
    max_steps: int = 10_000  # successor steps per segment between limits
    max_limits: int = 8
    window: int = 1_000  # longest period the detectors look for


def move_head(p: Ordinal, m: str) -> Ordinal:
    if m == "R":
        return ord_add(p, 1)
    if m == "L":
        # 0 and limit cells have no left neighbour: back to cell 0
        return p.predecessor() if p.is_successor() else ZERO
    return p


def _call_oracle(cfg: Configuration, oracle: Optional[CodeOracle]) -> Tape:
    if oracle is None:
        raise MissingOracle("MIRACLE command without an oracle")
    tape = cfg.tapes[MIRACLE_TAPE]
    if not tape.is_finite():
        raise OracleUndefined(f"miracle tape {tape.to_text()} is infinite")
    answer = oracle(frozenset(tape.positions()))
    if answer is None:
        raise OracleUndefined("oracle has no value for the miracle tape")
    return Tape.from_positions(answer)


def step(cfg: Configuration, prog: Program, oracle: Optional[CodeOracle] = None) -> Configuration:
    """One successor step."""
    if cfg.state == prog.halt:
        raise ProgramError("cannot step a halted machine")
    syms = cfg.read()
    rule = prog.lookup(cfg.state, syms)
    if rule is None:
        raise MissingRule(f"no rule for state {cfg.state} reading {syms}")
    time = ord_add(cfg.time, 1)
    if isinstance(rule, Miracle):
        tapes = cfg.tapes[:2] + (_call_oracle(cfg, oracle),)
        return Configuration(time, rule.next, cfg.heads[:2] + (ZERO,), tapes)
    tapes = tuple(t.write(h, w) for t, h, w in zip(cfg.tapes, cfg.heads, rule.write))
    heads = tuple(move_head(h, m) for h, m in zip(cfg.heads, rule.move))
    return Configuration(time, rule.next, heads, tapes)


# -- limits ------------------------------------------------------------------


@dataclass(frozen=True)
class March:
    """A head drifting right: cells ``[base+start, base+w)`` settle to ``bit``."""

    tape: int
    base: Ordinal
    start: int
    stride: int
    bit: int


@dataclass(frozen=True)
class LimitEvidence:
    kind: str  # "repeat" or "march"
    start_time: Ordinal  # segment start: 0 or a limit
    tail: Tuple[Configuration, ...]  # one period of the certified tail
    marches: Tuple[March, ...] = ()


def limit_jump(ev: LimitEvidence) -> Configuration:
    """Configuration at the first limit after the certified tail (liminf rule)."""
    tail = ev.tail
    marching = {m.tape: m for m in ev.marches}
    heads = []
    tapes = []
    for i in range(3):
        if i in marching:
            m = marching[i]
            heads.append(ord_add(m.base, OMEGA))
            tapes.append(tail[0].tapes[i].fill(ord_add(m.base, m.start), ord_add(m.base, OMEGA), m.bit))
        else:
            heads.append(min(c.heads[i] for c in tail))
            t = tail[0].tapes[i]
            for c in tail[1:]:
                t = t.meet(c.tapes[i])
            tapes.append(t)
    return Configuration(
        ord_add(ev.start_time, OMEGA),
        min(c.state for c in tail),
        tuple(heads),
        tuple(tapes),
    )


_SUBSETS = [frozenset(c) for n in (1, 2, 3) for c in combinations(range(3), n)]
_CANDIDATES = 8  # earlier occurrences tried per key


def _partial_key(cfg: Configuration, marching: FrozenSet[int]):
    rest = [i for i in range(3) if i not in marching]
    return (cfg.state, tuple(cfg.heads[i] for i in rest), tuple(cfg.tapes[i] for i in rest))


def _translates(before: Tape, after: Tape, base: Ordinal, k0: int, d: int) -> bool:
    """Is ``after`` on ``[base+k0+d, base+w)`` the shift of ``before`` on ``[base+k0, base+w)``?"""
    pairs = zip_longest(before.iter_window(base, k0), after.iter_window(base, k0 + d))
    for u, v in pairs:
        if u is None or v is None or (u[0] + d, None if u[1] is None else u[1] + d) != v:
            return False
    return True


class _Segment:
    """Successor-step history since the last limit, with the two detectors."""

    def __init__(self, cfg: Configuration, window: int):
        self.start_time = cfg.time
        self.window = window
        self.hist: List[Configuration] = [cfg]
        self.rules: List[Rule] = []
        self.seen: Dict[tuple, int] = {cfg.key(): 0}
        self.partial: Dict[FrozenSet[int], Dict[tuple, List[int]]] = {
            m: {_partial_key(cfg, m): [0]} for m in _SUBSETS
        }

    def push(self, rule: Rule, cfg: Configuration) -> Tuple[Optional[LimitEvidence], str]:
        self.rules.append(rule)
        t = len(self.hist)
        self.hist.append(cfg)
        key = cfg.key()
        r = self.seen.get(key)
        if r is not None:
            return LimitEvidence("repeat", self.start_time, tuple(self.hist[r:t])), ""
        self.seen[key] = t
        reason = ""
        for m in _SUBSETS:
            pk = _partial_key(cfg, m)
            earlier = self.partial[m].setdefault(pk, [])
            for r in reversed(earlier[-_CANDIDATES:]):
                if t - r > self.window:
                    break
                ev, why = self._march(r, t, m)
                if ev is not None:
                    return ev, ""
                reason = reason or why
            earlier.append(t)
        return None, reason

    def _march(self, r: int, t: int, marching: FrozenSet[int]):
        first, last = self.hist[r], self.hist[t]
        if first.read() != last.read():
            return None, ""
        split = {}
        for i in marching:
            base, k = first.heads[i].split_finite()
            base2, k2 = last.heads[i].split_finite()
            if base2 != base or k2 <= k:
                return None, ""
            split[i] = (base, k, k2 - k)
            # cheap necessary condition: the tape ahead of the head translates
            if not _translates(first.tapes[i], last.tapes[i], base, k, k2 - k):
                return None, ""
        low = {i: 0 for i in marching}
        for j in range(r, t):
            cfg, rule = self.hist[j], self.rules[j]
            if isinstance(rule, Miracle):
                if MIRACLE_TAPE in marching:
                    return None, ""
                continue
            for i in marching:
                base, k0, _ = split[i]
                b, k = cfg.heads[i].split_finite()
                if b != base:
                    return None, ""
                if rule.move[i] == "L" and k == 0:
                    return None, ""
                low[i] = min(low[i], k - k0)
        marches = []
        for i in marching:
            base, k, d = split[i]
            if not _translates(first.tapes[i], last.tapes[i], base, k + low[i], d):
                return None, ""
            start = k + low[i]
            cells = [last.tapes[i].read(ord_add(base, start + n)) for n in range(d)]
            if len(set(cells)) != 1:
                return None, f"tape {i} settles to the non-constant pattern {cells}"
            marches.append(March(i, base, start, d, cells[0]))
        tail = tuple(self.hist[r:t])
        return LimitEvidence("march", self.start_time, tail, tuple(marches)), ""


# -- running -----------------------------------------------------------------


@dataclass
class RunResult:
    outcome: str
    config: Configuration
    trace: List[dict]
    limits: List[Configuration]
    steps: int
    miracle_calls: int
    detail: str = ""

    @property
    def halted(self) -> bool:
        return self.outcome == HALTED

    @property
    def output(self) -> FrozenSet[Ordinal]:
        """Output tape of a halted run as a set of ordinals."""
        if not self.halted:
            raise ValueError(f"run did not halt ({self.outcome})")
        return frozenset(self.config.tapes[OUTPUT].positions())


def _record(event: str, cfg: Configuration, deltas) -> dict:
    return {
        "event": event,
        "time": ord_to_text(cfg.time),
        "state": cfg.state,
        "heads": [ord_to_text(h) for h in cfg.heads],
        "tape_deltas": deltas,
    }


def _deltas(before: Configuration, after: Configuration, rule: Rule):
    if isinstance(rule, Miracle):
        return [[MIRACLE_TAPE, "=", after.tapes[MIRACLE_TAPE].to_text()]]
    out = []
    for i, (h, t0, t1) in enumerate(zip(before.heads, before.tapes, after.tapes)):
        if t0.read(h) != t1.read(h):
            out.append([i, ord_to_text(h), t1.read(h)])
    return out


def run(
    prog: Program,
    input: Sequence[Ordinal] = (),
    oracle: Optional[CodeOracle] = None,
    fuel: Fuel = Fuel(),
    trace: bool = False,
    tapes: Optional[Tuple[Tape, Tape, Tape]] = None,
) -> RunResult:
    """Run ``prog`` on the code ``input`` written to the scratch tape.

    ``tapes`` overrides the initial tape contents entirely.
    """
    if prog.has_miracle and oracle is None:
        raise MissingOracle("program uses MIRACLE but no oracle was supplied")
    if tapes is None:
        tapes = (Tape.from_positions(input), BLANK, BLANK)
    cfg = Configuration(ZERO, 0, (ZERO, ZERO, ZERO), tuple(tapes))
    records: List[dict] = []
    limits: List[Configuration] = []
    total = 0
    calls = 0

    def result(outcome, detail=""):
        if trace and outcome == HALTED:
            records.append(_record("halt", cfg, []))
        return RunResult(outcome, cfg, records, limits, total, calls, detail)

    while True:
        seg = _Segment(cfg, fuel.window)
        reason = ""
        for _ in range(fuel.max_steps):
            if cfg.state == prog.halt:
                return result(HALTED)
            rule = prog.lookup(cfg.state, cfg.read())
            if rule is None:
                return result(STUCK, f"no rule for state {cfg.state} reading {cfg.read()}")
            try:
                nxt = step(cfg, prog, oracle)
            except OracleUndefined as exc:
                return result(MIRACLE_UNDEFINED, str(exc))
            total += 1
            if isinstance(rule, Miracle):
                calls += 1
            if trace:
                event = "miracle" if isinstance(rule, Miracle) else "step"
                records.append(_record(event, nxt, _deltas(cfg, nxt, rule)))
            cfg = nxt
            ev, why = seg.push(rule, cfg)
            reason = reason or why
            if ev is not None:
                break
        else:
            if cfg.state == prog.halt:
                return result(HALTED)
            return result(UNDETECTED, reason or f"no certified tail within {fuel.max_steps} steps")
        if len(limits) >= fuel.max_limits:
            return result(FUEL_EXHAUSTED, f"limit budget of {fuel.max_limits} spent")
        new = limit_jump(ev)
        if trace:
            records.append(
                _record("limit", new, [[i, "=", t.to_text()] for i, t in enumerate(new.tapes)])
            )
        limits.append(new)
        cfg = new


def format_trace(records: Sequence[dict]) -> str:
    """Line-delimited JSON, one record per event."""
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in records)
