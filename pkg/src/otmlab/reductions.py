"""Effective reducibility harnesses.

Two notions are realised on codes of hereditarily finite sets:

* oracle-relative computation (``<=``): a :class:`CodeTransformer` may call a
  code-level oracle ``G`` any number of times (:func:`run_relative`);
* generalized Weihrauch reduction (``<=gW``): a pre-computation ``Q``, one
  application of a canonification ``F`` of the target problem, and a
  post-computation ``P`` that sees only a code of ``F(y)`` (:func:`run_gw`).

Bundled witnesses are registered in :data:`WITNESSES`.  Transformers are
host procedures unless noted; ``zl_from_wo`` runs its copy step on the VM
and ``miracle_shim`` wraps a MIRACLE program.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

from .asm import load_program
from .errors import (
    CodeError,
    EncodingMismatch,
    MachineFailure,
    OracleUndefined,
    OTMLabError,
    PreconditionViolation,
    ProblemMismatch,
    UnsupportedRange,
)
from .problems import (
    Problem,
    as_function,
    as_pair,
    canonification,
    canonify,
    check,
    in_domain,
    kpair,
    von_neumann,
)
from .setcode import (
    EMPTY,
    Code,
    SetValue,
    canonical_code,
    code_to_text,
    decode,
    reencode,
    set_to_text,
)
from .tape import BLANK, Tape
from .vm import Fuel, Program, run

__all__ = [
    "CodeTransformer",
    "CodeOracle",
    "CountingOracle",
    "GwWitness",
    "RelativeProcedure",
    "Report",
    "code_oracle",
    "host",
    "machine_transformer",
    "miracle_shim",
    "run_relative",
    "run_gw",
    "compose",
    "identity_witness",
    "sabotaged",
    "verify_suite",
    "WITNESSES",
    "get_witness",
]

CodeOracle = Callable[[Code], Code]


@dataclass(frozen=True)
class CodeTransformer:
    """A deterministic map from codes to codes, optionally calling an oracle."""

    name: str
    fn: Callable[[Code, Optional[CodeOracle]], Code]
    form: str = "host"  # "host", "machine" or "host+machine"
    uses_oracle: bool = False

    def __call__(self, code: Code, oracle: Optional[CodeOracle] = None) -> Code:
        return frozenset(self.fn(frozenset(code), oracle))

    def then(self, other: "CodeTransformer") -> "CodeTransformer":
        """Run ``self``, then ``other`` on its output."""
        return CodeTransformer(
            f"{other.name}.{self.name}",
            lambda c, g: other(self(c, g), g),
            self.form if self.form == other.form else "host+machine",
            self.uses_oracle or other.uses_oracle,
        )


def host(name: str, fn: Callable[[SetValue], SetValue]) -> CodeTransformer:
    """Lift a set function to a code transformer: decode, apply, encode."""
    return CodeTransformer(name, lambda c, _g: canonical_code(fn(decode(c))))


def machine_transformer(name: str, program: Program, fuel: Fuel = Fuel()) -> CodeTransformer:
    """Run ``program`` with the code on the scratch tape; its output tape is the result."""

    def fn(c, g):
        res = run(program, c, oracle=g, fuel=fuel)
        if not res.halted:
            raise MachineFailure(res.outcome, res.detail)
        if not res.config.tapes[1].is_finite():
            raise MachineFailure("infinite-output", res.config.tapes[1].to_text())
        return res.output

    return CodeTransformer(name, fn, "machine", program.has_miracle)


def miracle_shim(name: str, program: Program, fuel: Fuel = Fuel()) -> CodeTransformer:
    """Host shim around a MIRACLE program.

    The input is copied onto the miracle tape before the run and the miracle
    tape is read back afterwards.
    """

    def fn(c, g):
        tape = Tape.from_positions(c)
        res = run(program, oracle=g, fuel=fuel, tapes=(tape, BLANK, tape))
        if res.outcome == "miracle-undefined":
            raise OracleUndefined(res.detail)
        if not res.halted:
            raise MachineFailure(res.outcome, res.detail)
        return frozenset(res.config.tapes[2].positions())

    return CodeTransformer(name, fn, "host+machine", True)


class CountingOracle:
    def __init__(self, oracle: CodeOracle):
        self.oracle = oracle
        self.calls = 0

    def __call__(self, code: Code) -> Code:
        self.calls += 1
        return self.oracle(code)


def code_oracle(p: Problem, adversarial: bool = False, seed: Optional[int] = None) -> CodeOracle:
    """A code-level oracle for ``canonify(p)``.

    With a ``seed`` the answer is re-encoded by a permutation derived from
    the seed and the presented code, so different codes of the same set may
    get differently encoded answers.
    """

    def oracle(code: Code) -> Code:
        try:
            y = decode(code)
        except (CodeError, UnsupportedRange) as exc:
            raise OracleUndefined(f"not a valid code: {exc}") from None
        answer = canonical_code(canonify(p, y, adversarial))
        if seed is None:
            return answer
        rng = random.Random(f"{seed}:{code_to_text(code)}")
        return reencode(answer, rng.randrange(2**32))

    return oracle


def run_relative(t: CodeTransformer, g: CodeOracle, c: Code) -> Code:
    """P^G(c)."""
    return t(c, g)


# -- generalized Weihrauch --------------------------------------------------


@dataclass(frozen=True)
class GwWitness:
    """``(P, Q)`` witnessing ``source <=gW target``."""

    name: str
    source: Problem
    target: Problem
    pre: CodeTransformer  # Q
    post: CodeTransformer  # P

    def __post_init__(self):
        for t in (self.pre, self.post):
            if t.uses_oracle:
                raise ValueError(f"{t.name}: gW transformers may not call an oracle")


def run_gw(
    w: GwWitness,
    f: Callable[[SetValue], SetValue],
    x: SetValue,
    seeds: Sequence[int] = (0, 1, 2),
    input_seed: Optional[int] = None,
) -> SetValue:
    """[P, F, Q](x).

    ``F(y)`` is presented to ``P`` canonically and under every seed; all
    presentations must decode to the same answer.
    """
    if not in_domain(w.source, x):
        raise PreconditionViolation(f"{set_to_text(x)} is not a {w.source.name} instance")
    c = canonical_code(x)
    if input_seed is not None:
        c = reencode(c, input_seed)
    y = decode(w.pre(c))
    fy = canonical_code(f(y))
    zs = {}
    for s in [None, *seeds]:
        c2 = fy if s is None else reencode(fy, s)
        zs[s] = decode(w.post(c2))
    if len(set(zs.values())) != 1:
        detail = ", ".join(f"seed {s}: {set_to_text(z)}" for s, z in zs.items())
        raise EncodingMismatch(f"answer depends on the code of F(y): {detail}")
    return zs[None]


def compose(w1: GwWitness, w2: GwWitness) -> GwWitness:
    """``C1 <=gW C2`` and ``C2 <=gW C3`` give ``C1 <=gW C3``."""
    if w1.target is not w2.source:
        raise ProblemMismatch(
            f"{w1.name} reduces to {w1.target.name} but {w2.name} starts from {w2.source.name}"
        )
    return GwWitness(
        f"{w1.name}+{w2.name}",
        w1.source,
        w2.target,
        pre=w1.pre.then(w2.pre),
        post=w2.post.then(w1.post),
    )


def identity_witness(p: Problem) -> GwWitness:
    ident = CodeTransformer("id", lambda c, _g: c)
    return GwWitness(f"id_{p.value}", p, p, ident, ident)


def sabotaged(w: GwWitness) -> GwWitness:
    """Negative control: ``P`` hands back the oracle answer unchanged."""
    ident = CodeTransformer("id", lambda c, _g: c)
    return GwWitness(f"sabotaged_{w.name}", w.source, w.target, w.pre, ident)


# -- bundled witnesses ------------------------------------------------------


def _acp_choice_range(f: SetValue) -> SetValue:
    fn = as_function(f) or {}
    return SetValue(v for k, v in fn.items() if k != EMPTY)


def _disjointify(x: SetValue) -> SetValue:
    return SetValue(SetValue(kpair(z, a) for a in z.children) for z in x.children if z)


def _transversal_to_choice(r: SetValue) -> SetValue:
    pairs = [kpair(EMPTY, EMPTY)]
    for t in r.children:
        p = as_pair(t)
        if p is not None:
            pairs.append(t)
    return SetValue(pairs)


def _choice_poset(x: SetValue) -> SetValue:
    """Partial choice functions on the non-empty members of x, ordered by inclusion."""
    blocks = [z for z in x.children if z]
    fns: List[SetValue] = [EMPTY]
    for z in blocks:
        fns = fns + [f.with_member(kpair(z, a)) for f in fns for a in z.children]
    carrier = SetValue(fns)
    rel = [kpair(f, g) for f in carrier.children for g in carrier.children if f.members <= g.members]
    return kpair(carrier, SetValue(rel))


def _with_empty_choice(g: SetValue) -> SetValue:
    return g.with_member(kpair(EMPTY, EMPTY))


def _tag_carrier(x: SetValue) -> SetValue:
    carrier, rel = as_pair(x)
    return SetValue(kpair(e, rel) for e in carrier.children)


def _greedy_ascent(f: SetValue) -> SetValue:
    """Climb the poset along the well-order until no element lies above the chain."""
    fn = as_function(f)
    if not fn:
        return EMPTY
    listing = [as_pair(fn[von_neumann(i)]) for i in range(len(fn))]
    rel = {as_pair(z) for z in listing[0][1].children}
    order = [e for e, _ in listing]
    chain: List[SetValue] = []
    while True:
        above = [e for e in order if e not in chain and all((c, e) in rel for c in chain)]
        if not above:
            return chain[-1]
        chain.append(above[0])


_COPY = load_program("copy")


@lru_cache(maxsize=1024)
def _copy_on_vm(c: Code) -> Code:
    res = run(_COPY, c)
    if not res.halted:
        raise MachineFailure(res.outcome, res.detail)
    return res.output


def _zl_pre(c: Code, _g) -> Code:
    # host part builds the tagged carrier; the VM copy loop moves it to the output tape
    return _copy_on_vm(canonical_code(_tag_carrier(decode(c))))


def _wo_from_ac(c: Code, g: Optional[CodeOracle]) -> Code:
    x = decode(c)
    rest = x
    f = []
    i = 0
    while rest:
        answer = decode(g(canonical_code(SetValue([rest]))))
        y = (as_function(answer) or {}).get(rest)
        if y is None or y not in rest:
            raise OracleUndefined(f"AC oracle gave no choice from {set_to_text(rest)}")
        f.append(kpair(von_neumann(i), y))
        rest = rest.minus([y])
        i += 1
    return canonical_code(SetValue(f))


@dataclass(frozen=True)
class RelativeProcedure:
    """An oracle-relative reduction ``source <= target``."""

    name: str
    source: Problem
    target: Problem
    transformer: CodeTransformer
    expected_calls: Optional[Callable[[SetValue], int]] = None


WITNESSES: Dict[str, Union[GwWitness, RelativeProcedure]] = {
    "wo_from_ac": RelativeProcedure(
        "wo_from_ac",
        Problem.WO,
        Problem.AC,
        CodeTransformer("wo_from_ac", _wo_from_ac, "host", True),
        expected_calls=len,
    ),
    "zl_from_wo": GwWitness(
        "zl_from_wo",
        Problem.ZL,
        Problem.WO,
        pre=CodeTransformer("tag_carrier", _zl_pre, "host+machine"),
        post=host("greedy_ascent", _greedy_ascent),
    ),
    "acp_from_ac": GwWitness(
        "acp_from_ac",
        Problem.ACprime,
        Problem.AC,
        pre=host("id", lambda x: x),
        post=host("choice_range", _acp_choice_range),
    ),
    "ac_from_acp": GwWitness(
        "ac_from_acp",
        Problem.AC,
        Problem.ACprime,
        pre=host("disjointify", _disjointify),
        post=host("transversal_to_choice", _transversal_to_choice),
    ),
    "ac_from_zl": GwWitness(
        "ac_from_zl",
        Problem.AC,
        Problem.ZL,
        pre=host("choice_poset", _choice_poset),
        post=host("add_empty_choice", _with_empty_choice),
    ),
}


def get_witness(name: str) -> Union[GwWitness, RelativeProcedure]:
    try:
        return WITNESSES[name]
    except KeyError:
        raise ValueError(f"unknown witness {name!r}; expected one of {', '.join(WITNESSES)}") from None


# -- suites -----------------------------------------------------------------


@dataclass
class Entry:
    instance: str
    verdict: str  # "pass" or "fail"
    oracle_calls: int = 0
    detail: str = ""


@dataclass
class Report:
    witness: str
    seeds: List[int]
    entries: List[Entry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.verdict == "pass" for e in self.entries)

    @property
    def failures(self) -> List[Entry]:
        return [e for e in self.entries if e.verdict != "pass"]

    def to_jsonl(self) -> str:
        head = {"witness": self.witness, "seeds": self.seeds, "instances": len(self.entries)}
        lines = [json.dumps(head)]
        for e in self.entries:
            rec = {"instance": e.instance, "verdict": e.verdict, "oracle_calls": e.oracle_calls}
            if e.detail:
                rec["detail"] = e.detail
            lines.append(json.dumps(rec))
        return "\n".join(lines) + "\n"


def _verify_gw(w: GwWitness, x: SetValue, seeds: Sequence[int], adversarial: Sequence[bool]) -> Entry:
    text = set_to_text(x)
    runs = 0
    for adv in adversarial:
        f = canonification(w.target, adv)
        for input_seed in [None, *seeds]:
            try:
                z = run_gw(w, f, x, seeds, input_seed)
            except OTMLabError as exc:
                return Entry(text, "fail", runs, f"{exc.name}: {exc}")
            runs += 1
            if not check(w.source, x, z):
                how = "adversarial" if adv else "canonical"
                return Entry(text, "fail", runs, f"{how} F, input seed {input_seed}: bad answer {set_to_text(z)}")
    return Entry(text, "pass", runs)


def _verify_relative(
    proc: RelativeProcedure, x: SetValue, seeds: Sequence[int], adversarial: Sequence[bool]
) -> Entry:
    text = set_to_text(x)
    calls = 0
    for adv in adversarial:
        for seed in [None, *seeds]:
            g = CountingOracle(code_oracle(proc.target, adv, seed))
            c = canonical_code(x) if seed is None else reencode(canonical_code(x), seed)
            try:
                z = decode(run_relative(proc.transformer, g, c))
            except OTMLabError as exc:
                return Entry(text, "fail", calls + g.calls, f"{exc.name}: {exc}")
            calls += g.calls
            if not check(proc.source, x, z):
                return Entry(text, "fail", calls, f"bad answer {set_to_text(z)}")
            if proc.expected_calls is not None and g.calls != proc.expected_calls(x):
                return Entry(
                    text, "fail", calls, f"{g.calls} oracle calls, expected {proc.expected_calls(x)}"
                )
    return Entry(text, "pass", calls)


def verify_suite(
    w: Union[GwWitness, RelativeProcedure],
    instances: Iterable[SetValue],
    seeds: Sequence[int] = (0, 1, 2),
    adversarial: Sequence[bool] = (False, True),
    jobs: int = 1,
) -> Report:
    """Check the witness on every instance in the source domain.

    Each instance is run under the canonical and the adversarial
    canonification (or code oracle), with the input and the oracle answer
    re-encoded under every seed.
    """
    xs = [x for x in instances if in_domain(w.source, x)]
    if isinstance(w, RelativeProcedure):
        one = lambda x: _verify_relative(w, x, seeds, adversarial)  # noqa: E731
    else:
        one = lambda x: _verify_gw(w, x, seeds, adversarial)  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            entries = list(pool.map(one, xs))
    else:
        entries = [one(x) for x in xs]
    return Report(w.name, list(seeds), entries)
