import json

import pytest

from otmlab.asm import load_program, parse_program
from otmlab.errors import MissingOracle, ProgramError
from otmlab.ordinal import OMEGA, ZERO, Ordinal, ord_from_text
from otmlab.setcode import EMPTY, SetValue, canonical_code
from otmlab.tape import BLANK, Tape
from otmlab.vm import (
    Configuration,
    Fuel,
    Miracle,
    Program,
    Step,
    format_trace,
    move_head,
    run,
    step,
)

from oracles import prefix_liminf


def plain_rules(prog):
    return {k: (r.write, r.move, r.next) for k, r in prog.rules.items()}


def test_head_moves():
    assert move_head(OMEGA, "L") == 0
    assert move_head(ZERO, "L") == 0
    assert move_head(Ordinal(5), "L") == 4
    assert move_head(OMEGA + 2, "L") == OMEGA + 1
    assert move_head(OMEGA * 2, "L") == 0
    assert move_head(OMEGA, "R") == OMEGA + 1
    assert move_head(OMEGA, "S") == OMEGA


def test_left_from_limit_cell_lands_on_zero():
    prog = parse_program("#halt 1\n0 0 0 0 -> 0 0 0 L S S 1\n")
    cfg = Configuration(OMEGA, 0, (OMEGA, ZERO, ZERO), (BLANK, BLANK, BLANK))
    after = step(cfg, prog)
    assert after.heads == (0, 0, 0) and after.time == OMEGA + 1 and after.state == 1


def test_flipflop_limit_matches_prefix_oracle():
    prog = load_program("flipflop")
    res = run(prog, fuel=Fuel(max_limits=1))
    at_w = res.limits[0]
    state, heads, cells = prefix_liminf(plain_rules(prog), 10_000, 50)
    assert at_w.time == OMEGA
    assert (at_w.state, at_w.heads) == (state, tuple(heads)) == (0, (0, 0, 0))
    assert at_w.tapes[0].read(ZERO) == 0 and cells[0] == set()
    assert at_w.tapes == (BLANK, BLANK, BLANK)


def test_march_limit_matches_prefix_oracle():
    prog = load_program("march")
    res = run(prog, fuel=Fuel(max_limits=1))
    at_w = res.limits[0]
    state, heads, cells = prefix_liminf(plain_rules(prog), 10_000, 1_000)
    assert at_w.time == OMEGA and at_w.state == state == 0
    assert heads == (None, 0, 0) and at_w.heads == (OMEGA, 0, 0)
    assert at_w.tapes[0] == Tape([(ZERO, OMEGA)])
    assert cells[0] == set(range(1_000))
    # later limits keep marching
    res = run(prog, fuel=Fuel(max_limits=3))
    assert [c.heads[0] for c in res.limits] == [OMEGA, OMEGA * 2, OMEGA * 3]
    assert res.outcome == "fuel-exhausted"


def test_copy_halts_at_first_limit():
    prog = load_program("copy")
    for x in [EMPTY, SetValue([EMPTY]), SetValue([EMPTY, SetValue([EMPTY])])]:
        c = canonical_code(x)
        res = run(prog, c)
        assert res.halted and res.output == c
        assert res.config.time == OMEGA + 1 and len(res.limits) == 1
    assert run(prog, [2]).output == {2}


def test_march_halt_produces_an_infinite_output():
    res = run(load_program("march_halt"))
    assert res.halted and res.config.time == OMEGA + 1
    assert res.config.tapes[1] == Tape([(ZERO, OMEGA)])
    with pytest.raises(ValueError):
        res.output


def test_miracle_replaces_tape_and_resets_head():
    prog = load_program("miracle")
    with pytest.raises(MissingOracle):
        run(prog)
    seen = []

    def oracle(c):
        seen.append(c)
        return frozenset({5, 6})

    tapes = (BLANK, BLANK, Tape.from_positions([2]))
    res = run(prog, oracle=oracle, tapes=tapes)
    assert seen == [frozenset({2})]
    assert res.halted and res.miracle_calls == 1 and res.steps == 1
    assert res.config.time == 1 and res.config.heads[2] == 0
    assert set(res.config.tapes[2].positions()) == {5, 6}


def test_undefined_oracle_is_reported():
    res = run(load_program("miracle"), oracle=lambda c: None)
    assert res.outcome == "miracle-undefined"


def test_missing_rule_is_stuck():
    prog = parse_program("#halt 5\n0 0 0 0 -> 1 0 0 R S S 1\n")
    res = run(prog)
    assert res.outcome == "stuck" and res.steps == 1


def test_undetectable_pattern():
    # writes 1 at 0, then marches with a period-2 pattern 1,0,1,0,... that never settles
    prog = parse_program(
        "#halt 9\n"
        "0 0 0 0 -> 1 0 0 R S S 1\n"
        "1 0 0 0 -> 0 0 0 R S S 0\n"
    )
    res = run(prog, fuel=Fuel(max_steps=300))
    assert res.outcome == "undetected-limit-pattern"
    assert "non-constant" in res.detail


def test_fuel_without_limit_is_undetected():
    # a binary counter on the scratch tape never repeats within the budget
    prog = parse_program(
        "#halt 9\n"
        "0 0 0 0 -> 1 0 0 L S S 1\n"
        "0 1 0 0 -> 0 0 0 R S S 0\n"
        "1 0 0 0 -> 0 0 0 S S S 0\n"
        "1 1 0 0 -> 1 0 0 L S S 1\n"
    )
    res = run(prog, fuel=Fuel(max_steps=500, window=20))
    assert res.outcome in ("undetected-limit-pattern", "fuel-exhausted")


def test_trace_format_and_monotone_time():
    res = run(load_program("copy"), [2], trace=True)
    lines = format_trace(res.trace).splitlines()
    recs = [json.loads(line) for line in lines]
    assert {r["event"] for r in recs} == {"step", "limit", "halt"}
    assert all(set(r) == {"event", "time", "state", "heads", "tape_deltas"} for r in recs)
    times = [ord_from_text(r["time"]) for r in recs[:-1]]
    assert times == sorted(times) and len(set(times)) == len(times)
    assert recs[-1]["event"] == "halt" and recs[-1]["state"] == 3


def test_runs_are_deterministic():
    a = run(load_program("copy"), [2, 5, 6], trace=True)
    b = run(load_program("copy"), [2, 5, 6], trace=True)
    assert format_trace(a.trace) == format_trace(b.trace)
    assert a.config == b.config
    plain = run(load_program("copy"), [2, 5, 6])
    assert plain.config == a.config and plain.trace == []


def test_program_validation():
    with pytest.raises(ProgramError):
        Program(0, {(0, (0, 0, 0)): Step((0, 0, 0), ("S", "S", "S"), 1)})
    with pytest.raises(ProgramError):
        Program(1, {(0, (0, 0, 2)): Step((0, 0, 0), ("S", "S", "S"), 1)})
    p = Program(1, {(0, "*"): Miracle(1)})
    assert p.has_miracle and p.states == {0, 1}


def test_tape_operations():
    t = Tape.from_positions([0, 1, 2, 5])
    assert t.spans == ((0, 3), (5, 6))
    assert t.write(3, 1).spans == ((0, 4), (5, 6))
    assert t.write(1, 0).spans == ((0, 1), (2, 3), (5, 6))
    assert t.fill(ZERO, OMEGA, 1) == Tape([(ZERO, OMEGA)])
    assert t.meet(Tape.from_positions([2, 5, 9])) == Tape.from_positions([2, 5])
    assert t.is_finite() and not Tape([(ZERO, OMEGA)]).is_finite()
    assert Tape([(OMEGA, OMEGA + 3)]).is_finite()
    assert list(Tape([(OMEGA, OMEGA + 2)]).positions()) == [OMEGA, OMEGA + 1]
    assert Tape([(ZERO, OMEGA)]).to_text() == "{[0,w*1)}"
