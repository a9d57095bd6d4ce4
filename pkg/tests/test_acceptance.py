"""Acceptance criteria 1-8, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or as a
script: ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from otmlab.asm import bundled_programs, load_program, parse_program, print_program
from otmlab.errors import AsmError
from otmlab.ordinal import OMEGA, ZERO, ord_add, ord_mul, pair, unpair
from otmlab.problems import Problem, instances
from otmlab.reductions import WITNESSES, compose, sabotaged, verify_suite
from otmlab.setcode import decode, encode, permuted_enumeration, rank, transitive_closure
from otmlab.tape import BLANK, Tape
from otmlab.vm import Configuration, Fuel, Program, run, step

from oracles import (
    budget_sets,
    d_add,
    d_mul,
    digits_below,
    from_ordinal,
    goedel_pairs,
    prefix_liminf,
    to_ordinal,
)

SEEDS = (0, 1, 2)
LINES = []  # shown in the pytest terminal summary by conftest.py


def report(n, ok, elapsed, limit, detail=""):
    verdict = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"criterion {n}: {verdict} ({elapsed:.2f}s, limit {limit}s) {detail}".rstrip()
    print(line)
    LINES.append(line)
    return verdict == "PASS"


def criterion_1():
    t = time.perf_counter()
    pairs = goedel_pairs(10_000)
    ok = all(pair(a, b) == c and unpair(c) == (a, b) for c, (a, b) in enumerate(pairs))
    ok = ok and all(pair(*unpair(c)) == c for c in range(10_000))
    return report(1, ok, time.perf_counter() - t, 5, "pairs with index < 10^4")


def criterion_2():
    t = time.perf_counter()
    sample = digits_below(3, 2)
    ords = {d: to_ordinal(d) for d in sample}
    checked = 0
    bad = []
    triples = list(product(sample, repeat=3))
    for a, b, c in triples:
        oa, ob, oc = ords[a], ords[b], ords[c]
        ab, bc = ord_add(oa, ob), ord_add(ob, oc)
        mab, mbc = ord_mul(oa, ob), ord_mul(ob, oc)
        lhs_add, rhs_add = ord_add(ab, oc), ord_add(oa, bc)
        lhs_mul, rhs_mul = ord_mul(mab, oc), ord_mul(oa, mbc)
        dist_l, dist_r = ord_mul(oa, bc), ord_add(mab, ord_mul(oa, oc))
        ref_add = d_add(d_add(a, b), c)
        ref_mul = d_mul(d_mul(a, b), c)
        ref_dist = d_mul(a, d_add(b, c))
        if not (
            lhs_add == rhs_add
            and from_ordinal(lhs_add) == ref_add
            and lhs_mul == rhs_mul
            and from_ordinal(lhs_mul) == ref_mul
            and dist_l == dist_r
            and from_ordinal(dist_l) == ref_dist
        ):
            bad.append((a, b, c))
        checked += 1
    ok = not bad and checked >= 1_000
    ok = ok and ord_add(1, OMEGA) == OMEGA and ord_mul(2, OMEGA) == OMEGA
    return report(2, ok, time.perf_counter() - t, 30, f"{checked} triples, {len(bad)} failures")


def criterion_3():
    t = time.perf_counter()
    xs = budget_sets(500)
    bad = 0
    for x in xs:
        n = len(transitive_closure(x))
        decoded = set()
        for seed in range(3):
            perm = list(range(1, n))
            random.Random(seed).shuffle(perm)
            decoded.add(decode(encode(x, permuted_enumeration(x, perm))))
        bad += decoded != {x}
    ok = bad == 0 and len(xs) == 500 and max(map(rank, xs)) <= 4
    return report(3, ok, time.perf_counter() - t, 30, f"{len(xs)} sets x 3 enumerations, {bad} failures")


def criterion_4():
    t = time.perf_counter()
    results = []
    for name, cells in (("flipflop", 50), ("march", 1_000)):
        prog = load_program(name)
        at_w = run(prog, fuel=Fuel(max_limits=1)).limits[0]
        rules = {k: (r.write, r.move, r.next) for k, r in prog.rules.items()}
        state, heads, lim = prefix_liminf(rules, 10_000, cells)
        heads = tuple(OMEGA if h is None else h for h in heads)
        got = [set(p for p in range(cells) if at_w.tapes[i].read(p)) for i in range(3)]
        results.append(at_w.time == OMEGA and (at_w.state, at_w.heads) == (state, heads) and got == lim)
    flip = run(load_program("flipflop"), fuel=Fuel(max_limits=1)).limits[0]
    results.append((flip.state, flip.heads, flip.tapes[0].read(ZERO)) == (0, (0, 0, 0), 0))
    march = run(load_program("march"), fuel=Fuel(max_limits=1)).limits[0]
    results.append(march.heads[0] == OMEGA and march.tapes[0] == Tape([(ZERO, OMEGA)]))
    left = Program(1, {(0, (0, 0, 0)): parse_program("#halt 1\n0 0 0 0 -> 0 0 0 L S S 1").rules[(0, (0, 0, 0))]})
    after = step(Configuration(OMEGA, 0, (OMEGA, ZERO, ZERO), (BLANK, BLANK, BLANK)), left)
    results.append(after.heads[0] == 0)
    return report(4, all(results), time.perf_counter() - t, 5, "flip-flop, right-march, Left at w")


def criterion_5():
    t = time.perf_counter()
    total = 0
    failures = 0
    calls_ok = True
    for name in ("wo_from_ac", "zl_from_wo", "acp_from_ac", "ac_from_acp", "ac_from_zl"):
        w = WITNESSES[name]
        xs = instances(w.source, max_rank=2, max_carrier=4)
        rep = verify_suite(w, xs, seeds=SEEDS, adversarial=(False, True))
        total += len(rep.entries)
        failures += len(rep.failures)
        if name == "wo_from_ac":
            # 2 oracles x (plain code + 3 re-encodings), |x| calls each
            calls_ok = all(e.oracle_calls == 8 * len(x) for e, x in zip(rep.entries, xs))
    ok = failures == 0 and total >= 200 and calls_ok
    return report(5, ok, time.perf_counter() - t, 300, f"{total} instances, {failures} failures")


def criterion_6():
    t = time.perf_counter()
    w = compose(WITNESSES["acp_from_ac"], WITNESSES["ac_from_zl"])
    rep = verify_suite(w, instances(Problem.ACprime), seeds=SEEDS)
    ok = rep.passed and len(rep.entries) > 0
    return report(6, ok, time.perf_counter() - t, 120, f"{len(rep.entries)} instances, {len(rep.failures)} failures")


def criterion_7():
    t = time.perf_counter()
    counts = []
    for name in ("zl_from_wo", "acp_from_ac", "ac_from_acp", "ac_from_zl"):
        w = WITNESSES[name]
        rep = verify_suite(sabotaged(w), instances(w.source)[:40], seeds=SEEDS)
        counts.append(len(rep.failures))
    ok = all(c >= 1 for c in counts)
    return report(7, ok, time.perf_counter() - t, 300, f"failures per sabotaged witness {counts}")


def criterion_8():
    t = time.perf_counter()
    ok = True
    for name in bundled_programs():
        p = load_program(name)
        text = print_program(p)
        ok = ok and parse_program(text) == p and print_program(parse_program(text)) == text
    rng = random.Random(8)
    alphabet = b"01 *->LRSMIRACLE#halt;\n\t"
    errors = programs = crashes = 0
    corpus = [print_program(load_program(n)).encode() for n in bundled_programs()]
    for i in range(10_000):
        n = rng.randint(0, 80)
        if i % 3 == 2:
            # a corpus program with a few bytes overwritten
            data = bytearray(rng.choice(corpus))
            for _ in range(rng.randint(0, 3)):
                data[rng.randrange(len(data))] = rng.choice(alphabet)
            data = bytes(data)
        elif i % 2:
            data = bytes(rng.choice(alphabet) for _ in range(n))
        else:
            data = bytes(rng.randrange(256) for _ in range(n))
        try:
            p = parse_program(data)
            programs += isinstance(p, Program)
        except AsmError as exc:
            errors += exc.line >= 1 and exc.col >= 1
        except Exception:
            crashes += 1
    ok = ok and crashes == 0 and errors + programs == 10_000
    detail = f"10^4 fuzz inputs: {errors} positioned errors, {programs} programs, {crashes} crashes"
    return report(8, ok, time.perf_counter() - t, 30, detail)


def test_criterion_1():
    assert criterion_1()


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7():
    assert criterion_7()


def test_criterion_8():
    assert criterion_8()


if __name__ == "__main__":
    results = [c() for c in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)]
    sys.exit(0 if all(results) else 1)
