# %% [markdown]
# # Ordinal Turing machines
#
# At a limit time the state and every cell take the liminf of their earlier
# values. The flip-flop program toggles a cell forever, so at time w it has
# seen 0 cofinally and the cell reads 0.

# %%
from otmlab.asm import load_program, print_program
from otmlab.ordinal import ord_to_text
from otmlab.vm import Fuel, run

flip = load_program("flipflop")
print(print_program(flip))
res = run(flip, fuel=Fuel(max_limits=3))
for cfg in res.limits:
    print(ord_to_text(cfg.time), cfg.state, cfg.read())

# %% [markdown]
# A head that marches right forever sits at w at the first limit, with every
# finite cell written.

# %%
res = run(load_program("march"), fuel=Fuel(max_limits=1))
cfg = res.limits[0]
print(ord_to_text(cfg.heads[0]), cfg.tapes[0])

# %% [markdown]
# The copy program reads a set code from the input tape and halts after one
# limit stage.

# %%
from otmlab.setcode import canonical_code, code_to_text, decode, parse_set

res = run(load_program("copy"), input=canonical_code(parse_set("{{},{{}}}")))
print(res.outcome, ord_to_text(res.steps), code_to_text(res.output), decode(res.output))
