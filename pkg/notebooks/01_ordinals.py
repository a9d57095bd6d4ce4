# %% [markdown]
# # Ordinals below w^w
#
# Ordinals are kept in Cantor normal form. Arithmetic is the usual
# non-commutative kind, and pairing orders pairs by their maximum first.

# %%
from otmlab.ordinal import OMEGA, ord_add, ord_from_text, ord_mul, ord_to_text, pair, unpair

a = ord_from_text("w*2+3")
b = ord_from_text("w^2")
print(ord_to_text(ord_add(a, b)), ord_to_text(ord_add(b, a)))

# %% [markdown]
# Adding on the left is absorbed by a limit, adding on the right is not.

# %%
print(ord_to_text(ord_add(1, OMEGA)), ord_to_text(ord_add(OMEGA, 1)))
print(ord_to_text(ord_mul(2, OMEGA)), ord_to_text(ord_mul(OMEGA, 2)))

# %% [markdown]
# Pairs with maximum below m fill the initial segment below m*m, so the
# finite grid is enumerated shell by shell.

# %%
for m in range(4):
    print([pair(a, b).nat for a in range(4) for b in range(4) if max(a, b) == m])

c = pair(OMEGA, 5)
print(ord_to_text(c), [ord_to_text(x) for x in unpair(c)])
