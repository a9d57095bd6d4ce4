# %% [markdown]
# # Coding hereditarily finite sets
#
# A set is coded by the membership graph of an enumeration of its
# transitive closure, with the set itself at node 0. Different enumerations
# give different codes of the same set.

# %%
from otmlab.setcode import canonical_code, code_to_text, decode, parse_set, reencode, set_to_text

x = parse_set("{{},{{}}}")
c = canonical_code(x)
print(code_to_text(c))

# %%
for seed in range(3):
    d = reencode(c, seed)
    print(code_to_text(d), set_to_text(decode(d)))

# %% [markdown]
# Decoding rejects codes that do not describe a set.

# %%
from otmlab.errors import OTMLabError
from otmlab.ordinal import pair

for bad in ({pair(0, 0)}, {pair(1, 0), pair(2, 0)}):
    try:
        decode(bad)
    except OTMLabError as exc:
        print(exc.name)
