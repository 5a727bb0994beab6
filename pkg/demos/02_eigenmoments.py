# %% [markdown]
# Weights that are invisible to the walk expansion.
#
# Put i.i.d. weights on the edges of a d-regular tree and ask which weight law
# makes the weighted moments equal d^k times the weight moments. The answer is
# unique and starts out as the semicircle of variance 1/4, then drifts.

# %%
from fractions import Fraction

from regspec import deviation_table, eigenmoments, moment_expansion, semicircle_moment

for d in (2, 3, 4, 10):
    t = eigenmoments(d, 12)
    print(d, [str(t(k)) for k in range(2, 13, 2)])

# %% [markdown]
# The eighth moment is the first to move off the semicircle value 7/128.

# %%
for d in range(2, 8):
    print(d, eigenmoments(d, 8)(8) - Fraction(7, 128))

# %% [markdown]
# Scaled by d^2 the gap stays bounded. At 8 it stays below 1/128; at 10 and 12 it
# creeps past 1/64 once d grows.

# %%
table = deviation_table(range(3, 21, 4), (8, 10, 12))
for (d, k), v in sorted(table.items()):
    print(d, k, float(v))

# %% [markdown]
# Feeding the semicircle itself back in shows it is not a fixed point.

# %%
for d in range(2, 6):
    print(d, moment_expansion(8, d, semicircle_moment) - d**4 * Fraction(7, 128))
