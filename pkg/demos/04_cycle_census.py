# %% [markdown]
# Short cycles in random cubic graphs are rare and roughly Poisson.

# %%
import numpy as np

from regspec import count_cycles, sample_regular_graph
from regspec.ensemble import mckay_cycle_limit, split_seed

counts = np.array([
    [c[i] for i in (3, 4, 5)]
    for c in (count_cycles(sample_regular_graph(1000, 3, s), 5) for s in split_seed(5, 100))
])
for i, col in zip((3, 4, 5), counts.T):
    print(i, col.mean().round(3), col.var(ddof=1).round(3), float(mckay_cycle_limit(3, i)))
