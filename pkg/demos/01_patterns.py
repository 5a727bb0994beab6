# %% [markdown]
# Closed walks on a tree, up to relabeling.
#
# A closed acyclic path pattern is a word like "0 1 0 0" that names the edges
# a closed walk uses in order of first appearance. Walks on a d-regular tree
# fall into finitely many such patterns for each length.

# %%
from regspec import count_by_signature, diagram_of, enumerate_capps, enumerate_triples, multiplicity_poly

for p in enumerate_capps(6):
    print(p, "  roots:", multiplicity_poly(p).roots)

# %% [markdown]
# Grouped by how often each edge is traversed:

# %%
for length in (4, 6, 8, 10):
    counts = count_by_signature(length)
    print(length, counts.total, dict(counts.by_signature))

# %% [markdown]
# Patterns where every edge is crossed exactly twice are counted by Catalan numbers.

# %%
print([count_by_signature(2 * k).all_twos for k in range(1, 9)])

# %% [markdown]
# Adjacent ordered edge pairs inside those patterns outnumber the one-edge-four-times
# patterns exactly two to one.

# %%
for length in range(4, 13, 2):
    print(length, len(enumerate_triples(length)), count_by_signature(length).one_four)

# %%
d = diagram_of(enumerate_capps(8)[20])
print(d.parents, d.traversal_counts, d.vertex_degrees())
