"""
Random simple d-regular graphs, i.i.d. edge weights, and short-cycle counts.

Randomness comes from numpy's ``Generator`` on the PCG64 bit generator.
Anything that takes a ``seed`` accepts an int or a ``numpy.random.SeedSequence``;
per-trial streams are derived with ``SeedSequence.spawn`` (see :func:`split_seed`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .moments import as_fraction, semicircle_moment

RNG_ALGORITHM = "numpy.random.PCG64"
RNG_VERSION = np.__version__
MAX_CYCLE_LENGTH = 10

Seed = Union[int, np.random.SeedSequence]


class SamplingError(RuntimeError):
    pass


def make_rng(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def split_seed(seed: Seed, n: int) -> list[np.random.SeedSequence]:
    """Independent child streams; child i depends only on (seed, i)."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return seed.spawn(n)


@dataclass(frozen=True, eq=False)
class RegularGraph:
    n_vertices: int
    degree: int
    edges: np.ndarray  # (E, 2) int, u < v, rows sorted

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges = np.sort(edges, axis=1)
        edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_vertices)

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges.tolist():
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices))
        a[self.edges[:, 0], self.edges[:, 1]] = 1.0
        a[self.edges[:, 1], self.edges[:, 0]] = 1.0
        return a

    def is_simple_regular(self) -> bool:
        e = self.edges
        if len(e) and (e[:, 0] == e[:, 1]).any():
            return False
        if len(np.unique(e, axis=0)) != len(e):
            return False
        return bool((self.degrees() == self.degree).all()) and 2 * len(e) == self.n_vertices * self.degree

    def same_as(self, other: "RegularGraph") -> bool:
        return (self.n_vertices, self.degree) == (other.n_vertices, other.degree) and np.array_equal(
            self.edges, other.edges
        )


def sample_regular_graph(n: int, d: int, seed: Seed, max_rejections: int = 100_000) -> RegularGraph:
    """Uniform simple d-regular graph on n vertices.

    Pairing model: shuffle the n*d half-edges, pair them off, and restart from
    scratch if any pair is a loop or repeats an edge. Conditioning the pairing
    on simplicity gives the uniform distribution on simple graphs.
    """
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if (n * d) % 2:
        raise ValueError(f"n*d must be even (parity), got n={n}, d={d}")
    if d >= n:
        raise ValueError(f"degree must be < n, got d={d}, n={n}")
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(max_rejections):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u = pairs.min(axis=1)
        v = pairs.max(axis=1)
        if (u == v).any():
            continue
        keys = u * n + v
        if len(np.unique(keys)) != len(keys):
            continue
        return RegularGraph(n, d, np.stack([u, v], axis=1))
    raise SamplingError(
        f"no simple pairing after {max_rejections} attempts (n={n}, d={d}); "
        f"expected acceptance is about exp(-(d*d-1)/4) = {math.exp(-(d * d - 1) / 4):.3g}"
    )


def count_cycles(graph: RegularGraph, max_len: int) -> dict[int, int]:
    """Number of cycles of each length 3..max_len, each cycle counted once.

    A cycle is found from its smallest vertex and only in the direction whose
    second vertex is smaller than its last vertex.
    """
    if max_len > MAX_CYCLE_LENGTH:
        raise ValueError(f"max_len {max_len} exceeds cap {MAX_CYCLE_LENGTH}")
    counts = {i: 0 for i in range(3, max_len + 1)}
    nbrs = graph.neighbors()
    for s in range(graph.n_vertices):
        on_path = {s}
        path = [s]

        def extend(v: int):
            length = len(path)
            for w in nbrs[v]:
                if w == s and length >= 3 and path[1] < path[-1]:
                    counts[length] += 1
                elif w > s and w not in on_path and length < max_len:
                    on_path.add(w)
                    path.append(w)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(s)
    return counts


def mckay_cycle_limit(d: int, length: int) -> Fraction:
    """Expected number of cycles of the given length as n grows: (d-1)^i / (2i)."""
    return Fraction((d - 1) ** length, 2 * length)


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


WEIGHT_KINDS = ("constant", "rademacher", "semicircle", "gaussian", "uniform")


@dataclass(frozen=True)
class WeightSpec:
    """Edge weight law.

    ``param`` is the variance for semicircle and gaussian, the half-width for
    uniform, and unused otherwise. Kept exact so moments stay rational.
    """

    kind: str
    param: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}; choose from {WEIGHT_KINDS}")
        object.__setattr__(self, "param", as_fraction(self.param))
        if self.param <= 0:
            raise ValueError("weight parameter must be positive")

    @classmethod
    def parse(cls, text: str) -> "WeightSpec":
        """'constant', 'rademacher', 'semicircle:0.25', 'gaussian:1/4', 'uniform:1'."""
        kind, _, arg = text.partition(":")
        kind = {"constant-one": "constant", "one": "constant"}.get(kind, kind)
        if arg:
            return cls(kind, Fraction(arg))
        return cls(kind, Fraction(1, 4) if kind == "semicircle" else Fraction(1))

    def __str__(self) -> str:
        if self.kind in ("constant", "rademacher"):
            return self.kind
        return f"{self.kind}:{self.param}"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = float(self.param)
        if self.kind == "constant":
            return np.ones(size)
        if self.kind == "rademacher":
            return rng.choice(np.array([-1.0, 1.0]), size=size)
        if self.kind == "gaussian":
            return rng.normal(0.0, math.sqrt(p), size=size)
        if self.kind == "uniform":
            return rng.uniform(-p, p, size=size)
        return _sample_semicircle(rng, size, 2.0 * math.sqrt(p))

    def moment(self, k: int) -> Fraction:
        return weight_moments(self, k)


def _sample_semicircle(rng: np.random.Generator, size: int, radius: float) -> np.ndarray:
    # uniform envelope on [-R, R], accept with probability sqrt(1 - (x/R)^2)
    out = np.empty(size)
    filled = 0
    while filled < size:
        want = size - filled
        n = int(want / (math.pi / 4) * 1.1) + 16
        x = rng.uniform(-1.0, 1.0, size=n)
        u = rng.uniform(0.0, 1.0, size=n)
        acc = x[u * u <= 1.0 - x * x][:want]
        out[filled:filled + len(acc)] = radius * acc
        filled += len(acc)
    return out


def weight_moments(spec: WeightSpec, k: int) -> Fraction:
    """Exact k-th moment of the weight law."""
    if k < 0:
        raise ValueError("order must be non-negative")
    if k == 0 or spec.kind == "constant":
        return Fraction(1)
    if k % 2:
        return Fraction(0)
    half = k // 2
    if spec.kind == "rademacher":
        return Fraction(1)
    if spec.kind == "semicircle":
        return semicircle_moment(k) * (4 * spec.param) ** half
    if spec.kind == "gaussian":
        return spec.param**half * _double_factorial(k - 1)
    return spec.param**k / (k + 1)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    base: RegularGraph
    weights: np.ndarray  # aligned with base.edges

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.base.n_edges,):
            raise ValueError("one weight per edge required")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_vertices(self) -> int:
        return self.base.n_vertices

    def matrix(self) -> np.ndarray:
        e = self.base.edges
        a = np.zeros((self.n_vertices, self.n_vertices))
        a[e[:, 0], e[:, 1]] = self.weights
        a[e[:, 1], e[:, 0]] = self.weights
        return a


def assign_weights(graph: RegularGraph, spec: WeightSpec, seed: Seed) -> WeightedGraph:
    """One independent draw per undirected edge, in edge-list order."""
    return WeightedGraph(graph, spec.sample(make_rng(seed), graph.n_edges))


# --- edge-list serialization -----------------------------------------------


def dumps_graph(graph: RegularGraph | WeightedGraph, seed=None, weight_spec=None) -> str:
    """Header line ``# {json}`` then one ``u v`` or ``u v weight`` line per edge (0-indexed)."""
    base = graph.base if isinstance(graph, WeightedGraph) else graph
    header = {
        "N": base.n_vertices,
        "d": base.degree,
        "seed": seed,
        "weight_spec": None if weight_spec is None else str(weight_spec),
    }
    lines = ["# " + json.dumps(header)]
    if isinstance(graph, WeightedGraph):
        for (u, v), w in zip(base.edges.tolist(), graph.weights.tolist()):
            lines.append(f"{u} {v} {w!r}")
    else:
        lines.extend(f"{u} {v}" for u, v in base.edges.tolist())
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> tuple[RegularGraph | WeightedGraph, dict]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing JSON header line")
    header = json.loads(lines[0][1:])
    rows = [ln.split() for ln in lines[1:]]
    edges = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64).reshape(-1, 2)
    graph = RegularGraph(header["N"], header["d"], edges)
    if rows and len(rows[0]) == 3:
        # re-align weights with the canonical edge order
        w = {(min(int(r[0]), int(r[1])), max(int(r[0]), int(r[1]))): float(r[2]) for r in rows}
        weights = np.array([w[u, v] for u, v in graph.edges.tolist()])
        return WeightedGraph(graph, weights), header
    return graph, header
