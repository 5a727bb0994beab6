"""
Closed acyclic path patterns.

A pattern is a string of edge symbols recording a closed walk on a tree,
up to relabeling of the symbols. Patterns are stored in canonical form:
symbols are the integers 0, 1, 2, ... in order of first appearance.

The enumeration walks a growing ordered tree directly instead of filtering
strings, so every canonical pattern is produced exactly once and in
lexicographic order.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_LENGTH = 20


class InvalidPatternError(ValueError):
    pass


class EnumerationLimitError(RuntimeError):
    pass


def _check_length(length: int, max_length: int | None) -> None:
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    limit = DEFAULT_MAX_LENGTH if max_length is None else max_length
    if length > limit:
        raise EnumerationLimitError(
            f"length {length} exceeds enumeration limit {limit}; "
            "raise max_length explicitly to go further"
        )


def parse_pattern(text: str) -> tuple:
    """Split a whitespace-separated pattern. Integer tokens become ints."""
    out = []
    for tok in text.split():
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return tuple(out)


def is_valid_capp(seq: Sequence) -> bool:
    """True iff ``seq`` is a closed acyclic path pattern.

    Every symbol must occur an even number of times, and between any two
    consecutive occurrences of one symbol every symbol must occur an even
    number of times. Works on any hashable symbols.
    """
    seq = list(seq)
    if any(c % 2 for c in Counter(seq).values()):
        return False
    last = {}
    for pos, s in enumerate(seq):
        if s in last:
            between = Counter(seq[last[s] + 1:pos])
            if any(c % 2 for c in between.values()):
                return False
        last[s] = pos
    return True


def _relabel(seq: Iterable) -> tuple[int, ...]:
    ids: dict = {}
    return tuple(ids.setdefault(s, len(ids)) for s in seq)


@dataclass(frozen=True, order=True)
class Capp:
    """A canonical pattern. Construct through :func:`canonicalize`."""

    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return " ".join(map(str, self.symbols))

    @property
    def n_edges(self) -> int:
        return max(self.symbols) + 1 if self.symbols else 0


def canonicalize(seq: Sequence) -> Capp:
    if isinstance(seq, Capp):
        return seq
    if isinstance(seq, str):
        seq = parse_pattern(seq)
    if not is_valid_capp(seq):
        raise InvalidPatternError(f"not a closed acyclic path pattern: {list(seq)}")
    return Capp(_relabel(seq))


@dataclass(frozen=True)
class WalkDiagram:
    """Minimal rooted ordered tree traversed by a pattern.

    Vertex 0 is the root. Edge ``j`` (0-based, equal to the canonical symbol)
    joins ``parents[j]`` to its child ``children[j]``, so ``edge_order`` is
    just ``j + 1``.
    """

    parents: tuple[int, ...]
    children: tuple[int, ...]
    traversal_counts: tuple[int, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.children) + 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.parents, self.children))

    @property
    def edge_order(self) -> dict[tuple[int, int], int]:
        return {e: j + 1 for j, e in enumerate(self.edges)}

    def adjacent(self, i: int, j: int) -> bool:
        a = {self.parents[i], self.children[i]}
        return i != j and bool(a & {self.parents[j], self.children[j]})

    def vertex_degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def replay(self, symbols: Sequence[int]) -> list[int]:
        """Vertices visited when walking ``symbols`` from the root."""
        v, visited = 0, [0]
        for s in symbols:
            u, w = self.parents[s], self.children[s]
            if v == u:
                v = w
            elif v == w:
                v = u
            else:
                raise InvalidPatternError(f"edge {s} not incident to vertex {v}")
            visited.append(v)
        return visited


def diagram_of(pattern: Capp | Sequence) -> WalkDiagram:
    pattern = canonicalize(pattern)
    parents: list[int] = []
    children: list[int] = []
    counts: list[int] = []
    v, n_vertices = 0, 1
    for s in pattern.symbols:
        if s == len(parents):
            parents.append(v)
            children.append(n_vertices)
            counts.append(1)
            v = n_vertices
            n_vertices += 1
            continue
        counts[s] += 1
        if parents[s] == v:
            v = children[s]
        elif children[s] == v:
            v = parents[s]
        else:
            raise AssertionError(
                f"symbol {s} is not incident to the current vertex in {pattern}"
            )
    assert v == 0, "walk does not return to the root"
    return WalkDiagram(tuple(parents), tuple(children), tuple(counts))


def signature_of(pattern: Sequence) -> tuple[int, ...]:
    """Occurrence count of each symbol, in order of first appearance."""
    if isinstance(pattern, Capp):
        pattern = pattern.symbols
    elif isinstance(pattern, str):
        pattern = parse_pattern(pattern)
    counts = Counter(pattern)
    seen: dict = {}
    for s in pattern:
        seen.setdefault(s, None)
    return tuple(counts[s] for s in seen)


@dataclass(frozen=True)
class MultiplicityPoly:
    """``prod_j (x - roots[j])``; ``roots[j]`` counts earlier edges adjacent to edge j."""

    roots: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __call__(self, x: int) -> int:
        return math.prod(x - a for a in self.roots)

    def coefficients(self) -> list[int]:
        """Integer coefficients, index = power of x."""
        coeffs = [1]
        for a in self.roots:
            nxt = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= a * c
            coeffs = nxt
        return coeffs

    def __str__(self) -> str:
        parts = []
        for a, e in sorted(Counter(self.roots).items()):
            base = "x" if a == 0 else f"(x-{a})"
            parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts) or "1"


def multiplicity_poly(pattern: Capp | Sequence) -> MultiplicityPoly:
    diagram = diagram_of(pattern)
    roots = tuple(
        sum(diagram.adjacent(i, j) for i in range(j))
        for j in range(len(diagram.parents))
    )
    return MultiplicityPoly(roots)


# --- enumeration -----------------------------------------------------------


def _walks(length: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Yield (symbols, signature, roots) for every canonical pattern of ``length``.

    State is the partially built ordered tree. From the current vertex the walk
    may cross any incident edge (ascending symbol id) or open a new child edge
    (next unused id, hence the largest), giving lexicographic order. A move is
    pruned when the remaining steps cannot bring the walk back to the root.
    """
    if length % 2:
        return
    max_edges = length // 2
    # per vertex: depth, parent edge, incident edge ids (ascending)
    depth = [0]
    incident: list[list[int]] = [[]]
    edge_ends: list[tuple[int, int]] = []
    counts: list[int] = []
    roots: list[int] = []
    symbols: list[int] = []

    def rec(v: int, remaining: int):
        if remaining == 0:
            yield tuple(symbols), tuple(counts), tuple(roots)
            return
        for e in incident[v]:
            u, w = edge_ends[e]
            nxt = w if v == u else u
            if depth[nxt] > remaining - 1:
                continue
            symbols.append(e)
            counts[e] += 1
            yield from rec(nxt, remaining - 1)
            counts[e] -= 1
            symbols.pop()
        e = len(edge_ends)
        if e < max_edges and depth[v] + 1 <= remaining - 1:
            child = len(depth)
            roots.append(len(incident[v]))
            depth.append(depth[v] + 1)
            incident.append([e])
            incident[v].append(e)
            edge_ends.append((v, child))
            counts.append(1)
            symbols.append(e)
            yield from rec(child, remaining - 1)
            symbols.pop()
            counts.pop()
            edge_ends.pop()
            incident[v].pop()
            incident.pop()
            depth.pop()
            roots.pop()

    yield from rec(0, length)


@lru_cache(maxsize=None)
def _pattern_table(length: int) -> tuple:
    return tuple(_walks(length))


def enumerate_capps(length: int, max_length: int | None = None) -> list[Capp]:
    """All canonical patterns of the given length, lexicographically sorted."""
    _check_length(length, max_length)
    return [Capp(sym) for sym, _, _ in _pattern_table(length)]


def iter_pattern_records(length: int, max_length: int | None = None):
    """(Capp, signature, MultiplicityPoly) triples without re-deriving diagrams."""
    _check_length(length, max_length)
    for sym, sig, roots in _pattern_table(length):
        yield Capp(sym), sig, MultiplicityPoly(roots)


def signature_type(signature: Sequence[int]) -> tuple[int, ...]:
    """Signature as a multiset, largest entry first, e.g. (2, 4, 2) -> (4, 2, 2)."""
    return tuple(sorted(signature, reverse=True))


@lru_cache(maxsize=None)
def _group_table(length: int) -> dict:
    table: Counter = Counter()
    for _, sig, roots in _pattern_table(length):
        table[signature_type(sig), tuple(sorted(roots))] += 1
    return dict(sorted(table.items()))


def multiplicity_groups(length: int, max_length: int | None = None) -> dict:
    """Patterns grouped by (signature type, sorted multiplicity roots) -> count."""
    _check_length(length, max_length)
    return dict(_group_table(length))


def _is_p2(sig_type) -> bool:
    return all(n == 2 for n in sig_type)


def _is_p4(sig_type) -> bool:
    return len(sig_type) >= 1 and sig_type[0] == 4 and all(n == 2 for n in sig_type[1:])


@dataclass(frozen=True)
class SignatureCounts:
    length: int
    by_signature: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.by_signature.values())

    @property
    def all_twos(self) -> int:
        return sum(c for s, c in self.by_signature.items() if _is_p2(s) and s)

    @property
    def one_four(self) -> int:
        return sum(c for s, c in self.by_signature.items() if _is_p4(s))

    @property
    def proper(self) -> int:
        """Patterns using more than one edge."""
        return max(self.total - 1, 0)


def count_by_signature(length: int, max_length: int | None = None) -> SignatureCounts:
    """Pattern counts keyed by signature type (entries sorted, largest first)."""
    _check_length(length, max_length)
    counts: Counter = Counter()
    for (sig_type, _), c in _group_table(length).items():
        counts[sig_type] += c
    return SignatureCounts(length, dict(sorted(counts.items(), reverse=True)))


@dataclass(frozen=True)
class DistinguishedTriple:
    pattern: Capp
    x: int
    y: int


def enumerate_triples(length: int, max_length: int | None = None) -> list[DistinguishedTriple]:
    """Every all-twos pattern with an ordered pair of adjacent edges, x opened before y."""
    _check_length(length, max_length)
    out = []
    for sym, sig, _ in _pattern_table(length):
        if not _is_p2(sig):
            continue
        pattern = Capp(sym)
        diagram = diagram_of(pattern)
        r = len(sig)
        for y in range(r):
            for x in range(y):
                if diagram.adjacent(x, y):
                    out.append(DistinguishedTriple(pattern, x, y))
    return out


def to_json_lines(length: int, max_length: int | None = None) -> str:
    lines = [
        json.dumps({
            "pattern": str(p),
            "signature": list(sig),
            "multiplicity_roots": list(m.roots),
        })
        for p, sig, m in iter_pattern_records(length, max_length)
    ]
    return "\n".join(lines) + ("\n" if lines else "")
