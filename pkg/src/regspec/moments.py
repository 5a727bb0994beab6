"""
Exact moment arithmetic over closed acyclic path patterns.

All values are ``fractions.Fraction``. A weight distribution enters only
through its moment sequence, passed either as a :class:`MomentSequence` or as
any callable / mapping ``order -> moment``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

from .capp import multiplicity_groups


class DomainError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


class PolyInD:
    """Polynomial in the regularity ``d`` with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [as_fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Sequence[int], scale=1) -> "PolyInD":
        p = cls([scale])
        for a in roots:
            p = p * cls([-a, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, d) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * d + c
        return acc

    def __add__(self, other: "PolyInD") -> "PolyInD":
        if not isinstance(other, PolyInD):
            other = PolyInD([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyInD([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other: "PolyInD") -> "PolyInD":
        return self + other * -1

    def __mul__(self, other) -> "PolyInD":
        if not isinstance(other, PolyInD):
            other = as_fraction(other)
            return PolyInD([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return PolyInD()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyInD(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyInD):
            other = PolyInD([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolyInD({[format_fraction(c) for c in self.coeffs]})"

    def to_strings(self) -> list[str]:
        return [format_fraction(c) for c in self.coeffs]


@dataclass(frozen=True)
class MomentSequence:
    """Moments mu(1..K) of a distribution; ``values[k-1]`` is mu(k)."""

    values: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def __call__(self, k: int) -> Fraction:
        if k == 0:
            return Fraction(1)
        if k > len(self.values):
            raise DomainError(f"moment of order {k} not available (have {len(self.values)})")
        return self.values[k - 1]

    @property
    def max_order(self) -> int:
        return len(self.values)

    @classmethod
    def from_function(cls, f: Callable[[int], object], max_order: int, label: str = ""):
        return cls(tuple(f(k) for k in range(1, max_order + 1)), label)


Moments = Union[MomentSequence, Callable[[int], object], Mapping[int, object]]


def _moment_getter(weights: Moments) -> Callable[[int], Fraction]:
    if isinstance(weights, Mapping):
        return lambda k: Fraction(1) if k == 0 else as_fraction(weights[k])
    return lambda k: as_fraction(weights(k))


def semicircle_moment(order: int) -> Fraction:
    """Moment of the semicircle law with variance 1/4 (radius 1)."""
    if order < 0:
        raise DomainError("order must be non-negative")
    if order % 2:
        return Fraction(0)
    k = order // 2
    return Fraction(math.comb(2 * k, k), 4**k * (k + 1))


def semicircle_moments(max_order: int) -> MomentSequence:
    return MomentSequence.from_function(semicircle_moment, max_order, "semicircle var 1/4")


def ones(max_order: int) -> MomentSequence:
    return MomentSequence((1,) * max_order, "constant one")


def _weight_product(sig_type: tuple, mu: Callable[[int], Fraction]) -> Fraction:
    return math.prod((mu(n) for n in sig_type), start=Fraction(1))


def moment_expansion(order: int, d: int, weights: Moments, max_length: int | None = None) -> Fraction:
    """Limiting ``order``-th spectral moment of the d-regular ensemble with the given weights."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if order % 2:
        return Fraction(0)
    mu = _moment_getter(weights)
    total = Fraction(0)
    for (sig_type, roots), count in multiplicity_groups(order, max_length).items():
        m = count * math.prod(d - a for a in roots)
        if m:
            total += m * _weight_product(sig_type, mu)
    return total


@lru_cache(maxsize=None)
def _symbolic_table(order: int, max_length: int | None) -> dict:
    table: dict = defaultdict(PolyInD)
    for (sig_type, roots), count in multiplicity_groups(order, max_length).items():
        table[sig_type] = table[sig_type] + PolyInD.from_roots(roots, count)
    return dict(table)


def moment_expansion_symbolic(order: int, weights: Moments | None = None,
                              max_length: int | None = None):
    """Moment expansion with ``d`` left symbolic.

    With ``weights`` given, returns a :class:`PolyInD`. Without, the weight
    moments stay symbolic too and the result maps each signature type
    (a product ``mu(n_1) mu(n_2) ...``) to its polynomial coefficient in d.
    """
    if order % 2:
        return PolyInD() if weights is not None else {}
    table = _symbolic_table(order, max_length)
    if weights is None:
        return dict(table)
    mu = _moment_getter(weights)
    total = PolyInD()
    for sig_type, poly in table.items():
        total = total + poly * _weight_product(sig_type, mu)
    return total


def multiplicity_breakdown(order: int, max_length: int | None = None) -> dict:
    """Signature type -> {sorted multiplicity roots: pattern count}.

    This is the finest grouping, the one written out term by term for the
    fourth, sixth and eighth moments (e.g. 16 patterns with roots (0,1,1)
    and 12 with roots (0,1,2) for signature type (4,2,2)).
    """
    out: dict = defaultdict(dict)
    for (sig_type, roots), count in multiplicity_groups(order, max_length).items():
        out[sig_type][roots] = count
    return dict(out)


@dataclass(frozen=True)
class EigenmomentTable:
    """Even moments of the eigendistribution for one d, scaled so mu(2) = 1/4.

    The spectral distribution of the weighted ensemble is the eigendistribution
    rescaled by ``d ** -0.5``.
    """

    d: int
    even: tuple

    def __call__(self, k: int) -> Fraction:
        if k == 0:
            return Fraction(1)
        if k % 2:
            return Fraction(0)
        if k // 2 > len(self.even):
            raise DomainError(f"eigenmoment of order {k} not computed")
        return self.even[k // 2 - 1]

    @property
    def max_order(self) -> int:
        return 2 * len(self.even)

    @property
    def scale(self) -> float:
        return self.d ** -0.5

    def as_moment_sequence(self) -> MomentSequence:
        return MomentSequence.from_function(self, self.max_order, f"eigendistribution d={self.d}")


@lru_cache(maxsize=None)
def _eigen_even(d: int, max_order: int, max_length: int | None) -> tuple:
    values: list[Fraction] = [Fraction(1, 4)]

    def mu(n: int) -> Fraction:
        if n % 2:
            return Fraction(0)
        return values[n // 2 - 1]

    for k in range(2, max_order // 2 + 1):
        total = Fraction(0)
        for (sig_type, roots), count in multiplicity_groups(2 * k, max_length).items():
            if len(sig_type) == 1:
                continue
            m = count * math.prod(d - a for a in roots)
            if m:
                total += m * _weight_product(sig_type, mu)
        values.append(total / (d**k - d))
    return tuple(values)


def eigenmoments(d: int, max_order: int, max_length: int | None = None) -> EigenmomentTable:
    if d < 2:
        raise DomainError(f"eigenmoments need d >= 2 (d^k - d vanishes at d = 1), got d={d}")
    if max_order < 2:
        raise DomainError("max_order must be at least 2")
    return EigenmomentTable(d, _eigen_even(d, max_order - max_order % 2, max_length))


def eighth_moment_closed_form(d: int) -> Fraction:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return Fraction(7, 128) + Fraction(1, 128 * (d * d + d + 1))


def deviation_table(d_values: Sequence[int], orders: Sequence[int],
                    max_length: int | None = None) -> dict:
    """{(d, order): d**2 * (eigenmoment - semicircle moment)}, exact."""
    top = max(orders)
    out = {}
    for d in d_values:
        table = eigenmoments(d, max(top, 2), max_length)
        for k in orders:
            out[d, k] = d * d * (table(k) - semicircle_moment(k))
    return out


def kesten_moment_exact(d: int, order: int, max_length: int | None = None) -> Fraction:
    """Moment of the unweighted (all weights one) limiting spectral measure."""
    return moment_expansion(order, d, lambda k: 1, max_length)
