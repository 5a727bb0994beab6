"""
Empirical spectra of weighted regular graphs and the Kesten reference law.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from .ensemble import (
    Seed,
    WeightedGraph,
    WeightSpec,
    assign_weights,
    sample_regular_graph,
    split_seed,
)
from .moments import DomainError, moment_expansion

TRACE_BUDGET = 50_000  # max N * K for trace_moments
D2_ENDPOINT_CAP = math.inf


class BudgetError(RuntimeError):
    pass


def trace_moments(wg: WeightedGraph | np.ndarray, max_order: int,
                  budget: int = TRACE_BUDGET) -> np.ndarray:
    """``[Tr(A^k) / N for k = 1..max_order]`` by repeated dense products."""
    a = wg.matrix() if isinstance(wg, WeightedGraph) else np.asarray(wg, dtype=float)
    n = a.shape[0]
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if n * max_order > budget:
        raise BudgetError(f"N*K = {n * max_order} exceeds budget {budget}")
    out = np.empty(max_order)
    power = a.copy()
    for k in range(max_order):
        out[k] = np.trace(power) / n
        if k + 1 < max_order:
            power = power @ a
    return out


class ConvergenceError(RuntimeError):
    pass


def eigen_spectrum(wg: WeightedGraph | np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues, ascending, with ``||Av - lv|| <= tol * ||A||`` checked per pair."""
    a = wg.matrix() if isinstance(wg, WeightedGraph) else np.asarray(wg, dtype=float)
    if not np.allclose(a, a.T) or np.any(np.diag(a) != 0):
        raise ValueError("expected a symmetric matrix with zero diagonal")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    norm = np.abs(vals).max() if len(vals) else 0.0
    resid = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
    if norm > 0 and resid.max() > tol * norm:
        raise ConvergenceError(f"residual {resid.max():.3g} exceeds {tol} * ||A||")
    return vals


# --- Kesten law ----------------------------------------------------------------


def kesten_support(d: int) -> float:
    return 2.0 * math.sqrt(d - 1)


def kesten_density(d: int, x):
    """Density of the limiting spectral law of random d-regular graphs.

    For d = 2 the density is the arcsine law and blows up at x = +-2; the
    endpoints return ``D2_ENDPOINT_CAP``.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    x = np.asarray(x, dtype=float)
    r2 = 4.0 * (d - 1)
    inside = x * x <= r2
    with np.errstate(divide="ignore", invalid="ignore"):
        f = d * np.sqrt(np.clip(r2 - x * x, 0.0, None)) / (2.0 * math.pi * (d * d - x * x))
    f = np.where(inside, f, 0.0)
    if d == 2:
        f = np.where(np.abs(x) == 2.0, D2_ENDPOINT_CAP, f)
    return f if f.ndim else float(f)


def _kesten_theta_integrand(d: int, k: int):
    # x = R cos(theta) removes the square-root endpoints
    r = kesten_support(d)
    if d == 2:
        return lambda t: (r * math.cos(t)) ** k / math.pi
    return lambda t: (r * math.cos(t)) ** k * d * (r * math.sin(t)) ** 2 / (
        2.0 * math.pi * (d * d - (r * math.cos(t)) ** 2)
    )


def _quad(f, a, b, abs_tol: float):
    val, err = integrate.quad(f, a, b, epsabs=abs_tol * 1e-3, epsrel=1e-13, limit=500)
    if err > abs_tol:
        raise ConvergenceError(f"quadrature error estimate {err:.3g} > {abs_tol}")
    return val


def kesten_moment_numeric(d: int, k: int, abs_tol: float = 1e-9) -> float:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if k > 14:
        raise DomainError("numeric Kesten moments are supported up to order 14")
    return _quad(_kesten_theta_integrand(d, k), 0.0, math.pi, abs_tol)


def kesten_bin_masses(d: int, edges: Sequence[float]) -> np.ndarray:
    """Kesten probability of each interval ``[edges[i], edges[i+1]]``."""
    r = kesten_support(d)
    f = _kesten_theta_integrand(d, 0)
    theta = np.arccos(np.clip(np.asarray(edges, dtype=float) / r, -1.0, 1.0))
    return np.array([_quad(f, theta[i + 1], theta[i], 1e-10) for i in range(len(theta) - 1)])


def semicircle_density(x, variance: float):
    r = 2.0 * math.sqrt(variance)
    x = np.asarray(x, dtype=float)
    return 2.0 / (math.pi * r * r) * np.sqrt(np.clip(r * r - x * x, 0.0, None))


# --- samples and Monte Carlo -----------------------------------------------------


@dataclass
class SpectralSample:
    trace_moments: np.ndarray
    eigenvalues: np.ndarray | None = None
    seed: object = None
    n_vertices: int = 0
    degree: int = 0
    weight_spec: str = ""


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    mean: float
    se: float
    trials: int


def simulate_trial(n: int, d: int, spec: WeightSpec, max_order: int, seed: Seed,
                   eigen: bool = True) -> SpectralSample:
    graph_seed, weight_seed = split_seed(seed, 2)
    g = sample_regular_graph(n, d, graph_seed)
    wg = assign_weights(g, spec, weight_seed)
    return SpectralSample(
        trace_moments=trace_moments(wg, max_order),
        eigenvalues=eigen_spectrum(wg) if eigen else None,
        seed=getattr(seed, "spawn_key", seed),
        n_vertices=n,
        degree=d,
        weight_spec=str(spec),
    )


def run_trials(n: int, d: int, spec: WeightSpec, trials: int, max_order: int,
               master_seed: int, eigen: bool = True, threads: int = 1) -> list[SpectralSample]:
    """Trial i uses child i of ``SeedSequence(master_seed).spawn(trials)``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = split_seed(master_seed, trials)

    def one(s):
        return simulate_trial(n, d, spec, max_order, s, eigen)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, seeds))
    return [one(s) for s in seeds]


def aggregate_moments(samples: Sequence[SpectralSample]) -> list[MomentEstimate]:
    m = np.array([s.trace_moments for s in samples])
    t = len(m)
    se = m.std(axis=0, ddof=1) / math.sqrt(t) if t >= 2 else np.full(m.shape[1], np.nan)
    return [MomentEstimate(k + 1, float(m[:, k].mean()), float(se[k]), t) for k in range(m.shape[1])]


def monte_carlo_moments(n: int, d: int, spec: WeightSpec, trials: int, max_order: int,
                        master_seed: int, threads: int = 1) -> list[MomentEstimate]:
    return aggregate_moments(run_trials(n, d, spec, trials, max_order, master_seed,
                                        eigen=False, threads=threads))


def mc_tolerance(exact: float, se: float, n: int, d: int, k: int) -> float:
    """Acceptance band: statistical error or a finite-N allowance, whichever is larger."""
    return max(5.0 * se, 0.02 * abs(exact) + 0.5 / n * d**k)


@dataclass(frozen=True)
class ComparisonRow:
    order: int
    exact: object
    mc_mean: float
    mc_se: float
    tolerance: float

    @property
    def z_score(self) -> float:
        diff = self.mc_mean - float(self.exact)
        if self.mc_se > 0:
            return diff / self.mc_se
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)

    @property
    def passed(self) -> bool:
        return abs(self.mc_mean - float(self.exact)) <= self.tolerance


def compare_moments(estimates: Sequence[MomentEstimate], n: int, d: int,
                    spec: WeightSpec) -> list[ComparisonRow]:
    rows = []
    for est in estimates:
        exact = moment_expansion(est.order, d, spec.moment)
        tol = mc_tolerance(float(exact), est.se, n, d, est.order)
        rows.append(ComparisonRow(est.order, exact, est.mean, est.se, tol))
    return rows


# --- densities --------------------------------------------------------------------


@dataclass
class DensityTable:
    edges: np.ndarray
    density: np.ndarray
    n_outside: int = 0
    n_total: int = 0
    references: dict = field(default_factory=dict)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def rows(self) -> list[tuple]:
        names = list(self.references)
        return [
            (c, e, *(self.references[k][i] for k in names))
            for i, (c, e) in enumerate(zip(self.centers, self.density))
        ]


def default_range(d: int, eps: float = 0.05) -> tuple[float, float]:
    r = kesten_support(d) * (1.0 + eps)
    return -r, r


def empirical_density(eigenvalues, bins: int = 50, range: tuple | None = None) -> DensityTable:
    """Normalized histogram of pooled eigenvalues; integrates to one over ``range``."""
    vals = np.concatenate([np.ravel(v) for v in eigenvalues]) if isinstance(eigenvalues, (list, tuple)) \
        else np.ravel(np.asarray(eigenvalues, dtype=float))
    if vals.size == 0:
        raise ValueError("no eigenvalues to bin")
    counts, edges = np.histogram(vals, bins=bins, range=range)
    inside = counts.sum()
    if inside == 0:
        raise ValueError("no eigenvalues fall inside the histogram range")
    density = counts / (inside * np.diff(edges))
    return DensityTable(edges, density, int(vals.size - inside), int(vals.size))


def attach_references(table: DensityTable, d: int, semicircle_variance: float | None = None) -> DensityTable:
    """Adds Kesten (bin-averaged) and, optionally, semicircle reference columns."""
    masses = kesten_bin_masses(d, table.edges)
    table.references["kesten"] = masses / table.widths
    if semicircle_variance is not None:
        table.references["semicircle_ref"] = semicircle_density(table.centers, semicircle_variance)
    return table


def kesten_tv_distance(table: DensityTable, d: int) -> float:
    """Total variation between binned empirical and Kesten laws.

    Mass outside the histogram range (empirical or reference) counts fully.
    """
    masses = kesten_bin_masses(d, table.edges)
    frac_inside = (table.n_total - table.n_outside) / table.n_total
    emp = table.density * table.widths * frac_inside
    ref_out = max(0.0, 1.0 - masses.sum())
    emp_out = table.n_outside / table.n_total
    return 0.5 * (np.abs(emp - masses).sum() + ref_out + emp_out)
