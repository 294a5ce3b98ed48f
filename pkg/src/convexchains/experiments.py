"""Monte Carlo harness and closed-form evaluators for longest convex chains."""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import geometry as geo
from .chain_solver import (
    ChainInstance,
    band_mask,
    convex_chain_mask,
    convex_position_mask,
    longest_chain_exact,
    longest_chain_length,
)
from .sampling import Poisson, SeedSpec, Uniform, sample

ALPHA_LOWER = 1.5772
ALPHA_UPPER = 3.4249
ALPHA_CONJECTURED = 3.0


@dataclass(frozen=True)
class ReferenceConstants:
    alpha_lower: float = ALPHA_LOWER
    alpha_upper: float = ALPHA_UPPER
    alpha_conjectured: float = ALPHA_CONJECTURED


# n -> (n^{-1/3} E L_n, d_n, search radius / sqrt2, standard deviation)
REFERENCE_TABLE = {
    1000: (2.532, 4, 0.270, 1.254),
    10000: (2.768, 5, 0.200, 1.383),
    15625: (2.813, 5, 0.150, 1.293),
    50000: (2.885, 5, 0.100, 1.411),
    75000: (2.906, 5, 0.070, 1.580),
    100000: (2.917, 5, 0.060, 1.431),
    125000: (2.926, 5, 0.050, 1.637),
    421875: (2.959, 5, 0.012, 1.732),
    1000000: (2.976, 6, 0.012, 2.023),
}

BAND_DEFAULT_FROM_N = 100_000
PROBABILITY_CHUNK = 1 << 16


def default_band(n: int) -> Optional[float]:
    """Search half-width used when none is given: none below 10^5 points,
    5 n^{-1/3} sqrt2 from there on."""
    if n < BAND_DEFAULT_FROM_N:
        return None
    return 5.0 * n ** (-1.0 / 3.0) * math.sqrt(2.0)


# -- closed forms ---------------------------------------------------------


def convex_chain_probability_exact(k: int, exact: bool = False):
    """P(k uniform points in T form a convex chain) = 2^k / (k! (k+1)!)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if exact:
        return Fraction(2**k, math.factorial(k) * math.factorial(k + 1))
    if k <= 100:
        return float(Fraction(2**k, math.factorial(k) * math.factorial(k + 1)))
    return math.exp(k * math.log(2.0) - math.lgamma(k + 1) - math.lgamma(k + 2))


def valtr_convex_position_probability_exact(n: int, exact: bool = False):
    """P(n uniform points in a parallelogram are in convex position)
    = binom(2n-2, n-1)^2 / (n!)^2."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if exact:
        return Fraction(math.comb(2 * n - 2, n - 1) ** 2, math.factorial(n) ** 2)
    if n <= 100:
        return float(Fraction(math.comb(2 * n - 2, n - 1) ** 2, math.factorial(n) ** 2))
    log_binom = math.lgamma(2 * n - 1) - 2 * math.lgamma(n)
    return math.exp(2 * log_binom - 2 * math.lgamma(n + 1))


def convex_position_upper_bound(n: int) -> float:
    return (240.0 / n**2) ** n


# -- probability trials ---------------------------------------------------


@dataclass(frozen=True)
class ProbabilityEstimate:
    estimate: float
    std_error: float
    successes: int
    replicates: int
    exact: float


def _chunked_hits(replicates: int, master_seed: int, draw, test) -> int:
    hits = 0
    for c, lo in enumerate(range(0, replicates, PROBABILITY_CHUNK)):
        m = min(PROBABILITY_CHUNK, replicates - lo)
        rng = SeedSpec(master_seed, c).generator()
        hits += int(np.count_nonzero(test(draw(rng, m))))
    return hits


def _estimate(hits: int, replicates: int, exact: float) -> ProbabilityEstimate:
    p = hits / replicates
    return ProbabilityEstimate(p, math.sqrt(p * (1 - p) / replicates), hits, replicates, exact)


def run_chain_probability_trial(k: int, replicates: int, seed: int) -> ProbabilityEstimate:
    """Fraction of replicates whose k fresh uniform points in the standard
    triangle form a convex chain, with its binomial standard error."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if replicates < 1:
        raise ValueError("replicates must be positive")

    def draw(rng, m):
        uv = rng.random((m, k, 2))
        flip = uv.sum(axis=2) > 1.0
        uv[flip] = 1.0 - uv[flip]
        return uv

    hits = _chunked_hits(replicates, seed, draw, convex_chain_mask)
    return _estimate(hits, replicates, convex_chain_probability_exact(k))


def run_convex_position_trial(n: int, replicates: int, seed: int) -> ProbabilityEstimate:
    """Fraction of replicates whose n uniform points in the unit square are
    in convex position."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if replicates < 1:
        raise ValueError("replicates must be positive")
    hits = _chunked_hits(replicates, seed, lambda rng, m: rng.random((m, n, 2)), convex_position_mask)
    return _estimate(hits, replicates, valtr_convex_position_probability_exact(n))


# -- length experiments ---------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    replicates: int
    master_seed: int
    model: str = "uniform"
    band: Optional[float] = None
    histogram_bins: Optional[int] = None
    threads: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.band is not None and not self.band > 0:
            raise ValueError("band half-width must be positive")
        if self.model not in ("uniform", "poisson"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.histogram_bins is not None and self.histogram_bins < 1:
            raise ValueError("histogram needs at least one bin")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    @property
    def sample_model(self):
        return Uniform(self.n) if self.model == "uniform" else Poisson(float(self.n))


@dataclass(frozen=True)
class RunSummary:
    n: int
    replicates: int
    mean_length: float
    normalized_mean: float
    sample_std_dev: float
    empirical_median: float
    d_half: int
    histogram: tuple[int, ...]
    histogram_edges: tuple[float, ...]
    lengths: tuple[int, ...]
    seeds: tuple[int, ...]
    master_seed: int
    model: str = "uniform"
    band: Optional[float] = None
    warnings: tuple[str, ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    @property
    def min_length(self) -> int:
        return min(self.lengths)

    @property
    def max_length(self) -> int:
        return max(self.lengths)


def _histogram(lengths: np.ndarray, bins: Optional[int]):
    lo, hi = int(lengths.min()), int(lengths.max())
    if bins is None:
        counts = np.bincount(lengths - lo, minlength=hi - lo + 1)
        edges = np.arange(lo, hi + 2, dtype=float)
    else:
        counts, edges = np.histogram(lengths, bins=bins, range=(lo, hi + 1))
    return tuple(int(c) for c in counts), tuple(float(e) for e in edges)


def summarize(config: ExperimentConfig, lengths, seeds, elapsed: float = 0.0, band=None) -> RunSummary:
    arr = np.asarray(lengths, dtype=np.int64)
    mean = float(arr.mean())
    warnings = []
    if len(arr) > 1:
        std = float(arr.std(ddof=1))
    else:
        std = 0.0
        warnings.append("single replicate: standard deviation reported as 0")
    counts, edges = _histogram(arr, config.histogram_bins)
    return RunSummary(
        n=config.n,
        replicates=len(arr),
        mean_length=mean,
        normalized_mean=mean / config.n ** (1.0 / 3.0),
        sample_std_dev=std,
        empirical_median=float(np.median(arr)),
        d_half=int(math.floor(float(np.abs(arr - mean).max()))),
        histogram=counts,
        histogram_edges=edges,
        lengths=tuple(int(v) for v in arr),
        seeds=tuple(int(s) for s in seeds),
        master_seed=config.master_seed,
        model=config.model,
        band=band,
        warnings=tuple(warnings),
        elapsed=elapsed,
    )


def _replicate_points(config: ExperimentConfig, index: int) -> np.ndarray:
    return sample(SeedSpec(config.master_seed, index), config.sample_model)


def _replicate_instance(config: ExperimentConfig, index: int, band: Optional[float]) -> ChainInstance:
    inst = ChainInstance.from_standard(_replicate_points(config, index))
    if band is not None:
        inst, _ = inst.subset(band_mask(inst, band))
    return inst


def _map_replicates(fn, replicates: int, threads: int) -> list:
    if threads == 1:
        return [fn(i) for i in range(replicates)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(replicates)))


def run_length_experiment(config: ExperimentConfig) -> RunSummary:
    """Solve ``config.replicates`` independent random instances and
    aggregate the longest-chain lengths. Replicate i always uses the stream
    SeedSpec(master_seed, i), so the summary does not depend on threads."""
    band = config.band if config.band is not None else default_band(config.n)
    t0 = time.perf_counter()
    lengths = _map_replicates(
        lambda i: longest_chain_length(_replicate_instance(config, i, band)),
        config.replicates,
        config.threads,
    )
    seeds = [SeedSpec(config.master_seed, i).stream_seed for i in range(config.replicates)]
    return summarize(config, lengths, seeds, time.perf_counter() - t0, band)


@dataclass(frozen=True)
class LimitShapeRow:
    replicate: int
    length: int
    distance: float


@dataclass(frozen=True)
class LimitShapeResult:
    n: int
    master_seed: int
    band: Optional[float]
    rows: tuple[LimitShapeRow, ...]

    @property
    def distances(self) -> np.ndarray:
        return np.array([r.distance for r in self.rows])

    def quantiles(self) -> dict[str, float]:
        d = self.distances
        qs = np.quantile(d, [0.0, 0.25, 0.5, 0.75, 1.0])
        return dict(zip(("min", "q25", "median", "q75", "max"), (float(v) for v in qs)))

    @property
    def median(self) -> float:
        return float(np.median(self.distances))


def chain_distance(instance: ChainInstance, indices, samples: int = geo.DEFAULT_ARC_SAMPLES) -> float:
    pts = instance.standard[list(indices)] if len(indices) else np.zeros((0, 2))
    return geo.hausdorff_distance_to_parabola(pts, None, 0.0, samples)


def run_limit_shape_experiment(
    config: ExperimentConfig, samples: int = geo.DEFAULT_ARC_SAMPLES
) -> LimitShapeResult:
    """Per replicate: one longest chain and its Hausdorff distance to the
    special parabola."""
    band = config.band if config.band is not None else default_band(config.n)

    def one(i):
        full = ChainInstance.from_standard(_replicate_points(config, i))
        inst, ids = (full, None) if band is None else full.subset(band_mask(full, band))
        chain = longest_chain_exact(inst)
        return LimitShapeRow(i, chain.length, chain_distance(inst, chain.indices, samples))

    rows = _map_replicates(one, config.replicates, config.threads)
    return LimitShapeResult(config.n, config.master_seed, band, tuple(rows))


def alpha_bounds_check(summary, constants: ReferenceConstants = ReferenceConstants()) -> bool:
    """Whether a normalized mean lies within the proven bounds on alpha."""
    value = summary.normalized_mean if isinstance(summary, RunSummary) else float(summary)
    return constants.alpha_lower <= value <= constants.alpha_upper


# -- geometry property suite ------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    passed: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked == self.passed

    def record(self, ok: bool, example) -> None:
        self.checked += 1
        if ok:
            self.passed += 1
        elif len(self.counterexamples) < 10:
            self.counterexamples.append(example)


def run_geometry_checks(samples: int, seed: int) -> list[PropertyResult]:
    """Random-input checks of the parabola calculus.

    ``samples`` Blaschke triples, samples // 10 tangent-distance pairs and
    samples // 100 random tangent subdivisions, plus fixed equality cases.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = SeedSpec(seed, 0).generator()
    out = []

    blaschke = PropertyResult("blaschke_deficit")
    abc = rng.random((samples, 3))
    q = geo.blaschke_deficit(abc[:, 0], abc[:, 1], abc[:, 2])
    bad = q < (abc[:, 0] - abc[:, 1]) ** 2 / 3.0 - 1e-12
    blaschke.checked += samples
    blaschke.passed += int(samples - bad.sum())
    blaschke.counterexamples.extend(tuple(map(float, t)) for t in abc[bad][:10])
    blaschke.record(abs(geo.blaschke_deficit(0.5, 0.5, 0.5)) <= 1e-12, (0.5, 0.5, 0.5))
    out.append(blaschke)

    additivity = PropertyResult("cube_root_additivity")
    target = np.cbrt(geo.area(geo.standard_triangle()))
    for _ in range(max(1, samples // 100)):
        k = int(rng.integers(1, 21))
        cuts = np.sort(rng.random(k - 1))
        us = np.concatenate([[0.0], cuts, [1.0]])
        if np.any(np.diff(us) <= 0):
            continue
        total = sum(np.cbrt(geo.area(geo.tangent_triangle(a, b))) for a, b in zip(us[:-1], us[1:]))
        additivity.record(abs(total - target) < 1e-9, tuple(map(float, us)))
    out.append(additivity)

    distance = PropertyResult("parallel_tangent_distance")
    m = max(1, samples // 10)
    rs = rng.uniform(-1.0, 3.0, m)
    us = rng.uniform(0.0, 1.0, m)
    for r, u in zip(rs, us):
        if not (-1 < r < 3 and 0 < u < 1):
            continue
        d = geo.parallel_tangent_distance(float(r), float(u))
        distance.record(d <= abs(r) / math.sqrt(8.0) + 1e-12, (float(r), float(u)))
    out.append(distance)

    subdivision = PropertyResult("equal_area_subdivision")
    tris = geo.equal_area_subdivision(1 / 16)
    ok = len(tris) == 2 and all(abs(geo.area(t) - 1 / 16) <= 1e-9 for t in tris)
    subdivision.record(ok, (1 / 16, [geo.area(t) for t in tris]))
    out.append(subdivision)

    ratios = PropertyResult("equal_tangent_ratios")
    for u in rng.uniform(0.0, 1.0, max(1, samples // 100)):
        if not 0 < u < 1:
            continue
        a, b = geo.leg_division_ratios(geo.tangent_line(0.0, float(u)))
        ratios.record(abs(a - b) < 1e-12, float(u))
    out.append(ratios)
    return out
