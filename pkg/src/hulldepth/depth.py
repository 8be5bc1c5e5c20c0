"""Convex-hull-area depth of curves: exact, Monte-Carlo and population forms.

The depth of a query curve x against a reference sample is the expected ratio
of two hull areas: the hull of J random curve graphs over the hull of the
same graphs joined by the graph of x.  Values lie in [0, 1]; low depth marks
atypical curves.  Estimators:

* ``exact_depth``         -- mean ratio over all C(n, J) reference subsets.
* ``averaged_exact_depth``-- mean of exact depths of degrees 1..J.
* ``mc_depth``            -- incomplete version averaging K random subsets.
* ``population_depth``    -- closed-form expectation for a finite-support
                             curve distribution (the testing oracle).
* ``integrated_baseline_depth`` -- time-integrated univariate rank depth, a
                             deliberately simple baseline for comparison.

All estimators are pure functions of their inputs (and seed); Monte-Carlo
subsets are addressed by (seed, draw index) so any parallel schedule returns
bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .curves import CurveBatch, ExtrapolationError, SampledCurve, evaluate_linear
from .geometry import joint_hull_area

__all__ = [
    "DepthConfig",
    "DepthReport",
    "DiscreteCurveDistribution",
    "EnumerationBudgetError",
    "ach_ratio",
    "exact_depth",
    "averaged_exact_depth",
    "mc_depth",
    "population_depth",
    "depth_report",
    "integrated_baseline_depth",
]

EXACT_SUBSET_BUDGET = 10_000_000
POPULATION_TUPLE_BUDGET = 1_000_000

_ESTIMATORS = ("exact", "monte_carlo")


class EnumerationBudgetError(ValueError):
    """Raised when an exact enumeration would exceed its subset budget."""


@dataclass(frozen=True)
class DepthConfig:
    """Estimator settings.

    J is the subset degree; ``averaged`` switches to the mean of degrees
    1..J.  K is the Monte-Carlo draw count (None means the 5n default).
    """

    J: int = 2
    estimator: str = "monte_carlo"
    K: int | None = None
    averaged: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.J < 1:
            raise ValueError(f"J must be >= 1, got {self.J}")
        if self.estimator not in _ESTIMATORS:
            raise ValueError(
                f"estimator must be one of {_ESTIMATORS}, got {self.estimator!r}"
            )
        if self.K is not None and self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class DepthReport:
    """Per-curve depth scores plus the induced ranking.

    ``ranking`` lists curve ids by ascending depth (most anomalous first),
    ties broken by query position.
    """

    ids: tuple
    scores: np.ndarray
    ranking: tuple
    config: DepthConfig

    def rank_of(self, curve_id: str) -> int:
        """1-based rank of a curve (1 = lowest depth)."""
        return self.ranking.index(curve_id) + 1

    def write_csv(self, path) -> None:
        """Write ``curve_id,depth,rank`` rows sorted by rank ascending."""
        import csv

        by_id = {cid: s for cid, s in zip(self.ids, self.scores)}
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["curve_id", "depth", "rank"])
            for rank, cid in enumerate(self.ranking, start=1):
                writer.writerow([cid, repr(float(by_id[cid])), rank])


@dataclass(frozen=True)
class DiscreteCurveDistribution:
    """Finitely supported curve distribution: atom curves with probabilities."""

    atoms: tuple
    probs: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise ValueError("distribution needs at least one atom")
        if self.probs is None:
            probs = np.full(len(self.atoms), 1.0 / len(self.atoms))
        else:
            probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        if probs.shape != (len(self.atoms),):
            raise ValueError("probs must match the number of atoms")
        if np.any(probs < 0):
            raise ValueError("probs must be non-negative")
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probs must sum to 1, got {probs.sum()}")


def _prepare(curves: Sequence[SampledCurve]):
    """Per-curve hull vertices, lexicographically sorted and concatenated.

    Reducing each curve to its own hull vertices first is lossless for any
    union hull: conv(A U B) = conv(conv(A) U conv(B)).
    """
    xparts = []
    yparts = []
    offsets = np.empty(len(curves) + 1, dtype=np.int64)
    offsets[0] = 0
    for i, c in enumerate(curves):
        order = np.lexsort((c.values, c.times))
        sx = np.ascontiguousarray(c.times[order])
        sy = np.ascontiguousarray(c.values[order])
        ring = _kernels.chain_ring(sx, sy)
        vx, vy = sx[ring], sy[ring]
        o2 = np.lexsort((vy, vx))
        xparts.append(vx[o2])
        yparts.append(vy[o2])
        offsets[i + 1] = offsets[i] + len(ring)
    return (
        np.ascontiguousarray(np.concatenate(xparts)),
        np.ascontiguousarray(np.concatenate(yparts)),
        offsets,
    )


def _degree_cumweights(n: int, J: int) -> np.ndarray:
    """Cumulative degree weights w_l proportional to C(n, l), l = 1..J."""
    combs = [math.comb(n, l) for l in range(1, J + 1)]
    total = sum(combs)
    cum = np.empty(J, dtype=np.float64)
    acc = 0
    for i, c in enumerate(combs):
        acc += c
        cum[i] = acc / total
    cum[-1] = 1.0
    return cum


def ach_ratio(subset: Sequence[SampledCurve], x: SampledCurve) -> float:
    """Hull-area ratio of a reference subset to the subset joined with x.

    Returns 1.0 when the joined hull is still degenerate (the query added
    nothing to a zero-area hull).
    """
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be non-empty")
    num = joint_hull_area(subset)
    den = joint_hull_area(subset + [x])
    if den <= 0.0:
        return 1.0
    return min(num / den, 1.0)


def _check_exact_budget(n: int, j: int) -> int:
    total = math.comb(n, j)
    if total > EXACT_SUBSET_BUDGET:
        raise EnumerationBudgetError(
            f"C({n}, {j}) = {total} subsets exceeds the exact budget "
            f"({EXACT_SUBSET_BUDGET}); use the monte_carlo estimator"
        )
    return total


def exact_depth(batch: CurveBatch, x: SampledCurve, J: int) -> float:
    """Mean hull-area ratio over every size-J subset of the batch."""
    n = len(batch)
    if not 1 <= J <= n:
        raise ValueError(f"J must be in [1, {n}], got {J}")
    total = _check_exact_budget(n, J)
    xs, ys, offs = _prepare(batch.curves)
    qx, qy, _ = _prepare([x])
    return float(_kernels.exact_score(xs, ys, offs, n, J, total, qx, qy))


def averaged_exact_depth(batch: CurveBatch, x: SampledCurve, J: int) -> float:
    """Mean of the exact depths of degrees 1..J."""
    n = len(batch)
    if not 1 <= J <= n:
        raise ValueError(f"J must be in [1, {n}], got {J}")
    totals = [_check_exact_budget(n, j) for j in range(1, J + 1)]
    xs, ys, offs = _prepare(batch.curves)
    qx, qy, _ = _prepare([x])
    acc = 0.0
    for j, total in zip(range(1, J + 1), totals):
        acc += float(_kernels.exact_score(xs, ys, offs, n, j, total, qx, qy))
    return acc / J


class _SubsetCache:
    """Drawn subsets with merged vertex lists and numerator hull areas.

    Built once per (batch, config); scoring a query then only needs the
    denominator hulls.  Draw k is always the same for a given seed, so the
    cache is shared safely across queries and threads.
    """

    def __init__(self, batch: CurveBatch, J: int, K: int, seed: int, averaged: bool):
        n = len(batch)
        xs, ys, offs = _prepare(batch.curves)
        cumw = _degree_cumweights(n, J) if averaged else np.zeros(1)
        degrees, members = _kernels.sample_draws(
            np.uint64(seed), n, J, K, cumw, averaged
        )
        lengths = offs[1:] - offs[:-1]
        sizes = _kernels.merged_sizes(lengths, degrees, members)
        moffs = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
        self.mx = np.empty(int(moffs[-1]), dtype=np.float64)
        self.my = np.empty(int(moffs[-1]), dtype=np.float64)
        self.areas = np.empty(K, dtype=np.float64)
        _kernels.build_subset_cache(
            xs, ys, offs, degrees, members, moffs, self.mx, self.my, self.areas
        )
        self.moffs = moffs
        self.sizes = sizes
        self.max_size = int(sizes.max()) if K else 0

    def score(self, qx: np.ndarray, qy: np.ndarray) -> float:
        wx = np.empty(self.max_size + len(qx), dtype=np.float64)
        wy = np.empty(self.max_size + len(qx), dtype=np.float64)
        return float(
            _kernels.score_against_cache(
                self.mx, self.my, self.moffs, self.sizes, self.areas, qx, qy, wx, wy
            )
        )

    def score_many(self, queries: Sequence[SampledCurve]) -> np.ndarray:
        qxs, qys, qoffs = _prepare(queries)
        out = np.empty(len(queries), dtype=np.float64)
        _kernels.score_many_against_cache(
            self.mx, self.my, self.moffs, self.sizes, self.areas, qxs, qys, qoffs, out
        )
        return out


def mc_depth(
    batch: CurveBatch,
    x: SampledCurve,
    J: int,
    K: int,
    seed: int,
    averaged: bool = False,
) -> float:
    """Incomplete estimator: mean ratio over K randomly drawn subsets.

    Subsets are drawn with replacement between draws and without replacement
    within a draw.  In averaged mode each draw first samples its degree l
    from weights proportional to C(n, l), l = 1..J.  Deterministic given the
    seed: draw k depends only on (seed, k).
    """
    n = len(batch)
    if not 1 <= J <= n:
        raise ValueError(f"J must be in [1, {n}], got {J}")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    cache = _SubsetCache(batch, J, K, seed, averaged)
    qx, qy, _ = _prepare([x])
    return cache.score(qx, qy)


def population_depth(
    dist: DiscreteCurveDistribution,
    x: SampledCurve,
    J: int,
    averaged: bool = False,
) -> float:
    """Exact expected hull-area ratio under a finite-support distribution.

    Enumerates ordered J-tuples of atoms with product weights (i.i.d. draws
    from the support).  Guarded by ``POPULATION_TUPLE_BUDGET`` on s**J.
    """
    if J < 1:
        raise ValueError(f"J must be >= 1, got {J}")
    s = len(dist.atoms)
    if s**J > POPULATION_TUPLE_BUDGET:
        raise EnumerationBudgetError(
            f"{s}**{J} = {s**J} tuples exceeds the enumeration budget "
            f"({POPULATION_TUPLE_BUDGET})"
        )
    xs, ys, offs = _prepare(dist.atoms)
    qx, qy, _ = _prepare([x])
    probs = np.ascontiguousarray(dist.probs, dtype=np.float64)
    degrees = range(1, J + 1) if averaged else [J]
    acc = 0.0
    for j in degrees:
        acc += float(_kernels.population_score(xs, ys, offs, probs, j, qx, qy))
    return acc / J if averaged else acc


def depth_report(
    batch: CurveBatch,
    queries: CurveBatch,
    config: DepthConfig,
    threads: int | None = None,
) -> DepthReport:
    """Score every query against the batch and rank by ascending depth.

    With ``estimator="monte_carlo"`` all queries share the same K drawn
    subsets (draw k is keyed by (config.seed, k)), so rankings are not
    perturbed by between-query sampling noise.  ``threads`` caps the numba
    thread pool for this call; the scores are bit-identical for any value.
    """
    n = len(batch)
    if config.J > n:
        raise ValueError(f"J={config.J} exceeds batch size n={n}")
    if config.estimator == "exact":
        fn = averaged_exact_depth if config.averaged else exact_depth
        scores = np.array([fn(batch, q, config.J) for q in queries])
    else:
        K = config.K if config.K is not None else 5 * n
        cache = _SubsetCache(batch, config.J, K, config.seed, config.averaged)
        if threads is None:
            scores = cache.score_many(queries.curves)
        else:
            import numba

            prev = numba.get_num_threads()
            numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
            try:
                scores = cache.score_many(queries.curves)
            finally:
                numba.set_num_threads(prev)
    order = np.argsort(scores, kind="stable")
    ids = tuple(queries.ids)
    ranking = tuple(ids[i] for i in order)
    return DepthReport(ids=ids, scores=scores, ranking=ranking, config=config)


def integrated_baseline_depth(
    batch: CurveBatch,
    x: SampledCurve,
    grid_size: int = 100,
    grid: np.ndarray | None = None,
) -> float:
    """Time-averaged univariate rank depth (integral-type baseline).

    At each of ``grid_size`` uniform grid points on [0, 1] the query value is
    scored by min(#{values <= q}, #{values >= q}) / n against the batch's
    interpolated values; the grid average is returned.  Every curve must span
    the grid.
    """
    if grid is None:
        grid = np.linspace(0.0, 1.0, grid_size)
    else:
        grid = np.asarray(grid, dtype=np.float64)
    lo, hi = float(grid.min()), float(grid.max())
    for c in list(batch) + [x]:
        if c.times[0] > lo or c.times[-1] < hi:
            raise ExtrapolationError(
                f"curve {c.id!r} spans [{c.times[0]}, {c.times[-1]}], "
                f"not the evaluation grid [{lo}, {hi}]"
            )
    values = np.vstack([np.interp(grid, c.times, c.values) for c in batch])
    q = np.interp(grid, x.times, x.values)
    n_le = (values <= q).sum(axis=0)
    n_ge = (values >= q).sum(axis=0)
    return float(np.mean(np.minimum(n_le, n_ge) / len(batch)))
