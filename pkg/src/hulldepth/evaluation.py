"""Ranking stability and anomaly-detection benchmark harnesses.

``robustness_bench`` measures how much a depth-induced ranking of clean
curves moves (normalized Kendall tau distance) when the reference sample is
contaminated with a growing fraction of anomalies.  ``detection_bench``
counts how many injected anomalies land among the lowest-depth curves as the
anomaly severity grows.  Both are seed-deterministic and emit long-form rows
plus aggregated summaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ._rng import derive_key
from .depth import DepthConfig, depth_report, integrated_baseline_depth
from .synthdata import _KIND_TAG, AnomalySpec, GenSpec, generate, inject

__all__ = [
    "Ranking",
    "BenchmarkResult",
    "kendall_tau_distance",
    "portion_detected",
    "robustness_bench",
    "detection_bench",
]


@dataclass(frozen=True)
class Ranking:
    """Total order over curve ids, most anomalous (lowest depth) first."""

    order: tuple

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order):
            raise ValueError("ranking contains duplicate ids")

    def __len__(self) -> int:
        return len(self.order)


def kendall_tau_distance(r1: Ranking, r2: Ranking) -> float:
    """Fraction of discordant pairs between two rankings of the same ids.

    0 for identical orders, 1 for exact reversal.
    """
    if set(r1.order) != set(r2.order):
        raise ValueError("rankings must cover the same id set")
    n = len(r1)
    if n < 2:
        return 0.0
    pos2 = {cid: i for i, cid in enumerate(r2.order)}
    perm = np.array([pos2[cid] for cid in r1.order])
    # pair (i, j) with i before j in r1 is discordant iff r2 inverts it
    diff = perm[:, None] - perm[None, :]
    discordant = int(np.count_nonzero(np.triu(diff, k=1) > 0))
    return discordant / (n * (n - 1) / 2)


def portion_detected(scores, labels, k: int) -> float:
    """Share of true anomalies among the k lowest-scored curves."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if not 1 <= k <= len(scores):
        raise ValueError(f"k must be in [1, {len(scores)}], got {k}")
    if not labels.any():
        raise ValueError("labels mark no anomalies")
    flagged = np.argsort(scores, kind="stable")[:k]
    return int(labels[flagged].sum()) / int(labels.sum())


@dataclass
class BenchmarkResult:
    """Long-form benchmark rows plus per-cell aggregation.

    Each row is (method, kind, level, repetition, value) where level is the
    contamination fraction or the severity, and value the Kendall distance
    or the detected-anomaly count.
    """

    value_name: str
    rows: list = field(default_factory=list)

    def add(self, method: str, kind: str, level: float, rep: int, value: float):
        self.rows.append(
            {"method": method, "kind": kind, "level": level, "rep": rep, "value": value}
        )

    def values(self, method: str, kind: str, level: float) -> np.ndarray:
        got = [
            r["value"]
            for r in self.rows
            if r["method"] == method and r["kind"] == kind and r["level"] == level
        ]
        return np.array(got, dtype=np.float64)

    def summary(self) -> list:
        cells = {}
        for r in self.rows:
            cells.setdefault((r["method"], r["kind"], r["level"]), []).append(r["value"])
        out = []
        for (method, kind, level), vals in sorted(cells.items()):
            arr = np.array(vals, dtype=np.float64)
            out.append(
                {
                    "method": method,
                    "kind": kind,
                    "level": level,
                    "mean": float(arr.mean()),
                    "sd": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
                    "reps": len(arr),
                }
            )
        return out

    def write_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "kind", "level", "rep", self.value_name])
            for r in self.rows:
                writer.writerow(
                    [r["method"], r["kind"], r["level"], r["rep"], repr(r["value"])]
                )

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"value": self.value_name, "cells": self.summary()}, fh, indent=2)
            fh.write("\n")


def robustness_bench(
    genspec: GenSpec,
    kinds: Sequence[str],
    alphas: Sequence[float],
    config: DepthConfig,
    reps: int = 10,
    anomaly_params: dict | None = None,
) -> BenchmarkResult:
    """Kendall distance between clean and contaminated depth rankings.

    For each repetition a fresh batch is generated; its curves are ranked
    against the clean batch (sigma_0) and, per anomaly kind and contamination
    fraction alpha, against the batch with that fraction of curves replaced
    by anomalies (sigma_alpha).  The original curves are the queries in both
    cases, so alpha = 0 reproduces sigma_0 exactly.
    """
    anomaly_params = anomaly_params or {}
    result = BenchmarkResult(value_name="kendall_distance")
    for rep in range(reps):
        batch = generate(replace(genspec, seed=derive_key(genspec.seed, rep)))
        sigma0 = Ranking(order=depth_report(batch, batch, config).ranking)
        for kind in kinds:
            for i_alpha, alpha in enumerate(alphas):
                spec = AnomalySpec(
                    kind=kind,
                    fraction=alpha,
                    seed=derive_key(genspec.seed, rep, _KIND_TAG[kind], i_alpha),
                    **anomaly_params.get(kind, {}),
                )
                contaminated, _ = inject(batch, spec)
                sigma_a = Ranking(order=depth_report(contaminated, batch, config).ranking)
                result.add(
                    "ach", kind, float(alpha), rep, kendall_tau_distance(sigma0, sigma_a)
                )
    return result


_SEVERITY_RANGE_FIELD = {
    "location_scale": "a_range",
    "isolated_peak": "b_range",
    "amplitude_scale": "e_range",
}


def detection_bench(
    genspec: GenSpec,
    kind: str,
    severities: Sequence[float],
    m: int,
    config: DepthConfig,
    reps: int = 10,
    methods: Sequence[str] = ("ach",),
) -> BenchmarkResult:
    """Detected-anomaly counts over a severity grid.

    Per severity s and repetition, m curves of a fresh batch are replaced by
    anomalies with the severity parameter pinned to s; all curves are then
    scored against the contaminated batch and the m lowest-depth curves are
    flagged.  The row value is |flagged & injected|.
    """
    if kind not in _SEVERITY_RANGE_FIELD:
        raise ValueError(
            f"kind must be one of {tuple(_SEVERITY_RANGE_FIELD)}, got {kind!r}"
        )
    for method in methods:
        if method not in ("ach", "baseline"):
            raise ValueError(f"unknown method {method!r}")
    result = BenchmarkResult(value_name="detected")
    field_name = _SEVERITY_RANGE_FIELD[kind]
    for rep in range(reps):
        batch = generate(replace(genspec, seed=derive_key(genspec.seed, rep)))
        for level in severities:
            spec = AnomalySpec(
                kind=kind,
                count=m,
                seed=derive_key(genspec.seed, rep, _KIND_TAG[kind]),
                **{field_name: (float(level), float(level))},
            )
            contaminated, labels = inject(batch, spec)
            for method in methods:
                if method == "ach":
                    scores = depth_report(contaminated, contaminated, config).scores
                else:
                    scores = np.array(
                        [integrated_baseline_depth(contaminated, c) for c in contaminated]
                    )
                flagged = np.argsort(scores, kind="stable")[:m]
                result.add(method, kind, float(level), rep, int(labels[flagged].sum()))
    return result
