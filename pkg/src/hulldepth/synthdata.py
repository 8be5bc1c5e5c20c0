"""Seeded synthetic curve batches and anomaly injectors.

Two generator families: geometric Brownian motion paths and small random
sinusoids a*cos(2*pi*t) + b*sin(2*pi*t).  Anomaly injectors replace a chosen
fraction of curves with level-shifted, single-knot-spiked, oscillation-added
or amplitude-scaled versions and report the boolean labels.

Everything is addressed by (seed, stream index): the same spec always yields
the same batch, bit for bit, and curve i does not depend on n.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._rng import substream
from .curves import CurveBatch, SampledCurve

__all__ = [
    "GenSpec",
    "AnomalySpec",
    "ANOMALY_KINDS",
    "gen_gbm",
    "gen_sinusoid",
    "generate",
    "inject",
    "reference_queries",
    "write_labels_csv",
    "read_labels_csv",
]

ANOMALY_KINDS = (
    "location_scale",
    "isolated_peak",
    "shape_oscillation",
    "amplitude_scale",
)
_KIND_TAG = {kind: i + 1 for i, kind in enumerate(ANOMALY_KINDS)}


@dataclass(frozen=True)
class GenSpec:
    """Synthetic batch description.

    ``kind="gbm"``: paths x0*exp((mu - sigma^2/2)t + sigma*W_t) on a uniform
    p-point grid.  ``kind="sinusoid"``: a*cos(2*pi*t) + b*sin(2*pi*t) with a
    and b independently uniform on [coef_lo, coef_hi].
    """

    kind: str
    n: int = 100
    p: int = 100
    seed: int = 0
    mu: float = 2.0
    sigma: float = math.sqrt(0.5)
    x0: float = 1.0
    coef_lo: float = 0.0
    coef_hi: float = 0.05

    def __post_init__(self):
        if self.kind not in ("gbm", "sinusoid"):
            raise ValueError(f"kind must be 'gbm' or 'sinusoid', got {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.coef_lo > self.coef_hi:
            raise ValueError("coefficient range is empty")
        if self.kind == "gbm" and self.x0 <= 0:
            raise ValueError(f"x0 must be > 0, got {self.x0}")


def gen_gbm(spec: GenSpec) -> CurveBatch:
    """Seeded geometric Brownian motion sample paths."""
    t = np.linspace(0.0, 1.0, spec.p)
    dt = np.diff(t)
    drift = (spec.mu - 0.5 * spec.sigma**2) * dt
    curves = []
    for i in range(spec.n):
        g = substream(spec.seed, i)
        z = g.standard_normal(spec.p - 1)
        log_path = np.concatenate(([0.0], np.cumsum(drift + spec.sigma * np.sqrt(dt) * z)))
        curves.append(SampledCurve(id=f"c{i}", times=t, values=spec.x0 * np.exp(log_path)))
    return CurveBatch(curves=tuple(curves))


def gen_sinusoid(spec: GenSpec) -> CurveBatch:
    """Seeded random sinusoids with uniform coefficients."""
    t = np.linspace(0.0, 1.0, spec.p)
    cos_t = np.cos(2 * np.pi * t)
    sin_t = np.sin(2 * np.pi * t)
    curves = []
    for i in range(spec.n):
        g = substream(spec.seed, i)
        a = g.uniform(spec.coef_lo, spec.coef_hi)
        b = g.uniform(spec.coef_lo, spec.coef_hi)
        curves.append(SampledCurve(id=f"c{i}", times=t, values=a * cos_t + b * sin_t))
    return CurveBatch(curves=tuple(curves))


def generate(spec: GenSpec) -> CurveBatch:
    """Dispatch on ``spec.kind``."""
    return gen_gbm(spec) if spec.kind == "gbm" else gen_sinusoid(spec)


@dataclass(frozen=True)
class AnomalySpec:
    """Which curves to replace and how.

    Exactly one of ``fraction`` (of the batch) or ``count`` selects how many
    curves are replaced.  Parameter ranges follow the injector kind:
    ``a_range`` scales levels (x + a*x), ``b_range`` is the single-knot peak
    height, ``freqs`` the oscillation frequency choices, ``e_range`` the
    amplitude multiplier.  A degenerate range (lo == hi) pins the parameter.
    """

    kind: str
    fraction: float | None = None
    count: int | None = None
    a_range: tuple = (0.0, 1.0)
    b_range: tuple = (0.03, 0.06)
    freqs: tuple = tuple(range(1, 11))
    e_range: tuple = (1.0, 2.0)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ANOMALY_KINDS:
            raise ValueError(f"kind must be one of {ANOMALY_KINDS}, got {self.kind!r}")
        if (self.fraction is None) == (self.count is None):
            raise ValueError("set exactly one of fraction or count")
        if self.fraction is not None and not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.count is not None and self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        for name in ("a_range", "b_range", "e_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {(lo, hi)}")
        if not self.freqs:
            raise ValueError("freqs must be non-empty")


def _replace(curve: SampledCurve, kind: str, g: np.random.Generator,
             spec: AnomalySpec) -> SampledCurve:
    t = curve.times
    v = curve.values
    if kind == "location_scale":
        a = g.uniform(*spec.a_range)
        new = v + a * v
    elif kind == "isolated_peak":
        k0 = int(g.integers(0, len(t)))
        b = g.uniform(*spec.b_range)
        new = v.copy()
        new[k0] = new[k0] + b
    elif kind == "shape_oscillation":
        f = int(spec.freqs[int(g.integers(0, len(spec.freqs)))])
        new = v + 0.01 * np.cos(2 * np.pi * t * f) + 0.01 * np.sin(2 * np.pi * t * f)
    else:  # amplitude_scale
        e = g.uniform(*spec.e_range)
        new = e * v
    return SampledCurve(id=curve.id, times=t, values=new)


def inject(batch: CurveBatch, spec: AnomalySpec):
    """Replace a subset of curves with anomalous versions.

    Returns (new batch, labels) where labels[i] is True for replaced curves.
    Curve ids, order and time grids are preserved.  The selection and each
    replaced curve use streams keyed by (spec.seed, kind, curve index), so
    results do not depend on batch size beyond membership.
    """
    n = len(batch)
    if spec.count is not None:
        m = spec.count
    else:
        m = int(spec.fraction * n)
    if m > n:
        raise ValueError(f"cannot inject {m} anomalies into {n} curves")
    labels = np.zeros(n, dtype=bool)
    if m == 0:
        if spec.fraction is not None and spec.fraction > 0:
            warnings.warn(
                f"fraction {spec.fraction} of n={n} selects no curves; "
                "batch returned unchanged",
                stacklevel=2,
            )
        return batch, labels
    tag = _KIND_TAG[spec.kind]
    chosen = substream(spec.seed, tag, 0).choice(n, size=m, replace=False)
    chosen.sort()
    labels[chosen] = True
    curves = list(batch.curves)
    for i in chosen:
        g = substream(spec.seed, tag, 1 + int(i))
        curves[i] = _replace(curves[i], spec.kind, g, spec)
    return CurveBatch(curves=tuple(curves)), labels


# Fixed parameters of the four reference queries.  x0 is a central curve of
# the generator family; x1..x3 apply the injector formulas to it with
# mid-range (x1, x2) and deliberately strong combined (x3) settings.
_SIN_CENTER_COEF = 0.025
_SIN_LOCATION_A = 0.5
_SIN_PEAK_B = 0.045
_SIN_PEAK_T = 0.5
_SIN_OSC_FREQ = 5
_SIN_COMBINED_SCALE = 2.0
_GBM_LOCATION_A = 0.5
_GBM_PEAK_B = 5.0
_GBM_PEAK_T = 0.5
_GBM_COMBINED_SCALE = 2.0
_GBM_OSC_AMP = 0.5


def reference_queries(kind: str = "sinusoid", p: int = 100,
                      mu: float = 2.0, sigma: float = math.sqrt(0.5),
                      x0: float = 1.0) -> CurveBatch:
    """Four deterministic query curves: one deep, three increasingly atypical.

    ``x0`` sits at the center of the generator family, ``x1`` is a level
    shift of it, ``x2`` carries a single-knot peak and ``x3`` combines a
    level shift with an added oscillation.  Expected depth ordering:
    D(x3) < D(x2) ~ D(x1) < D(x0).
    """
    t = np.linspace(0.0, 1.0, p)
    k_peak = int(np.argmin(np.abs(t - _SIN_PEAK_T)))
    if kind == "sinusoid":
        base = _SIN_CENTER_COEF * (np.cos(2 * np.pi * t) + np.sin(2 * np.pi * t))
        v1 = base + _SIN_LOCATION_A * base
        v2 = base.copy()
        v2[k_peak] += _SIN_PEAK_B
        v3 = _SIN_COMBINED_SCALE * base + 0.01 * (
            np.cos(2 * np.pi * t * _SIN_OSC_FREQ) + np.sin(2 * np.pi * t * _SIN_OSC_FREQ)
        )
    elif kind == "gbm":
        base = x0 * np.exp((mu - 0.5 * sigma**2) * t)
        v1 = base + _GBM_LOCATION_A * base
        v2 = base.copy()
        v2[k_peak] += _GBM_PEAK_B
        v3 = _GBM_COMBINED_SCALE * base + _GBM_OSC_AMP * base * (
            np.cos(2 * np.pi * t * _SIN_OSC_FREQ) + np.sin(2 * np.pi * t * _SIN_OSC_FREQ)
        )
    else:
        raise ValueError(f"kind must be 'gbm' or 'sinusoid', got {kind!r}")
    return CurveBatch(
        curves=(
            SampledCurve(id="x0", times=t, values=base),
            SampledCurve(id="x1", times=t, values=v1),
            SampledCurve(id="x2", times=t, values=v2),
            SampledCurve(id="x3", times=t, values=v3),
        )
    )


def write_labels_csv(ids: Sequence[str], labels, path) -> None:
    """Write ``curve_id,is_anomaly`` rows (1 anomalous, 0 normal)."""
    labels = np.asarray(labels, dtype=bool)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["curve_id", "is_anomaly"])
        for cid, flag in zip(ids, labels):
            writer.writerow([cid, int(flag)])


def read_labels_csv(path):
    """Read a labels CSV; returns (ids, bool array)."""
    ids = []
    flags = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["curve_id", "is_anomaly"]:
            raise ValueError(f"expected header 'curve_id,is_anomaly' in {path}")
        for row in reader:
            if not row:
                continue
            ids.append(row[0])
            flags.append(row[1].strip().lower() in ("1", "true"))
    return ids, np.array(flags, dtype=bool)
