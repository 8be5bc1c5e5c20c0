"""Sampled curves on [0, 1]: data model, linear interpolation, CSV round trip.

A curve is a function observed at finitely many strictly increasing time
points; between observations it is reconstructed by linear interpolation, so
its graph is a polyline fully determined by the knots.  Curves in a batch may
each carry their own time grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "SampledCurve",
    "CurveBatch",
    "MeshStats",
    "ExtrapolationError",
    "CsvFormatError",
    "evaluate_linear",
    "graph_vertices",
    "mesh_stats",
    "read_csv",
    "write_csv",
]


class ExtrapolationError(ValueError):
    """Raised when a curve is evaluated outside its observed time span."""


class CsvFormatError(ValueError):
    """Raised on malformed curve CSV input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _as_readonly(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.base is None and out is not a:
        out.flags.writeable = False
    else:
        out = out.copy()
        out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SampledCurve:
    """One curve observed at strictly increasing times in [0, 1].

    Parameters
    ----------
    id : str
        Label, unique within a batch.
    times : array-like of float
        Strictly increasing, at least 2 entries, all within [0, 1].
    values : array-like of float
        Observations at `times`; must be finite.
    """

    id: str
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = _as_readonly(self.times)
        values = _as_readonly(self.values)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or values.ndim != 1:
            raise ValueError(f"curve {self.id!r}: times and values must be 1-D")
        if len(times) != len(values):
            raise ValueError(
                f"curve {self.id!r}: {len(times)} times but {len(values)} values"
            )
        if len(times) < 2:
            raise ValueError(f"curve {self.id!r}: needs at least 2 knots")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise ValueError(f"curve {self.id!r}: non-finite entries")
        if np.any(np.diff(times) <= 0):
            raise ValueError(f"curve {self.id!r}: times must be strictly increasing")
        if times[0] < 0.0 or times[-1] > 1.0:
            raise ValueError(f"curve {self.id!r}: times must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class CurveBatch:
    """Ordered, non-empty collection of curves with unique ids."""

    curves: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        if not self.curves:
            raise ValueError("batch must contain at least one curve")
        ids = [c.id for c in self.curves]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate curve ids: {dupes}")

    @property
    def ids(self) -> list:
        return [c.id for c in self.curves]

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self) -> Iterator[SampledCurve]:
        return iter(self.curves)

    def __getitem__(self, i: int) -> SampledCurve:
        return self.curves[i]


@dataclass(frozen=True)
class MeshStats:
    """Largest gap between consecutive knots across a batch."""

    delta: float


def evaluate_linear(curve: SampledCurve, t: float) -> float:
    """Value of the piecewise-linear interpolant of `curve` at time t.

    Exact at knots.  Raises ExtrapolationError outside the observed span;
    the interpolant is never silently extended by a constant.
    """
    if t < curve.times[0] or t > curve.times[-1]:
        raise ExtrapolationError(
            f"t={t} outside observed span [{curve.times[0]}, {curve.times[-1]}] "
            f"of curve {curve.id!r}"
        )
    return float(np.interp(t, curve.times, curve.values))


def graph_vertices(curve: SampledCurve) -> np.ndarray:
    """Knot points (t_k, x(t_k)) as an (p, 2) array.

    For a piecewise-linear curve these vertices generate the same convex hull
    as the full graph, so hull computations never need to resample.
    """
    return np.column_stack((curve.times, curve.values))


def mesh_stats(batch: CurveBatch) -> MeshStats:
    """Maximum consecutive-knot gap over all curves of the batch."""
    delta = max(float(np.max(np.diff(c.times))) for c in batch)
    return MeshStats(delta=delta)


_HEADER = ["curve_id", "t", "value"]


def read_csv(path, rescale: bool = False) -> CurveBatch:
    """Read a long-format curve CSV (header ``curve_id,t,value``).

    Rows must be grouped by curve_id with t ascending within each group.
    With ``rescale=True`` the global time interval is affinely mapped onto
    [0, 1]; otherwise times must already lie there.

    Raises
    ------
    CsvFormatError
        On ragged rows, non-numeric fields, duplicated/mis-ordered times or
        non-contiguous groups; the message carries a 1-based line number.
    OSError
        If the file cannot be read.
    """
    order: list = []
    rows: dict = {}
    closed: set = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file", line=1) from None
        if [h.strip() for h in header] != _HEADER:
            raise CsvFormatError(
                f"expected header {','.join(_HEADER)!r}, got {','.join(header)!r}",
                line=1,
            )
        prev_id = None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CsvFormatError(f"expected 3 fields, got {len(row)}", line=lineno)
            cid = row[0]
            try:
                t = float(row[1])
                v = float(row[2])
            except ValueError:
                raise CsvFormatError(
                    f"non-numeric field in row {row!r}", line=lineno
                ) from None
            if cid != prev_id:
                if cid in closed:
                    raise CsvFormatError(
                        f"rows for curve {cid!r} are not contiguous", line=lineno
                    )
                if prev_id is not None:
                    closed.add(prev_id)
                if cid not in rows:
                    order.append(cid)
                    rows[cid] = ([], [])
                prev_id = cid
            ts, vs = rows[cid]
            if ts and t <= ts[-1]:
                raise CsvFormatError(
                    f"times out of order for curve {cid!r} "
                    f"({t} after {ts[-1]})",
                    line=lineno,
                )
            ts.append(t)
            vs.append(v)
    if not order:
        raise CsvFormatError("no data rows", line=2)
    if rescale:
        t_lo = min(rows[c][0][0] for c in order)
        t_hi = max(rows[c][0][-1] for c in order)
        if t_hi <= t_lo:
            raise CsvFormatError(
                f"cannot rescale degenerate time interval [{t_lo}, {t_hi}]"
            )
        span = t_hi - t_lo
        for c in order:
            ts, _ = rows[c]
            rows[c] = ([(t - t_lo) / span for t in ts], rows[c][1])
    curves = [
        SampledCurve(id=c, times=np.array(rows[c][0]), values=np.array(rows[c][1]))
        for c in order
    ]
    return CurveBatch(curves=tuple(curves))


def write_csv(batch: CurveBatch, path) -> None:
    """Write a batch in the long CSV format; ``read_csv`` round-trips it bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for c in batch:
            for t, v in zip(c.times, c.values):
                writer.writerow([c.id, repr(float(t)), repr(float(v))])
