"""Condition reports: per-scale values, a fitted log2 trend and a verdict."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

GROWTH_THRESHOLD = 0.05


@dataclass
class Trend:
    slope: float
    residual: float
    n_points: int


def fit_log2_slope(xs: Sequence[float], values: Sequence[float]) -> Trend:
    """Least-squares slope of ``log2(value)`` against ``x``.

    Zero values carry no trend information and are dropped; an infinite
    value makes the slope infinite.
    """
    if any(math.isinf(v) for v in values):
        return Trend(math.inf, 0.0, len(values))
    pts = [(float(x), math.log2(v)) for x, v in zip(xs, values) if v > 0]
    if len(pts) < 2:
        return Trend(0.0, 0.0, len(pts))
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.ptp(x) == 0:
        return Trend(0.0, 0.0, len(pts))
    slope, icpt = np.polyfit(x, y, 1)
    res = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return Trend(float(slope), res, len(pts))


@dataclass
class ConditionReport:
    """Finite-range evidence about one boundedness functional.

    ``ladder`` is the scale index (``log2 1/δ``, ``j``, truncation depth ...)
    that ``values`` are reported against; the slope is ``d log2(value) / d ladder``
    so a positive slope means growth towards finer scales.
    """

    functional: str
    params: dict[str, Any]
    ladder: list[float]
    values: list[float]
    ladder_name: str = "log2(1/delta)"
    threshold: float = GROWTH_THRESHOLD
    flags: list[bool] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)
    forced_verdict: str | None = None
    fit_from: int = 0

    def __post_init__(self):
        # rungs flagged as below the set's resolution do not enter the fit;
        # partial-sum ladders fit only their tail (fit_from) so that a slowly
        # converging series is not mistaken for growth
        keep = [i for i in range(len(self.values)) if not (self.flags and self.flags[i])]
        if self.fit_from:
            tail = keep[min(self.fit_from, max(len(keep) - 2, 0)):]
            keep = tail
        self.trend = fit_log2_slope([self.ladder[i] for i in keep], [self.values[i] for i in keep])

    @property
    def sup(self) -> float:
        return max(self.values, default=0.0)

    @property
    def slope(self) -> float:
        return self.trend.slope

    @property
    def residual(self) -> float:
        return self.trend.residual

    @property
    def verdict(self) -> str:
        if self.forced_verdict is not None:
            return self.forced_verdict
        if self.slope > self.threshold:
            return f"growth({self.slope:.3g})"
        return "bounded-evidence"

    @property
    def bounded(self) -> bool:
        return self.verdict == "bounded-evidence"

    def to_dict(self) -> dict:
        return {
            "functional": self.functional,
            "params": _jsonable(self.params),
            "grid": [_num(x) for x in self.ladder],
            "ladder": self.ladder_name,
            "values": [_num(v) for v in self.values],
            "sup": _num(self.sup),
            "slope": _num(self.slope),
            "residual": _num(self.residual),
            "verdict": self.verdict,
            "fit_from": self.fit_from,
            "flags": list(self.flags),
            "extra": _jsonable(self.extra),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["functional", self.ladder_name, "value", "below_resolution"])
        flags = self.flags or [False] * len(self.values)
        for x, v, fl in zip(self.ladder, self.values, flags):
            w.writerow([self.functional, fmt(x), fmt(v), int(fl)])
        return buf.getvalue()


def fmt(x) -> str:
    """Stable text form for CSV cells."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    if hasattr(obj, "__dataclass_fields__"):
        return _jsonable(asdict(obj))
    if isinstance(obj, np.generic):
        return _num(obj.item())
    return str(obj)


jsonable = _jsonable
