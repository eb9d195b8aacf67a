"""Sensor readings: smooth synthetic fields, CSV traces, additive noise."""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng
from .deployment import AreaGeometry, AreaKind, Deployment
from .errors import InvalidArgument, InvalidData, NotFound


class FieldKind(str, enum.Enum):
    GAUSSIAN_BUMPS = "gaussian_bumps"
    LOW_FREQ_FOURIER = "low_freq_fourier"


@dataclass(frozen=True)
class FieldModel:
    """Parameters of a synthetic scalar field.

    Gaussian bumps are drawn from ``seed`` (centres uniform over the area,
    widths ``width_frac * extent`` jittered by +/-25%, amplitudes uniform in
    ``[amp_min, amp_max]``) unless ``centers``/``amplitudes``/``widths`` are
    given explicitly. The Fourier field is ``offset`` plus a cosine series up to
    ``cutoff`` in each axis with random phases and ``1/(1+a+b)`` amplitude decay.
    """

    kind: FieldKind = FieldKind.GAUSSIAN_BUMPS
    seed: int = 0
    n_bumps: int = 5
    width_frac: float = 0.25
    amp_min: float = 10.0
    amp_max: float = 30.0
    centers: tuple | None = None
    amplitudes: tuple | None = None
    widths: tuple | None = None
    cutoff: int = 3
    amplitude: float = 10.0
    offset: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if self.centers is not None:
            pts = np.asarray(self.centers, dtype=np.float64).reshape(-1, 2)
            object.__setattr__(self, "centers", tuple(tuple(p) for p in pts.tolist()))
        for name in ("amplitudes", "widths"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, tuple(float(v) for v in np.ravel(getattr(self, name))))
        if self.n_bumps < 0 or self.cutoff < 0:
            raise InvalidArgument("n_bumps and cutoff must be non-negative")

    def bumps(self, geometry: AreaGeometry):
        """(centers (m, 2), amplitudes (m,), widths (m,)) for this model and area."""
        if self.centers is not None:
            c = np.asarray(self.centers, dtype=np.float64).reshape(-1, 2)
            a = np.asarray(self.amplitudes, dtype=np.float64).ravel()
            w = np.asarray(self.widths, dtype=np.float64).ravel()
            if not (c.shape[0] == a.size == w.size) or np.any(w <= 0):
                raise InvalidArgument("explicit bumps need matching centers/amplitudes/positive widths")
            return c, a, w
        gen = rng.stream(self.seed, "field-bumps")
        m = self.n_bumps
        u = gen.random((m, 2))
        if geometry.kind is AreaKind.SQUARE:
            c = u * geometry.side_L
        else:
            r = geometry.radius_R0 * np.sqrt(u[:, 0])
            t = 2 * np.pi * u[:, 1]
            c = np.column_stack((r * np.cos(t), r * np.sin(t)))
        a = gen.uniform(self.amp_min, self.amp_max, m)
        w = self.width_frac * geometry.extent * gen.uniform(0.75, 1.25, m)
        return c, a, w


def _bounding_box(geometry: AreaGeometry):
    if geometry.kind is AreaKind.SQUARE:
        return 0.0, geometry.side_L
    return -geometry.radius_R0, geometry.radius_R0


def evaluate_field(model: FieldModel, geometry: AreaGeometry, xy) -> np.ndarray:
    xy = np.asarray(xy, dtype=np.float64).reshape(-1, 2)
    if model.kind is FieldKind.GAUSSIAN_BUMPS:
        c, a, w = model.bumps(geometry)
        out = np.zeros(xy.shape[0])
        for (cx, cy), amp, width in zip(c, a, w):
            d2 = (xy[:, 0] - cx) ** 2 + (xy[:, 1] - cy) ** 2
            out += amp * np.exp(-d2 / (2 * width * width))
        return out
    lo, hi = _bounding_box(geometry)
    u = (xy - lo) / (hi - lo)
    gen = rng.stream(model.seed, "field-fourier")
    n = model.cutoff + 1
    phase = gen.uniform(0, 2 * np.pi, (n, n, 2))
    coef = gen.standard_normal((n, n))
    out = np.full(xy.shape[0], float(model.offset))
    for a in range(n):
        for b in range(n):
            if a == 0 and b == 0:
                continue
            amp = model.amplitude * coef[a, b] / (1 + a + b)
            out += amp * np.cos(np.pi * a * u[:, 0] + phase[a, b, 0]) * np.cos(np.pi * b * u[:, 1] + phase[a, b, 1])
    return out


def sample_field(model: FieldModel, dep: Deployment) -> np.ndarray:
    """Reading of every node, indexed by node id."""
    return evaluate_field(model, dep.geometry, dep.xy)


def load_trace_csv(path, epoch: int) -> tuple[np.ndarray, np.ndarray]:
    """Readings at ``epoch`` from a ``node_id,epoch,value`` CSV, sorted by node id."""
    path = Path(path)
    found: dict[int, float] = {}
    seen: set[tuple[int, int]] = set()
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and [h.strip() for h in header] != ["node_id", "epoch", "value"]:
            raise InvalidData(f"{path}: line 1: expected header node_id,epoch,value, got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                node, ep = int(row[0]), int(row[1])
                value = float(row[2])
            except (ValueError, IndexError) as exc:
                raise InvalidData(f"{path}: line {lineno}: cannot parse {row!r}") from exc
            if not math.isfinite(value):
                raise InvalidData(f"{path}: line {lineno}: non-finite value")
            if (node, ep) in seen:
                raise InvalidData(f"{path}: line {lineno}: duplicate reading for node {node} at epoch {ep}")
            seen.add((node, ep))
            if ep == epoch:
                found[node] = value
    if not found:
        raise NotFound(f"{path}: no readings for epoch {epoch}")
    ids = np.array(sorted(found), dtype=np.int64)
    return ids, np.array([found[i] for i in ids.tolist()])


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InvalidArgument(f"sigma must be >= 0, got {self.sigma}")


def add_noise(values, spec: NoiseSpec) -> np.ndarray:
    """``values + sigma * z`` with z i.i.d. standard normal drawn from ``spec.seed``."""
    values = np.asarray(values, dtype=np.float64)
    if spec.sigma == 0:
        return values.copy()
    z = rng.stream(spec.seed, "noise").standard_normal(values.shape)
    return values + spec.sigma * z
