"""Random sensor fields in a square or disk area, plus BS placement."""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from .errors import InvalidArgument, InvalidData


class AreaKind(str, enum.Enum):
    SQUARE = "square"
    DISK = "disk"


@dataclass(frozen=True)
class AreaGeometry:
    """Sensing area: ``[0, L]^2`` square or a disk of radius ``R0`` centred on the origin."""

    kind: AreaKind
    side_L: float | None = None
    radius_R0: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", AreaKind(self.kind))
        if self.kind is AreaKind.SQUARE:
            if self.side_L is None or not self.side_L > 0 or not math.isfinite(self.side_L):
                raise InvalidArgument(f"square side must be positive, got {self.side_L}")
            object.__setattr__(self, "radius_R0", None)
        else:
            if self.radius_R0 is None or not self.radius_R0 > 0 or not math.isfinite(self.radius_R0):
                raise InvalidArgument(f"disk radius must be positive, got {self.radius_R0}")
            object.__setattr__(self, "side_L", None)

    @classmethod
    def square(cls, side_L: float) -> "AreaGeometry":
        return cls(AreaKind.SQUARE, side_L=float(side_L))

    @classmethod
    def disk(cls, radius_R0: float) -> "AreaGeometry":
        return cls(AreaKind.DISK, radius_R0=float(radius_R0))

    @property
    def extent(self) -> float:
        """Characteristic width: L for the square, the diameter for the disk."""
        return self.side_L if self.kind is AreaKind.SQUARE else 2.0 * self.radius_R0

    def contains(self, xy: np.ndarray) -> np.ndarray:
        xy = np.asarray(xy, dtype=np.float64).reshape(-1, 2)
        if self.kind is AreaKind.SQUARE:
            return np.all((xy >= 0.0) & (xy <= self.side_L), axis=1)
        return xy[:, 0] ** 2 + xy[:, 1] ** 2 <= self.radius_R0 ** 2


@dataclass(frozen=True)
class Position:
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class Deployment:
    """Node positions (row index = node id), BS position and the seed that drew them."""

    geometry: AreaGeometry
    xy: np.ndarray = field(repr=False)
    bs: Position
    seed: int

    def __post_init__(self):
        xy = np.array(self.xy, dtype=np.float64).reshape(-1, 2)
        xy.setflags(write=False)
        object.__setattr__(self, "xy", xy)

    @property
    def n(self) -> int:
        return self.xy.shape[0]

    @property
    def bs_xy(self) -> np.ndarray:
        return np.array([self.bs.x, self.bs.y])

    @property
    def nodes(self) -> list[Position]:
        return [Position(float(x), float(y)) for x, y in self.xy]

    def __eq__(self, other):
        if not isinstance(other, Deployment):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and self.bs == other.bs
            and self.seed == other.seed
            and np.array_equal(self.xy, other.xy)
        )

    __hash__ = None


def deploy(geometry: AreaGeometry, n: int, bs_Li: float | None = None, seed: int = 0) -> Deployment:
    """Drop ``n`` nodes i.i.d. uniformly over the area.

    Square areas need ``bs_Li`` (the BS sits at ``(L_i, L/2)``, possibly outside
    the square). Disk areas put the BS at the centre and must not get ``bs_Li``.
    """
    if n is None or int(n) != n or n <= 0:
        raise InvalidArgument(f"node count must be a positive integer, got {n}")
    n = int(n)
    gen = rng.stream(seed, "deploy")
    if geometry.kind is AreaKind.SQUARE:
        if bs_Li is None:
            raise InvalidArgument("square deployments need the BS offset bs_Li")
        if not math.isfinite(bs_Li) or bs_Li < 0:
            raise InvalidArgument(f"bs_Li must be finite and >= 0, got {bs_Li}")
        L = geometry.side_L
        xy = gen.random((n, 2)) * L
        bs = Position(float(bs_Li), L / 2.0)
    else:
        if bs_Li is not None:
            raise InvalidArgument("disk deployments place the BS at the centre; bs_Li must be absent")
        u = gen.random((n, 2))
        radius = geometry.radius_R0 * np.sqrt(u[:, 0])
        theta = 2.0 * np.pi * u[:, 1]
        xy = np.column_stack((radius * np.cos(theta), radius * np.sin(theta)))
        # cos/sin rounding can push a boundary point a hair outside
        r2 = xy[:, 0] ** 2 + xy[:, 1] ** 2
        over = r2 > geometry.radius_R0 ** 2
        if over.any():
            xy[over] *= (geometry.radius_R0 / np.sqrt(r2[over]))[:, None] * (1 - 1e-15)
        bs = Position(0.0, 0.0)
    return Deployment(geometry, xy, bs, seed)


def squared_distance(a: Position, b: Position) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def to_csv(dep: Deployment) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_id", "x", "y"])
    for i, (x, y) in enumerate(dep.xy):
        w.writerow([i, repr(float(x)), repr(float(y))])
    return buf.getvalue()


def metadata(dep: Deployment) -> dict:
    """Sidecar record written into the run manifest next to the node CSV."""
    return {
        "kind": dep.geometry.kind.value,
        "side_L": dep.geometry.side_L,
        "radius_R0": dep.geometry.radius_R0,
        "bs_x": dep.bs.x,
        "bs_y": dep.bs.y,
        "seed": dep.seed,
        "n": dep.n,
    }


def from_csv(text: str | Path, meta: dict) -> Deployment:
    if isinstance(text, Path):
        text = text.read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["node_id", "x", "y"]:
        raise InvalidData("deployment CSV must start with header node_id,x,y")
    xy = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            node_id, x, y = int(row[0]), float(row[1]), float(row[2])
        except (ValueError, IndexError) as exc:
            raise InvalidData(f"line {lineno}: cannot parse {row!r}") from exc
        if node_id != len(xy):
            raise InvalidData(f"line {lineno}: node ids must be 0..N-1 in order")
        xy.append((x, y))
    if meta["kind"] == AreaKind.SQUARE.value:
        geometry = AreaGeometry.square(float(meta["side_L"]))
    else:
        geometry = AreaGeometry.disk(float(meta["radius_R0"]))
    return Deployment(geometry, np.array(xy), Position(float(meta["bs_x"]), float(meta["bs_y"])), int(meta["seed"]))
