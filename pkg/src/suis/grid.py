"""Stroke geometry and drawing-grid digitization.

A signature arrives as polylines of normalized points (unit square, any
input device). Digitization resamples each polyline segment, counts how
many samples land inside each cell's inner drawing area, and marks a cell
active once the count reaches a threshold. The result is a cell bitmap:
one bit per drawing-grid cell, compared later purely as a set of active
cells, never as a sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError

Cell = tuple[int, int]  # (col, row), 1-based

# Defaults chosen so a cell merely grazed by a stroke stays 0 while a cell
# the stroke dwells in comfortably exceeds the threshold.
DEFAULT_INNER_MARGIN = 0.1
DEFAULT_SAMPLE_THRESHOLD = 4
DEFAULT_INTERPOLATION_STEP = 0.25

# Standard drawing-grid sizes; larger grids work but are flagged non-standard.
STANDARD_MIN_SIDE = 5
STANDARD_MAX_SIDE = 7


@dataclass(frozen=True)
class Point:
    """A normalized pointer sample; both coordinates must lie in [0, 1]."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InputError(f"point ({self.x}, {self.y}) outside the unit square")


@dataclass(frozen=True)
class Stroke:
    """One pen-down..pen-up polyline. Order is kept but never matched on."""

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise InputError("a stroke needs at least two points")

    @classmethod
    def of(cls, coords: Iterable[tuple[float, float]]) -> "Stroke":
        return cls(tuple(Point(x, y) for x, y in coords))


@dataclass(frozen=True)
class GridSpec:
    """Drawing-grid dimensions plus the extended grid that stores metadata."""

    drawing_cols: int
    drawing_rows: int
    extended_cols: int
    extended_rows: int

    def __post_init__(self) -> None:
        for name in ("drawing_cols", "drawing_rows", "extended_cols", "extended_rows"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.extended_cols < self.drawing_cols or self.extended_rows < self.drawing_rows:
            raise InputError("extended grid must contain the drawing grid")
        if self.extras_count < 1:
            raise InputError("extended grid must add at least one extra cell")

    @property
    def drawing_cells(self) -> int:
        return self.drawing_cols * self.drawing_rows

    @property
    def extended_cells(self) -> int:
        return self.extended_cols * self.extended_rows

    @property
    def extras_count(self) -> int:
        return self.extended_cells - self.drawing_cells

    @property
    def is_standard_drawing_size(self) -> bool:
        return (
            STANDARD_MIN_SIDE <= self.drawing_cols <= STANDARD_MAX_SIDE
            and STANDARD_MIN_SIDE <= self.drawing_rows <= STANDARD_MAX_SIDE
        )

    def in_drawing_region(self, col: int, row: int) -> bool:
        return 1 <= col <= self.drawing_cols and 1 <= row <= self.drawing_rows


@dataclass(frozen=True)
class RasterConfig:
    """Digitization tuning: inner drawing area, resample density, threshold."""

    inner_margin: float = DEFAULT_INNER_MARGIN
    sample_threshold: int = DEFAULT_SAMPLE_THRESHOLD
    interpolation_step: float = DEFAULT_INTERPOLATION_STEP

    def __post_init__(self) -> None:
        if not (0.0 <= self.inner_margin < 0.5):
            raise InputError("inner_margin must be in [0, 0.5)")
        if self.sample_threshold < 1:
            raise InputError("sample_threshold must be >= 1")
        if not (0.0 < self.interpolation_step <= 1.0):
            raise InputError("interpolation_step must be in (0, 1]")


@dataclass(frozen=True)
class CellBitmap:
    """Digitized drawing grid: one bit per cell, row-major."""

    cols: int
    rows: int
    bits: tuple[int, ...]
    _active: frozenset[Cell] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.bits) != self.cols * self.rows:
            raise InputError("bitmap length must equal cols*rows")
        if any(b not in (0, 1) for b in self.bits):
            raise InputError("bitmap values must be 0 or 1")
        active = frozenset(
            (i % self.cols + 1, i // self.cols + 1)
            for i, bit in enumerate(self.bits)
            if bit
        )
        object.__setattr__(self, "_active", active)

    @classmethod
    def from_active_cells(cls, cols: int, rows: int, cells: Iterable[Cell]) -> "CellBitmap":
        wanted = set(cells)
        for col, row in wanted:
            if not (1 <= col <= cols and 1 <= row <= rows):
                raise InputError(f"cell ({col}, {row}) outside a {cols}x{rows} grid")
        bits = tuple(
            1 if (i % cols + 1, i // cols + 1) in wanted else 0
            for i in range(cols * rows)
        )
        return cls(cols, rows, bits)

    def active_cells(self) -> frozenset[Cell]:
        """The set of (col, row) cells holding a 1."""
        return self._active

    def bit_at(self, col: int, row: int) -> int:
        if not (1 <= col <= self.cols and 1 <= row <= self.rows):
            raise InputError(f"cell ({col}, {row}) outside a {self.cols}x{self.rows} grid")
        return self.bits[(row - 1) * self.cols + (col - 1)]


def cell_of_point(p: Point, spec: GridSpec, cfg: RasterConfig) -> tuple[Cell, bool]:
    """Locate a point on the drawing grid.

    Returns the 1-based (col, row) cell and whether the point falls strictly
    inside the cell's inner drawing area (the cell rectangle shrunk by
    ``inner_margin`` of its width/height on every side). Points exactly on a
    shared gridline belong to the higher-index cell; they are never inside a
    drawing area, so the tie-break cannot influence matching.
    """
    cols, rows = spec.drawing_cols, spec.drawing_rows
    col = min(int(math.floor(p.x * cols)) + 1, cols)
    row = min(int(math.floor(p.y * rows)) + 1, rows)
    # Local position within the cell, in [0, 1] per axis.
    lx = p.x * cols - (col - 1)
    ly = p.y * rows - (row - 1)
    m = cfg.inner_margin
    inside = m < lx < 1.0 - m and m < ly < 1.0 - m
    return (col, row), inside


def _segment_samples(a: Point, b: Point, spec: GridSpec, cfg: RasterConfig) -> Iterable[Point]:
    """Resample one segment so consecutive samples advance by at most
    ``interpolation_step`` of a cell along either axis. Both endpoints are
    included; the sample set is symmetric under segment reversal."""
    span_cells = max(
        abs(b.x - a.x) * spec.drawing_cols,
        abs(b.y - a.y) * spec.drawing_rows,
    )
    pieces = max(1, math.ceil(span_cells / cfg.interpolation_step))
    for i in range(pieces + 1):
        t = i / pieces
        yield Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def rasterize(strokes: Sequence[Stroke], spec: GridSpec, cfg: RasterConfig) -> CellBitmap:
    """Digitize strokes into a drawing-grid bitmap.

    Pure function of its inputs: stroke order, point order within a stroke,
    and input-device resolution do not change the result. A cell becomes 1
    only when at least ``sample_threshold`` resampled points land inside its
    inner drawing area, so a cell the signature merely grazes stays 0.
    """
    if not strokes:
        raise InputError("at least one stroke is required")
    counts: dict[Cell, int] = {}
    for stroke in strokes:
        pts = stroke.points
        for a, b in zip(pts, pts[1:]):
            for sample in _segment_samples(a, b, spec, cfg):
                cell, inside = cell_of_point(sample, spec, cfg)
                if inside:
                    counts[cell] = counts.get(cell, 0) + 1
    active = {cell for cell, n in counts.items() if n >= cfg.sample_threshold}
    return CellBitmap.from_active_cells(spec.drawing_cols, spec.drawing_rows, active)


def active_cells(bitmap: CellBitmap) -> frozenset[Cell]:
    """Set of active (col, row) cells of a bitmap."""
    return bitmap.active_cells()


def cell_center(col: int, row: int, spec: GridSpec) -> tuple[float, float]:
    """Normalized coordinates of a drawing-grid cell's center."""
    return ((col - 0.5) / spec.drawing_cols, (row - 0.5) / spec.drawing_rows)
