"""Extended-grid encoding: color shift, metadata slots, storing techniques.

An encoded record is the drawing bitmap embedded in the extended grid plus
two metadata bits: one of 2N color slots (the palette index shifted by
ceil(N/t), so the persisted value differs from the displayed color) and one
of T technique slots naming the serialization in use. Extras are the
extended-grid cells outside the drawing region, enumerated in reading order
(row-major, drawing cells skipped); that enumeration is normative for the
on-disk layouts.

Four invertible storing techniques serialize the matrix, one picked at
random per store so the at-rest layout differs between saves:

  1. row-major bits
  2. row-major bits, each row reversed right-to-left
  3. the extras bits first, then the drawing bits column-major
  4. sparse list of the coordinates of every 1-cell
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError, InputError, MalformedRecordError
from .grid import Cell, CellBitmap, GridSpec

TECHNIQUE_COUNT = 4

_SYSTEM_RNG = random.SystemRandom()


@dataclass(frozen=True)
class PaletteColor:
    color_id: int
    name: str
    value: str  # render value, e.g. "#2e7d32"


@dataclass(frozen=True)
class ColorPalette:
    """Drawing colors, numbered 1..N with no gaps."""

    colors: tuple[PaletteColor, ...]

    def __post_init__(self) -> None:
        ids = [c.color_id for c in self.colors]
        if ids != list(range(1, len(ids) + 1)):
            raise ConfigError("palette ids must be exactly 1..N")

    @property
    def size(self) -> int:
        return len(self.colors)

    def require_id(self, color_id: int) -> int:
        if not (1 <= color_id <= self.size):
            raise InputError(f"color_id {color_id} outside palette 1..{self.size}")
        return color_id


def validate_technique(technique: int, technique_count: int = TECHNIQUE_COUNT) -> int:
    if technique_count < 1:
        raise ConfigError("at least one storing technique is required")
    if not (1 <= technique <= technique_count):
        raise InputError(f"technique {technique} outside 1..{technique_count}")
    return technique


def pick_technique(technique_count: int, rng: random.Random | None = None) -> int:
    """Uniformly pick a storing technique id in 1..technique_count.

    The default source is os.urandom-backed; a failing source raises, it is
    never replaced by a fixed technique.
    """
    if technique_count < 1:
        raise ConfigError("at least one storing technique is required")
    source = _SYSTEM_RNG if rng is None else rng
    return source.randint(1, technique_count)


def color_offset(palette_size: int, technique: int) -> int:
    """The shift applied to a palette index before storing: ceil(N/t)."""
    if technique < 1:
        raise InputError("technique must be >= 1")
    if palette_size < technique:
        raise InputError(
            f"palette size {palette_size} must be >= technique {technique}"
        )
    return math.ceil(palette_size / technique)


def encode_color(color_id: int, palette_size: int, technique: int) -> int:
    """Stored color value for a selected palette color, in 1..2N.

    The selected index is shifted by ceil(N/t); values past 2N wrap around so
    the result always addresses one of the 2N color slots.
    """
    if not (1 <= color_id <= palette_size):
        raise InputError(f"color_id {color_id} outside palette 1..{palette_size}")
    offset = color_offset(palette_size, technique)
    return (color_id - 1 + offset) % (2 * palette_size) + 1


def decode_color(stored_value: int, palette_size: int, technique: int) -> int:
    """Invert encode_color; rejects stored values no palette color maps to."""
    if not (1 <= stored_value <= 2 * palette_size):
        raise MalformedRecordError(f"stored color value {stored_value} out of range")
    offset = color_offset(palette_size, technique)
    color_id = (stored_value - 1 - offset) % (2 * palette_size) + 1
    if color_id > palette_size:
        raise MalformedRecordError(
            f"stored color value {stored_value} does not decode to a palette color"
        )
    return color_id


@dataclass(frozen=True)
class ExtrasLayout:
    """Where each metadata slot lives in the extended grid.

    Slot positions are fixed by the extras enumeration: color slot v is the
    v-th extra, technique slot t the (2N+t)-th; everything after is padding
    pinned to 0.
    """

    spec: GridSpec
    color_slots: tuple[Cell, ...]
    technique_slots: tuple[Cell, ...]
    padding: tuple[Cell, ...]

    def color_slot(self, stored_value: int) -> Cell:
        if not (1 <= stored_value <= len(self.color_slots)):
            raise InputError(f"stored color value {stored_value} has no slot")
        return self.color_slots[stored_value - 1]

    def technique_slot(self, technique: int) -> Cell:
        if not (1 <= technique <= len(self.technique_slots)):
            raise InputError(f"technique {technique} has no slot")
        return self.technique_slots[technique - 1]


def extras_in_reading_order(spec: GridSpec) -> tuple[Cell, ...]:
    """Extended-grid cells outside the drawing region, row-major."""
    return tuple(
        (col, row)
        for row in range(1, spec.extended_rows + 1)
        for col in range(1, spec.extended_cols + 1)
        if not spec.in_drawing_region(col, row)
    )


def extras_layout(spec: GridSpec, palette_size: int, technique_count: int) -> ExtrasLayout:
    """Assign color, technique, and padding slots to the extras cells."""
    extras = extras_in_reading_order(spec)
    needed = 2 * palette_size + technique_count
    if len(extras) < needed:
        raise ConfigError(
            f"extended grid provides {len(extras)} extras but "
            f"2*{palette_size}+{technique_count}={needed} are required"
        )
    color_slots = extras[: 2 * palette_size]
    technique_slots = extras[2 * palette_size : needed]
    padding = extras[needed:]
    return ExtrasLayout(spec, color_slots, technique_slots, padding)


@dataclass(frozen=True)
class ExtendedMatrix:
    """The full stored form: drawing bits plus metadata bits, row-major."""

    spec: GridSpec
    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.cells) != self.spec.extended_cells:
            raise InputError("cell count must match the extended grid")
        if any(v not in (0, 1) for v in self.cells):
            raise InputError("matrix values must be 0 or 1")

    def value_at(self, col: int, row: int) -> int:
        if not (1 <= col <= self.spec.extended_cols and 1 <= row <= self.spec.extended_rows):
            raise InputError(f"cell ({col}, {row}) outside the extended grid")
        return self.cells[(row - 1) * self.spec.extended_cols + (col - 1)]

    def drawing_bitmap(self) -> CellBitmap:
        bits = tuple(
            self.value_at(col, row)
            for row in range(1, self.spec.drawing_rows + 1)
            for col in range(1, self.spec.drawing_cols + 1)
        )
        return CellBitmap(self.spec.drawing_cols, self.spec.drawing_rows, bits)

    def extras_values(self) -> tuple[int, ...]:
        """Extras-region bits in reading order."""
        return tuple(self.value_at(c, r) for c, r in extras_in_reading_order(self.spec))

    def active_extended_cells(self) -> tuple[Cell, ...]:
        """All 1-cells of the extended grid, reading order."""
        cols = self.spec.extended_cols
        return tuple(
            (i % cols + 1, i // cols + 1) for i, v in enumerate(self.cells) if v
        )


@dataclass(frozen=True)
class DecodedRecord:
    bitmap: CellBitmap
    stored_color: int
    technique: int


@dataclass(frozen=True)
class EncodedSignature:
    technique: int
    payload: bytes


def place_record(
    bitmap: CellBitmap,
    stored_color: int,
    technique: int,
    layout: ExtrasLayout,
) -> ExtendedMatrix:
    """Embed a drawing bitmap and raw metadata values into the extended grid."""
    spec = layout.spec
    if bitmap.cols != spec.drawing_cols or bitmap.rows != spec.drawing_rows:
        raise InputError("bitmap dimensions do not match the grid spec")
    ones = {layout.color_slot(stored_color), layout.technique_slot(technique)}
    cells = []
    for row in range(1, spec.extended_rows + 1):
        for col in range(1, spec.extended_cols + 1):
            if spec.in_drawing_region(col, row):
                cells.append(bitmap.bit_at(col, row))
            else:
                cells.append(1 if (col, row) in ones else 0)
    return ExtendedMatrix(spec, tuple(cells))


def encode_record(
    bitmap: CellBitmap,
    color_id: int,
    technique: int,
    layout: ExtrasLayout,
    palette: ColorPalette,
    technique_count: int,
) -> ExtendedMatrix:
    """Build the stored matrix for a drawing and a user-selected color."""
    palette.require_id(color_id)
    validate_technique(technique, technique_count)
    stored = encode_color(color_id, palette.size, technique)
    return place_record(bitmap, stored, technique, layout)


def decode_record(matrix: ExtendedMatrix, layout: ExtrasLayout) -> DecodedRecord:
    """Read back the drawing bitmap and metadata; enforces slot exclusivity."""
    color_hits = [
        v + 1 for v, cell in enumerate(layout.color_slots) if matrix.value_at(*cell)
    ]
    technique_hits = [
        t + 1 for t, cell in enumerate(layout.technique_slots) if matrix.value_at(*cell)
    ]
    if len(color_hits) != 1:
        raise MalformedRecordError(f"expected exactly one color slot, found {len(color_hits)}")
    if len(technique_hits) != 1:
        raise MalformedRecordError(
            f"expected exactly one technique slot, found {len(technique_hits)}"
        )
    dirty = [cell for cell in layout.padding if matrix.value_at(*cell)]
    if dirty:
        raise MalformedRecordError(f"padding cells {dirty} are nonzero")
    return DecodedRecord(matrix.drawing_bitmap(), color_hits[0], technique_hits[0])


# --- serialization -----------------------------------------------------------

def _pack_bits(bits: Sequence[int]) -> bytes:
    """MSB-first bit packing, final byte zero-padded."""
    out = bytearray((len(bits) + 7) // 8)
    for i, bit in enumerate(bits):
        if bit:
            out[i // 8] |= 0x80 >> (i % 8)
    return bytes(out)


def _unpack_bits(payload: bytes, count: int) -> tuple[int, ...]:
    expected = (count + 7) // 8
    if len(payload) != expected:
        raise MalformedRecordError(
            f"payload is {len(payload)} bytes, expected {expected}"
        )
    bits = tuple(
        (payload[i // 8] >> (7 - i % 8)) & 1 for i in range(len(payload) * 8)
    )
    if any(bits[count:]):
        raise MalformedRecordError("nonzero padding bits in final byte")
    return bits[:count]


def _bit_order(technique: int, spec: GridSpec) -> tuple[int, ...]:
    """Row-major cell indices in the order technique 1..3 emits them."""
    cols, rows = spec.extended_cols, spec.extended_rows
    if technique == 1:
        return tuple(range(cols * rows))
    if technique == 2:
        return tuple(
            row * cols + (cols - 1 - col)
            for row in range(rows)
            for col in range(cols)
        )
    if technique == 3:
        extras = [
            (row - 1) * cols + (col - 1) for col, row in extras_in_reading_order(spec)
        ]
        drawing = [
            (row - 1) * cols + (col - 1)
            for col in range(1, spec.drawing_cols + 1)
            for row in range(1, spec.drawing_rows + 1)
        ]
        return tuple(extras + drawing)
    raise InputError(f"technique {technique} has no bit order")


def serialize(matrix: ExtendedMatrix, technique: int) -> bytes:
    """Serialize a matrix under one storing technique; injective per spec."""
    spec = matrix.spec
    if technique in (1, 2, 3):
        order = _bit_order(technique, spec)
        return _pack_bits([matrix.cells[i] for i in order])
    if technique == 4:
        if spec.extended_cols > 255 or spec.extended_rows > 255:
            raise ConfigError("sparse technique needs grid sides <= 255")
        ones = matrix.active_extended_cells()
        if len(ones) > 0xFFFF:
            raise ConfigError("sparse technique supports at most 65535 active cells")
        out = bytearray(len(ones).to_bytes(2, "big"))
        for col, row in ones:
            out.append(col)
            out.append(row)
        return bytes(out)
    raise InputError(f"unknown storing technique {technique}")


def deserialize(payload: bytes, technique: int, spec: GridSpec) -> ExtendedMatrix:
    """Exact inverse of serialize; malformed payloads signal corruption."""
    total = spec.extended_cells
    if technique in (1, 2, 3):
        stream = _unpack_bits(payload, total)
        order = _bit_order(technique, spec)
        cells = [0] * total
        for value, index in zip(stream, order):
            cells[index] = value
        return ExtendedMatrix(spec, tuple(cells))
    if technique == 4:
        if len(payload) < 2:
            raise MalformedRecordError("sparse payload shorter than its count field")
        count = int.from_bytes(payload[:2], "big")
        body = payload[2:]
        if len(body) != 2 * count:
            raise MalformedRecordError(
                f"sparse payload lists {count} cells but carries {len(body)} bytes"
            )
        cells = [0] * total
        previous = -1
        for i in range(count):
            col, row = body[2 * i], body[2 * i + 1]
            if not (1 <= col <= spec.extended_cols and 1 <= row <= spec.extended_rows):
                raise MalformedRecordError(f"coordinate ({col}, {row}) outside the grid")
            index = (row - 1) * spec.extended_cols + (col - 1)
            if index <= previous:
                raise MalformedRecordError("sparse coordinates not in reading order")
            previous = index
            cells[index] = 1
        return ExtendedMatrix(spec, tuple(cells))
    raise InputError(f"unknown storing technique {technique}")
