"""Shared fixtures: deterministic stroke builders, vaults, keys.

The stroke builders confine every point to the inner drawing area of one
intended cell. The inner area is convex, so resampled points between two
in-area points stay in-area, which makes the produced bitmap exactly the
requested cell set, deterministically, with or without small jitter.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from suis.config import SystemConfig
from suis.envelope import load_vault_key
from suis.grid import Cell, GridSpec, RasterConfig, Stroke
from suis.vault import Vault

settings.register_profile(
    "ci", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")

TEST_KEY_HEX = "9f" * 32

# Extra inset beyond the inner margin; jitter below this stays in-area.
CELL_SLACK = 0.08


def cell_zigzag(
    col: int,
    row: int,
    spec: GridSpec,
    raster: RasterConfig,
    slack: float = CELL_SLACK,
) -> Stroke:
    """A 4-segment zigzag strictly inside one cell's inner drawing area."""
    width, height = 1.0 / spec.drawing_cols, 1.0 / spec.drawing_rows
    inset = raster.inner_margin + slack
    x_lo = (col - 1 + inset) * width
    x_hi = (col - inset) * width
    y_lo = (row - 1 + inset) * height
    y_hi = (row - inset) * height
    return Stroke.of(
        (x_lo if k % 2 == 0 else x_hi, y_lo + (y_hi - y_lo) * k / 4.0)
        for k in range(5)
    )


def strokes_for_cells(
    cells: list[Cell],
    spec: GridSpec | None = None,
    raster: RasterConfig | None = None,
) -> list[Stroke]:
    """One zigzag stroke per intended cell; rasterizes to exactly that set."""
    spec = spec or SystemConfig().grid
    raster = raster or RasterConfig()
    return [cell_zigzag(col, row, spec, raster) for col, row in cells]


def jittered(
    strokes: list[Stroke],
    rng: random.Random,
    spec: GridSpec | None = None,
    slack: float = CELL_SLACK,
) -> list[Stroke]:
    """Displace every point by less than the slack margin of a cell side."""
    spec = spec or SystemConfig().grid
    amplitude = 0.9 * slack * min(1.0 / spec.drawing_cols, 1.0 / spec.drawing_rows)
    return [
        Stroke.of(
            (
                p.x + rng.uniform(-amplitude, amplitude),
                p.y + rng.uniform(-amplitude, amplitude),
            )
            for p in stroke.points
        )
        for stroke in strokes
    ]


SIGNATURE_CELLS: list[Cell] = [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (5, 6)]
OTHER_CELLS: list[Cell] = [(7, 1), (6, 2), (5, 3), (4, 4), (3, 5)]


@pytest.fixture
def vault_key() -> bytes:
    return bytes.fromhex(TEST_KEY_HEX)


@pytest.fixture
def key_env(monkeypatch) -> str:
    monkeypatch.setenv("SUIS_VAULT_KEY", TEST_KEY_HEX)
    return TEST_KEY_HEX


@pytest.fixture
def config(tmp_path) -> SystemConfig:
    return SystemConfig().with_vault_path(tmp_path / "vault.db")


@pytest.fixture
def vault(config, vault_key) -> Vault:
    return Vault(config.vault_path, vault_key, config)


@pytest.fixture
def signature_strokes(config) -> list[Stroke]:
    return strokes_for_cells(SIGNATURE_CELLS, config.grid, config.raster)


@pytest.fixture
def key_loaded(key_env) -> bytes:
    return load_vault_key()
