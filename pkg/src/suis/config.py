"""Deployment configuration: grid geometry, palette, policy, limits.

Defaults: a 7x7 drawing grid inside a 9x8 extended grid (23 extras: 16
color slots for the 8-color palette, 4 technique slots, 3 padding cells),
exact-match threshold, and a minimum of 3 active cells per registered
signature. Loadable from a JSON file; the vault key never lives here, it
arrives via the SUIS_VAULT_KEY environment variable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from .encoding import (
    ColorPalette,
    ExtrasLayout,
    PaletteColor,
    extras_layout,
)
from .errors import ConfigError
from .grid import GridSpec, RasterConfig
from .matching import MatchPolicy

log = logging.getLogger(__name__)

STROKE_FORMAT_VERSION = 1

DEFAULT_PALETTE = ColorPalette(
    (
        PaletteColor(1, "green", "#2e7d32"),
        PaletteColor(2, "red", "#c62828"),
        PaletteColor(3, "blue", "#1565c0"),
        PaletteColor(4, "yellow", "#f9a825"),
        PaletteColor(5, "orange", "#ef6c00"),
        PaletteColor(6, "purple", "#6a1b9a"),
        PaletteColor(7, "white", "#fafafa"),
        PaletteColor(8, "black", "#212121"),
    )
)


@dataclass(frozen=True)
class RateLimitConfig:
    """Fixed-window limits applied per username and per source address."""

    verify_per_window: int = 10
    window_seconds: int = 60

    def __post_init__(self) -> None:
        if self.verify_per_window < 1 or self.window_seconds < 1:
            raise ConfigError("rate limit fields must be positive")


@dataclass(frozen=True)
class SystemConfig:
    config_id: int = 1
    grid: GridSpec = GridSpec(7, 7, 9, 8)
    raster: RasterConfig = RasterConfig()
    palette: ColorPalette = DEFAULT_PALETTE
    technique_count: int = 4
    policy: MatchPolicy = MatchPolicy()
    rate_limit: RateLimitConfig = RateLimitConfig()
    vault_path: str = "suis-vault.db"
    rotate_avoid_repeat: bool = False
    static_dir: str | None = None
    _layout: ExtrasLayout = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0 <= self.config_id <= 255):
            raise ConfigError("config_id must fit one byte")
        if self.technique_count < 1:
            raise ConfigError("at least one storing technique is required")
        if self.palette.size < self.technique_count:
            raise ConfigError(
                "palette size must be >= technique count "
                "(the color shift requires N >= t for every technique)"
            )
        layout = extras_layout(self.grid, self.palette.size, self.technique_count)
        object.__setattr__(self, "_layout", layout)
        if not self.grid.is_standard_drawing_size:
            log.warning(
                "drawing grid %dx%d is outside the standard 5x5..7x7 range",
                self.grid.drawing_cols,
                self.grid.drawing_rows,
            )

    @property
    def layout(self) -> ExtrasLayout:
        return self._layout

    def with_vault_path(self, path: str | Path) -> "SystemConfig":
        return replace(self, vault_path=str(path))

    def public_view(self) -> dict:
        """What the service may reveal: grid size, palette, stroke format.

        Never includes the technique count, the threshold, or raster tuning.
        """
        return {
            "grid": {
                "cols": self.grid.drawing_cols,
                "rows": self.grid.drawing_rows,
            },
            "palette": [
                {"id": c.color_id, "name": c.name, "value": c.value}
                for c in self.palette.colors
            ],
            "stroke_format_version": STROKE_FORMAT_VERSION,
        }

    def to_dict(self) -> dict:
        return {
            "config_id": self.config_id,
            "grid": {
                "drawing_cols": self.grid.drawing_cols,
                "drawing_rows": self.grid.drawing_rows,
                "extended_cols": self.grid.extended_cols,
                "extended_rows": self.grid.extended_rows,
            },
            "raster": {
                "inner_margin": self.raster.inner_margin,
                "sample_threshold": self.raster.sample_threshold,
                "interpolation_step": self.raster.interpolation_step,
            },
            "palette": [
                {"id": c.color_id, "name": c.name, "value": c.value}
                for c in self.palette.colors
            ],
            "technique_count": self.technique_count,
            "policy": {
                "theta": self.policy.theta,
                "min_active_cells": self.policy.min_active_cells,
            },
            "rate_limit": {
                "verify_per_window": self.rate_limit.verify_per_window,
                "window_seconds": self.rate_limit.window_seconds,
            },
            "vault_path": self.vault_path,
            "rotate_avoid_repeat": self.rotate_avoid_repeat,
            "static_dir": self.static_dir,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        try:
            grid = GridSpec(**data["grid"]) if "grid" in data else GridSpec(7, 7, 9, 8)
            raster = RasterConfig(**data.get("raster", {}))
            if "palette" in data:
                palette = ColorPalette(
                    tuple(
                        PaletteColor(c["id"], c["name"], c["value"])
                        for c in data["palette"]
                    )
                )
            else:
                palette = DEFAULT_PALETTE
            policy = MatchPolicy(**data.get("policy", {}))
            rate_limit = RateLimitConfig(**data.get("rate_limit", {}))
            return cls(
                config_id=data.get("config_id", 1),
                grid=grid,
                raster=raster,
                palette=palette,
                technique_count=data.get("technique_count", 4),
                policy=policy,
                rate_limit=rate_limit,
                vault_path=data.get("vault_path", "suis-vault.db"),
                rotate_avoid_repeat=data.get("rotate_avoid_repeat", False),
                static_dir=data.get("static_dir"),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad configuration document: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "SystemConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")
