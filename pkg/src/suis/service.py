"""Online authentication service: register, verify, public config.

Three JSON endpoints under /api/v1. The client only ever sends raw
normalized strokes plus a color choice; digitization, encoding, matching,
and rotation all happen server-side. Negative verification responses are a
single constant byte string for every failure cause (unknown user, wrong
metadata, low similarity, corrupt record), so the wire carries no oracle.
On every successful verification the stored record is re-encoded under a
freshly drawn storing technique.
"""

from __future__ import annotations

import logging
import random
import threading
import time
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import SystemConfig
from .encoding import encode_record, pick_technique, serialize
from .envelope import load_vault_key, seal
from .errors import (
    ConfigError,
    DuplicateUserError,
    InputError,
    RecordCorruptionError,
    StorageError,
)
from .flows import DecoyRecord, SignatureTooSmallError, register_user, verify_user
from .grid import CellBitmap, Stroke
from .vault import Vault

log = logging.getLogger(__name__)

MAX_USERNAME_LEN = 64

# Exact response bodies; negatives must be byte-identical across causes.
POSITIVE_BODY = b'{"authenticated":true}'
NEGATIVE_BODY = b'{"authenticated":false}'

_SYSTEM_RNG = random.SystemRandom()


class PointIn(BaseModel):
    x: float
    y: float


class AuthRequest(BaseModel):
    username: str = Field(min_length=1, max_length=MAX_USERNAME_LEN)
    strokes: list[list[PointIn]] = Field(min_length=1)
    color_id: int


class FixedWindowLimiter:
    """Fixed-window counters keyed by arbitrary strings; thread-safe."""

    def __init__(self, limit: int, window_seconds: int, clock: Callable[[], float] = time.time):
        self.limit = limit
        self.window_seconds = window_seconds
        self.clock = clock
        self._counts: dict[str, tuple[int, int]] = {}
        self._mutex = threading.Lock()

    def allow(self, key: str) -> bool:
        window = int(self.clock() // self.window_seconds)
        with self._mutex:
            seen_window, count = self._counts.get(key, (window, 0))
            if seen_window != window:
                count = 0
            count += 1
            self._counts[key] = (window, count)
            return count <= self.limit


def build_decoy(config: SystemConfig, key: bytes, rng: random.Random) -> DecoyRecord:
    cells: set[tuple[int, int]] = set()
    while len(cells) < config.policy.min_active_cells:
        cells.add(
            (
                rng.randint(1, config.grid.drawing_cols),
                rng.randint(1, config.grid.drawing_rows),
            )
        )
    bitmap = CellBitmap.from_active_cells(
        config.grid.drawing_cols, config.grid.drawing_rows, cells
    )
    technique = pick_technique(config.technique_count, rng)
    matrix = encode_record(
        bitmap, 1, technique, config.layout, config.palette, config.technique_count
    )
    envelope = seal(
        serialize(matrix, technique),
        key,
        spec_ref=config.config_id,
        technique=technique,
    )
    return DecoyRecord(envelope=envelope, technique=technique)


def _parse_strokes(raw: list[list[PointIn]]) -> list[Stroke]:
    return [Stroke.of((p.x, p.y) for p in stroke) for stroke in raw]


def _error(status: int, message: str, **extra: object) -> JSONResponse:
    body: dict[str, object] = {"error": message}
    body.update(extra)
    return JSONResponse(status_code=status, content=body)


def create_app(
    config: SystemConfig,
    key: bytes | None = None,
    rng: random.Random | None = None,
) -> FastAPI:
    """Build the service around one configuration, vault, and key."""
    if key is None:
        key = load_vault_key()
    rng = rng or _SYSTEM_RNG
    vault = Vault(config.vault_path, key, config)
    limiter = FixedWindowLimiter(
        config.rate_limit.verify_per_window, config.rate_limit.window_seconds
    )
    decoy = build_decoy(config, key, rng)

    app = FastAPI(title="signature authentication service", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.vault = vault
    app.state.limiter = limiter

    @app.get("/api/v1/config")
    def handle_config() -> dict:
        return config.public_view()

    @app.post("/api/v1/register")
    def handle_register(req: AuthRequest) -> Response:
        try:
            result = register_user(
                vault, req.username, _parse_strokes(req.strokes), req.color_id, rng
            )
        except SignatureTooSmallError as exc:
            return _error(400, "signature rejected", hint=str(exc))
        except DuplicateUserError:
            return _error(409, "username already registered")
        except InputError as exc:
            return _error(422, str(exc))
        except StorageError:
            log.exception("registration write failed for %r", req.username)
            return _error(500, "internal error")
        return JSONResponse(
            status_code=201,
            content={"created": True, "active_cells": result.active_cells},
        )

    @app.post("/api/v1/verify")
    def handle_verify(req: AuthRequest, request: Request) -> Response:
        source = request.client.host if request.client else "unknown"
        if not limiter.allow(f"user:{req.username}") or not limiter.allow(f"src:{source}"):
            return _error(429, "too many attempts, retry later")
        try:
            authenticated = verify_user(
                vault,
                req.username,
                _parse_strokes(req.strokes),
                req.color_id,
                rng,
                decoy=decoy,
                key=key,
            )
        except InputError as exc:
            return _error(422, str(exc))
        except RecordCorruptionError:
            log.exception("record corruption while verifying %r", req.username)
            authenticated = False
        except StorageError:
            log.exception("storage failure while verifying %r", req.username)
            return _error(500, "internal error")
        body = POSITIVE_BODY if authenticated else NEGATIVE_BODY
        return Response(content=body, media_type="application/json")

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def app_from_files(config_path: str | None = None) -> FastAPI:
    """Entry point for process runners: config from file, key from env."""
    config = SystemConfig.load(config_path) if config_path else SystemConfig()
    try:
        return create_app(config)
    except ConfigError:
        log.exception("service cannot start")
        raise
