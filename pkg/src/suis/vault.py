"""Encrypted signature store: profiles, sealed records, technique rotation.

One sqlite row per user holds the profile fields and the sealed envelope
together, so registration and rotation are single atomic writes and no
reader can ever observe a profile pointing at a missing or half-written
record. Writes to one user are serialized by a per-user lock; reads and
other users proceed concurrently.
"""

from __future__ import annotations

import logging
import random
import sqlite3
import threading
from contextlib import closing, contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .config import SystemConfig
from .encoding import (
    ExtendedMatrix,
    decode_color,
    decode_record,
    encode_color,
    pick_technique,
    place_record,
    serialize,
    deserialize,
    validate_technique,
)
from .envelope import SignatureRecordEnvelope, open_envelope, seal
from .errors import (
    StorageError,
    TechniqueMismatchError,
    UserNotFoundError,
)

log = logging.getLogger(__name__)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS profiles (
    username   TEXT PRIMARY KEY,
    technique  INTEGER NOT NULL,
    spec_ref   INTEGER NOT NULL,
    created_at TEXT NOT NULL,
    updated_at TEXT NOT NULL,
    envelope   BLOB NOT NULL
)
"""


@dataclass(frozen=True)
class UserProfile:
    username: str
    technique: int
    spec_ref: int
    created_at: str
    updated_at: str


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


class Vault:
    """Signature persistence bound to one configuration and one key."""

    def __init__(self, path: str | Path, key: bytes, config: SystemConfig):
        self.path = str(path)
        self._key = key
        self.config = config
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()
        self._init_schema()

    def _init_schema(self) -> None:
        try:
            with closing(self._connect()) as conn, conn:
                conn.execute(_SCHEMA)
        except sqlite3.Error as exc:
            raise StorageError(f"cannot open vault at {self.path}: {exc}") from exc

    def _connect(self) -> sqlite3.Connection:
        return sqlite3.connect(self.path)

    @contextmanager
    def user_lock(self, username: str):
        """Serialize operations touching one user; reentrant within a thread."""
        with self._locks_guard:
            lock = self._locks.setdefault(username, threading.RLock())
        with lock:
            yield

    # -- profile/record access -------------------------------------------

    def exists(self, username: str) -> bool:
        with closing(self._connect()) as conn:
            row = conn.execute(
                "SELECT 1 FROM profiles WHERE username = ?", (username,)
            ).fetchone()
        return row is not None

    def get_profile(self, username: str) -> UserProfile:
        with closing(self._connect()) as conn:
            row = conn.execute(
                "SELECT username, technique, spec_ref, created_at, updated_at "
                "FROM profiles WHERE username = ?",
                (username,),
            ).fetchone()
        if row is None:
            raise UserNotFoundError(f"no profile for {username!r}")
        return UserProfile(*row)

    def get_envelope(self, username: str) -> SignatureRecordEnvelope:
        with closing(self._connect()) as conn:
            row = conn.execute(
                "SELECT envelope FROM profiles WHERE username = ?", (username,)
            ).fetchone()
        if row is None:
            raise UserNotFoundError(f"no profile for {username!r}")
        return SignatureRecordEnvelope.from_bytes(row[0])

    def put_signature(self, username: str, matrix: ExtendedMatrix, technique: int) -> UserProfile:
        """Serialize, seal, and persist; replaces any prior record atomically."""
        validate_technique(technique, self.config.technique_count)
        payload = serialize(matrix, technique)
        env = seal(
            payload,
            self._key,
            spec_ref=self.config.config_id,
            technique=technique,
        )
        now = _now()
        with self.user_lock(username):
            try:
                with closing(self._connect()) as conn, conn:
                    conn.execute(
                        "INSERT INTO profiles "
                        "(username, technique, spec_ref, created_at, updated_at, envelope) "
                        "VALUES (?, ?, ?, ?, ?, ?) "
                        "ON CONFLICT(username) DO UPDATE SET "
                        "technique = excluded.technique, "
                        "spec_ref = excluded.spec_ref, "
                        "updated_at = excluded.updated_at, "
                        "envelope = excluded.envelope",
                        (username, technique, self.config.config_id, now, now, env.to_bytes()),
                    )
            except sqlite3.Error as exc:
                raise StorageError(f"cannot persist record for {username!r}: {exc}") from exc
            return self.get_profile(username)

    def get_signature(self, username: str) -> tuple[ExtendedMatrix, int]:
        """Open and decode a user's record, cross-checking every technique copy.

        The technique is stored three ways: in the profile row, in the clear
        envelope header, and as a slot inside the encrypted matrix. Any
        disagreement is a corruption error, never silently resolved.
        """
        with self.user_lock(username):
            profile = self.get_profile(username)
            env = self.get_envelope(username)
        if env.spec_ref != self.config.config_id:
            raise TechniqueMismatchError(
                f"record for {username!r} was made under configuration "
                f"{env.spec_ref}, expected {self.config.config_id}"
            )
        if env.technique != profile.technique:
            raise TechniqueMismatchError(
                f"profile says technique {profile.technique} but the envelope "
                f"says {env.technique}"
            )
        payload = open_envelope(env, self._key)
        matrix = deserialize(payload, profile.technique, self.config.grid)
        decoded = decode_record(matrix, self.config.layout)
        if decoded.technique != profile.technique:
            raise TechniqueMismatchError(
                f"profile says technique {profile.technique} but the record "
                f"embeds {decoded.technique}"
            )
        return matrix, profile.technique

    def rotate_technique(self, username: str, rng: random.Random | None = None) -> int:
        """Re-encode the record under a freshly drawn technique.

        The drawing bitmap and the user's selected color are preserved
        exactly; the stored color value is recomputed because the shift
        depends on the technique. A failure anywhere leaves the previous
        record untouched.
        """
        cfg = self.config
        with self.user_lock(username):
            matrix, old_technique = self.get_signature(username)
            decoded = decode_record(matrix, cfg.layout)
            color_id = decode_color(decoded.stored_color, cfg.palette.size, old_technique)
            new_technique = pick_technique(cfg.technique_count, rng)
            if cfg.rotate_avoid_repeat and cfg.technique_count > 1:
                while new_technique == old_technique:
                    new_technique = pick_technique(cfg.technique_count, rng)
            stored = encode_color(color_id, cfg.palette.size, new_technique)
            new_matrix = place_record(decoded.bitmap, stored, new_technique, cfg.layout)
            self.put_signature(username, new_matrix, new_technique)
            log.info("rotated technique for %r: %d -> %d", username, old_technique, new_technique)
            return new_technique
