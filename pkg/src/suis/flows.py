"""Registration and verification pipelines shared by the service and CLI.

Both frontends delegate accept/reject decisions here, so a local vault and
a remote service can never disagree for the same input and configuration.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Sequence

from .encoding import ExtendedMatrix, deserialize, encode_record, pick_technique
from .envelope import SignatureRecordEnvelope, open_envelope
from .errors import (
    DuplicateUserError,
    RecordCorruptionError,
    SuisError,
    UserNotFoundError,
)
from .grid import CellBitmap, Stroke, rasterize
from .matching import verify_match
from .vault import Vault

log = logging.getLogger(__name__)


class SignatureTooSmallError(SuisError):
    """The drawing activates fewer cells than policy allows registering."""

    def __init__(self, active_cells: int, required: int):
        super().__init__(
            f"the drawing covers {active_cells} grid cell(s); at least "
            f"{required} are required, draw a larger or bolder signature"
        )
        self.active_cells = active_cells
        self.required = required


@dataclass(frozen=True)
class RegistrationResult:
    active_cells: int
    technique: int


@dataclass(frozen=True)
class DecoyRecord:
    """Sealed stand-in matched when a username has no profile, keeping the
    unknown-user path's work close to the real one. The outcome is discarded."""

    envelope: SignatureRecordEnvelope
    technique: int


def digitize(strokes: Sequence[Stroke], vault: Vault) -> CellBitmap:
    cfg = vault.config
    return rasterize(strokes, cfg.grid, cfg.raster)


def candidate_matrix(
    strokes: Sequence[Stroke], color_id: int, technique: int, vault: Vault
) -> ExtendedMatrix:
    cfg = vault.config
    bitmap = digitize(strokes, vault)
    return encode_record(
        bitmap, color_id, technique, cfg.layout, cfg.palette, cfg.technique_count
    )


def register_user(
    vault: Vault,
    username: str,
    strokes: Sequence[Stroke],
    color_id: int,
    rng: random.Random | None = None,
) -> RegistrationResult:
    """Digitize, pick a random storing technique, encode, and persist.

    Raises InputError for malformed input, SignatureTooSmallError for
    drawings below the registrable minimum, DuplicateUserError when the
    username is taken.
    """
    cfg = vault.config
    cfg.palette.require_id(color_id)
    bitmap = digitize(strokes, vault)
    active = len(bitmap.active_cells())
    if active < cfg.policy.min_active_cells:
        raise SignatureTooSmallError(active, cfg.policy.min_active_cells)
    with vault.user_lock(username):
        if vault.exists(username):
            raise DuplicateUserError(f"username {username!r} already registered")
        technique = pick_technique(cfg.technique_count, rng)
        matrix = encode_record(
            bitmap, color_id, technique, cfg.layout, cfg.palette, cfg.technique_count
        )
        vault.put_signature(username, matrix, technique)
    return RegistrationResult(active_cells=active, technique=technique)


def verify_user(
    vault: Vault,
    username: str,
    strokes: Sequence[Stroke],
    color_id: int,
    rng: random.Random | None = None,
    decoy: DecoyRecord | None = None,
    key: bytes | None = None,
) -> bool:
    """Two-stage match against the stored record; rotate technique on success.

    Every failure cause (unknown user, metadata mismatch, low similarity,
    corrupt record) collapses to a plain False; callers must not be able to
    tell them apart. The user lock spans load, match, and rotation so a
    concurrent rotation cannot interleave.
    """
    cfg = vault.config
    cfg.palette.require_id(color_id)
    with vault.user_lock(username):
        try:
            stored, technique = vault.get_signature(username)
        except UserNotFoundError:
            if decoy is not None and key is not None:
                payload = open_envelope(decoy.envelope, key)
                decoy_stored = deserialize(payload, decoy.technique, cfg.grid)
                candidate = candidate_matrix(strokes, color_id, decoy.technique, vault)
                verify_match(candidate, decoy_stored, cfg.policy)
            else:
                # Still digitize, so the cheap path does the heavy part too.
                digitize(strokes, vault)
            return False
        except RecordCorruptionError:
            log.exception("corrupt record while verifying %r", username)
            return False
        candidate = candidate_matrix(strokes, color_id, technique, vault)
        outcome = verify_match(candidate, stored, cfg.policy)
        if not outcome.accepted:
            return False
        vault.rotate_technique(username, rng)
    return True
