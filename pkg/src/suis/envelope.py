"""Encrypted record envelope: the at-rest wrapper around a serialized matrix.

Wire format (bit-exact):

    magic "SUIS" | version u8 | spec-config id u8 | technique id u8 |
    nonce length u8 | nonce | ciphertext length u32be | ciphertext | tag

Encryption is AES-256-GCM with a fresh random 96-bit nonce per seal. The
header bytes (everything before the ciphertext length) are bound as
associated data, so modifying any envelope byte fails the integrity check.
The ciphertext length excludes the 16-byte tag that trails it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import ConfigError, IntegrityError, InputError, MalformedRecordError

MAGIC = b"SUIS"
FORMAT_VERSION = 1
KEY_BYTES = 32
NONCE_BYTES = 12  # 96 bits, the recommended GCM nonce size
TAG_BYTES = 16

VAULT_KEY_ENV = "SUIS_VAULT_KEY"


def load_vault_key(environ: dict[str, str] | None = None) -> bytes:
    """Read the vault key from SUIS_VAULT_KEY (64 hex chars); absence is fatal."""
    env = os.environ if environ is None else environ
    raw = env.get(VAULT_KEY_ENV)
    if not raw:
        raise ConfigError(f"{VAULT_KEY_ENV} is not set; the vault cannot start")
    try:
        key = bytes.fromhex(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{VAULT_KEY_ENV} is not valid hex") from exc
    if len(key) != KEY_BYTES:
        raise ConfigError(
            f"{VAULT_KEY_ENV} must encode {KEY_BYTES} bytes, got {len(key)}"
        )
    return key


@dataclass(frozen=True)
class SignatureRecordEnvelope:
    version: int
    spec_ref: int
    technique: int
    nonce: bytes
    ciphertext: bytes  # ciphertext body, tag excluded
    auth_tag: bytes

    def header_bytes(self) -> bytes:
        for name, value in (
            ("version", self.version),
            ("spec_ref", self.spec_ref),
            ("technique", self.technique),
        ):
            if not (0 <= value <= 255):
                raise InputError(f"envelope {name} must fit one byte")
        if len(self.nonce) > 255:
            raise InputError("nonce longer than 255 bytes")
        return (
            MAGIC
            + bytes((self.version, self.spec_ref, self.technique, len(self.nonce)))
            + self.nonce
        )

    def to_bytes(self) -> bytes:
        return (
            self.header_bytes()
            + len(self.ciphertext).to_bytes(4, "big")
            + self.ciphertext
            + self.auth_tag
        )

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SignatureRecordEnvelope":
        if len(blob) < len(MAGIC) + 4:
            raise MalformedRecordError("envelope too short for its header")
        if blob[: len(MAGIC)] != MAGIC:
            raise MalformedRecordError("bad envelope magic")
        pos = len(MAGIC)
        version, spec_ref, technique, nonce_len = blob[pos : pos + 4]
        pos += 4
        if len(blob) < pos + nonce_len + 4:
            raise MalformedRecordError("envelope truncated inside the nonce")
        nonce = blob[pos : pos + nonce_len]
        pos += nonce_len
        ct_len = int.from_bytes(blob[pos : pos + 4], "big")
        pos += 4
        if len(blob) != pos + ct_len + TAG_BYTES:
            raise MalformedRecordError("envelope length disagrees with its fields")
        ciphertext = blob[pos : pos + ct_len]
        auth_tag = blob[pos + ct_len :]
        return cls(version, spec_ref, technique, nonce, ciphertext, auth_tag)


def seal(
    payload: bytes,
    key: bytes,
    *,
    spec_ref: int,
    technique: int,
    version: int = FORMAT_VERSION,
) -> SignatureRecordEnvelope:
    """Authenticated-encrypt a serialized record with a fresh random nonce."""
    if not payload:
        raise InputError("refusing to seal an empty payload")
    if len(key) != KEY_BYTES:
        raise ConfigError(f"vault key must be {KEY_BYTES} bytes")
    nonce = os.urandom(NONCE_BYTES)
    env = SignatureRecordEnvelope(version, spec_ref, technique, nonce, b"", b"")
    sealed = AESGCM(key).encrypt(nonce, payload, env.header_bytes())
    return SignatureRecordEnvelope(
        version, spec_ref, technique, nonce, sealed[:-TAG_BYTES], sealed[-TAG_BYTES:]
    )


def open_envelope(env: SignatureRecordEnvelope, key: bytes) -> bytes:
    """Recover the payload; any modified byte or wrong key fails integrity."""
    if len(key) != KEY_BYTES:
        raise ConfigError(f"vault key must be {KEY_BYTES} bytes")
    try:
        return AESGCM(key).decrypt(
            env.nonce, env.ciphertext + env.auth_tag, env.header_bytes()
        )
    except InvalidTag as exc:
        raise IntegrityError("envelope failed integrity verification") from exc
