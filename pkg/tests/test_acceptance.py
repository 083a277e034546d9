"""Acceptance gate: one test per release criterion.

Each criterion is a single test whose verbose-run line is its pass/fail
verdict; a PASS line is also printed for log scrapes. Tolerances are fixed
here and nowhere else: statistical checks use seeded generators and a
three-standard-error band, everything else is exact.
"""

from __future__ import annotations

import dataclasses
import math
import os
import random

import pytest
from fastapi.testclient import TestClient

from suis.analysis import (
    exhaustive_guess_far,
    format_space_report,
    password_space,
    random_guess_far,
)
from suis.encoding import (
    ExtendedMatrix,
    color_offset,
    deserialize,
    encode_color,
    extras_in_reading_order,
    extras_layout,
    place_record,
    serialize,
)
from suis.envelope import open_envelope, seal
from suis.errors import IntegrityError
from suis.grid import CellBitmap, GridSpec
from suis.matching import MatchPolicy, similarity, verify_match
from suis.service import NEGATIVE_BODY, POSITIVE_BODY, create_app
from suis.config import RateLimitConfig, SystemConfig
from tests.conftest import SIGNATURE_CELLS, jittered, strokes_for_cells


def report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


def test_criterion_layout_fidelity():
    # 8x5 drawing extended to 10x6; 16 color slots + 4 technique slots fill
    # the 20 extras exactly. Stored-color 7 with technique 1 must set
    # exactly (9,4) and (7,6) and nothing else outside the drawing region.
    spec = GridSpec(8, 5, 10, 6)
    layout = extras_layout(spec, palette_size=8, technique_count=4)
    bitmap = CellBitmap.from_active_cells(8, 5, [(1, 1), (4, 3), (8, 5)])
    matrix = place_record(bitmap, stored_color=7, technique=1, layout=layout)

    metadata_ones = [
        cell for cell in extras_in_reading_order(spec) if matrix.value_at(*cell)
    ]
    assert metadata_ones == [(9, 4), (7, 6)]
    assert matrix.drawing_bitmap() == bitmap
    report("layout-fidelity")


def test_criterion_color_formula():
    assert encode_color(1, 16, 3) == 7  # 1 + ceil(16/3) = 7
    for n in (1, 2, 4, 8, 16, 100):
        assert color_offset(n, 1) == n
        assert color_offset(n, n) == 1
        assert encode_color(1, n, 1) == 1 + n
        assert encode_color(1, n, n) == 2
    report("color-formula")


def test_criterion_password_space():
    small = password_space(25, 8, 4)
    assert small.bitmap_space == 33_554_432 == 2**25
    assert small.bitmap_space > 10**7

    large = password_space(49, 8, 4)
    assert large.bitmap_space == 562_949_953_421_312 == 2**49
    # 2^49 is below 10*10^14; the report states the true decade bounds
    # instead of repeating that comparison.
    assert large.bitmap_space < 10 * 10**14
    assert "10^14 <= 2^49 < 10^15" in format_space_report(large)
    report("password-space")


def test_criterion_round_trip():
    spec = SystemConfig().grid  # 9x8 extended
    rng = random.Random(20260814)
    total = spec.extended_cells
    for _ in range(1000):
        pattern = rng.getrandbits(total)
        matrix = ExtendedMatrix(
            spec, tuple((pattern >> i) & 1 for i in range(total))
        )
        for technique in (1, 2, 3, 4):
            assert deserialize(serialize(matrix, technique), technique, spec) == matrix

    tiny = GridSpec(3, 3, 4, 3)
    for pattern in range(512):
        bits = [0] * tiny.extended_cells
        for i in range(9):
            col, row = i % 3, i // 3
            bits[row * 4 + col] = (pattern >> i) & 1
        matrix = ExtendedMatrix(tiny, tuple(bits))
        assert deserialize(serialize(matrix, 1), 1, tiny) == matrix
    report("round-trip")


def test_criterion_matching_semantics():
    def bm(*cells):
        return CellBitmap.from_active_cells(7, 7, cells)

    identical = bm((1, 1), (2, 2), (3, 3))
    assert similarity(identical, identical) == 1.0
    assert similarity(bm((1, 1), (2, 2)), bm((3, 3), (4, 4))) == 0.0
    # 3 cells vs 3 cells with 2 shared: 2 / 4.
    assert similarity(bm((1, 1), (2, 2), (3, 3)), bm((1, 1), (2, 2), (4, 4))) == 0.5

    layout = extras_layout(GridSpec(7, 7, 9, 8), 8, 4)
    stored = place_record(identical, 9, 2, layout)
    wrong_metadata = place_record(identical, 10, 2, layout)
    for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
        outcome = verify_match(wrong_metadata, stored, MatchPolicy(theta=theta))
        assert not outcome.accepted
    report("matching-semantics")


def test_criterion_random_guess_far():
    spec = GridSpec(3, 3, 4, 3)
    stored = CellBitmap.from_active_cells(3, 3, [(1, 1), (2, 2), (3, 1)])
    expected = 1.0 / 512.0

    estimate = random_guess_far(
        spec, MatchPolicy(), 200_000, random.Random(20260814), stored
    )
    tolerance = 3 * math.sqrt(expected * (1 - expected) / 200_000)
    assert abs(estimate.rate - expected) <= tolerance, (
        f"rate {estimate.rate} outside {expected} +- {tolerance}"
    )

    accepted, total = exhaustive_guess_far(spec, MatchPolicy(), stored)
    assert (accepted, total) == (1, 512)
    report("random-guess-far")


def test_criterion_crypto_at_rest():
    key = bytes(range(32))
    spec = GridSpec(7, 7, 9, 8)
    layout = extras_layout(spec, 8, 4)
    bitmap = CellBitmap.from_active_cells(7, 7, [(1, 1), (2, 2), (3, 3)])
    payload = serialize(place_record(bitmap, 9, 1, layout), 1)
    env = seal(payload, key, spec_ref=1, technique=1)

    # Every single-bit flip anywhere in the ciphertext must fail.
    failures = 0
    flips = 0
    for byte_index in range(len(env.ciphertext)):
        for bit in range(8):
            mutated = bytearray(env.ciphertext)
            mutated[byte_index] ^= 1 << bit
            tampered = dataclasses.replace(env, ciphertext=bytes(mutated))
            flips += 1
            with pytest.raises(IntegrityError):
                open_envelope(tampered, key)
            failures += 1
    assert failures == flips == len(env.ciphertext) * 8

    rng = random.Random(7)
    for _ in range(1000):
        blob = bytes(rng.getrandbits(8) for _ in range(rng.randint(1, 64)))
        assert open_envelope(seal(blob, key, spec_ref=1, technique=2), key) == blob

    again = seal(payload, key, spec_ref=1, technique=1)
    assert again.ciphertext != env.ciphertext
    assert again.nonce != env.nonce
    report("crypto-at-rest")


def test_criterion_end_to_end_service(tmp_path):
    key = bytes.fromhex(os.environ.get("SUIS_VAULT_KEY", "") or "5a" * 32)
    config = SystemConfig(
        vault_path=str(tmp_path / "acceptance.db"),
        rate_limit=RateLimitConfig(verify_per_window=1000),
    )
    client = TestClient(create_app(config, key=key, rng=random.Random(99)))
    strokes = strokes_for_cells(SIGNATURE_CELLS, config.grid, config.raster)

    def body(username, stroke_set, color):
        return {
            "username": username,
            "strokes": [
                [{"x": p.x, "y": p.y} for p in s.points] for s in stroke_set
            ],
            "color_id": color,
        }

    assert (
        client.post("/api/v1/register", json=body("alice", strokes, 3)).status_code
        == 201
    )

    # (a) identical strokes authenticate.
    first = client.post("/api/v1/verify", json=body("alice", strokes, 3))
    assert first.content == POSITIVE_BODY

    # Rotation happened on success; the same input must still authenticate.
    assert (
        client.post("/api/v1/verify", json=body("alice", strokes, 3)).content
        == POSITIVE_BODY
    )

    # (b) jitter below the cell inner area authenticates at theta = 1.0.
    wobbly = jittered(strokes, random.Random(5), config.grid)
    assert (
        client.post("/api/v1/verify", json=body("alice", wobbly, 3)).content
        == POSITIVE_BODY
    )

    # (c) same strokes, different color: rejected.
    wrong_color = client.post("/api/v1/verify", json=body("alice", strokes, 4))
    assert wrong_color.content == NEGATIVE_BODY

    # (d) unknown user: byte-identical negative body to (c).
    unknown = client.post("/api/v1/verify", json=body("ghost", strokes, 3))
    assert unknown.content == wrong_color.content == NEGATIVE_BODY
    report("end-to-end-service")
